#pragma once

// Named batteries of exact checks shared by `icelab oracle` and the acceptance binary.

#include "icelab/lattice.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace icelab::oracle {

struct ReportLine {
    std::string identity;
    std::string domain;
    std::string params;
    bool pass = true;
    bool asserted = true;  // false for exploratory lines; they never fail a suite
    double max_deviation = 0;
    std::string witness;
};

struct SuiteReport {
    std::string name;
    std::vector<ReportLine> lines;
    double seconds = 0;

    bool pass() const;
    int failures() const;
    // lines whose identity starts with the prefix
    std::vector<ReportLine> select(const std::string& prefix) const;
    bool pass(const std::string& prefix) const;
};

const std::vector<std::string>& suite_names();
SuiteReport run_suite(const std::string& name);  // throws OracleError for unknown names

std::string describe(const Domain& d, const std::string& name);
void write_report(std::ostream& os, const SuiteReport& r);

}  // namespace icelab::oracle
