#pragma once

#include "config.hpp"

#include <iosfwd>
#include <string>

namespace icelab::cli {

enum ExitCode : int { ok = 0, validation = 1, oracle_failure = 2 };

struct Options {
    Overrides overrides;
    std::string out;  // overrides the config's output path; for oracle/snapshot: report file
};

int cmd_run(const std::string& config_path, const Options& opt, std::ostream& out, std::ostream& err);
int cmd_oracle(const std::string& suite, const Options& opt, std::ostream& out, std::ostream& err);
int cmd_snapshot(const std::string& state_path, const Options& opt, std::ostream& out, std::ostream& err);

}  // namespace icelab::cli
