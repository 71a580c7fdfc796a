#pragma once

// JSON run configurations: strict schema, errors carry the source line.

#include "icelab/experiments.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace icelab::cli {

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class JobKind { model, variance_scaling, height_gibbs, at_selfdual, qb_interpolation, arrow_bias };

struct Budget {
    int max_N = 64;
    long max_sweeps = 1000000;
};

struct JobConfig {
    JobKind kind = JobKind::model;
    RunSpec run;
    VarianceScalingConfig variance;
    HeightGibbsConfig gibbs;
    AtSelfdualConfig at;
    QbInterpolationConfig qb;
    ArrowBiasConfig arrows;
    std::string output;    // empty: stdout
    std::string snapshot;  // model jobs only; empty: none
};

struct Overrides {
    std::optional<std::uint64_t> seed;
    int threads = 0;
};

// `source` names the text in messages ("<file>:<line>: <field>: <problem>").
JobConfig parse_config(const std::string& text, const std::string& source, const Overrides& o = {});
JobConfig load_config(const std::string& path, const Overrides& o = {});

std::vector<ResultRow> run_job(const JobConfig& job);

}  // namespace icelab::cli
