#pragma once

#include "icelab/bkw.hpp"
#include "icelab/fk_ising_at.hpp"
#include "icelab/samplers.hpp"
#include "icelab/snapshot.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace icelab {

// One CSV line; the column order is fixed.
struct ResultRow {
    std::string experiment;
    int N = 0;
    double a = 0, b = 0, c = 0;
    double c_b_or_qb = 0;
    double J = 0, U = 0;
    std::uint64_t seed = 0;
    long sweeps = 0;
    std::string observable;
    double estimate = 0, stderr_ = 0, tau_int = 0;
};

extern const char* const kCsvHeader;
void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const ResultRow& r);
void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);

// Worker count from an explicit request, else ICELAB_THREADS, else 1.
int resolve_threads(int requested);

// Runs fn(0..n-1) on up to `threads` workers. Results must be written by index, so output order
// never depends on scheduling.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

// Weighted least squares y = α + β x with known standard errors.
struct LinearFit {
    double intercept = 0, slope = 0;
    double slope_stderr = 0;
    double lo = 0, hi = 0;  // 95% interval for the slope
    bool contains_zero() const { return lo <= 0 && 0 <= hi; }
};
LinearFit weighted_fit(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& se);

// Jackknife over consecutive batches for a smooth function of several running means.
EstimateWithError jackknife(const std::vector<std::vector<double>>& series,
                            const std::function<double(const std::vector<double>&)>& f, int batches = 32);

// ------------------------------------------------------------------ variance scaling

struct VarianceScalingConfig {
    std::vector<double> c_list{2, 3};
    std::vector<int> N_list{8, 16, 32, 64};
    double a = 1, b = 1;
    ChainSpec chain;
    int sample_every = 5;
    int threads = 0;
};

struct VarianceScalingResult {
    std::vector<ResultRow> rows;
    std::map<double, LinearFit> fits;                            // per c: Var against log N
    std::map<std::pair<double, int>, EstimateWithError> variance;  // (c, N)
};

// Var h(0,0) under HF^{0,1} on Λ_N, estimated through the coupling: an RC chain on D• with the
// conditional moments of the height given η averaged along the chain.
VarianceScalingResult experiment_variance_scaling(const VarianceScalingConfig& cfg);

// ------------------------------------------------------------------ height Gibbs diagnostics

struct HeightGibbsConfig {
    double a = 1, b = 1, c = 3;
    int N = 32;
    ChainSpec chain;
    int threads = 0;
};
std::vector<ResultRow> experiment_height_gibbs(const HeightGibbsConfig& cfg);

// ------------------------------------------------------------------ Ashkin–Teller

struct AtSelfdualConfig {
    std::vector<double> J_list{0.2};
    int half_width = 24;  // square of side 2·half_width+1 faces
    std::vector<int> distances{2, 4, 6, 8, 10, 12, 14, 16};
    ChainSpec chain;
    int threads = 0;
};

struct AtCorrelations {
    double J = 0;
    std::vector<int> distance;
    std::vector<EstimateWithError> tau_direct, tau_connect, product;
    LinearFit decay;             // log τ-correlation against distance; rate α = -slope
    double max_estimator_z = 0;  // largest |direct - connectivity| / combined stderr
};

struct AtSelfdualResult {
    std::vector<ResultRow> rows;
    std::vector<AtCorrelations> per_J;
};

AtSelfdualResult experiment_at_selfdual(const AtSelfdualConfig& cfg);

// ------------------------------------------------------------------ q_b interpolation

struct QbInterpolationConfig {
    double q = 9;
    std::vector<double> q_b_list;  // empty: {1, e^{-λ}√q, e^{λ}√q, q} for q > 4, {1, √q, q} otherwise
    int N = 32;
    ChainSpec chain;
    int threads = 0;
};

struct QbPoint {
    double q_b = 0;
    EstimateWithError bulk_density, edge_density, center_to_boundary;
};

struct QbInterpolationResult {
    std::vector<ResultRow> rows;
    std::vector<QbPoint> points;
};

QbInterpolationResult experiment_qb_interpolation(const QbInterpolationConfig& cfg);
std::vector<double> default_qb_list(double q);

// ------------------------------------------------------------------ arrows

struct ArrowBiasConfig {
    double a = 1, b = 1, c = 3;
    int N = 32;
    ChainSpec chain;
    int threads = 0;
};
std::vector<ResultRow> experiment_arrow_bias(const ArrowBiasConfig& cfg);

// ------------------------------------------------------------------ generic chains

enum class ModelKind { heights, spins, rc, coupling, at };
ModelKind parse_model_kind(const std::string& s);

struct DomainSpec {
    std::string shape = "diamond";  // diamond | square | rectangle
    int N = 8;                      // diamond N, square half-width
    int width = 0, height = 0;      // rectangle
    Face center{};
    Domain build() const;
};

struct RunSpec {
    ModelKind model = ModelKind::heights;
    ModelParams params;
    WeightMode mode = WeightMode::plain;
    RcParams rc;
    double J = 0;
    DomainSpec domain;
    int boundary_n = 0;
    ChainSpec chain;
    std::vector<std::string> observables;
    int chains = 1;  // independent replicas, seeds derived from chain.seed
    int threads = 0;
    // Receives the final state of replica 0: heights for heights/at, spins for spins, η for rc/coupling.
    std::function<void(const Snapshot&)> on_final;
};

// Thrown for observables a model cannot provide.
class ObservableError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::vector<ResultRow> run_chain(const RunSpec& spec);

}  // namespace icelab
