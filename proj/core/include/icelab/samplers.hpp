#pragma once

#include "icelab/bkw.hpp"
#include "icelab/random_cluster.hpp"
#include "icelab/representations.hpp"
#include "icelab/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace icelab {

struct ChainSpec {
    std::uint64_t seed = 1;
    long sweeps = 1000;
    long burn_in = 100;
    long thinning = 1;
    std::string initial_state = "flat";  // heights: flat; rc: closed | open
    void validate() const;
};

struct EstimateWithError {
    double mean = 0;
    double stderr_ = 0;
    int n_batches = 0;
    double tau_int = 0;
};

// Batch means over consecutive blocks; trailing samples that do not fill a batch are dropped.
EstimateWithError batch_means(const std::vector<double>& series, int batches = 32);
// Integrated autocorrelation time, window up to max_lag (default n/100).
double integrated_autocorrelation(const std::vector<double>& series, long max_lag = -1);

// Single-face heat bath on heights with a fixed boundary; raster sweep order.
class HeightChain {
public:
    HeightChain(HeightFunction start, const ModelParams& p, WeightMode mode, std::vector<Face> pinned = {});

    void sweep(Rng& rng);
    // Resample face k from its conditional (k an inner, unpinned face).
    void update(int k, Rng& rng);
    const HeightFunction& state() const { return h_; }
    HeightFunction& state() { return h_; }
    // Conditional probability that face k takes value w+1 when its four neighbours equal w.
    double up_probability(int k) const;

private:
    HeightFunction h_;
    ModelParams p_;
    WeightMode mode_;
    std::vector<int> sites_;  // update order
    double vertex_weight(int v, int k, int value) const;
};

// Single-edge heat bath for the random-cluster measure with boundary-cluster weight.
class RcChain {
public:
    RcChain(const Graph& g, EdgeBits start, const RcParams& P);

    void sweep(Rng& rng);
    void update(int e, Rng& rng);
    double open_probability(int e);
    const EdgeBits& state() const { return open_; }
    EdgeBits& state() { return open_; }

private:
    const Graph* g_;
    RcParams P_;
    EdgeBits open_;
    std::vector<int> offset_, nbr_, nbr_edge_;
    std::vector<std::uint32_t> mark_;
    std::uint32_t stamp_ = 0;
    std::vector<int> qa_, qb_;
    // explores from v avoiding edge e until a boundary vertex is seen or the cluster ends
    bool reaches_boundary(int v, int e);
};

// Composite sampler for the coupling: RC chain on D•, heights drawn from the tree law.
class CouplingChain {
public:
    CouplingChain(GeometryPtr g, const CouplingParams& p, CouplingPart part, EdgeBits start);
    void sweep(Rng& rng);
    const EdgeBits& eta() const { return rc_.state(); }
    TreeLaw law() const;
    HeightFunction sample_heights(Rng& rng) const;

private:
    GeometryPtr g_;
    CouplingParams p_;
    CouplingPart part_;
    RcChain rc_;
    std::vector<char> forced_;
};

// Total variation distance between two probability vectors.
double total_variation(const std::vector<double>& p, const std::vector<double>& q);

}  // namespace icelab
