#pragma once

#include "icelab/random_cluster.hpp"
#include "icelab/representations.hpp"
#include "icelab/rng.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace icelab {

class FkError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AtParams {
    double J = 0, U = 0;
    double c = 0;            // coth 2J on the self-dual curve
    bool self_dual = false;  // sinh 2J = e^{-2U}
    bool j_less_u = false;   // the c > 2 regime
};

AtParams selfdual_params(double J);
AtParams at_params(double J, double U);

using SpinVec = std::vector<std::int8_t>;

// σ restricted to the D• and D∘ vertices (corner classes and the root read the outside face).
SpinVec primal_spins(const SpinConfig& s);
SpinVec dual_spins(const SpinConfig& s);

// ξ lives on D∘ edges, indexed by the vertex z of D.
// Returns 1 or 0 when forced, otherwise the open probability at z.
double xi_open_probability(const SpinConfig& s, int z, const ModelParams& p);
bool xi_compatible(const SpinConfig& s, const EdgeBits& xi);
EdgeBits sample_xi_given_spins(const SpinConfig& s, const ModelParams& p, Rng& rng);

// Joint weight of (σ, ξ): a^{n_a} b^{n_b} (c-a)^{n_ca} (c-b)^{n_cb}; for a = b = 1 this is
// (c-1)^{|ξ| - |ω(σ•)|}.
struct SigmaXiTerms {
    int a = 0, b = 0, c_minus_a = 0, c_minus_b = 0;
};
std::optional<SigmaXiTerms> sigma_xi_terms(const SpinConfig& s, const EdgeBits& xi);
double joint_weight_sigma_xi(const SpinConfig& s, const EdgeBits& xi, const ModelParams& p);

// Spins on D∘: plus on the cluster of the root, independent fair signs elsewhere.
SpinVec resample_spins_given_xi(const Geometry& g, const EdgeBits& xi, Rng& rng);

// Ashkin–Teller edge classes: both agree, both differ, exactly one differs.
struct AtCounts {
    int same = 0, both = 0, mixed = 0;
};
AtCounts at_counts(const Graph& g, const SpinVec& tau, const SpinVec& tau2);
double at_weight(const Graph& g, const SpinVec& tau, const SpinVec& tau2, double J, double U);
bool at_boundary_ok(const Graph& g, const SpinVec& tau, const SpinVec& tau2);  // τ = τ' on boundary vertices

EdgeBits sample_xi_star_given_tau(const Graph& g, const SpinVec& tau, const SpinVec& tau2, double J, Rng& rng);
std::pair<SpinVec, SpinVec> sample_tau_given_xi_star(const Graph& g, const EdgeBits& xi_star, const SpinVec& sigma,
                                                      Rng& rng);

}  // namespace icelab
