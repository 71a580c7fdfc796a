#pragma once

#include "icelab/random_cluster.hpp"
#include "icelab/representations.hpp"
#include "icelab/rng.hpp"

#include <climits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace icelab {

class UnsupportedRegime : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parameters of the six-vertex / random-cluster coupling. With a = K sinh r, b = K sinh t,
// c = K sinh λ and r + t = λ; for a = b the split is r = t = λ/2.
struct CouplingParams {
    double a = 1, b = 1, c = 2;
    double delta = -1;
    double lambda = 0;
    double r = 0, t = 0, K = 1;
    double q = 4, sqrt_q = 2;
    double q_b = 2, c_b = 1;
    double p = 2.0 / 3;  // p_c(q)
    double p_h = 2.0 / 3, p_v = 2.0 / 3;
    bool isotropic = true;

    RcParams rc_plain() const;  // partner of HF^{0,1}: q_b = e^{-λ}√q
    RcParams rc_wired() const;  // partner of HF^{0,1;c_b}: q_b = 1
    ModelParams model() const { return {a, b, c, c_b}; }
};

CouplingParams derive_params(double a, double b, double c);

// plain: HF^{0,1} with RC^{q_b}.  even_cb: even domain, HF^{0,1;c_b} with the wired RC,
// edges at ∂_V D forced open.
enum class CouplingPart { plain, even_cb };

// Joint weight a^{n_a} b^{n_b} e^{t·exp_t} e^{r·exp_r}.
struct JointTerms {
    int n_a = 0, n_b = 0;
    int exp_t = 0, exp_r = 0;
    friend bool operator==(const JointTerms&, const JointTerms&) = default;
};

bool is_compatible(const Geometry& g, const std::vector<int>& h, const EdgeBits& eta, CouplingPart part);
bool is_compatible(const HeightFunction& h, const EdgeBits& eta, CouplingPart part = CouplingPart::plain);

// nullopt when the pair is not compatible
std::optional<JointTerms> edge_form_terms(const Geometry& g, const std::vector<int>& h, const EdgeBits& eta,
                                          CouplingPart part);
std::optional<JointTerms> cluster_form_terms(const Geometry& g, const std::vector<int>& h, const EdgeBits& eta,
                                             CouplingPart part);
double evaluate(const JointTerms& w, const CouplingParams& p);

double joint_weight_edge(const HeightFunction& h, const EdgeBits& eta, const CouplingParams& p,
                         CouplingPart part = CouplingPart::plain);
double joint_weight_cluster(const HeightFunction& h, const EdgeBits& eta, const CouplingParams& p,
                            CouplingPart part = CouplingPart::plain);

// Conditional law of the heights given η: a walk down the cluster tree.
struct TreeLaw {
    static constexpr int kFree = INT_MIN;
    ClusterTree tree;
    std::vector<double> weight;  // per node: P(node = parent + s) ∝ exp(weight·s)
    std::vector<int> fixed;      // per node: fixed height or kFree
    std::vector<int> node_of_face;  // per geometry face index, -1 for outside faces
    std::vector<int> outside;       // heights of outside faces (indexed by geometry face index)

    double step_mean(int node) const;  // tanh(weight)
    // steps from the node up to its first fixed ancestor
    int steps_to_fixed(int node) const;
};

TreeLaw tree_law(const Geometry& g, const EdgeBits& eta, const CouplingParams& p, CouplingPart part);
std::vector<int> sample_tree_heights(const TreeLaw& law, Rng& rng);  // per node
HeightFunction sample_heights_given_rc(const GeometryPtr& g, const EdgeBits& eta, const CouplingParams& p,
                                       CouplingPart part, Rng& rng);

// E[h(u) | η] and E[h(u)^2 | η] for an inner face u.
std::pair<double, double> conditional_moments(const TreeLaw& law, int face);

}  // namespace icelab
