#pragma once

#include "icelab/lattice.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <utility>
#include <vector>

namespace icelab {

class ClusterError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using EdgeBits = std::vector<std::uint8_t>;

struct RcParams {
    double q = 1.0;
    double q_b = 1.0;
    double p = 0.5;
    // Optional per-class probabilities (class A edges use p_v, class B edges p_h).
    bool anisotropic = false;
    double p_h = 0.5;
    double p_v = 0.5;

    double p_for(std::uint8_t edge_class) const { return anisotropic ? (edge_class == 0 ? p_v : p_h) : p; }
    void validate() const;
};

double p_critical(double q);
struct AnisotropicP {
    double p_h;
    double p_v;
};
AnisotropicP anisotropic_critical(double a, double b, double q);

// Connected components of the open subgraph.
struct Clusters {
    std::vector<int> label;              // per vertex
    std::vector<std::uint8_t> boundary;  // per cluster: contains a boundary vertex
    int count = 0;
    int k_b = 0;
    int k_i = 0;
    int k_wired() const { return k_i + (k_b > 0 ? 1 : 0); }
};

Clusters find_clusters(const Graph& g, const EdgeBits& open);

struct RcCounts {
    int k_i = 0, k_b = 0;
    int open = 0, closed = 0;
    int open_a = 0, open_b = 0;  // open edges by class
    friend bool operator==(const RcCounts&, const RcCounts&) = default;
};

RcCounts rc_counts(const Graph& g, const EdgeBits& open);
double rc_weight(const Graph& g, const EdgeBits& open, const RcParams& P);

// Probability that edge e is open given every other edge.
double heat_bath_edge_ratio(const Graph& g, const EdgeBits& open, int e, const RcParams& P);

EdgeBits dual_bits(const EdgeBits& open);

// Primal and dual clusters of η on D•/D∘ with their adjacency tree.
// Tree nodes: primal clusters 0..P-1, then dual clusters P..P+Q-1.
struct ClusterTree {
    Clusters primal, dual;
    std::vector<std::pair<int, int>> adjacency;  // (primal cluster, dual cluster), unique
    int root = -1;                               // tree node of the dual cluster holding the D∘ root
    std::vector<int> parent;                     // per tree node, -1 at root
    std::vector<int> depth;
    std::vector<int> order;  // breadth-first from the root

    int nodes() const { return primal.count + dual.count; }
    bool is_dual(int node) const { return node >= primal.count; }
    int primal_node(int face_cluster) const { return face_cluster; }
    int dual_node(int face_cluster) const { return primal.count + face_cluster; }
    // true when primal cluster c sits inside dual cluster d (c is d's child)
    bool nested(int c, int d) const { return parent[c] == dual_node(d); }
};

// Fails if the adjacency graph is not a tree (it always is on a valid domain).
ClusterTree decompose(const Geometry& g, const EdgeBits& open);

void write_rc(std::ostream& os, const EdgeBits& open);
EdgeBits read_rc(std::istream& is, int edges);

}  // namespace icelab
