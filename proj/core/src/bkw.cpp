#include "icelab/bkw.hpp"

#include <cmath>
#include <map>

namespace icelab {

RcParams CouplingParams::rc_plain() const {
    RcParams P;
    P.q = q;
    P.q_b = q_b;
    P.p = p;
    P.anisotropic = !isotropic;
    P.p_h = p_h;
    P.p_v = p_v;
    return P;
}

RcParams CouplingParams::rc_wired() const {
    RcParams P = rc_plain();
    P.q_b = 1;
    return P;
}

CouplingParams derive_params(double a, double b, double c) {
    if (!(a > 0) || !(b > 0) || !(c > 0)) throw UnsupportedRegime("a, b, c must be positive");
    CouplingParams P;
    P.a = a;
    P.b = b;
    P.c = c;
    P.delta = (a * a + b * b - c * c) / (2 * a * b);
    if (P.delta > -1 + 1e-12) {
        if (a + b > c * (1 + 1e-12)) throw UnsupportedRegime("coupling needs a + b <= c (Delta <= -1)");
        P.delta = -1;
    }
    P.lambda = std::acosh(-P.delta);
    P.sqrt_q = -2 * P.delta;
    P.q = P.sqrt_q * P.sqrt_q;
    P.isotropic = a == b;
    if (P.lambda == 0) {
        P.r = P.t = 0;
        P.K = 0;
    } else if (P.isotropic) {
        P.r = P.t = P.lambda / 2;
        P.K = a / std::sinh(P.r);
    } else {
        P.K = c / std::sinh(P.lambda);
        P.r = std::asinh(a / P.K);
        P.t = P.lambda - P.r;
    }
    P.c_b = std::exp(P.lambda / 2);
    P.q_b = std::exp(-P.lambda) * P.sqrt_q;
    P.p = P.sqrt_q / (P.sqrt_q + 1);
    P.p_h = b * P.sqrt_q / (b * P.sqrt_q + a);
    P.p_v = a * P.sqrt_q / (a * P.sqrt_q + b);
    return P;
}

namespace {

// Heights shared by every outside odd face, or nullopt if they differ.
std::optional<int> root_height(const Geometry& g, const std::vector<int>& h) {
    std::optional<int> v;
    for (int k = g.inner_count(); k < g.face_count(); ++k) {
        if (is_even(g.face(k))) continue;
        if (v && *v != h[k]) return std::nullopt;
        v = h[k];
    }
    return v;
}

bool locally_compatible(const Geometry& g, const std::vector<int>& h, const EdgeBits& eta, CouplingPart part) {
    if (!root_height(g, h)) return false;
    const auto& vs = g.vertices();
    for (int z = 0; z < g.vertex_count(); ++z) {
        const auto& r = vs[z];
        const auto e = r.even_slots(), o = r.odd_slots();
        if (eta[z]) {
            if (h[r.face[e[0]]] != h[r.face[e[1]]]) return false;
        } else {
            if (part == CouplingPart::even_cb && r.boundary) return false;
            if (h[r.face[o[0]]] != h[r.face[o[1]]]) return false;
        }
    }
    return true;
}

int half_s(const VertexRecord& r, const std::vector<int>& h) {
    const auto e = r.even_slots(), o = r.odd_slots();
    const int s = h[r.face[o[0]]] + h[r.face[o[1]]] - h[r.face[e[0]]] - h[r.face[e[1]]];
    return s / 2;
}

// Vertex weight a/b, skipped for forced boundary edges of the even_cb coupling.
void add_vertex_weight(JointTerms& w, const VertexRecord& r, bool open, CouplingPart part) {
    if (part == CouplingPart::even_cb && r.boundary) return;
    if (r.class_a == open)
        ++w.n_a;
    else
        ++w.n_b;
}

}  // namespace

bool is_compatible(const Geometry& g, const std::vector<int>& h, const EdgeBits& eta, CouplingPart part) {
    if (part == CouplingPart::even_cb && g.domain().parity() != Parity::even) return false;
    return locally_compatible(g, h, eta, part);
}

bool is_compatible(const HeightFunction& h, const EdgeBits& eta, CouplingPart part) {
    return is_compatible(*h.geo, h.h, eta, part);
}

std::optional<JointTerms> edge_form_terms(const Geometry& g, const std::vector<int>& h, const EdgeBits& eta,
                                          CouplingPart part) {
    if (!is_compatible(g, h, eta, part)) return std::nullopt;
    JointTerms w;
    const auto& vs = g.vertices();
    for (int z = 0; z < g.vertex_count(); ++z) {
        const auto& r = vs[z];
        const int s = half_s(r, h);
        const bool open = eta[z] != 0;
        add_vertex_weight(w, r, open, part);
        // κ·S: class A open t/2, closed -r/2; class B open r/2, closed -t/2
        if (r.class_a)
            open ? w.exp_t += s : w.exp_r -= s;
        else
            open ? w.exp_r += s : w.exp_t -= s;
    }
    return w;
}

namespace {

std::vector<int> node_heights(const Geometry& g, const ClusterTree& t, const std::vector<int>& h) {
    std::vector<int> v(t.nodes(), 0);
    for (const auto& r : g.vertices())
        for (int s = 0; s < 4; ++s) {
            const int f = r.face[s];
            const int node = is_even(g.face(f)) ? t.primal_node(t.primal.label[r.node[s]])
                                                : t.dual_node(t.dual.label[r.node[s]]);
            v[node] = h[f];
        }
    return v;
}

}  // namespace

std::optional<JointTerms> cluster_form_terms(const Geometry& g, const std::vector<int>& h, const EdgeBits& eta,
                                             CouplingPart part) {
    if (!is_compatible(g, h, eta, part)) return std::nullopt;
    JointTerms w;
    const auto& vs = g.vertices();
    for (int z = 0; z < g.vertex_count(); ++z) add_vertex_weight(w, vs[z], eta[z] != 0, part);
    const ClusterTree t = decompose(g, eta);
    const auto hv = node_heights(g, t, h);
    int steps = 0;  // Σ over tree edges of h(child) - h(parent)
    for (int n = 0; n < t.nodes(); ++n)
        if (t.parent[n] >= 0) steps += hv[n] - hv[t.parent[n]];
    w.exp_t = w.exp_r = steps;
    return w;
}

double evaluate(const JointTerms& w, const CouplingParams& p) {
    return std::pow(p.a, w.n_a) * std::pow(p.b, w.n_b) * std::exp(p.t * w.exp_t + p.r * w.exp_r);
}

double joint_weight_edge(const HeightFunction& h, const EdgeBits& eta, const CouplingParams& p, CouplingPart part) {
    auto w = edge_form_terms(*h.geo, h.h, eta, part);
    if (!w) throw UnsupportedRegime("height function and edge configuration are not compatible");
    return evaluate(*w, p);
}

double joint_weight_cluster(const HeightFunction& h, const EdgeBits& eta, const CouplingParams& p,
                            CouplingPart part) {
    auto w = cluster_form_terms(*h.geo, h.h, eta, part);
    if (!w) throw UnsupportedRegime("height function and edge configuration are not compatible");
    return evaluate(*w, p);
}

double TreeLaw::step_mean(int node) const { return std::tanh(weight[node]); }

int TreeLaw::steps_to_fixed(int node) const {
    int n = 0;
    while (fixed[node] == kFree) {
        node = tree.parent[node];
        ++n;
    }
    return n;
}

TreeLaw tree_law(const Geometry& g, const EdgeBits& eta, const CouplingParams& p, CouplingPart part) {
    if (part == CouplingPart::even_cb) {
        if (g.domain().parity() != Parity::even) throw UnsupportedRegime("the c_b coupling needs an even domain");
        for (int z = 0; z < g.vertex_count(); ++z)
            if (g.vertices()[z].boundary && !eta[z]) throw UnsupportedRegime("edges at the vertex boundary must be open");
    }
    TreeLaw law;
    law.tree = decompose(g, eta);
    const ClusterTree& t = law.tree;
    const int n = t.nodes();

    // Σ_z κ_z S_z = Σ over adjacent (C, C*) of A(C,C*)·(h(C*) - h(C))
    std::map<std::pair<int, int>, double> A;
    for (int z = 0; z < g.vertex_count(); ++z) {
        const auto& r = g.vertices()[z];
        const bool open = eta[z] != 0;
        double kappa;
        if (r.class_a)
            kappa = open ? p.t / 2 : -p.r / 2;
        else
            kappa = open ? p.r / 2 : -p.t / 2;
        const int ring[4] = {NW, NE, SE, SW};
        for (int s = 0; s < 4; ++s) {
            int x = ring[s], y = ring[(s + 1) % 4];
            if (!is_even(g.face(r.face[x]))) std::swap(x, y);  // x even, y odd
            const int c = t.primal.label[r.node[x]], d = t.dual.label[r.node[y]];
            A[{c, d}] += kappa / 2;
        }
    }

    law.weight.assign(n, 0.0);
    for (int v = 0; v < n; ++v) {
        const int u = t.parent[v];
        if (u < 0) continue;
        if (t.is_dual(v))
            law.weight[v] = A[{u, v - t.primal.count}];
        else
            law.weight[v] = -A[{v, u - t.primal.count}];
    }

    law.fixed.assign(n, TreeLaw::kFree);
    law.fixed[t.root] = 1;
    for (int c = 0; c < t.primal.count; ++c)
        if (t.primal.boundary[c]) {
            if (t.parent[c] != t.root) throw ClusterError("boundary cluster not adjacent to the boundary dual cluster");
            law.fixed[c] = 0;
        }

    law.node_of_face.assign(g.face_count(), -1);
    law.outside.assign(g.face_count(), 0);
    for (int k = 0; k < g.face_count(); ++k)
        if (!g.inner(k)) law.outside[k] = is_even(g.face(k)) ? 0 : 1;
    for (const auto& r : g.vertices())
        for (int s = 0; s < 4; ++s) {
            const int f = r.face[s];
            if (!g.inner(f)) continue;
            law.node_of_face[f] = is_even(g.face(f)) ? t.primal_node(t.primal.label[r.node[s]])
                                                     : t.dual_node(t.dual.label[r.node[s]]);
        }
    return law;
}

std::vector<int> sample_tree_heights(const TreeLaw& law, Rng& rng) {
    const auto& t = law.tree;
    std::vector<int> v(t.nodes(), 0);
    for (int node : t.order) {
        if (law.fixed[node] != TreeLaw::kFree) {
            v[node] = law.fixed[node];
            continue;
        }
        const double w = law.weight[node];
        const double up = 1.0 / (1.0 + std::exp(-2 * w));
        v[node] = v[t.parent[node]] + (uniform01(rng) < up ? 1 : -1);
    }
    return v;
}

HeightFunction sample_heights_given_rc(const GeometryPtr& g, const EdgeBits& eta, const CouplingParams& p,
                                       CouplingPart part, Rng& rng) {
    const TreeLaw law = tree_law(*g, eta, p, part);
    const auto v = sample_tree_heights(law, rng);
    HeightFunction h;
    h.geo = g;
    h.h = law.outside;
    for (int k = 0; k < g->inner_count(); ++k) h.h[k] = v[law.node_of_face[k]];
    return h;
}

std::pair<double, double> conditional_moments(const TreeLaw& law, int face) {
    int node = law.node_of_face[face];
    double mean = 0, var = 0;
    while (law.fixed[node] == TreeLaw::kFree) {
        const double m = law.step_mean(node);
        mean += m;
        var += 1 - m * m;
        node = law.tree.parent[node];
    }
    mean += law.fixed[node];
    return {mean, var + mean * mean};
}

}  // namespace icelab
