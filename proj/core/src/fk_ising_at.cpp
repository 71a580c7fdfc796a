#include "icelab/fk_ising_at.hpp"

#include <cmath>

namespace icelab {

AtParams selfdual_params(double J) {
    if (!(J > 0)) throw FkError("self-dual parameters need J > 0");
    AtParams P;
    P.J = J;
    P.U = -0.5 * std::log(std::sinh(2 * J));
    P.c = 1 / std::tanh(2 * J);
    P.self_dual = true;
    P.j_less_u = J < P.U;
    return P;
}

AtParams at_params(double J, double U) {
    AtParams P;
    P.J = J;
    P.U = U;
    P.self_dual = J > 0 && std::abs(std::sinh(2 * J) - std::exp(-2 * U)) < 1e-12;
    if (P.self_dual) P.c = 1 / std::tanh(2 * J);
    P.j_less_u = J < U;
    return P;
}

SpinVec primal_spins(const SpinConfig& s) {
    const Geometry& g = *s.geo;
    const CornerGraph& cg = g.primal();
    SpinVec out(cg.graph.n);
    for (int u = 0; u < cg.graph.n; ++u) {
        const int k = cg.face_index[u] >= 0 ? cg.face_index[u] : g.face_index(cg.corner_face[u]);
        out[u] = s.s[k];
    }
    return out;
}

SpinVec dual_spins(const SpinConfig& s) {
    const Geometry& g = *s.geo;
    const CornerGraph& cg = g.dual();
    SpinVec out(cg.graph.n, 1);
    for (int u = 0; u < cg.graph.n; ++u)
        if (cg.face_index[u] >= 0) out[u] = s.s[cg.face_index[u]];
    for (int k = g.inner_count(); k < g.face_count(); ++k)
        if (!is_even(g.face(k))) {
            out[cg.root] = s.s[k];
            break;
        }
    return out;
}

namespace {

struct LocalState {
    bool even_differs, odd_differs;
    bool class_a;
};

LocalState local(const SpinConfig& s, int z) {
    const auto& r = s.geo->vertices()[z];
    const auto e = r.even_slots(), o = r.odd_slots();
    return {s.s[r.face[e[0]]] != s.s[r.face[e[1]]], s.s[r.face[o[0]]] != s.s[r.face[o[1]]], r.class_a};
}

}  // namespace

double xi_open_probability(const SpinConfig& s, int z, const ModelParams& p) {
    const LocalState L = local(s, z);
    if (L.even_differs && L.odd_differs) throw FkError("spin configuration violates the ice rule");
    if (L.even_differs) return 1;
    if (L.odd_differs) return 0;
    const double alpha = L.class_a ? p.a : p.b;
    if (p.c < alpha) throw FkError("FK-Ising representation needs c >= max(a, b)");
    return (p.c - alpha) / p.c;
}

bool xi_compatible(const SpinConfig& s, const EdgeBits& xi) {
    for (int z = 0; z < s.geo->vertex_count(); ++z) {
        const LocalState L = local(s, z);
        if (L.even_differs && !xi[z]) return false;
        if (L.odd_differs && xi[z]) return false;
    }
    return true;
}

EdgeBits sample_xi_given_spins(const SpinConfig& s, const ModelParams& p, Rng& rng) {
    EdgeBits xi(s.geo->vertex_count());
    for (int z = 0; z < s.geo->vertex_count(); ++z) {
        const double pr = xi_open_probability(s, z, p);
        xi[z] = pr >= 1 ? 1 : (pr <= 0 ? 0 : bernoulli(rng, pr));
    }
    return xi;
}

std::optional<SigmaXiTerms> sigma_xi_terms(const SpinConfig& s, const EdgeBits& xi) {
    SigmaXiTerms t;
    for (int z = 0; z < s.geo->vertex_count(); ++z) {
        const LocalState L = local(s, z);
        if (L.even_differs && L.odd_differs) return std::nullopt;
        // α is the weight of the vertex type with the odd pair split
        int& alpha = L.class_a ? t.a : t.b;
        int& beta = L.class_a ? t.b : t.a;
        int& open_free = L.class_a ? t.c_minus_a : t.c_minus_b;
        if (L.even_differs) {
            if (!xi[z]) return std::nullopt;
            ++beta;
        } else if (L.odd_differs) {
            if (xi[z]) return std::nullopt;
            ++alpha;
        } else {
            xi[z] ? ++open_free : ++alpha;
        }
    }
    return t;
}

double joint_weight_sigma_xi(const SpinConfig& s, const EdgeBits& xi, const ModelParams& p) {
    auto t = sigma_xi_terms(s, xi);
    if (!t) return 0;
    return std::pow(p.a, t->a) * std::pow(p.b, t->b) * std::pow(p.c - p.a, t->c_minus_a) *
           std::pow(p.c - p.b, t->c_minus_b);
}

SpinVec resample_spins_given_xi(const Geometry& g, const EdgeBits& xi, Rng& rng) {
    const Graph& d = g.dual().graph;
    const Clusters cl = find_clusters(d, xi);
    std::vector<std::int8_t> sign(cl.count);
    for (int k = 0; k < cl.count; ++k) sign[k] = bernoulli(rng, 0.5) ? 1 : -1;
    sign[cl.label[g.dual().root]] = 1;
    SpinVec out(d.n);
    for (int u = 0; u < d.n; ++u) out[u] = sign[cl.label[u]];
    return out;
}

AtCounts at_counts(const Graph& g, const SpinVec& tau, const SpinVec& tau2) {
    AtCounts n;
    for (auto [u, v] : g.edges) {
        const bool d1 = tau[u] != tau[v], d2 = tau2[u] != tau2[v];
        if (!d1 && !d2)
            ++n.same;
        else if (d1 && d2)
            ++n.both;
        else
            ++n.mixed;
    }
    return n;
}

double at_weight(const Graph& g, const SpinVec& tau, const SpinVec& tau2, double J, double U) {
    double e = 0;
    for (auto [u, v] : g.edges) {
        const int a = tau[u] * tau[v], b = tau2[u] * tau2[v];
        e += J * (a + b) + U * a * b;
    }
    return std::exp(e);
}

bool at_boundary_ok(const Graph& g, const SpinVec& tau, const SpinVec& tau2) {
    for (int u = 0; u < g.n; ++u)
        if (g.boundary[u] && tau[u] != tau2[u]) return false;
    return true;
}

EdgeBits sample_xi_star_given_tau(const Graph& g, const SpinVec& tau, const SpinVec& tau2, double J, Rng& rng) {
    const double keep = 1 - std::exp(-4 * J);
    EdgeBits out(g.edge_count(), 0);
    for (int e = 0; e < g.edge_count(); ++e) {
        const auto [u, v] = g.edges[e];
        if (tau[u] == tau[v] && tau2[u] == tau2[v]) out[e] = bernoulli(rng, keep);
    }
    return out;
}

std::pair<SpinVec, SpinVec> sample_tau_given_xi_star(const Graph& g, const EdgeBits& xi_star, const SpinVec& sigma,
                                                      Rng& rng) {
    const Clusters cl = find_clusters(g, xi_star);
    std::vector<std::int8_t> cluster_sigma(cl.count, 0), sign(cl.count);
    for (int u = 0; u < g.n; ++u) {
        auto& cs = cluster_sigma[cl.label[u]];
        if (cs != 0 && cs != sigma[u]) throw FkError("product spin is not constant on a cluster of the dual configuration");
        cs = sigma[u];
    }
    for (int k = 0; k < cl.count; ++k) sign[k] = bernoulli(rng, 0.5) ? 1 : -1;
    SpinVec tau(g.n), tau2(g.n);
    for (int u = 0; u < g.n; ++u) {
        tau[u] = sign[cl.label[u]];
        tau2[u] = static_cast<std::int8_t>(tau[u] * sigma[u]);
    }
    return {tau, tau2};
}

}  // namespace icelab
