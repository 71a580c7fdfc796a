#pragma once

// Exhaustive enumeration with exact (or 60-digit) arithmetic. Everything here is templated on
// the scalar: Rational when every input is rational, Real otherwise.

#include "icelab/bkw.hpp"
#include "icelab/fk_ising_at.hpp"
#include "icelab/random_cluster.hpp"
#include "icelab/representations.hpp"
#include "icelab/scalar.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace icelab::oracle {

class OracleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Config = std::vector<int>;

template <class S>
struct ExactMeasure {
    std::vector<Config> atoms;
    std::vector<S> weight;

    std::size_t size() const { return atoms.size(); }
    S total() const {
        S z(0);
        for (const auto& w : weight) z += w;
        return z;
    }
    std::vector<S> probabilities() const {
        const S z = total();
        std::vector<S> p;
        p.reserve(weight.size());
        for (const auto& w : weight) p.push_back(w / z);
        return p;
    }
    std::map<Config, S> as_map() const {
        std::map<Config, S> m;
        for (std::size_t k = 0; k < atoms.size(); ++k) m[atoms[k]] += weight[k];
        return m;
    }
    void add(const Config& c, const S& w) {
        atoms.push_back(c);
        weight.push_back(w);
    }
};

template <class S>
ExactMeasure<S> from_map(const std::map<Config, S>& m) {
    ExactMeasure<S> out;
    for (const auto& [c, w] : m) out.add(c, w);
    return out;
}

struct Verdict {
    bool pass = true;
    double max_deviation = 0;
    std::string detail;
};

// ---------------------------------------------------------------- heights

struct HeightSpaceOptions {
    BoundaryCondition bc = BoundaryCondition::flat(0);
    std::vector<std::pair<Face, int>> pinned;  // inner faces held at a value
    int max_free = 14;
};

// All valid height functions (full vectors over the tabulated faces).
inline std::vector<Config> enumerate_height_configs(const Geometry& g, const HeightSpaceOptions& opt) {
    std::vector<int> v(g.face_count());
    for (int k = 0; k < g.face_count(); ++k) v[k] = opt.bc.value(g.face(k));
    std::vector<char> pinned(g.inner_count(), 0);
    for (auto [f, val] : opt.pinned) {
        const int k = g.face_index(f);
        if (k < 0 || !g.inner(k)) throw OracleError("pinned face outside the domain");
        pinned[k] = 1;
        v[k] = val;
    }
    std::vector<int> free;
    for (int k = 0; k < g.inner_count(); ++k)
        if (!pinned[k]) free.push_back(k);
    if (static_cast<int>(free.size()) > opt.max_free) throw OracleError("too many free faces for enumeration");

    // assigned[k]: faces whose value is known before k is visited (outside, pinned, earlier)
    std::vector<char> known(g.face_count(), 1);
    for (int k : free) known[k] = 0;
    std::vector<Config> out;
    std::function<void(std::size_t)> rec = [&](std::size_t idx) {
        if (idx == free.size()) {
            out.push_back(v);
            return;
        }
        const int k = free[idx];
        const auto& nb = g.face_neighbours(k);
        int ref = -1;
        for (int m : nb)
            if (known[m]) {
                ref = m;
                break;
            }
        if (ref < 0) throw OracleError("raster enumeration reached a face with no assigned neighbour");
        for (int cand : {v[ref] - 1, v[ref] + 1}) {
            bool ok = true;
            for (int m : nb)
                if (known[m] && std::abs(v[m] - cand) != 1) ok = false;
            if (!ok) continue;
            v[k] = cand;
            known[k] = 1;
            rec(idx + 1);
            known[k] = 0;
        }
    };
    rec(0);
    // pinned values must be consistent with their neighbours
    std::vector<Config> valid;
    for (auto& c : out) {
        bool ok = true;
        for (int k = 0; k < g.inner_count() && ok; ++k)
            for (int m : g.face_neighbours(k))
                if (std::abs(c[k] - c[m]) != 1) ok = false;
        if (ok) valid.push_back(std::move(c));
    }
    return valid;
}

// The configurations of HF on D \ ∂_V D: faces of D touching ∂_V D become boundary and take the
// boundary value; weigh them with WeightMode::stripped.
inline std::vector<Config> stripped_height_configs(const Geometry& g, const BoundaryCondition& bc, int max_free = 14) {
    HeightSpaceOptions opt;
    opt.bc = bc;
    opt.max_free = max_free;
    for (int k = 0; k < g.inner_count(); ++k) {
        bool touches = false;
        for (int z : g.face_corners(k)) touches |= g.vertices()[z].boundary;
        if (touches) opt.pinned.emplace_back(g.face(k), bc.value(g.face(k)));
    }
    return enumerate_height_configs(g, opt);
}

template <class S>
struct VertexWeights {
    S a{1}, b{1}, c{2}, c_b{1};
    bool c_b_infinite = false;
};

// Height measure; c_b = ∞ keeps only the atoms with the most boundary c-vertices.
template <class S>
ExactMeasure<S> height_measure(const Geometry& g, const std::vector<Config>& configs, const VertexWeights<S>& w,
                               WeightMode mode) {
    ExactMeasure<S> out;
    std::vector<TypeCounts> counts;
    int max_cb = 0;
    for (const auto& c : configs) {
        counts.push_back(type_counts(g, c, mode));
        max_cb = std::max(max_cb, counts.back().cb);
    }
    for (std::size_t k = 0; k < configs.size(); ++k) {
        const TypeCounts& n = counts[k];
        S x = ipow(w.a, n.a) * ipow(w.b, n.b) * ipow(w.c, n.c);
        if (mode == WeightMode::boundary_cb) {
            if (w.c_b_infinite) {
                if (n.cb != max_cb) continue;
            } else {
                x *= ipow(w.c_b, n.cb);
            }
        }
        if (x == 0) continue;
        out.add(configs[k], x);
    }
    return out;
}

// ---------------------------------------------------------------- spins

// Every ice-rule spin configuration whose outside faces follow `outside` (default all plus).
inline std::vector<Config> enumerate_spin_configs(const Geometry& g, const std::function<int(Face)>& outside = {}) {
    const int n = g.inner_count();
    if (n > 22) throw OracleError("too many faces for spin enumeration");
    Config v(g.face_count(), 1);
    for (int k = n; k < g.face_count(); ++k) v[k] = outside ? outside(g.face(k)) : 1;
    std::vector<Config> out;
    for (long m = 0; m < (1L << n); ++m) {
        for (int k = 0; k < n; ++k) v[k] = (m >> k) & 1 ? -1 : 1;
        bool ok = true;
        for (const auto& r : g.vertices())
            if (v[r.face[NW]] != v[r.face[SE]] && v[r.face[NE]] != v[r.face[SW]]) {
                ok = false;
                break;
            }
        if (ok) out.push_back(v);
    }
    return out;
}

inline SpinConfig as_spins(const GeometryPtr& g, const Config& c) {
    SpinConfig s{g, std::vector<std::int8_t>(c.begin(), c.end())};
    return s;
}

template <class S>
ExactMeasure<S> spin_measure(const GeometryPtr& g, const std::vector<Config>& configs, const VertexWeights<S>& w,
                             WeightMode mode) {
    ExactMeasure<S> out;
    std::vector<TypeCounts> counts;
    int max_cb = 0;
    for (const auto& c : configs) {
        counts.push_back(spin_type_counts(as_spins(g, c), mode));
        max_cb = std::max(max_cb, counts.back().cb);
    }
    for (std::size_t k = 0; k < configs.size(); ++k) {
        const TypeCounts& n = counts[k];
        S x = ipow(w.a, n.a) * ipow(w.b, n.b) * ipow(w.c, n.c);
        if (mode == WeightMode::boundary_cb) {
            if (w.c_b_infinite) {
                if (n.cb != max_cb) continue;
            } else {
                x *= ipow(w.c_b, n.cb);
            }
        }
        if (x == 0) continue;
        out.add(configs[k], x);
    }
    return out;
}

// Push a measure through a map on atoms (merging equal images).
template <class S>
ExactMeasure<S> pushforward(const ExactMeasure<S>& mu, const std::function<Config(const Config&)>& f) {
    std::map<Config, S> m;
    for (std::size_t k = 0; k < mu.size(); ++k) m[f(mu.atoms[k])] += mu.weight[k];
    return from_map(m);
}

// Restrictions of a measure on full configurations.
template <class S>
ExactMeasure<S> inner_marginal(const Geometry& g, const ExactMeasure<S>& mu) {
    return pushforward<S>(mu, [&](const Config& c) { return Config(c.begin(), c.begin() + g.inner_count()); });
}

template <class S>
ExactMeasure<S> even_marginal(const Geometry& g, const ExactMeasure<S>& mu) {
    return pushforward<S>(mu, [&](const Config& c) {
        Config out;
        for (int k = 0; k < g.inner_count(); ++k)
            if (is_even(g.face(k))) out.push_back(c[k]);
        return out;
    });
}

// ---------------------------------------------------------------- comparisons

// Normalised equality of two measures on the same atom space (support must agree).
template <class S>
Verdict equal_measures(const ExactMeasure<S>& mu, const ExactMeasure<S>& nu) {
    Verdict v;
    const auto a = mu.as_map(), b = nu.as_map();
    const S za = mu.total(), zb = nu.total();
    if (za <= 0 || zb <= 0) return {false, 1, "empty measure"};
    std::map<Config, std::pair<S, S>> both;
    for (const auto& [c, w] : a) both[c].first = w / za;
    for (const auto& [c, w] : b) both[c].second = w / zb;
    for (const auto& [c, pq] : both) {
        const double d = relative_deviation(pq.first, pq.second);
        v.max_deviation = std::max(v.max_deviation, d);
        if (!nearly_equal(pq.first, pq.second)) {
            if (v.pass) {
                std::ostringstream os;
                os << "atom differs: " << to_double(pq.first) << " vs " << to_double(pq.second);
                v.detail = os.str();
            }
            v.pass = false;
        }
    }
    return v;
}

// x <= y pointwise
inline bool leq(const Config& x, const Config& y) {
    for (std::size_t k = 0; k < x.size(); ++k)
        if (x[k] > y[k]) return false;
    return true;
}

// μ(x∨y) μ(x∧y) >= μ(x) μ(y) for every pair of atoms; absent configurations weigh zero.
template <class S>
Verdict fkg_lattice_check(const ExactMeasure<S>& mu) {
    Verdict v;
    const auto m = mu.as_map();
    std::vector<std::pair<Config, S>> atoms(m.begin(), m.end());
    auto weight = [&](const Config& c) -> S {
        auto it = m.find(c);
        return it == m.end() ? S(0) : it->second;
    };
    for (std::size_t i = 0; i < atoms.size(); ++i)
        for (std::size_t j = i + 1; j < atoms.size(); ++j) {
            const Config &x = atoms[i].first, &y = atoms[j].first;
            Config hi(x.size()), lo(x.size());
            for (std::size_t k = 0; k < x.size(); ++k) {
                hi[k] = std::max(x[k], y[k]);
                lo[k] = std::min(x[k], y[k]);
            }
            const S lhs = weight(hi) * weight(lo), rhs = atoms[i].second * atoms[j].second;
            if (lhs < rhs && !nearly_equal(lhs, rhs)) {
                if (v.pass) {
                    std::ostringstream os;
                    os << "lattice condition fails: " << to_double(lhs) << " < " << to_double(rhs);
                    v.detail = os.str();
                }
                v.pass = false;
                v.max_deviation = std::max(v.max_deviation, relative_deviation(lhs, rhs));
            }
        }
    return v;
}

// Dinic max-flow on scalar capacities.
template <class S>
class MaxFlow {
public:
    explicit MaxFlow(int n) : adj_(n), level_(n), it_(n) {}
    void add_edge(int u, int v, S cap, bool infinite = false) {
        adj_[u].push_back({v, static_cast<int>(adj_[v].size()), cap, infinite});
        adj_[v].push_back({u, static_cast<int>(adj_[u].size()) - 1, S(0), false});
    }
    S run(int s, int t) {
        S flow(0);
        while (bfs(s, t)) {
            std::fill(it_.begin(), it_.end(), 0);
            while (true) {
                auto f = dfs(s, t, std::nullopt);
                if (!f || *f <= 0) break;
                flow += *f;
            }
        }
        return flow;
    }
    // vertices reachable from s in the residual graph
    std::vector<char> source_side(int s) const {
        std::vector<char> seen(adj_.size(), 0);
        std::deque<int> q{s};
        seen[s] = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            for (const auto& e : adj_[u])
                if (!seen[e.to] && (e.inf || e.cap > 0)) {
                    seen[e.to] = 1;
                    q.push_back(e.to);
                }
        }
        return seen;
    }

private:
    struct Edge {
        int to, rev;
        S cap;
        bool inf;
    };
    std::vector<std::vector<Edge>> adj_;
    std::vector<int> level_, it_;

    bool bfs(int s, int t) {
        std::fill(level_.begin(), level_.end(), -1);
        std::deque<int> q{s};
        level_[s] = 0;
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            for (const auto& e : adj_[u])
                if (level_[e.to] < 0 && (e.inf || e.cap > 0)) {
                    level_[e.to] = level_[u] + 1;
                    q.push_back(e.to);
                }
        }
        return level_[t] >= 0;
    }
    std::optional<S> dfs(int u, int t, std::optional<S> f) {
        if (u == t) return f;
        for (int& i = it_[u]; i < static_cast<int>(adj_[u].size()); ++i) {
            Edge& e = adj_[u][i];
            if (level_[e.to] != level_[u] + 1 || (!e.inf && e.cap <= 0)) continue;
            std::optional<S> lim = f;
            if (!e.inf) lim = lim ? std::min(*lim, e.cap) : e.cap;
            auto d = dfs(e.to, t, lim);
            if (d && *d > 0) {
                if (!e.inf) e.cap -= *d;
                adj_[e.to][e.rev].cap += *d;
                return d;
            }
        }
        return std::nullopt;
    }
};

// μ ⪯ ν (pointwise order) via Strassen: a monotone coupling exists iff the max flow is 1.
// On failure the detail names an up-set U with μ(U) > ν(U).
template <class S>
Verdict stochastic_domination_check(const ExactMeasure<S>& mu, const ExactMeasure<S>& nu, std::size_t cap = 6000) {
    const auto a = mu.as_map(), b = nu.as_map();
    if (a.size() > cap || b.size() > cap) throw OracleError("too many atoms for the domination check");
    const S za = mu.total(), zb = nu.total();
    std::vector<std::pair<Config, S>> A, B;
    for (const auto& [c, w] : a)
        if (w > 0) A.emplace_back(c, w / za);
    for (const auto& [c, w] : b)
        if (w > 0) B.emplace_back(c, w / zb);
    const int n = static_cast<int>(A.size() + B.size() + 2);
    const int src = n - 2, snk = n - 1;
    MaxFlow<S> mf(n);
    for (std::size_t i = 0; i < A.size(); ++i) mf.add_edge(src, static_cast<int>(i), A[i].second);
    for (std::size_t j = 0; j < B.size(); ++j) mf.add_edge(static_cast<int>(A.size() + j), snk, B[j].second);
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = 0; j < B.size(); ++j)
            if (leq(A[i].first, B[j].first)) mf.add_edge(static_cast<int>(i), static_cast<int>(A.size() + j), S(0), true);
    const S flow = mf.run(src, snk);
    Verdict v;
    v.max_deviation = to_double(S(S(1) - flow));
    if (nearly_equal(flow, S(1))) return v;
    v.pass = false;
    // up-closure of the μ-atoms left on the source side
    const auto side = mf.source_side(src);
    std::vector<Config> gens;
    for (std::size_t i = 0; i < A.size(); ++i)
        if (side[i]) gens.push_back(A[i].first);
    auto in_up = [&](const Config& c) {
        for (const auto& g : gens)
            if (leq(g, c)) return true;
        return false;
    };
    S mu_u(0), nu_u(0);
    for (const auto& [c, p] : A)
        if (in_up(c)) mu_u += p;
    for (const auto& [c, p] : B)
        if (in_up(c)) nu_u += p;
    std::ostringstream os;
    os << "up-set generated by " << gens.size() << " atoms: mu(U)=" << to_double(mu_u) << " nu(U)=" << to_double(nu_u);
    v.detail = os.str();
    return v;
}

// ---------------------------------------------------------------- random cluster

template <class S>
struct RcScalars {
    S q{1}, q_b{1}, p{S(1) / 2};
    bool anisotropic = false;
    S p_h{S(1) / 2}, p_v{S(1) / 2};
    const S& p_for(std::uint8_t cls) const { return anisotropic ? (cls == 0 ? p_v : p_h) : p; }
};

inline EdgeBits bits_of(long m, int E) {
    EdgeBits b(E);
    for (int e = 0; e < E; ++e) b[e] = (m >> e) & 1;
    return b;
}

template <class S>
S rc_weight_exact(const Graph& g, const EdgeBits& open, const RcScalars<S>& P) {
    const Clusters c = find_clusters(g, open);
    S w = ipow(P.q, c.k_i) * ipow(P.q_b, c.k_b);
    for (int e = 0; e < g.edge_count(); ++e) {
        const S& p = P.p_for(g.edge_class.empty() ? 0 : g.edge_class[e]);
        w *= open[e] ? p : S(S(1) - p);
    }
    return w;
}

template <class S>
ExactMeasure<S> enumerate_rc(const Graph& g, const RcScalars<S>& P, int cap = 20) {
    const int E = g.edge_count();
    if (E > cap) throw OracleError("too many edges for enumeration");
    ExactMeasure<S> out;
    for (long m = 0; m < (1L << E); ++m) {
        const EdgeBits b = bits_of(m, E);
        out.add(Config(b.begin(), b.end()), rc_weight_exact(g, b, P));
    }
    return out;
}

// Wired-convention weight q^{k with all boundary vertices merged} p^o (1-p)^c.
template <class S>
ExactMeasure<S> enumerate_rc_wired(const Graph& g, const RcScalars<S>& P) {
    ExactMeasure<S> out;
    const int E = g.edge_count();
    for (long m = 0; m < (1L << E); ++m) {
        const EdgeBits b = bits_of(m, E);
        const Clusters c = find_clusters(g, b);
        S w = ipow(P.q, c.k_wired());
        for (int e = 0; e < E; ++e) w *= b[e] ? P.p : S(S(1) - P.p);
        out.add(Config(b.begin(), b.end()), w);
    }
    return out;
}

template <class S>
ExactMeasure<S> enumerate_rc_free(const Graph& g, const RcScalars<S>& P) {
    ExactMeasure<S> out;
    const int E = g.edge_count();
    for (long m = 0; m < (1L << E); ++m) {
        const EdgeBits b = bits_of(m, E);
        const Clusters c = find_clusters(g, b);
        S w = ipow(P.q, c.count);
        for (int e = 0; e < E; ++e) w *= b[e] ? P.p : S(S(1) - P.p);
        out.add(Config(b.begin(), b.end()), w);
    }
    return out;
}

// ---------------------------------------------------------------- transition kernels

template <class S>
struct Kernel {
    std::vector<std::vector<S>> m;  // row-stochastic
    std::size_t size() const { return m.size(); }
};

template <class S>
Kernel<S> compose(const Kernel<S>& A, const Kernel<S>& B) {
    const std::size_t n = A.size();
    Kernel<S> C{std::vector<std::vector<S>>(n, std::vector<S>(n, S(0)))};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (A.m[i][k] == 0) continue;
            for (std::size_t j = 0; j < n; ++j) C.m[i][j] += A.m[i][k] * B.m[k][j];
        }
    return C;
}

template <class S>
Verdict detailed_balance(const Kernel<S>& K, const std::vector<S>& pi) {
    Verdict v;
    for (std::size_t i = 0; i < K.size(); ++i) {
        S row(0);
        for (std::size_t j = 0; j < K.size(); ++j) {
            row += K.m[i][j];
            const S l = pi[i] * K.m[i][j], r = pi[j] * K.m[j][i];
            if (!nearly_equal(l, r)) {
                v.pass = false;
                v.max_deviation = std::max(v.max_deviation, relative_deviation(l, r));
            }
        }
        if (!nearly_equal(row, S(1))) {
            v.pass = false;
            v.detail = "row does not sum to one";
        }
    }
    return v;
}

template <class S>
Verdict stationary(const Kernel<S>& K, const std::vector<S>& pi) {
    Verdict v;
    for (std::size_t j = 0; j < K.size(); ++j) {
        S s(0);
        for (std::size_t i = 0; i < K.size(); ++i) s += pi[i] * K.m[i][j];
        if (!nearly_equal(s, pi[j])) {
            v.pass = false;
            v.max_deviation = std::max(v.max_deviation, relative_deviation(s, pi[j]));
        }
    }
    return v;
}

template <class S>
bool irreducible(const Kernel<S>& K) {
    const std::size_t n = K.size();
    for (int dir = 0; dir < 2; ++dir) {
        std::vector<char> seen(n, 0);
        std::deque<std::size_t> q{0};
        seen[0] = 1;
        while (!q.empty()) {
            const std::size_t u = q.front();
            q.pop_front();
            for (std::size_t w = 0; w < n; ++w) {
                const S& x = dir == 0 ? K.m[u][w] : K.m[w][u];
                if (!seen[w] && x > 0) {
                    seen[w] = 1;
                    q.push_back(w);
                }
            }
        }
        if (std::count(seen.begin(), seen.end(), 1) != static_cast<long>(n)) return false;
    }
    return true;
}

// Heat-bath kernel of one face on an enumerated height measure.
template <class S>
Kernel<S> height_site_kernel(const Geometry& g, const ExactMeasure<S>& mu, int face) {
    const std::size_t n = mu.size();
    std::map<Config, std::size_t> idx;
    for (std::size_t k = 0; k < n; ++k) idx[mu.atoms[k]] = k;
    Kernel<S> K{std::vector<std::vector<S>>(n, std::vector<S>(n, S(0)))};
    for (std::size_t i = 0; i < n; ++i) {
        const Config& x = mu.atoms[i];
        const auto& nb = g.face_neighbours(face);
        const int w = x[nb[0]];
        bool flat = true;
        for (int m : nb) flat &= x[m] == w;
        if (!flat) {
            K.m[i][i] = 1;
            continue;
        }
        Config y = x;
        y[face] = x[face] == w + 1 ? w - 1 : w + 1;
        auto it = idx.find(y);
        if (it == idx.end()) {
            K.m[i][i] = 1;
            continue;
        }
        const std::size_t j = it->second;
        const S z = mu.weight[i] + mu.weight[j];
        K.m[i][i] = mu.weight[i] / z;
        K.m[i][j] = mu.weight[j] / z;
    }
    return K;
}

// Strong connectivity of the single-face move graph on a list of height functions.
inline bool height_moves_connected(const Geometry& g, const std::vector<Config>& atoms) {
    std::map<Config, std::size_t> idx;
    for (std::size_t k = 0; k < atoms.size(); ++k) idx[atoms[k]] = k;
    std::vector<char> seen(atoms.size(), 0);
    std::deque<std::size_t> q{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!q.empty()) {
        const Config x = atoms[q.front()];
        q.pop_front();
        for (int k = 0; k < g.inner_count(); ++k)
            for (int d : {-2, 2}) {
                Config y = x;
                y[k] += d;
                auto it = idx.find(y);
                if (it != idx.end() && !seen[it->second]) {
                    seen[it->second] = 1;
                    ++count;
                    q.push_back(it->second);
                }
            }
    }
    return count == atoms.size();  // moves are symmetric, so reachability is strong connectivity
}

// Heat-bath kernel of one edge on the enumerated random-cluster measure (atoms indexed by bitmask).
template <class S>
Kernel<S> rc_edge_kernel(const ExactMeasure<S>& mu, int e) {
    const std::size_t n = mu.size();
    Kernel<S> K{std::vector<std::vector<S>>(n, std::vector<S>(n, S(0)))};
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t on = i | (std::size_t(1) << e), off = i & ~(std::size_t(1) << e);
        const S z = mu.weight[on] + mu.weight[off];
        K.m[i][on] += mu.weight[on] / z;
        K.m[i][off] += mu.weight[off] / z;
    }
    return K;
}

// ---------------------------------------------------------------- coupling

template <class S>
struct CouplingScalars {
    S a{1}, b{1};
    S et{1}, er{1};  // e^t, e^r
    S q{4}, sqrt_q{2}, q_b{2}, c_b{1};
    S p{S(2) / 3}, p_h{S(2) / 3}, p_v{S(2) / 3};
    S c{2};
    bool isotropic = true;

    RcScalars<S> rc(bool wired) const {
        RcScalars<S> P;
        P.q = q;
        P.q_b = wired ? S(1) : q_b;
        P.p = p;
        P.anisotropic = !isotropic;
        P.p_h = p_h;
        P.p_v = p_v;
        return P;
    }
};

// From a, b and the exponentials e^t, e^r (so that a : b : c = sinh r : sinh t : sinh(r+t)).
template <class S>
CouplingScalars<S> coupling_scalars(S a, S b, S et, S er) {
    CouplingScalars<S> C;
    C.a = a;
    C.b = b;
    C.et = et;
    C.er = er;
    C.isotropic = a == b;
    const S el = et * er;  // e^λ
    C.sqrt_q = el + S(1) / el;
    C.q = C.sqrt_q * C.sqrt_q;
    C.q_b = C.sqrt_q / el;
    C.c_b = et;  // e^{λ/2} when r = t
    C.p = C.sqrt_q / (C.sqrt_q + 1);
    C.p_h = b * C.sqrt_q / (b * C.sqrt_q + a);
    C.p_v = a * C.sqrt_q / (a * C.sqrt_q + b);
    // c from a·sinh λ / sinh r (or a + b when λ = 0)
    if (er == S(1))
        C.c = a + b;
    else
        C.c = a * (el - S(1) / el) / (er - S(1) / er);
    return C;
}

// 60-digit parameters from decimal strings.
inline CouplingScalars<Real> real_coupling(const std::string& a, const std::string& b, const std::string& c) {
    const Real A(a), B(b), Cc(c);
    const Real delta = (A * A + B * B - Cc * Cc) / (2 * A * B);
    if (delta > -1) throw UnsupportedRegime("coupling needs Delta <= -1");
    const Real lambda = boost::multiprecision::acosh(-delta);
    Real r, t;
    if (A == B) {
        r = t = lambda / 2;
    } else {
        const Real K = Cc / boost::multiprecision::sinh(lambda);
        r = boost::multiprecision::asinh(A / K);
        t = lambda - r;
    }
    auto C = coupling_scalars<Real>(A, B, boost::multiprecision::exp(t), boost::multiprecision::exp(r));
    C.c = Cc;
    return C;
}

template <class S>
S evaluate_terms(const JointTerms& w, const CouplingScalars<S>& C) {
    return ipow(C.a, w.n_a) * ipow(C.b, w.n_b) * ipow(C.et, w.exp_t) * ipow(C.er, w.exp_r);
}

// Every η compatible with h (forced where only one diagonal agrees).
inline std::vector<EdgeBits> compatible_edges(const Geometry& g, const Config& h, CouplingPart part) {
    std::vector<int> free;
    EdgeBits base(g.vertex_count(), 0);
    for (int z = 0; z < g.vertex_count(); ++z) {
        const auto& r = g.vertices()[z];
        const auto e = r.even_slots(), o = r.odd_slots();
        const bool even_eq = h[r.face[e[0]]] == h[r.face[e[1]]];
        const bool odd_eq = h[r.face[o[0]]] == h[r.face[o[1]]];
        if (part == CouplingPart::even_cb && r.boundary) {
            if (!even_eq) return {};
            base[z] = 1;
        } else if (even_eq && odd_eq) {
            free.push_back(z);
        } else {
            base[z] = even_eq ? 1 : 0;
        }
    }
    std::vector<EdgeBits> out;
    for (long m = 0; m < (1L << free.size()); ++m) {
        EdgeBits b = base;
        for (std::size_t k = 0; k < free.size(); ++k) b[free[k]] = (m >> k) & 1;
        out.push_back(std::move(b));
    }
    return out;
}

template <class S>
struct PairMeasure {
    std::vector<std::pair<std::size_t, EdgeBits>> pairs;  // (height atom index, η)
    std::vector<S> edge_weight, cluster_weight;
    std::vector<Config> heights;
};

template <class S>
PairMeasure<S> enumerate_pairs(const Geometry& g, const CouplingScalars<S>& C, CouplingPart part, int max_free = 14) {
    PairMeasure<S> out;
    HeightSpaceOptions opt;
    opt.max_free = max_free;
    out.heights = enumerate_height_configs(g, opt);
    for (std::size_t k = 0; k < out.heights.size(); ++k)
        for (auto& eta : compatible_edges(g, out.heights[k], part)) {
            auto we = edge_form_terms(g, out.heights[k], eta, part);
            auto wc = cluster_form_terms(g, out.heights[k], eta, part);
            if (!we || !wc) throw OracleError("enumerated pair is not compatible");
            out.edge_weight.push_back(evaluate_terms(*we, C));
            out.cluster_weight.push_back(evaluate_terms(*wc, C));
            out.pairs.emplace_back(k, std::move(eta));
        }
    return out;
}

template <class S>
struct CouplingReport {
    Verdict hf_marginal, rc_marginal, cluster_vs_edge;
    std::size_t pairs = 0;
};

// Σ_η P(h,η) against the height weights and Σ_h P(h,η) against the random-cluster weights.
template <class S>
CouplingReport<S> marginal_checks(const Geometry& g, const CouplingScalars<S>& C, CouplingPart part) {
    CouplingReport<S> rep;
    const PairMeasure<S> pm = enumerate_pairs(g, C, part);
    rep.pairs = pm.pairs.size();

    ExactMeasure<S> hf_from_pairs, rc_from_pairs;
    {
        std::map<Config, S> hm, em;
        for (std::size_t k = 0; k < pm.pairs.size(); ++k) {
            hm[pm.heights[pm.pairs[k].first]] += pm.edge_weight[k];
            const auto& e = pm.pairs[k].second;
            em[Config(e.begin(), e.end())] += pm.edge_weight[k];
        }
        hf_from_pairs = from_map(hm);
        rc_from_pairs = from_map(em);
    }
    VertexWeights<S> vw{C.a, C.b, C.c, C.c_b};
    const auto hf = height_measure(g, pm.heights, vw, part == CouplingPart::plain ? WeightMode::plain : WeightMode::boundary_cb);
    rep.hf_marginal = equal_measures(hf_from_pairs, hf);

    // random-cluster target on the support of the coupling
    ExactMeasure<S> rc;
    const auto P = C.rc(part == CouplingPart::even_cb);
    const Graph& G = g.primal().graph;
    const int E = G.edge_count();
    if (E > 22) throw OracleError("too many edges for enumeration");
    for (long m = 0; m < (1L << E); ++m) {
        EdgeBits b = bits_of(m, E);
        if (part == CouplingPart::even_cb) {
            bool ok = true;
            for (int z = 0; z < E && ok; ++z)
                if (g.vertices()[z].boundary && !b[z]) ok = false;
            if (!ok) continue;
        }
        rc.add(Config(b.begin(), b.end()), rc_weight_exact(G, b, P));
    }
    rep.rc_marginal = equal_measures(rc_from_pairs, rc);

    Verdict& cv = rep.cluster_vs_edge;
    std::optional<S> ratio;
    for (std::size_t k = 0; k < pm.pairs.size(); ++k) {
        const S r = pm.cluster_weight[k] / pm.edge_weight[k];
        if (!ratio) {
            ratio = r;
            continue;
        }
        if (!nearly_equal(r, *ratio)) {
            cv.pass = false;
            cv.max_deviation = std::max(cv.max_deviation, relative_deviation(r, *ratio));
        }
    }
    if (ratio) cv.detail = "cluster/edge constant " + std::to_string(to_double(*ratio));
    return rep;
}

// Exact conditional law of the heights given η (inner faces only), from the joint weights.
template <class S>
std::map<Config, S> exact_conditional(const Geometry& g, const Config& eta_cfg, const CouplingScalars<S>& C,
                                      CouplingPart part) {
    EdgeBits eta(eta_cfg.begin(), eta_cfg.end());
    HeightSpaceOptions opt;
    std::map<Config, S> out;
    S z(0);
    for (const auto& h : enumerate_height_configs(g, opt)) {
        auto w = edge_form_terms(g, h, eta, part);
        if (!w) continue;
        const S x = evaluate_terms(*w, C);
        out[Config(h.begin(), h.begin() + g.inner_count())] += x;
        z += x;
    }
    for (auto& [k, v] : out) v /= z;
    return out;
}

// E[h(u)^2] under HF^{0,1;c_b = e^{λ/2}} against E[N_u]·4/q + E[N_u^2]·(e^λ - e^{-λ})^2/q under the
// coupled random-cluster measure. Even domain, a = b.
template <class S>
Verdict variance_decomposition_check(const Geometry& g, const CouplingScalars<S>& C, Face u) {
    const int fu = g.face_index(u);
    if (fu < 0 || !g.inner(fu) || !is_even(u)) throw OracleError("variance check needs an even face of the domain");
    const PairMeasure<S> pm = enumerate_pairs(g, C, CouplingPart::even_cb);
    std::map<Config, S> rc;
    for (std::size_t k = 0; k < pm.pairs.size(); ++k) {
        const auto& e = pm.pairs[k].second;
        rc[Config(e.begin(), e.end())] += pm.edge_weight[k];
    }
    S zr(0), n1(0), n2(0);
    CouplingParams dummy;  // only the tree shape is needed
    for (const auto& [cfg, w] : rc) {
        const EdgeBits eta(cfg.begin(), cfg.end());
        const TreeLaw law = tree_law(g, eta, dummy, CouplingPart::even_cb);
        const int n = law.steps_to_fixed(law.node_of_face[fu]);
        zr += w;
        n1 += w * n;
        n2 += w * n * n;
    }
    n1 /= zr;
    n2 /= zr;
    const S el = C.et * C.er;
    const S diff = el - S(1) / el;
    const S rhs = n1 * 4 / C.q + n2 * diff * diff / C.q;

    VertexWeights<S> vw{C.a, C.b, C.c, C.c_b};
    const auto hf = height_measure(g, pm.heights, vw, WeightMode::boundary_cb);
    S zh(0), m2(0);
    for (std::size_t k = 0; k < hf.size(); ++k) {
        zh += hf.weight[k];
        m2 += hf.weight[k] * hf.atoms[k][fu] * hf.atoms[k][fu];
    }
    const S lhs = m2 / zh;
    Verdict v;
    v.pass = nearly_equal(lhs, rhs);
    v.max_deviation = relative_deviation(lhs, rhs);
    v.detail = "E[h^2]=" + std::to_string(to_double(lhs)) + " decomposition=" + std::to_string(to_double(rhs));
    return v;
}

// ---------------------------------------------------------------- FK-Ising and Ashkin–Teller

template <class S>
struct FkScalars {
    S a{1}, b{1}, c{2};
};

template <class S>
S sigma_xi_weight(const SigmaXiTerms& t, const FkScalars<S>& F) {
    return ipow(F.a, t.a) * ipow(F.b, t.b) * ipow(S(F.c - F.a), t.c_minus_a) * ipow(S(F.c - F.b), t.c_minus_b);
}

// Every ξ compatible with σ.
inline std::vector<EdgeBits> compatible_xi(const Geometry& g, const Config& s) {
    EdgeBits base(g.vertex_count(), 0);
    std::vector<int> free;
    for (int z = 0; z < g.vertex_count(); ++z) {
        const auto& r = g.vertices()[z];
        const auto e = r.even_slots(), o = r.odd_slots();
        const bool ed = s[r.face[e[0]]] != s[r.face[e[1]]], od = s[r.face[o[0]]] != s[r.face[o[1]]];
        if (ed)
            base[z] = 1;
        else if (!od)
            free.push_back(z);
    }
    std::vector<EdgeBits> out;
    for (long m = 0; m < (1L << free.size()); ++m) {
        EdgeBits b = base;
        for (std::size_t k = 0; k < free.size(); ++k) b[free[k]] = (m >> k) & 1;
        out.push_back(std::move(b));
    }
    return out;
}

// ξ marginal of the joint (σ, ξ) law under ++ boundary.
template <class S>
ExactMeasure<S> xi_marginal(const GeometryPtr& gp, const FkScalars<S>& F) {
    std::map<Config, S> m;
    for (const auto& s : enumerate_spin_configs(*gp)) {
        const SpinConfig sc = as_spins(gp, s);
        for (auto& xi : compatible_xi(*gp, s)) {
            auto t = sigma_xi_terms(sc, xi);
            if (!t) throw OracleError("enumerated (σ, ξ) is not compatible");
            m[Config(xi.begin(), xi.end())] += sigma_xi_weight(*t, F);
        }
    }
    return from_map(m);
}

struct FkReport {
    Verdict spin_marginal;     // Σ_ξ (σ, ξ) against the spin weights
    Verdict xi_marginal;       // the closed form of the ξ marginal
    Verdict sigma_given_xi;    // σ∘ given ξ uniform over cluster-constant signs, plus at the root
    Verdict xi_given_sigma;    // conditional ξ probabilities against xi_open_probability
};

template <class S>
FkReport fk_ising_checks(const GeometryPtr& gp, const FkScalars<S>& F) {
    const Geometry& g = *gp;
    FkReport rep;
    const auto spins = enumerate_spin_configs(g);
    std::map<Config, S> spin_m, xi_m;
    std::map<Config, std::map<Config, S>> sigma_o_given_xi;  // ξ -> σ∘ -> weight
    const ModelParams mp{to_double(F.a), to_double(F.b), to_double(F.c), 1};
    for (const auto& s : spins) {
        const SpinConfig sc = as_spins(gp, s);
        const SpinVec so = dual_spins(sc);
        S zs(0);
        std::vector<std::pair<EdgeBits, S>> local;
        for (auto& xi : compatible_xi(g, s)) {
            auto t = sigma_xi_terms(sc, xi);
            if (!t) throw OracleError("enumerated (σ, ξ) is not compatible");
            const S w = sigma_xi_weight(*t, F);
            zs += w;
            xi_m[Config(xi.begin(), xi.end())] += w;
            sigma_o_given_xi[Config(xi.begin(), xi.end())][Config(so.begin(), so.end())] += w;
            local.emplace_back(std::move(xi), w);
        }
        spin_m[s] += zs;
        // per-edge conditional probabilities given σ
        for (int z = 0; z < g.vertex_count(); ++z) {
            S open(0);
            for (const auto& [xi, w] : local)
                if (xi[z]) open += w;
            const S pr = open / zs;
            const double expect = xi_open_probability(sc, z, mp);
            const double d = std::abs(to_double(pr) - expect);
            rep.xi_given_sigma.max_deviation = std::max(rep.xi_given_sigma.max_deviation, d);
            if (d > 1e-12) rep.xi_given_sigma.pass = false;
        }
    }
    VertexWeights<S> vw{F.a, F.b, F.c, S(1)};
    rep.spin_marginal = equal_measures(from_map(spin_m), spin_measure(gp, spins, vw, WeightMode::plain));

    // closed form: (c-1)^{|ξ|} 2^{k(ξ)} Σ_{σ•: ω(σ•) ⊆ ξ} (c-1)^{-|ω(σ•)|}   (a = b = 1)
    if (F.a == S(1) && F.b == S(1)) {
        std::vector<int> even_inner;
        for (int k = 0; k < g.inner_count(); ++k)
            if (is_even(g.face(k))) even_inner.push_back(k);
        std::map<Config, S> closed;
        const int E = g.vertex_count();
        for (long m = 0; m < (1L << E); ++m) {
            const EdgeBits xi = bits_of(m, E);
            S sum(0);
            Config s(g.face_count(), 1);
            for (long t = 0; t < (1L << even_inner.size()); ++t) {
                for (std::size_t k = 0; k < even_inner.size(); ++k) s[even_inner[k]] = (t >> k) & 1 ? -1 : 1;
                int omega = 0;
                bool inside = true;
                for (int z = 0; z < E && inside; ++z) {
                    const auto& r = g.vertices()[z];
                    const auto e = r.even_slots();
                    if (s[r.face[e[0]]] != s[r.face[e[1]]]) {
                        ++omega;
                        if (!xi[z]) inside = false;
                    }
                }
                if (inside) sum += ipow(S(F.c - 1), -omega);
            }
            if (sum == 0) continue;
            const Clusters cl = find_clusters(g.dual().graph, xi);
            int open = 0;
            for (auto x : xi) open += x;
            closed[Config(xi.begin(), xi.end())] = ipow(S(F.c - 1), open) * ipow(S(2), cl.count) * sum;
        }
        rep.xi_marginal = equal_measures(from_map(xi_m), from_map(closed));
    } else {
        rep.xi_marginal.detail = "closed form stated for a = b = 1 only";
    }

    // σ∘ | ξ
    for (const auto& [xi_cfg, m] : sigma_o_given_xi) {
        const EdgeBits xi(xi_cfg.begin(), xi_cfg.end());
        const Clusters cl = find_clusters(g.dual().graph, xi);
        S z(0);
        for (const auto& [so, w] : m) z += w;
        const S expect = ipow(S(2), -(cl.count - 1));
        std::size_t count = 0;
        for (const auto& [so, w] : m) {
            ++count;
            // plus on the root cluster, constant on clusters
            bool ok = so[g.dual().root] == 1;
            for (int e = 0; e < g.dual().graph.edge_count(); ++e)
                if (xi[e] && so[g.dual().graph.edges[e][0]] != so[g.dual().graph.edges[e][1]]) ok = false;
            const S pr = w / z;
            if (!ok || !nearly_equal(pr, expect)) {
                rep.sigma_given_xi.pass = false;
                rep.sigma_given_xi.max_deviation = std::max(rep.sigma_given_xi.max_deviation, relative_deviation(pr, expect));
            }
        }
        if (count != (std::size_t(1) << (cl.count - 1))) {
            rep.sigma_given_xi.pass = false;
            rep.sigma_given_xi.detail = "support differs from the cluster-constant assignments";
        }
    }
    return rep;
}

struct AtReport {
    Verdict fk_marginal;    // (σ, ξ) marginal of the five-variable law
    Verdict at_marginal;    // (τ, τ') marginal against AT^{free,+}
    Verdict tau_cluster;    // τ marginal against fair signs on ξ* clusters
    Verdict correlation;    // E[τ(u)τ(v)] = P(u ↔ v in ξ*)
};

// Five-variable law of (τ, τ', ξ, σ•, σ∘) on D with J on the self-dual curve (60 digits).
inline AtReport at_joint_check(const GeometryPtr& gp, const Real& J) {
    using S = Real;
    const Geometry& g = *gp;
    const Graph& G = g.primal().graph;
    const S U = -boost::multiprecision::log(boost::multiprecision::sinh(2 * J)) / 2;
    const S c = 1 / boost::multiprecision::tanh(2 * J);
    const int n = G.n;
    if (n > 16) throw OracleError("domain too large for the five-variable enumeration");
    std::vector<int> free_nodes;  // τ' is free only off the boundary
    for (int u = 0; u < n; ++u)
        if (!G.boundary[u]) free_nodes.push_back(u);

    // (τ bits, σ• bits) -> weight, via (σ•, ξ*) aggregates
    std::map<std::pair<long, long>, S> joint_tt;
    std::map<long, S> tau_m;
    std::vector<S> conn(static_cast<std::size_t>(n) * n, S(0));
    S z_total(0);

    const auto spins = enumerate_spin_configs(g);
    std::map<std::pair<long, Config>, S> agg;  // (σ• bits, ξ) -> weight summed over σ∘
    for (const auto& s : spins) {
        const SpinConfig sc = as_spins(gp, s);
        const SpinVec sb = primal_spins(sc);
        long sbits = 0;
        for (int u = 0; u < n; ++u)
            if (sb[u] < 0) sbits |= 1L << u;
        for (auto& xi : compatible_xi(g, s)) {
            auto t = sigma_xi_terms(sc, xi);
            const S w = ipow(S(c - 1), t->c_minus_a + t->c_minus_b);
            agg[{sbits, Config(xi.begin(), xi.end())}] += w;
        }
    }
    for (const auto& [key, w] : agg) {
        const long sbits = key.first;
        const EdgeBits xi(key.second.begin(), key.second.end());
        const EdgeBits xs = dual_bits(xi);
        const Clusters cl = find_clusters(G, xs);
        const S each = w * ipow(S(2), -cl.count);  // 2^{-k(ξ*)} per τ assignment
        for (long m = 0; m < (1L << cl.count); ++m) {
            long tbits = 0;
            for (int u = 0; u < n; ++u)
                if ((m >> cl.label[u]) & 1) tbits |= 1L << u;
            joint_tt[{tbits, sbits}] += each;
            tau_m[tbits] += each;
        }
        z_total += w;
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v)
                if (cl.label[u] == cl.label[v]) conn[u * n + v] += w;
    }
    AtReport rep;
    // (σ, ξ) marginal: the τ sum must return each FK-Ising weight, since 2^{k} · 2^{-k} = 1
    {
        std::map<long, S> by_sigma_joint, by_sigma_direct;
        for (const auto& [key, w] : joint_tt) by_sigma_joint[key.second] += w;
        for (const auto& [key, w] : agg) by_sigma_direct[key.first] += w;
        std::map<Config, S> a, b;
        for (const auto& [k, w] : by_sigma_joint) a[Config{static_cast<int>(k)}] = w;
        for (const auto& [k, w] : by_sigma_direct) b[Config{static_cast<int>(k)}] = w;
        rep.fk_marginal = equal_measures(from_map(a), from_map(b));
        S via_tau(0);
        for (const auto& [k, w] : joint_tt) via_tau += w;
        if (!nearly_equal(via_tau, z_total)) {
            rep.fk_marginal.pass = false;
            rep.fk_marginal.detail = "τ sum does not return the FK-Ising mass";
        }
    }
    // AT^{free,+} with τ = τ' on boundary vertices
    {
        ExactMeasure<S> from_joint, at;
        for (const auto& [key, w] : joint_tt) {
            const long tbits = key.first, sbits = key.second;
            const long t2 = tbits ^ sbits;
            from_joint.add(Config{static_cast<int>(tbits), static_cast<int>(t2)}, w);
        }
        const S e_same = boost::multiprecision::exp(2 * J + U), e_both = boost::multiprecision::exp(-2 * J + U),
                e_mixed = boost::multiprecision::exp(-U);
        for (long tb = 0; tb < (1L << n); ++tb)
            for (long m = 0; m < (1L << free_nodes.size()); ++m) {
                long t2 = tb;
                for (std::size_t k = 0; k < free_nodes.size(); ++k) {
                    const long bit = 1L << free_nodes[k];
                    t2 = ((m >> k) & 1) ? (t2 | bit) : (t2 & ~bit);
                }
                SpinVec a(n), b(n);
                for (int u = 0; u < n; ++u) {
                    a[u] = (tb >> u) & 1 ? -1 : 1;
                    b[u] = (t2 >> u) & 1 ? -1 : 1;
                }
                const AtCounts k = at_counts(G, a, b);
                at.add(Config{static_cast<int>(tb), static_cast<int>(t2)},
                       ipow(e_same, k.same) * ipow(e_both, k.both) * ipow(e_mixed, k.mixed));
            }
        rep.at_marginal = equal_measures(from_joint, at);
    }
    // τ marginal against independent fair signs on the clusters of ξ*
    {
        std::map<Config, S> direct, built;
        for (const auto& [t, w] : tau_m) direct[Config{static_cast<int>(t)}] += w;
        for (const auto& [key, w] : agg) {
            const EdgeBits xs = dual_bits(EdgeBits(key.second.begin(), key.second.end()));
            const Clusters cl = find_clusters(G, xs);
            for (long m = 0; m < (1L << cl.count); ++m) {
                long tbits = 0;
                for (int u = 0; u < n; ++u)
                    if ((m >> cl.label[u]) & 1) tbits |= 1L << u;
                built[Config{static_cast<int>(tbits)}] += w * ipow(S(2), -cl.count);
            }
        }
        rep.tau_cluster = equal_measures(from_map(direct), from_map(built));
    }
    // E[τ(u)τ(v)] against connectivity in ξ*
    {
        S zt(0);
        for (const auto& [t, w] : tau_m) zt += w;
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v) {
                S corr(0);
                for (const auto& [t, w] : tau_m) {
                    const int su = (t >> u) & 1 ? -1 : 1, sv = (t >> v) & 1 ? -1 : 1;
                    corr += w * su * sv;
                }
                corr /= zt;
                const S p = conn[u * n + v] / z_total;
                if (!nearly_equal(corr, p)) {
                    rep.correlation.pass = false;
                    rep.correlation.max_deviation = std::max(rep.correlation.max_deviation, relative_deviation(corr, p));
                }
            }
    }
    return rep;
}

inline AtReport at_joint_check(const GeometryPtr& gp, const std::string& J_text) { return at_joint_check(gp, Real(J_text)); }

}  // namespace icelab::oracle
