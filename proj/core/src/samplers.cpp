#include "icelab/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace icelab {

void ChainSpec::validate() const {
    if (sweeps < 0 || burn_in < 0 || thinning < 1) throw std::invalid_argument("chain counts must be nonnegative, thinning >= 1");
}

EstimateWithError batch_means(const std::vector<double>& series, int batches) {
    EstimateWithError out;
    const std::size_t n = series.size();
    if (batches < 2 || n < static_cast<std::size_t>(batches)) {
        if (n) out.mean = std::accumulate(series.begin(), series.end(), 0.0) / n;
        return out;
    }
    const std::size_t len = n / batches;
    std::vector<double> m(batches);
    for (int b = 0; b < batches; ++b) {
        double s = 0;
        for (std::size_t k = 0; k < len; ++k) s += series[b * len + k];
        m[b] = s / len;
    }
    const double mean = std::accumulate(m.begin(), m.end(), 0.0) / batches;
    double var = 0;
    for (double x : m) var += (x - mean) * (x - mean);
    var /= (batches - 1);
    out.mean = mean;
    out.stderr_ = std::sqrt(var / batches);
    out.n_batches = batches;
    out.tau_int = integrated_autocorrelation(series);
    return out;
}

double integrated_autocorrelation(const std::vector<double>& x, long max_lag) {
    const long n = static_cast<long>(x.size());
    if (n < 4) return 1;
    if (max_lag < 0) max_lag = std::max(1L, n / 100);
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double c0 = 0;
    for (double v : x) c0 += (v - mean) * (v - mean);
    c0 /= n;
    if (c0 <= 0) return 1;
    double tau = 1;
    for (long t = 1; t <= max_lag && t < n; ++t) {
        double c = 0;
        for (long k = 0; k + t < n; ++k) c += (x[k] - mean) * (x[k + t] - mean);
        const double rho = c / (n * c0);
        if (rho < 0) break;
        tau += 2 * rho;
    }
    return tau;
}

HeightChain::HeightChain(HeightFunction start, const ModelParams& p, WeightMode mode, std::vector<Face> pinned)
    : h_(std::move(start)), p_(p), mode_(mode) {
    h_.validate();
    p_.validate();
    if (mode_ == WeightMode::boundary_cb && std::isinf(p_.c_b))
        throw std::invalid_argument("the heat bath needs a finite c_b");
    std::vector<char> skip(h_.geo->inner_count(), 0);
    for (Face f : pinned) {
        const int k = h_.geo->face_index(f);
        if (k < 0 || !h_.geo->inner(k)) throw std::invalid_argument("pinned face outside the domain");
        skip[k] = 1;
    }
    for (int k = 0; k < h_.geo->inner_count(); ++k)
        if (!skip[k]) sites_.push_back(k);
}

double HeightChain::vertex_weight(int v, int k, int value) const {
    const auto& r = h_.geo->vertices()[v];
    int x[4];
    for (int s = 0; s < 4; ++s) x[s] = r.face[s] == k ? value : h_.h[r.face[s]];
    const auto t = classify(x[NW], x[NE], x[SE], x[SW]);
    if (!t) return 0;
    if (r.boundary && mode_ != WeightMode::plain) {
        if (mode_ == WeightMode::stripped) return 1;
        return is_c_type(*t) ? p_.c_b : 1;
    }
    if (is_c_type(*t)) return p_.c;
    return (*t == VertexType::a1 || *t == VertexType::a2) ? p_.a : p_.b;
}

double HeightChain::up_probability(int k) const {
    const auto& nb = h_.geo->face_neighbours(k);
    const int w = h_.h[nb[0]];
    const auto& cs = h_.geo->face_corners(k);
    double up = 1, down = 1;
    for (int v : cs) {
        up *= vertex_weight(v, k, w + 1);
        down *= vertex_weight(v, k, w - 1);
    }
    return up + down > 0 ? up / (up + down) : 0.5;
}

void HeightChain::update(int k, Rng& rng) {
    const auto& nb = h_.geo->face_neighbours(k);
    const int w = h_.h[nb[0]];
    if (h_.h[nb[1]] != w || h_.h[nb[2]] != w || h_.h[nb[3]] != w) {
        uniform01(rng);  // keep the random stream aligned with the site order
        return;
    }
    h_.h[k] = uniform01(rng) < up_probability(k) ? w + 1 : w - 1;
}

void HeightChain::sweep(Rng& rng) {
    for (int k : sites_) update(k, rng);
}

RcChain::RcChain(const Graph& g, EdgeBits start, const RcParams& P) : g_(&g), P_(P), open_(std::move(start)) {
    P_.validate();
    if (static_cast<int>(open_.size()) != g.edge_count()) throw std::invalid_argument("edge configuration has the wrong size");
    std::vector<int> deg(g.n + 1, 0);
    for (auto [u, v] : g.edges) {
        ++deg[u];
        ++deg[v];
    }
    offset_.assign(g.n + 1, 0);
    for (int u = 0; u < g.n; ++u) offset_[u + 1] = offset_[u] + deg[u];
    nbr_.resize(offset_[g.n]);
    nbr_edge_.resize(offset_[g.n]);
    std::vector<int> fill(offset_.begin(), offset_.end() - 1);
    for (int e = 0; e < g.edge_count(); ++e) {
        const auto [u, v] = g.edges[e];
        nbr_[fill[u]] = v;
        nbr_edge_[fill[u]++] = e;
        nbr_[fill[v]] = u;
        nbr_edge_[fill[v]++] = e;
    }
    mark_.assign(g.n, 0);
}

bool RcChain::reaches_boundary(int v, int e) {
    // continue the breadth-first search of qb_ (already seeded with v's side)
    (void)v;
    std::size_t head = 0;
    const std::uint32_t s = mark_[qb_.front()];
    while (head < qb_.size()) {
        const int x = qb_[head++];
        if (g_->boundary[x]) return true;
        for (int k = offset_[x]; k < offset_[x + 1]; ++k) {
            if (nbr_edge_[k] == e || !open_[nbr_edge_[k]]) continue;
            const int y = nbr_[k];
            if (mark_[y] == s) continue;
            mark_[y] = s;
            qb_.push_back(y);
        }
    }
    return false;
}

double RcChain::open_probability(int e) {
    const double p = P_.p_for(g_->edge_class.empty() ? 0 : g_->edge_class[e]);
    const auto [u, v] = g_->edges[e];
    if (u == v) return p;
    if (stamp_ > 0xFFFFFFF0u) {
        std::fill(mark_.begin(), mark_.end(), 0);
        stamp_ = 0;
    }
    const std::uint32_t sa = stamp_ + 1, sb = stamp_ + 2;
    stamp_ += 2;
    qa_.assign(1, u);
    qb_.assign(1, v);
    mark_[u] = sa;
    mark_[v] = sb;
    bool ba = g_->boundary[u], bb = g_->boundary[v];
    std::size_t ha = 0, hb = 0;
    bool a_done = false;
    // one vertex from each side in turn
    auto expand = [&](std::vector<int>& q, std::size_t& head, std::uint32_t mine, std::uint32_t other, bool& bnd) {
        const int x = q[head++];
        for (int k = offset_[x]; k < offset_[x + 1]; ++k) {
            if (nbr_edge_[k] == e || !open_[nbr_edge_[k]]) continue;
            const int y = nbr_[k];
            if (mark_[y] == other) return true;
            if (mark_[y] == mine) continue;
            mark_[y] = mine;
            bnd |= g_->boundary[y] != 0;
            q.push_back(y);
        }
        return false;
    };
    while (true) {
        if (ha == qa_.size()) {
            a_done = true;
            break;
        }
        if (hb == qb_.size()) break;
        if (expand(qa_, ha, sa, sb, ba)) return p;
        if (ha == qa_.size()) {
            a_done = true;
            break;
        }
        if (expand(qb_, hb, sb, sa, bb)) return p;
    }
    // the two sides are disconnected; one of them is fully explored
    bool done_bnd = a_done ? ba : bb;
    double factor = P_.q;
    if (done_bnd) {
        bool other = a_done ? bb : ba;
        if (!other) {
            if (a_done) {
                other = reaches_boundary(v, e);
            } else {
                qb_.swap(qa_);
                other = reaches_boundary(u, e);
            }
        }
        if (other) factor = P_.q_b;
    }
    return p / (p + (1 - p) * factor);
}

void RcChain::update(int e, Rng& rng) {
    const double pr = open_probability(e);
    open_[e] = uniform01(rng) < pr ? 1 : 0;
}

void RcChain::sweep(Rng& rng) {
    for (int e = 0; e < g_->edge_count(); ++e) update(e, rng);
}

namespace {
EdgeBits prepared(const Geometry& g, CouplingPart part, EdgeBits start) {
    if (part == CouplingPart::even_cb)
        for (int z = 0; z < g.vertex_count(); ++z)
            if (g.vertices()[z].boundary) start[z] = 1;
    return start;
}
}  // namespace

CouplingChain::CouplingChain(GeometryPtr g, const CouplingParams& p, CouplingPart part, EdgeBits start)
    : g_(std::move(g)),
      p_(p),
      part_(part),
      rc_(g_->primal().graph, prepared(*g_, part, std::move(start)), part == CouplingPart::plain ? p.rc_plain() : p.rc_wired()) {
    forced_.assign(g_->vertex_count(), 0);
    if (part_ == CouplingPart::even_cb) {
        if (g_->domain().parity() != Parity::even) throw UnsupportedRegime("the c_b coupling needs an even domain");
        for (int z = 0; z < g_->vertex_count(); ++z) forced_[z] = g_->vertices()[z].boundary;
    }
}

void CouplingChain::sweep(Rng& rng) {
    for (int e = 0; e < g_->vertex_count(); ++e)
        if (!forced_[e]) rc_.update(e, rng);
}

TreeLaw CouplingChain::law() const { return tree_law(*g_, rc_.state(), p_, part_); }

HeightFunction CouplingChain::sample_heights(Rng& rng) const {
    return sample_heights_given_rc(g_, rc_.state(), p_, part_, rng);
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw std::invalid_argument("distributions of different sizes");
    double s = 0;
    for (std::size_t k = 0; k < p.size(); ++k) s += std::abs(p[k] - q[k]);
    return s / 2;
}

}  // namespace icelab
