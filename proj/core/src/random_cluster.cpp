#include "icelab/random_cluster.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace icelab {

void RcParams::validate() const {
    if (!(q > 0) || !(q_b > 0)) throw ClusterError("q and q_b must be positive");
    auto prob = [](double x) { return x >= 0 && x <= 1; };
    if (!prob(p) || !prob(p_h) || !prob(p_v)) throw ClusterError("edge probabilities must lie in [0,1]");
}

double p_critical(double q) {
    if (!(q >= 1)) throw ClusterError("p_critical needs q >= 1");
    const double s = std::sqrt(q);
    return s / (s + 1);
}

AnisotropicP anisotropic_critical(double a, double b, double q) {
    if (!(a > 0) || !(b > 0) || !(q >= 1)) throw ClusterError("anisotropic_critical needs a, b > 0 and q >= 1");
    const double s = std::sqrt(q);
    return {b * s / (b * s + a), a * s / (a * s + b)};
}

Clusters find_clusters(const Graph& g, const EdgeBits& open) {
    std::vector<std::vector<int>> adj(g.n);
    for (int e = 0; e < g.edge_count(); ++e)
        if (open[e]) {
            adj[g.edges[e][0]].push_back(g.edges[e][1]);
            adj[g.edges[e][1]].push_back(g.edges[e][0]);
        }
    Clusters c;
    c.label.assign(g.n, -1);
    std::deque<int> q;
    for (int s = 0; s < g.n; ++s) {
        if (c.label[s] >= 0) continue;
        const int id = c.count++;
        bool bnd = false;
        c.label[s] = id;
        q.push_back(s);
        while (!q.empty()) {
            const int u = q.front();
            q.pop_front();
            bnd |= g.boundary[u] != 0;
            for (int v : adj[u])
                if (c.label[v] < 0) {
                    c.label[v] = id;
                    q.push_back(v);
                }
        }
        c.boundary.push_back(bnd);
        (bnd ? c.k_b : c.k_i)++;
    }
    return c;
}

RcCounts rc_counts(const Graph& g, const EdgeBits& open) {
    const Clusters c = find_clusters(g, open);
    RcCounts n;
    n.k_i = c.k_i;
    n.k_b = c.k_b;
    for (int e = 0; e < g.edge_count(); ++e) {
        if (open[e]) {
            ++n.open;
            (g.edge_class.empty() || g.edge_class[e] == 0 ? n.open_a : n.open_b)++;
        } else {
            ++n.closed;
        }
    }
    return n;
}

double rc_weight(const Graph& g, const EdgeBits& open, const RcParams& P) {
    const Clusters c = find_clusters(g, open);
    double w = std::pow(P.q, c.k_i) * std::pow(P.q_b, c.k_b);
    for (int e = 0; e < g.edge_count(); ++e) {
        const double p = P.p_for(g.edge_class.empty() ? 0 : g.edge_class[e]);
        w *= open[e] ? p : 1 - p;
    }
    return w;
}

double heat_bath_edge_ratio(const Graph& g, const EdgeBits& open, int e, const RcParams& P) {
    std::vector<std::vector<int>> adj(g.n);
    for (int f = 0; f < g.edge_count(); ++f)
        if (open[f] && f != e) {
            adj[g.edges[f][0]].push_back(g.edges[f][1]);
            adj[g.edges[f][1]].push_back(g.edges[f][0]);
        }
    auto explore = [&](int s, std::vector<char>& seen) {
        bool bnd = false;
        std::deque<int> q{s};
        seen[s] = 1;
        while (!q.empty()) {
            const int u = q.front();
            q.pop_front();
            bnd |= g.boundary[u] != 0;
            for (int v : adj[u])
                if (!seen[v]) {
                    seen[v] = 1;
                    q.push_back(v);
                }
        }
        return bnd;
    };
    const double p = P.p_for(g.edge_class.empty() ? 0 : g.edge_class[e]);
    const int u = g.edges[e][0], v = g.edges[e][1];
    std::vector<char> seen(g.n, 0);
    const bool bu = explore(u, seen);
    if (seen[v]) return p;
    std::vector<char> seen2(g.n, 0);
    const bool bv = explore(v, seen2);
    const double factor = (bu && bv) ? P.q_b : P.q;
    return p / (p + (1 - p) * factor);
}

EdgeBits dual_bits(const EdgeBits& open) {
    EdgeBits d(open.size());
    for (std::size_t e = 0; e < open.size(); ++e) d[e] = open[e] ? 0 : 1;
    return d;
}

ClusterTree decompose(const Geometry& g, const EdgeBits& open) {
    if (static_cast<int>(open.size()) != g.vertex_count()) throw ClusterError("edge configuration has the wrong size");
    ClusterTree t;
    t.primal = find_clusters(g.primal().graph, open);
    t.dual = find_clusters(g.dual().graph, dual_bits(open));

    for (const auto& r : g.vertices())
        for (int s : r.even_slots())
            for (int o : r.odd_slots()) t.adjacency.emplace_back(t.primal.label[r.node[s]], t.dual.label[r.node[o]]);
    std::sort(t.adjacency.begin(), t.adjacency.end());
    t.adjacency.erase(std::unique(t.adjacency.begin(), t.adjacency.end()), t.adjacency.end());

    const int n = t.nodes();
    if (static_cast<int>(t.adjacency.size()) != n - 1) throw ClusterError("cluster adjacency is not a tree");
    std::vector<std::vector<int>> adj(n);
    for (auto [c, d] : t.adjacency) {
        adj[c].push_back(t.dual_node(d));
        adj[t.dual_node(d)].push_back(c);
    }
    t.root = t.dual_node(t.dual.label[g.dual().root]);
    t.parent.assign(n, -1);
    t.depth.assign(n, -1);
    t.depth[t.root] = 0;
    t.order.push_back(t.root);
    for (std::size_t k = 0; k < t.order.size(); ++k) {
        const int u = t.order[k];
        for (int v : adj[u])
            if (t.depth[v] < 0) {
                t.depth[v] = t.depth[u] + 1;
                t.parent[v] = u;
                t.order.push_back(v);
            }
    }
    if (static_cast<int>(t.order.size()) != n) throw ClusterError("cluster adjacency is not connected");
    return t;
}

void write_rc(std::ostream& os, const EdgeBits& open) {
    for (std::size_t e = 0; e < open.size(); ++e) os << "E " << e << ' ' << int(open[e]) << '\n';
}

EdgeBits read_rc(std::istream& is, int edges) {
    EdgeBits open(edges, 0);
    std::vector<char> seen(edges, 0);
    std::string line, tag;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        int z = -1, bit = -1;
        if (!(ls >> tag >> z >> bit) || tag != "E" || z < 0 || z >= edges || (bit != 0 && bit != 1))
            throw ClusterError("line " + std::to_string(lineno) + ": expected 'E <z> <0|1>'");
        if (seen[z]) throw ClusterError("line " + std::to_string(lineno) + ": edge listed twice");
        seen[z] = 1;
        open[z] = static_cast<std::uint8_t>(bit);
    }
    for (int z = 0; z < edges; ++z)
        if (!seen[z]) throw ClusterError("edge " + std::to_string(z) + " missing from snapshot");
    return open;
}

}  // namespace icelab
