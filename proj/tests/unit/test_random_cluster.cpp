#include "icelab/random_cluster.hpp"
#include "icelab/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace icelab;

namespace {

Graph single_edge(bool boundary) {
    Graph g;
    g.n = 2;
    g.edges = {{0, 1}};
    g.boundary = {static_cast<std::uint8_t>(boundary), 0};
    g.edge_class = {0};
    return g;
}

EdgeBits random_bits(int E, double p, Rng& rng) {
    EdgeBits b(E);
    for (auto& x : b) x = bernoulli(rng, p);
    return b;
}

}  // namespace

TEST_CASE("critical points") {
    CHECK(p_critical(4) == doctest::Approx(2.0 / 3));
    CHECK(p_critical(1) == doctest::Approx(0.5));
    CHECK(p_critical(9) == doctest::Approx(0.75));
    CHECK_THROWS_AS(p_critical(0.5), ClusterError);
    const auto ap = anisotropic_critical(2, 1, 4);
    CHECK(ap.p_h == doctest::Approx(1 * 2.0 / (1 * 2.0 + 2)));
    CHECK(ap.p_v == doctest::Approx(anisotropic_critical(1, 2, 4).p_h));
    const auto iso = anisotropic_critical(1, 1, 4);
    CHECK(iso.p_h == doctest::Approx(p_critical(4)));
    CHECK(iso.p_v == doctest::Approx(p_critical(4)));
}

TEST_CASE("single edge ratio") {
    const Graph g = single_edge(false);
    const RcParams P{2, 2, 0.5};
    const double open = rc_weight(g, {1}, P), closed = rc_weight(g, {0}, P);
    CHECK(open / closed == doctest::Approx(0.5));
    CHECK(heat_bath_edge_ratio(g, {0}, 0, P) == doctest::Approx(1.0 / 3));
}

TEST_CASE("an edge whose endpoints are already joined opens with probability p") {
    Graph g;
    g.n = 3;
    g.edges = {{0, 1}, {1, 2}, {0, 2}};
    g.boundary = {0, 0, 0};
    g.edge_class = {0, 0, 0};
    const RcParams P{4.5, 1, 0.3};
    CHECK(heat_bath_edge_ratio(g, {1, 1, 0}, 2, P) == doctest::Approx(0.3));
    CHECK(heat_bath_edge_ratio(g, {1, 1, 1}, 2, P) == doctest::Approx(0.3));
}

TEST_CASE("cluster counts") {
    Geometry geo(Domain::diamond(3));
    const Graph& G = geo.primal().graph;
    const Clusters closed = find_clusters(G, EdgeBits(G.edge_count(), 0));
    int nb = 0;
    for (auto b : G.boundary) nb += b;
    CHECK(closed.k_b == nb);
    CHECK(closed.k_i == G.n - nb);
    const Clusters open = find_clusters(G, EdgeBits(G.edge_count(), 1));
    CHECK(open.count == 1);
    CHECK(open.k_b == 1);
    CHECK(open.k_i == 0);
    CHECK(open.k_wired() == 1);
}

TEST_CASE("cluster adjacency is a tree on random configurations") {
    Geometry geo(Domain::diamond(4));
    Rng rng = make_rng(20240607, 0);
    for (int t = 0; t < 200; ++t) {
        const EdgeBits eta = random_bits(geo.vertex_count(), 0.5, rng);
        const ClusterTree tree = decompose(geo, eta);
        CHECK(static_cast<int>(tree.adjacency.size()) == tree.nodes() - 1);
        // Euler on the corner graphs: clusters of η and η* determine each other
        const Clusters dual = find_clusters(geo.dual().graph, dual_bits(eta));
        CHECK(dual.count == tree.dual.count);
    }
}

TEST_CASE("rc snapshot round trip") {
    Rng rng = make_rng(5, 0);
    const EdgeBits e = random_bits(12, 0.4, rng);
    std::stringstream ss;
    write_rc(ss, e);
    CHECK(read_rc(ss, 12) == e);
    std::stringstream dup("E 0 1\nE 0 0\n");
    CHECK_THROWS_WITH(read_rc(dup, 1), doctest::Contains("line 2"));
    std::stringstream missing("E 0 1\n");
    CHECK_THROWS_WITH(read_rc(missing, 2), doctest::Contains("missing"));
}
