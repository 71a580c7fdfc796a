#include "icelab/lattice.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

using namespace icelab;

namespace {

// |i ± j| <= N-1, counted directly
int diamond_size(int N) {
    int n = 0;
    for (int i = -N; i <= N; ++i)
        for (int j = -N; j <= N; ++j)
            if (std::abs(i + j) <= N - 1 && std::abs(i - j) <= N - 1) ++n;
    return n;
}

}  // namespace

TEST_CASE("diamond shape and parity") {
    const Domain d1 = Domain::diamond(1);
    REQUIRE(d1.size() == 1);
    CHECK(d1.faces()[0] == Face{0, 0});
    for (int N = 1; N <= 6; ++N) CHECK(Domain::diamond(N).size() == static_cast<std::size_t>(diamond_size(N)));

    CHECK(Domain::diamond(1).parity() == Parity::odd);
    CHECK(Domain::diamond(2).parity() == Parity::even);
    CHECK(Domain::diamond(3).parity() == Parity::odd);
    CHECK(Domain::diamond(2, {1, 0}).parity() == Parity::odd);
    CHECK(Domain::rectangle(3, 2).parity() == Parity::mixed);
}

TEST_CASE("boundary vertices and external boundary of a single face") {
    const Domain d = Domain::diamond(1);
    CHECK(d.boundary_vertices().size() == 4);
    CHECK(d.boundary_cycle().size() == 4);
    auto ext = d.external_boundary();
    std::sort(ext.begin(), ext.end());
    CHECK(ext == std::vector<Face>{{-1, 0}, {0, -1}, {0, 1}, {1, 0}});

    const Domain d3 = Domain::diamond(3);
    CHECK_FALSE(d3.on_boundary(Vertex{1, 1}));  // borders four faces
    for (int N = 1; N <= 6; ++N) CHECK(Domain::diamond(N).boundary_vertices().size() == static_cast<std::size_t>(4 * N));
}

TEST_CASE("corner graphs pair one edge with each vertex") {
    for (int N = 1; N <= 5; ++N) {
        Geometry g(Domain::diamond(N));
        CHECK(g.primal().graph.edge_count() == g.vertex_count());
        CHECK(g.dual().graph.edge_count() == g.vertex_count());
        int odd = 0;
        for (const Face& f : g.domain().faces()) odd += !is_even(f);
        int inner_dual = 0;
        for (int v = 0; v < g.dual().graph.n; ++v) inner_dual += g.dual().face_index[v] >= 0;
        CHECK(inner_dual == odd);
    }
    CHECK(Geometry(Domain::diamond(1)).primal().graph.edge_count() == 4);
}

TEST_CASE("domains must be simply connected") {
    CHECK_THROWS_AS(Domain::from_faces({{0, 0}, {2, 0}}), DomainError);
    std::vector<Face> ring;
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j)
            if (i || j) ring.push_back({i, j});
    CHECK_THROWS_AS(Domain::from_faces(ring), DomainError);
    CHECK_THROWS_AS(Domain::from_faces({}), DomainError);
}

TEST_CASE("domain snapshot round trip") {
    for (const Domain& d : {Domain::diamond(3), Domain::rectangle(3, 2, {1, -1}), Domain::square(2, {0, 1})}) {
        std::stringstream ss;
        write_domain(ss, d);
        CHECK(read_domain(ss) == d);
    }
    std::stringstream bad("D 1\nF 0 0\nX 1 2\n");
    CHECK_THROWS_WITH_AS(read_domain(bad), doctest::Contains("line 3"), DomainError);
}

TEST_CASE("T-neighbours") {
    auto n = t_neighbours({0, 0});
    std::set<Face> got(n.begin(), n.end());
    CHECK(got == std::set<Face>{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}, {2, 0}, {-2, 0}});
    for (Face f : n) CHECK(is_even(f));
    CHECK(t_adjacent({0, 0}, {2, 0}));
    CHECK_FALSE(t_adjacent({0, 0}, {0, 2}));
    CHECK_FALSE(t_adjacent({0, 0}, {1, 0}));
}

TEST_CASE("T-circuits") {
    const TCircuit ring{{{2, 0}, {1, 1}, {0, 2}, {-1, 1}, {-2, 0}, {-1, -1}, {0, -2}, {1, -1}}};
    CHECK(surrounds(ring, {0, 0}));
    CHECK_FALSE(surrounds(ring, {3, 0}));
    CHECK(std::abs(winding_number(ring, 0, 0)) == 1);

    const Domain box = Domain::square(4);
    CHECK_FALSE(exteriormost_t_circuit([](Face) { return false; }, true, box, {0, 0}).has_value());
    // every even face allowed: the outermost circuit hugs the box
    auto c = exteriormost_t_circuit([](Face) { return true; }, true, box, {0, 0});
    REQUIRE(c.has_value());
    CHECK(surrounds(*c, {0, 0}));
    int reach = 0;
    for (Face f : c->faces) reach = std::max(reach, std::max(std::abs(f.i), std::abs(f.j)));
    CHECK(reach == 4);
    // only the ring above: that ring is found
    auto only = exteriormost_t_circuit(
        [&](Face f) { return std::find(ring.faces.begin(), ring.faces.end(), f) != ring.faces.end(); }, true, box,
        {0, 0});
    REQUIRE(only.has_value());
    CHECK(std::set<Face>(only->faces.begin(), only->faces.end()) == std::set<Face>(ring.faces.begin(), ring.faces.end()));
}
