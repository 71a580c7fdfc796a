#include "icelab/samplers.hpp"
#include "icelab/snapshot.hpp"

#include <doctest.h>

#include <sstream>

using namespace icelab;

namespace {

HeightFunction sample(const Domain& d) {
    auto g = make_geometry(d);
    HeightChain chain(HeightFunction(g, BoundaryCondition::flat(0)), {1, 1, 2, 1}, WeightMode::plain);
    Rng rng = make_rng(1, 0);
    for (int s = 0; s < 10; ++s) chain.sweep(rng);
    return chain.state();
}

std::string text_of(const Snapshot& s) {
    std::ostringstream os;
    write_snapshot(os, s);
    return os.str();
}

}  // namespace

TEST_CASE("state files round trip") {
    const HeightFunction h = sample(Domain::diamond(4));
    {
        std::istringstream is(text_of(Snapshot::of(h)));
        const Snapshot back = read_snapshot(is);
        CHECK(back.kind == SnapshotKind::heights);
        CHECK(back.geo->domain() == h.geo->domain());
        CHECK(back.heights.h == h.h);
    }
    {
        std::istringstream is(text_of(Snapshot::of(height_to_spin(h))));
        const Snapshot back = read_snapshot(is);
        CHECK(back.kind == SnapshotKind::spins);
        CHECK(back.spins.s == height_to_spin(h).s);
    }
    {
        EdgeBits e(h.geo->vertex_count(), 0);
        for (std::size_t k = 0; k < e.size(); k += 3) e[k] = 1;
        std::istringstream is(text_of(Snapshot::of(h.geo, e)));
        const Snapshot back = read_snapshot(is);
        CHECK(back.kind == SnapshotKind::rc);
        CHECK(back.edges == e);
    }
}

TEST_CASE("state file errors carry file lines") {
    const std::string good = text_of(Snapshot::of(sample(Domain::diamond(2))));
    // first grid row lives right after the @heights header
    const auto at = good.find("@heights\n");
    REQUIRE(at != std::string::npos);
    const int header_line = 1 + static_cast<int>(std::count(good.begin(), good.begin() + at, '\n'));
    std::string bad = good;
    bad.replace(at + 9, 1, "q");
    std::istringstream is(bad);
    const std::string expected = "line " + std::to_string(header_line + 1) + ":";
    CHECK_THROWS_WITH_AS(read_snapshot(is), doctest::Contains(expected.c_str()), SnapshotError);

    std::istringstream none("@heights\n0\n");
    CHECK_THROWS_AS(read_snapshot(none), SnapshotError);
    std::istringstream junk("hello\n");
    CHECK_THROWS_WITH(read_snapshot(junk), doctest::Contains("line 1"));
    std::istringstream kind("@domain\nD 1\nF 0 0\n@arrows\n");
    CHECK_THROWS_WITH(read_snapshot(kind), doctest::Contains("unknown section"));
}
