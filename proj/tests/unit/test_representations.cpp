#include "icelab/representations.hpp"
#include "icelab/samplers.hpp"

#include <doctest.h>

#include <sstream>

using namespace icelab;

namespace {

HeightFunction random_heights(const Domain& d, double c, std::uint64_t seed, int sweeps = 20) {
    auto g = make_geometry(d);
    HeightChain chain(HeightFunction(g, BoundaryCondition::flat(0)), {1, 1, c, 1}, WeightMode::plain);
    Rng rng = make_rng(seed, 0);
    for (int s = 0; s < sweeps; ++s) chain.sweep(rng);
    return chain.state();
}

}  // namespace

TEST_CASE("vertex classification") {
    CHECK(classify(0, 1, 0, 1).has_value());
    const VertexType t = *classify(0, 1, 0, 1);
    CHECK((t == VertexType::c1 || t == VertexType::c2));
    CHECK_FALSE(classify(0, 2, 0, 1).has_value());
    // the six legal patterns around a vertex with NW = 0
    int legal = 0;
    for (int ne : {-1, 1})
        for (int se : {-2, 0, 2})
            for (int sw : {-1, 1})
                if (std::abs(se - ne) == 1 && std::abs(se - sw) == 1 && classify(0, ne, se, sw)) ++legal;
    CHECK(legal == 6);
}

TEST_CASE("single-face domain has weights c^4 and 1") {
    auto g = make_geometry(Domain::diamond(1));
    HeightFunction h(g, BoundaryCondition::flat(0));
    const int k = g->face_index({0, 0});
    h.h[k] = 0;
    const TypeCounts flat = type_counts(*g, h.h, WeightMode::plain);
    CHECK(flat == TypeCounts{0, 0, 4, 0});
    h.h[k] = 2;
    const TypeCounts bump = type_counts(*g, h.h, WeightMode::plain);
    CHECK(bump.a == 2);
    CHECK(bump.b == 2);
    CHECK(bump.c == 0);
    CHECK(height_weight(h, {1, 1, 3, 1}, WeightMode::plain) == doctest::Approx(1.0));
    h.h[k] = 0;
    CHECK(height_weight(h, {1, 1, 3, 1}, WeightMode::plain) == doctest::Approx(81.0));
}

TEST_CASE("c_b = 0 removes boundary c-vertices") {
    auto g = make_geometry(Domain::diamond(2));
    HeightFunction h(g, BoundaryCondition::flat(0));
    const TypeCounts n = type_counts(*g, h.h, WeightMode::boundary_cb);
    CHECK(n.cb > 0);
    CHECK(height_weight(h, {1, 1, 2, 0}, WeightMode::boundary_cb) == 0.0);
}

TEST_CASE("height validation") {
    auto g = make_geometry(Domain::diamond(2));
    HeightFunction h(g, BoundaryCondition::flat(0));
    CHECK(h.valid());
    h.h[g->face_index({0, 0})] = 4;
    CHECK_FALSE(h.valid());
    CHECK_THROWS_AS(h.validate(), RepresentationError);
    h.h[g->face_index({0, 0})] = 1;  // wrong parity
    CHECK_THROWS_WITH(h.validate(), doctest::Contains("parity"));
}

TEST_CASE("spin of height") {
    CHECK(spin_of_height(0) == 1);
    CHECK(spin_of_height(1) == 1);
    CHECK(spin_of_height(2) == -1);
    CHECK(spin_of_height(3) == -1);
    CHECK(spin_of_height(5) == 1);
    CHECK(spin_of_height(-1) == -1);
    CHECK(spin_of_height(-3) == 1);
    CHECK(spin_of_height(-4) == 1);
}

TEST_CASE("spin and arrow round trips on random heights") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        for (const Domain& d : {Domain::diamond(4), Domain::rectangle(5, 4)}) {
            const HeightFunction h = random_heights(d, 2.0, seed);
            const Face u = h.geo->face(0);
            const SpinConfig s = height_to_spin(h);
            CHECK(s.ice_rule());
            CHECK(spin_to_height(s, u, h.h[0]).h == h.h);
            const ArrowConfig a = height_to_arrows(h);
            CHECK(a.ice_rule());
            CHECK(arrows_to_height(a, u, h.h[0]).h == h.h);
            const ModelParams p{1.5, 0.5, 2.5, 1};
            CHECK(spin_weight(s, p, WeightMode::plain) == doctest::Approx(height_weight(h, p, WeightMode::plain)));
        }
    }
}

TEST_CASE("ice-rule violations are rejected") {
    auto g = make_geometry(Domain::diamond(2));
    const SpinConfig flat = height_to_spin(HeightFunction(g, BoundaryCondition::flat(0)));
    int violations = 0;
    for (int mask = 0; mask < 32; ++mask) {
        SpinConfig u = flat;
        for (int k = 0; k < 5; ++k)
            if (mask >> k & 1) u.s[k] = -u.s[k];
        if (u.ice_rule()) continue;
        ++violations;
        CHECK_THROWS_AS(spin_to_height(u, {0, 0}, 0), RepresentationError);
    }
    CHECK(violations > 0);
}

TEST_CASE("arrow event A is spin agreement across the edge") {
    const HeightFunction h = random_heights(Domain::diamond(4), 2.0, 11);
    const SpinConfig s = height_to_spin(h);
    const ArrowConfig a = height_to_arrows(h);
    const auto& g = *h.geo;
    for (int k = 0; k < g.inner_count(); ++k)
        for (Face v : neighbours(g.face(k))) {
            const int m = g.face_index(v);
            if (m < 0) continue;
            CHECK(arrow_event_A(a, g.face(k), v) == (s.s[k] == s.s[m]));
        }
}

TEST_CASE("height grid round trip and errors") {
    const HeightFunction h = random_heights(Domain::diamond(3), 2.0, 3);
    std::stringstream ss;
    write_heights(ss, h);
    const std::string text = ss.str();
    CHECK(read_heights(ss, h.geo).h == h.h);

    std::istringstream extra(text + "0\n");
    CHECK_THROWS_WITH(read_heights(extra, h.geo), doctest::Contains("more rows"));
    std::string broken = text;
    broken[broken.find_first_of("0123456789")] = 'x';
    std::istringstream bad(broken);
    CHECK_THROWS_WITH(read_heights(bad, h.geo), doctest::Contains("line 1"));

    std::stringstream sp;
    write_spins(sp, height_to_spin(h));
    CHECK(read_spins(sp, h.geo).s == height_to_spin(h).s);
}
