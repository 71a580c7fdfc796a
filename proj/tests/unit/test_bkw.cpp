#include "icelab/bkw.hpp"
#include "icelab/samplers.hpp"

#include <doctest.h>

#include <cmath>

using namespace icelab;

TEST_CASE("coupling parameters") {
    const CouplingParams c2 = derive_params(1, 1, 2);
    CHECK(c2.lambda == doctest::Approx(0));
    CHECK(c2.q == doctest::Approx(4));
    CHECK(c2.rc_plain().q_b == doctest::Approx(2));
    CHECK(c2.c_b == doctest::Approx(1));
    CHECK(c2.p == doctest::Approx(2.0 / 3));

    const CouplingParams c9 = derive_params(1, 1, std::sqrt(5.0));
    CHECK(c9.q == doctest::Approx(9));
    CHECK(c9.lambda == doctest::Approx(std::log((3 + std::sqrt(5.0)) / 2)));
    CHECK(c9.rc_plain().q_b == doctest::Approx(std::exp(-c9.lambda) * 3));
    CHECK(c9.rc_wired().q_b == doctest::Approx(1));
    CHECK(c9.c_b == doctest::Approx(std::exp(c9.lambda / 2)));

    CHECK_THROWS_AS(derive_params(1, 1, 1), UnsupportedRegime);
    CHECK_THROWS_AS(derive_params(1, 1, 1.9), UnsupportedRegime);

    const CouplingParams an = derive_params(1, 2, 3.5);
    CHECK(an.r + an.t == doctest::Approx(an.lambda));
    CHECK(an.a == doctest::Approx(an.K * std::sinh(an.r)));
    CHECK(an.b == doctest::Approx(an.K * std::sinh(an.t)));
    CHECK(an.c == doctest::Approx(an.K * std::sinh(an.lambda)));
}

TEST_CASE("flat heights are compatible with every configuration") {
    auto g = make_geometry(Domain::diamond(3));
    const HeightFunction flat(g, BoundaryCondition::flat(0));
    Rng rng = make_rng(9, 0);
    for (int t = 0; t < 50; ++t) {
        EdgeBits eta(g->vertex_count());
        for (auto& x : eta) x = bernoulli(rng, 0.5);
        CHECK(is_compatible(flat, eta));
    }
}

TEST_CASE("all open gives the flat function") {
    auto g = make_geometry(Domain::diamond(4));
    Rng rng = make_rng(1, 0);
    const HeightFunction h =
        sample_heights_given_rc(g, EdgeBits(g->vertex_count(), 1), derive_params(1, 1, 3), CouplingPart::plain, rng);
    CHECK(h.h == HeightFunction(g, BoundaryCondition::flat(0)).h);
}

TEST_CASE("edge and cluster forms differ by one constant") {
    for (double c : {2.0, 2.5, 3.0}) {
        auto g = make_geometry(Domain::diamond(3));
        const CouplingParams P = derive_params(1, 1, c);
        Rng rng = make_rng(17, 0);
        double ratio = 0;
        for (int t = 0; t < 100; ++t) {
            EdgeBits eta(g->vertex_count());
            for (auto& x : eta) x = bernoulli(rng, 0.5);
            const HeightFunction h = sample_heights_given_rc(g, eta, P, CouplingPart::plain, rng);
            REQUIRE(is_compatible(h, eta));
            const double r = joint_weight_edge(h, eta, P) / joint_weight_cluster(h, eta, P);
            if (t == 0) ratio = r;
            CHECK(r == doctest::Approx(ratio).epsilon(1e-10));
            if (c == 2.0) {
                CHECK(joint_weight_edge(h, eta, P) == doctest::Approx(1));
                CHECK(joint_weight_cluster(h, eta, P) == doctest::Approx(1));
            }
        }
    }
}

TEST_CASE("conditional moments agree with draws") {
    auto g = make_geometry(Domain::diamond(5));
    const CouplingParams P = derive_params(1, 1, 3);
    Rng rng = make_rng(23, 0);
    EdgeBits eta(g->vertex_count());
    for (auto& x : eta) x = bernoulli(rng, 0.3);
    const TreeLaw law = tree_law(*g, eta, P, CouplingPart::plain);
    const int k = g->face_index({0, 0});
    const auto [m1, m2] = conditional_moments(law, k);
    double s1 = 0, s2 = 0;
    const int n = 20000;
    for (int t = 0; t < n; ++t) {
        const double h = sample_heights_given_rc(g, eta, P, CouplingPart::plain, rng).h[k];
        s1 += h;
        s2 += h * h;
    }
    const double var = m2 - m1 * m1;
    CHECK(std::abs(s1 / n - m1) < 5 * std::sqrt(var / n) + 1e-12);
}
