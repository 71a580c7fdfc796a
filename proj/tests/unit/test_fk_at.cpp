#include "icelab/fk_ising_at.hpp"
#include "icelab/samplers.hpp"

#include <doctest.h>

#include <cmath>

using namespace icelab;

TEST_CASE("self-dual curve") {
    const AtParams crit = selfdual_params(0.25 * std::log(3.0));
    CHECK(crit.U == doctest::Approx(0.25 * std::log(3.0)));
    CHECK(crit.c == doctest::Approx(2));
    CHECK_FALSE(crit.j_less_u);

    const AtParams p = selfdual_params(0.2);
    CHECK(p.c == doctest::Approx(1 / std::tanh(0.4)));
    CHECK(p.U == doctest::Approx(-0.5 * std::log(std::sinh(0.4))));
    CHECK(p.j_less_u);
    CHECK(std::sinh(2 * p.J) == doctest::Approx(std::exp(-2 * p.U)));
    CHECK_THROWS_AS(selfdual_params(0), FkError);
}

TEST_CASE("Ashkin-Teller weight of one edge") {
    Graph g;
    g.n = 2;
    g.edges = {{0, 1}};
    g.boundary = {1, 1};
    g.edge_class = {0};
    const double J = 0.2, U = 0.3;
    CHECK(at_weight(g, {1, 1}, {1, 1}, J, U) == doctest::Approx(std::exp(2 * J + U)));
    CHECK(at_weight(g, {1, -1}, {1, -1}, J, U) == doctest::Approx(std::exp(-2 * J + U)));
    CHECK(at_weight(g, {1, -1}, {1, 1}, J, U) == doctest::Approx(std::exp(-U)));
}

TEST_CASE("xi* given tau") {
    Graph g;
    g.n = 2;
    g.edges = {{0, 1}};
    g.boundary = {0, 0};
    g.edge_class = {0};
    const double J = 0.25 * std::log(3.0);
    Rng rng = make_rng(3, 0);
    for (int t = 0; t < 100; ++t) CHECK(sample_xi_star_given_tau(g, {1, -1}, {1, 1}, J, rng)[0] == 0);
    int open = 0;
    const int n = 200000;
    for (int t = 0; t < n; ++t) open += sample_xi_star_given_tau(g, {1, 1}, {-1, -1}, J, rng)[0];
    CHECK(std::abs(open / double(n) - 2.0 / 3) < 0.005);
}

TEST_CASE("spins given xi") {
    auto g = make_geometry(Domain::diamond(4));
    Rng rng = make_rng(4, 0);
    const SpinVec all_open = resample_spins_given_xi(*g, EdgeBits(g->vertex_count(), 1), rng);
    for (auto s : all_open) CHECK(s == 1);
}

TEST_CASE("tau tau' reproduces sigma") {
    auto g = make_geometry(Domain::diamond(5));
    const ModelParams mp{1, 1, selfdual_params(0.2).c, 1};
    HeightChain chain(HeightFunction(g, BoundaryCondition::flat(0)), mp, WeightMode::plain);
    Rng rng = make_rng(8, 0);
    for (int t = 0; t < 30; ++t) {
        chain.sweep(rng);
        const SpinConfig sigma = height_to_spin(chain.state());
        const EdgeBits xi = sample_xi_given_spins(sigma, mp, rng);
        CHECK(xi_compatible(sigma, xi));
        const SpinVec sb = primal_spins(sigma);
        const auto [tau, tau2] = sample_tau_given_xi_star(g->primal().graph, dual_bits(xi), sb, rng);
        for (std::size_t v = 0; v < sb.size(); ++v) CHECK(tau[v] * tau2[v] == sb[v]);
        CHECK(at_boundary_ok(g->primal().graph, tau, tau2));
    }
}
