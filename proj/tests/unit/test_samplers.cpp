#include "icelab/samplers.hpp"

#include <doctest.h>

#include <cmath>

using namespace icelab;

TEST_CASE("estimators") {
    CHECK(total_variation({0.5, 0.5}, {1, 0}) == doctest::Approx(0.5));
    CHECK(total_variation({0.2, 0.8}, {0.2, 0.8}) == doctest::Approx(0));
    const EstimateWithError c = batch_means(std::vector<double>(640, 2.5));
    CHECK(c.mean == doctest::Approx(2.5));
    CHECK(c.stderr_ == doctest::Approx(0));

    Rng rng = make_rng(2, 0);
    std::vector<double> iid(100000);
    for (auto& x : iid) x = uniform01(rng);
    const EstimateWithError e = batch_means(iid);
    CHECK(std::abs(e.mean - 0.5) < 4 * e.stderr_);
    CHECK(e.stderr_ == doctest::Approx(std::sqrt(1.0 / 12 / iid.size())).epsilon(0.3));
    CHECK(integrated_autocorrelation(iid) == doctest::Approx(1).epsilon(0.2));
}

TEST_CASE("chain spec validation") {
    ChainSpec s;
    s.thinning = 0;
    CHECK_THROWS(s.validate());
    s.thinning = 1;
    s.sweeps = -1;
    CHECK_THROWS(s.validate());
}

TEST_CASE("single-face heat bath ratio is c^4") {
    auto g = make_geometry(Domain::diamond(1));
    const double c = 2.5;
    HeightChain chain(HeightFunction(g, BoundaryCondition::flat(0)), {1, 1, c, 1}, WeightMode::plain);
    const int k = g->face_index({0, 0});
    const double up = chain.up_probability(k);
    CHECK(up / (1 - up) == doctest::Approx(1 / std::pow(c, 4)));
}

TEST_CASE("height chains stay valid and are reproducible") {
    auto g = make_geometry(Domain::diamond(6));
    auto run = [&](std::uint64_t seed) {
        HeightChain chain(HeightFunction(g, BoundaryCondition::flat(0)), {1, 1, 2, 1}, WeightMode::plain);
        Rng rng = make_rng(seed, 0);
        for (int s = 0; s < 50; ++s) chain.sweep(rng);
        CHECK(chain.state().valid());
        return chain.state().h;
    };
    CHECK(run(4) == run(4));
    CHECK(run(4) != run(5));
}

TEST_CASE("rc chain without cluster weights is Bernoulli") {
    Geometry geo(Domain::diamond(8));
    const Graph& G = geo.primal().graph;
    RcParams P{1, 1, 0.3};
    RcChain chain(G, EdgeBits(G.edge_count(), 1), P);
    Rng rng = make_rng(6, 0);
    chain.sweep(rng);
    int open = 0;
    for (auto x : chain.state()) open += x;
    const double n = G.edge_count();
    CHECK(std::abs(open / n - 0.3) < 4 * std::sqrt(0.21 / n));

    RcChain full(G, EdgeBits(G.edge_count(), 1), RcParams{4, 1, 1});
    for (int s = 0; s < 3; ++s) full.sweep(rng);
    for (auto x : full.state()) CHECK(x == 1);
}

TEST_CASE("rc chain conditional matches the heat-bath ratio") {
    Geometry geo(Domain::diamond(4));
    const Graph& G = geo.primal().graph;
    const RcParams P{4.5, 1.7, p_critical(4.5)};
    Rng rng = make_rng(12, 0);
    EdgeBits start(G.edge_count());
    for (auto& x : start) x = bernoulli(rng, 0.5);
    RcChain chain(G, start, P);
    for (int t = 0; t < 20; ++t) {
        chain.sweep(rng);
        for (int e = 0; e < G.edge_count(); ++e)
            CHECK(chain.open_probability(e) == doctest::Approx(heat_bath_edge_ratio(G, chain.state(), e, P)));
    }
}
