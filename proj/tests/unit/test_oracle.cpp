#include "icelab/oracle.hpp"

#include <doctest.h>

using namespace icelab;
using namespace icelab::oracle;

namespace {

// Independent count: every assignment of values in a window, filtered by the ±1 rule.
long brute_force_count(const Geometry& g, int lo, int hi) {
    const int n = g.inner_count();
    std::vector<int> v(g.face_count());
    const BoundaryCondition bc = BoundaryCondition::flat(0);
    for (int k = n; k < g.face_count(); ++k) v[k] = bc.value(g.face(k));
    long count = 0;
    std::function<void(int)> rec = [&](int k) {
        if (k == n) {
            for (int u = 0; u < n; ++u)
                for (int m : g.face_neighbours(u))
                    if (std::abs(v[u] - v[m]) != 1) return;
            ++count;
            return;
        }
        for (int x = lo; x <= hi; ++x) {
            if ((x & 1) != (is_even(g.face(k)) ? 0 : 1)) continue;
            v[k] = x;
            rec(k + 1);
        }
    };
    rec(0);
    return count;
}

ExactMeasure<Rational> two_bits(Rational p00, Rational p01, Rational p10, Rational p11) {
    ExactMeasure<Rational> m;
    m.add({0, 0}, p00);
    m.add({0, 1}, p01);
    m.add({1, 0}, p10);
    m.add({1, 1}, p11);
    return m;
}

}  // namespace

TEST_CASE("height enumeration") {
    Geometry g1(Domain::diamond(1));
    const auto c1 = enumerate_height_configs(g1, {});
    CHECK(c1.size() == 2);
    const VertexWeights<Rational> w{1, 1, Rational(5, 2)};
    const auto mu = height_measure(g1, c1, w, WeightMode::plain);
    std::vector<Rational> ws = mu.weight;
    std::sort(ws.begin(), ws.end());
    CHECK(ws == std::vector<Rational>{Rational(1), Rational(625, 16)});

    for (const Domain& d : {Domain::diamond(2), Domain::diamond(2, {1, 0}), Domain::rectangle(3, 2)}) {
        Geometry g(d);
        CHECK(static_cast<long>(enumerate_height_configs(g, {}).size()) == brute_force_count(g, -6, 7));
    }
}

TEST_CASE("FKG lattice condition") {
    CHECK(fkg_lattice_check(two_bits(4, 2, 2, 1)).pass);  // product measure
    CHECK_FALSE(fkg_lattice_check(two_bits(1, 3, 3, 1)).pass);
}

TEST_CASE("stochastic domination") {
    const auto lo = two_bits(Rational(49, 100), Rational(21, 100), Rational(21, 100), Rational(9, 100));
    const auto hi = two_bits(Rational(16, 100), Rational(24, 100), Rational(24, 100), Rational(36, 100));
    CHECK(stochastic_domination_check(lo, lo).pass);
    CHECK(stochastic_domination_check(lo, hi).pass);
    CHECK_FALSE(stochastic_domination_check(hi, lo).pass);
}

TEST_CASE("random-cluster enumeration") {
    Graph g;
    g.n = 2;
    g.edges = {{0, 1}};
    g.boundary = {0, 0};
    g.edge_class = {0};
    RcScalars<Rational> P;
    P.q = 2;
    P.q_b = 2;
    P.p = Rational(1, 2);
    const auto mu = enumerate_rc(g, P);
    const auto m = mu.as_map();
    CHECK(m.at({1}) / m.at({0}) == Rational(1, 2));
}

TEST_CASE("single-face kernel") {
    Geometry g(Domain::diamond(1));
    const auto mu = height_measure(g, enumerate_height_configs(g, {}), VertexWeights<Rational>{1, 1, 3}, WeightMode::plain);
    const auto K = height_site_kernel(g, mu, g.face_index({0, 0}));
    REQUIRE(K.size() == 2);
    for (const auto& row : K.m) CHECK(row[0] + row[1] == 1);
    const auto pi = mu.probabilities();
    CHECK(stationary(K, pi).pass);
    CHECK(detailed_balance(K, pi).pass);
    CHECK(pi[0] / pi[1] == (mu.atoms[0][0] == 0 ? Rational(81) : Rational(1, 81)));
}
