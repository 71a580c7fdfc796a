// Acceptance run: one PASS/FAIL line per criterion, with details underneath.
// Tolerances, budgets and seeds are fixed here so that the run is reproducible.

#include "icelab/experiments.hpp"
#include "icelab/oracle.hpp"
#include "icelab/oracle_suites.hpp"
#include "icelab/samplers.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

using namespace icelab;

namespace {

constexpr std::uint64_t kSeed = 20240607;

// criterion 1
constexpr double kRealTolerance = 1e-25;
// criterion 3
constexpr long kTvSweeps = 1000000;
constexpr double kTvLimit = 0.01;
constexpr double kTvRcQ = 4.5;
// criterion 4
constexpr long kConditionalDraws = 1000000;
constexpr double kMaxZ = 3.0;
constexpr double kMinExpected = 25;
// criterion 8
constexpr long kVarianceSweeps = 16000;
constexpr long kVarianceBurnIn = 1000;
constexpr int kVarianceSampleEvery = 5;
constexpr double kVarianceGap = 0.1;
// criterion 9
constexpr double kAtJ = 0.2;
constexpr int kAtHalfWidth = 24;
constexpr long kAtSweeps = 50000;
constexpr long kAtBurnIn = 2000;
constexpr int kAtProductDistance = 16;
constexpr double kAtEstimatorZ = 3.0;
// criterion 10
constexpr int kQbN = 32;
constexpr long kQbSweeps = 20000;
constexpr long kQbBurnIn = 1000;

constexpr double kZ95 = 1.959963984540054;

// Criteria known not to be met at this scale; the README explains each one.
const std::set<int> kExpectedFailures{3, 10};

struct Outcome {
    bool pass = true;
    std::vector<std::string> details;

    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
    void note(const std::string& what) { details.push_back("     " + what); }
};

struct Criterion {
    int id;
    std::string title;
    double budget_s;
    std::function<Outcome()> run;
};

std::string fmt(double x, int digits = 4) {
    std::ostringstream os;
    os << std::setprecision(digits) << x;
    return os.str();
}

std::string ci(const EstimateWithError& e) {
    return fmt(e.mean, 5) + " ± " + fmt(kZ95 * e.stderr_, 2);
}

bool overlap(const EstimateWithError& x, const EstimateWithError& y) {
    return std::abs(x.mean - y.mean) <= kZ95 * (x.stderr_ + y.stderr_);
}

// Every asserted line under the prefixes passes; real-valued lines also within tolerance.
void suite_lines(Outcome& out, const oracle::SuiteReport& r, const std::vector<std::string>& prefixes,
                 double tolerance = -1) {
    for (const auto& prefix : prefixes) {
        const auto lines = r.select(prefix);
        int failed = 0;
        double worst = 0;
        std::string witness;
        for (const auto& l : lines) {
            if (!l.asserted) continue;
            bool ok = l.pass && (tolerance < 0 || l.max_deviation <= tolerance);
            if (!ok) {
                ++failed;
                if (witness.empty()) witness = l.domain + ", " + l.params + ": " + l.witness;
            }
            worst = std::max(worst, l.max_deviation);
        }
        std::string what = prefix + ": " + std::to_string(lines.size()) + " checks, max deviation " + fmt(worst, 3);
        if (!witness.empty()) what += "; first failure " + witness;
        out.check(!lines.empty() && failed == 0, what);
    }
}

Outcome suite_outcome(const std::string& name, const std::vector<std::string>& prefixes, double tolerance = -1) {
    Outcome out;
    const auto r = oracle::run_suite(name);
    suite_lines(out, r, prefixes, tolerance);
    out.note("suite " + name + ": " + std::to_string(r.lines.size()) + " lines, " +
             std::to_string(r.failures()) + " failed");
    return out;
}

std::vector<double> normalised(const std::vector<double>& counts) {
    double total = 0;
    for (double c : counts) total += c;
    std::vector<double> p(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k) p[k] = counts[k] / total;
    return p;
}

// Expected TV of an iid empirical law of size n: Σ sqrt(p(1-p)/(2πn)).
double iid_tv_floor(const std::vector<double>& pi, long n) {
    double s = 0;
    for (double p : pi) s += std::sqrt(p * (1 - p));
    return s / std::sqrt(2 * M_PI * double(n));
}

// ------------------------------------------------------------------ criteria

Outcome criterion_3() {
    Outcome out = suite_outcome("kernels", {"kernels.height_detailed_balance", "kernels.height_sweep_stationary",
                                            "kernels.rc_detailed_balance", "kernels.rc_sweep_stationary"});
    const auto g = make_geometry(Domain::diamond(2));
    {
        const auto configs = oracle::enumerate_height_configs(*g, {});
        oracle::VertexWeights<double> w;
        w.c = 3;
        const auto mu = oracle::height_measure(*g, configs, w, WeightMode::plain);
        const auto pi = mu.probabilities();
        std::map<oracle::Config, std::size_t> index;
        for (std::size_t k = 0; k < mu.size(); ++k) index[mu.atoms[k]] = k;
        HeightChain chain(HeightFunction(g, BoundaryCondition::flat(0)), ModelParams{1, 1, 3, 1}, WeightMode::plain);
        Rng rng = make_rng(kSeed, 3);
        std::vector<double> counts(mu.size(), 0);
        long stray = 0;
        for (long s = 0; s < kTvSweeps; ++s) {
            chain.sweep(rng);
            const auto it = index.find(chain.state().h);
            if (it == index.end())
                ++stray;
            else
                counts[it->second] += 1;
        }
        const double tv = total_variation(normalised(counts), pi);
        out.check(stray == 0 && tv < kTvLimit, "heights on diamond(2), a=b=1 c=3, " + std::to_string(mu.size()) +
                                                   " atoms: TV " + fmt(tv, 3) + " (iid floor " +
                                                   fmt(iid_tv_floor(pi, kTvSweeps), 3) + ")");
    }
    {
        const Graph& G = g->primal().graph;
        const int E = G.edge_count();
        oracle::RcScalars<double> S;
        S.q = kTvRcQ;
        S.q_b = 1;
        S.p = p_critical(kTvRcQ);
        const auto pi = oracle::enumerate_rc(G, S).probabilities();
        RcChain chain(G, EdgeBits(E, 0), RcParams{kTvRcQ, 1, p_critical(kTvRcQ)});
        Rng rng = make_rng(kSeed, 4);
        std::vector<double> counts(pi.size(), 0);
        for (long s = 0; s < kTvSweeps; ++s) {
            chain.sweep(rng);
            long m = 0;
            for (int e = 0; e < E; ++e) m |= long(chain.state()[e]) << e;
            counts[m] += 1;
        }
        const double tv = total_variation(normalised(counts), pi);
        const double floor_ = iid_tv_floor(pi, kTvSweeps);
        out.check(tv < kTvLimit, "random cluster on the corner graph of diamond(2), " + std::to_string(E) +
                                     " edges, q=4.5 q_b=1 p=p_c: TV " + fmt(tv, 3) + " (iid floor " + fmt(floor_, 3) + ")");
        if (floor_ >= kTvLimit) out.note("an exact sampler would not meet the limit at this sample size either");
    }
    return out;
}

Outcome criterion_4() {
    Outcome out;
    const auto g = make_geometry(Domain::diamond(2));
    const int E = g->primal().graph.edge_count();
    const int inner = g->inner_count();
    auto name = [](const EdgeBits& e) {
        std::string s = "eta ";
        for (auto x : e) s += x ? '1' : '0';
        return s;
    };
    std::vector<std::pair<std::string, EdgeBits>> etas{{"all closed", EdgeBits(E, 0)}, {"all open", EdgeBits(E, 1)}};
    // the configuration whose conditional law has the most atoms, if not already listed
    const auto support = oracle::coupling_scalars<double>(1, 1, 1, 1);
    std::size_t best = 0;
    EdgeBits widest;
    for (long m = 0; m < (1L << E); ++m) {
        const EdgeBits e = oracle::bits_of(m, E);
        const auto law = oracle::exact_conditional(*g, oracle::Config(e.begin(), e.end()), support, CouplingPart::plain);
        if (law.size() > best) best = law.size(), widest = e;
    }
    if (widest != EdgeBits(E, 1)) etas.emplace_back(name(widest), widest);
    Rng pick = make_rng(kSeed, 40);
    for (int k = 0; k < 2; ++k) {
        EdgeBits e(E);
        for (auto& x : e) x = bernoulli(pick, 0.5);
        etas.emplace_back(name(e), e);
    }
    std::uint64_t stream = 400;
    for (const char* c : {"2", "3"}) {
        const auto C = oracle::real_coupling("1", "1", c);
        const CouplingParams p = derive_params(1, 1, std::stod(c));
        for (const auto& [label, eta] : etas) {
            const auto exact = oracle::exact_conditional(*g, oracle::Config(eta.begin(), eta.end()), C,
                                                         CouplingPart::plain);
            std::map<oracle::Config, double> counts;
            Rng rng = make_rng(kSeed, stream++);
            for (long n = 0; n < kConditionalDraws; ++n) {
                const HeightFunction h = sample_heights_given_rc(g, eta, p, CouplingPart::plain, rng);
                counts[oracle::Config(h.h.begin(), h.h.begin() + inner)] += 1;
            }
            // atoms expected fewer than kMinExpected times are pooled: a normal z is meaningless there
            double worst = 0, pooled_p = 0, pooled_got = 0;
            int pooled = 0;
            bool stray = false;
            for (const auto& [atom, n] : counts)
                if (!exact.count(atom)) stray = true;
            auto z_of = [](double pr, double got) {
                const double se = std::sqrt(pr * (1 - pr) / double(kConditionalDraws));
                return se > 0 ? std::abs(got - pr) / se : (got == pr ? 0 : INFINITY);
            };
            for (const auto& [atom, P] : exact) {
                const double pr = to_double(P);
                const auto it = counts.find(atom);
                const double got = it == counts.end() ? 0 : it->second / double(kConditionalDraws);
                if (pr * kConditionalDraws < kMinExpected) {
                    pooled_p += pr;
                    pooled_got += got;
                    ++pooled;
                } else {
                    worst = std::max(worst, z_of(pr, got));
                }
            }
            if (pooled > 0) worst = std::max(worst, z_of(pooled_p, pooled_got));
            out.check(!stray && worst < kMaxZ, "c=" + std::string(c) + ", " + label + ": " +
                                                   std::to_string(exact.size()) + " atoms (" + std::to_string(pooled) + " rare ones pooled), max |z| " + fmt(worst, 3) +
                                                   (stray ? ", sampled an atom of zero weight" : ""));
        }
    }
    return out;
}

Outcome criterion_8(int threads) {
    Outcome out;
    VarianceScalingConfig cfg;
    cfg.c_list = {2, 3};
    cfg.N_list = {8, 16, 32, 64};
    cfg.chain.seed = kSeed;
    cfg.chain.sweeps = kVarianceSweeps;
    cfg.chain.burn_in = kVarianceBurnIn;
    cfg.sample_every = kVarianceSampleEvery;
    cfg.threads = threads;
    const auto r = experiment_variance_scaling(cfg);
    for (double c : cfg.c_list) {
        std::string row;
        for (int N : cfg.N_list) row += " N=" + std::to_string(N) + ": " + ci(r.variance.at({c, N}));
        out.note("c=" + fmt(c) + " Var h(center):" + row);
    }
    const LinearFit& f3 = r.fits.at(3);
    out.check(f3.contains_zero(), "c=3 slope against log N: " + fmt(f3.slope, 3) + ", 95% CI [" + fmt(f3.lo, 3) +
                                      ", " + fmt(f3.hi, 3) + "] contains 0");
    const double gap = std::abs(r.variance.at({3.0, 32}).mean - r.variance.at({3.0, 64}).mean);
    out.check(gap < kVarianceGap, "c=3 |Var(N=32) - Var(N=64)| = " + fmt(gap, 3) + " < " + fmt(kVarianceGap));
    const LinearFit& f2 = r.fits.at(2);
    out.check(!f2.contains_zero(), "c=2 slope against log N: " + fmt(f2.slope, 3) + ", 95% CI [" + fmt(f2.lo, 3) +
                                       ", " + fmt(f2.hi, 3) + "] excludes 0");
    return out;
}

Outcome criterion_9(int threads) {
    Outcome out;
    AtSelfdualConfig cfg;
    cfg.J_list = {kAtJ};
    cfg.half_width = kAtHalfWidth;
    cfg.chain.seed = kSeed;
    cfg.chain.sweeps = kAtSweeps;
    cfg.chain.burn_in = kAtBurnIn;
    cfg.threads = threads;
    const auto r = experiment_at_selfdual(cfg);
    const AtCorrelations& a = r.per_J.at(0);
    for (std::size_t k = 0; k < a.distance.size(); ++k)
        out.note("d=" + std::to_string(a.distance[k]) + ": tau direct " + ci(a.tau_direct[k]) + ", connectivity " +
                 ci(a.tau_connect[k]) + ", product " + ci(a.product[k]));
    out.check(a.decay.hi < 0, "decay rate alpha = " + fmt(-a.decay.slope, 3) + ", slope 95% CI [" +
                                  fmt(a.decay.lo, 3) + ", " + fmt(a.decay.hi, 3) + "] lies below 0");
    bool found = false;
    for (std::size_t k = 0; k < a.distance.size(); ++k) {
        if (a.distance[k] != kAtProductDistance) continue;
        found = true;
        const auto& e = a.product[k];
        out.check(e.mean - kZ95 * e.stderr_ > 0, "product correlation at distance 16: " + ci(e) + ", CI above 0");
    }
    if (!found) out.check(false, "product correlation at distance 16 was not measured");
    out.check(a.max_estimator_z < kAtEstimatorZ,
              "direct and connectivity estimators: max |z| " + fmt(a.max_estimator_z, 3) + " < 3");
    return out;
}

QbInterpolationResult run_qb(double q, int threads) {
    QbInterpolationConfig cfg;
    cfg.q = q;
    cfg.N = kQbN;
    cfg.chain.seed = kSeed;
    cfg.chain.sweeps = kQbSweeps;
    cfg.chain.burn_in = kQbBurnIn;
    cfg.threads = threads;
    return experiment_qb_interpolation(cfg);
}

Outcome criterion_10(int threads) {
    Outcome out;
    const auto r9 = run_qb(9, threads);
    for (const auto& p : r9.points)
        out.note("q=9 q_b=" + fmt(p.q_b) + ": bulk density " + ci(p.bulk_density) + ", whole-domain density " +
                 ci(p.edge_density));
    const auto& P = r9.points;  // {1, e^{-λ}√q, e^{λ}√q, q}
    out.check(P.size() == 4 && overlap(P[0].bulk_density, P[1].bulk_density),
              "q=9: bulk density at q_b=1 and q_b=e^{-lambda}sqrt(q) overlap");
    out.check(P.size() == 4 && overlap(P[2].bulk_density, P[3].bulk_density),
              "q=9: bulk density at q_b=e^{lambda}sqrt(q) and q_b=q overlap");
    bool apart = P.size() == 4;
    for (int i : {0, 1})
        for (int j : {2, 3}) apart = apart && !overlap(P[i].bulk_density, P[j].bulk_density);
    out.check(apart, "q=9: every wired-side point is separated from every free-side point");

    const auto r2 = run_qb(2, threads);
    for (const auto& p : r2.points)
        out.note("q=2 q_b=" + fmt(p.q_b) + ": bulk density " + ci(p.bulk_density) + ", whole-domain density " +
                 ci(p.edge_density));
    bool flat = true;
    for (std::size_t i = 0; i < r2.points.size(); ++i)
        for (std::size_t j = i + 1; j < r2.points.size(); ++j)
            flat = flat && overlap(r2.points[i].bulk_density, r2.points[j].bulk_density);
    out.check(flat, "q=2: bulk density shows no q_b dependence (all 95% CIs overlap)");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"icelab acceptance run"};
    std::vector<int> only;
    int threads = 0;
    app.add_option("--only", only, "criteria to run (default: all)")->delimiter(',');
    app.add_option("--threads", threads, "worker threads for the experiments (0: hardware)");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria{
        {1, "coupling marginal identities", 30,
         [] { return suite_outcome("coupling", {"coupling.hf_marginal", "coupling.rc_marginal"}, kRealTolerance); }},
        {2, "cluster form and edge form agree up to a constant", 30,
         [] { return suite_outcome("cluster_form", {"cluster_form.constant_ratio"}); }},
        {3, "sampler correctness gates", 120, criterion_3},
        {4, "heights given the random cluster configuration", 120, criterion_4},
        {5, "FKG suites", 300,
         [] {
             return suite_outcome("fkg", {"fkg.heights", "fkg.rc", "fkg.sigma_even", "fkg.sigma_even_counterexample"});
         }},
        {6, "monotonicity suites", 120, [] { return suite_outcome("domination", {"domination."}); }},
        {7, "FK-Ising and Ashkin-Teller identities", 60, [] { return suite_outcome("fk_ising", {"fk.", "at."}); }},
        {8, "variance scaling", 600, [threads] { return criterion_8(threads); }},
        {9, "Ashkin-Teller correlations at J=0.2", 600, [threads] { return criterion_9(threads); }},
        {10, "boundary cluster weight interpolation", 600, [threads] { return criterion_10(threads); }},
        {11, "structural invariants", 60,
         [] {
             return suite_outcome("structure", {"structure.euler", "structure.spin_round_trip",
                                                "structure.arrow_round_trip", "structure.shift_pushforward"});
         }},
    };

    int unexpected = 0, failed = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out.check(false, std::string("exception: ") + e.what());
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.check(s <= c.budget_s, "time " + fmt(s, 3) + " s within " + fmt(c.budget_s) + " s");
        const bool expected = kExpectedFailures.count(c.id) > 0;
        std::cout << (out.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " (" << fmt(s, 3)
                  << " s)" << (!out.pass && expected ? " [known limitation]" : "") << '\n';
        for (const auto& d : out.details) std::cout << "    " << d << '\n';
        std::cout.flush();
        if (!out.pass) {
            ++failed;
            if (!expected) ++unexpected;
        }
    }
    std::cout << "acceptance: " << failed << " failed, " << unexpected << " unexpected\n";
    return unexpected == 0 ? 0 : 1;
}
