#include "icelab/oracle_suites.hpp"

#include "icelab/oracle.hpp"
#include "icelab/samplers.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace icelab::oracle {

bool SuiteReport::pass() const { return failures() == 0; }

int SuiteReport::failures() const {
    int n = 0;
    for (const auto& l : lines) n += l.asserted && !l.pass;
    return n;
}

std::vector<ReportLine> SuiteReport::select(const std::string& prefix) const {
    std::vector<ReportLine> out;
    for (const auto& l : lines)
        if (l.identity.rfind(prefix, 0) == 0) out.push_back(l);
    return out;
}

bool SuiteReport::pass(const std::string& prefix) const {
    const auto sel = select(prefix);
    if (sel.empty()) return false;
    for (const auto& l : sel)
        if (l.asserted && !l.pass) return false;
    return true;
}

std::string describe(const Domain& d, const std::string& name) {
    std::ostringstream os;
    os << name << " [" << d.size() << " faces, " << to_string(d.parity()) << "]";
    return os.str();
}

void write_report(std::ostream& os, const SuiteReport& r) {
    os << "suite " << r.name << "\n";
    for (const auto& l : r.lines) {
        const char* verdict = l.pass ? "PASS" : (l.asserted ? "FAIL" : "NOTE");
        os << verdict << "  " << l.identity << "\n";
        os << "    domain: " << l.domain << "\n";
        os << "    params: " << l.params << "\n";
        os << "    max_deviation: " << std::setprecision(3) << l.max_deviation << "\n";
        os << "    witness: " << (l.witness.empty() ? "-" : l.witness) << "\n";
    }
    os << "suite " << r.name << ": " << (r.pass() ? "PASS" : "FAIL") << " (" << r.lines.size() << " checks, "
       << r.failures() << " failed, " << std::fixed << std::setprecision(1) << r.seconds << " s)\n";
    os.unsetf(std::ios::fixed);
}

namespace {

std::string fmt(const Real& x) {
    std::ostringstream os;
    os << std::setprecision(10) << to_double(x);
    return os.str();
}
std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(10) << x;
    return os.str();
}

struct Named {
    std::string name;
    GeometryPtr g;
    std::string label() const { return describe(g->domain(), name); }
};

Named named(std::string n, Domain d) { return {std::move(n), make_geometry(std::move(d))}; }

Named lambda1() { return named("diamond(1)", Domain::diamond(1)); }
Named lambda2() { return named("diamond(2)", Domain::diamond(2)); }
Named lambda2_shift() { return named("diamond(2) at (1,0)", Domain::diamond(2, {1, 0})); }
Named lambda3() { return named("diamond(3)", Domain::diamond(3)); }
Named rect6() { return named("rectangle 3x2", Domain::rectangle(3, 2)); }
Named even8() {
    return named("plus(0,0)+plus(1,1)",
                 Domain::from_faces({{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {2, 1}, {1, 2}}));
}

ReportLine make_line(std::string id, std::string dom, std::string params, const Verdict& v, bool asserted = true) {
    ReportLine l;
    l.identity = std::move(id);
    l.domain = std::move(dom);
    l.params = std::move(params);
    l.pass = v.pass;
    l.asserted = asserted;
    l.max_deviation = v.max_deviation;
    l.witness = v.detail;
    return l;
}

// Folds many verdicts into one report line, keeping the first failure as witness.
struct Tally {
    int checked = 0, failed = 0;
    double max_dev = 0;
    std::string witness;

    void add(const Verdict& v, const std::string& where) {
        ++checked;
        max_dev = std::max(max_dev, v.max_deviation);
        if (!v.pass) {
            if (failed == 0) witness = where + (v.detail.empty() ? "" : ": " + v.detail);
            ++failed;
        }
    }
    void add(bool ok, double dev, const std::string& where) { add(Verdict{ok, dev, {}}, where); }
    ReportLine line(std::string id, std::string dom, std::string params) const {
        Verdict v{failed == 0, max_dev, witness};
        if (failed == 0) v.detail = std::to_string(checked) + " cases";
        else v.detail = std::to_string(failed) + "/" + std::to_string(checked) + " fail; first " + witness;
        return make_line(std::move(id), std::move(dom), std::move(params), v);
    }
};

template <class S>
struct NamedCoupling {
    std::string text;
    CouplingScalars<S> C;
};

std::vector<NamedCoupling<Rational>> rational_couplings() {
    return {{"a=1 b=1 c=2", coupling_scalars<Rational>(1, 1, 1, 1)},
            {"a=1 b=1 c=5/2", coupling_scalars<Rational>(1, 1, 2, 2)},
            {"a=16 b=9 c=35", coupling_scalars<Rational>(16, 9, 2, 3)}};
}

NamedCoupling<Real> real_c3() { return {"a=1 b=1 c=3", real_coupling("1", "1", "3")}; }

Verdict not_verdict(Verdict v, const std::string& what) {
    // turns "the check fails" into the passing outcome of an expected counterexample
    Verdict out;
    out.pass = !v.pass;
    out.max_deviation = v.max_deviation;
    out.detail = v.pass ? "no " + what + " found" : what + ": " + v.detail;
    return out;
}

// ------------------------------------------------------------------ coupling / cluster form

template <class S>
void coupling_instance(SuiteReport& r, const Named& d, const NamedCoupling<S>& nc, CouplingPart part, bool cluster_form) {
    const auto rep = marginal_checks(*d.g, nc.C, part);
    const std::string p = nc.text + (part == CouplingPart::plain ? " part=plain" : " part=even_cb") +
                          " pairs=" + std::to_string(rep.pairs);
    if (cluster_form) {
        r.lines.push_back(make_line("cluster_form.constant_ratio", d.label(), p, rep.cluster_vs_edge));
    } else {
        r.lines.push_back(make_line("coupling.hf_marginal", d.label(), p, rep.hf_marginal));
        r.lines.push_back(make_line("coupling.rc_marginal", d.label(), p, rep.rc_marginal));
    }
}

void coupling_family(SuiteReport& r, bool cluster_form) {
    const auto rc = rational_couplings();
    const auto c3 = real_c3();
    for (const Named& d : {lambda1(), lambda2(), rect6()}) {
        for (const auto& nc : rc) coupling_instance(r, d, nc, CouplingPart::plain, cluster_form);
        coupling_instance(r, d, c3, CouplingPart::plain, cluster_form);
    }
    for (const Named& d : {lambda2(), even8()}) {
        for (const auto& nc : rc)
            if (nc.C.isotropic) coupling_instance(r, d, nc, CouplingPart::even_cb, cluster_form);
        coupling_instance(r, d, c3, CouplingPart::even_cb, cluster_form);
    }
}

SuiteReport suite_coupling() {
    SuiteReport r;
    coupling_family(r, false);
    return r;
}

SuiteReport suite_cluster_form() {
    SuiteReport r;
    coupling_family(r, true);
    return r;
}

SuiteReport suite_variance() {
    SuiteReport r;
    const Named d2 = lambda2();
    const auto rc = rational_couplings();
    r.lines.push_back(make_line("variance.decomposition", d2.label(), rc[1].text + " u=(0,0)",
                                variance_decomposition_check(*d2.g, rc[1].C, Face{0, 0})));
    const auto c3 = real_c3();
    r.lines.push_back(make_line("variance.decomposition", d2.label(), c3.text + " u=(0,0)",
                                variance_decomposition_check(*d2.g, c3.C, Face{0, 0})));
    const Named d3 = named("diamond(3) at (1,0)", Domain::diamond(3, {1, 0}));
    const auto c22 = real_coupling("1", "1", "2.2");
    r.lines.push_back(make_line("variance.decomposition", d3.label(), "a=1 b=1 c=2.2 u=(0,0)",
                                variance_decomposition_check(*d3.g, c22, Face{0, 0})));
    return r;
}

// ------------------------------------------------------------------ kernels

template <class S>
void height_kernel_instance(SuiteReport& r, const Named& d, const VertexWeights<S>& w, WeightMode mode,
                            const std::string& text) {
    const Geometry& g = *d.g;
    const auto configs = enumerate_height_configs(g, HeightSpaceOptions{});
    const auto mu = height_measure(g, configs, w, mode);
    const auto pi = mu.probabilities();

    Tally db;
    Kernel<S> sweep;
    for (int k = 0; k < g.inner_count(); ++k) {
        const auto K = height_site_kernel(g, mu, k);
        db.add(detailed_balance(K, pi), "face " + std::to_string(k));
        sweep = k == 0 ? K : compose(sweep, K);
    }
    const std::string p = text + " atoms=" + std::to_string(mu.size());
    r.lines.push_back(db.line("kernels.height_detailed_balance", d.label(), p));
    r.lines.push_back(make_line("kernels.height_sweep_stationary", d.label(), p, stationary(sweep, pi)));
    r.lines.push_back(make_line("kernels.height_sweep_irreducible", d.label(), p,
                                Verdict{irreducible(sweep), 0, irreducible(sweep) ? "" : "sweep kernel is reducible"}));

    // the sampler's conditional against the exact one
    std::map<Config, std::size_t> idx;
    for (std::size_t k = 0; k < mu.size(); ++k) idx[mu.atoms[k]] = k;
    const ModelParams mp{to_double(w.a), to_double(w.b), to_double(w.c), to_double(w.c_b)};
    HeightChain chain(HeightFunction(d.g, BoundaryCondition::flat(0)), mp, mode);
    Tally cond;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        chain.state().h = mu.atoms[i];
        for (int k = 0; k < g.inner_count(); ++k) {
            const auto& nb = g.face_neighbours(k);
            const int v = mu.atoms[i][nb[0]];
            bool flat = true;
            for (int m : nb) flat &= mu.atoms[i][m] == v;
            if (!flat) continue;
            Config up = mu.atoms[i], down = mu.atoms[i];
            up[k] = v + 1;
            down[k] = v - 1;
            const auto iu = idx.find(up), id = idx.find(down);
            const S wu = iu == idx.end() ? S(0) : mu.weight[iu->second];
            const S wd = id == idx.end() ? S(0) : mu.weight[id->second];
            const double exact = to_double(S(wu / (wu + wd)));
            const double got = chain.up_probability(k);
            const double dev = std::abs(got - exact);
            cond.add(dev <= 1e-12, dev, "atom " + std::to_string(i) + " face " + std::to_string(k));
        }
    }
    r.lines.push_back(cond.line("kernels.height_sampler_conditional", d.label(), p));
}

Graph make_graph(int n, std::vector<std::array<int, 2>> edges, std::vector<int> boundary) {
    Graph g;
    g.n = n;
    g.edges = std::move(edges);
    g.boundary.assign(n, 0);
    for (int b : boundary) g.boundary[b] = 1;
    g.edge_class.assign(g.edges.size(), 0);
    return g;
}

struct NamedGraph {
    std::string name;
    Graph g;
};

// Graphs with at most eight edges.
std::vector<NamedGraph> small_graphs() {
    std::vector<NamedGraph> out;
    out.push_back({"path(4)", make_graph(4, {{0, 1}, {1, 2}, {2, 3}}, {0})});
    out.push_back({"square+diagonal", make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}}, {0, 2})});
    out.push_back({"K4", make_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}, {0})});
    out.push_back({"ladder 2x3", make_graph(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}, {0, 3}, {1, 4}, {2, 5}}, {0, 2, 3, 5})});
    out.push_back({"theta+tail",
                   make_graph(6, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}, {2, 4}, {4, 5}, {5, 3}}, {0, 4})});
    out.push_back({"corner graph of diamond(1)", make_geometry(Domain::diamond(1))->primal().graph});
    return out;
}

template <class S>
void rc_kernel_instance(SuiteReport& r, const NamedGraph& ng, const RcScalars<S>& P, const std::string& text,
                        bool matrices) {
    const Graph& g = ng.g;
    const auto mu = enumerate_rc(g, P);
    const int E = g.edge_count();
    RcParams dp;
    dp.q = to_double(P.q);
    dp.q_b = to_double(P.q_b);
    dp.p = to_double(P.p);
    RcChain chain(g, EdgeBits(E, 0), dp);
    Tally ratio;
    for (std::size_t m = 0; m < mu.size(); ++m) {
        const EdgeBits x = bits_of(static_cast<long>(m), E);
        chain.state() = x;
        for (int e = 0; e < E; ++e) {
            const std::size_t on = m | (std::size_t(1) << e), off = m & ~(std::size_t(1) << e);
            const double exact = to_double(S(mu.weight[on] / (mu.weight[on] + mu.weight[off])));
            const double d1 = std::abs(heat_bath_edge_ratio(g, x, e, dp) - exact);
            const double d2 = std::abs(chain.open_probability(e) - exact);
            const double dev = std::max(d1, d2);
            ratio.add(dev <= 1e-12, dev, "state " + std::to_string(m) + " edge " + std::to_string(e));
        }
    }
    const std::string graph = ng.name + " (" + std::to_string(E) + " edges)";
    r.lines.push_back(ratio.line("kernels.rc_sampler_conditional", graph, text));
    if (!matrices) return;
    const auto pi = mu.probabilities();
    Tally db;
    Kernel<S> sweep;
    for (int e = 0; e < E; ++e) {
        const auto K = rc_edge_kernel(mu, e);
        db.add(detailed_balance(K, pi), "edge " + std::to_string(e));
        sweep = e == 0 ? K : compose(sweep, K);
    }
    r.lines.push_back(db.line("kernels.rc_detailed_balance", graph, text));
    r.lines.push_back(make_line("kernels.rc_sweep_stationary", graph, text, stationary(sweep, pi)));
    r.lines.push_back(make_line("kernels.rc_sweep_irreducible", graph, text,
                                Verdict{irreducible(sweep), 0, irreducible(sweep) ? "" : "sweep kernel is reducible"}));
}

SuiteReport suite_kernels() {
    SuiteReport r;
    {
        // Λ_1: two atoms with weights c^4 and 1
        const Named d = lambda1();
        const VertexWeights<Rational> w{1, 1, Rational(5, 2), 1};
        const auto mu = height_measure(*d.g, enumerate_height_configs(*d.g, HeightSpaceOptions{}), w, WeightMode::plain);
        std::vector<Rational> ws = mu.weight;
        std::sort(ws.begin(), ws.end());
        const bool ok = ws.size() == 2 && ws[1] / ws[0] == ipow(w.c, 4);
        const auto K = height_site_kernel(*d.g, mu, 0);
        Verdict v = detailed_balance(K, mu.probabilities());
        v.pass = v.pass && ok;
        if (!ok) v.detail = "weights are not {c^4, 1}";
        r.lines.push_back(make_line("kernels.height_two_state", d.label(), "a=1 b=1 c=5/2", v));
    }
    const VertexWeights<Rational> iso{1, 1, Rational(5, 2), 1};
    height_kernel_instance(r, lambda2(), iso, WeightMode::plain, "a=1 b=1 c=5/2 plain");
    height_kernel_instance(r, lambda2(), VertexWeights<Rational>{1, 1, Rational(5, 2), 2}, WeightMode::boundary_cb,
                           "a=1 b=1 c=5/2 c_b=2");
    height_kernel_instance(r, lambda2(), iso, WeightMode::stripped, "a=1 b=1 c=5/2 stripped");
    height_kernel_instance(r, lambda2_shift(), VertexWeights<Rational>{Rational(3, 2), 1, 3, 1}, WeightMode::plain,
                           "a=3/2 b=1 c=3 plain");
    height_kernel_instance(r, rect6(), iso, WeightMode::plain, "a=1 b=1 c=5/2 plain");

    const std::vector<std::pair<std::string, RcScalars<Rational>>> params{
        {"q=2 q_b=3/2 p=1/2", {2, Rational(3, 2), Rational(1, 2)}},
        {"q=4 q_b=2 p=2/3", {4, 2, Rational(2, 3)}},
        {"q=9/2 q_b=1 p=3/5", {Rational(9, 2), 1, Rational(3, 5)}},
        {"q=9 q_b=3 p=3/4", {9, 3, Rational(3, 4)}},
    };
    const auto graphs = small_graphs();
    for (const auto& ng : graphs)
        for (const auto& [text, P] : params) rc_kernel_instance(r, ng, P, text, ng.g.edge_count() <= 6);
    const NamedGraph big{"corner graph of diamond(2)", lambda2().g->primal().graph};
    rc_kernel_instance(r, big, params[2].second, params[2].first, false);
    return r;
}

// ------------------------------------------------------------------ random cluster

SuiteReport suite_random_cluster() {
    SuiteReport r;
    {
        const double pc = p_critical(4);
        r.lines.push_back(make_line("rc.p_critical", "-", "q=4", Verdict{std::abs(pc - 2.0 / 3) < 1e-15, std::abs(pc - 2.0 / 3), ""}));
        Tally t;
        for (double a : {1.0, 1.5, 2.0})
            for (double b : {1.0, 0.5, 3.0})
                for (double q : {1.0, 4.0, 9.0}) {
                    const auto ap = anisotropic_critical(a, b, q);
                    const double lhs = ap.p_v / (1 - ap.p_v) * ap.p_h / (1 - ap.p_h);
                    t.add(std::abs(lhs - q) <= 1e-12 * q, std::abs(lhs - q) / q, "a=" + fmt(a) + " b=" + fmt(b) + " q=" + fmt(q));
                }
        r.lines.push_back(t.line("rc.anisotropic_criticality", "-", "grid a,b,q"));
    }
    {
        const Graph g = make_graph(2, {{0, 1}}, {});
        const RcScalars<Rational> P{2, 2, Rational(1, 2)};
        const auto mu = enumerate_rc(g, P);
        const Rational ratio = mu.weight[1] / mu.weight[0];
        r.lines.push_back(make_line("rc.single_edge_ratio", "single edge", "q=2 q_b=2 p=1/2",
                                    Verdict{ratio == Rational(1, 2), relative_deviation(ratio, Rational(1, 2)),
                                            "open/closed=" + ratio.str()}));
    }
    const auto graphs = small_graphs();
    for (const auto& ng : graphs) {
        Tally wired, free;
        for (Rational q : {Rational(1), Rational(2), Rational(9, 2), Rational(9)}) {
            const RcScalars<Rational> Pw{q, 1, Rational(2, 5)}, Pf{q, q, Rational(2, 5)};
            wired.add(equal_measures(enumerate_rc(ng.g, Pw), enumerate_rc_wired(ng.g, Pw)), "q=" + q.str());
            free.add(equal_measures(enumerate_rc(ng.g, Pf), enumerate_rc_free(ng.g, Pf)), "q=" + q.str());
        }
        r.lines.push_back(wired.line("rc.q_b_one_is_wired", ng.name, "q in {1,2,9/2,9} p=2/5"));
        r.lines.push_back(free.line("rc.q_b_q_is_free", ng.name, "q in {1,2,9/2,9} p=2/5"));
    }
    // RC_{q',p'}^{q_b'} below RC_{q,p}^{q_b} when q' >= q, q_b' >= q_b, p' <= p
    const RcScalars<Rational> base{2, Rational(3, 2), Rational(1, 2)};
    const std::vector<std::pair<std::string, RcScalars<Rational>>> above{
        {"q'=3 q_b'=2 p'=2/5", {3, 2, Rational(2, 5)}},
        {"q'=2 q_b'=2 p'=1/2", {2, 2, Rational(1, 2)}},
        {"q'=4 q_b'=3/2 p'=1/2", {4, Rational(3, 2), Rational(1, 2)}},
        {"q'=2 q_b'=3/2 p'=1/3", {2, Rational(3, 2), Rational(1, 3)}},
    };
    for (const auto& ng : graphs) {
        Tally t;
        for (const auto& [text, Pp] : above)
            t.add(stochastic_domination_check(enumerate_rc(ng.g, Pp), enumerate_rc(ng.g, base)), text);
        r.lines.push_back(t.line("rc.boundary_weight_sandwich", ng.name, "against q=2 q_b=3/2 p=1/2"));
    }
    return r;
}

// ------------------------------------------------------------------ FKG

SuiteReport suite_fkg() {
    SuiteReport r;
    const std::vector<Rational> grid{1, Rational(3, 2), 2, Rational(5, 2), 3};
    {
        const Named d = lambda2();
        const auto configs = enumerate_height_configs(*d.g, HeightSpaceOptions{});
        Tally t;
        for (const auto& a : grid)
            for (const auto& b : grid)
                for (const auto& c : grid) {
                    if (c < std::max(a, b)) continue;
                    const VertexWeights<Rational> w{a, b, c, 1};
                    t.add(fkg_lattice_check(height_measure(*d.g, configs, w, WeightMode::plain)),
                          "a=" + a.str() + " b=" + b.str() + " c=" + c.str());
                }
        r.lines.push_back(t.line("fkg.heights", d.label(), "5x5x5 grid over {1,3/2,2,5/2,3}, c >= max(a,b)"));
        const VertexWeights<Rational> bad{3, 1, 1, 1};
        r.lines.push_back(make_line("fkg.heights_counterexample", d.label(), "a=3 b=1 c=1",
                                    not_verdict(fkg_lattice_check(height_measure(*d.g, configs, bad, WeightMode::plain)),
                                                "counterexample")));
    }
    {
        // FKG regime: q >= 1 and q_b in [1, q], at p_c(q)
        for (const auto& ng : small_graphs()) {
            Tally t;
            for (const char* qs : {"1", "2", "4.5", "9"}) {
                const Real q(qs), sq = boost::multiprecision::sqrt(q);
                for (const Real& qb : {Real(1), sq, q}) {
                    RcScalars<Real> P;
                    P.q = q;
                    P.q_b = qb;
                    P.p = sq / (sq + 1);
                    t.add(fkg_lattice_check(enumerate_rc(ng.g, P)), std::string("q=") + qs + " q_b=" + fmt(qb));
                }
            }
            r.lines.push_back(t.line("fkg.rc", ng.name + " (" + std::to_string(ng.g.edge_count()) + " edges)",
                                     "q in {1,2,4.5,9}, q_b in {1,sqrt q,q}, p=p_c(q)"));
        }
        const NamedGraph six = small_graphs()[2];
        r.lines.push_back(make_line("fkg.rc", six.name + " (6 edges)", "q=2 q_b=3/2 p=1/2",
                                    fkg_lattice_check(enumerate_rc(six.g, RcScalars<Rational>{2, Rational(3, 2), Rational(1, 2)}))));
    }
    {
        // σ• marginal under all-plus boundary
        for (const Named& d : {lambda2(), rect6(), lambda3()}) {
            const auto configs = enumerate_spin_configs(*d.g);
            Tally t;
            for (const auto& a : grid)
                for (const auto& b : grid)
                    for (const auto& c : grid) {
                        if (c < std::max(a, b)) continue;
                        const VertexWeights<Rational> w{a, b, c, 1};
                        t.add(fkg_lattice_check(even_marginal(*d.g, spin_measure(d.g, configs, w, WeightMode::plain))),
                              "a=" + a.str() + " b=" + b.str() + " c=" + c.str());
                    }
            r.lines.push_back(t.line("fkg.sigma_even", d.label(), "plus boundary, 5x5x5 grid, c >= max(a,b)"));
        }
    }
    {
        // mixed odd boundary: two even faces that are never minus together
        const Named d = lambda2_shift();
        const Geometry& g = *d.g;
        std::vector<int> odd_out, even_in;
        for (int k = g.inner_count(); k < g.face_count(); ++k)
            if (!is_even(g.face(k))) odd_out.push_back(k);
        for (int k = 0; k < g.inner_count(); ++k)
            if (is_even(g.face(k))) even_in.push_back(k);
        Verdict v{false, 0, "no instance found"};
        for (long m = 0; m < (1L << odd_out.size()) && !v.pass; ++m) {
            auto outside = [&](Face f) {
                const int k = g.face_index(f);
                for (std::size_t t = 0; t < odd_out.size(); ++t)
                    if (odd_out[t] == k) return (m >> t) & 1 ? -1 : 1;
                return 1;
            };
            const auto configs = enumerate_spin_configs(g, outside);
            if (configs.empty()) continue;
            const auto mu = spin_measure(d.g, configs, VertexWeights<Rational>{1, 1, 3, 1}, WeightMode::plain);
            const Rational z = mu.total();
            for (std::size_t i = 0; i < even_in.size() && !v.pass; ++i)
                for (std::size_t j = i + 1; j < even_in.size() && !v.pass; ++j) {
                    Rational pu = 0, pv = 0, puv = 0;
                    for (std::size_t k = 0; k < mu.size(); ++k) {
                        const bool a = mu.atoms[k][even_in[i]] < 0, b = mu.atoms[k][even_in[j]] < 0;
                        if (a) pu += mu.weight[k];
                        if (b) pv += mu.weight[k];
                        if (a && b) puv += mu.weight[k];
                    }
                    if (pu > 0 && pv > 0 && puv == 0) {
                        std::ostringstream os;
                        const Face u = g.face(even_in[i]), w = g.face(even_in[j]);
                        os << "minus outside at odd faces";
                        for (std::size_t t = 0; t < odd_out.size(); ++t)
                            if ((m >> t) & 1) os << " (" << g.face(odd_out[t]).i << "," << g.face(odd_out[t]).j << ")";
                        os << "; u=(" << u.i << "," << u.j << ") v=(" << w.i << "," << w.j << ") P(u-)="
                           << to_double(Rational(pu / z)) << " P(v-)=" << to_double(Rational(pv / z)) << " P(both-)=0";
                        v = Verdict{true, 0, os.str()};
                    }
                }
        }
        r.lines.push_back(make_line("fkg.sigma_even_counterexample", d.label(), "a=1 b=1 c=3, mixed odd boundary", v));
    }
    {
        // ξ: asserted for c >= max(2a, 2b), reported in the open band a + b <= c < max(2a, 2b)
        const std::vector<Named> doms{lambda1(), named("two faces (0,0),(1,0)", Domain::from_faces({{0, 0}, {1, 0}})),
                                      named("L-tromino", Domain::from_faces({{0, 0}, {1, 0}, {0, 1}}))};
        const std::vector<std::array<Rational, 3>> params{
            {1, 1, 2}, {1, 1, Rational(5, 2)}, {1, 1, 3}, {1, 2, 4}, {1, 2, 5}, {1, 2, 3}, {1, 2, Rational(7, 2)}};
        for (const auto& d : doms) {
            if (d.g->vertex_count() > 8) continue;
            for (const auto& [a, b, c] : params) {
                const bool asserted = c >= 2 * std::max(a, b);
                const FkScalars<Rational> F{a, b, c};
                r.lines.push_back(make_line(asserted ? "fkg.xi" : "fkg.xi_open_band", d.label(),
                                            "a=" + a.str() + " b=" + b.str() + " c=" + c.str(),
                                            fkg_lattice_check(xi_marginal(d.g, F)), asserted));
            }
        }
    }
    return r;
}

// ------------------------------------------------------------------ domination

template <class S>
struct CbValue {
    std::string text;
    S value;
    bool infinite = false;
};

template <class S>
ExactMeasure<S> hf_cb(const Geometry& g, const std::vector<Config>& configs, const S& c, const CbValue<S>& cb) {
    VertexWeights<S> w{S(1), S(1), c, cb.value};
    w.c_b_infinite = cb.infinite;
    return inner_marginal(g, height_measure(g, configs, w, WeightMode::boundary_cb));
}

template <class S>
void sandwich(SuiteReport& r, const Named& d, const S& c, const std::string& ctext, const std::vector<CbValue<S>>& cbs,
              bool asserted) {
    const Geometry& g = *d.g;
    const VertexWeights<S> w{S(1), S(1), c, S(1)};
    const auto configs = enumerate_height_configs(g, HeightSpaceOptions{});
    const auto lower = inner_marginal(g, height_measure(g, stripped_height_configs(g, BoundaryCondition::flat(-1)), w, WeightMode::stripped));
    const auto upper = inner_marginal(g, height_measure(g, stripped_height_configs(g, BoundaryCondition::flat(0)), w, WeightMode::stripped));
    const auto upper2 = inner_marginal(g, height_measure(g, stripped_height_configs(g, BoundaryCondition::flat(1)), w, WeightMode::stripped));
    std::vector<ExactMeasure<S>> mids;
    for (const auto& cb : cbs) mids.push_back(hf_cb(g, configs, c, cb));
    const std::string pre = asserted ? "domination." : "domination.odd_domain.";
    for (std::size_t k = 0; k < cbs.size(); ++k) {
        const std::string p = ctext + " c_b=" + cbs[k].text;
        if (asserted) {
            r.lines.push_back(make_line(pre + "lower_sandwich", d.label(), p + " HF^{-1,0} <= HF^{0,1;c_b}",
                                        stochastic_domination_check(lower, mids[k])));
            r.lines.push_back(make_line(pre + "upper_sandwich", d.label(), p + " HF^{0,1;c_b} <= HF^{0,1}",
                                        stochastic_domination_check(mids[k], upper)));
        } else {
            r.lines.push_back(make_line(pre + "unshifted_upper", d.label(), p + " HF^{0,1;c_b} <= HF^{0,1}",
                                        stochastic_domination_check(mids[k], upper), false));
            r.lines.push_back(make_line(pre + "shifted_lower", d.label(), p + " HF^{0,1} <= HF^{0,1;c_b}",
                                        stochastic_domination_check(upper, mids[k]), false));
            r.lines.push_back(make_line(pre + "shifted_upper", d.label(), p + " HF^{0,1;c_b} <= HF^{2,1}",
                                        stochastic_domination_check(mids[k], upper2), false));
        }
        if (k + 1 < cbs.size()) {
            const std::string pm = ctext + " c_b=" + cbs[k].text + " c_b'=" + cbs[k + 1].text;
            r.lines.push_back(make_line(pre + "monotone_in_c_b", d.label(), pm,
                                        stochastic_domination_check(mids[k], mids[k + 1]), asserted));
            if (!asserted)
                r.lines.push_back(make_line(pre + "reversed_in_c_b", d.label(), pm,
                                            stochastic_domination_check(mids[k + 1], mids[k]), false));
        }
    }
}

template <class S>
void spin_monotone(SuiteReport& r, const Named& d, const S& c, const std::string& ctext, const std::vector<CbValue<S>>& cbs) {
    const Geometry& g = *d.g;
    const auto configs = enumerate_spin_configs(g);
    std::vector<ExactMeasure<S>> ms;
    for (const auto& cb : cbs) {
        VertexWeights<S> w{S(1), S(1), c, cb.value};
        w.c_b_infinite = cb.infinite;
        ms.push_back(even_marginal(g, spin_measure(d.g, configs, w, WeightMode::boundary_cb)));
    }
    for (std::size_t k = 0; k + 1 < cbs.size(); ++k)
        r.lines.push_back(make_line("domination.spin_monotone_in_c_b", d.label(),
                                    ctext + " c_b=" + cbs[k].text + " c_b'=" + cbs[k + 1].text + " sigma-even marginal",
                                    stochastic_domination_check(ms[k], ms[k + 1])));
}

SuiteReport suite_domination() {
    SuiteReport r;
    {
        const Named d = lambda2();
        const auto mu = inner_marginal(*d.g, height_measure(*d.g, enumerate_height_configs(*d.g, HeightSpaceOptions{}),
                                                            VertexWeights<Rational>{1, 1, 2, 1}, WeightMode::plain));
        r.lines.push_back(make_line("domination.identity", d.label(), "a=1 b=1 c=2", stochastic_domination_check(mu, mu)));
    }
    // c = 2: λ = 0, so e^{±λ/2} = 1
    const std::vector<CbValue<Rational>> cb2{{"0", 0}, {"1", 1}, {"inf", 0, true}};
    const auto C3 = real_coupling("1", "1", "3");
    const Real e = C3.c_b;
    const std::vector<CbValue<Real>> cb3{{"0", Real(0)}, {"e^{-lambda/2}", 1 / e}, {"1", Real(1)}, {"e^{lambda/2}", e},
                                         {"inf", Real(0), true}};
    sandwich<Rational>(r, lambda2(), Rational(2), "a=1 b=1 c=2", cb2, true);
    sandwich<Real>(r, lambda2(), Real(3), "a=1 b=1 c=3", cb3, true);
    spin_monotone<Rational>(r, lambda3(), Rational(2), "a=1 b=1 c=2", cb2);
    spin_monotone<Real>(r, lambda3(), Real(3), "a=1 b=1 c=3", cb3);
    // odd domains: findings only
    sandwich<Real>(r, lambda2_shift(), Real(3), "a=1 b=1 c=3", cb3, false);
    sandwich<Real>(r, lambda3(), Real(3), "a=1 b=1 c=3", cb3, false);
    return r;
}

// ------------------------------------------------------------------ FK-Ising / Ashkin–Teller

template <class S>
void fk_instance(SuiteReport& r, const Named& d, const FkScalars<S>& F, const std::string& text) {
    const FkReport rep = fk_ising_checks(d.g, F);
    r.lines.push_back(make_line("fk.spin_marginal", d.label(), text, rep.spin_marginal));
    if (F.a == S(1) && F.b == S(1)) r.lines.push_back(make_line("fk.xi_marginal_closed_form", d.label(), text, rep.xi_marginal));
    r.lines.push_back(make_line("fk.sigma_given_xi", d.label(), text, rep.sigma_given_xi));
    r.lines.push_back(make_line("fk.xi_given_sigma", d.label(), text, rep.xi_given_sigma));
}

void at_instance(SuiteReport& r, const Named& d, const Real& J, const std::string& text) {
    const AtReport rep = at_joint_check(d.g, J);
    r.lines.push_back(make_line("at.fk_marginal", d.label(), text, rep.fk_marginal));
    r.lines.push_back(make_line("at.at_marginal", d.label(), text, rep.at_marginal));
    r.lines.push_back(make_line("at.tau_given_clusters", d.label(), text, rep.tau_cluster));
    r.lines.push_back(make_line("at.correlation_is_connectivity", d.label(), text, rep.correlation));
}

Named block() { return named("2x2 even-face block (diamond(2) at (1,0))", Domain::diamond(2, {1, 0})); }

SuiteReport suite_fk_ising() {
    SuiteReport r;
    const Named b = block();
    const Real J1 = boost::multiprecision::log(Real(3)) / 4, J2("0.2");
    const Real c2 = 1 / boost::multiprecision::tanh(2 * J2);
    fk_instance(r, b, FkScalars<Rational>{1, 1, 2}, "J=log(3)/4 c=2");
    fk_instance(r, b, FkScalars<Real>{Real(1), Real(1), c2}, "J=0.2 c=coth(0.4)");
    fk_instance(r, lambda2(), FkScalars<Rational>{1, 1, Rational(5, 2)}, "a=1 b=1 c=5/2");
    fk_instance(r, rect6(), FkScalars<Rational>{1, 1, 3}, "a=1 b=1 c=3");
    fk_instance(r, lambda2(), FkScalars<Rational>{1, 2, 4}, "a=1 b=2 c=4");
    at_instance(r, b, J1, "J=log(3)/4");
    at_instance(r, b, J2, "J=0.2");
    at_instance(r, lambda2(), J2, "J=0.2");

    Tally t;
    for (double J : {std::log(3.0) / 4, 0.2, 0.15, 0.25}) {
        const AtParams p = selfdual_params(J);
        const double d1 = std::abs(std::exp(2 * J + 2 * p.U) - (p.c + 1)) / (p.c + 1);
        const double d2 = std::abs(std::exp(-2 * J + 2 * p.U) - (p.c - 1)) / (p.c - 1);
        t.add(d1 <= 1e-12 && d2 <= 1e-12, std::max(d1, d2), "J=" + fmt(J));
    }
    r.lines.push_back(t.line("at.selfdual_identities", "-", "J in {log(3)/4, 0.2, 0.15, 0.25}"));
    {
        const AtParams p = selfdual_params(std::log(3.0) / 4);
        const double dev = std::max(std::abs(p.U - std::log(3.0) / 4), std::abs(p.c - 2));
        r.lines.push_back(make_line("at.selfdual_quarter_log3", "-", "J=log(3)/4", Verdict{dev <= 1e-12, dev, "U=" + fmt(p.U) + " c=" + fmt(p.c)}));
    }
    return r;
}

// ------------------------------------------------------------------ structure

template <class S>
Verdict shift_check(const S& c, const S& cb, WeightMode mode) {
    const auto g0 = make_geometry(Domain::diamond(2)), g1 = make_geometry(Domain::diamond(2, {1, 0}));
    VertexWeights<S> w{S(1), S(1), c, cb};
    const auto mu0 = height_measure(*g0, enumerate_height_configs(*g0, HeightSpaceOptions{}), w, mode);
    const auto mu1 = height_measure(*g1, enumerate_height_configs(*g1, HeightSpaceOptions{}), w, mode);
    const auto image = pushforward<S>(mu0, [&](const Config& f) {
        Config out(g1->face_count());
        for (int k = 0; k < g1->face_count(); ++k) {
            const int src = g0->face_index(g1->face(k) - Face{1, 0});
            if (src < 0) throw OracleError("shifted face is not tabulated");
            out[k] = 1 - f[src];
        }
        return out;
    });
    return equal_measures(image, mu1);
}

template <class S>
Verdict reflection_check(const S& c, int n) {
    // parity-swapping reflection (i, j) -> (1 - i, j) of a width-2 rectangle
    const auto g = make_geometry(Domain::rectangle(2, 3));
    HeightSpaceOptions opt;
    opt.bc = BoundaryCondition::flat(n);
    VertexWeights<S> w{S(1), S(1), c, S(1)};
    const auto mu = height_measure(*g, enumerate_height_configs(*g, opt), w, WeightMode::plain);
    const auto image = pushforward<S>(mu, [&](const Config& f) {
        Config out(g->face_count());
        for (int k = 0; k < g->face_count(); ++k) {
            const Face x = g->face(k);
            const int src = g->face_index(Face{1 - x.i, x.j});
            if (src < 0) throw OracleError("reflected face is not tabulated");
            out[k] = 2 * n + 1 - f[src];
        }
        return out;
    });
    return equal_measures(image, mu);
}

SuiteReport suite_structure() {
    SuiteReport r;
    {
        const auto g = make_geometry(Domain::diamond(4));
        const Graph& P = g->primal().graph;
        const Graph& D = g->dual().graph;
        Rng rng = make_rng(20240607, 0);
        Tally t;
        for (int s = 0; s < 10000; ++s) {
            const double p = uniform01(rng);
            EdgeBits eta(P.edge_count());
            for (auto& x : eta) x = bernoulli(rng, p);
            const int k = find_clusters(P, eta).count;
            const int kd = find_clusters(D, dual_bits(eta)).count;
            int open = 0;
            for (auto x : eta) open += x;
            const int lhs = kd - k - 1, rhs = open - P.n;
            t.add(lhs == rhs, lhs == rhs ? 0 : 1, "sample " + std::to_string(s));
        }
        r.lines.push_back(t.line("structure.euler", describe(g->domain(), "diamond(4)"), "10000 random eta, p uniform"));
    }
    for (const Named& d : {lambda2(), lambda2_shift(), rect6(), lambda3()}) {
        const auto configs = enumerate_height_configs(*d.g, HeightSpaceOptions{});
        Tally spins, arrows;
        const Face anchor = d.g->face(0);
        for (std::size_t k = 0; k < configs.size(); ++k) {
            HeightFunction h(d.g, BoundaryCondition::flat(0));
            h.h = configs[k];
            const SpinConfig s = height_to_spin(h);
            const HeightFunction back = spin_to_height(s, anchor, h.at(anchor));
            spins.add(s.ice_rule() && back.h == h.h, 0, "atom " + std::to_string(k));
            const ArrowConfig a = height_to_arrows(h);
            const HeightFunction back2 = arrows_to_height(a, anchor, h.at(anchor));
            arrows.add(a.ice_rule() && back2.h == h.h, 0, "atom " + std::to_string(k));
        }
        r.lines.push_back(spins.line("structure.spin_round_trip", d.label(), "every height function, 0,1 boundary"));
        r.lines.push_back(arrows.line("structure.arrow_round_trip", d.label(), "every height function, 0,1 boundary"));
    }
    const std::string shift_dom = "diamond(2) -> diamond(2) at (1,0)";
    r.lines.push_back(make_line("structure.shift_pushforward", shift_dom, "a=1 b=1 c=5/2 c_b=e^{lambda/2}=2",
                                shift_check<Rational>(Rational(5, 2), Rational(2), WeightMode::boundary_cb)));
    {
        const auto C = real_coupling("1", "1", "3");
        r.lines.push_back(make_line("structure.shift_pushforward", shift_dom, "a=1 b=1 c=3 c_b=e^{lambda/2}",
                                    shift_check<Real>(Real(3), C.c_b, WeightMode::boundary_cb)));
    }
    r.lines.push_back(make_line("structure.shift_pushforward", shift_dom, "a=1 b=1 c=5/2 plain",
                                shift_check<Rational>(Rational(5, 2), Rational(1), WeightMode::plain)));
    const std::string refl = describe(Domain::rectangle(2, 3), "rectangle 2x3");
    for (int n : {0, 2})
        r.lines.push_back(make_line("structure.reflection_pushforward", refl,
                                    "a=1 b=1 c=5/2 h -> " + std::to_string(2 * n + 1) + " - h(1-i, j)",
                                    reflection_check<Rational>(Rational(5, 2), n)));
    return r;
}

using SuiteFn = std::function<SuiteReport()>;

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
    static const std::vector<std::pair<std::string, SuiteFn>> r{
        {"coupling", suite_coupling},   {"cluster_form", suite_cluster_form},
        {"variance", suite_variance},   {"kernels", suite_kernels},
        {"random_cluster", suite_random_cluster},
        {"fkg", suite_fkg},             {"domination", suite_domination},
        {"fk_ising", suite_fk_ising},   {"structure", suite_structure},
    };
    return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [n, f] : registry()) v.push_back(n);
        return v;
    }();
    return names;
}

SuiteReport run_suite(const std::string& name) {
    for (const auto& [n, f] : registry())
        if (n == name) {
            const auto t0 = std::chrono::steady_clock::now();
            SuiteReport r = f();
            r.name = n;
            r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            return r;
        }
    throw OracleError("unknown oracle suite '" + name + "'");
}

}  // namespace icelab::oracle
