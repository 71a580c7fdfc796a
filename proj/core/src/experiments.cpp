#include "icelab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace icelab {

const char* const kCsvHeader = "experiment,N,a,b,c,c_b_or_qb,J,U,seed,sweeps,observable,estimate,stderr,tau_int";

void write_csv_header(std::ostream& os) { os << kCsvHeader << '\n'; }

namespace {
std::string num(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(12) << x;
    return os.str();
}
}  // namespace

void write_csv_row(std::ostream& os, const ResultRow& r) {
    os << r.experiment << ',' << r.N << ',' << num(r.a) << ',' << num(r.b) << ',' << num(r.c) << ','
       << num(r.c_b_or_qb) << ',' << num(r.J) << ',' << num(r.U) << ',' << r.seed << ',' << r.sweeps << ','
       << r.observable << ',' << num(r.estimate) << ',' << num(r.stderr_) << ',' << num(r.tau_int) << '\n';
}

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
    write_csv_header(os);
    for (const auto& r : rows) write_csv_row(os, r);
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("ICELAB_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex m;
    {
        std::vector<std::jthread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (int i = next++; i < n; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lk(m);
                        if (!err) err = std::current_exception();
                    }
                }
            });
    }
    if (err) std::rethrow_exception(err);
}

LinearFit weighted_fit(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& se) {
    if (x.size() != y.size() || x.size() != se.size() || x.size() < 2) throw std::invalid_argument("fit needs two points");
    double S = 0, Sx = 0, Sy = 0, Sxx = 0, Sxy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double w = se[k] > 0 ? 1 / (se[k] * se[k]) : 1e12;
        S += w;
        Sx += w * x[k];
        Sy += w * y[k];
        Sxx += w * x[k] * x[k];
        Sxy += w * x[k] * y[k];
    }
    const double D = S * Sxx - Sx * Sx;
    LinearFit f;
    f.slope = (S * Sxy - Sx * Sy) / D;
    f.intercept = (Sxx * Sy - Sx * Sxy) / D;
    f.slope_stderr = std::sqrt(S / D);
    f.lo = f.slope - 1.96 * f.slope_stderr;
    f.hi = f.slope + 1.96 * f.slope_stderr;
    return f;
}

EstimateWithError jackknife(const std::vector<std::vector<double>>& series,
                            const std::function<double(const std::vector<double>&)>& f, int batches) {
    EstimateWithError out;
    if (series.empty()) return out;
    const std::size_t n = series[0].size();
    const std::size_t m = series.size();
    std::vector<double> total(m, 0);
    for (std::size_t s = 0; s < m; ++s)
        for (double v : series[s]) total[s] += v;
    std::vector<double> mean(m);
    for (std::size_t s = 0; s < m; ++s) mean[s] = n ? total[s] / n : 0;
    out.mean = f(mean);
    out.tau_int = integrated_autocorrelation(series[0]);
    if (batches < 2 || n < static_cast<std::size_t>(batches)) return out;
    const std::size_t len = n / batches;
    std::vector<double> loo(batches);
    for (int b = 0; b < batches; ++b) {
        std::vector<double> v(m);
        for (std::size_t s = 0; s < m; ++s) {
            double part = 0;
            for (std::size_t k = 0; k < len; ++k) part += series[s][b * len + k];
            const double rest = n - len;
            v[s] = (total[s] - part) / rest;
        }
        loo[b] = f(v);
    }
    double lm = 0;
    for (double v : loo) lm += v;
    lm /= batches;
    double var = 0;
    for (double v : loo) var += (v - lm) * (v - lm);
    out.stderr_ = std::sqrt(var * (batches - 1) / batches);
    out.n_batches = batches;
    return out;
}

namespace {

EstimateWithError mean_of(const std::vector<double>& s) {
    return jackknife({s}, [](const std::vector<double>& v) { return v[0]; });
}

EdgeBits initial_edges(const ChainSpec& spec, int E, double p, Rng& rng) {
    if (spec.initial_state == "closed") return EdgeBits(E, 0);
    if (spec.initial_state == "random") {
        EdgeBits b(E);
        for (auto& x : b) x = bernoulli(rng, p) ? 1 : 0;
        return b;
    }
    if (spec.initial_state == "open" || spec.initial_state == "flat") return EdgeBits(E, 1);
    throw std::invalid_argument("unknown initial_state '" + spec.initial_state + "' for an edge chain");
}

void check_height_start(const ChainSpec& spec) {
    if (spec.initial_state != "flat") throw std::invalid_argument("height chains start from 'flat' only");
}

// D• vertex of each inner even face (-1 elsewhere).
std::vector<int> primal_node_of_face(const Geometry& g) {
    std::vector<int> out(g.face_count(), -1);
    const auto& cg = g.primal();
    for (int v = 0; v < cg.graph.n; ++v)
        if (cg.face_index[v] >= 0) out[cg.face_index[v]] = v;
    return out;
}

int face_or_throw(const Geometry& g, Face f) {
    const int k = g.face_index(f);
    if (k < 0 || !g.inner(k)) {
        std::ostringstream os;
        os << "face (" << f.i << "," << f.j << ") is not in the domain";
        throw ObservableError(os.str());
    }
    return k;
}

}  // namespace

// ------------------------------------------------------------------ variance scaling

VarianceScalingResult experiment_variance_scaling(const VarianceScalingConfig& cfg) {
    cfg.chain.validate();
    struct Job {
        double c;
        int N;
    };
    std::vector<Job> jobs;
    for (double c : cfg.c_list)
        for (int N : cfg.N_list) jobs.push_back({c, N});
    std::vector<EstimateWithError> var(jobs.size()), mean(jobs.size());
    parallel_for(static_cast<int>(jobs.size()), resolve_threads(cfg.threads), [&](int j) {
        const auto [c, N] = jobs[j];
        auto g = make_geometry(Domain::diamond(N));
        const CouplingParams P = derive_params(cfg.a, cfg.b, c);
        Rng rng = make_rng(cfg.chain.seed, j);
        CouplingChain chain(g, P, CouplingPart::plain, initial_edges(cfg.chain, g->vertex_count(), P.p, rng));
        const int fc = g->face_index(Face{0, 0});
        for (long s = 0; s < cfg.chain.burn_in; ++s) chain.sweep(rng);
        std::vector<double> m1, m2;
        for (long s = 0; s < cfg.chain.sweeps; ++s) {
            chain.sweep(rng);
            if (s % (cfg.sample_every * cfg.chain.thinning) != 0) continue;
            const auto [m, sq] = conditional_moments(chain.law(), fc);
            m1.push_back(m);
            m2.push_back(sq);
        }
        var[j] = jackknife({m2, m1}, [](const std::vector<double>& v) { return v[0] - v[1] * v[1]; });
        var[j].tau_int = integrated_autocorrelation(m2);
        mean[j] = mean_of(m1);
    });
    VarianceScalingResult res;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        const auto [c, N] = jobs[j];
        const CouplingParams P = derive_params(cfg.a, cfg.b, c);
        ResultRow r{"variance_scaling", N, cfg.a, cfg.b, c, P.q_b, 0, 0, cfg.chain.seed, cfg.chain.sweeps, {}};
        r.observable = "var_h_center";
        r.estimate = var[j].mean;
        r.stderr_ = var[j].stderr_;
        r.tau_int = var[j].tau_int;
        res.rows.push_back(r);
        r.observable = "mean_h_center";
        r.estimate = mean[j].mean;
        r.stderr_ = mean[j].stderr_;
        r.tau_int = mean[j].tau_int;
        res.rows.push_back(r);
        res.variance[{c, N}] = var[j];
    }
    for (double c : cfg.c_list) {
        std::vector<double> x, y, se;
        for (int N : cfg.N_list) {
            x.push_back(std::log(static_cast<double>(N)));
            y.push_back(res.variance[{c, N}].mean);
            se.push_back(res.variance[{c, N}].stderr_);
        }
        if (x.size() < 2) continue;
        const LinearFit f = weighted_fit(x, y, se);
        res.fits[c] = f;
        const CouplingParams P = derive_params(cfg.a, cfg.b, c);
        ResultRow r{"variance_scaling", 0, cfg.a, cfg.b, c, P.q_b, 0, 0, cfg.chain.seed, cfg.chain.sweeps, {}};
        r.observable = "slope_var_vs_logN";
        r.estimate = f.slope;
        r.stderr_ = f.slope_stderr;
        res.rows.push_back(r);
    }
    return res;
}

// ------------------------------------------------------------------ height Gibbs diagnostics

namespace {

// Radius (max |i|+|j|) of the T-cluster of even faces with h != 0 containing (0,0); 0 when h(0,0) = 0.
int excursion_radius(const HeightFunction& h) {
    const Geometry& g = *h.geo;
    const int start = g.face_index(Face{0, 0});
    if (h.h[start] == 0) return 0;
    std::vector<char> seen(g.face_count(), 0);
    std::vector<int> stack{start};
    seen[start] = 1;
    int radius = 0;
    while (!stack.empty()) {
        const int k = stack.back();
        stack.pop_back();
        const Face f = g.face(k);
        radius = std::max(radius, std::abs(f.i) + std::abs(f.j));
        for (Face n : t_neighbours(f)) {
            const int m = g.face_index(n);
            if (m < 0 || !g.inner(m) || seen[m] || h.h[m] == 0) continue;
            seen[m] = 1;
            stack.push_back(m);
        }
    }
    return radius;
}

}  // namespace

std::vector<ResultRow> experiment_height_gibbs(const HeightGibbsConfig& cfg) {
    cfg.chain.validate();
    check_height_start(cfg.chain);
    if (!(cfg.c > 2)) throw UnsupportedRegime("height Gibbs diagnostics target c > 2");
    auto g = make_geometry(Domain::diamond(cfg.N));
    const ModelParams mp{cfg.a, cfg.b, cfg.c, 1};
    HeightChain chain(HeightFunction(g, BoundaryCondition::flat(0)), mp, WeightMode::plain);
    Rng rng = make_rng(cfg.chain.seed, 0);
    for (long s = 0; s < cfg.chain.burn_in; ++s) chain.sweep(rng);
    const int f00 = face_or_throw(*g, {0, 0}), f10 = face_or_throw(*g, {1, 0});
    std::vector<double> sum, found, radius;
    std::vector<int> excursions;
    const Domain& box = g->domain();
    for (long s = 0; s < cfg.chain.sweeps; ++s) {
        chain.sweep(rng);
        if (s % cfg.chain.thinning) continue;
        const HeightFunction& h = chain.state();
        sum.push_back(h.h[f00] + h.h[f10]);
        excursions.push_back(excursion_radius(h));
        if (s % (10 * cfg.chain.thinning) == 0) {
            auto circ = exteriormost_t_circuit(
                [&](Face f) {
                    const int k = g->face_index(f);
                    return k >= 0 && h.h[k] == 0;
                },
                true, box, Face{0, 0});
            found.push_back(circ ? 1 : 0);
            if (circ) {
                int r = 0;
                for (Face f : circ->faces) r = std::max(r, std::abs(f.i) + std::abs(f.j));
                radius.push_back(r);
            }
        }
    }
    std::vector<ResultRow> rows;
    auto row = [&](const std::string& name, const EstimateWithError& e) {
        ResultRow r{"height_gibbs", cfg.N, cfg.a, cfg.b, cfg.c, 0, 0, 0, cfg.chain.seed, cfg.chain.sweeps, {}};
        r.observable = name;
        r.estimate = e.mean;
        r.stderr_ = e.stderr_;
        r.tau_int = e.tau_int;
        rows.push_back(r);
    };
    row("h00_plus_h10", mean_of(sum));
    row("t_circuit_found", mean_of(found));
    if (!radius.empty()) row("t_circuit_radius", mean_of(radius));
    // tail of the excursion radius: log P(R >= r) against r
    const int rmax = *std::max_element(excursions.begin(), excursions.end());
    std::vector<double> x, y, se;
    const double n = excursions.size();
    for (int r = 1; r <= rmax; ++r) {
        const double k = std::count_if(excursions.begin(), excursions.end(), [r](int v) { return v >= r; });
        if (k < 10) break;
        x.push_back(r);
        y.push_back(std::log(k / n));
        se.push_back(1 / std::sqrt(k));
        std::vector<double> ind(excursions.size());
        for (std::size_t i = 0; i < ind.size(); ++i) ind[i] = excursions[i] >= r ? 1 : 0;
        row("excursion_tail_" + std::to_string(r), mean_of(ind));
    }
    if (x.size() >= 2) {
        const LinearFit f = weighted_fit(x, y, se);
        EstimateWithError e;
        e.mean = f.slope;
        e.stderr_ = f.slope_stderr;
        row("excursion_tail_slope", e);
    }
    return rows;
}

// ------------------------------------------------------------------ Ashkin–Teller

AtSelfdualResult experiment_at_selfdual(const AtSelfdualConfig& cfg) {
    cfg.chain.validate();
    check_height_start(cfg.chain);
    auto g = make_geometry(Domain::square(cfg.half_width));
    const Graph& G = g->primal().graph;
    const auto node = primal_node_of_face(*g);
    const int origin = node[face_or_throw(*g, {0, 0})];
    // four partners per distance
    std::vector<std::array<int, 4>> partner;
    for (int d : cfg.distances) {
        if (d % 2) throw std::invalid_argument("AT distances must be even (τ lives on even faces)");
        std::array<int, 4> p{};
        const Face dirs[4] = {{d, 0}, {-d, 0}, {0, d}, {0, -d}};
        for (int k = 0; k < 4; ++k) p[k] = node[face_or_throw(*g, dirs[k])];
        partner.push_back(p);
    }
    for (double J : cfg.J_list) {
        const AtParams ap = selfdual_params(J);
        if (!ap.j_less_u) throw UnsupportedRegime("the decay experiment needs J < U on the self-dual curve");
    }

    AtSelfdualResult res;
    res.per_J.resize(cfg.J_list.size());
    parallel_for(static_cast<int>(cfg.J_list.size()), resolve_threads(cfg.threads), [&](int j) {
        const double J = cfg.J_list[j];
        const AtParams ap = selfdual_params(J);
        const ModelParams mp{1, 1, ap.c, 1};
        HeightChain chain(HeightFunction(g, BoundaryCondition::flat(0)), mp, WeightMode::plain);
        Rng rng = make_rng(cfg.chain.seed, j);
        for (long s = 0; s < cfg.chain.burn_in; ++s) chain.sweep(rng);
        const std::size_t D = cfg.distances.size();
        std::vector<std::vector<double>> direct(D), conn(D), prod(D);
        for (long s = 0; s < cfg.chain.sweeps; ++s) {
            chain.sweep(rng);
            if (s % cfg.chain.thinning) continue;
            const SpinConfig sigma = height_to_spin(chain.state());
            const EdgeBits xi = sample_xi_given_spins(sigma, mp, rng);
            const EdgeBits xs = dual_bits(xi);
            const SpinVec sb = primal_spins(sigma);
            const auto [tau, tau2] = sample_tau_given_xi_star(G, xs, sb, rng);
            const Clusters cl = find_clusters(G, xs);
            for (std::size_t k = 0; k < D; ++k) {
                double a = 0, b = 0, c = 0;
                for (int v : partner[k]) {
                    a += tau[origin] * tau[v];
                    b += cl.label[origin] == cl.label[v] ? 1 : 0;
                    c += sb[origin] * sb[v];
                }
                direct[k].push_back(a / 4);
                conn[k].push_back(b / 4);
                prod[k].push_back(c / 4);
            }
        }
        AtCorrelations& out = res.per_J[j];
        out.J = J;
        out.distance = cfg.distances;
        std::vector<double> x, y, se;
        for (std::size_t k = 0; k < D; ++k) {
            out.tau_direct.push_back(mean_of(direct[k]));
            out.tau_connect.push_back(mean_of(conn[k]));
            out.product.push_back(mean_of(prod[k]));
            const auto& e = out.tau_direct.back();
            const auto& f = out.tau_connect.back();
            const double comb = std::sqrt(e.stderr_ * e.stderr_ + f.stderr_ * f.stderr_);
            if (comb > 0) out.max_estimator_z = std::max(out.max_estimator_z, std::abs(e.mean - f.mean) / comb);
            if (e.mean > 0 && e.stderr_ > 0 && e.mean > 3 * e.stderr_) {
                x.push_back(cfg.distances[k]);
                y.push_back(std::log(e.mean));
                se.push_back(e.stderr_ / e.mean);
            }
        }
        if (x.size() >= 2) out.decay = weighted_fit(x, y, se);
    });
    for (const auto& a : res.per_J) {
        const AtParams ap = selfdual_params(a.J);
        auto row = [&](const std::string& name, int d, const EstimateWithError& e) {
            ResultRow r{"at_selfdual", 2 * cfg.half_width, 1, 1, ap.c, 0, a.J, ap.U, cfg.chain.seed, cfg.chain.sweeps, {}};
            r.observable = d >= 0 ? name + "_" + std::to_string(d) : name;
            r.estimate = e.mean;
            r.stderr_ = e.stderr_;
            r.tau_int = e.tau_int;
            res.rows.push_back(r);
        };
        for (std::size_t k = 0; k < a.distance.size(); ++k) {
            row("tau_corr_direct", a.distance[k], a.tau_direct[k]);
            row("tau_corr_connect", a.distance[k], a.tau_connect[k]);
            row("product_corr", a.distance[k], a.product[k]);
        }
        EstimateWithError rate;
        rate.mean = -a.decay.slope;
        rate.stderr_ = a.decay.slope_stderr;
        row("tau_decay_rate", -1, rate);
        EstimateWithError z;
        z.mean = a.max_estimator_z;
        row("estimator_max_z", -1, z);
    }
    return res;
}

// ------------------------------------------------------------------ q_b interpolation

std::vector<double> default_qb_list(double q) {
    const double sq = std::sqrt(q);
    if (q <= 4) return {1, sq, q};
    const double lambda = std::acosh(sq / 2);
    return {1, std::exp(-lambda) * sq, std::exp(lambda) * sq, q};
}

QbInterpolationResult experiment_qb_interpolation(const QbInterpolationConfig& cfg) {
    cfg.chain.validate();
    const std::vector<double> list = cfg.q_b_list.empty() ? default_qb_list(cfg.q) : cfg.q_b_list;
    auto g = make_geometry(Domain::diamond(cfg.N));
    const Graph& G = g->primal().graph;
    std::vector<char> bulk(G.edge_count(), 0);
    for (int z = 0; z < g->vertex_count(); ++z) {
        const Vertex v = g->vertices()[z].z;
        bulk[z] = (std::abs(v.x2) + std::abs(v.y2)) <= cfg.N;  // |x|+|y| <= N/2
    }
    const double nbulk = std::count(bulk.begin(), bulk.end(), 1);
    const auto node = primal_node_of_face(*g);
    const int centre = node[face_or_throw(*g, {0, 0})];

    QbInterpolationResult res;
    res.points.resize(list.size());
    parallel_for(static_cast<int>(list.size()), resolve_threads(cfg.threads), [&](int j) {
        RcParams P;
        P.q = cfg.q;
        P.q_b = list[j];
        P.p = p_critical(cfg.q);
        Rng rng = make_rng(cfg.chain.seed, j);
        RcChain chain(G, initial_edges(cfg.chain, G.edge_count(), P.p, rng), P);
        for (long s = 0; s < cfg.chain.burn_in; ++s) chain.sweep(rng);
        std::vector<double> dens, bdens, conn;
        for (long s = 0; s < cfg.chain.sweeps; ++s) {
            chain.sweep(rng);
            if (s % cfg.chain.thinning) continue;
            const EdgeBits& e = chain.state();
            double o = 0, ob = 0;
            for (int k = 0; k < G.edge_count(); ++k) {
                o += e[k];
                if (bulk[k]) ob += e[k];
            }
            dens.push_back(o / G.edge_count());
            bdens.push_back(ob / nbulk);
            const Clusters cl = find_clusters(G, e);
            conn.push_back(cl.boundary[cl.label[centre]] ? 1 : 0);
        }
        QbPoint& pt = res.points[j];
        pt.q_b = list[j];
        pt.bulk_density = mean_of(bdens);
        pt.edge_density = mean_of(dens);
        pt.center_to_boundary = mean_of(conn);
    });
    for (const auto& pt : res.points) {
        auto row = [&](const std::string& name, const EstimateWithError& e) {
            ResultRow r{"qb_interpolation", cfg.N, 0, 0, 0, pt.q_b, 0, 0, cfg.chain.seed, cfg.chain.sweeps, {}};
            r.observable = name;
            r.estimate = e.mean;
            r.stderr_ = e.stderr_;
            r.tau_int = e.tau_int;
            res.rows.push_back(r);
        };
        row("q=" + num(cfg.q) + ":bulk_edge_density", pt.bulk_density);
        row("q=" + num(cfg.q) + ":edge_density", pt.edge_density);
        row("q=" + num(cfg.q) + ":center_to_boundary", pt.center_to_boundary);
    }
    return res;
}

// ------------------------------------------------------------------ arrows

std::vector<ResultRow> experiment_arrow_bias(const ArrowBiasConfig& cfg) {
    cfg.chain.validate();
    check_height_start(cfg.chain);
    auto g = make_geometry(Domain::diamond(cfg.N));
    const ModelParams mp{cfg.a, cfg.b, cfg.c, 1};
    HeightChain chain(HeightFunction(g, BoundaryCondition::flat(0)), mp, WeightMode::plain);
    Rng rng = make_rng(cfg.chain.seed, 0);
    for (long s = 0; s < cfg.chain.burn_in; ++s) chain.sweep(rng);
    // horizontal edges between (i,0) and (i+1,0): one at the centre, one a quarter out
    const int d = std::max(1, cfg.N / 4);
    const int e0a = face_or_throw(*g, {0, 0}), e0b = face_or_throw(*g, {1, 0});
    const int e1a = face_or_throw(*g, {d, 0}), e1b = face_or_throw(*g, {d + 1, 0});
    std::vector<int> bulk_pairs;  // face pairs (k, east neighbour) inside Λ_{N/2}
    for (int k = 0; k < g->inner_count(); ++k) {
        const Face f = g->face(k);
        const int m = g->face_index(f + Face{1, 0});
        if (m < 0 || !g->inner(m)) continue;
        if (std::abs(f.i) + std::abs(f.j) <= cfg.N / 2 && std::abs(f.i + 1) + std::abs(f.j) <= cfg.N / 2) {
            bulk_pairs.push_back(k);
            bulk_pairs.push_back(m);
        }
    }
    std::vector<double> a0, a1, a01, abulk;
    for (long s = 0; s < cfg.chain.sweeps; ++s) {
        chain.sweep(rng);
        if (s % cfg.chain.thinning) continue;
        const auto& h = chain.state().h;
        auto spin = [&](int k) { return ((h[k] % 4) + 4) % 4 <= 1 ? 1 : -1; };
        const double x = spin(e0a) == spin(e0b), y = spin(e1a) == spin(e1b);
        a0.push_back(x);
        a1.push_back(y);
        a01.push_back(x * y);
        double agree = 0;
        for (std::size_t k = 0; k < bulk_pairs.size(); k += 2) agree += spin(bulk_pairs[k]) == spin(bulk_pairs[k + 1]);
        abulk.push_back(agree / (bulk_pairs.size() / 2));
    }
    std::vector<ResultRow> rows;
    auto row = [&](const std::string& name, const EstimateWithError& e) {
        ResultRow r{"arrow_bias", cfg.N, cfg.a, cfg.b, cfg.c, 0, 0, 0, cfg.chain.seed, cfg.chain.sweeps, {}};
        r.observable = name;
        r.estimate = e.mean;
        r.stderr_ = e.stderr_;
        r.tau_int = e.tau_int;
        rows.push_back(r);
    };
    row("P_A_center", mean_of(a0));
    row("P_A_bulk", mean_of(abulk));
    row("P_A_and_A_d" + std::to_string(d), mean_of(a01));
    row("P_AA_minus_PA_PA", jackknife({a01, a0, a1}, [](const std::vector<double>& v) { return v[0] - v[1] * v[2]; }));
    return rows;
}

// ------------------------------------------------------------------ generic chains

ModelKind parse_model_kind(const std::string& s) {
    if (s == "heights") return ModelKind::heights;
    if (s == "spins") return ModelKind::spins;
    if (s == "rc") return ModelKind::rc;
    if (s == "coupling") return ModelKind::coupling;
    if (s == "at") return ModelKind::at;
    throw std::invalid_argument("unknown model '" + s + "'");
}

Domain DomainSpec::build() const {
    if (shape == "diamond") return Domain::diamond(N, center);
    if (shape == "square") return Domain::square(N, center);
    if (shape == "rectangle") return Domain::rectangle(width, height, center);
    throw std::invalid_argument("unknown domain shape '" + shape + "'");
}

namespace {

struct Observable {
    std::string name;
    std::vector<int> args;
    std::string label;
};

Observable parse_observable(const std::string& text) {
    Observable o;
    o.label = text;
    const auto open = text.find('(');
    if (open == std::string::npos) {
        o.name = text;
        return o;
    }
    if (text.back() != ')') throw ObservableError("malformed observable '" + text + "'");
    o.name = text.substr(0, open);
    std::stringstream ss(text.substr(open + 1, text.size() - open - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            o.args.push_back(std::stoi(item, &used));
            if (item.find_first_not_of(' ', used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ObservableError("malformed observable argument in '" + text + "'");
        }
    }
    o.label.erase(std::remove(o.label.begin(), o.label.end(), ','), o.label.end());
    std::replace(o.label.begin(), o.label.end(), '(', '_');
    o.label.erase(std::remove(o.label.begin(), o.label.end(), ')'), o.label.end());
    std::replace(o.label.begin(), o.label.end(), ' ', '_');
    return o;
}

void need_args(const Observable& o, std::size_t n) {
    if (o.args.size() != n)
        throw ObservableError("observable '" + o.name + "' takes " + std::to_string(n) + " integer arguments");
}

// Per-sample value extractors; each returns a function of the current chain state.
using Sampler = std::function<double()>;

struct ChainOutput {
    std::vector<std::vector<double>> series;
};

}  // namespace

std::vector<ResultRow> run_chain(const RunSpec& spec) {
    spec.chain.validate();
    if (spec.chains < 1) throw std::invalid_argument("chains must be at least 1");
    if (spec.observables.empty()) throw ObservableError("no observables requested");
    std::vector<Observable> obs;
    for (const auto& t : spec.observables) obs.push_back(parse_observable(t));
    auto g = make_geometry(spec.domain.build());
    const int R = spec.chains;
    std::vector<ChainOutput> out(R);

    // validate observables against the model before any chain starts
    const std::vector<std::string> height_obs{"h", "h2", "var", "spin", "spin_product", "sum_center", "arrow_agree"};
    const std::vector<std::string> rc_obs{"edge_density", "bulk_edge_density", "center_to_boundary", "k_b", "k_i"};
    const std::vector<std::string> coupling_obs{"h", "h2", "var", "edge_density"};
    const std::vector<std::string> at_obs{"tau_corr", "tau_connect", "product_corr"};
    auto allowed = [&]() -> const std::vector<std::string>& {
        switch (spec.model) {
            case ModelKind::heights:
            case ModelKind::spins: return height_obs;
            case ModelKind::rc: return rc_obs;
            case ModelKind::coupling: return coupling_obs;
            case ModelKind::at: return at_obs;
        }
        return height_obs;
    }();
    for (const auto& o : obs)
        if (std::find(allowed.begin(), allowed.end(), o.name) == allowed.end())
            throw ObservableError("observable '" + o.name + "' is not defined for this model");

    // var(i,j) records h² in its own slot and h in an extra slot after all observables
    std::vector<int> aux_slot(obs.size(), -1);
    {
        int next = static_cast<int>(obs.size());
        for (std::size_t k = 0; k < obs.size(); ++k)
            if (obs[k].name == "var") aux_slot[k] = next++;
    }

    auto face_arg = [&](const Observable& o, std::size_t k) { return face_or_throw(*g, Face{o.args[k], o.args[k + 1]}); };
    const auto node = primal_node_of_face(*g);

    parallel_for(R, resolve_threads(spec.threads), [&](int rep) {
        Rng rng = make_rng(spec.chain.seed, rep);
        auto& series = out[rep].series;
        auto record = [&](const std::vector<Sampler>& fs, const std::function<void()>& step, long every) {
            series.assign(fs.size(), {});
            for (long s = 0; s < spec.chain.burn_in; ++s) step();
            for (long s = 0; s < spec.chain.sweeps; ++s) {
                step();
                if (s % every) continue;
                for (std::size_t k = 0; k < fs.size(); ++k) series[k].push_back(fs[k]());
            }
        };
        switch (spec.model) {
            case ModelKind::heights:
            case ModelKind::spins: {
                check_height_start(spec.chain);
                HeightChain chain(HeightFunction(g, BoundaryCondition::flat(spec.boundary_n)), spec.params, spec.mode);
                const auto& h = chain.state().h;
                auto spin = [&h](int k) { return ((h[k] % 4) + 4) % 4 <= 1 ? 1.0 : -1.0; };
                std::vector<Sampler> fs, aux;
                for (const auto& o : obs) {
                    if (o.name == "h" || o.name == "h2" || o.name == "var" || o.name == "spin") {
                        need_args(o, 2);
                        const int k = face_arg(o, 0);
                        if (o.name == "h") fs.push_back([&h, k] { return double(h[k]); });
                        else if (o.name == "spin") fs.push_back([spin, k] { return spin(k); });
                        else fs.push_back([&h, k] { return double(h[k]) * h[k]; });
                        if (o.name == "var") aux.push_back([&h, k] { return double(h[k]); });
                    } else if (o.name == "spin_product") {
                        need_args(o, 4);
                        const int k = face_arg(o, 0), m = face_arg(o, 2);
                        fs.push_back([spin, k, m] { return spin(k) * spin(m); });
                    } else if (o.name == "sum_center") {
                        need_args(o, 0);
                        const int k = face_or_throw(*g, {0, 0}), m = face_or_throw(*g, {1, 0});
                        fs.push_back([&h, k, m] { return double(h[k] + h[m]); });
                    } else {  // arrow_agree(i,j,k,l): A(e) for the edge between two adjacent faces
                        need_args(o, 4);
                        const int k = face_arg(o, 0), m = face_arg(o, 2);
                        fs.push_back([spin, k, m] { return spin(k) == spin(m) ? 1.0 : 0.0; });
                    }
                }
                fs.insert(fs.end(), aux.begin(), aux.end());
                record(fs, [&] { chain.sweep(rng); }, spec.chain.thinning);
                if (rep == 0 && spec.on_final)
                    spec.on_final(spec.model == ModelKind::spins ? Snapshot::of(height_to_spin(chain.state()))
                                                                 : Snapshot::of(chain.state()));
                break;
            }
            case ModelKind::rc: {
                const Graph& G = g->primal().graph;
                RcChain chain(G, initial_edges(spec.chain, G.edge_count(), spec.rc.p, rng), spec.rc);
                const EdgeBits& e = chain.state();
                std::vector<Sampler> fs;
                for (const auto& o : obs) {
                    need_args(o, 0);
                    if (o.name == "edge_density") {
                        fs.push_back([&e] { return double(std::count(e.begin(), e.end(), 1)) / e.size(); });
                    } else if (o.name == "bulk_edge_density") {
                        const int N = spec.domain.N;
                        std::vector<int> idx;
                        for (int z = 0; z < g->vertex_count(); ++z) {
                            const Vertex v = g->vertices()[z].z;
                            if (std::abs(v.x2) + std::abs(v.y2) <= N) idx.push_back(z);
                        }
                        fs.push_back([&e, idx] {
                            double s = 0;
                            for (int z : idx) s += e[z];
                            return idx.empty() ? 0.0 : s / idx.size();
                        });
                    } else if (o.name == "center_to_boundary") {
                        const int c = node[face_or_throw(*g, {0, 0})];
                        if (c < 0) throw ObservableError("center_to_boundary needs an even face at (0,0)");
                        fs.push_back([&G, &e, c] {
                            const Clusters cl = find_clusters(G, e);
                            return cl.boundary[cl.label[c]] ? 1.0 : 0.0;
                        });
                    } else if (o.name == "k_b") {
                        fs.push_back([&G, &e] { return double(find_clusters(G, e).k_b); });
                    } else {
                        fs.push_back([&G, &e] { return double(find_clusters(G, e).k_i); });
                    }
                }
                record(fs, [&] { chain.sweep(rng); }, spec.chain.thinning);
                if (rep == 0 && spec.on_final) spec.on_final(Snapshot::of(g, e));
                break;
            }
            case ModelKind::coupling: {
                const CouplingParams P = derive_params(spec.params.a, spec.params.b, spec.params.c);
                CouplingChain chain(g, P, CouplingPart::plain, initial_edges(spec.chain, g->vertex_count(), P.p, rng));
                TreeLaw law;
                std::vector<Sampler> fs, aux;
                for (const auto& o : obs) {
                    if (o.name == "edge_density") {
                        need_args(o, 0);
                        fs.push_back([&chain] {
                            const auto& e = chain.eta();
                            return double(std::count(e.begin(), e.end(), 1)) / e.size();
                        });
                        continue;
                    }
                    need_args(o, 2);
                    const int k = face_arg(o, 0);
                    if (o.name == "h") fs.push_back([&law, k] { return conditional_moments(law, k).first; });
                    else fs.push_back([&law, k] { return conditional_moments(law, k).second; });
                    if (o.name == "var") aux.push_back([&law, k] { return conditional_moments(law, k).first; });
                }
                fs.insert(fs.end(), aux.begin(), aux.end());
                record(fs, [&] {
                    chain.sweep(rng);
                    law = chain.law();
                }, spec.chain.thinning);
                if (rep == 0 && spec.on_final) spec.on_final(Snapshot::of(g, chain.eta()));
                break;
            }
            case ModelKind::at: {
                check_height_start(spec.chain);
                const AtParams ap = selfdual_params(spec.J);
                const ModelParams mp{1, 1, ap.c, 1};
                const Graph& G = g->primal().graph;
                HeightChain chain(HeightFunction(g, BoundaryCondition::flat(0)), mp, WeightMode::plain);
                SpinVec tau, sb;
                Clusters cl;
                const int origin = node[face_or_throw(*g, {0, 0})];
                if (origin < 0) throw ObservableError("AT observables need an even face at (0,0)");
                std::vector<Sampler> fs;
                for (const auto& o : obs) {
                    need_args(o, 1);
                    const int d = o.args[0];
                    const int v = node[face_or_throw(*g, {d, 0})];
                    if (v < 0) throw ObservableError("AT distances must be even");
                    if (o.name == "tau_corr") fs.push_back([&tau, origin, v] { return double(tau[origin] * tau[v]); });
                    else if (o.name == "tau_connect") fs.push_back([&cl, origin, v] { return cl.label[origin] == cl.label[v] ? 1.0 : 0.0; });
                    else fs.push_back([&sb, origin, v] { return double(sb[origin] * sb[v]); });
                }
                record(fs, [&] {
                    chain.sweep(rng);
                    const SpinConfig sigma = height_to_spin(chain.state());
                    const EdgeBits xs = dual_bits(sample_xi_given_spins(sigma, mp, rng));
                    sb = primal_spins(sigma);
                    tau = sample_tau_given_xi_star(G, xs, sb, rng).first;
                    cl = find_clusters(G, xs);
                }, spec.chain.thinning);
                if (rep == 0 && spec.on_final) spec.on_final(Snapshot::of(chain.state()));
                break;
            }
        }
    });

    std::vector<ResultRow> rows;
    const bool heights_like = spec.model == ModelKind::heights || spec.model == ModelKind::spins ||
                              spec.model == ModelKind::coupling;
    double a = spec.params.a, b = spec.params.b, c = spec.params.c, extra = 0, J = 0, U = 0;
    if (spec.model == ModelKind::rc) {
        a = b = c = 0;
        extra = spec.rc.q_b;
    } else if (spec.model == ModelKind::at) {
        const AtParams ap = selfdual_params(spec.J);
        a = b = 1;
        c = ap.c;
        J = spec.J;
        U = ap.U;
    } else if (spec.mode == WeightMode::boundary_cb) {
        extra = spec.params.c_b;
    }
    for (std::size_t k = 0; k < obs.size(); ++k) {
        // per-chain estimates, combined as a mean with independent errors
        std::vector<EstimateWithError> per(R);
        for (int r = 0; r < R; ++r) {
            if (heights_like && aux_slot[k] >= 0)
                per[r] = jackknife({out[r].series[k], out[r].series[aux_slot[k]]},
                                   [](const std::vector<double>& v) { return v[0] - v[1] * v[1]; });
            else
                per[r] = mean_of(out[r].series[k]);
        }
        EstimateWithError e;
        double se2 = 0;
        for (const auto& p : per) {
            e.mean += p.mean / R;
            se2 += p.stderr_ * p.stderr_;
            e.tau_int += p.tau_int / R;
        }
        e.stderr_ = std::sqrt(se2) / R;
        ResultRow row{"run", spec.domain.N, a, b, c, extra, J, U, spec.chain.seed, spec.chain.sweeps, {}};
        row.observable = obs[k].label;
        row.estimate = e.mean;
        row.stderr_ = e.stderr_;
        row.tau_int = e.tau_int;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace icelab
