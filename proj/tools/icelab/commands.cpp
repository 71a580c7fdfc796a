#include "commands.hpp"

#include "icelab/oracle_suites.hpp"
#include "icelab/random_cluster.hpp"
#include "icelab/snapshot.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace icelab::cli {

namespace {

// Writes to the file when a path is given, else to the fallback stream.
template <class F>
void emit(const std::string& path, std::ostream& fallback, F write) {
    if (path.empty()) {
        write(fallback);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    write(f);
    if (!f) throw std::runtime_error("write to " + path + " failed");
}

}  // namespace

int cmd_run(const std::string& config_path, const Options& opt, std::ostream& out, std::ostream& err) {
    JobConfig job;
    try {
        job = load_config(config_path, opt.overrides);
    } catch (const ValidationError& e) {
        err << e.what() << '\n';
        return validation;
    }
    if (!job.snapshot.empty()) {
        const std::string path = job.snapshot;
        job.run.on_final = [path](const Snapshot& s) { emit(path, std::cout, [&](std::ostream& o) { write_snapshot(o, s); }); };
    }
    std::vector<ResultRow> rows;
    try {
        rows = run_job(job);
    } catch (const std::exception& e) {  // observables and parameters the schema cannot see
        err << config_path << ": " << e.what() << '\n';
        return validation;
    }
    try {
        emit(opt.out.empty() ? job.output : opt.out, out, [&](std::ostream& o) { write_csv(o, rows); });
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return validation;
    }
    return ok;
}

int cmd_oracle(const std::string& suite, const Options& opt, std::ostream& out, std::ostream& err) {
    const auto& names = oracle::suite_names();
    std::vector<std::string> todo;
    if (suite == "all") {
        todo = names;
    } else if (std::find(names.begin(), names.end(), suite) != names.end()) {
        todo = {suite};
    } else {
        err << "unknown suite '" << suite << "'; available: all";
        for (const auto& n : names) err << ", " << n;
        err << '\n';
        return validation;
    }
    bool pass = true;
    std::ostringstream report;
    for (const auto& name : todo) {
        const auto r = oracle::run_suite(name);
        oracle::write_report(report, r);
        pass = pass && r.pass();
    }
    report << "oracle " << suite << ": " << (pass ? "PASS" : "FAIL") << '\n';
    try {
        emit(opt.out, out, [&](std::ostream& o) { o << report.str(); });
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return validation;
    }
    return pass ? ok : oracle_failure;
}

int cmd_snapshot(const std::string& state_path, const Options& opt, std::ostream& out, std::ostream& err) {
    std::ifstream in(state_path);
    if (!in) {
        err << state_path << ": cannot open state file\n";
        return validation;
    }
    Snapshot s;
    try {
        s = read_snapshot(in);
    } catch (const std::exception& e) {
        err << state_path << ": " << e.what() << '\n';
        return validation;
    }
    const Geometry& g = *s.geo;
    std::ostringstream os;
    os << "state: " << to_string(s.kind) << '\n'
       << "domain: " << g.domain().size() << " faces, parity " << to_string(g.domain().parity()) << ", "
       << g.vertex_count() << " vertices, " << g.domain().boundary_vertices().size() << " on the boundary\n";
    switch (s.kind) {
        case SnapshotKind::heights: {
            const auto& h = s.heights.h;
            std::vector<int> inner(h.begin(), h.begin() + g.inner_count());
            const auto [lo, hi] = std::minmax_element(inner.begin(), inner.end());
            const TypeCounts n = type_counts(g, h, WeightMode::plain);
            os << "heights: min " << *lo << ", max " << *hi << '\n'
               << "vertex types: a " << n.a << ", b " << n.b << ", c " << n.c << '\n';
            break;
        }
        case SnapshotKind::spins: {
            const auto plus = std::count(s.spins.s.begin(), s.spins.s.begin() + g.inner_count(), 1);
            const TypeCounts n = spin_type_counts(s.spins, WeightMode::plain);
            os << "spins: " << plus << " plus, " << g.inner_count() - plus << " minus\n"
               << "vertex types: a " << n.a << ", b " << n.b << ", c " << n.c << '\n';
            break;
        }
        case SnapshotKind::rc: {
            const Graph& G = g.primal().graph;
            const RcCounts n = rc_counts(G, s.edges);
            const Clusters dual = find_clusters(g.dual().graph, dual_bits(s.edges));
            os << "edges: " << n.open << " open, " << n.closed << " closed\n"
               << "clusters: k_b " << n.k_b << ", k_i " << n.k_i << ", dual " << dual.count << '\n';
            break;
        }
    }
    os << "valid: yes\n";
    try {
        emit(opt.out, out, [&](std::ostream& o) { o << os.str(); });
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return validation;
    }
    return ok;
}

}  // namespace icelab::cli
