#include "commands.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace icelab;
using namespace icelab::cli;

namespace {

namespace fs = std::filesystem;

fs::path scratch_dir() {
    const fs::path d = fs::temp_directory_path() / "icelab_cli_tests";
    fs::create_directories(d);
    return d;
}

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path p = scratch_dir() / name;
    std::ofstream(p) << text;
    return p;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kHeights = R"json({
  "model": "heights",
  "params": {"a": 1, "b": 1, "c": 3},
  "domain": {"shape": "diamond", "N": 4, "parity": "even"},
  "chain": {"seed": 7, "sweeps": 300, "burn_in": 20},
  "observables": ["h(0,0)", "var(0,0)"]
})json";

std::string error_of(const std::string& text, const Overrides& o = {}) {
    try {
        parse_config(text, "cfg.json", o);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("a valid model config maps onto a run") {
    const JobConfig job = parse_config(kHeights, "cfg.json");
    CHECK(job.kind == JobKind::model);
    CHECK(job.run.model == ModelKind::heights);
    CHECK(job.run.params.c == 3);
    CHECK(job.run.domain.N == 4);
    CHECK(job.run.chain.seed == 7);
    CHECK(job.run.chain.sweeps == 300);
    CHECK(job.run.observables.size() == 2);
    CHECK(job.run.mode == WeightMode::plain);
}

TEST_CASE("missing seed names the field and its object") {
    const std::string text = R"json({
  "model": "heights",
  "params": {"c": 3},
  "domain": {"N": 4},
  "chain": {
    "sweeps": 10
  },
  "observables": ["h(0,0)"]
})json";
    CHECK(error_of(text) == "cfg.json:5: chain: missing required field 'seed'");
    Overrides o;
    o.seed = 99;
    CHECK(parse_config(text, "cfg.json", o).run.chain.seed == 99);
}

TEST_CASE("schema violations point at their line") {
    std::string text = kHeights;
    text.replace(text.find("\"c\": 3"), 6, "\"c\": 3, \"d\": 1");
    CHECK(error_of(text) == "cfg.json:3: params.d: unknown key 'd'");

    text = kHeights;
    text.replace(text.find("\"seed\": 7"), 9, "\"seed\": -7");
    CHECK(error_of(text) == "cfg.json:5: chain.seed: expected a nonnegative integer");

    text = kHeights;
    text.replace(text.find("\"N\": 4"), 6, "\"N\": 4.5");
    CHECK(error_of(text) == "cfg.json:4: domain.N: expected an integer");

    text = kHeights;
    text.replace(text.find("\"var(0,0)\""), 10, "\n    17");
    CHECK(error_of(text) == "cfg.json:7: observables[1]: expected a string");

    text = kHeights;
    text.replace(text.find("\"parity\": \"even\""), 16, "\"parity\": \"odd\"");
    CHECK(error_of(text) == "cfg.json:4: domain.parity: the domain is even");

    text = kHeights;
    text.replace(text.find("\"N\": 4"), 6, "\"N\": 65");
    CHECK(error_of(text).find("domain.N: 65 exceeds the budget of 64") != std::string::npos);

    text = kHeights;
    text.replace(text.find("\"sweeps\": 300"), 13, "\"sweeps\": 300, \"sweeps\": 5");
    CHECK(error_of(text) == "cfg.json:5: chain.sweeps: duplicate key");

    CHECK(error_of("{\"model\": \"heights\",, }").find("invalid JSON") != std::string::npos);
    CHECK(error_of("[]").find("expected an object") != std::string::npos);
    CHECK(error_of(R"json({"experiment": "x", "model": "rc"})json").find("exactly one") != std::string::npos);
}

TEST_CASE("model-specific parameters") {
    const std::string rc = R"json({"model": "rc", "params": {"q": 4, "q_b": 1.5}, "domain": {"N": 3},
        "chain": {"seed": 1, "initial_state": "random"}, "observables": ["edge_density"]})json";
    const JobConfig job = parse_config(rc, "rc.json");
    CHECK(job.run.rc.p == doctest::Approx(p_critical(4)));
    CHECK(job.run.rc.q_b == 1.5);

    std::string with_boundary = rc;
    with_boundary.replace(with_boundary.find("\"domain\""), 0, "\"boundary\": {\"n\": 1}, ");
    CHECK(error_of(with_boundary).find("boundary") != std::string::npos);

    const std::string cb = R"json({"model": "heights", "params": {"c": 3, "c_b": "inf"}, "domain": {"N": 2},
        "chain": {"seed": 1}, "observables": ["h(0,0)"]})json";
    const JobConfig inf = parse_config(cb, "cb.json");
    CHECK(inf.run.mode == WeightMode::boundary_cb);
    CHECK(std::isinf(inf.run.params.c_b));

    const std::string at = R"json({"experiment": "at_selfdual", "params": {"J_list": [0.3]}, "chain": {"seed": 1}})json";
    CHECK(error_of(at).find("params.J_list[0]") != std::string::npos);
}

TEST_CASE("experiment configs") {
    const JobConfig v = parse_config(R"json({"experiment": "variance_scaling",
        "params": {"c_list": [2, 3], "N_list": [4, 8]}, "chain": {"seed": 3, "sweeps": 10}})json", "v.json");
    CHECK(v.kind == JobKind::variance_scaling);
    CHECK(v.variance.N_list == std::vector<int>{4, 8});
    CHECK(v.variance.chain.seed == 3);
    CHECK(error_of(R"json({"experiment": "variance_scaling", "params": {"N_list": [8, 4]}, "chain": {"seed": 3}})json")
              .find("sizes must increase") != std::string::npos);
    CHECK(error_of(R"json({"experiment": "nope", "chain": {"seed": 3}})json").find("unknown experiment") != std::string::npos);
}

TEST_CASE("run writes identical bytes twice and a readable snapshot") {
    std::string text = kHeights;
    const fs::path snap = scratch_dir() / "final.state";
    text.insert(text.rfind('}'), ", \"snapshot\": \"" + snap.string() + "\"");
    const fs::path cfg = write_file("heights.json", text);
    std::ostringstream out1, out2, err;
    CHECK(cmd_run(cfg.string(), {}, out1, err) == ok);
    CHECK(cmd_run(cfg.string(), {}, out2, err) == ok);
    CHECK(out1.str() == out2.str());
    CHECK(out1.str().rfind(kCsvHeader, 0) == 0);
    std::ostringstream summary;
    CHECK(cmd_snapshot(snap.string(), {}, summary, err) == ok);
    CHECK(summary.str().find("valid: yes") != std::string::npos);

    Options o;
    o.out = (scratch_dir() / "out.csv").string();
    CHECK(cmd_run(cfg.string(), o, out1, err) == ok);
    CHECK(read_file(o.out) == out2.str());
}

TEST_CASE("exit codes") {
    std::ostringstream out, err;
    const fs::path bad = write_file("noseed.json", R"json({"model": "heights", "params": {"c": 3}, "domain": {"N": 2},
        "chain": {}, "observables": ["h(0,0)"]})json");
    CHECK(cmd_run(bad.string(), {}, out, err) == validation);
    CHECK(err.str().find("'seed'") != std::string::npos);

    const fs::path obs = write_file("obs.json", R"json({"model": "heights", "params": {"c": 3}, "domain": {"N": 2},
        "chain": {"seed": 1}, "observables": ["edge_density"]})json");
    CHECK(cmd_run(obs.string(), {}, out, err) == validation);

    CHECK(cmd_oracle("no_such_suite", {}, out, err) == validation);
    CHECK(cmd_snapshot((scratch_dir() / "absent.state").string(), {}, out, err) == validation);
    std::ostringstream report;
    CHECK(cmd_oracle("cluster_form", {}, report, err) == ok);
    CHECK(report.str().find("oracle cluster_form: PASS") != std::string::npos);
}
