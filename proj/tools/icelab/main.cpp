#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace icelab::cli;
    CLI::App app{"icelab: six-vertex, random-cluster and Ashkin-Teller chains with exact oracles"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "icelab 0.1.0");

    Options opt;
    std::uint64_t seed = 0;
    app.add_option("--out", opt.out, "Write CSV / report here instead of the config's output or stdout");
    app.add_option("--threads", opt.overrides.threads, "Worker threads (default: ICELAB_THREADS, else 1)")
        ->check(CLI::NonNegativeNumber);
    auto* seed_opt = app.add_option("--seed-override", seed, "Replace chain.seed from the config");

    std::string config, positional;
    auto* run = app.add_subcommand("run", "Run a model or experiment config and emit CSV");
    run->add_option("file", positional, "JSON config");
    run->add_option("--config", config, "JSON config");
    run->fallthrough();

    std::string suite;
    auto* oracle = app.add_subcommand("oracle", "Run exact oracle checks");
    oracle->add_option("suite", suite, "Suite name or 'all'")->required();
    oracle->fallthrough();

    std::string state;
    auto* snapshot = app.add_subcommand("snapshot", "Validate and summarise a state file");
    snapshot->add_option("state", state, "State file")->required();
    snapshot->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : validation;
    }
    if (*seed_opt) opt.overrides.seed = seed;

    if (*run) {
        if (config.empty() == positional.empty()) {
            std::cerr << "run: give the config either positionally or with --config\n";
            return validation;
        }
        return cmd_run(config.empty() ? positional : config, opt, std::cout, std::cerr);
    }
    if (*oracle) return cmd_oracle(suite, opt, std::cout, std::cerr);
    return cmd_snapshot(state, opt, std::cout, std::cerr);
}
