// heatmann: backward heat problem via Mann iteration.
#include "heatmann/experiment.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace ex = heatmann::experiment;

namespace {

struct Shared {
    std::string config_path;
    std::vector<std::string> sets;
    std::string out_dir;
    bool allow_oracle = false;
    std::optional<std::size_t> parallel;
    std::optional<std::uint64_t> seed;
};

void add_shared(CLI::App* cmd, Shared& s) {
    cmd->add_option("--config", s.config_path, "INI experiment description")->check(CLI::ExistingFile);
    cmd->add_option("--set", s.sets, "override one key, e.g. --set problem.gamma=2")->take_all();
    cmd->add_option("--out", s.out_dir, "output directory");
    cmd->add_flag("--allow-oracle", s.allow_oracle, "permit the exact backward solution as a reference");
    cmd->add_option("--parallel", s.parallel, "worker threads for sweeps");
    cmd->add_option("--seed", s.seed, "noise seed (replaces noise.seeds)");
}

ex::ExperimentConfig resolve(const Shared& s) {
    std::vector<std::string> overrides = s.sets;
    if (!s.out_dir.empty()) overrides.push_back("output.dir=" + s.out_dir);
    if (s.parallel) overrides.push_back("run.parallel=" + std::to_string(*s.parallel));
    if (s.seed) overrides.push_back("noise.seeds=" + std::to_string(*s.seed));
    std::optional<std::filesystem::path> path;
    if (!s.config_path.empty()) path = s.config_path;
    return ex::load_config(path, overrides);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Backward heat problem by Mann iteration on a spectral grid"};
    app.set_version_flag("--version", ex::kToolVersion);
    app.require_subcommand(1);

    Shared solve_opts, sweep_opts, gen_opts;
    auto* solve = app.add_subcommand("solve", "run one iteration and write run.csv, solution and manifest");
    auto* sweep = app.add_subcommand("sweep", "run the eps x seed grid and fit rates");
    auto* gen = app.add_subcommand("gen", "write synthetic data (and the truth when known)");
    auto* verify = app.add_subcommand("verify", "run the built-in invariant checks");
    add_shared(solve, solve_opts);
    add_shared(sweep, sweep_opts);
    add_shared(gen, gen_opts);

    bool inject_fault = false;
    verify->add_flag("--inject-fault", inject_fault, "flip the semigroup sign in the fixed-point map (mutation test)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return ex::kConfigError;
    }

    try {
        if (verify->parsed()) {
            ex::CommandOptions o;
            if (inject_fault) o.fault = heatmann::OperatorFault::flip_semigroup_sign;
            return ex::cmd_verify(o, std::cout, std::cerr);
        }
        const Shared& s = solve->parsed() ? solve_opts : sweep->parsed() ? sweep_opts : gen_opts;
        const ex::ExperimentConfig cfg = resolve(s);
        const ex::CommandOptions o{s.allow_oracle, heatmann::OperatorFault::none};
        if (solve->parsed()) return ex::cmd_solve(cfg, o, std::cout, std::cerr);
        if (sweep->parsed()) return ex::cmd_sweep(cfg, o, std::cout, std::cerr);
        return ex::cmd_gen(cfg, o, std::cout, std::cerr);
    } catch (const heatmann::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return ex::kConfigError;
    } catch (const heatmann::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ex::kConfigError;
    }
}
