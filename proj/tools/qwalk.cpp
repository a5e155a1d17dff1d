// qwalk: discrete-time quantum walk experiments on a line or cycle.
// Subcommands: run, symmetry-check, sweep, trajectories, cycle.
// Exit codes: 0 ok, 1 bad configuration, 2 numerical invariant violation,
// 3 symmetry verdict failed.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qwalk/experiment.hpp"

namespace {

using namespace qwalk;

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    double tol = 0.0;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_tol = false) {
    cmd->add_option("--config", opts.config_path, "experiment config (JSON)")->required();
    cmd->add_option("--seed", opts.seed, "override the trajectory seed");
    cmd->add_option("--out", opts.out, "override the output path");
    if (with_tol) cmd->add_option("--tol", opts.tol, "symmetry tolerance (default by mode)");
}

ExperimentConfig load_config(const CommonOpts& opts) {
    ExperimentConfig cfg = ExperimentConfig::load(opts.config_path);
    if (opts.seed) {
        if (!cfg.trajectories)
            throw ConfigError("trajectories", "--seed needs a trajectories section");
        cfg.trajectories->seed = *opts.seed;
    }
    if (opts.out) cfg.output = *opts.out;
    return cfg;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("output", "cannot open '" + path + "' for writing");
    out << content;
}

std::string mode_name(RunMode m) {
    switch (m) {
        case RunMode::Pure: return "pure";
        case RunMode::Density: return "density";
        case RunMode::Exact: return "exact";
        case RunMode::MonteCarlo: return "monte_carlo";
    }
    return "?";
}

void print_metadata(const ExperimentConfig& cfg, const RunResult& r, const std::string& csv_path) {
    std::cout << "mode=" << mode_name(r.mode) << " steps=" << cfg.steps;
    if (r.sigma) std::cout << " sigma=" << format_g17(*r.sigma);
    if (r.mode == RunMode::MonteCarlo)
        std::cout << " samples=" << r.samples << " seed=" << r.seed;
    std::cout << " sum=" << format_g17(r.distribution.sum()) << " csv=" << csv_path << "\n";
}

int do_run(const CommonOpts& opts, bool cycle_defaults, bool trajectories_required) {
    ExperimentConfig cfg = load_config(opts);
    if (cycle_defaults && !cfg.topology)
        cfg.topology = TopologySpec{TopologyKind::Cycle, 101};
    if (trajectories_required && !cfg.trajectories)
        throw ConfigError("trajectories", "the trajectories subcommand needs trajectory settings");

    const RunResult r = run_experiment(cfg);
    const std::string path = cfg.output.value_or("distribution.csv");
    std::ostringstream csv;
    write_distribution_csv(csv, r.distribution,
                           r.mode == RunMode::MonteCarlo ? &r.std_error : nullptr);
    write_file(path, csv.str());
    print_metadata(cfg, r, path);
    return 0;
}

int do_symmetry_check(const CommonOpts& opts, const std::string& symmetry) {
    const ExperimentConfig cfg = load_config(opts);
    const SymmetryCheckResult res = run_symmetry_check(cfg, symmetry, opts.tol);

    const std::string stem = cfg.output.value_or("symmetry_check");
    std::ostringstream base_csv, sym_csv;
    write_distribution_csv(base_csv, res.base.distribution);
    write_distribution_csv(sym_csv, res.augmented.distribution);
    write_file(stem + "_base.csv", base_csv.str());
    write_file(stem + "_sym.csv", sym_csv.str());

    std::cout << "symmetry=" << symmetry
              << " max_abs_diff=" << format_g17(res.verdict.max_abs_diff)
              << " tol=" << format_g17(res.verdict.tolerance) << " holds="
              << (res.verdict.holds ? "true" : "false") << "\n";
    return res.verdict.holds ? 0 : 3;
}

int do_sweep(const CommonOpts& opts, const std::string& parameter,
             const std::vector<double>& values) {
    const ExperimentConfig cfg = load_config(opts);
    const std::vector<SweepPoint> points = run_sweep(cfg, parameter, values);
    const std::string path = cfg.output.value_or("sweep.csv");
    std::ostringstream csv;
    write_sweep_csv(csv, points);
    write_file(path, csv.str());
    std::cout << "parameter=" << parameter << " points=" << points.size() << " csv=" << path
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"discrete-time quantum walk simulator"};
    app.require_subcommand(1);

    CommonOpts run_opts, cycle_opts, traj_opts, check_opts, sweep_opts;
    std::string symmetry;
    std::string parameter;
    std::vector<double> values;

    CLI::App* run_cmd = app.add_subcommand("run", "evolve a walk and write its distribution");
    add_common(run_cmd, run_opts);

    CLI::App* cycle_cmd = app.add_subcommand("cycle", "run with cycle topology defaults");
    add_common(cycle_cmd, cycle_opts);

    CLI::App* traj_cmd =
        app.add_subcommand("trajectories", "evolve by exact or sampled Kraus unravelings");
    add_common(traj_cmd, traj_opts);

    CLI::App* check_cmd =
        app.add_subcommand("symmetry-check", "compare a walk against its augmented variant");
    add_common(check_cmd, check_opts, /*with_tol=*/true);
    check_cmd->add_option("--symmetry", symmetry, "Z, X, PRX, Phi(deg) or B1..B4(deg)")
        ->required();

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "sigma across a parameter range");
    add_common(sweep_cmd, sweep_opts);
    sweep_cmd->add_option("--parameter", parameter, "p, theta or n")->required();
    sweep_cmd->add_option("--values", values, "comma-separated values")
        ->required()
        ->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return do_run(run_opts, false, false);
        if (cycle_cmd->parsed()) return do_run(cycle_opts, true, false);
        if (traj_cmd->parsed()) return do_run(traj_opts, false, true);
        if (check_cmd->parsed()) return do_symmetry_check(check_opts, symmetry);
        if (sweep_cmd->parsed()) return do_sweep(sweep_opts, parameter, values);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const numerical_error& e) {
        std::cerr << "numerical invariant violated: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
