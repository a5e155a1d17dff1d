#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qwalk/analysis.hpp"
#include "qwalk/trajectories.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

// Bad or inconsistent experiment configuration; carries the offending field.
struct ConfigError : std::runtime_error {
    ConfigError(std::string field_name, const std::string& what)
        : std::runtime_error("config field '" + field_name + "': " + what),
          field(std::move(field_name)) {}
    std::string field;
};

struct TopologySpec {
    TopologyKind kind = TopologyKind::Line;
    int size = 0;  // half_width (line) or sites (cycle)
    bool operator==(const TopologySpec&) const = default;
};

struct InitialSpec {
    cdouble coin0{1.0, 0.0};
    cdouble coin1{0.0, 0.0};
    int position = 0;
    bool operator==(const InitialSpec&) const = default;
};

// Coin angles as the CLI takes them: degrees.
struct CoinSpec {
    double xi_deg = 0.0;
    double theta_deg = 45.0;
    double zeta_deg = 0.0;
    bool operator==(const CoinSpec&) const = default;
};

struct ChannelSpec {
    std::string name;  // phase_flip | bit_flip | gad | gad_physical
    std::optional<double> p;
    std::optional<double> chi;
    std::optional<double> gamma0;
    std::optional<double> n_thermal;
    std::optional<double> time;
    bool operator==(const ChannelSpec&) const = default;
};

struct TrajectorySpec {
    std::string mode;  // exact | monte_carlo
    long samples = 0;
    std::uint64_t seed = 0;
    std::size_t branch_cap = kDefaultBranchCap;
    bool operator==(const TrajectorySpec&) const = default;
};

// One experiment as described by a JSON document. Optional fields absent in
// the document stay absent, so load/save round-trips losslessly.
struct ExperimentConfig {
    std::optional<TopologySpec> topology;
    std::optional<InitialSpec> initial;
    std::optional<CoinSpec> coin;
    int steps = 0;
    std::optional<std::string> shift;  // forward | reverse | flip
    std::vector<std::string> symmetry_ops;
    std::optional<ChannelSpec> channel;
    std::optional<TrajectorySpec> trajectories;
    std::optional<std::string> output;

    bool operator==(const ExperimentConfig&) const = default;

    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig load(const std::string& path);
    nlohmann::json to_json() const;

    // Resolve into an engine configuration: defaults filled (auto-sized line,
    // symmetric start, Hadamard coin), degrees converted, symmetry ops
    // applied in list order.
    WalkConfig build_walk() const;
    // Same but without the symmetry op augmentations.
    WalkConfig build_plain_walk() const;
};

// "Z", "X", "PRX", "Phi(<deg>)", "B1(<deg>)".."B4(<deg>)"
SymmetryOp parse_symmetry(const std::string& text);

enum class RunMode { Pure, Density, Exact, MonteCarlo };

struct RunResult {
    RunMode mode = RunMode::Pure;
    Distribution distribution;
    std::optional<double> sigma;     // line topologies only
    std::vector<double> std_error;   // monte_carlo only
    long samples = 0;
    std::uint64_t seed = 0;
};

RunResult run_experiment(const ExperimentConfig& config);

struct SymmetryCheckResult {
    RunResult base;
    RunResult augmented;
    SymmetryVerdict verdict;
};

// Runs the configured walk plain and with one extra symmetry op; tolerance 0
// picks the default for the mode (1e-10 unitary, 1e-8 density).
SymmetryCheckResult run_symmetry_check(const ExperimentConfig& config,
                                       const std::string& symmetry, double tolerance = 0.0);

// For each value, overrides `parameter` (p | theta | n), then measures sigma
// without the config's symmetry ops and the ratio against the run with them.
std::vector<SweepPoint> run_sweep(const ExperimentConfig& config,
                                  const std::string& parameter,
                                  const std::vector<double>& values);

// Full-precision decimal, %.17g.
std::string format_g17(double v);

// Header `position,probability` (line) or `site,probability` (cycle); adds a
// std_error column when given. LF line endings.
void write_distribution_csv(std::ostream& os, const Distribution& d,
                            const std::vector<double>* std_error = nullptr);

void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& points);

}  // namespace qwalk
