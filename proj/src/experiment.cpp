#include "qwalk/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <set>

namespace qwalk {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

using nlohmann::json;

[[noreturn]] void bad_field(const std::string& field, const std::string& what) {
    throw ConfigError(field, what);
}

void reject_unknown_keys(const json& j, const std::string& where,
                         const std::set<std::string>& known) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) bad_field(where + it.key(), "unknown key");
}

double get_number(const json& j, const std::string& field) {
    if (!j.is_number()) bad_field(field, "expected a number");
    return j.get<double>();
}

int get_int(const json& j, const std::string& field) {
    if (!j.is_number_integer()) bad_field(field, "expected an integer");
    return j.get<int>();
}

cdouble get_complex(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2) bad_field(field, "expected [re, im]");
    return {get_number(j[0], field + "[0]"), get_number(j[1], field + "[1]")};
}

json complex_to_json(const cdouble& z) { return json::array({z.real(), z.imag()}); }

TopologySpec parse_topology(const json& j) {
    reject_unknown_keys(j, "topology.", {"kind", "half_width", "sites"});
    TopologySpec t;
    if (!j.contains("kind")) bad_field("topology.kind", "required");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "line") {
        t.kind = TopologyKind::Line;
        if (!j.contains("half_width")) bad_field("topology.half_width", "required for a line");
        t.size = get_int(j["half_width"], "topology.half_width");
        if (t.size < 1) bad_field("topology.half_width", "must be >= 1");
    } else if (kind == "cycle") {
        t.kind = TopologyKind::Cycle;
        if (!j.contains("sites")) bad_field("topology.sites", "required for a cycle");
        t.size = get_int(j["sites"], "topology.sites");
        if (t.size < 3) bad_field("topology.sites", "must be >= 3");
    } else {
        bad_field("topology.kind", "expected 'line' or 'cycle'");
    }
    return t;
}

ChannelSpec parse_channel(const json& j) {
    reject_unknown_keys(j, "channel.", {"name", "p", "chi", "gamma0", "n_thermal", "time"});
    ChannelSpec c;
    if (!j.contains("name")) bad_field("channel.name", "required");
    c.name = j["name"].get<std::string>();
    if (j.contains("p")) c.p = get_number(j["p"], "channel.p");
    if (j.contains("chi")) c.chi = get_number(j["chi"], "channel.chi");
    if (j.contains("gamma0")) c.gamma0 = get_number(j["gamma0"], "channel.gamma0");
    if (j.contains("n_thermal")) c.n_thermal = get_number(j["n_thermal"], "channel.n_thermal");
    if (j.contains("time")) c.time = get_number(j["time"], "channel.time");
    return c;
}

KrausChannel build_channel(const ChannelSpec& c) {
    try {
        if (c.name == "phase_flip") {
            if (!c.p) bad_field("channel.p", "required for phase_flip");
            return phase_flip(*c.p);
        }
        if (c.name == "bit_flip") {
            if (!c.p) bad_field("channel.p", "required for bit_flip");
            return bit_flip(*c.p);
        }
        if (c.name == "gad") {
            if (!c.p) bad_field("channel.p", "required for gad");
            return gad_channel(*c.p, c.chi.value_or(1.0));
        }
        if (c.name == "gad_physical") {
            if (!c.gamma0 || !c.n_thermal || !c.time)
                bad_field("channel", "gad_physical needs gamma0, n_thermal and time");
            return gad_from_physical(GadPhysicalParams{*c.gamma0, *c.n_thermal, *c.time});
        }
    } catch (const std::invalid_argument& e) {
        bad_field("channel", e.what());
    }
    bad_field("channel.name", "unknown channel '" + c.name + "'");
}

ShiftKind parse_shift(const std::string& s) {
    if (s == "forward") return ShiftKind::Forward;
    if (s == "reverse") return ShiftKind::Reverse;
    if (s == "flip") return ShiftKind::FlipShift;
    bad_field("shift", "expected 'forward', 'reverse' or 'flip'");
}

}  // namespace

SymmetryOp parse_symmetry(const std::string& text) {
    if (text == "Z") return SymmetryOp::z();
    if (text == "X") return SymmetryOp::x();
    if (text == "PRX") return SymmetryOp::prx();
    const auto open = text.find('(');
    if (open != std::string::npos && text.back() == ')') {
        const std::string head = text.substr(0, open);
        const std::string arg = text.substr(open + 1, text.size() - open - 2);
        double deg = 0.0;
        try {
            std::size_t used = 0;
            deg = std::stod(arg, &used);
            if (used != arg.size()) throw std::invalid_argument(arg);
        } catch (const std::exception&) {
            bad_field("symmetry_ops", "bad angle in '" + text + "'");
        }
        if (head == "Phi") return SymmetryOp::phi_gate(deg * kDegToRad);
        if (head.size() == 2 && head[0] == 'B' && head[1] >= '1' && head[1] <= '4')
            return SymmetryOp::coin_variant(head[1] - '0', deg * kDegToRad);
    }
    bad_field("symmetry_ops",
              "unknown symmetry '" + text + "' (want Z, X, PRX, Phi(deg) or B1..B4(deg))");
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");
    reject_unknown_keys(j, "", {"topology", "initial", "coin", "steps", "shift",
                                "symmetry_ops", "channel", "trajectories", "output"});
    ExperimentConfig c;
    if (!j.contains("steps")) bad_field("steps", "required");
    c.steps = get_int(j["steps"], "steps");
    if (c.steps < 0) bad_field("steps", "must be >= 0");

    if (j.contains("topology")) c.topology = parse_topology(j["topology"]);

    if (j.contains("initial")) {
        const json& ji = j["initial"];
        reject_unknown_keys(ji, "initial.", {"coin", "position"});
        InitialSpec init;
        if (ji.contains("coin")) {
            if (!ji["coin"].is_array() || ji["coin"].size() != 2)
                bad_field("initial.coin", "expected [[re,im],[re,im]]");
            init.coin0 = get_complex(ji["coin"][0], "initial.coin[0]");
            init.coin1 = get_complex(ji["coin"][1], "initial.coin[1]");
        }
        if (ji.contains("position")) init.position = get_int(ji["position"], "initial.position");
        c.initial = init;
    }

    if (j.contains("coin")) {
        const json& jc = j["coin"];
        reject_unknown_keys(jc, "coin.", {"xi_deg", "theta_deg", "zeta_deg"});
        CoinSpec coin;
        if (jc.contains("xi_deg")) coin.xi_deg = get_number(jc["xi_deg"], "coin.xi_deg");
        if (jc.contains("theta_deg")) coin.theta_deg = get_number(jc["theta_deg"], "coin.theta_deg");
        if (jc.contains("zeta_deg")) coin.zeta_deg = get_number(jc["zeta_deg"], "coin.zeta_deg");
        c.coin = coin;
    }

    if (j.contains("shift")) {
        c.shift = j["shift"].get<std::string>();
        parse_shift(*c.shift);  // validate now
    }

    if (j.contains("symmetry_ops")) {
        if (!j["symmetry_ops"].is_array()) bad_field("symmetry_ops", "expected an array");
        for (const auto& s : j["symmetry_ops"]) {
            if (!s.is_string()) bad_field("symmetry_ops", "entries must be strings");
            c.symmetry_ops.push_back(s.get<std::string>());
            parse_symmetry(c.symmetry_ops.back());  // validate now
        }
    }

    if (j.contains("channel")) {
        c.channel = parse_channel(j["channel"]);
        build_channel(*c.channel);  // validate name and parameter ranges now
    }

    if (j.contains("trajectories")) {
        const json& jt = j["trajectories"];
        reject_unknown_keys(jt, "trajectories.", {"mode", "samples", "seed", "branch_cap"});
        TrajectorySpec t;
        if (!jt.contains("mode")) bad_field("trajectories.mode", "required");
        t.mode = jt["mode"].get<std::string>();
        if (t.mode != "exact" && t.mode != "monte_carlo")
            bad_field("trajectories.mode", "expected 'exact' or 'monte_carlo'");
        if (jt.contains("samples")) t.samples = jt["samples"].get<long>();
        if (jt.contains("seed")) t.seed = jt["seed"].get<std::uint64_t>();
        if (jt.contains("branch_cap")) t.branch_cap = jt["branch_cap"].get<std::size_t>();
        if (t.mode == "monte_carlo" && t.samples < 1)
            bad_field("trajectories.samples", "must be >= 1 for monte_carlo");
        c.trajectories = t;
    }

    if (j.contains("output")) c.output = j["output"].get<std::string>();
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("<file>", e.what());
    }
    return from_json(j);
}

json ExperimentConfig::to_json() const {
    json j;
    j["steps"] = steps;
    if (topology) {
        json t;
        if (topology->kind == TopologyKind::Line) {
            t["kind"] = "line";
            t["half_width"] = topology->size;
        } else {
            t["kind"] = "cycle";
            t["sites"] = topology->size;
        }
        j["topology"] = t;
    }
    if (initial) {
        j["initial"] = {{"coin", json::array({complex_to_json(initial->coin0),
                                              complex_to_json(initial->coin1)})},
                        {"position", initial->position}};
    }
    if (coin) {
        j["coin"] = {{"xi_deg", coin->xi_deg},
                     {"theta_deg", coin->theta_deg},
                     {"zeta_deg", coin->zeta_deg}};
    }
    if (shift) j["shift"] = *shift;
    if (!symmetry_ops.empty()) j["symmetry_ops"] = symmetry_ops;
    if (channel) {
        json c;
        c["name"] = channel->name;
        if (channel->p) c["p"] = *channel->p;
        if (channel->chi) c["chi"] = *channel->chi;
        if (channel->gamma0) c["gamma0"] = *channel->gamma0;
        if (channel->n_thermal) c["n_thermal"] = *channel->n_thermal;
        if (channel->time) c["time"] = *channel->time;
        j["channel"] = c;
    }
    if (trajectories) {
        json t;
        t["mode"] = trajectories->mode;
        if (trajectories->mode == "monte_carlo") {
            t["samples"] = trajectories->samples;
            t["seed"] = trajectories->seed;
        }
        if (trajectories->branch_cap != kDefaultBranchCap)
            t["branch_cap"] = trajectories->branch_cap;
        j["trajectories"] = t;
    }
    if (output) j["output"] = *output;
    return j;
}

WalkConfig ExperimentConfig::build_plain_walk() const {
    WalkConfig w;
    const InitialSpec init = initial.value_or(InitialSpec{
        cdouble{1.0 / std::sqrt(2.0), 0.0}, cdouble{0.0, 1.0 / std::sqrt(2.0)}, 0});
    w.initial = InitialState{init.coin0, init.coin1, init.position};

    if (topology) {
        w.topology = topology->kind == TopologyKind::Line ? Topology::line(topology->size)
                                                          : Topology::cycle(topology->size);
    } else {
        w.topology = Topology::line_for_walk(steps, init.position);
    }
    if (w.topology.is_line() && w.topology.half_width() < steps + std::abs(init.position))
        bad_field("topology.half_width",
                  "too small for " + std::to_string(steps) + " steps (light cone)");

    const CoinSpec cs = coin.value_or(CoinSpec{});
    try {
        w.pipeline.coin = build_coin(
            CoinParams(cs.xi_deg * kDegToRad, cs.theta_deg * kDegToRad, cs.zeta_deg * kDegToRad));
    } catch (const std::invalid_argument& e) {
        bad_field("coin", e.what());
    }
    if (shift) w.pipeline.shift = parse_shift(*shift);
    if (channel) w.pipeline.channel = build_channel(*channel);
    w.steps = steps;
    return w;
}

WalkConfig ExperimentConfig::build_walk() const {
    WalkConfig w = build_plain_walk();
    for (const std::string& s : symmetry_ops) w = augment_walk(std::move(w), parse_symmetry(s));
    return w;
}

namespace {

RunResult finish_run(RunMode mode, Distribution d) {
    RunResult r;
    r.mode = mode;
    r.sigma = d.topology.is_line() ? std::optional<double>(std_dev(d)) : std::nullopt;
    r.distribution = std::move(d);
    return r;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config) {
    const WalkConfig walk = config.build_walk();
    if (config.trajectories) {
        if (!walk.pipeline.channel)
            bad_field("trajectories", "trajectory modes need a channel");
        if (config.trajectories->mode == "exact")
            return finish_run(RunMode::Exact,
                              enumerate_exact(walk, config.trajectories->branch_cap));
        TrajectoryEstimate est =
            sample_monte_carlo(walk, config.trajectories->samples, config.trajectories->seed);
        RunResult r = finish_run(RunMode::MonteCarlo, std::move(est.distribution));
        r.std_error = std::move(est.std_error);
        r.samples = est.samples;
        r.seed = est.seed;
        return r;
    }
    if (walk.pipeline.channel)
        return finish_run(RunMode::Density, position_distribution(evolve_density(walk)));
    return finish_run(RunMode::Pure, position_distribution(evolve_pure(walk)));
}

SymmetryCheckResult run_symmetry_check(const ExperimentConfig& config,
                                       const std::string& symmetry, double tolerance) {
    if (config.trajectories && config.trajectories->mode == "monte_carlo")
        bad_field("trajectories", "symmetry-check compares deterministic runs; use exact mode");
    parse_symmetry(symmetry);  // reject bad names before running anything
    SymmetryCheckResult result;
    result.base = run_experiment(config);

    ExperimentConfig augmented = config;
    augmented.symmetry_ops.push_back(symmetry);
    result.augmented = run_experiment(augmented);

    if (tolerance <= 0.0)
        tolerance = result.base.mode == RunMode::Density ? 1e-8 : 1e-10;
    result.verdict =
        symmetry_verdict(result.base.distribution, result.augmented.distribution, tolerance);
    return result;
}

std::vector<SweepPoint> run_sweep(const ExperimentConfig& config, const std::string& parameter,
                                  const std::vector<double>& values) {
    if (values.empty()) bad_field("values", "sweep needs at least one value");
    std::vector<SweepPoint> points;
    for (const double v : values) {
        ExperimentConfig variant = config;
        if (parameter == "p") {
            if (!variant.channel) bad_field("channel", "sweep over p needs a channel");
            if (variant.channel->name == "gad_physical")
                bad_field("channel", "sweep over p needs a channel with an explicit p");
            variant.channel->p = v;
        } else if (parameter == "theta") {
            CoinSpec cs = variant.coin.value_or(CoinSpec{});
            cs.theta_deg = v;
            variant.coin = cs;
        } else if (parameter == "n") {
            if (v < 0.0 || v != std::floor(v)) bad_field("values", "n values must be integers >= 0");
            variant.steps = static_cast<int>(v);
        } else {
            bad_field("parameter", "expected 'p', 'theta' or 'n'");
        }

        ExperimentConfig plain = variant;
        plain.symmetry_ops.clear();
        const RunResult base = run_experiment(plain);
        if (!base.sigma)
            bad_field("topology", "sweep reports sigma and needs a line topology");
        SweepPoint point;
        point.value = v;
        point.sigma = *base.sigma;
        if (!variant.symmetry_ops.empty()) {
            const RunResult with_ops = run_experiment(variant);
            point.sigma_ratio = *base.sigma / *with_ops.sigma;
        }
        points.push_back(point);
    }
    return points;
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_distribution_csv(std::ostream& os, const Distribution& d,
                            const std::vector<double>* std_error) {
    os << (d.topology.is_line() ? "position,probability" : "site,probability");
    if (std_error) os << ",std_error";
    os << "\n";
    for (std::size_t i = 0; i < d.probs.size(); ++i) {
        os << d.topology.coordinate_at(static_cast<int>(i)) << "," << format_g17(d.probs[i]);
        if (std_error) os << "," << format_g17((*std_error)[i]);
        os << "\n";
    }
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& points) {
    os << "value,sigma,sigma_ratio\n";
    for (const SweepPoint& p : points)
        os << format_g17(p.value) << "," << format_g17(p.sigma) << ","
           << format_g17(p.sigma_ratio) << "\n";
}

}  // namespace qwalk
