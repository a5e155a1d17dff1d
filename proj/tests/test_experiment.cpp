#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "qwalk/experiment.hpp"

using namespace qwalk;
using nlohmann::json;

namespace {

json full_config_json() {
    return json::parse(R"json({
        "topology": {"kind": "line", "half_width": 30},
        "initial": {"coin": [[0.6, 0.0], [0.0, 0.8]], "position": 2},
        "coin": {"xi_deg": 10.0, "theta_deg": 30.0, "zeta_deg": -20.0},
        "steps": 25,
        "shift": "forward",
        "symmetry_ops": ["Z", "Phi(90)"],
        "channel": {"name": "gad", "p": 0.1, "chi": 0.75},
        "trajectories": {"mode": "monte_carlo", "samples": 500, "seed": 42},
        "output": "out.csv"
    })json");
}

}  // namespace

TEST_CASE("config round-trips losslessly through JSON") {
    SUBCASE("full document") {
        const json j = full_config_json();
        const ExperimentConfig cfg = ExperimentConfig::from_json(j);
        CHECK(cfg.to_json() == j);
        CHECK(ExperimentConfig::from_json(cfg.to_json()) == cfg);
    }
    SUBCASE("minimal document keeps optionals absent") {
        const json j = json::parse(R"json({"steps": 7})json");
        const ExperimentConfig cfg = ExperimentConfig::from_json(j);
        CHECK_FALSE(cfg.topology.has_value());
        CHECK_FALSE(cfg.channel.has_value());
        CHECK(cfg.to_json() == j);
    }
    SUBCASE("cycle topology and physical channel") {
        const json j = json::parse(R"json({
            "steps": 50,
            "topology": {"kind": "cycle", "sites": 101},
            "channel": {"name": "gad_physical", "gamma0": 1.0, "n_thermal": 0.5, "time": 0.25}
        })json");
        const ExperimentConfig cfg = ExperimentConfig::from_json(j);
        CHECK(cfg.to_json() == j);
        const WalkConfig w = cfg.build_walk();
        CHECK(w.topology.is_cycle());
        REQUIRE(w.pipeline.channel.has_value());
        CHECK(w.pipeline.channel->kind == ChannelKind::Gad);
    }
}

TEST_CASE("config diagnostics name the offending field") {
    auto field_of = [](const json& j) -> std::string {
        try {
            ExperimentConfig::from_json(j);
        } catch (const ConfigError& e) {
            return e.field;
        }
        return "";
    };
    CHECK(field_of(json::parse(R"json({})json")) == "steps");
    CHECK(field_of(json::parse(R"json({"steps": -1})json")) == "steps");
    CHECK(field_of(json::parse(R"json({"steps": 5, "coin": {"theta_deg": "bogus"}})json")) ==
          "coin.theta_deg");
    CHECK(field_of(json::parse(R"json({"steps": 5, "bogus_key": 1})json")) == "bogus_key");
    CHECK(field_of(json::parse(R"json({"steps": 5, "channel": {"name": "nope", "p": 0.1}})json")) ==
          "channel.name");
    CHECK(field_of(json::parse(R"json({"steps": 5, "channel": {"name": "phase_flip"}})json")) ==
          "channel.p");
    CHECK(field_of(json::parse(R"json({"steps": 5, "channel": {"name": "phase_flip", "p": 2.0}})json")) ==
          "channel");
    CHECK(field_of(json::parse(R"json({"steps": 5, "symmetry_ops": ["B9(10)"]})json")) ==
          "symmetry_ops");
    CHECK(field_of(json::parse(R"json({"steps": 5, "topology": {"kind": "cycle", "sites": 2}})json")) ==
          "topology.sites");
    CHECK(field_of(json::parse(R"json({"steps": 5, "shift": "sideways"})json")) == "shift");
    CHECK(field_of(json::parse(
              R"json({"steps": 9, "topology": {"kind": "line", "half_width": 4}})json")) == "");
    // undersized line surfaces when the walk is built
    const ExperimentConfig small = ExperimentConfig::from_json(
        json::parse(R"json({"steps": 9, "topology": {"kind": "line", "half_width": 4}})json"));
    CHECK_THROWS_AS(small.build_walk(), ConfigError);
}

TEST_CASE("parse_symmetry") {
    CHECK(parse_symmetry("Z").kind == SymmetryOp::Kind::ZGate);
    CHECK(parse_symmetry("X").kind == SymmetryOp::Kind::XGate);
    CHECK(parse_symmetry("PRX").kind == SymmetryOp::Kind::Prx);
    const SymmetryOp phi = parse_symmetry("Phi(90)");
    CHECK(phi.kind == SymmetryOp::Kind::PhiGate);
    CHECK(phi.phi == doctest::Approx(std::numbers::pi / 2.0));
    const SymmetryOp b3 = parse_symmetry("B3(180)");
    CHECK(b3.kind == SymmetryOp::Kind::CoinVariant);
    CHECK(b3.variant_j == 3);
    CHECK(b3.phi == doctest::Approx(std::numbers::pi));
    CHECK_THROWS_AS(parse_symmetry("B5(10)"), ConfigError);
    CHECK_THROWS_AS(parse_symmetry("Phi(ninety)"), ConfigError);
    CHECK_THROWS_AS(parse_symmetry("Q"), ConfigError);
}

TEST_CASE("run_experiment picks the right mode") {
    SUBCASE("pure walk") {
        const ExperimentConfig cfg =
            ExperimentConfig::from_json(json::parse(R"json({"steps": 12})json"));
        const RunResult r = run_experiment(cfg);
        CHECK(r.mode == RunMode::Pure);
        CHECK(r.distribution.sum() == doctest::Approx(1.0).epsilon(1e-12));
        REQUIRE(r.sigma.has_value());
        // after an even number of steps only even sites carry weight
        for (int x = -12; x <= 12; ++x)
            if ((x % 2 + 2) % 2 == 1) CHECK(r.distribution.at_coordinate(x) == 0.0);
    }
    SUBCASE("a channel switches to density evolution") {
        const ExperimentConfig cfg = ExperimentConfig::from_json(json::parse(
            R"json({"steps": 12, "channel": {"name": "phase_flip", "p": 0.1}})json"));
        CHECK(run_experiment(cfg).mode == RunMode::Density);
    }
    SUBCASE("exact trajectories equal the density run") {
        const json base = json::parse(
            R"json({"steps": 8, "coin": {"theta_deg": 30.0}, "channel": {"name": "bit_flip", "p": 0.2}})json");
        json with_traj = base;
        with_traj["trajectories"] = {{"mode", "exact"}};
        const RunResult density = run_experiment(ExperimentConfig::from_json(base));
        const RunResult exact = run_experiment(ExperimentConfig::from_json(with_traj));
        CHECK(exact.mode == RunMode::Exact);
        for (std::size_t i = 0; i < density.distribution.probs.size(); ++i)
            CHECK(exact.distribution.probs[i] ==
                  doctest::Approx(density.distribution.probs[i]).epsilon(1e-10));
    }
    SUBCASE("monte-carlo runs are reproducible for a fixed seed") {
        const ExperimentConfig cfg = ExperimentConfig::from_json(json::parse(R"json({
            "steps": 8,
            "channel": {"name": "phase_flip", "p": 0.15},
            "trajectories": {"mode": "monte_carlo", "samples": 300, "seed": 9}
        })json"));
        const RunResult a = run_experiment(cfg);
        const RunResult b = run_experiment(cfg);
        CHECK(a.mode == RunMode::MonteCarlo);
        CHECK(a.samples == 300);
        for (std::size_t i = 0; i < a.distribution.probs.size(); ++i)
            CHECK(a.distribution.probs[i] == b.distribution.probs[i]);
    }
}

TEST_CASE("run_symmetry_check") {
    SUBCASE("Z holds on a noiseless biased walk at 1e-10") {
        const ExperimentConfig cfg = ExperimentConfig::from_json(json::parse(
            R"json({"steps": 60, "coin": {"theta_deg": 30.0},
                "initial": {"coin": [[1.0, 0.0], [0.0, 0.0]], "position": 0}})json"));
        const SymmetryCheckResult res = run_symmetry_check(cfg, "Z");
        CHECK(res.verdict.tolerance == 1e-10);
        CHECK(res.verdict.holds);
    }
    SUBCASE("PRX holds on a GAD-noised walk at 1e-8") {
        const ExperimentConfig cfg = ExperimentConfig::from_json(json::parse(
            R"json({"steps": 30, "coin": {"theta_deg": 60.0},
                "initial": {"coin": [[0.0, 0.0], [1.0, 0.0]], "position": 0},
                "channel": {"name": "gad", "p": 0.1, "chi": 0.75}})json"));
        const SymmetryCheckResult res = run_symmetry_check(cfg, "PRX");
        CHECK(res.verdict.tolerance == 1e-8);
        CHECK(res.verdict.holds);
    }
    SUBCASE("X alone fails on a biased walk") {
        const ExperimentConfig cfg = ExperimentConfig::from_json(json::parse(
            R"json({"steps": 40, "coin": {"theta_deg": 30.0},
                "initial": {"coin": [[1.0, 0.0], [0.0, 0.0]], "position": 0}})json"));
        CHECK_FALSE(run_symmetry_check(cfg, "X").verdict.holds);
    }
}

TEST_CASE("run_sweep") {
    const json base = json::parse(
        R"json({"steps": 40, "coin": {"theta_deg": 60.0},
            "channel": {"name": "phase_flip", "p": 0.0}})json");
    SUBCASE("sigma decreases with phase noise") {
        const auto points =
            run_sweep(ExperimentConfig::from_json(base), "p", {0.005, 0.1, 0.5});
        REQUIRE(points.size() == 3);
        CHECK(points[0].sigma > points[1].sigma);
        CHECK(points[1].sigma > points[2].sigma);
        for (const auto& pt : points) CHECK(pt.sigma_ratio == 1.0);
    }
    SUBCASE("theta sweep with a symmetry op reports the sigma ratio") {
        json with_ops = base;
        with_ops["symmetry_ops"] = {"Z"};
        const auto points =
            run_sweep(ExperimentConfig::from_json(with_ops), "theta", {30.0, 60.0});
        REQUIRE(points.size() == 2);
        // Z is a symmetry, so the ratio is 1 to numerical precision
        CHECK(points[0].sigma_ratio == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(points[1].sigma_ratio == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("n sweep auto-sizes the line") {
        const json pure = json::parse(R"json({"steps": 10})json");
        const auto points = run_sweep(ExperimentConfig::from_json(pure), "n", {25.0, 50.0});
        CHECK(points[1].sigma > points[0].sigma);
    }
    SUBCASE("bad parameter and empty values are rejected") {
        const ExperimentConfig cfg = ExperimentConfig::from_json(base);
        CHECK_THROWS_AS(run_sweep(cfg, "p", {}), ConfigError);
        CHECK_THROWS_AS(run_sweep(cfg, "zeta", {0.1}), ConfigError);
        CHECK_THROWS_AS(run_sweep(cfg, "n", {2.5}), ConfigError);
    }
    SUBCASE("X is not a symmetry of the biased walk but becomes one at p=1/2") {
        const json biased = json::parse(
            R"json({"steps": 60, "coin": {"theta_deg": 30.0},
                    "channel": {"name": "bit_flip", "p": 0.005},
                    "symmetry_ops": ["X"]})json");
        const auto points =
            run_sweep(ExperimentConfig::from_json(biased), "p", {0.005, 0.1, 0.5});
        CHECK(points[0].sigma_ratio > 1.5);
        CHECK(points[1].sigma_ratio > 1.2);
        CHECK(points[2].sigma_ratio == doctest::Approx(1.0).epsilon(1e-8));
    }
    SUBCASE("sigma ratios at complementary angles are inverses of each other") {
        const json pf = json::parse(
            R"json({"steps": 60, "coin": {"theta_deg": 30.0},
                    "channel": {"name": "phase_flip", "p": 0.1},
                    "symmetry_ops": ["X"]})json");
        const ExperimentConfig cfg = ExperimentConfig::from_json(pf);
        const double r30 = run_sweep(cfg, "theta", {30.0})[0].sigma_ratio;
        const double r60 = run_sweep(cfg, "theta", {60.0})[0].sigma_ratio;
        CHECK(r30 * r60 == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(r30 > 2.0);  // far from a symmetry at theta=30
    }
}

TEST_CASE("CSV output") {
    SUBCASE("line header, full precision, LF endings, column sums to 1") {
        const ExperimentConfig cfg =
            ExperimentConfig::from_json(json::parse(R"json({"steps": 10})json"));
        const RunResult r = run_experiment(cfg);
        std::ostringstream os;
        write_distribution_csv(os, r.distribution);
        const std::string text = os.str();
        CHECK(text.rfind("position,probability\n", 0) == 0);
        CHECK(text.find('\r') == std::string::npos);

        std::istringstream in(text);
        std::string line;
        std::getline(in, line);
        double total = 0.0;
        int rows = 0;
        while (std::getline(in, line)) {
            const auto comma = line.find(',');
            REQUIRE(comma != std::string::npos);
            total += std::stod(line.substr(comma + 1));
            ++rows;
        }
        CHECK(rows == r.distribution.topology.site_count());
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("cycle header uses 'site'") {
        Distribution d{Topology::cycle(4), {0.25, 0.25, 0.25, 0.25}};
        std::ostringstream os;
        write_distribution_csv(os, d);
        CHECK(os.str().rfind("site,probability\n", 0) == 0);
    }
    SUBCASE("full precision survives a text round trip") {
        const double v = 0.12345678901234567;
        CHECK(std::stod(format_g17(v)) == v);
    }
    SUBCASE("identical runs produce byte-identical CSV") {
        const ExperimentConfig cfg = ExperimentConfig::from_json(json::parse(R"json({
            "steps": 10,
            "channel": {"name": "gad", "p": 0.2, "chi": 0.8},
            "trajectories": {"mode": "monte_carlo", "samples": 200, "seed": 31}
        })json"));
        std::ostringstream a, b;
        const RunResult ra = run_experiment(cfg);
        const RunResult rb = run_experiment(cfg);
        write_distribution_csv(a, ra.distribution, &ra.std_error);
        write_distribution_csv(b, rb.distribution, &rb.std_error);
        CHECK(a.str() == b.str());
        CHECK(a.str().find("std_error") != std::string::npos);
    }
}
