#include "qwalk/trajectories.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace qwalk {

namespace {

const KrausChannel& require_channel(const WalkConfig& config) {
    if (!config.pipeline.channel)
        throw std::invalid_argument("trajectory evolution needs a channel in the pipeline");
    return *config.pipeline.channel;
}

void check_branch_cap(std::size_t ops, int steps, std::size_t cap) {
    std::size_t count = 1;
    for (int k = 0; k < steps; ++k) {
        if (count > cap / ops)
            throw std::invalid_argument("branch count " + std::to_string(ops) + "^" +
                                        std::to_string(steps) + " exceeds cap " +
                                        std::to_string(cap));
        count *= ops;
    }
}

void apply_coin_op(PureState& psi, const Mat2& u) {
    const int n = psi.site_count();
    cdouble* a = psi.data().data();
    for (int x = 0; x < n; ++x) {
        const cdouble a0 = a[2 * x];
        const cdouble a1 = a[2 * x + 1];
        a[2 * x] = u.e[0] * a0 + u.e[1] * a1;
        a[2 * x + 1] = u.e[2] * a0 + u.e[3] * a1;
    }
}

struct BranchWalker {
    const WalkConfig& config;
    const KrausChannel& channel;
    StepResolver resolve;
    const std::function<void(const std::vector<int>&, const PureState&)>& visit;
    std::vector<int> indices;

    void descend(const PureState& psi, int step) {
        if (step == config.steps) {
            visit(indices, psi);
            return;
        }
        PureState evolved = psi;
        step_pure_unitary(evolved, resolve.coin(step).matrix, resolve.shift(step),
                          config.pipeline.parity_each_step, config.pipeline.symmetry_gates);
        for (std::size_t j = 0; j < channel.ops.size(); ++j) {
            PureState branch = evolved;
            apply_coin_op(branch, channel.ops[j]);
            indices.push_back(static_cast<int>(j));
            descend(branch, step + 1);
            indices.pop_back();
        }
    }
};

// Bit-exact across platforms: top 53 bits of the mt19937_64 output.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void for_each_unraveling(
    const WalkConfig& config,
    const std::function<void(const std::vector<int>&, const PureState&)>& visit,
    std::size_t branch_cap) {
    const KrausChannel& channel = require_channel(config);
    check_branch_cap(channel.ops.size(), config.steps, branch_cap);
    BranchWalker walker{config, channel, StepResolver(config), visit, {}};
    walker.descend(new_pure(config.initial, config.topology), 0);
}

std::vector<Unraveling> enumerate_unravelings(const WalkConfig& config, std::size_t branch_cap) {
    std::vector<Unraveling> out;
    for_each_unraveling(
        config,
        [&](const std::vector<int>& indices, const PureState& branch) {
            out.push_back(Unraveling{indices, branch.norm_sq()});
        },
        branch_cap);
    return out;
}

Distribution enumerate_exact(const WalkConfig& config, std::size_t branch_cap) {
    const int sites = config.topology.site_count();
    std::vector<KahanSum> acc(sites);
    for_each_unraveling(
        config,
        [&](const std::vector<int>&, const PureState& branch) {
            for (int x = 0; x < sites; ++x)
                acc[x].add(std::norm(branch.amp(0, x)) + std::norm(branch.amp(1, x)));
        },
        branch_cap);
    Distribution d{config.topology, std::vector<double>(sites)};
    for (int x = 0; x < sites; ++x) d.probs[x] = acc[x].value();
    return d;
}

TrajectoryEstimate sample_monte_carlo(const WalkConfig& config, long samples,
                                      std::uint64_t seed) {
    const KrausChannel& channel = require_channel(config);
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    StepResolver resolve(config);
    const std::size_t m = channel.ops.size();
    const int sites = config.topology.site_count();

    std::mt19937_64 rng(seed);
    std::vector<KahanSum> mean(sites);
    std::vector<KahanSum> sum_sq(sites);
    std::vector<double> weights(m);

    for (long s = 0; s < samples; ++s) {
        PureState psi = new_pure(config.initial, config.topology);
        for (int k = 0; k < config.steps; ++k) {
            step_pure_unitary(psi, resolve.coin(k).matrix, resolve.shift(k),
                              config.pipeline.parity_each_step,
                              config.pipeline.symmetry_gates);
            // Candidate branch weights in one pass over the state.
            std::fill(weights.begin(), weights.end(), 0.0);
            const cdouble* a = psi.data().data();
            for (int x = 0; x < sites; ++x) {
                const cdouble a0 = a[2 * x];
                const cdouble a1 = a[2 * x + 1];
                if (a0 == cdouble{} && a1 == cdouble{}) continue;
                for (std::size_t j = 0; j < m; ++j) {
                    const Mat2& e = channel.ops[j];
                    weights[j] += std::norm(e.e[0] * a0 + e.e[1] * a1) +
                                  std::norm(e.e[2] * a0 + e.e[3] * a1);
                }
            }
            double total = 0.0;
            for (double w : weights) total += w;
            const double u = uniform01(rng) * total;
            std::size_t pick = m - 1;
            double cum = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                cum += weights[j];
                if (u < cum) {
                    pick = j;
                    break;
                }
            }
            apply_coin_op(psi, channel.ops[pick]);
            psi.scale(1.0 / std::sqrt(weights[pick]));
        }
        for (int x = 0; x < sites; ++x) {
            const double p = std::norm(psi.amp(0, x)) + std::norm(psi.amp(1, x));
            mean[x].add(p);
            sum_sq[x].add(p * p);
        }
    }

    TrajectoryEstimate est;
    est.samples = samples;
    est.seed = seed;
    est.distribution = Distribution{config.topology, std::vector<double>(sites)};
    est.std_error.resize(sites);
    const double n = static_cast<double>(samples);
    for (int x = 0; x < sites; ++x) {
        const double mu = mean[x].value() / n;
        est.distribution.probs[x] = mu;
        if (samples > 1) {
            const double var = std::max(0.0, sum_sq[x].value() / n - mu * mu);
            est.std_error[x] = std::sqrt(var / (n - 1.0));
        }
    }
    return est;
}

TrajectorySymmetryReport verify_symmetry_trajectorywise(const WalkConfig& config,
                                                        const SymmetryOp& symmetry,
                                                        std::size_t branch_cap) {
    require_channel(config);
    const WalkConfig augmented = augment_walk(config, symmetry);
    const int sites = config.topology.site_count();

    std::vector<std::vector<double>> base_contrib;
    for_each_unraveling(
        config,
        [&](const std::vector<int>&, const PureState& branch) {
            std::vector<double> p(sites);
            for (int x = 0; x < sites; ++x)
                p[x] = std::norm(branch.amp(0, x)) + std::norm(branch.amp(1, x));
            base_contrib.push_back(std::move(p));
        },
        branch_cap);

    TrajectorySymmetryReport report;
    report.branch_count = base_contrib.size();
    std::vector<KahanSum> base_total(sites), aug_total(sites);
    std::size_t idx = 0;
    for_each_unraveling(
        augmented,
        [&](const std::vector<int>&, const PureState& branch) {
            const std::vector<double>& base = base_contrib[idx++];
            for (int x = 0; x < sites; ++x) {
                const double pa = std::norm(branch.amp(0, x)) + std::norm(branch.amp(1, x));
                report.max_branch_discrepancy =
                    std::max(report.max_branch_discrepancy, std::abs(pa - base[x]));
                base_total[x].add(base[x]);
                aug_total[x].add(pa);
            }
        },
        branch_cap);
    for (int x = 0; x < sites; ++x)
        report.aggregate_discrepancy =
            std::max(report.aggregate_discrepancy,
                     std::abs(base_total[x].value() - aug_total[x].value()));
    return report;
}

}  // namespace qwalk
