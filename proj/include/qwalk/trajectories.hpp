#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qwalk/walk.hpp"

namespace qwalk {

inline constexpr std::size_t kDefaultBranchCap = std::size_t{1} << 20;

// One Kraus-index sequence through the walk and the squared norm of the
// corresponding unnormalized branch.
struct Unraveling {
    std::vector<int> kraus_indices;
    double weight = 0.0;
};

struct TrajectoryEstimate {
    Distribution distribution;
    long samples = 0;
    std::vector<double> std_error;
    std::uint64_t seed = 0;
};

// Depth-first visit of every Kraus index sequence (m^n branches). The visitor
// sees the index path and the final unnormalized branch state. Throws if the
// branch count would exceed branch_cap.
void for_each_unraveling(
    const WalkConfig& config,
    const std::function<void(const std::vector<int>&, const PureState&)>& visit,
    std::size_t branch_cap = kDefaultBranchCap);

std::vector<Unraveling> enumerate_unravelings(const WalkConfig& config,
                                              std::size_t branch_cap = kDefaultBranchCap);

// Sums |amplitude|^2 over all branches per site; equals evolve_density's
// distribution to numerical precision.
Distribution enumerate_exact(const WalkConfig& config,
                             std::size_t branch_cap = kDefaultBranchCap);

// Stochastic unraveling: each step draws one Kraus operator with probability
// equal to the squared norm of the candidate branch, then renormalizes.
// Deterministic for a fixed seed.
TrajectoryEstimate sample_monte_carlo(const WalkConfig& config, long samples,
                                      std::uint64_t seed);

struct TrajectorySymmetryReport {
    double max_branch_discrepancy = 0.0;  // worst per-branch positional mismatch
    double aggregate_discrepancy = 0.0;   // mismatch of the summed distributions
    std::size_t branch_count = 0;
};

// Compares every unraveling's positional contribution with and without the
// per-step symmetry, branch by branch (same Kraus index sequence on both
// sides).
TrajectorySymmetryReport verify_symmetry_trajectorywise(
    const WalkConfig& config, const SymmetryOp& symmetry,
    std::size_t branch_cap = kDefaultBranchCap);

}  // namespace qwalk
