#pragma once

#include <utility>
#include <vector>

#include "qwalk/lattice.hpp"

namespace qwalk {

// Standard deviation of the position over signed line coordinates. Cycle
// distributions are rejected: a ring has no canonical signed coordinate.
double std_dev(const Distribution& d);

// (1/2) sum |d1 - d2|, in [0, 1]. Topologies must match.
double total_variation(const Distribution& d1, const Distribution& d2);

struct SymmetryVerdict {
    double max_abs_diff = 0.0;
    double total_variation = 0.0;
    double tolerance = 0.0;
    bool holds = false;
};

SymmetryVerdict symmetry_verdict(const Distribution& d1, const Distribution& d2,
                                 double tolerance);

// Least-squares slope of log(sigma) against log(n). Needs >= 3 points with
// n >= 10 and sigma > 0.
double fit_scaling_exponent(const std::vector<std::pair<double, double>>& n_sigma);

// max_x |P(x) - 1/R| on a cycle.
double uniformity_deviation(const Distribution& d);

// Entrywise mean of same-topology distributions.
Distribution time_average(const std::vector<Distribution>& ds);

struct SweepPoint {
    double value = 0.0;
    double sigma = 0.0;
    double sigma_ratio = 1.0;  // sigma without symmetry ops / sigma with them
};

}  // namespace qwalk
