#include "qwalk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qwalk {

namespace {

void require_same_topology(const Distribution& a, const Distribution& b) {
    if (!(a.topology == b.topology))
        throw std::invalid_argument("distributions live on different topologies");
}

}  // namespace

double std_dev(const Distribution& d) {
    if (!d.topology.is_line())
        throw std::invalid_argument("std_dev is defined for line walks only");
    KahanSum mean, second;
    for (std::size_t i = 0; i < d.probs.size(); ++i) {
        const double x = d.topology.coordinate_at(static_cast<int>(i));
        mean.add(x * d.probs[i]);
        second.add(x * x * d.probs[i]);
    }
    const double mu = mean.value();
    return std::sqrt(std::max(0.0, second.value() - mu * mu));
}

double total_variation(const Distribution& d1, const Distribution& d2) {
    require_same_topology(d1, d2);
    KahanSum s;
    for (std::size_t i = 0; i < d1.probs.size(); ++i)
        s.add(std::abs(d1.probs[i] - d2.probs[i]));
    return 0.5 * s.value();
}

SymmetryVerdict symmetry_verdict(const Distribution& d1, const Distribution& d2,
                                 double tolerance) {
    require_same_topology(d1, d2);
    SymmetryVerdict v;
    v.tolerance = tolerance;
    for (std::size_t i = 0; i < d1.probs.size(); ++i)
        v.max_abs_diff = std::max(v.max_abs_diff, std::abs(d1.probs[i] - d2.probs[i]));
    v.total_variation = total_variation(d1, d2);
    v.holds = v.max_abs_diff <= tolerance;
    return v;
}

double fit_scaling_exponent(const std::vector<std::pair<double, double>>& n_sigma) {
    if (n_sigma.size() < 3)
        throw std::invalid_argument("scaling fit needs at least 3 points");
    double mx = 0.0, my = 0.0;
    for (const auto& [n, sigma] : n_sigma) {
        if (n < 10.0) throw std::invalid_argument("scaling fit needs n >= 10");
        if (!(sigma > 0.0)) throw std::invalid_argument("scaling fit needs sigma > 0");
        mx += std::log(n);
        my += std::log(sigma);
    }
    mx /= static_cast<double>(n_sigma.size());
    my /= static_cast<double>(n_sigma.size());
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [n, sigma] : n_sigma) {
        const double dx = std::log(n) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(sigma) - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("scaling fit needs distinct n values");
    return sxy / sxx;
}

double uniformity_deviation(const Distribution& d) {
    if (!d.topology.is_cycle())
        throw std::invalid_argument("uniformity_deviation is defined on cycles only");
    const double uniform = 1.0 / static_cast<double>(d.probs.size());
    double worst = 0.0;
    for (double p : d.probs) worst = std::max(worst, std::abs(p - uniform));
    return worst;
}

Distribution time_average(const std::vector<Distribution>& ds) {
    if (ds.empty()) throw std::invalid_argument("time_average over an empty list");
    for (const auto& d : ds) require_same_topology(ds.front(), d);
    const std::size_t sites = ds.front().probs.size();
    Distribution out{ds.front().topology, std::vector<double>(sites)};
    const double inv = 1.0 / static_cast<double>(ds.size());
    for (std::size_t i = 0; i < sites; ++i) {
        KahanSum s;
        for (const auto& d : ds) s.add(d.probs[i]);
        out.probs[i] = s.value() * inv;
    }
    return out;
}

}  // namespace qwalk
