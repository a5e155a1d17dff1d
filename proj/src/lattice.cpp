#include "qwalk/lattice.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace qwalk {

namespace {
constexpr double kCoinNormTol = 1e-12;
}

Topology::Topology(TopologyKind kind, int param)
    : kind_(kind),
      param_(param),
      site_count_(kind == TopologyKind::Line ? 2 * param + 1 : param) {}

Topology Topology::line(int half_width) {
    if (half_width < 1) throw std::invalid_argument("line half_width must be >= 1");
    return Topology(TopologyKind::Line, half_width);
}

Topology Topology::line_for_walk(int steps, int start) {
    if (steps < 0) throw std::invalid_argument("steps must be >= 0");
    return line(std::max(1, steps + std::abs(start)));
}

Topology Topology::cycle(int sites) {
    if (sites < 3) throw std::invalid_argument("cycle needs at least 3 sites");
    return Topology(TopologyKind::Cycle, sites);
}

int Topology::half_width() const {
    if (!is_line()) throw std::invalid_argument("half_width: not a line topology");
    return param_;
}

int Topology::ring_size() const {
    if (!is_cycle()) throw std::invalid_argument("ring_size: not a cycle topology");
    return param_;
}

bool Topology::contains(int coordinate) const {
    if (is_line()) return coordinate >= -param_ && coordinate <= param_;
    return true;  // cycle coordinates wrap
}

int Topology::index_of(int coordinate) const {
    if (is_line()) {
        if (!contains(coordinate))
            throw std::invalid_argument("line coordinate " + std::to_string(coordinate) +
                                        " outside [-" + std::to_string(param_) + ", " +
                                        std::to_string(param_) + "]");
        return coordinate + param_;
    }
    int r = coordinate % param_;
    return r < 0 ? r + param_ : r;
}

int Topology::coordinate_at(int index) const {
    return is_line() ? index - param_ : index;
}

InitialState InitialState::basis(int coin, int position) {
    if (coin != 0 && coin != 1) throw std::invalid_argument("coin basis index must be 0 or 1");
    InitialState s;
    s.coin0 = coin == 0 ? cdouble{1.0} : cdouble{0.0};
    s.coin1 = coin == 1 ? cdouble{1.0} : cdouble{0.0};
    s.position = position;
    return s;
}

InitialState InitialState::symmetric(int position) {
    const double r = 1.0 / std::sqrt(2.0);
    return InitialState{cdouble{r, 0.0}, cdouble{0.0, r}, position};
}

PureState::PureState(Topology topo)
    : topo_(topo), amps_(2 * static_cast<std::size_t>(topo.site_count())) {}

double PureState::norm_sq() const {
    KahanSum s;
    for (const auto& a : amps_) s.add(std::norm(a));
    return s.value();
}

void PureState::scale(double factor) {
    for (auto& a : amps_) a *= factor;
}

DensityState::DensityState(Topology topo)
    : topo_(topo),
      dim_(2 * topo.site_count()),
      m_(static_cast<std::size_t>(2 * topo.site_count()) *
         static_cast<std::size_t>(2 * topo.site_count())) {}

cdouble DensityState::trace() const {
    KahanSum re, im;
    for (int k = 0; k < dim_; ++k) {
        re.add(at(k, k).real());
        im.add(at(k, k).imag());
    }
    return {re.value(), im.value()};
}

double DensityState::purity() const {
    // Tr(rho^2) = sum_{r,c} rho_rc * rho_cr; for Hermitian rho this is
    // sum |rho_rc|^2.
    KahanSum s;
    for (const auto& x : m_) s.add(std::norm(x));
    return s.value();
}

double DensityState::hermiticity_defect() const {
    double worst = 0.0;
    for (int r = 0; r < dim_; ++r)
        for (int c = r; c < dim_; ++c)
            worst = std::max(worst, std::abs(at(r, c) - std::conj(at(c, r))));
    return worst;
}

double Distribution::sum() const {
    KahanSum s;
    for (double p : probs) s.add(p);
    return s.value();
}

PureState new_pure(const InitialState& init, const Topology& topo) {
    if (topo.is_line() && !topo.contains(init.position))
        throw std::invalid_argument("initial position outside lattice");
    const double n = std::norm(init.coin0) + std::norm(init.coin1);
    if (std::abs(n - 1.0) > kCoinNormTol)
        throw std::invalid_argument("initial coin amplitudes not normalized");
    PureState psi(topo);
    const int site = topo.index_of(init.position);
    // Rescale exactly so roundoff in the inputs does not seed norm drift.
    const double r = 1.0 / std::sqrt(n);
    psi.amp(0, site) = init.coin0 * r;
    psi.amp(1, site) = init.coin1 * r;
    return psi;
}

DensityState to_density(const PureState& psi) {
    DensityState rho(psi.topology());
    const int dim = rho.dim();
    const auto& a = psi.data();
    for (int r = 0; r < dim; ++r) {
        if (a[r] == cdouble{}) continue;
        for (int c = 0; c < dim; ++c) rho.at(r, c) = a[r] * std::conj(a[c]);
    }
    return rho;
}

Distribution position_distribution(const PureState& psi) {
    const int n = psi.site_count();
    Distribution d{psi.topology(), std::vector<double>(n)};
    for (int x = 0; x < n; ++x)
        d.probs[x] = std::norm(psi.amp(0, x)) + std::norm(psi.amp(1, x));
    return d;
}

Distribution position_distribution(const DensityState& rho) {
    const int n = rho.topology().site_count();
    Distribution d{rho.topology(), std::vector<double>(n)};
    for (int x = 0; x < n; ++x) {
        double p = rho.at(2 * x, 2 * x).real() + rho.at(2 * x + 1, 2 * x + 1).real();
        // Clamp the float fuzz at reporting time only.
        d.probs[x] = p < 0.0 ? 0.0 : p;
    }
    return d;
}

}  // namespace qwalk
