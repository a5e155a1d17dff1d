#include "qwalk/coin.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qwalk {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;

// Wrap into (-pi, pi].
double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    if (a > kPi) a -= 2.0 * kPi;
    return a;
}

cdouble phase(double a) { return {std::cos(a), std::sin(a)}; }

}  // namespace

CoinParams::CoinParams(double xi, double theta, double zeta) {
    if (!std::isfinite(xi) || !std::isfinite(theta) || !std::isfinite(zeta))
        throw std::invalid_argument("coin angles must be finite");
    theta = wrap_angle(theta);
    if (theta < 0.0) {  // B(xi,-t,zeta) == B(xi,t,zeta+pi)
        theta = -theta;
        zeta += kPi;
    }
    if (theta > kHalfPi) {  // B(xi,pi-t,zeta) == B(xi+pi,t,zeta)
        theta = kPi - theta;
        xi += kPi;
    }
    xi_ = wrap_angle(xi);
    theta_ = theta;
    zeta_ = wrap_angle(zeta);
}

CoinParams reflect_params(const CoinParams& p) {
    return CoinParams(-p.zeta(), kHalfPi - p.theta(), -p.xi());
}

CoinOp build_coin(const CoinParams& params) {
    const double c = std::cos(params.theta());
    const double s = std::sin(params.theta());
    const Mat2 m = mat2(phase(params.xi()) * c, phase(params.zeta()) * s,
                        phase(-params.zeta()) * s, -phase(-params.xi()) * c);
    return CoinOp{m, params, std::nullopt};
}

CoinOp hadamard_coin() { return build_coin(CoinParams(0.0, kPi / 4.0, 0.0)); }

CoinOp variant_coin(const CoinOp& base, int j, double phi) {
    if (base.variant)
        throw std::invalid_argument("variant_coin: base coin is already a variant");
    if (j < 1 || j > 4) throw std::invalid_argument("variant index j must be in 1..4");
    const cdouble f = phase(phi);
    Mat2 m = base.matrix;
    switch (j) {
        case 1: m(1, 0) *= f; m(1, 1) *= f; break;  // row 1
        case 2: m(0, 1) *= f; m(1, 1) *= f; break;  // column 1
        case 3: m(0, 0) *= f; m(0, 1) *= f; break;  // row 0
        case 4: m(0, 0) *= f; m(1, 0) *= f; break;  // column 0
    }
    return CoinOp{m, base.params, CoinVariant{j, phi}};
}

GateOp gate(GateKind kind, double phi) {
    switch (kind) {
        case GateKind::Identity:
            return GateOp{kind, 0.0, Mat2::identity()};
        case GateKind::PauliX:
            return GateOp{kind, 0.0, mat2(0.0, 1.0, 1.0, 0.0)};
        case GateKind::PauliZ:
            return GateOp{kind, kPi, mat2(1.0, 0.0, 0.0, -1.0)};
        case GateKind::PhaseShift:
            if (phi == kPi) return GateOp{kind, phi, gate(GateKind::PauliZ).matrix};
            return GateOp{kind, phi, mat2(1.0, 0.0, 0.0, phase(phi))};
    }
    throw std::invalid_argument("unknown gate kind");
}

}  // namespace qwalk
