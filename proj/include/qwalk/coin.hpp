#pragma once

#include <optional>

#include "qwalk/linalg.hpp"

namespace qwalk {

// SU(2) coin angles (radians). Construction reduces to the canonical range
// theta in [0, pi/2], xi/zeta in (-pi, pi], without changing the matrix:
//   B(xi, -theta, zeta)   == B(xi, theta, zeta + pi)
//   B(xi, pi-theta, zeta) == B(xi + pi, theta, zeta)
class CoinParams {
public:
    CoinParams(double xi, double theta, double zeta);

    double xi() const { return xi_; }
    double theta() const { return theta_; }
    double zeta() const { return zeta_; }

    bool operator==(const CoinParams&) const = default;

private:
    double xi_, theta_, zeta_;
};

// Angular reflection R: theta -> pi/2 - theta with xi <-> -zeta
// (xi' = -zeta, zeta' = -xi). An involution; Hadamard is its fixed point.
CoinParams reflect_params(const CoinParams& p);

struct CoinVariant {
    int j;       // 1..4
    double phi;  // radians
    bool operator==(const CoinVariant&) const = default;
};

struct CoinOp {
    Mat2 matrix;
    CoinParams params;
    std::optional<CoinVariant> variant;
};

// B(xi,theta,zeta) = [[ e^{i xi} cos,  e^{i zeta} sin ],
//                     [ e^{-i zeta} sin, -e^{-i xi} cos ]]
CoinOp build_coin(const CoinParams& params);

// B(0, pi/4, 0), the Hadamard coin.
CoinOp hadamard_coin();

// The four phase-decorated coins: j=1 multiplies row 1 by e^{i phi},
// j=2 column 1, j=3 row 0, j=4 column 0. Each preserves unitarity and the
// walk's position distribution on the line.
CoinOp variant_coin(const CoinOp& base, int j, double phi);

enum class GateKind { PhaseShift, PauliZ, PauliX, Identity };

struct GateOp {
    GateKind kind = GateKind::Identity;
    double phi = 0.0;  // PhaseShift parameter, radians
    Mat2 matrix = Mat2::identity();
};

// Single-qubit symmetry gates. PhaseShift(phi) = diag(1, e^{i phi});
// PhaseShift(pi) is Z exactly.
GateOp gate(GateKind kind, double phi = 0.0);

}  // namespace qwalk
