#pragma once

#include <span>
#include <vector>

#include "qwalk/lattice.hpp"
#include "qwalk/linalg.hpp"

namespace qwalk {

enum class ChannelKind { PhaseFlip, BitFlip, Gad };

// A CPTP map on the coin qubit in Kraus form. Every constructor guarantees
// sum_j E_j† E_j = I to 1e-12.
struct KrausChannel {
    std::vector<Mat2> ops;
    ChannelKind kind = ChannelKind::PhaseFlip;
    double p = 0.0;
    double chi = 1.0;  // GAD temperature parameter, 1/2 (T=inf) .. 1 (T=0)

    // max-entry norm of sum E†E - I
    double completeness_defect() const;
};

// (1-p) rho + p Z rho Z
KrausChannel phase_flip(double p);
// (1-p) rho + p X rho X
KrausChannel bit_flip(double p);
// Four-operator generalized amplitude damping:
//   E0 = sqrt(chi)   diag(1, sqrt(1-p))     E1 = sqrt(chi)   sqrt(p) |0><1|
//   E2 = sqrt(1-chi) diag(sqrt(1-p), 1)     E3 = sqrt(1-chi) sqrt(p) |1><0|
// chi=1 reduces to plain amplitude damping.
KrausChannel gad_channel(double p, double chi);

// Dissipative coupling to a thermal bath: coupling rate gamma0, mean thermal
// photon number n_thermal, interaction time t.
struct GadPhysicalParams {
    double gamma0 = 0.0;
    double n_thermal = 0.0;
    double time = 0.0;

    double decay_exponent() const;  // gamma0 * (2 n_th + 1) * t
    double p() const;               // 1 - exp(-decay_exponent)
    double chi() const;             // (1 + 1/(2 n_th + 1)) / 2
};

KrausChannel gad_from_physical(const GadPhysicalParams& params);

// Pure dephasing from a QND system-bath coupling; hbar_omega is the system
// energy scale and gamma_t the accumulated dephasing exponent.
struct DephasingPhysicalParams {
    double hbar_omega = 0.0;
    double gamma_t = 0.0;

    double p() const;  // (1 - exp(-(hbar_omega)^2 gamma_t)) / 2, in [0, 1/2)
};

KrausChannel phase_flip_from_physical(const DephasingPhysicalParams& params);

// Single-qubit state as Bloch data (s3, <sigma_->). The convention matches
// the closed-form damping solution below: s3 = rho_11 - rho_00, so the
// T=0 fixed point s3 = -1 is the computational |0>.
struct QubitBloch {
    double s3 = 0.0;
    cdouble s_minus{};

    Mat2 to_density() const;
    static QubitBloch from_density(const Mat2& rho);
};

// Exact single-qubit time evolution of the thermal damping channel:
//   s3(t)  = e^{-g t'} s3(0) - (1 - e^{-g t'}) / (2 n_th + 1)
//   s-(t)  = e^{-g t'/2} s-(0)
// Serves as the independent oracle for the Kraus construction.
QubitBloch gad_closed_form(const QubitBloch& initial, const GadPhysicalParams& params);

// Single-qubit Kraus application: sum_j E_j rho E_j†.
Mat2 apply_channel(const Mat2& rho, const KrausChannel& ch);

// Lift to coin (x) position: rho <- sum_j (E_j ⊗ I) rho (E_j ⊗ I)†, applied
// blockwise over position pairs without materializing the big operators.
void apply_channel(DensityState& rho, const KrausChannel& ch);

// Same blockwise lift for an arbitrary coin-space operator set (no
// completeness requirement; a single unitary gives plain conjugation).
void apply_coin_ops(DensityState& rho, std::span<const Mat2> ops);

}  // namespace qwalk
