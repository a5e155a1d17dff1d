#include "qwalk/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace qwalk {

namespace {

void require_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("noise level p must be in [0, 1]");
}

constexpr double kCompletenessTol = 1e-12;

}  // namespace

double KrausChannel::completeness_defect() const {
    Mat2 acc;
    for (const auto& e : ops) acc = acc + e.adjoint() * e;
    return max_abs(acc - Mat2::identity());
}

KrausChannel phase_flip(double p) {
    require_probability(p);
    const double a = std::sqrt(1.0 - p);
    const double b = std::sqrt(p);
    KrausChannel ch;
    ch.kind = ChannelKind::PhaseFlip;
    ch.p = p;
    ch.ops = {mat2(a, 0.0, 0.0, a), mat2(b, 0.0, 0.0, -b)};
    return ch;
}

KrausChannel bit_flip(double p) {
    require_probability(p);
    const double a = std::sqrt(1.0 - p);
    const double b = std::sqrt(p);
    KrausChannel ch;
    ch.kind = ChannelKind::BitFlip;
    ch.p = p;
    ch.ops = {mat2(a, 0.0, 0.0, a), mat2(0.0, b, b, 0.0)};
    return ch;
}

KrausChannel gad_channel(double p, double chi) {
    require_probability(p);
    if (!(chi >= 0.5 && chi <= 1.0))
        throw std::invalid_argument("GAD chi must be in [1/2, 1]");
    const double sc = std::sqrt(chi);
    const double st = std::sqrt(1.0 - chi);
    const double sq = std::sqrt(1.0 - p);
    const double sp = std::sqrt(p);
    KrausChannel ch;
    ch.kind = ChannelKind::Gad;
    ch.p = p;
    ch.chi = chi;
    ch.ops = {mat2(sc, 0.0, 0.0, sc * sq), mat2(0.0, sc * sp, 0.0, 0.0),
              mat2(st * sq, 0.0, 0.0, st), mat2(0.0, 0.0, st * sp, 0.0)};
    return ch;
}

double GadPhysicalParams::decay_exponent() const { return gamma0 * (2.0 * n_thermal + 1.0) * time; }

double GadPhysicalParams::p() const { return 1.0 - std::exp(-decay_exponent()); }

double GadPhysicalParams::chi() const { return 0.5 * (1.0 + 1.0 / (2.0 * n_thermal + 1.0)); }

KrausChannel gad_from_physical(const GadPhysicalParams& params) {
    if (!(params.gamma0 >= 0.0)) throw std::invalid_argument("gamma0 must be >= 0");
    if (!(params.n_thermal >= 0.0)) throw std::invalid_argument("n_thermal must be >= 0");
    if (!(params.time >= 0.0)) throw std::invalid_argument("time must be >= 0");
    return gad_channel(params.p(), params.chi());
}

double DephasingPhysicalParams::p() const {
    return 0.5 * (1.0 - std::exp(-hbar_omega * hbar_omega * gamma_t));
}

KrausChannel phase_flip_from_physical(const DephasingPhysicalParams& params) {
    if (!(params.gamma_t >= 0.0)) throw std::invalid_argument("gamma_t must be >= 0");
    return phase_flip(params.p());
}

Mat2 QubitBloch::to_density() const {
    if (!(std::abs(s3) <= 1.0 + 1e-12))
        throw std::invalid_argument("Bloch s3 must lie in [-1, 1]");
    const double cap = 0.5 * std::sqrt(std::max(0.0, 1.0 - s3 * s3));
    if (std::abs(s_minus) > cap + 1e-12)
        throw std::invalid_argument("Bloch data not a valid density matrix");
    return mat2(0.5 * (1.0 - s3), std::conj(s_minus), s_minus, 0.5 * (1.0 + s3));
}

QubitBloch QubitBloch::from_density(const Mat2& rho) {
    return QubitBloch{(rho(1, 1) - rho(0, 0)).real(), rho(1, 0)};
}

QubitBloch gad_closed_form(const QubitBloch& initial, const GadPhysicalParams& params) {
    const double g = std::exp(-params.decay_exponent());
    const double inv = 1.0 / (2.0 * params.n_thermal + 1.0);
    QubitBloch out;
    out.s3 = g * initial.s3 - inv * (1.0 - g);
    out.s_minus = std::exp(-0.5 * params.decay_exponent()) * initial.s_minus;
    return out;
}

Mat2 apply_channel(const Mat2& rho, const KrausChannel& ch) {
    Mat2 out;
    for (const auto& e : ch.ops) out = out + e * rho * e.adjoint();
    return out;
}

void apply_channel(DensityState& rho, const KrausChannel& ch) {
    if (ch.completeness_defect() > kCompletenessTol)
        throw numerical_error("Kraus completeness relation violated");
    apply_coin_ops(rho, ch.ops);
}

void apply_coin_ops(DensityState& rho, std::span<const Mat2> ops) {
    const int sites = rho.topology().site_count();
    const int dim = rho.dim();
    cdouble* data = rho.data().data();
    for (int x = 0; x < sites; ++x) {
        cdouble* row0 = data + static_cast<std::size_t>(2 * x) * dim;
        cdouble* row1 = row0 + dim;
        for (int y = 0; y < sites; ++y) {
            const cdouble b00 = row0[2 * y], b01 = row0[2 * y + 1];
            const cdouble b10 = row1[2 * y], b11 = row1[2 * y + 1];
            cdouble n00{}, n01{}, n10{}, n11{};
            for (const Mat2& e : ops) {
                // t = K * block, then accumulate t * K†
                const cdouble t00 = e.e[0] * b00 + e.e[1] * b10;
                const cdouble t01 = e.e[0] * b01 + e.e[1] * b11;
                const cdouble t10 = e.e[2] * b00 + e.e[3] * b10;
                const cdouble t11 = e.e[2] * b01 + e.e[3] * b11;
                n00 += t00 * std::conj(e.e[0]) + t01 * std::conj(e.e[1]);
                n01 += t00 * std::conj(e.e[2]) + t01 * std::conj(e.e[3]);
                n10 += t10 * std::conj(e.e[0]) + t11 * std::conj(e.e[1]);
                n11 += t10 * std::conj(e.e[2]) + t11 * std::conj(e.e[3]);
            }
            row0[2 * y] = n00;
            row0[2 * y + 1] = n01;
            row1[2 * y] = n10;
            row1[2 * y + 1] = n11;
        }
    }
}

}  // namespace qwalk
