#include "qwalk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace qwalk {

namespace {

constexpr double kNormGuard = 1e-10;

struct ShiftAction {
    int move0;  // displacement of the coin-0 component
    int move1;
    bool flip;  // coin label swapped on arrival (U' = XU)
};

ShiftAction resolve_shift(ShiftKind kind, bool parity) {
    ShiftAction a{-1, +1, false};
    if (kind == ShiftKind::Reverse) a = {+1, -1, false};
    if (kind == ShiftKind::FlipShift) a = {-1, +1, true};
    if (parity) {  // A <-> A† swaps raising and lowering
        a.move0 = -a.move0;
        a.move1 = -a.move1;
    }
    return a;
}

void apply_coin_matrix(PureState& psi, const Mat2& u) {
    const int n = psi.site_count();
    cdouble* a = psi.data().data();
    for (int x = 0; x < n; ++x) {
        const cdouble a0 = a[2 * x];
        const cdouble a1 = a[2 * x + 1];
        a[2 * x] = u.e[0] * a0 + u.e[1] * a1;
        a[2 * x + 1] = u.e[2] * a0 + u.e[3] * a1;
    }
}

void step_pure_impl(PureState& psi, const Mat2& coin, ShiftKind shift, bool parity,
                    std::span<const GateOp> gates) {
    apply_coin_matrix(psi, coin);
    apply_shift(psi, shift, parity);
    for (const GateOp& g : gates) apply_coin_matrix(psi, g.matrix);
}

void check_norm(const PureState& psi) {
    if (std::abs(psi.norm_sq() - 1.0) > kNormGuard)
        throw numerical_error("pure-state norm drifted during evolution");
}

void validate_config(const WalkConfig& config) {
    if (config.steps < 0) throw std::invalid_argument("steps must be >= 0");
    if (config.topology.is_line()) {
        const int needed = config.steps + std::abs(config.initial.position);
        if (config.topology.half_width() < needed)
            throw std::invalid_argument(
                "line too small for the walk's light cone: need half_width >= " +
                std::to_string(needed));
    }
}

}  // namespace

StepResolver::StepResolver(const WalkConfig& config) : config_(&config) {
    for (const StepOverride& o : config.overrides) {
        if (o.step < 0 || o.step >= config.steps)
            throw std::invalid_argument("step override index out of range");
        if (!by_step_.emplace(o.step, &o).second)
            throw std::invalid_argument("duplicate step override");
    }
}

const CoinOp& StepResolver::coin(int step) const {
    auto it = by_step_.find(step);
    if (it != by_step_.end() && it->second->coin) return *it->second->coin;
    return config_->pipeline.coin;
}

ShiftKind StepResolver::shift(int step) const {
    auto it = by_step_.find(step);
    if (it != by_step_.end() && it->second->shift) return *it->second->shift;
    return config_->pipeline.shift;
}

void apply_shift(PureState& psi, ShiftKind kind, bool parity) {
    const ShiftAction act = resolve_shift(kind, parity);
    const Topology& topo = psi.topology();
    const int n = topo.site_count();
    const bool cyc = topo.is_cycle();
    std::vector<cdouble> out(psi.data().size());
    const cdouble* a = psi.data().data();
    for (int x = 0; x < n; ++x) {
        for (int c = 0; c < 2; ++c) {
            const cdouble amp = a[2 * x + c];
            int t = x + (c == 0 ? act.move0 : act.move1);
            if (cyc) {
                t = (t + n) % n;
            } else if (t < 0 || t >= n) {
                if (amp != cdouble{})
                    throw numerical_error("shift pushed amplitude past the line edge");
                continue;
            }
            out[2 * t + (act.flip ? 1 - c : c)] = amp;
        }
    }
    psi.data() = std::move(out);
}

void step_pure(PureState& psi, const StepPipeline& pipeline) {
    if (pipeline.channel)
        throw std::invalid_argument("step_pure: pipeline carries a channel; use evolve_density");
    step_pure_impl(psi, pipeline.coin.matrix, pipeline.shift, pipeline.parity_each_step,
                   pipeline.symmetry_gates);
}

void step_pure_unitary(PureState& psi, const Mat2& coin, ShiftKind shift, bool parity,
                       std::span<const GateOp> gates) {
    step_pure_impl(psi, coin, shift, parity, gates);
}

PureState evolve_pure(const WalkConfig& config) {
    if (config.pipeline.channel)
        throw std::invalid_argument("evolve_pure: pipeline carries a channel");
    validate_config(config);
    StepResolver resolve(config);
    PureState psi = new_pure(config.initial, config.topology);
    for (int k = 0; k < config.steps; ++k) {
        step_pure_impl(psi, resolve.coin(k).matrix, resolve.shift(k),
                       config.pipeline.parity_each_step, config.pipeline.symmetry_gates);
        check_norm(psi);
    }
    return psi;
}

namespace {

// rho <- (S ⊗ ...) rho (... ⊗ S†) as a simultaneous row and column
// permutation. Dropped basis states (line edge) must hold exactly zero.
void shift_density(DensityState& rho, ShiftKind kind, bool parity,
                   std::vector<cdouble>& scratch, std::vector<int>& perm) {
    const ShiftAction act = resolve_shift(kind, parity);
    const Topology& topo = rho.topology();
    const int n = topo.site_count();
    const int dim = rho.dim();
    const bool cyc = topo.is_cycle();

    perm.assign(dim, -1);
    bool drops = false;
    for (int x = 0; x < n; ++x) {
        for (int c = 0; c < 2; ++c) {
            int t = x + (c == 0 ? act.move0 : act.move1);
            if (cyc) {
                t = (t + n) % n;
            } else if (t < 0 || t >= n) {
                drops = true;
                continue;
            }
            perm[2 * x + c] = 2 * t + (act.flip ? 1 - c : c);
        }
    }

    const cdouble* m = rho.data().data();
    if (drops) {
        for (int k = 0; k < dim; ++k) {
            if (perm[k] >= 0) continue;
            for (int c = 0; c < dim; ++c)
                if (m[static_cast<std::size_t>(k) * dim + c] != cdouble{} ||
                    m[static_cast<std::size_t>(c) * dim + k] != cdouble{})
                    throw numerical_error("shift pushed density weight past the line edge");
        }
    }

    scratch.resize(rho.data().size());
    if (drops) std::fill(scratch.begin(), scratch.end(), cdouble{});
    for (int r = 0; r < dim; ++r) {
        if (perm[r] < 0) continue;
        const cdouble* src = m + static_cast<std::size_t>(r) * dim;
        cdouble* dst = scratch.data() + static_cast<std::size_t>(perm[r]) * dim;
        for (int c = 0; c < dim; ++c)
            if (perm[c] >= 0) dst[perm[c]] = src[c];
    }
    rho.data().swap(scratch);
}

}  // namespace

DensityState evolve_density(const WalkConfig& config) {
    return evolve_density(config, {});
}

DensityState evolve_density(const WalkConfig& config,
                            const std::function<void(int, const DensityState&)>& on_step) {
    validate_config(config);
    StepResolver resolve(config);
    const StepPipeline& pipe = config.pipeline;
    if (pipe.channel && pipe.channel->completeness_defect() > 1e-12)
        throw numerical_error("Kraus completeness relation violated");

    // Gates and channel both act on the coin after the shift, so they fold
    // into a single blockwise operator set K_j = E_j * (G_m ... G_1).
    Mat2 gate_product = Mat2::identity();
    for (const GateOp& g : pipe.symmetry_gates) gate_product = g.matrix * gate_product;
    std::vector<Mat2> tail_ops;
    if (pipe.channel) {
        for (const Mat2& e : pipe.channel->ops) tail_ops.push_back(e * gate_product);
    } else if (!pipe.symmetry_gates.empty()) {
        tail_ops.push_back(gate_product);
    }

    DensityState rho = to_density(new_pure(config.initial, config.topology));
    std::vector<cdouble> scratch;
    std::vector<int> perm;
    for (int k = 0; k < config.steps; ++k) {
        const Mat2 coin = resolve.coin(k).matrix;
        apply_coin_ops(rho, std::span<const Mat2>(&coin, 1));
        shift_density(rho, resolve.shift(k), pipe.parity_each_step, scratch, perm);
        if (!tail_ops.empty()) apply_coin_ops(rho, tail_ops);
        if (std::abs(rho.trace() - cdouble{1.0}) > kNormGuard)
            throw numerical_error("density trace drifted during evolution");
        if (on_step) on_step(k + 1, rho);
    }
    return rho;
}

Distribution spatial_inversion(const Distribution& d) {
    Distribution out{d.topology, std::vector<double>(d.probs.size())};
    const int n = static_cast<int>(d.probs.size());
    if (d.topology.is_line()) {
        for (int i = 0; i < n; ++i) out.probs[i] = d.probs[n - 1 - i];
    } else {
        for (int x = 0; x < n; ++x) out.probs[x] = d.probs[(n - x) % n];
    }
    return out;
}

SymmetryOp SymmetryOp::z() { return {Kind::ZGate, 0.0, 0}; }
SymmetryOp SymmetryOp::x() { return {Kind::XGate, 0.0, 0}; }
SymmetryOp SymmetryOp::phi_gate(double phi) { return {Kind::PhiGate, phi, 0}; }
SymmetryOp SymmetryOp::prx() { return {Kind::Prx, 0.0, 0}; }
SymmetryOp SymmetryOp::coin_variant(int j, double phi) { return {Kind::CoinVariant, phi, j}; }

std::string SymmetryOp::name() const {
    const double deg = phi * 180.0 / std::numbers::pi;
    switch (kind) {
        case Kind::ZGate: return "Z";
        case Kind::XGate: return "X";
        case Kind::Prx: return "PRX";
        case Kind::PhiGate: return "Phi(" + std::to_string(deg) + ")";
        case Kind::CoinVariant:
            return "B" + std::to_string(variant_j) + "(" + std::to_string(deg) + ")";
    }
    return "?";
}

StepPipeline augment_pipeline(StepPipeline pipeline, const SymmetryOp& op) {
    switch (op.kind) {
        case SymmetryOp::Kind::ZGate:
            pipeline.symmetry_gates.push_back(gate(GateKind::PauliZ));
            break;
        case SymmetryOp::Kind::XGate:
            pipeline.symmetry_gates.push_back(gate(GateKind::PauliX));
            break;
        case SymmetryOp::Kind::PhiGate:
            pipeline.symmetry_gates.push_back(gate(GateKind::PhaseShift, op.phi));
            break;
        case SymmetryOp::Kind::Prx:
            // R is defined on the coin angles; a variant's phase decoration
            // has no reflected counterpart
            if (pipeline.coin.variant)
                throw std::invalid_argument("PRX cannot reflect a variant-decorated coin");
            pipeline.coin = build_coin(reflect_params(pipeline.coin.params));
            pipeline.parity_each_step = !pipeline.parity_each_step;
            pipeline.symmetry_gates.push_back(gate(GateKind::PauliX));
            break;
        case SymmetryOp::Kind::CoinVariant:
            pipeline.coin = variant_coin(pipeline.coin, op.variant_j, op.phi);
            break;
    }
    return pipeline;
}

WalkConfig augment_walk(WalkConfig config, const SymmetryOp& op) {
    config.pipeline = augment_pipeline(std::move(config.pipeline), op);
    // Inhomogeneous walks transform every per-step coin the same way.
    for (StepOverride& o : config.overrides) {
        if (!o.coin) continue;
        if (op.kind == SymmetryOp::Kind::Prx) {
            if (o.coin->variant)
                throw std::invalid_argument("PRX cannot reflect a variant-decorated coin");
            o.coin = build_coin(reflect_params(o.coin->params));
        } else if (op.kind == SymmetryOp::Kind::CoinVariant) {
            o.coin = variant_coin(*o.coin, op.variant_j, op.phi);
        }
    }
    return config;
}

}  // namespace qwalk
