#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "qwalk/channel.hpp"
#include "qwalk/coin.hpp"
#include "qwalk/lattice.hpp"

namespace qwalk {

// Conditional shift flavor:
//   Forward  U       |0,x> -> |0,x-1>,  |1,x> -> |1,x+1>
//   Reverse  U†      |0,x> -> |0,x+1>,  |1,x> -> |1,x-1>
//   FlipShift U'=XU  |0,x> -> |1,x-1>,  |1,x> -> |0,x+1>
enum class ShiftKind { Forward, Reverse, FlipShift };

// One walk step, applied in fixed order: coin, shift, symmetry gates
// (first element first), channel. parity_each_step swaps the shift's
// raising/lowering roles (A <-> A†) for every step.
struct StepPipeline {
    CoinOp coin = hadamard_coin();
    ShiftKind shift = ShiftKind::Forward;
    std::vector<GateOp> symmetry_gates;
    bool parity_each_step = false;
    std::optional<KrausChannel> channel;
};

// Replaces the coin and/or shift at one step of an inhomogeneous walk.
struct StepOverride {
    int step = 0;
    std::optional<CoinOp> coin;
    std::optional<ShiftKind> shift;
};

struct WalkConfig {
    Topology topology = Topology::line(1);
    InitialState initial;
    StepPipeline pipeline;
    int steps = 0;
    std::vector<StepOverride> overrides;
};

// Resolves the effective coin/shift at each step of an inhomogeneous walk.
class StepResolver {
public:
    explicit StepResolver(const WalkConfig& config);
    const CoinOp& coin(int step) const;
    ShiftKind shift(int step) const;

private:
    const WalkConfig* config_;
    std::unordered_map<int, const StepOverride*> by_step_;
};

// Permute amplitudes per the shift. On the line, pushing nonzero amplitude
// past the edge throws rather than truncating.
void apply_shift(PureState& psi, ShiftKind kind, bool parity = false);

// One unitary step (pipeline must carry no channel).
void step_pure(PureState& psi, const StepPipeline& pipeline);

// Same, with the step's coin/shift spelled out; trajectory unravelings use
// this before applying their chosen Kraus operator.
void step_pure_unitary(PureState& psi, const Mat2& coin, ShiftKind shift, bool parity,
                       std::span<const GateOp> gates);

PureState evolve_pure(const WalkConfig& config);

// Kraus-evolved walk; without a channel this reproduces evolve_pure's
// distribution. The step unitary is applied as structured blocks and a
// permutation, never as a dense 2N x 2N matrix. The observer, when given,
// sees the state after each step (step index counts from 1); cycle studies
// use it for windowed time averages.
DensityState evolve_density(const WalkConfig& config);
DensityState evolve_density(const WalkConfig& config,
                            const std::function<void(int, const DensityState&)>& on_step);

// Line: reflect about x=0 (start must be centered at 0 for this to mean
// parity). Cycle: site x -> (R - x) mod R.
Distribution spatial_inversion(const Distribution& d);

// A named per-step augmentation of the walk.
struct SymmetryOp {
    enum class Kind { PhiGate, ZGate, XGate, Prx, CoinVariant };
    Kind kind = Kind::ZGate;
    double phi = 0.0;  // radians; PhiGate and CoinVariant
    int variant_j = 0; // CoinVariant only, 1..4

    static SymmetryOp z();
    static SymmetryOp x();
    static SymmetryOp phi_gate(double phi);
    static SymmetryOp prx();
    static SymmetryOp coin_variant(int j, double phi);

    std::string name() const;
};

// Apply the symmetry to every step: gates append to the pipeline; PRX
// reflects the coin angles, toggles parity and appends X; CoinVariant swaps
// in B^(j).
StepPipeline augment_pipeline(StepPipeline pipeline, const SymmetryOp& op);
WalkConfig augment_walk(WalkConfig config, const SymmetryOp& op);

}  // namespace qwalk
