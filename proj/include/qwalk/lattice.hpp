#pragma once

#include <vector>

#include "qwalk/linalg.hpp"

namespace qwalk {

enum class TopologyKind { Line, Cycle };

// Walk substrate: a finite centered segment of the line, or a ring of R sites.
// Line sites carry signed coordinates -half_width..+half_width; cycle sites
// are 0..R-1 with arithmetic mod R.
class Topology {
public:
    Topology() : Topology(TopologyKind::Line, 1) {}  // minimal line

    static Topology line(int half_width);
    // Line sized so an n-step walk from `start` never touches the boundary.
    static Topology line_for_walk(int steps, int start = 0);
    static Topology cycle(int sites);

    TopologyKind kind() const { return kind_; }
    bool is_line() const { return kind_ == TopologyKind::Line; }
    bool is_cycle() const { return kind_ == TopologyKind::Cycle; }

    int site_count() const { return site_count_; }
    int half_width() const;  // line only
    int ring_size() const;   // cycle only

    // coordinate <-> storage index
    bool contains(int coordinate) const;
    int index_of(int coordinate) const;
    int coordinate_at(int index) const;

    bool operator==(const Topology&) const = default;

private:
    Topology(TopologyKind kind, int param);

    TopologyKind kind_;
    int param_;       // half_width or ring size
    int site_count_;
};

// Coin state (a,b) placed at a single start site.
struct InitialState {
    cdouble coin0{1.0, 0.0};
    cdouble coin1{0.0, 0.0};
    int position = 0;

    static InitialState basis(int coin, int position = 0);
    // (|0> + i|1>)/sqrt(2), the left-right symmetric start
    static InitialState symmetric(int position = 0);
};

// Wavefunction over coin (x) position. Storage: amps[2*site + coin].
class PureState {
public:
    explicit PureState(Topology topo);

    const Topology& topology() const { return topo_; }
    int site_count() const { return topo_.site_count(); }

    cdouble& amp(int coin, int site) { return amps_[2 * site + coin]; }
    const cdouble& amp(int coin, int site) const { return amps_[2 * site + coin]; }

    std::vector<cdouble>& data() { return amps_; }
    const std::vector<cdouble>& data() const { return amps_; }

    double norm_sq() const;
    void scale(double factor);

private:
    Topology topo_;
    std::vector<cdouble> amps_;
};

// Dense density operator on coin (x) position, dimension 2*site_count.
// Basis index 2*site + coin, row-major storage.
class DensityState {
public:
    explicit DensityState(Topology topo);

    const Topology& topology() const { return topo_; }
    int dim() const { return dim_; }

    cdouble& at(int r, int c) { return m_[static_cast<std::size_t>(r) * dim_ + c]; }
    const cdouble& at(int r, int c) const { return m_[static_cast<std::size_t>(r) * dim_ + c]; }

    std::vector<cdouble>& data() { return m_; }
    const std::vector<cdouble>& data() const { return m_; }

    cdouble trace() const;
    double purity() const;               // Tr(rho^2), real part
    double hermiticity_defect() const;   // max |rho - rho†|

private:
    Topology topo_;
    int dim_;
    std::vector<cdouble> m_;
};

// Positional probability distribution, indexed like the topology's sites.
struct Distribution {
    Topology topology;
    std::vector<double> probs;

    double at_coordinate(int x) const { return probs[topology.index_of(x)]; }
    double sum() const;
};

PureState new_pure(const InitialState& init, const Topology& topo);
DensityState to_density(const PureState& psi);
Distribution position_distribution(const PureState& psi);
Distribution position_distribution(const DensityState& rho);

}  // namespace qwalk
