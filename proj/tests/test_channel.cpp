#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qwalk/channel.hpp"
#include "qwalk/walk.hpp"
#include "reference.hpp"

using namespace qwalk;

namespace {

Mat2 random_qubit_density(std::mt19937_64& rng) {
    // uniform-ish point inside the Bloch ball
    double x, y, z;
    do {
        x = refsim::uniform(rng, -1.0, 1.0);
        y = refsim::uniform(rng, -1.0, 1.0);
        z = refsim::uniform(rng, -1.0, 1.0);
    } while (x * x + y * y + z * z > 1.0);
    return mat2(0.5 * (1.0 + z), cdouble{0.5 * x, -0.5 * y},
                cdouble{0.5 * x, 0.5 * y}, 0.5 * (1.0 - z));
}

GadPhysicalParams random_gad_params(std::mt19937_64& rng) {
    return GadPhysicalParams{refsim::uniform(rng, 0.0, 2.0), refsim::uniform(rng, 0.0, 3.0),
                             refsim::uniform(rng, 0.0, 2.5)};
}

}  // namespace

TEST_CASE("every constructed channel satisfies the completeness relation") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 100; ++trial) {
        const double p = refsim::uniform(rng, 0.0, 1.0);
        CHECK(phase_flip(p).completeness_defect() < 1e-12);
        CHECK(bit_flip(p).completeness_defect() < 1e-12);
        CHECK(gad_channel(p, refsim::uniform(rng, 0.5, 1.0)).completeness_defect() < 1e-12);
        CHECK(gad_from_physical(random_gad_params(rng)).completeness_defect() < 1e-12);
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(phase_flip(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(bit_flip(1.5), std::invalid_argument);
    CHECK_THROWS_AS(gad_channel(0.2, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(gad_channel(0.2, 1.2), std::invalid_argument);
    CHECK_THROWS_AS(gad_from_physical(GadPhysicalParams{-1.0, 0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("phase flip channel") {
    std::mt19937_64 rng(7);
    SUBCASE("p=0 is the identity channel") {
        const Mat2 rho = random_qubit_density(rng);
        CHECK(max_abs(apply_channel(rho, phase_flip(0.0)) - rho) < 1e-15);
    }
    SUBCASE("p=1/2 turns |+><+| into the maximally mixed coin") {
        const Mat2 plus = mat2(0.5, 0.5, 0.5, 0.5);
        const Mat2 out = apply_channel(plus, phase_flip(0.5));
        CHECK(max_abs(out - mat2(0.5, 0.0, 0.0, 0.5)) < 1e-15);
    }
    SUBCASE("diagonal states are untouched") {
        const Mat2 rho = mat2(0.3, 0.0, 0.0, 0.7);
        CHECK(max_abs(apply_channel(rho, phase_flip(0.3)) - rho) < 1e-15);
    }
    SUBCASE("composing p twice equals p' = 2p - 2p^2 once") {
        for (double p : {0.1, 0.25, 0.4}) {
            const Mat2 rho = random_qubit_density(rng);
            const Mat2 twice = apply_channel(apply_channel(rho, phase_flip(p)), phase_flip(p));
            const Mat2 once = apply_channel(rho, phase_flip(2.0 * p - 2.0 * p * p));
            CHECK(max_abs(twice - once) < 1e-14);
        }
    }
}

TEST_CASE("bit flip channel") {
    SUBCASE("p=0 identity") {
        std::mt19937_64 rng(9);
        const Mat2 rho = random_qubit_density(rng);
        CHECK(max_abs(apply_channel(rho, bit_flip(0.0)) - rho) < 1e-15);
    }
    SUBCASE("p=1 swaps the populations") {
        const Mat2 ground = mat2(1.0, 0.0, 0.0, 0.0);
        CHECK(max_abs(apply_channel(ground, bit_flip(1.0)) - mat2(0.0, 0.0, 0.0, 1.0)) < 1e-15);
    }
    SUBCASE("p=1/2 on |0><0| gives I/2") {
        const Mat2 ground = mat2(1.0, 0.0, 0.0, 0.0);
        CHECK(max_abs(apply_channel(ground, bit_flip(0.5)) - mat2(0.5, 0.0, 0.0, 0.5)) < 1e-15);
    }
}

TEST_CASE("generalized amplitude damping") {
    SUBCASE("p=0 acts as the identity for any chi") {
        std::mt19937_64 rng(21);
        for (double chi : {0.5, 0.8, 1.0}) {
            const Mat2 rho = random_qubit_density(rng);
            CHECK(max_abs(apply_channel(rho, gad_channel(0.0, chi)) - rho) < 1e-15);
        }
    }
    SUBCASE("chi=1 reduces to plain amplitude damping") {
        const KrausChannel ch = gad_channel(0.3, 1.0);
        CHECK(max_abs(ch.ops[2]) == 0.0);
        CHECK(max_abs(ch.ops[3]) == 0.0);
        // damping moves population toward |0>
        const Mat2 excited = mat2(0.0, 0.0, 0.0, 1.0);
        const Mat2 out = apply_channel(excited, ch);
        CHECK(out(0, 0).real() == doctest::Approx(0.3));
        CHECK(out(1, 1).real() == doctest::Approx(0.7));
    }
    SUBCASE("physical mapping: T=0 gives chi=1, T->inf gives chi->1/2") {
        CHECK(GadPhysicalParams{1.0, 0.0, 1.0}.chi() == 1.0);
        CHECK(GadPhysicalParams{1.0, 1e9, 1.0}.chi() == doctest::Approx(0.5).epsilon(1e-9));
    }
    SUBCASE("t=0 gives p=0; gamma0=1, n_th=0, t=ln2 gives p=1/2") {
        CHECK(GadPhysicalParams{1.3, 0.7, 0.0}.p() == 0.0);
        const GadPhysicalParams half{1.0, 0.0, std::log(2.0)};
        CHECK(half.p() == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(half.chi() == 1.0);
    }
}

TEST_CASE("closed-form damping solution is the Kraus map, exactly") {
    std::mt19937_64 rng(33);
    SUBCASE("t=0 returns the input") {
        const QubitBloch b{0.4, cdouble{0.2, -0.1}};
        const QubitBloch out = gad_closed_form(b, GadPhysicalParams{1.0, 0.5, 0.0});
        CHECK(out.s3 == b.s3);
        CHECK(out.s_minus == b.s_minus);
    }
    SUBCASE("t->inf at T=0 lands on the ground state s3=-1") {
        const QubitBloch out =
            gad_closed_form(QubitBloch{0.7, cdouble{0.3, 0.1}}, GadPhysicalParams{1.0, 0.0, 1e4});
        CHECK(out.s3 == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(std::abs(out.s_minus) < 1e-12);
    }
    SUBCASE("oracle: 100 random states and parameter sets, agreement < 1e-12") {
        for (int trial = 0; trial < 100; ++trial) {
            const Mat2 rho = random_qubit_density(rng);
            const GadPhysicalParams params = random_gad_params(rng);
            const QubitBloch closed = gad_closed_form(QubitBloch::from_density(rho), params);
            const Mat2 via_kraus = apply_channel(rho, gad_from_physical(params));
            const Mat2 via_closed = closed.to_density();
            CHECK(max_abs(via_kraus - via_closed) < 1e-12);
        }
    }
    SUBCASE("Bloch round trip") {
        for (int trial = 0; trial < 20; ++trial) {
            const Mat2 rho = random_qubit_density(rng);
            CHECK(max_abs(QubitBloch::from_density(rho).to_density() - rho) < 1e-14);
        }
    }
}

TEST_CASE("dephasing physical mapping is monotone and capped at 1/2") {
    double prev = -1.0;
    // gamma_t large enough to approach 1/2 but small enough that the
    // exponential still resolves above double-precision spacing at 0.5
    for (double gt : {0.0, 0.1, 0.5, 2.0, 10.0, 30.0}) {
        const double p = DephasingPhysicalParams{1.0, gt}.p();
        CHECK(p >= prev);
        CHECK(p < 0.5);
        prev = p;
    }
    CHECK(phase_flip_from_physical(DephasingPhysicalParams{2.0, 0.3}).p ==
          doctest::Approx(0.5 * (1.0 - std::exp(-4.0 * 0.3))));
}

TEST_CASE("channel lift onto the walk density matrix") {
    std::mt19937_64 rng(55);
    const Topology topo = Topology::line(3);

    // random mixed state: mixture of a few short random walks
    auto random_density = [&]() {
        DensityState rho(topo);
        double weights[3];
        double total = 0.0;
        for (double& w : weights) {
            w = refsim::uniform(rng, 0.1, 1.0);
            total += w;
        }
        for (int k = 0; k < 3; ++k) {
            const double a = refsim::uniform(rng, 0.0, 1.0);
            InitialState init{cdouble{std::sqrt(a)},
                              std::polar(std::sqrt(1.0 - a), refsim::uniform(rng, -3.0, 3.0)),
                              static_cast<int>(rng() % 3) - 1};
            WalkConfig cfg{topo, init, StepPipeline{build_coin(refsim::random_coin_params(rng))},
                           2, {}};
            const DensityState part = to_density(evolve_pure(cfg));
            for (std::size_t i = 0; i < rho.data().size(); ++i)
                rho.data()[i] += (weights[k] / total) * part.data()[i];
        }
        return rho;
    };

    SUBCASE("identity channel leaves rho unchanged; trace and Hermiticity preserved") {
        for (int trial = 0; trial < 100; ++trial) {
            DensityState rho = random_density();
            const DensityState before = rho;
            apply_channel(rho, phase_flip(0.0));
            double diff = 0.0;
            for (std::size_t i = 0; i < rho.data().size(); ++i)
                diff = std::max(diff, std::abs(rho.data()[i] - before.data()[i]));
            CHECK(diff < 1e-14);

            apply_channel(rho, trial % 2 ? bit_flip(0.37) : gad_channel(0.6, 0.75));
            CHECK(std::abs(rho.trace() - cdouble{1.0}) < 1e-12);
            CHECK(rho.hermiticity_defect() < 1e-12);
        }
    }
    SUBCASE("blockwise lift equals the dense Kraus conjugation") {
        DensityState rho = random_density();
        const KrausChannel ch = gad_channel(0.4, 0.8);
        refsim::DenseMatrix dense(rho.dim());
        dense.m = rho.data();
        refsim::DenseMatrix expect(rho.dim());
        for (const Mat2& e : ch.ops) {
            const refsim::DenseMatrix lifted = refsim::lift_coin(e, topo);
            const refsim::DenseMatrix term = lifted * dense * lifted.adjoint();
            for (std::size_t i = 0; i < expect.m.size(); ++i) expect.m[i] += term.m[i];
        }
        apply_channel(rho, ch);
        double diff = 0.0;
        for (std::size_t i = 0; i < rho.data().size(); ++i)
            diff = std::max(diff, std::abs(rho.data()[i] - expect.m[i]));
        CHECK(diff < 1e-13);
    }
    SUBCASE("a broken operator set is rejected") {
        DensityState rho = random_density();
        KrausChannel broken = phase_flip(0.3);
        broken.ops.pop_back();
        CHECK_THROWS_AS(apply_channel(rho, broken), numerical_error);
    }
    SUBCASE("positivity: eigenvalues stay >= -1e-10 under noisy evolution") {
        DensityState rho = random_density();
        apply_channel(rho, gad_channel(0.35, 0.7));
        apply_channel(rho, phase_flip(0.2));
        refsim::DenseMatrix m(rho.dim());
        m.m = rho.data();
        for (double ev : refsim::hermitian_eigenvalues(m)) CHECK(ev >= -1e-10);
    }
}
