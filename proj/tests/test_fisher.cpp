#include "qpfi/fisher.hpp"
#include "qpfi/oracles.hpp"
#include "qpfi/verify.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace qpfi;

namespace {

StateFamily tilted_qubit(double theta) {
    CMat rho = CMat::Zero(2, 2), drho = CMat::Zero(2, 2);
    rho(0, 0) = std::pow(std::cos(theta), 2);
    rho(1, 1) = std::pow(std::sin(theta), 2);
    drho(0, 0) = -std::sin(2 * theta);
    drho(1, 1) = std::sin(2 * theta);
    return StateFamily(DensityOperator(rho), HermitianOperator(drho));
}

Povm z_basis() {
    CMat a = CMat::Zero(2, 2), b = CMat::Zero(2, 2);
    a(0, 0) = 1;
    b(1, 1) = 1;
    return Povm({a, b});
}

}  // namespace

TEST(ClassicalFi, Examples) {
    RVec p(2), dp(2);
    p << 0.5, 0.5;
    dp << 1, -1;
    EXPECT_DOUBLE_EQ(classical_fi(p, dp).value, 4.0);
    p << 1, 0;
    dp << 0, 0;
    EXPECT_EQ(classical_fi(p, dp).value, 0.0);
    p << 0.3, 0.7;
    dp << 0.2, -0.2;
    FisherReport r = classical_fi(p, dp);
    EXPECT_NEAR(r.value, 0.04 / 0.3 + 0.04 / 0.7, 1e-15);
    EXPECT_NEAR(r.value, 0.190476, 1e-6);
    EXPECT_NEAR(r.value, r.per_outcome.sum(), 1e-12 * r.value);
}

TEST(ClassicalFi, BernoulliCurvature) {
    // FI of a Bernoulli family equals minus the expected second derivative of the log-likelihood
    const double q = 0.3, h = 1e-4;
    auto ll = [](double qq, int x) { return x ? std::log(qq) : std::log(1 - qq); };
    double curv = 0.0;
    for (int x = 0; x < 2; ++x) {
        double w = x ? q : 1 - q;
        curv -= w * (ll(q + h, x) - 2 * ll(q, x) + ll(q - h, x)) / (h * h);
    }
    RVec p(2), dp(2);
    p << 1 - q, q;
    dp << -1, 1;
    EXPECT_NEAR(classical_fi(p, dp).value, curv, 1e-5);
}

TEST(ClassicalFi, SingularSupport) {
    RVec p(2), dp(2);
    p << 1, 0;
    dp << -0.1, 0.1;
    try {
        classical_fi(p, dp);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SingularSupport);
    }
}

TEST(Fi, TiltedQubitProjective) {
    EXPECT_NEAR(fi(tilted_qubit(std::numbers::pi / 4), z_basis()).value, 4.0, 1e-12);
}

TEST(Fi, PurePhaseInXBasis) {
    // (e^{i t}|0> + e^{-i t}|1>)/sqrt2 read in the X basis at t = pi/8
    CVec psi0(2);
    psi0 << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    CMat H = -ops::pauli_z();
    const double t = std::numbers::pi / 8;
    StateFamily f = unitary_family_from_generator(HermitianOperator(H), psi0, t);
    Povm xb({0.5 * (CMat::Identity(2, 2) + ops::pauli_x()), 0.5 * (CMat::Identity(2, 2) - ops::pauli_x())});
    double ref = oracle::fd_fi(H, psi0 * psi0.adjoint(), t, xb);
    EXPECT_NEAR(fi(f, xb).value, 4.0, 1e-12);
    EXPECT_NEAR(ref, 4.0, 1e-8);
}

TEST(Fi, MatchesFiniteDifferences) {
    verify::gen::Rng rng(21);
    for (int t = 0; t < 40; ++t) {
        int d = verify::gen::integer(rng, 2, 4);
        CMat H = verify::gen::hermitian(rng, d);
        CMat rho0 = verify::gen::full_rank_state(rng, d);
        Povm povm = verify::gen::general_povm(rng, 3, d);
        StateFamily f = verify::gen::unitary_mixed_family(H, rho0);
        double ref = oracle::fd_fi(H, rho0, 0.0, povm);
        EXPECT_NEAR(fi(f, povm).value, ref, 1e-6 * ref);
        EXPECT_LE(fi(f, povm).value, qfi(f) + 1e-7);
    }
}

TEST(Sld, DiagonalCase) {
    CMat rho = CMat::Zero(2, 2), drho = CMat::Zero(2, 2);
    rho(0, 0) = 0.7;
    rho(1, 1) = 0.3;
    drho(0, 0) = 0.2;
    drho(1, 1) = -0.2;
    HermitianOperator L = sld(StateFamily(DensityOperator(rho), HermitianOperator(drho)));
    EXPECT_NEAR(L.matrix()(0, 0).real(), 0.2 / 0.7, 1e-14);
    EXPECT_NEAR(L.matrix()(1, 1).real(), -0.2 / 0.3, 1e-14);
    EXPECT_NEAR(std::abs(L.matrix()(0, 1)), 0.0, 1e-15);
}

TEST(Sld, MaximallyMixedWithPauliX) {
    StateFamily f(DensityOperator(0.5 * CMat::Identity(2, 2)), HermitianOperator(0.5 * ops::pauli_x()));
    EXPECT_LT(linalg::max_abs(CMat(sld(f).matrix() - ops::pauli_x())), 1e-14);
}

TEST(Sld, LyapunovIdentity) {
    verify::gen::Rng rng(22);
    for (int t = 0; t < 20; ++t) {
        int d = verify::gen::integer(rng, 2, 4);
        StateFamily f = t % 2 ? verify::gen::pure_family(rng, d)
                              : verify::gen::unitary_mixed_family(verify::gen::hermitian(rng, d),
                                                                 verify::gen::full_rank_state(rng, d));
        CMat L = sld(f).matrix();
        CMat rho = f.rho().matrix();
        EXPECT_LT(linalg::max_abs(CMat(0.5 * (L * rho + rho * L) - f.drho().matrix())), 1e-8);
        if (f.is_pure()) {
            // on the support the SLD of a pure state acts as 2 drho
            CMat P = rho;
            EXPECT_LT(linalg::max_abs(CMat((L - 2.0 * f.drho().matrix()) * P)), 1e-8);
        }
    }
}

TEST(Qfi, Examples) {
    RVec l(3), dl(3);
    l << 0.2, 0.3, 0.5;
    dl << 0.1, 0.2, -0.3;
    CMat rho = l.cast<cplx>().asDiagonal(), drho = dl.cast<cplx>().asDiagonal();
    double expect = 0.0;
    for (int i = 0; i < 3; ++i) expect += dl(i) * dl(i) / l(i);
    EXPECT_NEAR(qfi(StateFamily(DensityOperator(rho), HermitianOperator(drho))), expect, 1e-13);

    CVec psi0(2);
    psi0 << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    StateFamily phase = unitary_family_from_generator(HermitianOperator(ops::pauli_z()), psi0, 0.2);
    EXPECT_NEAR(qfi(phase), 4.0, 1e-12);
    EXPECT_NEAR(qfi_pure_norm(phase), 4.0, 1e-12);

    StateFamily ghz = unitary_family_from_generator(ops::collective_z(3), ops::ghz_state(3), 0.1);
    EXPECT_NEAR(qfi(ghz), 36.0, 1e-10);
}

TEST(Qfi, AdditiveOnProductPureStates) {
    verify::gen::Rng rng(23);
    for (int t = 0; t < 10; ++t) {
        StateFamily a = verify::gen::pure_family(rng, 2);
        StateFamily b = verify::gen::pure_family(rng, 3);
        const PureVector& pa = *a.pure_vector();
        const PureVector& pb = *b.pure_vector();
        CVec psi = linalg::kron(CMat(pa.psi), CMat(pb.psi)).col(0);
        CVec dpsi = (linalg::kron(CMat(pa.dpsi), CMat(pb.psi)) + linalg::kron(CMat(pa.psi), CMat(pb.dpsi))).col(0);
        StateFamily ab = StateFamily::pure(psi, dpsi);
        EXPECT_NEAR(qfi(ab), qfi(a) + qfi(b), 1e-8);
    }
}

TEST(OptimalErrorVector, ProjectiveTiltedQubit) {
    StateFamily f = tilted_qubit(std::numbers::pi / 4);
    Povm z = z_basis();
    ErrorVector x = optimal_error_vector(f, z);
    EXPECT_NEAR(x(0), -0.5, 1e-12);
    EXPECT_NEAR(x(1), 0.5, 1e-12);
    ErrorObservables eo = error_observables(z, x);
    double var = (f.rho().matrix() * eo.X2.matrix()).trace().real();
    EXPECT_NEAR(var, 0.25, 1e-12);
    EXPECT_NEAR(var * fi(f, z).value, 1.0, 1e-8);
    // unbiasedness: tr(rho X) = 0, tr(drho X) = 1
    EXPECT_NEAR((f.rho().matrix() * eo.X.matrix()).trace().real(), 0.0, 1e-12);
    EXPECT_NEAR((f.drho().matrix() * eo.X.matrix()).trace().real(), 1.0, 1e-12);
}

TEST(OptimalErrorVector, ZeroInformation) {
    try {
        optimal_error_vector(tilted_qubit(0.0), z_basis());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ZeroInformation);
    }
}

TEST(OptimalErrorVector, VarianceTimesFiIsOne) {
    verify::gen::Rng rng(24);
    for (int t = 0; t < 20; ++t) {
        int d = verify::gen::integer(rng, 2, 3);
        StateFamily f = verify::gen::unitary_mixed_family(verify::gen::hermitian(rng, d),
                                                          verify::gen::full_rank_state(rng, d));
        Povm p = verify::gen::general_povm(rng, 3, d);
        ErrorVector x = optimal_error_vector(f, p);
        ErrorObservables eo = error_observables(p, x);
        double var = (f.rho().matrix() * eo.X2.matrix()).trace().real();
        EXPECT_NEAR(var * fi(f, p).value, 1.0, 1e-8);
    }
}

TEST(AttainablePovm, ClassicalIsComputationalBasis) {
    Povm T = qfi_attainable_povm(tilted_qubit(0.4));
    ASSERT_TRUE(T.diagonal());
    EXPECT_TRUE(T.computational_basis());
}

TEST(AttainablePovm, PureQubitIsBinary) {
    verify::gen::Rng rng(25);
    StateFamily f = verify::gen::pure_family(rng, 2);
    Povm T = qfi_attainable_povm(f);
    EXPECT_EQ(T.outcomes(), 2);
    EXPECT_NEAR(fi(f, T).value, qfi(f), 1e-9 * qfi(f));
}

TEST(AttainablePovm, RandomQutrits) {
    verify::gen::Rng rng(26);
    for (int t = 0; t < 20; ++t) {
        StateFamily f = verify::gen::unitary_mixed_family(verify::gen::hermitian(rng, 3),
                                                          verify::gen::full_rank_state(rng, 3));
        EXPECT_GE(fi(f, qfi_attainable_povm(f)).value / qfi(f), 1.0 - 1e-7);
    }
}
