#include "qpfi/oracles.hpp"
#include "qpfi/pure.hpp"
#include "qpfi/verify.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

using namespace qpfi;
namespace gen = qpfi::verify::gen;

namespace {

RMat binary_table(double m1, double m2) {
    RMat t(2, 2);
    t << m1, m2, 1 - m1, 1 - m2;
    return t;
}

StateFamily family_along(const CVec& phi, const CVec& perp, double speed) {
    return StateFamily::pure(phi, speed * perp);
}

}  // namespace

TEST(GammaBinary, ClosedForms) {
    GammaResult g = gamma_binary_qubit(0.9, 0.2);
    EXPECT_NEAR(g.gamma, 0.5, 1e-14);
    ASSERT_TRUE(g.p_star.has_value());
    EXPECT_NEAR(*g.p_star, 4.0 / 7.0, 1e-14);
    EXPECT_TRUE(g.attainable);

    g = gamma_binary_qubit(1.0, 0.0);
    EXPECT_DOUBLE_EQ(g.gamma, 1.0);
    EXPECT_DOUBLE_EQ(*g.p_star, 0.5);

    g = gamma_binary_qubit(0.7, 0.0);
    EXPECT_NEAR(g.gamma, 0.7, 1e-14);
    EXPECT_FALSE(g.attainable);
    EXPECT_FALSE(g.p_star.has_value());

    EXPECT_NEAR(gamma_binary_qubit(0.9, 0.1).gamma, 0.64, 1e-14);
}

TEST(GammaBinary, Rejections) {
    EXPECT_THROW(gamma_binary_qubit(0.4, 0.4), Error);
    EXPECT_THROW(gamma_binary_qubit(0.2, 0.9), Error);
    EXPECT_THROW(gamma_binary_qubit(1.2, 0.1), Error);
}

TEST(GammaBinary, QuditPicksExtremes) {
    RVec m(3);
    m << 0.9, 0.5, 0.2;
    GammaResult g = gamma_binary_qudit(m);
    EXPECT_NEAR(g.gamma, 0.5, 1e-14);
    ASSERT_TRUE(g.pair.has_value());
    EXPECT_EQ(g.pair->first, 0);
    EXPECT_EQ(g.pair->second, 2);
    EXPECT_EQ(g.phi(1), cplx(0.0));
}

TEST(GammaBinary, MatchesProfileMaximum) {
    gen::Rng rng(31);
    for (int t = 0; t < 200; ++t) {
        double a = gen::uniform(rng, 0.0, 1.0), b = gen::uniform(rng, 0.0, 1.0);
        if (std::abs(a - b) < 1e-3) continue;
        double m1 = std::max(a, b), m2 = std::min(a, b);
        EXPECT_NEAR(gamma_binary_qubit(m1, m2).gamma, oracle::gamma_golden(binary_table(m1, m2)), 1e-9);
    }
}

TEST(GammaCommuting, PairSolverMatchesGoldenSection) {
    gen::Rng rng(32);
    for (int t = 0; t < 60; ++t) {
        int r = gen::integer(rng, 2, 5), d = gen::integer(rng, 2, 4);
        RMat table = gen::positive_table(rng, r, d);
        GammaResult g = gamma_commuting(table);
        double ref = oracle::gamma_golden(table);
        EXPECT_NEAR(g.gamma, ref, 1e-9);
        EXPECT_LT(g.residual, 1e-9);
        EXPECT_LE(gamma_lower_bound(table), g.gamma + 1e-12);
        EXPECT_LE(g.gamma, gamma_upper_bound(table).value + 1e-12);
    }
}

TEST(GammaCommuting, InvariantUnderRelabeling) {
    gen::Rng rng(33);
    RMat table = gen::positive_table(rng, 4, 3);
    double base = gamma_commuting(table).gamma;
    std::vector<int> rows{3, 1, 0, 2}, cols{2, 0, 1};
    RMat shuffled(4, 3);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 3; ++j) shuffled(i, j) = table(rows[i], cols[j]);
    EXPECT_NEAR(gamma_commuting(shuffled).gamma, base, 1e-12);
}

TEST(GammaCommuting, PairHelper) {
    RVec mk(2), ml(2);
    mk << 0.9, 0.1;
    ml << 0.2, 0.8;
    EXPECT_NEAR(gamma_pair_commuting(mk, ml).gamma, 0.5, 1e-12);
}

TEST(GammaUpperBound, TightForBinary) {
    GammaUpperBound ub = gamma_upper_bound(binary_table(0.9, 0.2));
    EXPECT_NEAR(ub.value, 0.5, 1e-14);
    EXPECT_TRUE(ub.tight);
}

TEST(GammaNumeric, AgreesWithClosedForm) {
    Povm p = binary_povm((RVec(2) << 0.9, 0.2).finished());
    NumericGamma ng = gamma_numeric(p, 16, 1);
    EXPECT_NEAR(ng.value, 0.5, 1e-6);
    Povm z = binary_povm((RVec(2) << 1.0, 0.0).finished());
    EXPECT_NEAR(gamma_numeric(z, 8, 2).value, 1.0, 1e-6);
}

TEST(GammaOfPovm, RoutesAndFlags) {
    gen::Rng rng(34);
    GammaEvaluation ev = gamma_of_povm(binary_povm((RVec(3) << 0.9, 0.5, 0.2).finished()));
    EXPECT_EQ(ev.source, GammaSource::ClosedForm);
    EXPECT_FALSE(ev.heuristic);

    ev = gamma_of_povm(povm_from_table(gen::positive_table(rng, 3, 3)));
    EXPECT_EQ(ev.source, GammaSource::RootFinding);

    RMat with_zero(3, 2);
    with_zero << 0.7, 0.0, 0.3, 0.5, 0.0, 0.5;
    ev = gamma_of_povm(povm_from_table(with_zero));
    EXPECT_EQ(ev.source, GammaSource::BoundaryLimit);

    ev = gamma_of_povm(gen::general_povm(rng, 3, 2), 8, 3);
    EXPECT_EQ(ev.source, GammaSource::Numeric);
    EXPECT_TRUE(ev.heuristic);
}

TEST(GammaOfPovm, RotatedBasisKeepsValue) {
    gen::Rng rng(35);
    RMat table = gen::positive_table(rng, 3, 3);
    Povm rotated = gen::rotated_povm(table, gen::unitary(rng, 3));
    EXPECT_NEAR(gamma_of_povm(rotated).result.gamma, gamma_commuting(table).gamma, 1e-8);
}

TEST(QupfiPure, Examples) {
    CVec psi0(2);
    psi0 << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    StateFamily phase = unitary_family_from_generator(HermitianOperator(ops::pauli_z()), psi0, 0.0);
    EXPECT_NEAR(qupfi_pure(phase, binary_povm((RVec(2) << 0.9, 0.1).finished())), 2.56, 1e-12);

    StateFamily ghz = unitary_family_from_generator(ops::collective_z(3), ops::ghz_state(3), 0.0);
    RVec m = RVec::Constant(8, 0.25);
    m(0) = 0.75;
    EXPECT_NEAR(qupfi_pure(ghz, binary_povm(m)), 9.0, 1e-9);
}

TEST(QupfiPure, Rejections) {
    gen::Rng rng(36);
    StateFamily mixed = gen::unitary_mixed_family(gen::hermitian(rng, 2), gen::full_rank_state(rng, 2));
    Povm p = binary_povm((RVec(2) << 0.9, 0.1).finished());
    try {
        qupfi_pure(mixed, p);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotPure);
    }
    StateFamily qutrit = gen::pure_family(rng, 3);
    try {
        qupfi_pure(qutrit, p);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
    }
}

TEST(NecessaryConditions, HoldAtOptimumAndFailAway) {
    Povm p = binary_povm((RVec(2) << 0.9, 0.2).finished());
    GammaResult g = gamma_binary_qubit(0.9, 0.2);
    const double speed = 0.8;
    StateFamily f = family_along(g.phi, g.phi_perp, speed);
    ErrorVector x = optimal_error_vector(f, p);
    ConditionReport ok = verify_necessary_conditions(g.phi, g.phi_perp, x, p, speed * speed);
    EXPECT_TRUE(ok.passed) << ok.residual_first << " " << ok.residual_second;
    EXPECT_NEAR(fi(f, p).value, g.gamma * qfi(f), 1e-10);

    const double t = 0.2;
    CVec phi(2), perp(2);
    phi << std::cos(t) * g.phi(0) - std::sin(t) * g.phi(1), std::sin(t) * g.phi(0) + std::cos(t) * g.phi(1);
    perp << -phi(1), phi(0);
    StateFamily off = family_along(phi, perp, speed);
    ConditionReport bad = verify_necessary_conditions(phi, perp, optimal_error_vector(off, p), p, speed * speed);
    EXPECT_FALSE(bad.passed);
    EXPECT_GT(std::max(bad.residual_first, bad.residual_second), 1e-3);
}

TEST(NecessaryConditions, PureFisherNeverExceedsGammaTimesQfi) {
    gen::Rng rng(37);
    for (int t = 0; t < 30; ++t) {
        int d = gen::integer(rng, 2, 3);
        RMat table = gen::positive_table(rng, 3, d);
        Povm p = povm_from_table(table);
        StateFamily f = gen::pure_family(rng, d);
        EXPECT_LE(fi(f, p).value, gamma_commuting(table).gamma * qfi(f) * (1 + 1e-9) + 1e-12);
    }
}
