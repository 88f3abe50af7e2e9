#include "qpfi/biconvex.hpp"
#include "qpfi/bounds.hpp"
#include "qpfi/verify.hpp"

#include <gtest/gtest.h>

using namespace qpfi;
namespace gen = qpfi::verify::gen;

TEST(UpperBound, PureEqualsQupfi) {
    gen::Rng rng(61);
    for (int t = 0; t < 10; ++t) {
        int d = gen::integer(rng, 2, 3);
        StateFamily f = gen::pure_family(rng, d);
        Povm p = povm_from_table(gen::positive_table(rng, 3, d));
        EXPECT_NEAR(qpfi_upper_general(f, p).value, qupfi_pure(f, p), 1e-10 * qfi(f));
    }
}

TEST(Sandwich, GapInstanceIsPinned) {
    ClassicalInstance inst = verify::gap_instance();
    Sandwich s = sandwich(inst.family(), inst.povm());
    EXPECT_NEAR(s.lower, 4.0, 1e-10);
    EXPECT_NEAR(s.upper, 4.0, 1e-10);
    EXPECT_EQ(s.lower_witness.path, LowerPath::Exhaustive);
    EXPECT_FALSE(s.heuristic);
}

TEST(Sandwich, ProjectiveMeasurementReachesQfi) {
    ClassicalInstance inst = verify::tilted_qubit(0.3, RMat::Identity(2, 2));
    Sandwich s = sandwich(inst.family(), inst.povm());
    double q = qfi(inst.family());
    EXPECT_NEAR(s.lower, q, 1e-10);
    EXPECT_NEAR(s.upper, q, 1e-10);
}

TEST(Sandwich, OrderingOnRandomInstances) {
    gen::Rng rng(62);
    for (int t = 0; t < 30; ++t) {
        int d = gen::integer(rng, 2, 3);
        StateFamily f = gen::unitary_mixed_family(gen::hermitian(rng, d), gen::full_rank_state(rng, d));
        Povm p = gen::rotated_povm(gen::positive_table(rng, gen::integer(rng, 2, 3), d), gen::unitary(rng, d));
        Sandwich s = sandwich(f, p);
        EXPECT_LE(s.lower, s.upper + 1e-9);
        EXPECT_GE(s.lower, 0.0);
        EXPECT_LE(s.upper, qfi(f) + 1e-9);
    }
}

TEST(Sandwich, AcsSitsBetweenBounds) {
    gen::Rng rng(63);
    for (int t = 0; t < 3; ++t) {
        StateFamily f = gen::unitary_mixed_family(gen::hermitian(rng, 2), gen::full_rank_state(rng, 2));
        Povm p = povm_from_table(gen::positive_table(rng, 2, 2, 0.05));
        Sandwich s = sandwich(f, p);
        AcsConfig cfg;
        cfg.seed = static_cast<std::uint64_t>(t);
        double acs = acs_solve(f, p, cfg).value;
        EXPECT_LE(s.lower, acs + 1e-6);
        EXPECT_LE(acs, s.upper + 1e-6);
    }
}

TEST(Sandwich, NoInformationGivesZeroLower) {
    RVec l(2), dl(2);
    l << 0.5, 0.5;
    dl << 0.0, 0.0;
    RMat m(2, 2);
    m << 0.9, 0.2, 0.1, 0.8;
    ClassicalInstance inst(l, dl, m);
    Sandwich s = sandwich(inst.family(), inst.povm());
    EXPECT_EQ(s.lower, 0.0);
    EXPECT_NEAR(s.upper, 0.0, 1e-12);
}

TEST(Sandwich, NonCommutingIsHeuristic) {
    gen::Rng rng(64);
    StateFamily f = gen::pure_family(rng, 2);
    Sandwich s = sandwich(f, gen::general_povm(rng, 3, 2));
    EXPECT_TRUE(s.heuristic);
    EXPECT_TRUE(s.upper_witness.heuristic);
    EXPECT_EQ(s.upper_witness.source, GammaSource::Numeric);
}

TEST(Sandwich, BinarySplitPathForLargeInstances) {
    gen::Rng rng(65);
    StateFamily f = gen::unitary_mixed_family(gen::hermitian(rng, 3), gen::full_rank_state(rng, 3));
    Povm p = povm_from_table(gen::positive_table(rng, 3, 3));
    LowerBound lb = qpfi_lower_via_qc(f, p, 1.0);
    EXPECT_EQ(lb.path, LowerPath::BinarySplit);
    LowerBound full = qpfi_lower_via_qc(f, p);
    EXPECT_EQ(full.path, LowerPath::Exhaustive);
    EXPECT_LE(lb.value, full.value + 1e-9);
}
