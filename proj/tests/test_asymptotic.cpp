#include "qpfi/asymptotic.hpp"
#include "qpfi/oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

using namespace qpfi;

TEST(MajorityWeights, MatchFlipEnumeration) {
    for (int n = 1; n <= 12; ++n)
        for (double m : {0.0, 0.05, 0.2, 0.4}) {
            std::vector<double> w = majority_vote_weights(n, m);
            for (int k = 0; k <= n; ++k) EXPECT_NEAR(w[k], oracle::flip_weight(n, k, m), 1e-12) << n << " " << k;
        }
}

TEST(MajorityWeights, Example) {
    EXPECT_NEAR(majority_vote_weights(4, 0.1)[0], 0.9963, 1e-12);
}

TEST(MajorityWeights, HoeffdingTail) {
    for (int n : {5, 21, 101, 401})
        for (double m : {0.05, 0.2, 0.35}) {
            double miss = 0.0;
            for (int k = n / 2 + 1; k <= n; ++k) miss += binom::pmf(n, k, m);
            EXPECT_NEAR(miss, 1.0 - detail::majority_zero_weight(n, m), 1e-12);
            EXPECT_LE(miss, std::exp(-2.0 * n * (0.5 - m) * (0.5 - m)) + 1e-15);
        }
}

TEST(Ghz, NoiselessIsHeisenberg) {
    for (int n : {1, 2, 5, 9}) {
        ProtocolPoint pt = ghz_protocol_fi(n, 0.0, std::numbers::pi / (4.0 * n));
        EXPECT_NEAR(pt.fi, 4.0 * n * n, 1e-9 * n * n);
        EXPECT_NEAR(pt.ratio, 1.0, 1e-9);
        EXPECT_TRUE(pt.warnings.empty());
    }
}

TEST(Ghz, MatchesStatevector) {
    for (int n : {2, 3, 5, 8})
        for (double m : {0.05, 0.15}) {
            double theta = std::numbers::pi / (4.0 * n);
            EXPECT_NEAR(ghz_protocol_fi(n, m, theta).fi, oracle::ghz_protocol_fi(n, m, theta), 1e-5 * n * n);
        }
}

TEST(Ghz, WarnsOutsideWindow) {
    EXPECT_FALSE(ghz_protocol_fi(4, 0.1, 0.01).warnings.empty());
}

TEST(Ghz, LocalReadoutMatchesStatevector) {
    for (int n : {2, 4, 6})
        for (double theta : {0.05, 0.2}) {
            double ref = oracle::ghz_local_readout_fi(n, 0.1, theta);
            EXPECT_NEAR(ghz_local_readout_fi(n, 0.1, theta), ref, 1e-5 * std::max(1.0, ref));
        }
}

TEST(Ghz, LocalReadoutCeiling) {
    const int n = 10;
    const double cap = 4.0 * n * n * std::pow(0.8, 2 * n);
    for (int i = 1; i < 40; ++i) EXPECT_LE(ghz_local_readout_fi(n, 0.1, i * 0.01), cap * (1 + 1e-12));
    EXPECT_NEAR(ghz_local_readout_fi(n, 0.1, std::numbers::pi / (4.0 * n)), cap, 1e-9);
}

TEST(Product, MatchesStatevector) {
    for (int n : {1, 2, 3, 6, 8})
        for (double m : {0.0, 0.1}) {
            double delta = 0.6 / std::sqrt(static_cast<double>(n)) + 0.02;
            double ref = oracle::product_protocol_fi(n, m, delta);
            EXPECT_NEAR(product_protocol_fi(n, m, delta, 0.0).fi, ref, 1e-4 * std::max(1.0, ref)) << n << " " << m;
        }
}

TEST(Product, SingleQubit) {
    // one qubit: p0 = cos^2(d) (1-m) + sin^2(d) m, so FI = (1-2m)^2 sin^2(2d) / (p0 (1-p0))
    const double m = 0.1, d = 0.4;
    double p0 = std::pow(std::cos(d), 2) * (1 - m) + std::pow(std::sin(d), 2) * m;
    double dp0 = -(1 - 2 * m) * std::sin(2 * d);
    EXPECT_NEAR(product_protocol_fi(1, m, d, 0.0).fi, dp0 * dp0 / (p0 * (1 - p0)), 1e-7);
}

TEST(Product, RatioGrowsWithN) {
    double prev = 0.0;
    for (int n : {6, 10, 14}) {
        ProtocolPoint pt = product_protocol_fi(n, 0.1, std::pow(static_cast<double>(n), -0.75), 0.0);
        EXPECT_GT(pt.ratio, 0.6);
        EXPECT_GT(pt.ratio, prev);
        prev = pt.ratio;
    }
}

TEST(Product, NoiselessNearShotNoise) {
    const int n = 16;
    ProtocolPoint pt = product_protocol_fi(n, 0.0, std::pow(static_cast<double>(n), -0.9), 0.0);
    EXPECT_GT(pt.ratio, 0.9);
    EXPECT_LE(pt.ratio, 1.0 + 1e-6);
}

TEST(Sorting, DerivativeMatchesBinomialCdf) {
    for (int n : {10, 100, 1000})
        for (double theta : {0.3, 0.6}) {
            int K = sorting_threshold(n, theta);
            double ref = oracle::sorting_derivative(n, theta, K);
            EXPECT_NEAR(sorting_derivative(n, theta, K), ref, 1e-5 * std::abs(ref) + 1e-9);
            EXPECT_NEAR(binom::cdf(n, std::pow(std::sin(theta), 2), K),
                        oracle::binomial_cdf(n, std::pow(std::sin(theta), 2), K), 1e-12);
        }
}

TEST(Sorting, RatioNearOptimumAtModerateN) {
    auto [theta, theta0] = ThetaRule::defaults(ProtocolId::Sorting).angles(100);
    ProtocolPoint pt = classical_sorting_protocol_fi(100, 0.1, theta, theta0);
    EXPECT_GE(pt.ratio, 0.85);
    EXPECT_LE(pt.ratio, 1.05);
}

TEST(Sorting, RejectsWideAngle) {
    EXPECT_THROW(classical_sorting_protocol_fi(10, 0.1, 1.0, 1.0), Error);
}

TEST(LocalControl, ThresholdSeparatesCeiling) {
    const double star = local_control_threshold();
    EXPECT_NEAR(star, 0.1010577, 1e-7);
    EXPECT_LT(local_control_ceiling(50, 0.102), 8.0 * 50 / std::numbers::pi);
    EXPECT_GT(local_control_ceiling(50, 0.100), 8.0 * 50 / std::numbers::pi);
}

TEST(Report, GhzSweep) {
    std::vector<ProtocolPoint> pts = convergence_report(ProtocolId::Ghz, {4, 8, 12}, 0.1, ThetaRule::parse("quarter"));
    ASSERT_EQ(pts.size(), 3u);
    for (size_t i = 1; i < pts.size(); ++i) EXPECT_GE(pts[i].ratio, pts[i - 1].ratio);
    EXPECT_THROW(ThetaRule::parse("bogus"), Error);
    EXPECT_THROW(parse_protocol("noon"), Error);
}

TEST(Report, CsvKeepsFullPrecision) {
    ProtocolPoint pt{"ghz", 3, 0.1, 1.0 / 3.0, std::nullopt, 2.0 / 3.0, 36.0, 2.0 / 108.0, {}};
    std::ostringstream os;
    write_protocol_csv(os, {pt});
    std::string csv = os.str();
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "protocol,n,m,theta,theta0,fi,reference,ratio");
    EXPECT_NE(csv.find("0.33333333333333331"), std::string::npos);
    EXPECT_NE(csv.find(",,"), std::string::npos);
}

TEST(Report, InvalidArguments) {
    EXPECT_THROW(majority_vote_weights(0, 0.1), Error);
    EXPECT_THROW(majority_vote_weights(3, 0.5), Error);
    EXPECT_THROW(product_protocol_fi(17, 0.1, 0.1, 0.0), Error);
}
