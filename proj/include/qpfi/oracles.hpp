#pragma once

// Slow reference implementations used only by the verification suites and tests. None of the
// library routines call into this header.

#include "classical.hpp"
#include "core.hpp"

#include <boost/math/distributions/binomial.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace qpfi::oracle {

// FI of a distribution, no validation beyond skipping empty outcomes.
inline double plain_fi(const RVec& p, const RVec& dp) {
    double f = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p(i) > 0.0) f += dp(i) * dp(i) / p(i);
    return f;
}

// Pair profile of a commuting measurement: phi = sqrt(p)|k> + sqrt(1-p)|l>.
inline double pair_value(const RVec& mk, const RVec& ml, double p) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < mk.size(); ++i) {
        double den = p * mk(i) + (1.0 - p) * ml(i);
        double num = mk(i) - ml(i);
        if (den > 0.0) s += p * (1.0 - p) * num * num / den;
    }
    return s;
}

// Grid bracket followed by golden-section refinement, per pair.
inline double gamma_golden(const RMat& table, int grid = 400) {
    const int d = static_cast<int>(table.cols());
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double best = 0.0;
    for (int k = 0; k < d; ++k)
        for (int l = k + 1; l < d; ++l) {
            RVec mk = table.col(k), ml = table.col(l);
            auto f = [&](double p) { return pair_value(mk, ml, p); };
            int arg = 1;
            double top = -1.0;
            for (int i = 1; i < grid; ++i) {
                double v = f(static_cast<double>(i) / grid);
                if (v > top) {
                    top = v;
                    arg = i;
                }
            }
            double a = static_cast<double>(arg - 1) / grid, b = static_cast<double>(arg + 1) / grid;
            double c = b - g * (b - a), e = a + g * (b - a);
            double fc = f(c), fe = f(e);
            for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
                if (fc > fe) {
                    b = e; e = c; fe = fc;
                    c = b - g * (b - a); fc = f(c);
                } else {
                    a = c; c = e; fc = fe;
                    e = a + g * (b - a); fe = f(e);
                }
            }
            best = std::max({best, top, f(0.5 * (a + b))});
        }
    return best;
}

// Outcome probabilities of exp(-i theta H) rho0 exp(i theta H).
inline RVec probabilities(const CMat& H, const CMat& rho0, double theta, const Povm& povm) {
    CMat U = (CMat(cplx(0.0, -theta) * H)).exp();
    CMat rho = U * rho0 * U.adjoint();
    RVec p(povm.outcomes());
    for (int i = 0; i < povm.outcomes(); ++i) p(i) = (povm.effect(i).matrix() * rho).trace().real();
    return p;
}

// FI at theta from centered finite differences of the outcome probabilities.
inline double fd_fi(const CMat& H, const CMat& rho0, double theta, const Povm& povm, double h = 1e-5) {
    RVec p = probabilities(H, rho0, theta, povm);
    RVec dp = (probabilities(H, rho0, theta + h, povm) - probabilities(H, rho0, theta - h, povm)) / (2.0 * h);
    return plain_fi(p, dp);
}

// Every d^D indicator matrix, each scored from scratch.
inline double exhaustive_indicator_fi(const RVec& lambda, const RVec& dlambda, const RMat& table) {
    const int D = static_cast<int>(lambda.size());
    const int d = static_cast<int>(table.cols());
    std::vector<int> a(D, 0);
    double best = 0.0;
    while (true) {
        RVec lam = RVec::Zero(d), dlam = RVec::Zero(d);
        for (int k = 0; k < D; ++k) {
            lam(a[k]) += lambda(k);
            dlam(a[k]) += dlambda(k);
        }
        RVec p = table * lam, dp = table * dlam;
        double f = 0.0;
        bool singular = false;
        for (Eigen::Index i = 0; i < p.size(); ++i) {
            if (p(i) > 1e-15) f += dp(i) * dp(i) / p(i);
            else if (std::abs(dp(i)) > 1e-12) singular = true;
        }
        if (!singular) best = std::max(best, f);
        int pos = 0;
        while (pos < D && ++a[pos] == d) a[pos++] = 0;
        if (pos == D) break;
    }
    return best;
}

// Pr(majority vote reads 0 | basis string with `ones` leading ones), from all 2^n flip patterns.
inline double flip_weight(int n, int ones, double m) {
    double total = 0.0;
    const unsigned long long full = 1ULL << n;
    for (unsigned long long f = 0; f < full; ++f) {
        int flips = __builtin_popcountll(f);
        int count = 0;
        for (int q = 0; q < n; ++q) {
            int bit = (q < ones) ? 1 : 0;
            if ((f >> q) & 1ULL) bit ^= 1;
            count += bit;
        }
        if (count <= n / 2) total += std::pow(m, flips) * std::pow(1.0 - m, n - flips);
    }
    return total;
}

namespace detail {

// qubit 0 is the most significant bit of the index
inline int bit(unsigned long long x, int q, int n) { return static_cast<int>((x >> (n - 1 - q)) & 1ULL); }

inline CVec cnot_fanout(const CVec& psi, int n) {
    CVec out = CVec::Zero(psi.size());
    const unsigned long long mask = (1ULL << (n - 1)) - 1ULL;
    for (Eigen::Index x = 0; x < psi.size(); ++x) {
        unsigned long long y = static_cast<unsigned long long>(x);
        if (bit(y, 0, n)) y ^= mask;
        out(static_cast<Eigen::Index>(y)) += psi(x);
    }
    return out;
}

// Zero probability of a state after independent readout flips and majority vote.
inline double majority_zero(const CVec& psi, int n, double m) {
    std::vector<double> w(n + 1);
    for (int k = 0; k <= n; ++k) w[k] = flip_weight(n, k, m);
    double p = 0.0;
    for (Eigen::Index x = 0; x < psi.size(); ++x) p += std::norm(psi(x)) * w[__builtin_popcountll(x)];
    return p;
}

inline double product_zero(int n, double m, double delta) {
    const Eigen::Index N = Eigen::Index(1) << n;
    CVec prod = CVec::Ones(1);
    for (int q = 0; q < n; ++q) {
        CVec next(prod.size() * 2);
        for (Eigen::Index i = 0; i < prod.size(); ++i) {
            next(2 * i) = prod(i) * std::cos(delta);
            next(2 * i + 1) = prod(i) * cplx(0.0, std::sin(delta));
        }
        prod = next;
    }
    // Dicke amplitudes by projection, moved to |1^k 0^(n-k)>
    std::vector<cplx> dicke(n + 1, cplx(0.0));
    std::vector<double> count(n + 1, 0.0);
    for (Eigen::Index x = 0; x < N; ++x) {
        int k = __builtin_popcountll(x);
        dicke[k] += prod(x);
        count[k] += 1.0;
    }
    CVec moved = CVec::Zero(N);
    for (int k = 0; k <= n; ++k) {
        unsigned long long idx = 0;
        for (int q = 0; q < k; ++q) idx |= 1ULL << (n - 1 - q);
        moved(static_cast<Eigen::Index>(idx)) = dicke[k] / std::sqrt(count[k]);
    }
    return majority_zero(cnot_fanout(moved, n), n, m);
}

inline double ghz_zero(int n, double m, double theta) {
    const Eigen::Index N = Eigen::Index(1) << n;
    CVec psi = CVec::Zero(N);
    psi(0) = std::exp(cplx(0.0, -theta * n)) / std::sqrt(2.0);
    psi(N - 1) = std::exp(cplx(0.0, theta * n)) / std::sqrt(2.0);
    psi = cnot_fanout(psi, n);
    // Hadamard on qubit 0
    CVec out = CVec::Zero(N);
    const Eigen::Index half = N / 2;
    for (Eigen::Index x = 0; x < half; ++x) {
        out(x) = (psi(x) + psi(x + half)) / std::sqrt(2.0);
        out(x + half) = (psi(x) - psi(x + half)) / std::sqrt(2.0);
    }
    return majority_zero(cnot_fanout(out, n), n, m);
}

}  // namespace detail

inline double two_outcome_fd_fi(const std::function<double(double)>& p0, double x, double h) {
    double p = p0(x);
    double dp = (p0(x + h) - p0(x - h)) / (2.0 * h);
    return dp * dp / (p * (1.0 - p));
}

// Statevector simulation of the product-probe protocol, derivative by finite differences.
inline double product_protocol_fi(int n, double m, double delta, double h = 1e-5) {
    return two_outcome_fd_fi([&](double t) { return detail::product_zero(n, m, t); }, delta, h);
}

inline double ghz_protocol_fi(int n, double m, double theta, double h = 1e-7) {
    return two_outcome_fd_fi([&](double t) { return detail::ghz_zero(n, m, t); }, theta, h);
}

// Every qubit read in the X basis with independent flips; FI of the full 2^n outcome record.
inline double ghz_local_readout_fi(int n, double m, double theta, double h = 1e-6) {
    const Eigen::Index N = Eigen::Index(1) << n;
    auto dist = [&](double t) {
        CVec psi = CVec::Zero(N);
        psi(0) = std::exp(cplx(0.0, -t * n)) / std::sqrt(2.0);
        psi(N - 1) = std::exp(cplx(0.0, t * n)) / std::sqrt(2.0);
        for (int q = 0; q < n; ++q) {
            const Eigen::Index stride = Eigen::Index(1) << q;
            for (Eigen::Index x = 0; x < N; ++x)
                if (!(x & stride)) {
                    cplx a = psi(x), b = psi(x + stride);
                    psi(x) = (a + b) / std::sqrt(2.0);
                    psi(x + stride) = (a - b) / std::sqrt(2.0);
                }
        }
        RVec p = psi.cwiseAbs2();
        for (int q = 0; q < n; ++q) {
            const Eigen::Index stride = Eigen::Index(1) << q;
            for (Eigen::Index x = 0; x < N; ++x)
                if (!(x & stride)) {
                    double a = p(x), b = p(x + stride);
                    p(x) = (1.0 - m) * a + m * b;
                    p(x + stride) = m * a + (1.0 - m) * b;
                }
        }
        return p;
    };
    RVec p = dist(theta);
    RVec dp = (dist(theta + h) - dist(theta - h)) / (2.0 * h);
    return plain_fi(p, dp);
}

inline double binomial_cdf(int n, double p, int k) {
    if (k < 0) return 0.0;
    if (k >= n) return 1.0;
    boost::math::binomial_distribution<double> dist(n, p);
    return boost::math::cdf(dist, k);
}

// d/dtheta Pr(Bin(n, sin^2 theta) <= K) by centered differences.
inline double sorting_derivative(int n, double theta, int K, double h = 1e-7) {
    auto f = [&](double t) { return binomial_cdf(n, std::pow(std::sin(t), 2), K); };
    return (f(theta + h) - f(theta - h)) / (2.0 * h);
}

}  // namespace qpfi::oracle
