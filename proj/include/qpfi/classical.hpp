#pragma once

#include "choi.hpp"
#include "core.hpp"
#include "fisher.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace qpfi {

class StochasticMatrix {
public:
    StochasticMatrix() = default;

    explicit StochasticMatrix(const RMat& p) : p_(p) {
        if (p.rows() < 1 || p.cols() < 1) fail(ErrorKind::DimensionMismatch, "matrix is nonempty");
        if (!(p.minCoeff() >= 0.0)) fail(ErrorKind::NotStochastic, "entries are nonnegative");
        for (Eigen::Index k = 0; k < p.cols(); ++k)
            if (!(std::abs(p.col(k).sum() - 1.0) <= 1e-12)) fail(ErrorKind::NotStochastic, "every column sums to one");
    }

    // column k is sent to row assignment[k]
    static StochasticMatrix from_assignment(const std::vector<int>& assignment, int rows) {
        RMat p = RMat::Zero(rows, static_cast<Eigen::Index>(assignment.size()));
        for (size_t k = 0; k < assignment.size(); ++k) p(assignment[k], static_cast<Eigen::Index>(k)) = 1.0;
        return StochasticMatrix(p);
    }

    int rows() const { return static_cast<int>(p_.rows()); }
    int cols() const { return static_cast<int>(p_.cols()); }
    const RMat& matrix() const { return p_; }

    bool doubly_stochastic(double eps = 1e-12) const {
        if (p_.rows() != p_.cols()) return false;
        for (Eigen::Index l = 0; l < p_.rows(); ++l)
            if (std::abs(p_.row(l).sum() - 1.0) > eps) return false;
        return true;
    }

    bool indicator(double eps = 1e-12) const {
        for (Eigen::Index i = 0; i < p_.size(); ++i) {
            double v = p_.data()[i];
            if (std::abs(v) > eps && std::abs(v - 1.0) > eps) return false;
        }
        return true;
    }

private:
    RMat p_;
};

class ClassicalInstance {
public:
    ClassicalInstance() = default;

    // m rows are outcomes i, columns are basis states j
    ClassicalInstance(const RVec& lambda, const RVec& dlambda, const RMat& m) : lambda_(lambda), dlambda_(dlambda), m_(m) {
        if (lambda.size() != dlambda.size() || lambda.size() < 1)
            fail(ErrorKind::LengthMismatch, "lambda and dlambda have equal positive length");
        if (!(lambda.minCoeff() >= 0.0)) fail(ErrorKind::NotNormalized, "lambda entries are nonnegative");
        if (!(std::abs(lambda.sum() - 1.0) <= 1e-9)) fail(ErrorKind::NotNormalized, "lambda sums to one");
        if (!(std::abs(dlambda.sum()) <= 1e-9)) fail(ErrorKind::NotNormalized, "dlambda sums to zero");
        if (m.rows() < 1 || m.cols() < 1) fail(ErrorKind::DimensionMismatch, "measurement table is nonempty");
        if (!(m.minCoeff() >= 0.0)) fail(ErrorKind::NonPositiveEntry, "measurement table is nonnegative");
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (!(std::abs(m.col(j).sum() - 1.0) <= 1e-9))
                fail(ErrorKind::NotResolutionOfIdentity, "measurement table columns sum to one");
    }

    int D() const { return static_cast<int>(lambda_.size()); }
    int d() const { return static_cast<int>(m_.cols()); }
    int r() const { return static_cast<int>(m_.rows()); }
    const RVec& lambda() const { return lambda_; }
    const RVec& dlambda() const { return dlambda_; }
    const RMat& m() const { return m_; }

    StateFamily family() const {
        CMat rho = lambda_.cast<cplx>().asDiagonal();
        CMat drho = dlambda_.cast<cplx>().asDiagonal();
        return StateFamily(DensityOperator(rho), HermitianOperator(drho));
    }

    Povm povm() const { return povm_from_table(m_); }

private:
    RVec lambda_;
    RVec dlambda_;
    RMat m_;
};

inline StochasticMatrix kraus_to_stochastic(const std::vector<CMat>& kraus) {
    if (kraus.empty()) fail(ErrorKind::InvalidArgument, "at least one Kraus operator");
    const auto d = kraus.front().rows();
    const auto D = kraus.front().cols();
    CMat completeness = CMat::Zero(D, D);
    RMat p = RMat::Zero(d, D);
    for (const auto& k : kraus) {
        if (k.rows() != d || k.cols() != D) fail(ErrorKind::DimensionMismatch, "Kraus operators share a shape");
        completeness += k.adjoint() * k;
        p += k.cwiseAbs2();
    }
    if (!(linalg::max_abs(CMat(completeness - CMat::Identity(D, D))) <= 1e-9))
        fail(ErrorKind::NotTracePreserving, "sum of K^dagger K is the identity");
    // column sums are exact only up to the completeness tolerance
    for (Eigen::Index k = 0; k < D; ++k) p.col(k) /= p.col(k).sum();
    return StochasticMatrix(p);
}

inline FisherReport stochastic_fi(const ClassicalInstance& inst, const StochasticMatrix& P) {
    if (P.cols() != inst.D() || P.rows() != inst.d())
        fail(ErrorKind::DimensionMismatch, "stochastic matrix maps D basis states to d");
    RVec q = inst.m() * (P.matrix() * inst.lambda());
    RVec dq = inst.m() * (P.matrix() * inst.dlambda());
    return classical_fi(q, dq);
}

struct ClassicalOptimum {
    double value = 0.0;
    StochasticMatrix P;
    std::vector<int> assignment;  // 0-based row per column
    long long evaluated = 0;
};

namespace detail {

inline void check_singular(const ClassicalInstance& inst) {
    for (int k = 0; k < inst.D(); ++k)
        if (inst.lambda()(k) <= tol::prob_cutoff && std::abs(inst.dlambda()(k)) > tol::singular_dp)
            fail(ErrorKind::SingularSupport, "dlambda vanishes where lambda vanishes", "index " + std::to_string(k));
}

struct Enumerator {
    const ClassicalInstance& inst;
    std::vector<int> cols;  // columns that can influence the outcome distribution
    std::vector<RVec> q, dq;
    std::vector<int> current;
    std::vector<int> best;
    double best_value = -1.0;
    long long evaluated = 0;

    void run(size_t depth) {
        if (depth == cols.size()) {
            ++evaluated;
            const RVec& p = q[depth];
            double v = fi_sum(p.data(), dq[depth].data(), p.size());
            if (v > best_value) {
                best_value = v;
                best = current;
            }
            return;
        }
        const int k = cols[depth];
        const double lk = inst.lambda()(k);
        const double dk = inst.dlambda()(k);
        for (int a = 0; a < inst.d(); ++a) {
            current[k] = a;
            q[depth + 1] = q[depth] + lk * inst.m().col(a);
            dq[depth + 1] = dq[depth] + dk * inst.m().col(a);
            run(depth + 1);
        }
        current[k] = 0;
    }
};

}  // namespace detail

inline ClassicalOptimum qpfi_classical_exhaustive(const ClassicalInstance& inst, double budget = 1e7) {
    const double count = std::pow(static_cast<double>(inst.d()), static_cast<double>(inst.D()));
    if (count > budget) fail(ErrorKind::BudgetExceeded, "d^D <= enumeration budget", std::to_string(count));
    detail::check_singular(inst);

    detail::Enumerator en{inst, {}, {}, {}, std::vector<int>(inst.D(), 0), {}, -1.0, 0};
    // columns with lambda = dlambda = 0 never move probability; they stay on row 0
    for (int k = 0; k < inst.D(); ++k)
        if (inst.lambda()(k) != 0.0 || inst.dlambda()(k) != 0.0) en.cols.push_back(k);
    en.q.assign(en.cols.size() + 1, RVec::Zero(inst.r()));
    en.dq.assign(en.cols.size() + 1, RVec::Zero(inst.r()));
    en.best = en.current;
    en.run(0);

    ClassicalOptimum out;
    out.value = std::max(0.0, en.best_value);
    out.assignment = en.best;
    out.P = StochasticMatrix::from_assignment(en.best, inst.d());
    out.evaluated = en.evaluated;
    return out;
}

// Each term (m.P dl)^2/(m.P l) is jointly convex in P, so the maximum over the doubly stochastic
// polytope sits on a vertex, i.e. on a permutation matrix.
inline ClassicalOptimum qupfi_classical_permutation_bound(const ClassicalInstance& inst) {
    if (inst.d() != inst.D()) fail(ErrorKind::DimensionMismatch, "d equals D");
    if (inst.D() > 9) fail(ErrorKind::BudgetExceeded, "D <= 9 for permutation enumeration");
    detail::check_singular(inst);
    const int D = inst.D();
    std::vector<int> perm(D);
    std::iota(perm.begin(), perm.end(), 0);
    ClassicalOptimum out;
    out.value = -1.0;
    RVec q(inst.r()), dq(inst.r());
    do {
        q.setZero();
        dq.setZero();
        for (int k = 0; k < D; ++k) {
            q += inst.lambda()(k) * inst.m().col(perm[k]);
            dq += inst.dlambda()(k) * inst.m().col(perm[k]);
        }
        double v = detail::fi_sum(q.data(), dq.data(), q.size());
        ++out.evaluated;
        if (v > out.value) {
            out.value = v;
            out.assignment = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.P = StochasticMatrix::from_assignment(out.assignment, D);
    return out;
}

struct BinaryScanResult {
    double value = 0.0;
    std::vector<int> t;  // indicator over the original indices
};

inline BinaryScanResult qpfi_classical_binary_qubit(const RVec& lambda, const RVec& dlambda, double m1, double m2) {
    if (lambda.size() != dlambda.size() || lambda.size() < 1)
        fail(ErrorKind::LengthMismatch, "lambda and dlambda have equal positive length");
    if (!(m1 >= 0.0 && m1 <= 1.0 && m2 >= 0.0 && m2 <= 1.0))
        fail(ErrorKind::InvalidArgument, "readout probabilities lie in [0,1]");
    if (!(m2 <= std::min(m1, 1.0 - m1))) fail(ErrorKind::InvalidArgument, "m2 <= min(m1, 1 - m1)");
    const int D = static_cast<int>(lambda.size());

    std::vector<int> idx;
    for (int k = 0; k < D; ++k) {
        if (lambda(k) > 0.0) {
            idx.push_back(k);
        } else if (dlambda(k) != 0.0) {
            fail(ErrorKind::SingularSupport, "dlambda vanishes where lambda vanishes", "index " + std::to_string(k));
        }
    }
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return dlambda(a) / lambda(a) > dlambda(b) / lambda(b); });
    const int n = static_cast<int>(idx.size());

    const double gap = m1 - m2;
    auto f = [&](double s, double ds) {
        double p[2] = {m2 + gap * s, 1.0 - m2 - gap * s};
        double dp[2] = {gap * ds, -gap * ds};
        return detail::fi_sum(p, dp, 2);
    };

    // prefix sums over the first i sorted entries, suffix sums over entries i..n-1
    std::vector<double> ps(n + 1, 0.0), pds(n + 1, 0.0), ss(n + 1, 0.0), sds(n + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        ps[i + 1] = ps[i] + lambda(idx[i]);
        pds[i + 1] = pds[i] + dlambda(idx[i]);
    }
    for (int i = n - 1; i >= 0; --i) {
        ss[i] = ss[i + 1] + lambda(idx[i]);
        sds[i] = sds[i + 1] + dlambda(idx[i]);
    }

    BinaryScanResult best;
    best.value = -1.0;
    int best_i = 0;
    bool best_prefix = true;
    for (int i = 0; i <= n; ++i) {
        double v = f(ps[i], pds[i]);
        if (v > best.value) { best.value = v; best_i = i; best_prefix = true; }
        v = f(ss[i], sds[i]);
        if (v > best.value) { best.value = v; best_i = i; best_prefix = false; }
    }
    best.t.assign(D, 0);
    for (int i = 0; i < n; ++i)
        if (best_prefix ? i < best_i : i >= best_i) best.t[idx[i]] = 1;
    best.value = std::max(0.0, best.value);
    return best;
}

inline ChoiMatrix coarse_graining_channel(const StochasticMatrix& P) {
    if (!P.indicator()) fail(ErrorKind::NotIndicator, "entries are 0 or 1");
    const int d = P.rows(), D = P.cols();
    CMat om = CMat::Zero(d * D, d * D);
    for (int l = 0; l < d; ++l)
        for (int k = 0; k < D; ++k)
            if (P.matrix()(l, k) > 0.5) om(l * D + k, l * D + k) = 1.0;
    return ChoiMatrix(D, d, om);
}

}  // namespace qpfi
