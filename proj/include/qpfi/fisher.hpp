#pragma once

#include "core.hpp"

#include <limits>
#include <vector>

namespace qpfi {

struct FisherReport {
    double value = 0.0;
    RVec per_outcome;
    std::vector<bool> support;
};

struct OutcomeDistribution {
    RVec p;
    RVec dp;
};

namespace detail {

// Sum of dp^2/p over p > cutoff; no normalization checks. Returns +inf on singular support.
inline double fi_sum(const double* p, const double* dp, Eigen::Index n) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (p[i] > tol::prob_cutoff) {
            s += dp[i] * dp[i] / p[i];
        } else if (std::abs(dp[i]) > tol::singular_dp) {
            return std::numeric_limits<double>::infinity();
        }
    }
    return s;
}

}  // namespace detail

inline FisherReport classical_fi(const RVec& p, const RVec& dp) {
    if (p.size() != dp.size()) fail(ErrorKind::LengthMismatch, "p and dp have equal length");
    if (p.size() == 0) fail(ErrorKind::NotNormalized, "probability vector is nonempty");
    if (!(p.minCoeff() >= -tol::prob_cutoff)) fail(ErrorKind::NotNormalized, "probabilities are nonnegative");
    if (!(std::abs(p.sum() - 1.0) <= 1e-9)) fail(ErrorKind::NotNormalized, "probabilities sum to one");
    if (!(std::abs(dp.sum()) <= 1e-9)) fail(ErrorKind::NotNormalized, "derivatives sum to zero");

    FisherReport r;
    r.per_outcome = RVec::Zero(p.size());
    r.support.assign(p.size(), false);
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p(i) > tol::prob_cutoff) {
            r.support[i] = true;
            r.per_outcome(i) = dp(i) * dp(i) / p(i);
            r.value += r.per_outcome(i);
        } else if (std::abs(dp(i)) > tol::singular_dp) {
            fail(ErrorKind::SingularSupport, "derivative vanishes where probability vanishes",
                 "outcome " + std::to_string(i));
        }
    }
    return r;
}

inline OutcomeDistribution outcome_distribution(const StateFamily& family, const Povm& povm) {
    if (family.dim() != povm.dim()) fail(ErrorKind::DimensionMismatch, "family and measurement share a dimension");
    OutcomeDistribution d;
    const int r = povm.outcomes();
    d.p.resize(r);
    d.dp.resize(r);
    if (povm.diagonal()) {
        const CMat& V = povm.basis();
        RVec q, dq;
        if (povm.computational_basis()) {
            q = family.rho().matrix().diagonal().real();
            dq = family.drho().matrix().diagonal().real();
        } else {
            q = (V.adjoint() * family.rho().matrix() * V).diagonal().real();
            dq = (V.adjoint() * family.drho().matrix() * V).diagonal().real();
        }
        d.p = povm.table() * q;
        d.dp = povm.table() * dq;
    } else {
        for (int i = 0; i < r; ++i) {
            d.p(i) = linalg::trace_re(family.rho().matrix(), povm.effect(i).matrix());
            d.dp(i) = linalg::trace_re(family.drho().matrix(), povm.effect(i).matrix());
        }
    }
    return d;
}

inline FisherReport fi(const StateFamily& family, const Povm& povm) {
    OutcomeDistribution d = outcome_distribution(family, povm);
    return classical_fi(d.p, d.dp);
}

namespace detail {

struct SldParts {
    linalg::EigH eig;  // eigen-decomposition of rho, clamped
    CMat drho_eig;     // drho in the rho eigenbasis
};

inline SldParts sld_parts(const StateFamily& family) {
    SldParts s{linalg::eigh(family.rho().matrix()), CMat()};
    for (Eigen::Index i = 0; i < s.eig.values.size(); ++i)
        if (std::abs(s.eig.values(i)) < tol::eig_clamp) s.eig.values(i) = 0.0;
    s.drho_eig = s.eig.vectors.adjoint() * family.drho().matrix() * s.eig.vectors;
    const auto n = s.eig.values.size();
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) {
            double den = s.eig.values(a) + s.eig.values(b);
            if (den <= tol::eig_clamp && std::abs(s.drho_eig(a, b)) > tol::singular_dp)
                fail(ErrorKind::InconsistentDerivative, "drho has no component inside the kernel of rho");
        }
    return s;
}

}  // namespace detail

inline HermitianOperator sld(const StateFamily& family) {
    detail::SldParts s = detail::sld_parts(family);
    const auto n = s.eig.values.size();
    CMat L = CMat::Zero(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) {
            double den = s.eig.values(a) + s.eig.values(b);
            if (den > tol::eig_clamp) L(a, b) = 2.0 * s.drho_eig(a, b) / den;
        }
    return HermitianOperator(linalg::herm_part(s.eig.vectors * L * s.eig.vectors.adjoint()));
}

inline double qfi(const StateFamily& family) {
    detail::SldParts s = detail::sld_parts(family);
    const auto n = s.eig.values.size();
    double j = 0.0;
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) {
            double den = s.eig.values(a) + s.eig.values(b);
            if (den > tol::eig_clamp) j += 2.0 * std::norm(s.drho_eig(a, b)) / den;
        }
    return j;
}

// 4<dpsi|(1-P)|dpsi> for pure families
inline double qfi_pure_norm(const StateFamily& family) { return 4.0 * family.n_norm(); }

inline ErrorVector optimal_error_vector(const StateFamily& family, const Povm& povm) {
    OutcomeDistribution d = outcome_distribution(family, povm);
    FisherReport f = classical_fi(d.p, d.dp);
    if (!(f.value > tol::eig_clamp)) fail(ErrorKind::ZeroInformation, "Fisher information is positive");
    ErrorVector x = ErrorVector::Zero(d.p.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (f.support[i]) x(i) = d.dp(i) / d.p(i) / f.value;
    return x;
}

// Projectors onto the eigenspaces of the SLD; degenerate eigenvalues share one projector.
inline Povm qfi_attainable_povm(const StateFamily& family) {
    HermitianOperator L = sld(family);
    linalg::EigH e = linalg::eigh(L.matrix());
    const int n = family.dim();
    std::vector<CMat> eff;
    int start = 0;
    while (start < n) {
        int stop = start + 1;
        double scale = std::max(1.0, std::abs(e.values(start)));
        while (stop < n && e.values(stop) - e.values(start) <= 1e-9 * scale) ++stop;
        CMat block = e.vectors.middleCols(start, stop - start);
        eff.push_back(block * block.adjoint());
        start = stop;
    }
    if (eff.size() < 2) {
        // L is proportional to identity: any basis attains the QFI; use the eigenbasis of rho
        linalg::EigH r = linalg::eigh(family.rho().matrix());
        eff.clear();
        for (int i = 0; i < n; ++i) eff.push_back(r.vectors.col(i) * r.vectors.col(i).adjoint());
    }
    return Povm(eff);
}

}  // namespace qpfi
