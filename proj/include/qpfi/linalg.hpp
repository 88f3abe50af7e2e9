#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <complex>

namespace qpfi {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

namespace tol {
inline constexpr double herm = 1e-10;
inline constexpr double unit_trace = 1e-10;
inline constexpr double psd_floor = -1e-10;
inline constexpr double povm_sum = 1e-9;
inline constexpr double eig_clamp = 1e-12;
inline constexpr double prob_cutoff = 1e-12;
inline constexpr double singular_dp = 1e-9;
inline constexpr double drho_trace = 1e-9;
inline constexpr double pure_match = 1e-9;
inline constexpr double commute = 1e-9;
}  // namespace tol

namespace linalg {

inline double max_abs(const CMat& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }
inline double max_abs(const RMat& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

inline CMat herm_part(const CMat& a) { return (a + a.adjoint()) / 2.0; }

inline CMat kron(const CMat& a, const CMat& b) { return Eigen::kroneckerProduct(a, b).eval(); }

struct EigH {
    RVec values;   // ascending
    CMat vectors;  // columns
};

inline EigH eigh(const CMat& a) {
    Eigen::SelfAdjointEigenSolver<CMat> es(herm_part(a));
    return {es.eigenvalues(), es.eigenvectors()};
}

inline double min_eigenvalue(const CMat& a) {
    if (a.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<CMat> es(herm_part(a), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

inline CMat psd_project(const CMat& a) {
    EigH e = eigh(a);
    RVec v = e.values.cwiseMax(0.0);
    return e.vectors * v.asDiagonal() * e.vectors.adjoint();
}

// exp(-i t A) for Hermitian A
inline CMat expm_i(const CMat& a, double t) {
    EigH e = eigh(a);
    CVec ph(e.values.size());
    for (Eigen::Index i = 0; i < ph.size(); ++i) ph(i) = std::exp(cplx(0.0, -t * e.values(i)));
    return e.vectors * ph.asDiagonal() * e.vectors.adjoint();
}

// A^{-1/2} for positive definite A
inline CMat inv_sqrt_pd(const CMat& a) {
    EigH e = eigh(a);
    RVec v(e.values.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = 1.0 / std::sqrt(e.values(i));
    return e.vectors * v.asDiagonal() * e.vectors.adjoint();
}

inline bool is_diagonal(const CMat& a, double eps) {
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (i != j && std::abs(a(i, j)) > eps) return false;
    return true;
}

inline double trace_re(const CMat& a, const CMat& b) {
    // Re tr(AB) without forming the product
    return (a.transpose().cwiseProduct(b)).sum().real();
}

}  // namespace linalg
}  // namespace qpfi
