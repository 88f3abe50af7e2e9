#pragma once

#include "errors.hpp"
#include "linalg.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace qpfi {

class HermitianOperator {
public:
    HermitianOperator() = default;

    explicit HermitianOperator(const CMat& m) {
        if (m.rows() != m.cols()) fail(ErrorKind::DimensionMismatch, "operator must be square");
        if (m.rows() == 0) fail(ErrorKind::DimensionMismatch, "operator dimension must be positive");
        double dev = linalg::max_abs(CMat(m - m.adjoint()));
        if (!(dev <= tol::herm))
            fail(ErrorKind::NonHermitian, "entries equal their conjugate transpose",
                 "max deviation " + std::to_string(dev));
        m_ = linalg::herm_part(m);
    }

    static HermitianOperator zero(int d) { return HermitianOperator(CMat::Zero(d, d)); }

    int dim() const { return static_cast<int>(m_.rows()); }
    const CMat& matrix() const { return m_; }

private:
    CMat m_;
};

class DensityOperator {
public:
    DensityOperator() = default;

    explicit DensityOperator(const CMat& m) : h_(m) {
        double tr = h_.matrix().trace().real();
        if (!(std::abs(tr - 1.0) <= tol::unit_trace))
            fail(ErrorKind::NotUnitTrace, "trace equals one", "trace " + std::to_string(tr));
        double lo = linalg::min_eigenvalue(h_.matrix());
        if (!(lo >= tol::psd_floor))
            fail(ErrorKind::NotPSD, "minimum eigenvalue >= -1e-10", "min eigenvalue " + std::to_string(lo));
    }

    int dim() const { return h_.dim(); }
    const CMat& matrix() const { return h_.matrix(); }

private:
    HermitianOperator h_;
};

struct PureVector {
    CVec psi;
    CVec dpsi;
};

class StateFamily {
public:
    StateFamily() = default;

    StateFamily(DensityOperator rho, HermitianOperator drho, bool purity_hint = false)
        : rho_(std::move(rho)), drho_(std::move(drho)), purity_hint_(purity_hint) {
        if (rho_.dim() != drho_.dim()) fail(ErrorKind::DimensionMismatch, "rho and drho share a dimension");
        double tr = drho_.matrix().trace().real();
        if (!(std::abs(tr) <= tol::drho_trace))
            fail(ErrorKind::NotNormalized, "trace(drho) = 0", "trace " + std::to_string(tr));
    }

    static StateFamily pure(const CVec& psi, const CVec& dpsi) {
        if (psi.size() != dpsi.size() || psi.size() == 0)
            fail(ErrorKind::DimensionMismatch, "psi and dpsi share a positive dimension");
        if (!(std::abs(psi.norm() - 1.0) <= tol::pure_match))
            fail(ErrorKind::NotNormalized, "psi is a unit vector");
        double drift = psi.dot(dpsi).real();  // Re<psi|dpsi>
        if (!(std::abs(drift) <= tol::drho_trace))
            fail(ErrorKind::NotNormalized, "Re<psi|dpsi> = 0 (norm preserved)");
        CMat rho = psi * psi.adjoint();
        CMat drho = dpsi * psi.adjoint() + psi * dpsi.adjoint();
        StateFamily f(DensityOperator(rho), HermitianOperator(drho), true);
        f.pure_ = PureVector{psi, dpsi};
        return f;
    }

    int dim() const { return rho_.dim(); }
    const DensityOperator& rho() const { return rho_; }
    const HermitianOperator& drho() const { return drho_; }
    const std::optional<PureVector>& pure_vector() const { return pure_; }
    bool purity_hint() const { return purity_hint_; }

    bool is_pure() const {
        if (pure_) return true;
        double purity = linalg::trace_re(rho_.matrix(), rho_.matrix());
        return std::abs(purity - 1.0) <= tol::pure_match;
    }

    bool degenerate() const { return linalg::max_abs(drho_.matrix()) <= tol::eig_clamp; }

    // <dpsi|(1-|psi><psi|)|dpsi>
    double n_norm() const {
        if (!is_pure()) fail(ErrorKind::NotPure, "family is pure");
        if (pure_) {
            cplx ov = pure_->psi.dot(pure_->dpsi);
            return pure_->dpsi.squaredNorm() - std::norm(ov);
        }
        return linalg::trace_re(drho_.matrix(), drho_.matrix()) / 2.0;
    }

    CVec state_vector() const {
        if (!is_pure()) fail(ErrorKind::NotPure, "family is pure");
        if (pure_) return pure_->psi;
        return linalg::eigh(rho_.matrix()).vectors.rightCols(1);
    }

    // unit vector along the component of dpsi orthogonal to psi (phase fixed by that component)
    CVec psi_perp() const {
        double nn = n_norm();
        if (nn <= tol::eig_clamp) fail(ErrorKind::ZeroInformation, "family has nonzero derivative");
        CVec psi = state_vector();
        CVec dpsi = pure_ ? pure_->dpsi : CVec(drho_.matrix() * psi);
        CVec perp = dpsi - psi * psi.dot(dpsi);
        return perp / perp.norm();
    }

private:
    DensityOperator rho_;
    HermitianOperator drho_;
    bool purity_hint_ = false;
    std::optional<PureVector> pure_;
};

using ErrorVector = RVec;

class Povm {
public:
    Povm() = default;

    explicit Povm(const std::vector<CMat>& effects) { init(effects, false); }

    // Same validation but accepts a measurement whose effects are all proportional to identity.
    static Povm allow_trivial(const std::vector<CMat>& effects) {
        Povm p;
        p.init(effects, true);
        return p;
    }

    int dim() const { return dim_; }
    int outcomes() const { return static_cast<int>(effects_.size()); }
    const std::vector<HermitianOperator>& effects() const { return effects_; }
    const HermitianOperator& effect(int i) const { return effects_.at(i); }

    bool diagonal() const { return table_.has_value(); }
    // rows: outcomes i, columns: basis index j; m_j^{(i)}
    const RMat& table() const {
        if (!table_) fail(ErrorKind::InvalidArgument, "measurement has a common eigenbasis");
        return *table_;
    }
    // columns form the common eigenbasis; identity when effects are diagonal as given
    const CMat& basis() const { return basis_; }
    bool computational_basis() const { return computational_; }
    bool trivial() const { return trivial_; }

    bool strictly_positive(double floor = tol::eig_clamp) const {
        for (const auto& e : effects_)
            if (!(linalg::min_eigenvalue(e.matrix()) > floor)) return false;
        return true;
    }

private:
    void init(const std::vector<CMat>& raw, bool allow_trivial) {
        if (raw.size() < 2) fail(ErrorKind::TrivialMeasurement, "at least two outcomes");
        dim_ = static_cast<int>(raw.front().rows());
        for (const auto& m : raw) {
            if (m.rows() != m.cols() || m.rows() != dim_)
                fail(ErrorKind::DimensionMismatch, "effects are square with a shared dimension");
        }
        CMat sum = CMat::Zero(dim_, dim_);
        effects_.clear();
        for (const auto& m : raw) {
            HermitianOperator h(m);
            double lo = linalg::min_eigenvalue(h.matrix());
            if (!(lo >= tol::psd_floor))
                fail(ErrorKind::NotPSD, "each effect has minimum eigenvalue >= -1e-10",
                     "min eigenvalue " + std::to_string(lo));
            sum += h.matrix();
            effects_.push_back(std::move(h));
        }
        double dev = linalg::max_abs(CMat(sum - CMat::Identity(dim_, dim_)));
        if (!(dev <= tol::povm_sum))
            fail(ErrorKind::NotResolutionOfIdentity, "effects sum to identity", "max deviation " + std::to_string(dev));

        trivial_ = true;
        for (const auto& e : effects_) {
            cplx t = e.matrix().trace() / static_cast<double>(dim_);
            CMat off = e.matrix() - t * CMat::Identity(dim_, dim_);
            if (linalg::max_abs(off) > tol::herm) trivial_ = false;
        }
        if (trivial_ && !allow_trivial)
            fail(ErrorKind::TrivialMeasurement, "at least one effect is not proportional to identity");
        find_common_basis();
    }

    void find_common_basis() {
        table_.reset();
        bool all_diag = true;
        for (const auto& e : effects_) all_diag = all_diag && linalg::is_diagonal(e.matrix(), tol::commute);
        if (all_diag) {
            basis_ = CMat::Identity(dim_, dim_);
            computational_ = true;
        } else {
            computational_ = false;
            for (size_t a = 0; a < effects_.size(); ++a)
                for (size_t b = a + 1; b < effects_.size(); ++b) {
                    const CMat& x = effects_[a].matrix();
                    const CMat& y = effects_[b].matrix();
                    if (linalg::max_abs(CMat(x * y - y * x)) > tol::commute) return;
                }
            std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
            std::uniform_real_distribution<double> u(0.5, 1.5);
            CMat comb = CMat::Zero(dim_, dim_);
            for (const auto& e : effects_) comb += u(rng) * e.matrix();
            basis_ = linalg::eigh(comb).vectors;
            for (const auto& e : effects_)
                if (!linalg::is_diagonal(CMat(basis_.adjoint() * e.matrix() * basis_), tol::commute)) return;
        }
        RMat t(effects_.size(), dim_);
        for (size_t i = 0; i < effects_.size(); ++i) {
            CMat dg = basis_.adjoint() * effects_[i].matrix() * basis_;
            for (int j = 0; j < dim_; ++j) t(i, j) = dg(j, j).real();
        }
        table_ = t;
    }

    int dim_ = 0;
    std::vector<HermitianOperator> effects_;
    std::optional<RMat> table_;
    CMat basis_;
    bool computational_ = false;
    bool trivial_ = false;
};

inline Povm build_povm(const std::vector<CMat>& effects) { return Povm(effects); }

// Diagonal effects M_i = diag(table.row(i)).
inline Povm povm_from_table(const RMat& table) {
    std::vector<CMat> eff;
    for (Eigen::Index i = 0; i < table.rows(); ++i) {
        CMat m = CMat::Zero(table.cols(), table.cols());
        for (Eigen::Index j = 0; j < table.cols(); ++j) m(j, j) = table(i, j);
        eff.push_back(m);
    }
    return Povm(eff);
}

// Two-outcome diagonal measurement with first effect diag(m).
inline Povm binary_povm(const RVec& m) {
    RMat t(2, m.size());
    t.row(0) = m.transpose();
    t.row(1) = (RVec::Ones(m.size()) - m).transpose();
    return povm_from_table(t);
}

struct ErrorObservables {
    HermitianOperator X;
    HermitianOperator X2;
};

inline ErrorObservables error_observables(const Povm& povm, const ErrorVector& x) {
    if (x.size() != povm.outcomes())
        fail(ErrorKind::LengthMismatch, "error vector length equals outcome count");
    CMat X = CMat::Zero(povm.dim(), povm.dim());
    CMat X2 = X;
    for (int i = 0; i < povm.outcomes(); ++i) {
        X += x(i) * povm.effect(i).matrix();
        X2 += x(i) * x(i) * povm.effect(i).matrix();
    }
    return {HermitianOperator(X), HermitianOperator(X2)};
}

inline StateFamily unitary_family_from_generator(const HermitianOperator& H, const CVec& psi0, double theta) {
    if (H.dim() != psi0.size()) fail(ErrorKind::DimensionMismatch, "generator and input state share a dimension");
    if (!(std::abs(psi0.norm() - 1.0) <= tol::pure_match)) fail(ErrorKind::NotNormalized, "psi0 is a unit vector");
    CVec psi = linalg::expm_i(H.matrix(), theta) * psi0;
    CVec dpsi = cplx(0.0, -1.0) * (H.matrix() * psi);
    // remove the rounding-level drift of Re<psi|dpsi>
    dpsi -= psi * cplx(psi.dot(dpsi).real(), 0.0);
    return StateFamily::pure(psi, dpsi);
}

namespace ops {

inline CMat pauli_x() { CMat m(2, 2); m << 0, 1, 1, 0; return m; }
inline CMat pauli_y() { CMat m(2, 2); m << 0, cplx(0, -1), cplx(0, 1), 0; return m; }
inline CMat pauli_z() { CMat m(2, 2); m << 1, 0, 0, -1; return m; }

// sum_j Z_j on n qubits
inline HermitianOperator collective_z(int n) {
    const int d = 1 << n;
    CMat m = CMat::Zero(d, d);
    for (int s = 0; s < d; ++s) {
        int ones = __builtin_popcount(static_cast<unsigned>(s));
        m(s, s) = static_cast<double>(n - 2 * ones);
    }
    return HermitianOperator(m);
}

inline CVec ghz_state(int n) {
    const int d = 1 << n;
    CVec v = CVec::Zero(d);
    v(0) = v(d - 1) = 1.0 / std::sqrt(2.0);
    return v;
}

inline CVec plus_state(int n) {
    const int d = 1 << n;
    return CVec::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
}

}  // namespace ops

}  // namespace qpfi
