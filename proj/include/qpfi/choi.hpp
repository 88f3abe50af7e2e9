#pragma once

#include "core.hpp"

#include <vector>

namespace qpfi {

namespace choi {

// Tr over the output factor; rows/cols indexed (out j, in k) -> j * din + k
inline CMat trace_out(const CMat& omega, int dout, int din) {
    CMat t = CMat::Zero(din, din);
    for (int j = 0; j < dout; ++j) t += omega.block(j * din, j * din, din, din);
    return t;
}

// E(sigma)_{ab} = sum_{kl} sigma_{kl} omega_{(a,k),(b,l)}
inline CMat apply(const CMat& omega, int dout, int din, const CMat& sigma) {
    CMat out(dout, dout);
    for (int a = 0; a < dout; ++a)
        for (int b = 0; b < dout; ++b)
            out(a, b) = omega.block(a * din, b * din, din, din).cwiseProduct(sigma).sum();
    return out;
}

// Map an arbitrary PSD operator with invertible output-trace onto the channel set by
// congruence with (I (x) T^{-1/2}).
inline CMat normalize(const CMat& omega, int dout, int din) {
    CMat s = linalg::inv_sqrt_pd(trace_out(omega, dout, din));
    CMat k = linalg::kron(CMat::Identity(dout, dout), s);
    return linalg::herm_part(k * omega * k.adjoint());
}

}  // namespace choi

class ChoiMatrix {
public:
    ChoiMatrix() = default;

    ChoiMatrix(int din, int dout, const CMat& entries) : din_(din), dout_(dout) {
        if (din < 1 || dout < 1) fail(ErrorKind::DimensionMismatch, "channel dimensions are positive");
        if (entries.rows() != din * dout || entries.cols() != din * dout)
            fail(ErrorKind::DimensionMismatch, "Choi matrix is (dout*din) square");
        HermitianOperator h(entries);
        double lo = linalg::min_eigenvalue(h.matrix());
        if (!(lo >= -1e-9)) fail(ErrorKind::NotPSD, "Choi matrix eigenvalues >= -1e-9");
        CMat t = choi::trace_out(h.matrix(), dout, din);
        if (!(linalg::max_abs(CMat(t - CMat::Identity(din, din))) <= 1e-8))
            fail(ErrorKind::NotTracePreserving, "partial trace over the output is the identity");
        m_ = h.matrix();
    }

    static ChoiMatrix identity(int d) {
        CVec v = CVec::Zero(d * d);
        for (int k = 0; k < d; ++k) v(k * d + k) = 1.0;
        return ChoiMatrix(d, d, v * v.adjoint());
    }

    static ChoiMatrix depolarizing(int din, int dout) {
        return ChoiMatrix(din, dout, CMat::Identity(din * dout, din * dout) / static_cast<double>(dout));
    }

    // Kraus operators are dout x din
    static ChoiMatrix from_kraus(const std::vector<CMat>& kraus) {
        if (kraus.empty()) fail(ErrorKind::InvalidArgument, "at least one Kraus operator");
        const int dout = static_cast<int>(kraus.front().rows());
        const int din = static_cast<int>(kraus.front().cols());
        CMat om = CMat::Zero(din * dout, din * dout);
        for (const auto& k : kraus) {
            if (k.rows() != dout || k.cols() != din) fail(ErrorKind::DimensionMismatch, "Kraus operators share a shape");
            CVec v(din * dout);
            for (int j = 0; j < dout; ++j)
                for (int i = 0; i < din; ++i) v(j * din + i) = k(j, i);
            om += v * v.adjoint();
        }
        return ChoiMatrix(din, dout, om);
    }

    int dim_in() const { return din_; }
    int dim_out() const { return dout_; }
    const CMat& matrix() const { return m_; }

    CMat apply(const CMat& sigma) const {
        if (sigma.rows() != din_ || sigma.cols() != din_) fail(ErrorKind::DimensionMismatch, "input matches channel");
        return choi::apply(m_, dout_, din_, sigma);
    }

private:
    int din_ = 0;
    int dout_ = 0;
    CMat m_;
};

inline DensityOperator apply_channel(const ChoiMatrix& omega, const DensityOperator& sigma) {
    CMat out = linalg::herm_part(omega.apply(sigma.matrix()));
    // the Choi invariant only holds to 1e-8, so restore the unit trace exactly
    out /= out.trace().real();
    return DensityOperator(out);
}

inline StateFamily apply_channel(const ChoiMatrix& omega, const StateFamily& family) {
    DensityOperator rho = apply_channel(omega, family.rho());
    CMat d = linalg::herm_part(omega.apply(family.drho().matrix()));
    d -= CMat::Identity(d.rows(), d.cols()) * (d.trace().real() / static_cast<double>(d.rows()));
    return StateFamily(rho, HermitianOperator(d));
}

}  // namespace qpfi
