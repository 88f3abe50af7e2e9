#pragma once

#include "choi.hpp"
#include "classical.hpp"
#include "core.hpp"
#include "fisher.hpp"
#include "pure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace qpfi {

inline Povm regularize_povm(const Povm& povm, double eps) {
    if (!(eps > 0.0 && eps <= 1.0)) fail(ErrorKind::InvalidArgument, "eps lies in (0,1]");
    const int d = povm.dim();
    std::vector<CMat> eff;
    for (const auto& e : povm.effects()) {
        double tr = e.matrix().trace().real();
        eff.push_back((1.0 - eps) * e.matrix() + (eps * tr / d) * CMat::Identity(d, d));
    }
    return Povm::allow_trivial(eff);
}

inline FisherReport channel_fi(const StateFamily& family, const ChoiMatrix& omega, const Povm& povm) {
    if (omega.dim_in() != family.dim() || omega.dim_out() != povm.dim())
        fail(ErrorKind::DimensionMismatch, "channel connects the family to the measurement");
    CMat r = omega.apply(family.rho().matrix());
    CMat dr = omega.apply(family.drho().matrix());
    RVec p(povm.outcomes()), dp(povm.outcomes());
    for (int i = 0; i < povm.outcomes(); ++i) {
        p(i) = linalg::trace_re(r, povm.effect(i).matrix());
        dp(i) = linalg::trace_re(dr, povm.effect(i).matrix());
    }
    return classical_fi(p, dp);
}

struct AcsConfig {
    int restarts = 20;
    int max_alternations = 500;
    double objective_tol = 1e-9;
    int sdp_max_iters = 5000;
    double sdp_tol = 1e-9;
    std::uint64_t seed = 0;
    double x_box = 1e6;
    int threads = 1;
    int sdp_chunk = 50;  // ADMM iterations between improvement checks

    void validate() const {
        if (restarts < 1 || max_alternations < 1 || sdp_max_iters < 1 || sdp_chunk < 1 || threads < 1)
            fail(ErrorKind::InvalidArgument, "solver counts are positive");
        if (!(objective_tol > 0.0 && sdp_tol > 0.0 && x_box > 0.0))
            fail(ErrorKind::InvalidArgument, "solver tolerances are positive");
    }
};

struct KktResiduals {
    double trace_out = 0.0;       // max |Tr_out(omega) - I|
    double min_eigenvalue = 0.0;  // of omega
    double unbiased_mean = 0.0;   // |tr(E(rho) X)|
    double unbiased_slope = 0.0;  // |tr(E(drho) X) - 1|
    double admm_primal = 0.0;     // last channel step, ||omega_affine - omega_psd||_F
    double admm_dual = 0.0;
};

struct AcsReport {
    double value = 0.0;
    ChoiMatrix omega;
    ErrorVector x;
    std::vector<double> objective_trace;  // 1/F after each accepted alternation, best restart
    KktResiduals kkt;
    int restart_best = 0;
    std::vector<double> restart_values;
    int alternations = 0;
    bool x_box_hit = false;
    bool stalled = false;  // no relative progress above tolerance over 50 alternations
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct AcsProblem {
    int din, dout, r;
    std::vector<CMat> A;  // M_i (x) rho^T
    std::vector<CMat> B;  // M_i (x) drho^T

    AcsProblem(const StateFamily& family, const Povm& povm)
        : din(family.dim()), dout(povm.dim()), r(povm.outcomes()) {
        CMat rt = family.rho().matrix().transpose();
        CMat drt = family.drho().matrix().transpose();
        for (const auto& e : povm.effects()) {
            A.push_back(linalg::kron(e.matrix(), rt));
            B.push_back(linalg::kron(e.matrix(), drt));
        }
    }

    int n() const { return din * dout; }

    void distribution(const CMat& omega, RVec& p, RVec& dp) const {
        p.resize(r);
        dp.resize(r);
        for (int i = 0; i < r; ++i) {
            p(i) = linalg::trace_re(A[i], omega);
            dp(i) = linalg::trace_re(B[i], omega);
        }
    }

    double fisher(const CMat& omega) const {
        RVec p, dp;
        distribution(omega, p, dp);
        double f = fi_sum(p.data(), dp.data(), p.size());
        return std::isfinite(f) ? f : 0.0;
    }

    CMat project_affine(const CMat& om) const {
        CMat t = choi::trace_out(om, dout, din) - CMat::Identity(din, din);
        return om - linalg::kron(CMat::Identity(dout, dout), t) / static_cast<double>(dout);
    }

    CMat to_channel(const CMat& z) const {
        CMat zz = z;
        double shift = 1e-14 * std::max(1.0, z.trace().real() / n());
        zz += shift * CMat::Identity(n(), n());
        return choi::normalize(zz, dout, din);
    }
};

struct RestartOutcome {
    double value = 0.0;
    CMat omega;
    std::vector<double> trace;
    int alternations = 0;
    bool box_hit = false;
    bool stalled = false;
    double admm_primal = 0.0;
    double admm_dual = 0.0;
};

inline RestartOutcome run_restart(const AcsProblem& pb, const AcsConfig& cfg, int index) {
    const int n = pb.n();
    std::mt19937_64 rng(splitmix64(cfg.seed + 0x632be59bd9b4e019ULL * static_cast<std::uint64_t>(index + 1)));
    std::normal_distribution<double> nd(0.0, 1.0);
    CMat g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = cplx(nd(rng), nd(rng));
    RestartOutcome out;
    out.omega = pb.to_channel(g * g.adjoint());
    out.value = pb.fisher(out.omega);
    out.trace.push_back(out.value > 0.0 ? 1.0 / out.value : std::numeric_limits<double>::infinity());

    int since_progress = 0;
    RVec p, dp;
    for (int alt = 0; alt < cfg.max_alternations; ++alt) {
        out.alternations = alt + 1;
        // x-step: unnormalized optimal errors dp/p
        pb.distribution(out.omega, p, dp);
        const double F = out.value;
        if (!(F > 0.0)) {
            // no information yet: any channel is stationary for the linearization, so re-draw
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) g(i, j) = cplx(nd(rng), nd(rng));
            out.omega = pb.to_channel(g * g.adjoint());
            out.value = pb.fisher(out.omega);
            continue;
        }
        RVec x = RVec::Zero(pb.r);
        for (int i = 0; i < pb.r; ++i) {
            if (p(i) <= tol::prob_cutoff) continue;
            x(i) = dp(i) / p(i);
            const double cap = cfg.x_box * F;
            if (std::abs(x(i)) > cap) {
                x(i) = std::copysign(cap, x(i));
                out.box_hit = true;
            }
        }
        // channel step: maximize tr(W omega) over channels
        CMat W = CMat::Zero(n, n);
        for (int i = 0; i < pb.r; ++i) W += 2.0 * x(i) * pb.B[i] - x(i) * x(i) * pb.A[i];
        const double wn = W.norm();
        if (!(wn > 0.0)) break;
        const double rho_p = wn / n;
        CMat Z = out.omega, U = CMat::Zero(n, n), Om;
        bool accepted = false;
        double cand_value = 0.0;
        CMat cand;
        for (int it = 0; it < cfg.sdp_max_iters;) {
            const int stop = std::min(cfg.sdp_max_iters, it + cfg.sdp_chunk);
            CMat Zprev = Z;
            for (; it < stop; ++it) {
                Zprev = Z;
                Om = pb.project_affine(Z - U + W / rho_p);
                Z = linalg::psd_project(Om + U);
                U += Om - Z;
            }
            out.admm_primal = (Om - Z).norm();
            out.admm_dual = rho_p * (Z - Zprev).norm();
            cand = pb.to_channel(Z);
            cand_value = pb.fisher(cand);
            if (cand_value > F * (1.0 + 1e-12)) {
                accepted = true;
                break;
            }
            if (out.admm_primal <= cfg.sdp_tol * std::max(1.0, Z.norm()) && out.admm_dual <= cfg.sdp_tol * wn) break;
        }
        if (!accepted) break;
        if (!cand.allFinite()) fail(ErrorKind::NoFeasiblePoint, "channel step produced a finite channel");
        const double rel = (cand_value - F) / F;
        out.omega = cand;
        out.value = cand_value;
        out.trace.push_back(1.0 / cand_value);
        if (rel < cfg.objective_tol) break;
        since_progress = rel < 1e-6 ? since_progress + 1 : 0;
        if (since_progress >= 50) out.stalled = true;
    }
    return out;
}

}  // namespace detail

inline AcsReport acs_solve(const StateFamily& family, const Povm& povm, const AcsConfig& cfg = {}) {
    cfg.validate();
    if (!povm.strictly_positive()) fail(ErrorKind::SingularPovm, "every effect is strictly positive");
    detail::AcsProblem pb(family, povm);

    std::vector<detail::RestartOutcome> runs(cfg.restarts);
    if (cfg.threads <= 1) {
        for (int r = 0; r < cfg.restarts; ++r) runs[r] = detail::run_restart(pb, cfg, r);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < cfg.threads; ++w)
            pool.emplace_back([&, w] {
                for (int r = w; r < cfg.restarts; r += cfg.threads) runs[r] = detail::run_restart(pb, cfg, r);
            });
        for (auto& t : pool) t.join();
    }

    AcsReport rep;
    int best = 0;
    for (int r = 0; r < cfg.restarts; ++r) {
        rep.restart_values.push_back(runs[r].value);
        if (runs[r].value > runs[best].value) best = r;
    }
    const auto& b = runs[best];
    rep.value = b.value;
    rep.restart_best = best;
    rep.objective_trace = b.trace;
    rep.alternations = b.alternations;
    rep.stalled = b.stalled;
    for (const auto& run : runs) rep.x_box_hit = rep.x_box_hit || run.box_hit;
    rep.omega = ChoiMatrix(pb.din, pb.dout, b.omega);

    RVec p, dp;
    pb.distribution(b.omega, p, dp);
    rep.x = RVec::Zero(pb.r);
    if (b.value > 0.0)
        for (int i = 0; i < pb.r; ++i)
            if (p(i) > tol::prob_cutoff) rep.x(i) = dp(i) / p(i) / b.value;
    rep.kkt.trace_out = linalg::max_abs(CMat(choi::trace_out(b.omega, pb.dout, pb.din) - CMat::Identity(pb.din, pb.din)));
    rep.kkt.min_eigenvalue = linalg::min_eigenvalue(b.omega);
    rep.kkt.unbiased_mean = std::abs(p.dot(rep.x));
    rep.kkt.unbiased_slope = std::abs(dp.dot(rep.x) - 1.0);
    rep.kkt.admm_primal = b.admm_primal;
    rep.kkt.admm_dual = b.admm_dual;
    return rep;
}

enum class LimitSolver { Pure, Classical, Acs };

inline std::string_view to_string(LimitSolver s) {
    switch (s) {
        case LimitSolver::Pure: return "pure";
        case LimitSolver::Classical: return "classical";
        case LimitSolver::Acs: return "acs";
    }
    return "unknown";
}

struct LimitReport {
    double value = 0.0;
    std::vector<double> eps;
    std::vector<double> values;
    bool monotone = false;  // values nondecreasing as eps shrinks
    LimitSolver solver = LimitSolver::Acs;
};

namespace detail {

inline bool classically_mixed(const StateFamily& family, const Povm& povm) {
    return linalg::is_diagonal(family.rho().matrix(), 1e-12) && linalg::is_diagonal(family.drho().matrix(), 1e-12) &&
           povm.diagonal() && povm.computational_basis();
}

// Least-squares polynomial in sqrt(eps), evaluated at eps = 0.
inline double extrapolate_sqrt(const std::vector<double>& eps, const std::vector<double>& v) {
    const int n = static_cast<int>(eps.size());
    const int deg = std::min(2, n - 1);
    Eigen::MatrixXd A(n, deg + 1);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        double s = std::sqrt(eps[i]);
        for (int j = 0; j <= deg; ++j) A(i, j) = std::pow(s, j);
        y(i) = v[i];
    }
    Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
    return c(0);
}

}  // namespace detail

inline LimitReport qpfi_via_limit(const StateFamily& family, const Povm& povm, const std::vector<double>& eps_list,
                                  const AcsConfig& cfg = {}) {
    if (eps_list.size() < 3) fail(ErrorKind::InvalidArgument, "at least three regularization levels");
    for (size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0.0 && eps_list[i] <= 1.0)) fail(ErrorKind::InvalidArgument, "eps values lie in (0,1]");
        if (i > 0 && !(eps_list[i] < eps_list[i - 1])) fail(ErrorKind::InvalidArgument, "eps values strictly decrease");
    }
    if (family.dim() != povm.dim() && family.is_pure())
        fail(ErrorKind::DimensionMismatch, "pure route needs matching dimensions");
    LimitReport rep;
    const double budget_count = std::pow(static_cast<double>(povm.dim()), static_cast<double>(family.dim()));
    if (family.is_pure() && family.dim() == povm.dim()) {
        rep.solver = LimitSolver::Pure;
    } else if (detail::classically_mixed(family, povm) && budget_count <= 1e7) {
        rep.solver = LimitSolver::Classical;
    } else {
        rep.solver = LimitSolver::Acs;
    }
    for (double e : eps_list) {
        Povm reg = regularize_povm(povm, e);
        double v = 0.0;
        switch (rep.solver) {
            case LimitSolver::Pure: v = qupfi_pure(family, reg); break;
            case LimitSolver::Classical: {
                ClassicalInstance inst(family.rho().matrix().diagonal().real(), family.drho().matrix().diagonal().real(),
                                       reg.table());
                v = qpfi_classical_exhaustive(inst).value;
                break;
            }
            case LimitSolver::Acs: v = acs_solve(family, reg, cfg).value; break;
        }
        rep.eps.push_back(e);
        rep.values.push_back(v);
    }
    rep.monotone = true;
    for (size_t i = 1; i < rep.values.size(); ++i)
        if (rep.values[i] < rep.values[i - 1] - 1e-12) rep.monotone = false;
    rep.value = detail::extrapolate_sqrt(rep.eps, rep.values);
    return rep;
}

struct DilationDims {
    int dim_a1 = 0;
    int dim_a2 = 0;
};

inline DilationDims dilation_dims(int D, int d) {
    if (D < 1 || d < 1) fail(ErrorKind::InvalidArgument, "dimensions are positive");
    int a1 = d * d;
    while ((static_cast<long long>(a1) * D) % d != 0) ++a1;
    return {a1, static_cast<int>(static_cast<long long>(a1) * D / d)};
}

}  // namespace qpfi
