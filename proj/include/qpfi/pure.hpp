#pragma once

#include "core.hpp"
#include "fisher.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace qpfi {

struct GammaResult {
    double gamma = 0.0;
    std::optional<std::pair<int, int>> pair;  // 0-based basis indices
    std::optional<double> p_star;
    CVec phi;
    CVec phi_perp;
    bool attainable = true;
    bool trivial = false;
    double residual = 0.0;  // |LHS - RHS| of the stationarity equation at p_star
};

namespace detail {

inline void set_pair_states(GammaResult& g, int d, int k, int l, double p) {
    g.phi = CVec::Zero(d);
    g.phi_perp = CVec::Zero(d);
    g.phi(k) = std::sqrt(p);
    g.phi(l) = std::sqrt(1.0 - p);
    g.phi_perp(k) = std::sqrt(1.0 - p);
    g.phi_perp(l) = -std::sqrt(p);
}

inline void check_unit_interval(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) fail(ErrorKind::InvalidArgument, std::string(what) + " lies in [0,1]");
}

}  // namespace detail

inline GammaResult gamma_binary_qubit(double m1, double m2) {
    detail::check_unit_interval(m1, "m1");
    detail::check_unit_interval(m2, "m2");
    if (m1 == m2) fail(ErrorKind::TrivialMeasurement, "m1 differs from m2");
    if (m1 < m2) fail(ErrorKind::InvalidArgument, "m1 > m2 (relabel outcomes otherwise)");

    GammaResult g;
    g.pair = std::make_pair(0, 1);
    const double a = std::sqrt(m1 * (1.0 - m1));
    const double b = std::sqrt(m2 * (1.0 - m2));
    const double fid = std::sqrt(m1 * m2) + std::sqrt((1.0 - m1) * (1.0 - m2));
    g.gamma = 1.0 - fid * fid;

    if (m1 == 1.0 && m2 == 0.0) {
        g.p_star = 0.5;
        detail::set_pair_states(g, 2, 0, 1, 0.5);
        return g;
    }
    double p = b / (a + b);
    if (m2 == 0.0 || m1 == 1.0) {
        // supremum approached as p -> 0 (resp. 1) but never reached
        g.attainable = false;
        detail::set_pair_states(g, 2, 0, 1, p);
        return g;
    }
    g.p_star = p;
    detail::set_pair_states(g, 2, 0, 1, p);
    return g;
}

inline GammaResult gamma_binary_qudit(const RVec& m) {
    if (m.size() < 2) fail(ErrorKind::InvalidArgument, "at least two basis states");
    for (Eigen::Index j = 0; j < m.size(); ++j) detail::check_unit_interval(m(j), "effect entry");
    Eigen::Index k = 0, l = 0;
    m.maxCoeff(&k);
    m.minCoeff(&l);
    if (m(k) == m(l)) fail(ErrorKind::TrivialMeasurement, "effect entries are not all equal");
    GammaResult q = gamma_binary_qubit(m(k), m(l));
    GammaResult g = q;
    g.pair = std::make_pair(static_cast<int>(k), static_cast<int>(l));
    const int d = static_cast<int>(m.size());
    g.phi = CVec::Zero(d);
    g.phi_perp = CVec::Zero(d);
    g.phi(k) = q.phi(0);
    g.phi(l) = q.phi(1);
    g.phi_perp(k) = q.phi_perp(0);
    g.phi_perp(l) = q.phi_perp(1);
    return g;
}

namespace detail {

// Terms of one column pair, ordered canonically so the result does not depend on outcome
// order or on which column is called k.
struct PairTerms {
    std::vector<std::pair<double, double>> t;  // (a_i, b_i), zero-zero rows removed
    bool swapped = false;                        // a is the second column
};

inline PairTerms canonical_terms(const RVec& mk, const RVec& ml) {
    std::vector<std::pair<double, double>> x, y;
    for (Eigen::Index i = 0; i < mk.size(); ++i) {
        if (mk(i) == 0.0 && ml(i) == 0.0) continue;
        x.emplace_back(mk(i), ml(i));
        y.emplace_back(ml(i), mk(i));
    }
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    PairTerms pt;
    if (y < x) {
        pt.t = std::move(y);
        pt.swapped = true;
    } else {
        pt.t = std::move(x);
    }
    return pt;
}

// -d/dp of the pair profile
inline double stationarity(const PairTerms& pt, double p) {
    double h = 0.0;
    const double q = 1.0 - p;
    for (const auto& [a, b] : pt.t) {
        const double diff = a - b;
        const double s = p * a + q * b;
        h += diff * diff * (p * p * a - q * q * b) / (s * s);
    }
    return h;
}

inline double pair_profile(const PairTerms& pt, double p) {
    double g = 0.0;
    const double q = 1.0 - p;
    for (const auto& [a, b] : pt.t) {
        const double diff = a - b;
        g += p * q * diff * diff / (p * a + q * b);
    }
    return g;
}

// Limit of the profile as p -> 1 (at_one) or p -> 0.
inline double pair_profile_edge(const PairTerms& pt, bool at_one) {
    double g = 0.0;
    for (const auto& [a, b] : pt.t) {
        if (at_one && a == 0.0) g += b;
        if (!at_one && b == 0.0) g += a;
    }
    return g;
}

struct PairSolution {
    double gamma;
    double p;  // in the orientation of the caller's (mk, ml)
    bool interior;
    double residual;
};

// Maximizes the pair profile over p in (0,1). Entries may contain zeros; the supremum then may sit
// on the boundary, reported as interior = false.
inline PairSolution solve_pair(const RVec& mk, const RVec& ml) {
    PairTerms pt = canonical_terms(mk, ml);
    constexpr double edge = 1e-14;
    double lo = edge, hi = 1.0 - edge;
    PairSolution s{};
    const double h_lo = stationarity(pt, lo);
    const double h_hi = stationarity(pt, hi);
    if (h_lo >= 0.0 && h_hi > 0.0) {
        s = {pair_profile_edge(pt, false), 0.0, false, 0.0};
    } else if (h_hi <= 0.0 && h_lo < 0.0) {
        s = {pair_profile_edge(pt, true), 1.0, false, 0.0};
    } else {
        double p = 0.5 * (lo + hi);
        double hp = 0.0;
        for (int it = 0; it < 200; ++it) {
            p = 0.5 * (lo + hi);
            if (p <= lo || p >= hi) break;
            hp = stationarity(pt, p);
            if (hp == 0.0) break;
            if (hp < 0.0) lo = p; else hi = p;
        }
        const double r_lo = std::abs(stationarity(pt, lo));
        const double r_hi = std::abs(stationarity(pt, hi));
        hp = std::abs(stationarity(pt, p));
        if (r_lo < hp) { p = lo; hp = r_lo; }
        if (r_hi < hp) { p = hi; hp = r_hi; }
        s = {pair_profile(pt, p), p, true, hp};
    }
    if (pt.swapped) s.p = 1.0 - s.p;
    return s;
}

inline void check_table(const RMat& table, bool strict) {
    if (table.rows() < 1 || table.cols() < 2) fail(ErrorKind::InvalidArgument, "table has at least two columns");
    for (Eigen::Index i = 0; i < table.rows(); ++i)
        for (Eigen::Index j = 0; j < table.cols(); ++j) {
            double v = table(i, j);
            if (strict ? !(v > 0.0) : !(v >= 0.0))
                fail(ErrorKind::NonPositiveEntry, strict ? "all table entries > 0" : "all table entries >= 0");
        }
    for (Eigen::Index j = 0; j < table.cols(); ++j)
        if (!(std::abs(table.col(j).sum() - 1.0) <= 1e-9))
            fail(ErrorKind::NotNormalized, "every table column sums to one");
}

inline GammaResult pair_result(const RVec& mk, const RVec& ml, int d, int k, int l) {
    GammaResult g;
    g.pair = std::make_pair(k, l);
    if ((mk - ml).cwiseAbs().maxCoeff() == 0.0) {
        g.gamma = 0.0;
        g.trivial = true;
        g.attainable = true;
        g.p_star = 0.5;
        set_pair_states(g, d, k, l, 0.5);
        return g;
    }
    PairSolution s = solve_pair(mk, ml);
    g.gamma = std::clamp(s.gamma, 0.0, 1.0);
    g.attainable = s.interior;
    g.residual = s.residual;
    if (s.interior) g.p_star = s.p;
    set_pair_states(g, d, k, l, s.p);
    return g;
}

inline GammaResult best_pair(const RMat& table) {
    const int d = static_cast<int>(table.cols());
    GammaResult best;
    bool have = false;
    for (int k = 0; k < d; ++k)
        for (int l = k + 1; l < d; ++l) {
            GammaResult g = pair_result(table.col(k), table.col(l), d, k, l);
            if (!have || g.gamma > best.gamma) {
                best = g;
                have = true;
            }
        }
    return best;
}

}  // namespace detail

inline GammaResult gamma_pair_commuting(const RVec& mk, const RVec& ml) {
    if (mk.size() != ml.size() || mk.size() < 1) fail(ErrorKind::LengthMismatch, "columns have equal length");
    RMat t(mk.size(), 2);
    t.col(0) = mk;
    t.col(1) = ml;
    detail::check_table(t, true);
    return detail::pair_result(mk, ml, 2, 0, 1);
}

inline GammaResult gamma_commuting(const RMat& table) {
    detail::check_table(table, true);
    return detail::best_pair(table);
}

struct GammaUpperBound {
    double value = 0.0;
    bool tight = false;
    std::pair<int, int> pair{0, 1};
};

inline GammaUpperBound gamma_upper_bound(const RMat& table) {
    detail::check_table(table, true);
    GammaUpperBound ub;
    double best_fid = std::numeric_limits<double>::infinity();
    for (int k = 0; k < table.cols(); ++k)
        for (int l = k + 1; l < table.cols(); ++l) {
            double f = (table.col(k).cwiseProduct(table.col(l))).cwiseSqrt().sum();
            if (f < best_fid) {
                best_fid = f;
                ub.pair = {k, l};
            }
        }
    ub.value = std::max(0.0, 1.0 - best_fid * best_fid);
    std::vector<double> ratios;
    for (Eigen::Index i = 0; i < table.rows(); ++i)
        ratios.push_back(table(i, ub.pair.first) / table(i, ub.pair.second));
    std::sort(ratios.begin(), ratios.end());
    int distinct = 1;
    for (size_t i = 1; i < ratios.size(); ++i)
        if (ratios[i] - ratios[i - 1] > 1e-9 * std::max(std::abs(ratios[i]), std::abs(ratios[i - 1]))) ++distinct;
    ub.tight = distinct <= 2;
    return ub;
}

inline double gamma_lower_bound(const RMat& table) {
    detail::check_table(table, true);
    double best = 0.0;
    for (int k = 0; k < table.cols(); ++k)
        for (int l = k + 1; l < table.cols(); ++l) {
            double s = 0.0;
            for (Eigen::Index i = 0; i < table.rows(); ++i) {
                double diff = table(i, k) - table(i, l);
                s += diff * diff / (2.0 * (table(i, k) + table(i, l)));
            }
            best = std::max(best, s);
        }
    return best;
}

struct NumericGamma {
    double value = 0.0;
    CVec phi;
    CVec phi_perp;
    int best_restart = 0;
};

namespace detail {

struct NumericProblem {
    const std::vector<HermitianOperator>* effects;
    int d;
};

inline CMat unitary_from_params(const double* x, int d) {
    CMat A = CMat::Zero(d, d);
    int c = 0;
    for (int i = 0; i < d; ++i) A(i, i) = x[c++];
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            A(i, j) = cplx(x[c], x[c + 1]);
            A(j, i) = std::conj(A(i, j));
            c += 2;
        }
    return linalg::expm_i(A, -1.0);  // exp(iA)
}

inline double pair_objective(const std::vector<HermitianOperator>& effects, const CVec& phi, const CVec& perp) {
    double s = 0.0;
    for (const auto& e : effects) {
        CVec mp = e.matrix() * perp;
        double num = phi.dot(mp).real();
        double den = phi.dot(e.matrix() * phi).real();
        if (den > 1e-13) s += num * num / den;
    }
    return s;
}

inline double numeric_cost(const gsl_vector* v, void* params) {
    auto* prob = static_cast<NumericProblem*>(params);
    CMat U = unitary_from_params(v->data, prob->d);
    return -pair_objective(*prob->effects, U.col(0), U.col(1));
}

inline double nelder_mead(NumericProblem& prob, std::vector<double>& x, double step) {
    const size_t n = x.size();
    gsl_multimin_function fn{&numeric_cost, n, &prob};
    gsl_vector* v = gsl_vector_alloc(n);
    gsl_vector* ss = gsl_vector_alloc(n);
    for (size_t i = 0; i < n; ++i) gsl_vector_set(v, i, x[i]);
    gsl_vector_set_all(ss, step);
    gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
    gsl_multimin_fminimizer_set(s, &fn, v, ss);
    for (int it = 0; it < 20000; ++it) {
        if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-11) == GSL_SUCCESS) break;
    }
    for (size_t i = 0; i < n; ++i) x[i] = gsl_vector_get(s->x, i);
    double f = s->fval;
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(v);
    gsl_vector_free(ss);
    return -f;
}

}  // namespace detail

inline NumericGamma gamma_numeric(const Povm& povm, int restarts = 32, std::uint64_t seed = 0) {
    if (restarts < 1) fail(ErrorKind::InvalidArgument, "restarts >= 1");
    const int d = povm.dim();
    detail::NumericProblem prob{&povm.effects(), d};
    std::mt19937_64 rng(seed ^ 0x6a09e667f3bcc909ULL);
    std::normal_distribution<double> nd(0.0, 1.0);
    NumericGamma best;
    best.value = -1.0;
    for (int r = 0; r < restarts; ++r) {
        std::vector<double> x(static_cast<size_t>(d) * d);
        for (auto& v : x) v = nd(rng);
        double val = detail::nelder_mead(prob, x, 0.5);
        for (int polish = 0; polish < 4; ++polish) {
            double again = detail::nelder_mead(prob, x, 0.05);
            bool moved = again > val + 1e-14;
            val = std::max(val, again);
            if (!moved) break;
        }
        if (val > best.value) {
            CMat U = detail::unitary_from_params(x.data(), d);
            best.value = val;
            best.phi = U.col(0);
            best.phi_perp = U.col(1);
            best.best_restart = r;
        }
    }
    best.value = std::clamp(best.value, 0.0, 1.0);
    return best;
}

enum class GammaSource { ClosedForm, RootFinding, BoundaryLimit, Numeric };

inline std::string_view to_string(GammaSource s) {
    switch (s) {
        case GammaSource::ClosedForm: return "closed-form";
        case GammaSource::RootFinding: return "root-finding";
        case GammaSource::BoundaryLimit: return "boundary-limit";
        case GammaSource::Numeric: return "numeric";
    }
    return "unknown";
}

struct GammaEvaluation {
    GammaResult result;
    GammaSource source = GammaSource::ClosedForm;
    bool heuristic = false;  // numeric value: only a lower estimate of the true gamma
};

// gamma of an arbitrary measurement, picking the exact route when one exists.
inline GammaEvaluation gamma_of_povm(const Povm& povm, int restarts = 32, std::uint64_t seed = 0) {
    GammaEvaluation ev;
    if (povm.diagonal()) {
        const RMat& t = povm.table();
        const CMat& V = povm.basis();
        if (t.rows() == 2) {
            ev.result = gamma_binary_qudit(t.row(0).transpose());
            ev.source = GammaSource::ClosedForm;
        } else if (t.minCoeff() > 0.0) {
            ev.result = detail::best_pair(t);
            ev.source = GammaSource::RootFinding;
        } else {
            ev.result = detail::best_pair(t.cwiseMax(0.0));
            ev.source = GammaSource::BoundaryLimit;
        }
        if (!povm.computational_basis()) {
            ev.result.phi = V * ev.result.phi;
            ev.result.phi_perp = V * ev.result.phi_perp;
        }
        return ev;
    }
    NumericGamma ng = gamma_numeric(povm, restarts, seed);
    ev.result.gamma = ng.value;
    ev.result.phi = ng.phi;
    ev.result.phi_perp = ng.phi_perp;
    ev.result.attainable = true;
    ev.source = GammaSource::Numeric;
    ev.heuristic = true;
    return ev;
}

inline double qupfi_pure(const StateFamily& family, const Povm& povm) {
    if (!family.is_pure()) fail(ErrorKind::NotPure, "family is pure");
    if (family.dim() != povm.dim()) fail(ErrorKind::DimensionMismatch, "family and measurement share a dimension");
    return gamma_of_povm(povm).result.gamma * qfi(family);
}

struct ConditionReport {
    double residual_first = 0.0;   // ||X phi - phi_perp / (2 sqrt(n))||
    double residual_second = 0.0;  // ||(<X2> X^2 - <X^2> X2) phi||
    bool passed = false;
};

inline ConditionReport verify_necessary_conditions(const CVec& phi, const CVec& phi_perp, const ErrorVector& x,
                                                   const Povm& povm, double n_norm) {
    if (phi.size() != povm.dim() || phi_perp.size() != povm.dim())
        fail(ErrorKind::DimensionMismatch, "states match the measurement dimension");
    if (!(n_norm > 0.0)) fail(ErrorKind::InvalidArgument, "normalization factor is positive");
    ErrorObservables eo = error_observables(povm, x);
    const CMat& X = eo.X.matrix();
    const CMat& X2 = eo.X2.matrix();
    CMat Xsq = X * X;
    ConditionReport rep;
    rep.residual_first = (X * phi - phi_perp / (2.0 * std::sqrt(n_norm))).norm();
    cplx e2 = phi.dot(X2 * phi);
    cplx esq = phi.dot(Xsq * phi);
    rep.residual_second = ((e2 * Xsq - esq * X2) * phi).norm();
    rep.passed = rep.residual_first < 1e-7 && rep.residual_second < 1e-7;
    return rep;
}

}  // namespace qpfi
