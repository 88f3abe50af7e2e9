#pragma once

#include "classical.hpp"
#include "core.hpp"
#include "fisher.hpp"
#include "pure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qpfi {

struct UpperBound {
    double value = 0.0;
    double gamma = 0.0;
    double qfi = 0.0;
    GammaSource source = GammaSource::ClosedForm;
    bool heuristic = false;
};

inline UpperBound qpfi_upper_general(const StateFamily& family, const Povm& povm) {
    if (family.dim() != povm.dim()) fail(ErrorKind::DimensionMismatch, "family and measurement share a dimension");
    GammaEvaluation ev = gamma_of_povm(povm);
    UpperBound ub;
    ub.gamma = ev.result.gamma;
    ub.qfi = qfi(family);
    ub.value = ub.gamma * ub.qfi;
    ub.source = ev.source;
    ub.heuristic = ev.heuristic;
    return ub;
}

enum class LowerPath { Exhaustive, BinarySplit };

inline std::string_view to_string(LowerPath p) { return p == LowerPath::Exhaustive ? "exhaustive" : "binary-split"; }

struct LowerBound {
    double value = 0.0;
    LowerPath path = LowerPath::Exhaustive;
    int channel_outcomes = 0;        // outcomes of the quantum-classical channel
    std::vector<int> assignment;     // exhaustive: target basis state per channel outcome
    std::pair<int, int> pair{0, 0};  // binary split: basis states used
    std::vector<int> subset;         // binary split: measurement outcomes merged into the first effect
};

namespace detail {

// Basis in which the measurement is read after the quantum-classical channel: the common
// eigenbasis when it exists, else the eigenbasis of the effect with the widest spectrum.
inline CMat readout_basis(const Povm& povm) {
    if (povm.diagonal()) return povm.basis();
    double spread = -1.0;
    CMat best;
    for (const auto& e : povm.effects()) {
        linalg::EigH eg = linalg::eigh(e.matrix());
        double s = eg.values.maxCoeff() - eg.values.minCoeff();
        if (s > spread) {
            spread = s;
            best = eg.vectors;
        }
    }
    return best;
}

inline LowerBound binary_split(const RVec& lambda, const RVec& dlambda, const RMat& table) {
    const int r = static_cast<int>(table.rows());
    const int d = static_cast<int>(table.cols());
    LowerBound lb;
    lb.path = LowerPath::BinarySplit;
    lb.value = -1.0;
    std::vector<unsigned> masks;
    if (r <= 16) {
        for (unsigned m = 1; m + 1 < (1u << r); ++m)
            if (!(m & (1u << (r - 1)))) masks.push_back(m);  // complements give the same split
    } else {
        for (int i = 0; i < r; ++i) masks.push_back(1u << i);
    }
    for (unsigned mask : masks) {
        RVec col = RVec::Zero(d);
        for (int i = 0; i < r; ++i)
            if (mask & (1u << i)) col += table.row(i).transpose();
        for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l) {
                if (k == l) continue;
                double a = col(k), b = col(l);
                // relabel so that the second readout value is the smallest of a, b, 1-a, 1-b
                double m1 = a, m2 = b;
                double c = std::min({a, b, 1.0 - a, 1.0 - b});
                if (c == b) { m1 = a; m2 = b; }
                else if (c == a) { m1 = b; m2 = a; }
                else if (c == 1.0 - a) { m1 = 1.0 - b; m2 = 1.0 - a; }
                else { m1 = 1.0 - a; m2 = 1.0 - b; }
                m1 = std::clamp(m1, 0.0, 1.0);
                m2 = std::clamp(m2, 0.0, std::min(m1, 1.0 - m1));
                BinaryScanResult res = qpfi_classical_binary_qubit(lambda, dlambda, m1, m2);
                if (res.value > lb.value) {
                    lb.value = res.value;
                    lb.pair = {k, l};
                    lb.subset.clear();
                    for (int i = 0; i < r; ++i)
                        if (mask & (1u << i)) lb.subset.push_back(i);
                }
            }
    }
    lb.value = std::max(0.0, lb.value);
    return lb;
}

}  // namespace detail

inline LowerBound qpfi_lower_via_qc(const StateFamily& family, const Povm& povm, double budget = 1e7) {
    Povm T = qfi_attainable_povm(family);
    OutcomeDistribution dist = outcome_distribution(family, T);
    const int D = T.outcomes();
    RVec lambda = dist.p.cwiseMax(0.0);
    lambda /= lambda.sum();
    RVec dlambda = dist.dp;
    dlambda.array() -= dlambda.sum() / D;
    for (int k = 0; k < D; ++k)
        if (lambda(k) <= tol::prob_cutoff && std::abs(dlambda(k)) <= tol::singular_dp) {
            lambda(k) = 0.0;
            dlambda(k) = 0.0;
        }

    const CMat V = detail::readout_basis(povm);
    const int d = povm.dim();
    RMat table(povm.outcomes(), d);
    for (int i = 0; i < povm.outcomes(); ++i) {
        CMat m = V.adjoint() * povm.effect(i).matrix() * V;
        for (int j = 0; j < d; ++j) table(i, j) = std::max(0.0, m(j, j).real());
    }
    for (int j = 0; j < d; ++j) table.col(j) /= table.col(j).sum();

    const double count = std::pow(static_cast<double>(d), static_cast<double>(D));
    if (count <= budget) {
        ClassicalInstance inst(lambda, dlambda, table);
        ClassicalOptimum opt = qpfi_classical_exhaustive(inst, budget);
        LowerBound lb;
        lb.value = opt.value;
        lb.path = LowerPath::Exhaustive;
        lb.channel_outcomes = D;
        lb.assignment = opt.assignment;
        return lb;
    }
    LowerBound lb = detail::binary_split(lambda, dlambda, table);
    lb.channel_outcomes = D;
    return lb;
}

struct Sandwich {
    double lower = 0.0;
    double upper = 0.0;
    LowerBound lower_witness;
    UpperBound upper_witness;
    bool heuristic = false;
};

inline Sandwich sandwich(const StateFamily& family, const Povm& povm) {
    Sandwich s;
    s.upper_witness = qpfi_upper_general(family, povm);
    s.lower_witness = qpfi_lower_via_qc(family, povm);
    s.upper = s.upper_witness.value;
    s.lower = s.lower_witness.value;
    s.heuristic = s.upper_witness.heuristic;
    if (!s.heuristic && !(s.lower <= s.upper + 1e-9))
        fail(ErrorKind::InternalInvariant, "lower bound <= upper bound",
             std::to_string(s.lower) + " > " + std::to_string(s.upper));
    return s;
}

}  // namespace qpfi
