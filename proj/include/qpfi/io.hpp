#pragma once

#include "asymptotic.hpp"
#include "biconvex.hpp"
#include "bounds.hpp"
#include "classical.hpp"
#include "core.hpp"
#include "fisher.hpp"
#include "pure.hpp"

#include "json.hpp"

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpfi::io {

using json = nlohmann::json;

// Malformed or unreadable input, as opposed to a domain error.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
}

namespace detail {

inline const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
    return j.at(key);
}

inline std::vector<double> real_list(const json& j, const char* what) {
    if (!j.is_array()) throw InputError(std::string(what) + " must be an array");
    std::vector<double> v;
    for (const auto& e : j) {
        if (!e.is_number()) throw InputError(std::string(what) + " entries must be numbers");
        v.push_back(e.get<double>());
    }
    return v;
}

inline RMat real_rows(const json& j, const char* what) {
    if (!j.is_array() || j.empty()) throw InputError(std::string(what) + " must be a nonempty array of rows");
    const size_t rows = j.size();
    const size_t cols = j.at(0).is_array() ? j.at(0).size() : 0;
    RMat m(rows, cols);
    for (size_t i = 0; i < rows; ++i) {
        std::vector<double> r = real_list(j.at(i), what);
        if (r.size() != cols) throw InputError(std::string(what) + " rows must have equal length");
        for (size_t c = 0; c < cols; ++c) m(i, c) = r[c];
    }
    return m;
}

inline RVec to_rvec(const std::vector<double>& v) { return Eigen::Map<const RVec>(v.data(), v.size()); }

}  // namespace detail

inline CMat matrix_from_json(const json& j) {
    RMat re = detail::real_rows(detail::field(j, "re"), "re");
    RMat im = j.contains("im") ? detail::real_rows(j.at("im"), "im") : RMat::Zero(re.rows(), re.cols());
    if (im.rows() != re.rows() || im.cols() != re.cols()) throw InputError("re and im have equal shapes");
    if (re.rows() != re.cols()) throw InputError("matrix must be square");
    if (j.contains("dim") && j.at("dim").get<long long>() != re.rows()) throw InputError("dim does not match entries");
    CMat m(re.rows(), re.cols());
    m.real() = re;
    m.imag() = im;
    return m;
}

inline json matrix_to_json(const CMat& m) {
    json re = json::array(), im = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json rr = json::array(), ir = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            rr.push_back(m(i, c).real());
            ir.push_back(m(i, c).imag());
        }
        re.push_back(rr);
        im.push_back(ir);
    }
    return {{"dim", m.rows()}, {"re", re}, {"im", im}};
}

inline CVec vector_from_json(const json& j) {
    std::vector<double> re = detail::real_list(detail::field(j, "re"), "re");
    std::vector<double> im = j.contains("im") ? detail::real_list(j.at("im"), "im") : std::vector<double>(re.size(), 0.0);
    if (im.size() != re.size()) throw InputError("re and im have equal lengths");
    CVec v(re.size());
    for (size_t i = 0; i < re.size(); ++i) v(i) = cplx(re[i], im[i]);
    return v;
}

inline json vector_to_json(const CVec& v) {
    json re = json::array(), im = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        re.push_back(v(i).real());
        im.push_back(v(i).imag());
    }
    return {{"re", re}, {"im", im}};
}

inline json real_vector_to_json(const RVec& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

inline Povm povm_from_json(const json& j) {
    const json& eff = detail::field(j, "effects");
    if (!eff.is_array()) throw InputError("effects must be an array");
    std::vector<CMat> ms;
    for (const auto& e : eff) ms.push_back(matrix_from_json(e));
    return Povm(ms);
}

inline json povm_to_json(const Povm& p) {
    json eff = json::array();
    for (const auto& e : p.effects()) eff.push_back(matrix_to_json(e.matrix()));
    return {{"effects", eff}};
}

inline StateFamily family_from_json(const json& j) {
    if (j.contains("psi")) return StateFamily::pure(vector_from_json(j.at("psi")), vector_from_json(detail::field(j, "dpsi")));
    CMat rho = matrix_from_json(detail::field(j, "rho"));
    CMat drho = matrix_from_json(detail::field(j, "drho"));
    return StateFamily(DensityOperator(rho), HermitianOperator(drho));
}

inline json family_to_json(const StateFamily& f) {
    if (f.pure_vector())
        return {{"psi", vector_to_json(f.pure_vector()->psi)}, {"dpsi", vector_to_json(f.pure_vector()->dpsi)}};
    return {{"rho", matrix_to_json(f.rho().matrix())}, {"drho", matrix_to_json(f.drho().matrix())}};
}

inline ClassicalInstance instance_from_json(const json& j) {
    RVec l = detail::to_rvec(detail::real_list(detail::field(j, "lambda"), "lambda"));
    RVec dl = detail::to_rvec(detail::real_list(detail::field(j, "dlambda"), "dlambda"));
    RMat m = detail::real_rows(detail::field(j, "m"), "m");
    return ClassicalInstance(l, dl, m);
}

inline json instance_to_json(const ClassicalInstance& inst) {
    json m = json::array();
    for (Eigen::Index i = 0; i < inst.m().rows(); ++i) m.push_back(real_vector_to_json(inst.m().row(i).transpose()));
    return {{"lambda", real_vector_to_json(inst.lambda())}, {"dlambda", real_vector_to_json(inst.dlambda())}, {"m", m}};
}

inline json to_json(const FisherReport& r) {
    return {{"value", r.value}, {"per_outcome", real_vector_to_json(r.per_outcome)}, {"support", r.support}};
}

inline json to_json(const GammaResult& g) {
    json j = {{"gamma", g.gamma}, {"attainable", g.attainable}, {"trivial", g.trivial}};
    j["p_star"] = g.p_star ? json(*g.p_star) : json(nullptr);
    j["pair"] = g.pair ? json::array({g.pair->first + 1, g.pair->second + 1}) : json(nullptr);
    if (g.phi.size() > 0) {
        j["phi"] = vector_to_json(g.phi);
        j["phi_perp"] = vector_to_json(g.phi_perp);
    }
    if (g.p_star) j["residual"] = g.residual;
    return j;
}

inline json to_json(const AcsReport& r) {
    json kkt = {{"trace_out", r.kkt.trace_out},         {"min_eigenvalue", r.kkt.min_eigenvalue},
                {"unbiased_mean", r.kkt.unbiased_mean}, {"unbiased_slope", r.kkt.unbiased_slope},
                {"admm_primal", r.kkt.admm_primal},     {"admm_dual", r.kkt.admm_dual}};
    return {{"value", r.value},
            {"objective_trace", r.objective_trace},
            {"kkt_residuals", kkt},
            {"restart_best", r.restart_best},
            {"restart_values", r.restart_values},
            {"alternations", r.alternations},
            {"x", real_vector_to_json(r.x)},
            {"x_box_hit", r.x_box_hit},
            {"stalled", r.stalled},
            {"omega", matrix_to_json(r.omega.matrix())}};
}

inline json to_json(const LimitReport& r) {
    return {{"value", r.value},
            {"eps", r.eps},
            {"values", r.values},
            {"monotone", r.monotone},
            {"solver", std::string(to_string(r.solver))}};
}

inline json to_json(const Sandwich& s) {
    json lw = {{"path", std::string(to_string(s.lower_witness.path))},
               {"channel_outcomes", s.lower_witness.channel_outcomes}};
    if (s.lower_witness.path == LowerPath::Exhaustive) {
        json a = json::array();
        for (int v : s.lower_witness.assignment) a.push_back(v + 1);
        lw["assignment"] = a;
    } else {
        lw["pair"] = {s.lower_witness.pair.first + 1, s.lower_witness.pair.second + 1};
        json sub = json::array();
        for (int v : s.lower_witness.subset) sub.push_back(v + 1);
        lw["subset"] = sub;
    }
    json uw = {{"gamma", s.upper_witness.gamma},
               {"qfi", s.upper_witness.qfi},
               {"source", std::string(to_string(s.upper_witness.source))},
               {"heuristic", s.upper_witness.heuristic}};
    return {{"lower", s.lower}, {"upper", s.upper}, {"heuristic", s.heuristic}, {"lower_witness", lw}, {"upper_witness", uw}};
}

inline json to_json(const ProtocolPoint& p) {
    json j = {{"protocol", p.protocol}, {"n", p.n},       {"m", p.m},         {"theta", p.theta},
              {"fi", p.fi},             {"reference", p.reference}, {"ratio", p.ratio}, {"warnings", p.warnings}};
    j["theta0"] = p.theta0 ? json(*p.theta0) : json(nullptr);
    return j;
}

inline json error_to_json(const Error& e) {
    return {{"error", std::string(to_string(e.kind()))}, {"invariant", e.invariant()}, {"detail", e.detail()}};
}

}  // namespace qpfi::io
