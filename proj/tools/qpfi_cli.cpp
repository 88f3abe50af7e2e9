#include "qpfi/io.hpp"
#include "qpfi/qpfi.hpp"
#include "qpfi/verify.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace qpfi;
using io::json;

namespace {

struct Options {
    std::string state, povm, instance, out, format = "json";
    std::vector<double> eps;
    std::vector<double> binary;
    std::vector<double> qudit;
    int restarts = 20;
    std::uint64_t seed = 0;
    std::string protocol = "ghz", theta_rule, suite = "all";
    std::vector<int> n_list{4, 8, 12};
    double m = 0.1;
};

// Scalars of a flat JSON object as a one-row CSV.
std::string json_to_csv(const json& j) {
    std::vector<std::string> keys, vals;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it->is_number_float()) {
            keys.push_back(it.key());
            vals.push_back(format_real(it->get<double>()));
        } else if (it->is_number() || it->is_boolean()) {
            keys.push_back(it.key());
            vals.push_back(it->dump());
        } else if (it->is_string()) {
            keys.push_back(it.key());
            vals.push_back(it->get<std::string>());
        }
    }
    std::ostringstream os;
    for (size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << keys[i];
    os << '\n';
    for (size_t i = 0; i < vals.size(); ++i) os << (i ? "," : "") << vals[i];
    os << '\n';
    return os.str();
}

void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out);
    if (!f) throw io::InputError("cannot write " + o.out);
    f << text;
}

void emit_json(const Options& o, const json& j) {
    emit(o, o.format == "csv" ? json_to_csv(j) : j.dump(2) + "\n");
}

void require(const std::string& value, const char* flag) {
    if (value.empty()) throw io::InputError(std::string("missing required option ") + flag);
}

StateFamily load_state(const Options& o) {
    require(o.state, "--state");
    return io::family_from_json(io::read_file(o.state));
}

Povm load_povm(const Options& o) {
    require(o.povm, "--povm");
    return io::povm_from_json(io::read_file(o.povm));
}

AcsConfig acs_config(const Options& o) {
    AcsConfig cfg;
    cfg.restarts = o.restarts;
    cfg.seed = o.seed;
    cfg.validate();
    return cfg;
}

int run_fi(const Options& o) {
    emit_json(o, io::to_json(fi(load_state(o), load_povm(o))));
    return 0;
}

int run_qfi(const Options& o) {
    StateFamily fam = load_state(o);
    json j = {{"qfi", qfi(fam)}};
    j["sld"] = io::matrix_to_json(sld(fam).matrix());
    emit_json(o, j);
    return 0;
}

int run_gamma(const Options& o) {
    json j;
    if (!o.binary.empty()) {
        if (o.binary.size() != 2) throw io::InputError("--binary takes two values");
        j = io::to_json(gamma_binary_qubit(o.binary[0], o.binary[1]));
        j["source"] = "closed-form";
    } else if (!o.qudit.empty()) {
        j = io::to_json(gamma_binary_qudit(Eigen::Map<const RVec>(o.qudit.data(), o.qudit.size())));
        j["source"] = "closed-form";
    } else {
        GammaEvaluation ev = gamma_of_povm(load_povm(o), std::max(1, o.restarts), o.seed);
        j = io::to_json(ev.result);
        j["source"] = std::string(to_string(ev.source));
        j["heuristic"] = ev.heuristic;
    }
    emit_json(o, j);
    return 0;
}

int run_qupfi_pure(const Options& o) {
    StateFamily fam = load_state(o);
    Povm povm = load_povm(o);
    if (!fam.is_pure()) fail(ErrorKind::NotPure, "family is pure");
    if (fam.dim() != povm.dim()) fail(ErrorKind::DimensionMismatch, "family and measurement share a dimension");
    GammaEvaluation ev = gamma_of_povm(povm, std::max(1, o.restarts), o.seed);
    double J = qfi(fam);
    emit_json(o, {{"qupfi", ev.result.gamma * J},
                  {"gamma", ev.result.gamma},
                  {"qfi", J},
                  {"source", std::string(to_string(ev.source))},
                  {"heuristic", ev.heuristic}});
    return 0;
}

int run_classical(const Options& o) {
    require(o.instance, "--instance");
    ClassicalInstance inst = io::instance_from_json(io::read_file(o.instance));
    ClassicalOptimum opt = qpfi_classical_exhaustive(inst);
    json j = {{"qpfi", opt.value}, {"evaluated", opt.evaluated}};
    json a = json::array();
    for (int v : opt.assignment) a.push_back(v + 1);
    j["assignment"] = a;
    if (inst.d() == inst.D() && inst.D() <= 9) j["permutation_bound"] = qupfi_classical_permutation_bound(inst).value;
    if (inst.r() == 2 && inst.d() == 2) {
        double m1 = inst.m()(0, 0), m2 = inst.m()(0, 1);
        if (m1 < m2) std::swap(m1, m2);
        if (m2 <= std::min(m1, 1.0 - m1))
            j["binary_scan"] = qpfi_classical_binary_qubit(inst.lambda(), inst.dlambda(), m1, m2).value;
    }
    j["qfi"] = qfi(inst.family());
    emit_json(o, j);
    return 0;
}

int run_biconvex(const Options& o) {
    StateFamily fam = load_state(o);
    Povm povm = load_povm(o);
    AcsConfig cfg = acs_config(o);
    if (!o.eps.empty()) {
        emit_json(o, io::to_json(qpfi_via_limit(fam, povm, o.eps, cfg)));
        return 0;
    }
    AcsReport rep = acs_solve(fam, povm, cfg);
    if (rep.stalled) std::cerr << "warning: alternating search stalled before the objective tolerance was met\n";
    emit_json(o, io::to_json(rep));
    return 0;
}

int run_bounds(const Options& o) {
    emit_json(o, io::to_json(sandwich(load_state(o), load_povm(o))));
    return 0;
}

int run_asymptotic(const Options& o) {
    ProtocolId id = parse_protocol(o.protocol);
    ThetaRule rule = o.theta_rule.empty() ? ThetaRule::defaults(id) : ThetaRule::parse(o.theta_rule);
    std::vector<ProtocolPoint> pts = convergence_report(id, o.n_list, o.m, rule);
    for (const auto& p : pts)
        for (const auto& w : p.warnings) std::cerr << "warning: n=" << p.n << ' ' << w << '\n';
    if (o.format == "json") {
        json a = json::array();
        for (const auto& p : pts) a.push_back(io::to_json(p));
        emit(o, a.dump(2) + "\n");
    } else {
        std::ostringstream os;
        write_protocol_csv(os, pts);
        emit(o, os.str());
    }
    return 0;
}

int run_verify(const Options& o) {
    std::vector<verify::CriterionResult> res = verify::run_suite(o.suite);
    bool ok = true;
    std::ostringstream os;
    for (const auto& r : res) {
        verify::print(os, r);
        ok = ok && r.passed;
    }
    emit(o, os.str());
    return ok ? 0 : 1;
}

// "--command NAME" anywhere on the line is the same as giving NAME as the subcommand.
std::vector<std::string> rewrite_command(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    for (size_t i = 1; i < args.size(); ++i) {
        std::string a = args[i];
        std::string name;
        if (a == "--command" && i + 1 < args.size()) {
            name = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
        } else if (a.rfind("--command=", 0) == 0) {
            name = a.substr(10);
            args.erase(args.begin() + i);
        } else {
            continue;
        }
        args.insert(args.begin() + 1, name);
        break;
    }
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Fisher information under noisy measurements with optimal preprocessing"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", o.out, "output file (default stdout)");
        sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--seed", o.seed, "random seed");
    };
    auto add_inputs = [&](CLI::App* sub) {
        sub->add_option("--state", o.state, "state family JSON");
        sub->add_option("--povm", o.povm, "measurement JSON");
    };

    CLI::App* c_fi = app.add_subcommand("fi", "Fisher information of a measurement");
    add_inputs(c_fi);
    add_common(c_fi);

    CLI::App* c_qfi = app.add_subcommand("qfi", "quantum Fisher information and SLD");
    c_qfi->add_option("--state", o.state, "state family JSON");
    add_common(c_qfi);

    CLI::App* c_gamma = app.add_subcommand("gamma", "normalized unitary-preprocessed FI of a measurement");
    c_gamma->add_option("--binary", o.binary, "m1 m2 of a binary qubit measurement")->expected(2);
    c_gamma->add_option("--qudit", o.qudit, "first effect diagonal of a binary qudit measurement")->expected(2, 64);
    c_gamma->add_option("--povm", o.povm, "measurement JSON");
    c_gamma->add_option("--restarts", o.restarts, "restarts for non-commuting measurements");
    add_common(c_gamma);

    CLI::App* c_pure = app.add_subcommand("qupfi-pure", "optimal unitary preprocessing for a pure family");
    add_inputs(c_pure);
    c_pure->add_option("--restarts", o.restarts, "restarts for non-commuting measurements");
    add_common(c_pure);

    CLI::App* c_cl = app.add_subcommand("classical", "coarse-graining optimum for a classically mixed instance");
    c_cl->add_option("--instance", o.instance, "classical instance JSON");
    add_common(c_cl);

    CLI::App* c_bi = app.add_subcommand("biconvex", "general preprocessing by alternating convex search");
    add_inputs(c_bi);
    c_bi->add_option("--eps", o.eps, "regularization levels for limit extrapolation")->delimiter(',');
    c_bi->add_option("--restarts", o.restarts, "multistart count");
    add_common(c_bi);

    CLI::App* c_bd = app.add_subcommand("bounds", "lower and upper bounds on the preprocessed FI");
    add_inputs(c_bd);
    add_common(c_bd);

    CLI::App* c_as = app.add_subcommand("asymptotic", "many-probe protocol sweeps");
    c_as->add_option("--protocol", o.protocol, "ghz, product or sorting");
    c_as->add_option("--n", o.n_list, "probe counts")->delimiter(',');
    c_as->add_option("--m", o.m, "readout flip probability");
    c_as->add_option("--theta-rule", o.theta_rule, "quarter | fixed:v | power:a | matched:v");
    add_common(c_as);

    CLI::App* c_ver = app.add_subcommand("verify", "run an acceptance suite");
    c_ver->add_option("suite", o.suite, "closed-forms, oracles, sandwich, protocols or all")
        ->check(CLI::IsMember(verify::suite_names()));
    c_ver->add_option("--out", o.out, "output file (default stdout)");

    std::vector<std::string> args = rewrite_command(argc, argv);
    std::vector<char*> cargs;
    for (auto& a : args) cargs.push_back(a.data());

    try {
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    // asymptotic defaults to CSV unless a format was asked for
    if (*c_as && c_as->count("--format") == 0) o.format = "csv";

    try {
        if (*c_fi) return run_fi(o);
        if (*c_qfi) return run_qfi(o);
        if (*c_gamma) return run_gamma(o);
        if (*c_pure) return run_qupfi_pure(o);
        if (*c_cl) return run_classical(o);
        if (*c_bi) return run_biconvex(o);
        if (*c_bd) return run_bounds(o);
        if (*c_as) return run_asymptotic(o);
        if (*c_ver) return run_verify(o);
    } catch (const Error& e) {
        std::cerr << io::error_to_json(e).dump() << '\n';
        return 1;
    } catch (const io::InputError& e) {
        std::cerr << json{{"error", "InputError"}, {"detail", e.what()}}.dump() << '\n';
        return 2;
    } catch (const json::exception& e) {
        std::cerr << json{{"error", "InputError"}, {"detail", e.what()}}.dump() << '\n';
        return 2;
    }
    return 2;
}
