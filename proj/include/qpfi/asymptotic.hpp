#pragma once

#include "errors.hpp"

#include <cmath>
#include <limits>
#include <locale>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace qpfi {

struct ProtocolPoint {
    std::string protocol;
    int n = 0;
    double m = 0.0;
    double theta = 0.0;
    std::optional<double> theta0;
    double fi = 0.0;
    double reference = 0.0;
    double ratio = 0.0;
    std::vector<std::string> warnings;
};

namespace binom {

inline double log_choose(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

inline double log_pmf(int n, int k, double p) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    if (p == 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    if (p == 1.0) return k == n ? 0.0 : -std::numeric_limits<double>::infinity();
    return log_choose(n, k) + k * std::log(p) + (n - k) * std::log1p(-p);
}

inline double pmf(int n, int k, double p) { return std::exp(log_pmf(n, k, p)); }

// Pr(Bin(n,p) <= k), summed in log space
inline double cdf(int n, double p, long long k) {
    if (k < 0) return 0.0;
    if (k >= n) return 1.0;
    double mx = -std::numeric_limits<double>::infinity();
    std::vector<double> lt(static_cast<size_t>(k) + 1);
    for (int i = 0; i <= k; ++i) {
        lt[i] = log_pmf(n, i, p);
        mx = std::max(mx, lt[i]);
    }
    if (!std::isfinite(mx)) return 0.0;
    double s = 0.0;
    for (double v : lt) s += std::exp(v - mx);
    return std::min(1.0, std::exp(mx) * s);
}

}  // namespace binom

inline void check_protocol_args(int n, double m) {
    if (n < 1) fail(ErrorKind::InvalidArgument, "n >= 1");
    if (!(m >= 0.0 && m < 0.5)) fail(ErrorKind::InvalidArgument, "flip probability lies in [0, 1/2)");
}

// w[k] = Pr(Bin(k, 1-m) + Bin(n-k, m) <= floor(n/2)): probability that majority voting reads 0
// from a basis state of Hamming weight k.
inline std::vector<double> majority_vote_weights(int n, double m) {
    check_protocol_args(n, m);
    const int t = n / 2;
    std::vector<double> w(n + 1);
    std::vector<double> a(n + 1), c(t + 1);
    for (int k = 0; k <= n; ++k) {
        for (int i = 0; i <= k; ++i) a[i] = binom::pmf(k, i, 1.0 - m);
        double run = 0.0;
        for (int j = 0; j <= t; ++j) {
            run += binom::pmf(n - k, j, m);
            c[j] = run;
        }
        double s = 0.0;
        for (int i = 0; i <= std::min(k, t); ++i) s += a[i] * c[t - i];
        w[k] = std::min(1.0, s);
    }
    return w;
}

namespace detail {

inline double two_outcome_fi(double p, double dp) {
    double den = p * (1.0 - p);
    if (!(den > 0.0)) return 0.0;
    return dp * dp / den;
}

inline double majority_zero_weight(int n, double m) { return binom::cdf(n, m, n / 2); }
inline double majority_full_weight(int n, double m) { return binom::cdf(n, 1.0 - m, n / 2); }

}  // namespace detail

inline ProtocolPoint ghz_protocol_fi(int n, double m, double theta) {
    check_protocol_args(n, m);
    ProtocolPoint pt{"ghz", n, m, theta, std::nullopt, 0.0, 4.0 * n * n, 0.0, {}};
    const double pi = std::numbers::pi;
    if (theta < pi / (6.0 * n) || theta > pi / (3.0 * n)) pt.warnings.push_back("ThetaOutOfRecommendedRange");
    const double w0 = detail::majority_zero_weight(n, m);
    const double wn = detail::majority_full_weight(n, m);
    const double c = std::cos(n * theta), s = std::sin(n * theta);
    const double p0 = c * c * w0 + s * s * wn;
    const double dp0 = n * std::sin(2.0 * n * theta) * (wn - w0);
    pt.fi = detail::two_outcome_fi(p0, dp0);
    pt.ratio = pt.fi / pt.reference;
    return pt;
}

inline double ghz_local_readout_fi(int n, double m, double theta) {
    check_protocol_args(n, m);
    const double s2 = std::pow(std::sin(2.0 * n * theta), 2);
    const double grow = std::pow(1.0 - 2.0 * m, -2.0 * n);
    const double closed = (s2 == 0.0) ? 0.0 : 4.0 * n * n * s2 / (s2 - 1.0 + grow);

    const double contrast = std::pow(1.0 - 2.0 * m, n);
    const double cs = std::cos(2.0 * n * theta);
    const double p_even = 0.5 * (1.0 + contrast * cs);
    const double p_odd = 0.5 * (1.0 - contrast * cs);
    const double dp_even = -contrast * n * std::sin(2.0 * n * theta);
    double from_probs = 0.0;
    if (p_even > 0.0) from_probs += dp_even * dp_even / p_even;
    if (p_odd > 0.0) from_probs += dp_even * dp_even / p_odd;

    if (std::abs(closed - from_probs) > 1e-9 * std::max(1.0, std::abs(closed)))
        fail(ErrorKind::InternalInvariant, "parity closed form matches its probabilities");
    return closed;
}

// Product probes rotated to cos(d)|0> + i sin(d)|1> each, d = theta - theta0. The symmetric amplitudes
// sit on Dicke states; the desymmetrizer sends Dicke weight k to |1^k 0^(n-k)> and the fan-out
// CNOT controlled by the first qubit turns that into Hamming weight n-k+1 (k >= 1).
inline double product_protocol_zero_probability(int n, double delta, const std::vector<double>& w) {
    const double c2 = std::pow(std::cos(delta), 2);
    const double s2 = std::pow(std::sin(delta), 2);
    double p = 0.0;
    for (int k = 0; k <= n; ++k) {
        double amp2 = std::exp(binom::log_choose(n, k)) * std::pow(c2, n - k) * std::pow(s2, k);
        p += amp2 * (k == 0 ? w[0] : w[n - k + 1]);
    }
    return p;
}

inline ProtocolPoint product_protocol_fi(int n, double m, double theta, double theta0) {
    check_protocol_args(n, m);
    if (n > 16) fail(ErrorKind::InvalidArgument, "n <= 16 for the exact symmetric-sector path");
    ProtocolPoint pt{"product", n, m, theta, theta0, 0.0, 4.0 * n, 0.0, {}};
    const double delta = theta - theta0;
    if (!(std::abs(delta) > 1.0 / n && std::abs(delta) < 1.0 / std::sqrt(static_cast<double>(n))))
        pt.warnings.push_back("DeltaOutOfRange");
    const std::vector<double> w = majority_vote_weights(n, m);
    const double h = 1e-6;
    const double p = product_protocol_zero_probability(n, delta, w);
    const double dp = (product_protocol_zero_probability(n, delta + h, w) -
                       product_protocol_zero_probability(n, delta - h, w)) / (2.0 * h);
    pt.fi = detail::two_outcome_fi(p, dp);
    pt.ratio = pt.fi / pt.reference;
    return pt;
}

inline int sorting_threshold(int n, double theta0) {
    double x = n * std::pow(std::sin(theta0), 2);
    return static_cast<int>(std::floor(x + 1e-9 * std::max(1.0, x)));
}

// derivative of Pr(Bin(n, sin^2 theta) <= K) in theta
inline double sorting_derivative(int n, double theta, int K) {
    if (K < 0 || K >= n) return 0.0;
    const double ld = std::log(2.0 * n) + binom::log_choose(n - 1, K) + (2.0 * K + 1.0) * std::log(std::sin(theta)) +
                      (2.0 * (n - K) - 1.0) * std::log(std::cos(theta));
    return -std::exp(ld);
}

inline ProtocolPoint classical_sorting_protocol_fi(int n, double m, double theta, double theta0) {
    check_protocol_args(n, m);
    if (!(theta > 0.0 && theta < std::numbers::pi / 4)) fail(ErrorKind::InvalidArgument, "theta lies in (0, pi/4)");
    ProtocolPoint pt{"sorting", n, m, theta, theta0, 0.0, 8.0 * n / std::numbers::pi, 0.0, {}};
    const int K = sorting_threshold(n, theta0);
    const double p = binom::cdf(n, std::pow(std::sin(theta), 2), K);
    const double dp = sorting_derivative(n, theta, K);
    const double w0 = detail::majority_zero_weight(n, m);
    const double wn = detail::majority_full_weight(n, m);
    const double p0 = p * w0 + (1.0 - p) * wn;
    const double dp0 = dp * (w0 - wn);
    pt.fi = detail::two_outcome_fi(p0, dp0);
    pt.ratio = pt.fi / pt.reference;
    return pt;
}

inline double local_control_ceiling(int n, double m) { return 4.0 * (1.0 - 2.0 * m) * (1.0 - 2.0 * m) * n; }

// flip probability above which local control cannot reach 8n/pi
inline double local_control_threshold() { return 0.5 - 1.0 / std::sqrt(2.0 * std::numbers::pi); }

enum class ProtocolId { Ghz, Product, Sorting };

inline ProtocolId parse_protocol(const std::string& s) {
    if (s == "ghz") return ProtocolId::Ghz;
    if (s == "product") return ProtocolId::Product;
    if (s == "sorting") return ProtocolId::Sorting;
    fail(ErrorKind::InvalidArgument, "protocol is one of ghz, product, sorting", s);
}

// quarter: theta = pi/(4n); fixed:v: theta = v; power:a: theta = n^-a with theta0 = 0;
// matched:v: theta = v with theta0 = asin(sqrt(round(n sin^2 v)/n)).
struct ThetaRule {
    enum class Kind { Quarter, Fixed, Power, Matched } kind = Kind::Quarter;
    double value = 0.0;

    static ThetaRule defaults(ProtocolId p) {
        switch (p) {
            case ProtocolId::Ghz: return {Kind::Quarter, 0.0};
            case ProtocolId::Product: return {Kind::Power, 0.75};
            case ProtocolId::Sorting: return {Kind::Matched, 0.6};
        }
        return {};
    }

    static ThetaRule parse(const std::string& s) {
        if (s == "quarter") return {Kind::Quarter, 0.0};
        auto colon = s.find(':');
        if (colon == std::string::npos) fail(ErrorKind::InvalidArgument, "theta rule is quarter or kind:value", s);
        std::string kind = s.substr(0, colon);
        double v = 0.0;
        std::istringstream is(s.substr(colon + 1));
        is.imbue(std::locale::classic());
        if (!(is >> v)) fail(ErrorKind::InvalidArgument, "theta rule value is a number", s);
        if (kind == "fixed") return {Kind::Fixed, v};
        if (kind == "power") return {Kind::Power, v};
        if (kind == "matched") return {Kind::Matched, v};
        fail(ErrorKind::InvalidArgument, "theta rule kind is fixed, power or matched", s);
    }

    std::pair<double, double> angles(int n) const {
        switch (kind) {
            case Kind::Quarter: return {std::numbers::pi / (4.0 * n), 0.0};
            case Kind::Fixed: return {value, value};
            case Kind::Power: return {std::pow(static_cast<double>(n), -value), 0.0};
            case Kind::Matched: {
                double k = std::round(n * std::pow(std::sin(value), 2));
                return {value, std::asin(std::sqrt(k / n))};
            }
        }
        return {0.0, 0.0};
    }
};

inline std::vector<ProtocolPoint> convergence_report(ProtocolId protocol, const std::vector<int>& n_list, double m,
                                                     const ThetaRule& rule) {
    std::vector<ProtocolPoint> out;
    for (int n : n_list) {
        auto [theta, theta0] = rule.angles(n);
        switch (protocol) {
            case ProtocolId::Ghz: out.push_back(ghz_protocol_fi(n, m, theta)); break;
            case ProtocolId::Product:
                out.push_back(product_protocol_fi(n, m, theta, rule.kind == ThetaRule::Kind::Fixed ? 0.0 : theta0));
                break;
            case ProtocolId::Sorting: out.push_back(classical_sorting_protocol_fi(n, m, theta, theta0)); break;
        }
    }
    return out;
}

inline std::string format_real(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    os << v;
    return os.str();
}

inline void write_protocol_csv(std::ostream& os, const std::vector<ProtocolPoint>& pts) {
    os << "protocol,n,m,theta,theta0,fi,reference,ratio\n";
    for (const auto& p : pts) {
        os << p.protocol << ',' << p.n << ',' << format_real(p.m) << ',' << format_real(p.theta) << ','
           << (p.theta0 ? format_real(*p.theta0) : std::string()) << ',' << format_real(p.fi) << ','
           << format_real(p.reference) << ',' << format_real(p.ratio) << '\n';
    }
}

}  // namespace qpfi
