#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qpfi {

enum class ErrorKind {
    NonHermitian,
    NotPSD,
    NotUnitTrace,
    NotResolutionOfIdentity,
    TrivialMeasurement,
    DimensionMismatch,
    LengthMismatch,
    NotNormalized,
    SingularSupport,
    InconsistentDerivative,
    ZeroInformation,
    NotPure,
    IdenticalColumns,
    NonPositiveEntry,
    BudgetExceeded,
    NotStochastic,
    NotTracePreserving,
    NotIndicator,
    SingularPovm,
    NoFeasiblePoint,
    InvalidArgument,
    InternalInvariant,
};

inline std::string_view to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::NonHermitian: return "NonHermitian";
        case ErrorKind::NotPSD: return "NotPSD";
        case ErrorKind::NotUnitTrace: return "NotUnitTrace";
        case ErrorKind::NotResolutionOfIdentity: return "NotResolutionOfIdentity";
        case ErrorKind::TrivialMeasurement: return "TrivialMeasurement";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::NotNormalized: return "NotNormalized";
        case ErrorKind::SingularSupport: return "SingularSupport";
        case ErrorKind::InconsistentDerivative: return "InconsistentDerivative";
        case ErrorKind::ZeroInformation: return "ZeroInformation";
        case ErrorKind::NotPure: return "NotPure";
        case ErrorKind::IdenticalColumns: return "IdenticalColumns";
        case ErrorKind::NonPositiveEntry: return "NonPositiveEntry";
        case ErrorKind::BudgetExceeded: return "BudgetExceeded";
        case ErrorKind::NotStochastic: return "NotStochastic";
        case ErrorKind::NotTracePreserving: return "NotTracePreserving";
        case ErrorKind::NotIndicator: return "NotIndicator";
        case ErrorKind::SingularPovm: return "SingularPovm";
        case ErrorKind::NoFeasiblePoint: return "NoFeasiblePoint";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::InternalInvariant: return "InternalInvariant";
    }
    return "Unknown";
}

// Domain error carrying the kind and the invariant it names.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string invariant, const std::string& detail = {})
        : std::runtime_error(std::string(to_string(kind)) + ": " + invariant +
                             (detail.empty() ? std::string() : " (" + detail + ")")),
          kind_(kind),
          invariant_(std::move(invariant)),
          detail_(detail) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& invariant() const noexcept { return invariant_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string invariant_;
    std::string detail_;
};

[[noreturn]] inline void fail(ErrorKind kind, std::string invariant, const std::string& detail = {}) {
    throw Error(kind, std::move(invariant), detail);
}

}  // namespace qpfi
