#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace toposprob {

enum class ErrorKind {
    DimensionMismatch,
    ModeMismatch,
    NonOrthogonalInput,
    ZeroVector,
    NumericalInstability,
    NotHermitian,
    NoConvergence,
    NotAResolution,
    Overlapping,
    TrivialContext,
    PosetTooLarge,
    MixedDimensions,
    UnknownContext,
    NotAFunctor,
    StageMismatch,
    EnumerationTooLarge,
    ParentMismatch,
    NotInContext,
    UnsupportedSetShape,
    WeightsNotNormalized,
    InvalidThreshold,
    PosetMismatch,
    NotIncreasing,
    OutOfRange,
    UnknownPoint,
    TooLarge,
    EmptyComponent,
    InvalidArgument,
    ParseError,
    UnknownReference,
};

constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ModeMismatch: return "ModeMismatch";
    case ErrorKind::NonOrthogonalInput: return "NonOrthogonalInput";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::NumericalInstability: return "NumericalInstability";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NotAResolution: return "NotAResolution";
    case ErrorKind::Overlapping: return "Overlapping";
    case ErrorKind::TrivialContext: return "TrivialContext";
    case ErrorKind::PosetTooLarge: return "PosetTooLarge";
    case ErrorKind::MixedDimensions: return "MixedDimensions";
    case ErrorKind::UnknownContext: return "UnknownContext";
    case ErrorKind::NotAFunctor: return "NotAFunctor";
    case ErrorKind::StageMismatch: return "StageMismatch";
    case ErrorKind::EnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorKind::ParentMismatch: return "ParentMismatch";
    case ErrorKind::NotInContext: return "NotInContext";
    case ErrorKind::UnsupportedSetShape: return "UnsupportedSetShape";
    case ErrorKind::WeightsNotNormalized: return "WeightsNotNormalized";
    case ErrorKind::InvalidThreshold: return "InvalidThreshold";
    case ErrorKind::PosetMismatch: return "PosetMismatch";
    case ErrorKind::NotIncreasing: return "NotIncreasing";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::UnknownPoint: return "UnknownPoint";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::EmptyComponent: return "EmptyComponent";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownReference: return "UnknownReference";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what),
          kind_(kind), detail_(what) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    /// The message without the kind prefix.
    [[nodiscard]] const std::string &detail() const noexcept { return detail_; }

  private:
    ErrorKind kind_;
    std::string detail_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &what) {
    throw Error(kind, what);
}

inline void require(bool condition, ErrorKind kind, const std::string &what) {
    if (!condition) {
        fail(kind, what);
    }
}

} // namespace toposprob
