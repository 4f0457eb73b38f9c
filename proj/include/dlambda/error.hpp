#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dlambda {

enum class ErrorKind {
    NegativeDecay,
    AllDecayZero,
    NotMultiphotonResonant,
    SingularSystem,
    PreconditionViolated,
    ZeroProbeAmplitude,
    UnphysicalState,
    WindowTooShort,
    DeltaZero,
    InvalidGrid,
    EdgePoint,
    NonUniformGrid,
    UnknownKey,
    TypeMismatch,
    MissingRequired,
    UnknownFigure,
    Io,
};

constexpr std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::NegativeDecay: return "NegativeDecay";
    case ErrorKind::AllDecayZero: return "AllDecayZero";
    case ErrorKind::NotMultiphotonResonant: return "NotMultiphotonResonant";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::ZeroProbeAmplitude: return "ZeroProbeAmplitude";
    case ErrorKind::UnphysicalState: return "UnphysicalState";
    case ErrorKind::WindowTooShort: return "WindowTooShort";
    case ErrorKind::DeltaZero: return "DeltaZero";
    case ErrorKind::InvalidGrid: return "InvalidGrid";
    case ErrorKind::EdgePoint: return "EdgePoint";
    case ErrorKind::NonUniformGrid: return "NonUniformGrid";
    case ErrorKind::UnknownKey: return "UnknownKey";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::MissingRequired: return "MissingRequired";
    case ErrorKind::UnknownFigure: return "UnknownFigure";
    case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

/// Configuration-level failures map to exit code 1 in the command front end,
/// everything else to exit code 2.
constexpr bool is_config_error(ErrorKind kind)
{
    return kind == ErrorKind::UnknownKey || kind == ErrorKind::TypeMismatch ||
           kind == ErrorKind::MissingRequired || kind == ErrorKind::UnknownFigure;
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what)
    {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

} // namespace dlambda
