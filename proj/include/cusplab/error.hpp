#pragma once

#include <stdexcept>
#include <string>

namespace cusplab {

enum class Errc {
    NonInvolution,
    NonOrientable,
    Disconnected,
    NotFlippable,
    Intransitive,
    BadInput,
    BaseMismatch,
    BudgetExceeded,
    PunctureMoved,
    NotAnArc,
    EmptyWord,
    NotPseudoAnosov,
    Overflow,
    NegativeDistance,
    NonNegativeChi,
    NonPositiveArea,
    OverlappingHoroballs,
    CoincidentCenters,
    Diverged,
    DegenerateShape,
    MaxIterations,
    NotSolved,
    DepthUnstable,
};

const char* errc_name(Errc c);

// Every failure surfaced by the library is an Error carrying one of the codes above.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

inline const char* errc_name(Errc c) {
    switch (c) {
    case Errc::NonInvolution: return "NonInvolution";
    case Errc::NonOrientable: return "NonOrientable";
    case Errc::Disconnected: return "Disconnected";
    case Errc::NotFlippable: return "NotFlippable";
    case Errc::Intransitive: return "Intransitive";
    case Errc::BadInput: return "BadInput";
    case Errc::BaseMismatch: return "BaseMismatch";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::PunctureMoved: return "PunctureMoved";
    case Errc::NotAnArc: return "NotAnArc";
    case Errc::EmptyWord: return "EmptyWord";
    case Errc::NotPseudoAnosov: return "NotPseudoAnosov";
    case Errc::Overflow: return "Overflow";
    case Errc::NegativeDistance: return "NegativeDistance";
    case Errc::NonNegativeChi: return "NonNegativeChi";
    case Errc::NonPositiveArea: return "NonPositiveArea";
    case Errc::OverlappingHoroballs: return "OverlappingHoroballs";
    case Errc::CoincidentCenters: return "CoincidentCenters";
    case Errc::Diverged: return "Diverged";
    case Errc::DegenerateShape: return "DegenerateShape";
    case Errc::MaxIterations: return "MaxIterations";
    case Errc::NotSolved: return "NotSolved";
    case Errc::DepthUnstable: return "DepthUnstable";
    }
    return "Unknown";
}

} // namespace cusplab
