#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace garmod {

enum class ErrorCode {
    InvalidConfig,
    InvalidArgument,
    SelfIntersecting,
    OffGrid,
    NotClosed,
    PanelTooLarge,
    NotOnGrid,
    DuplicateBreak,
    PhaseViolation,
    LengthMismatch,
    AlreadySeamed,
    SelfSeam,
    UnknownPanel,
    UnknownEdge,
    UnknownSeam,
    UnknownCell,
    UnknownSegment,
    UnstitchedDanglingState,
    RatioViolation,
    InfeasibleFold,
    DisconnectionHazard,
    FeatureInWay,
    AlreadyGathered,
    NotInSeam,
    AlreadyPleat,
    OrderViolation,
    InsufficientSpace,
    DartOverlap,
    NonUniversalOnSeam,
    GatheredSeam,
    DartSeamConflict,
    NotGathered,
    Infeasible,
    TimeBudgetExceeded,
    TooLarge,
    PieceTooWide,
    MissingAlignment,
    DegeneratePanel,
    ResolutionMismatch,
    IoFailure,
    ParseError,
    ReplayMismatch,
    NotFound,
    ReadOnly,
};

std::string_view to_string(ErrorCode code);
// Throws ParseError for unknown names.
ErrorCode error_code_from_string(std::string_view s);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code),
          detail_(message) {}

    ErrorCode code() const { return code_; }
    // Message without the code prefix.
    const std::string& detail() const { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace garmod
