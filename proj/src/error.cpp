#include "garmod/error.hpp"

namespace garmod {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SelfIntersecting: return "SelfIntersecting";
    case ErrorCode::OffGrid: return "OffGrid";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::PanelTooLarge: return "PanelTooLarge";
    case ErrorCode::NotOnGrid: return "NotOnGrid";
    case ErrorCode::DuplicateBreak: return "DuplicateBreak";
    case ErrorCode::PhaseViolation: return "PhaseViolation";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::AlreadySeamed: return "AlreadySeamed";
    case ErrorCode::SelfSeam: return "SelfSeam";
    case ErrorCode::UnknownPanel: return "UnknownPanel";
    case ErrorCode::UnknownEdge: return "UnknownEdge";
    case ErrorCode::UnknownSeam: return "UnknownSeam";
    case ErrorCode::UnknownCell: return "UnknownCell";
    case ErrorCode::UnknownSegment: return "UnknownSegment";
    case ErrorCode::UnstitchedDanglingState: return "UnstitchedDanglingState";
    case ErrorCode::RatioViolation: return "RatioViolation";
    case ErrorCode::InfeasibleFold: return "InfeasibleFold";
    case ErrorCode::DisconnectionHazard: return "DisconnectionHazard";
    case ErrorCode::FeatureInWay: return "FeatureInWay";
    case ErrorCode::AlreadyGathered: return "AlreadyGathered";
    case ErrorCode::NotInSeam: return "NotInSeam";
    case ErrorCode::AlreadyPleat: return "AlreadyPleat";
    case ErrorCode::OrderViolation: return "OrderViolation";
    case ErrorCode::InsufficientSpace: return "InsufficientSpace";
    case ErrorCode::DartOverlap: return "DartOverlap";
    case ErrorCode::NonUniversalOnSeam: return "NonUniversalOnSeam";
    case ErrorCode::GatheredSeam: return "GatheredSeam";
    case ErrorCode::DartSeamConflict: return "DartSeamConflict";
    case ErrorCode::NotGathered: return "NotGathered";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::TimeBudgetExceeded: return "TimeBudgetExceeded";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::PieceTooWide: return "PieceTooWide";
    case ErrorCode::MissingAlignment: return "MissingAlignment";
    case ErrorCode::DegeneratePanel: return "DegeneratePanel";
    case ErrorCode::ResolutionMismatch: return "ResolutionMismatch";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ReplayMismatch: return "ReplayMismatch";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::ReadOnly: return "ReadOnly";
    }
    return "Unknown";
}

ErrorCode error_code_from_string(std::string_view s) {
    for (int i = 0; i <= static_cast<int>(ErrorCode::ReadOnly); ++i) {
        auto code = static_cast<ErrorCode>(i);
        if (to_string(code) == s) return code;
    }
    throw Error(ErrorCode::ParseError, "unknown error code '" + std::string(s) + "'");
}

}  // namespace garmod
