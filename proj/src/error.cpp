#include "surfkit/error.hpp"

namespace surfkit {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::ParseError: return "ParseError";
    case Errc::UnitError: return "UnitError";
    case Errc::InvalidParameter: return "InvalidParameter";
    case Errc::DegenerateInput: return "DegenerateInput";
    case Errc::EmptyCloud: return "EmptyCloud";
    case Errc::InsufficientPoints: return "InsufficientPoints";
    case Errc::MissingLineIndex: return "MissingLineIndex";
    case Errc::EmptyBand: return "EmptyBand";
    case Errc::NoContours: return "NoContours";
    case Errc::MissingNormals: return "MissingNormals";
    case Errc::NoContactWaypoints: return "NoContactWaypoints";
    case Errc::NotProjectivelyPlanar: return "NotProjectivelyPlanar";
    case Errc::PlannerInvariant: return "PlannerInvariant";
    case Errc::OutsideSurface: return "OutsideSurface";
    case Errc::EmptyTrajectory: return "EmptyTrajectory";
    case Errc::ConsistencyError: return "ConsistencyError";
    case Errc::UnknownRule: return "UnknownRule";
    case Errc::AmbiguousSuccessor: return "AmbiguousSuccessor";
    case Errc::NoSuccessor: return "NoSuccessor";
    case Errc::ProtocolError: return "ProtocolError";
    case Errc::MissingInput: return "MissingInput";
    case Errc::NotFound: return "NotFound";
    case Errc::Conflict: return "Conflict";
    case Errc::IntegrityError: return "IntegrityError";
    case Errc::BindError: return "BindError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace surfkit
