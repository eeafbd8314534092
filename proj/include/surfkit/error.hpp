#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace surfkit {

/// Machine-readable failure reasons shared by every module. The names are
/// part of the external contract (CLI messages, HTTP error bodies).
enum class Errc {
  ParseError,
  UnitError,
  InvalidParameter,
  DegenerateInput,
  EmptyCloud,
  InsufficientPoints,
  MissingLineIndex,
  EmptyBand,
  NoContours,
  MissingNormals,
  NoContactWaypoints,
  NotProjectivelyPlanar,
  PlannerInvariant,
  OutsideSurface,
  EmptyTrajectory,
  ConsistencyError,
  UnknownRule,
  AmbiguousSuccessor,
  NoSuccessor,
  ProtocolError,
  MissingInput,
  NotFound,
  Conflict,
  IntegrityError,
  BindError,
  IoError,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace surfkit
