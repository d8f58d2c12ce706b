#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace pentagram {

enum class Errc {
  DegenerateCrossRatio,
  NotCollinear,
  CoincidentPoints,
  ArityMismatch,
  PoleAtPoint,
  DegenerateConfiguration,
  DivisibleByThree,
  NotDivisibleByThree,
  DegenerateRecurrence,
  ZeroCoefficient,
  ZeroCoordinate,
  InvalidEigenvalues,
  InvalidParameters,
  NonRationalLift,
  DegenerateDiagonals,
  LostGenericity,
  MapSingularity,
  ZeroScale,
  NotClosed,
  NonFinite,
  Instability,
  IllConditionedFit,
  ParseError,
};

const char* errc_name(Errc c);

// Every failure in the library is reported through this type. Errors that
// concern a specific vertex or coordinate carry its index.
class Error : public std::runtime_error {
 public:
  explicit Error(Errc code, std::string detail = {});
  Error(Errc code, int index, std::string detail = {});

  Errc code() const noexcept { return code_; }
  std::optional<int> index() const noexcept { return index_; }

 private:
  Errc code_;
  std::optional<int> index_;
};

}  // namespace pentagram
