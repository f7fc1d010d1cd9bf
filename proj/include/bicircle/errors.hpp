#pragma once

#include <stdexcept>
#include <string>

namespace bicircle {

// Base for documented mathematical degeneracies. The CLI maps these to exit
// code 3 and a machine-readable code in the report.
struct DegeneracyError : std::runtime_error {
  std::string code;
  DegeneracyError(std::string code_, const std::string& what_)
      : std::runtime_error(what_), code(std::move(code_)) {}
};

#define BICIRCLE_ERROR(NAME)                                            \
  struct NAME : DegeneracyError {                                       \
    explicit NAME(const std::string& msg = #NAME)                       \
        : DegeneracyError(#NAME, msg) {}                                \
  }

BICIRCLE_ERROR(ZeroParameter);
BICIRCLE_ERROR(IdenticalPlanes);
BICIRCLE_ERROR(LineNotInPlane);
BICIRCLE_ERROR(CoplanarConics);
BICIRCLE_ERROR(CoplanarCircles);
BICIRCLE_ERROR(ZeroForm);
BICIRCLE_ERROR(NotSmoothGenusOne);
BICIRCLE_ERROR(DegenerateConfiguration);
BICIRCLE_ERROR(NoSuitableRealCone);
BICIRCLE_ERROR(ZeroDirection);
BICIRCLE_ERROR(NotOnEdgeCurve);
BICIRCLE_ERROR(DegenerateLine);
BICIRCLE_ERROR(OriginNotInterior);
BICIRCLE_ERROR(NotOnBoundary);

#undef BICIRCLE_ERROR

}  // namespace bicircle
