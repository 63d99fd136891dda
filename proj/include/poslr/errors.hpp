#pragma once

#include <stdexcept>
#include <string>

namespace poslr {

// Failure classes map onto CLI exit codes (1, 2, 3).
enum class ErrorClass { Validation = 1, Solve = 2, Io = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorClass error_class, std::string kind, const std::string& what)
      : std::runtime_error(what), class_(error_class), kind_(std::move(kind)) {}

  ErrorClass error_class() const { return class_; }
  const std::string& kind() const { return kind_; }

 private:
  ErrorClass class_;
  std::string kind_;
};

#define POSLR_DEFINE_ERROR(Name, Class)                      \
  class Name : public Error {                                \
   public:                                                   \
    explicit Name(const std::string& what)                   \
        : Error(ErrorClass::Class, #Name, what) {}           \
  };

POSLR_DEFINE_ERROR(DimensionMismatch, Validation)
POSLR_DEFINE_ERROR(NegativeEntry, Validation)
POSLR_DEFINE_ERROR(ValidationFailed, Validation)
POSLR_DEFINE_ERROR(InvalidArgument, Validation)
POSLR_DEFINE_ERROR(InvariantViolation, Validation)
POSLR_DEFINE_ERROR(ModelMismatch, Validation)
POSLR_DEFINE_ERROR(NoConvergence, Solve)
POSLR_DEFINE_ERROR(DefectiveEigenvalue, Solve)
POSLR_DEFINE_ERROR(NonFiniteState, Solve)
POSLR_DEFINE_ERROR(NumericalBreakdown, Solve)
POSLR_DEFINE_ERROR(TieExplosion, Solve)
POSLR_DEFINE_ERROR(NonMetzlerClosedLoop, Solve)
POSLR_DEFINE_ERROR(SolveFailed, Solve)
POSLR_DEFINE_ERROR(ParseError, Io)
POSLR_DEFINE_ERROR(IoError, Io)

#undef POSLR_DEFINE_ERROR

}  // namespace poslr
