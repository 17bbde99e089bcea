#pragma once

#include <stdexcept>
#include <string>

namespace knfam {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define KNFAM_DEFINE_ERROR(Name)                                       \
  class Name : public Error {                                          \
  public:                                                              \
    explicit Name(const std::string& what) : Error(what) {}            \
    const char* kind() const noexcept override { return #Name; }       \
  };

/// A name outside the fixed parameter set {e1, e2, s, lambda}.
KNFAM_DEFINE_ERROR(UnknownParameter)
/// A parameter occurring in a polynomial has no binding.
KNFAM_DEFINE_ERROR(UnboundParameter)
/// A generator of the wrong kind for the family or cocycle.
KNFAM_DEFINE_ERROR(KindMismatch)
/// A cochain value was requested outside its declared window.
KNFAM_DEFINE_ERROR(OutOfWindow)
KNFAM_DEFINE_ERROR(SingularCurve)
KNFAM_DEFINE_ERROR(ExceptionalLine)
KNFAM_DEFINE_ERROR(ExceptionalPoint)
KNFAM_DEFINE_ERROR(NonPolynomialParameter)
/// Malformed textual input (rationals, polynomials, algebra files).
KNFAM_DEFINE_ERROR(ParseError)

#undef KNFAM_DEFINE_ERROR

}  // namespace knfam
