#pragma once

#include <stdexcept>
#include <string>

namespace mhardy {

/// Base class for every error raised by the library. `kind()` is the stable
/// tag written into reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define MHARDY_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                       \
   public:                                                          \
    using Error::Error;                                             \
    const char* kind() const noexcept override { return #Name; }    \
  };

MHARDY_DEFINE_ERROR(OriginError)
MHARDY_DEFINE_ERROR(DomainError)
MHARDY_DEFINE_ERROR(SingularWeightError)
MHARDY_DEFINE_ERROR(NonFiniteError)
MHARDY_DEFINE_ERROR(AdmissibilityError)
MHARDY_DEFINE_ERROR(RealnessError)
MHARDY_DEFINE_ERROR(ConfigError)

#undef MHARDY_DEFINE_ERROR

}  // namespace mhardy
