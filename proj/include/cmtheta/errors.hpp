#pragma once

#include <stdexcept>
#include <string>

namespace cmtheta {

/// Base class of every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CMTHETA_DEFINE_ERROR(Name)                      \
  class Name : public error {                           \
   public:                                              \
    explicit Name(const std::string& what)              \
        : error(std::string(#Name ": ") + what) {}      \
  };

CMTHETA_DEFINE_ERROR(InvalidLattice)
CMTHETA_DEFINE_ERROR(NotInLattice)
CMTHETA_DEFINE_ERROR(NonconvergentModulus)
CMTHETA_DEFINE_ERROR(IndexOutOfRange)
CMTHETA_DEFINE_ERROR(NonIntegralDegree)
CMTHETA_DEFINE_ERROR(BundleMismatch)
CMTHETA_DEFINE_ERROR(NonPeriodicIntegrand)
CMTHETA_DEFINE_ERROR(NonPeriodicInput)
CMTHETA_DEFINE_ERROR(UnsupportedIndex)
CMTHETA_DEFINE_ERROR(ChartSingularity)
CMTHETA_DEFINE_ERROR(InputsProportional)
CMTHETA_DEFINE_ERROR(ConfigError)
CMTHETA_DEFINE_ERROR(ParseError)

#undef CMTHETA_DEFINE_ERROR

}  // namespace cmtheta
