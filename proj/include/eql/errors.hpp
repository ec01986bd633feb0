#pragma once

#include <stdexcept>
#include <string>

namespace eql {

// Base for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define EQL_ERROR(Name)                                   \
  class Name : public Error {                             \
   public:                                                \
    explicit Name(const std::string& what) : Error(what) {} \
  };

EQL_ERROR(DegenerateGeodesic)
EQL_ERROR(DegenerateTriple)
EQL_ERROR(OrientationMismatch)
EQL_ERROR(GeodesicsCross)
EQL_ERROR(DegenerateQuadruple)
EQL_ERROR(DegenerateBox)
EQL_ERROR(NotLogTwoBox)
EQL_ERROR(CrossingLeaves)
EQL_ERROR(InvalidBand)
EQL_ERROR(BasePointOnLeaf)
EQL_ERROR(NotAnEarthquake)
EQL_ERROR(BadExponent)
EQL_ERROR(NonFinite)
EQL_ERROR(OracleInconsistent)
EQL_ERROR(WindowRequired)
EQL_ERROR(ConfigError)
EQL_ERROR(InputParseError)

#undef EQL_ERROR

}  // namespace eql
