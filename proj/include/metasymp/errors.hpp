#pragma once

#include <stdexcept>
#include <string>

namespace metasymp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define METASYMP_ERROR(Name)         \
  class Name : public Error {        \
   public:                           \
    using Error::Error;              \
  };

METASYMP_ERROR(DimensionError)
METASYMP_ERROR(NotSymplectic)
METASYMP_ERROR(NotFree)
METASYMP_ERROR(InvalidGenerator)
METASYMP_ERROR(FixedPointError)        // S has eigenvalue 1
METASYMP_ERROR(CayleyDomainError)      // M − ½J singular
METASYMP_ERROR(DegenerateHessian)      // W_xx singular
METASYMP_ERROR(DecompositionError)
METASYMP_ERROR(SymmetryError)
METASYMP_ERROR(CompositionDegenerate)  // M + M' singular
METASYMP_ERROR(FresnelDegenerate)
METASYMP_ERROR(GridOverflow)
METASYMP_ERROR(NumericalFailure)
METASYMP_ERROR(UnknownSuite)

#undef METASYMP_ERROR

}  // namespace metasymp
