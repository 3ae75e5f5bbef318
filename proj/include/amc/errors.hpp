#pragma once

#include <stdexcept>
#include <string>

namespace amc {

/// Base of every error raised by the library. The CLI maps these to exit
/// code 1 (a check failed at run time) or 2 (bad input), see tools/.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define AMC_DEFINE_ERROR(Name)          \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  }

// Precondition failures on user-supplied arguments.
AMC_DEFINE_ERROR(InvalidArgument);
AMC_DEFINE_ERROR(InvalidState);
AMC_DEFINE_ERROR(InvalidSpec);
AMC_DEFINE_ERROR(ShapeMismatch);
AMC_DEFINE_ERROR(DegenerateRectangle);

// Simulation contract violations.
AMC_DEFINE_ERROR(JumpBoundViolation);
AMC_DEFINE_ERROR(NonFinite);
AMC_DEFINE_ERROR(NonFiniteDensity);

// Estimation outcomes with nothing to report.
AMC_DEFINE_ERROR(EmptyEnsemble);
AMC_DEFINE_ERROR(AllCensored);
AMC_DEFINE_ERROR(NoSuccess);
AMC_DEFINE_ERROR(ConstantSeries);

// Numerical limits.
AMC_DEFINE_ERROR(PrecisionExhausted);
AMC_DEFINE_ERROR(NotReversible);
AMC_DEFINE_ERROR(DegenerateResidual);

#undef AMC_DEFINE_ERROR

}  // namespace amc
