#pragma once

#include <stdexcept>
#include <string>

namespace zzkit {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ZZKIT_DEFINE_ERROR(Name)              \
  class Name : public Error {                 \
   public:                                    \
    using Error::Error;                       \
  }

// Invalid arguments that violate a documented precondition or invariant.
ZZKIT_DEFINE_ERROR(InvalidArgument);

// circuit model
ZZKIT_DEFINE_ERROR(ConvergenceError);
ZZKIT_DEFINE_ERROR(FitDivergedError);
ZZKIT_DEFINE_ERROR(IllConditionedError);
ZZKIT_DEFINE_ERROR(NonPhysicalModeError);
ZZKIT_DEFINE_ERROR(DimensionMismatchError);

// spectrum
ZZKIT_DEFINE_ERROR(TruncationError);
ZZKIT_DEFINE_ERROR(DegenerateLabelError);
ZZKIT_DEFINE_ERROR(AmbiguousLabelError);
ZZKIT_DEFINE_ERROR(PoleError);
ZZKIT_DEFINE_ERROR(DomainError);
ZZKIT_DEFINE_ERROR(NoCrossingError);

// dynamics
ZZKIT_DEFINE_ERROR(UnsupportedError);
ZZKIT_DEFINE_ERROR(StiffnessError);
ZZKIT_DEFINE_ERROR(PositivityError);
ZZKIT_DEFINE_ERROR(ResolutionError);
ZZKIT_DEFINE_ERROR(FitError);
ZZKIT_DEFINE_ERROR(StochasticityError);

// optimizer
ZZKIT_DEFINE_ERROR(NoFeasibleCandidateError);

// io
ZZKIT_DEFINE_ERROR(ConfigError);

#undef ZZKIT_DEFINE_ERROR

}  // namespace zzkit
