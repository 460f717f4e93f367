#pragma once

#include <stdexcept>
#include <string>

namespace kpplab {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define KPPLAB_DEFINE_ERROR(Name)                                   \
    struct Name : Error {                                           \
        explicit Name(const std::string& msg) : Error(msg) {}       \
    }

// potentials
KPPLAB_DEFINE_ERROR(NonPositiveInfimum);
KPPLAB_DEFINE_ERROR(EmptyPeriod);

// spectrum
KPPLAB_DEFINE_ERROR(NoConvergence);

// frontspeed
KPPLAB_DEFINE_ERROR(NotPositive);
KPPLAB_DEFINE_ERROR(ResidualTooLarge);
KPPLAB_DEFINE_ERROR(EdgeFailure);

// kpp_sim
KPPLAB_DEFINE_ERROR(RangeViolation);
KPPLAB_DEFINE_ERROR(BoundaryContamination);
KPPLAB_DEFINE_ERROR(LevelNeverReached);
KPPLAB_DEFINE_ERROR(SandwichViolation);
KPPLAB_DEFINE_ERROR(NoEpsilon);
KPPLAB_DEFINE_ERROR(WeightVerificationFailed);

// kam_reduce
KPPLAB_DEFINE_ERROR(SmallDivisor);
KPPLAB_DEFINE_ERROR(SmallnessViolated);
KPPLAB_DEFINE_ERROR(DivergedIteration);
KPPLAB_DEFINE_ERROR(HyperbolicLimit);
KPPLAB_DEFINE_ERROR(ResonanceEncountered);
KPPLAB_DEFINE_ERROR(NotParabolic);
KPPLAB_DEFINE_ERROR(ConjugacyTooFar);

// cli_io
KPPLAB_DEFINE_ERROR(ConfigError);

#undef KPPLAB_DEFINE_ERROR

}  // namespace kpplab
