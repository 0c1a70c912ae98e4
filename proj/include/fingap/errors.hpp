#pragma once

#include <stdexcept>
#include <string>

namespace fingap {

// Base class for all numerical failures thrown by this library.
struct NumericsError : std::runtime_error {
    explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidInput : NumericsError {
    using NumericsError::NumericsError;
};
struct OutOfDomain : NumericsError {
    using NumericsError::NumericsError;
};
struct NoConvergence : NumericsError {
    using NumericsError::NumericsError;
};
struct QuadratureFailure : NumericsError {
    using NumericsError::NumericsError;
};
struct PathCrossesSpectrum : NumericsError {
    using NumericsError::NumericsError;
};
struct GeometryError : NumericsError {
    using NumericsError::NumericsError;
};
struct BudgetExceeded : NumericsError {
    using NumericsError::NumericsError;
};
struct IterationCap : NumericsError {
    using NumericsError::NumericsError;
};
struct PoleHit : NumericsError {
    using NumericsError::NumericsError;
};
struct PoleProximity : NumericsError {
    using NumericsError::NumericsError;
};
struct TailTooLarge : NumericsError {
    using NumericsError::NumericsError;
};
struct InterlacingViolated : NumericsError {
    using NumericsError::NumericsError;
};
struct RootSeparationFailure : NumericsError {
    using NumericsError::NumericsError;
};
struct DegenerateInterpolation : NumericsError {
    using NumericsError::NumericsError;
};
struct BranchAmbiguity : NumericsError {
    using NumericsError::NumericsError;
};
struct BranchTrackingFailure : NumericsError {
    using NumericsError::NumericsError;
};
struct LimitSetProximity : NumericsError {
    using NumericsError::NumericsError;
};
struct AbelConditionViolated : NumericsError {
    using NumericsError::NumericsError;
};
struct WronskianVanishes : NumericsError {
    using NumericsError::NumericsError;
};
struct ResonanceAtReference : NumericsError {
    using NumericsError::NumericsError;
};
struct ConfigError : NumericsError {
    using NumericsError::NumericsError;
};
struct IoError : NumericsError {
    using NumericsError::NumericsError;
};

}  // namespace fingap
