#pragma once

#include <stdexcept>
#include <string>

namespace gridsched {

// Base class for all simulator errors.
struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownEntity : SimError {
    using SimError::SimError;
};

struct InvalidDelay : SimError {
    using SimError::SimError;
};

// An entity exceeded its resumption budget without finishing or blocking.
struct RunawayEntity : SimError {
    using SimError::SimError;
};

struct InvalidRate : SimError {
    using SimError::SimError;
};

struct InvalidResource : SimError {
    using SimError::SimError;
};

struct NoFreePe : SimError {
    using SimError::SimError;
};

struct NoWork : SimError {
    using SimError::SimError;
};

struct ProtocolError : SimError {
    using SimError::SimError;
};

struct InvalidFactor : SimError {
    using SimError::SimError;
};

struct InvalidRating : SimError {
    using SimError::SimError;
};

struct NoResources : SimError {
    using SimError::SimError;
};

struct InfeasibleDeadline : SimError {
    using SimError::SimError;
};

struct EmptyAccumulator : SimError {
    using SimError::SimError;
};

struct IoError : SimError {
    using SimError::SimError;
};

struct ConfigError : SimError {
    using SimError::SimError;
};

}  // namespace gridsched
