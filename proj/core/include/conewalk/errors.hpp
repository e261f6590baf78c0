#pragma once

#include <stdexcept>
#include <string>

namespace conewalk {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A path container violates its invariants (length mismatch, non-finite values).
struct InvalidPath : Error {
    using Error::Error;
};

// Per-step angular change exceeds the unwinding threshold; refine the grid.
struct StepTooCoarse : Error {
    using Error::Error;
};

// A node is too close to the puncture for angle/winding work.
struct OriginHit : Error {
    using Error::Error;
};

// A diffeomorphism is not strictly increasing (or phi_dot underflows).
struct NonMonotone : Error {
    using Error::Error;
};

struct NonPositivePath : Error {
    using Error::Error;
};

struct OutsideCone : Error {
    using Error::Error;
};

// Split point not strictly inside the interval or not on a grid node.
struct BadSplitPoint : Error {
    using Error::Error;
};

struct MeshTooCoarse : Error {
    using Error::Error;
};

struct DerivativeUnavailable : Error {
    using Error::Error;
};

struct UnstableStep : Error {
    using Error::Error;
};

}  // namespace conewalk
