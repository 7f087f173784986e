#pragma once

#include <stdexcept>
#include <string>

namespace eqdeg {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// group_core
struct NotOrthogonal : Error { using Error::Error; };
struct CapExceeded : Error { using Error::Error; };
struct AmbiguousIsotropy : Error { using Error::Error; };
struct EmptyDomain : Error { using Error::Error; };

// domain_geometry
struct DimensionMismatch : Error { using Error::Error; };
struct ResolutionTooCoarse : Error { using Error::Error; };
struct OutsideChart : Error { using Error::Error; };

// local_map
struct OutsideDomain : Error { using Error::Error; };
struct NotInvariantSubspace : Error { using Error::Error; };

// degree_engine
struct DegenerateZero : Error { using Error::Error; };
struct DivisibilityViolation : Error { using Error::Error; };
struct Singular : Error { using Error::Error; };
struct ZeroAtEndpoint : Error { using Error::Error; };
struct BoundaryTooClose : Error { using Error::Error; };
struct StepTooCoarse : Error { using Error::Error; };

// hopf_realizer
struct NoRoom : Error { using Error::Error; };
struct Overlap : Error { using Error::Error; };
struct NoValidRadius : Error { using Error::Error; };

// otopy_verifier
struct NotAnOtopy : Error { using Error::Error; };

// cli_app
struct ConfigError : Error { using Error::Error; };

} // namespace eqdeg
