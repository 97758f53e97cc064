#pragma once

#include <stdexcept>
#include <string>

namespace pentalab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// projective_core
struct DegenerateQuadruple : Error { using Error::Error; };
struct NotCollinear : Error { using Error::Error; };
struct CoincidentArguments : Error { using Error::Error; };
struct DegeneratePosition : Error { using Error::Error; };
struct SingularMap : Error { using Error::Error; };

// invariants
struct UnsupportedWeight : Error { using Error::Error; };
struct NotSingletonOnly : Error { using Error::Error; };

// dynamics / reconstruction
struct MapSingularity : Error { using Error::Error; };
struct DegenerateConstruction : Error { using Error::Error; };
struct WindowExceeded : Error { using Error::Error; };
struct ZeroLeadingInvariant : Error { using Error::Error; };

// condensation
struct SingularInterior : Error { using Error::Error; };
struct NotATilingVertex : Error { using Error::Error; };
struct ZeroVertexLabel : Error { using Error::Error; };
struct NotLiftable : Error { using Error::Error; };
struct UnsupportedPeriod : Error { using Error::Error; };

// vanishing / independence
struct OutOfRange : Error { using Error::Error; };

// cli
struct ParseError : Error { using Error::Error; };

} // namespace pentalab
