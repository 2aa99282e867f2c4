#pragma once

#include <stdexcept>
#include <string>

namespace eikjump {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DivisionByZero : Error { using Error::Error; };

// Domain construction.
struct NotRectilinear : Error { using Error::Error; };
struct SelfIntersecting : Error { using Error::Error; };
struct HypothesisHViolated : Error { using Error::Error; };
struct NotAPartition : Error { using Error::Error; };
struct NotGridAligned : Error { using Error::Error; };
struct EmptyDomain : Error { using Error::Error; };

// Shell construction: the domain is too small for the requested level.
struct Infeasible : Error { using Error::Error; };

// Enumeration exceeded its node budget.
struct TooLarge : Error { using Error::Error; };

// Weight evaluation outside the region covered by built shells.
struct OutsideBuiltShells : Error { using Error::Error; };

struct UnsupportedBasisIndex : Error { using Error::Error; };
struct EmptyCandidateSet : Error { using Error::Error; };
struct NonManifoldEdge : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

}  // namespace eikjump
