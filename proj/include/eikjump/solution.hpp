#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eikjump/geometry.hpp"

namespace eikjump {

// One affine piece of a piecewise-affine solution: v(x) = g1*x1 + g2*x2 + c
// on a convex cell, with |g1| = |g2| = 1. In the rotated frame the gradient
// (v_s, v_t) is a unit step along one axis, which is the form the gradient
// labels take in the oracle.
struct AffinePiece {
  ConvexPoly cell;  // convex, counter-clockwise, rotated frame
  int g1 = 1, g2 = 1;
  Rat offset;

  int gs() const { return (g1 + g2) / 2; }
  int gt() const { return (g1 - g2) / 2; }
  Rat eval(const RPoint& p) const {
    return Rat(Rat(g1) * (p.s + p.t) / 2 + Rat(g2) * (p.s - p.t) / 2 + offset);
  }
};

struct PLSolution {
  HDomain domain;
  std::vector<AffinePiece> pieces;
};

PLSolution negate(const PLSolution& v);

// Value at a point of the closed domain (any containing cell; continuity is
// the validator's business). Throws Error when no cell contains the point.
Rat solution_value(const PLSolution& v, const RPoint& p);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  std::optional<RPoint> witness;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool ok() const {
    for (const CheckResult& c : checks) {
      if (!c.pass) return false;
    }
    return !checks.empty();
  }
};

// Checks, in order: structure (labels and convex cells), tiling, continuity
// across shared edges, zero trace on the domain boundary, and the pointwise
// bound |v| <= d_l1(., boundary). The bound is verified exactly at every
// vertex of the overlay of v's cells with a reference cell complex on which
// the distance is affine (both sides are affine per overlay cell, so vertex
// checks are exhaustive). The one-argument form builds the reference complex
// from the domain's own distance solution.
ValidationReport validate(const PLSolution& v);
ValidationReport validate(const PLSolution& v, const std::vector<ConvexPoly>& overlay);

struct JumpSegment {
  RPoint a, b;     // rotated endpoints, a before b along the carrier line
  Rat nu_s, nu_t;  // primitive rotated normal, lower- to higher-indexed piece
  Q2 length;       // world H^1
};

struct JumpSet {
  int component = 1;  // which world gradient component jumps here
  std::vector<JumpSegment> segments;
  Q2 total_length;
};

// Interior shared edges where the respective world gradient component
// differs between the two incident pieces, merged maximally along collinear
// runs. Throws NonManifoldEdge when an interior edge portion is bounded by
// more or fewer than two pieces.
std::pair<JumpSet, JumpSet> jump_sets(const PLSolution& v);

Q2 functional_F(const PLSolution& v);
// Jump length inside the region only (exact segment clipping).
Q2 functional_F(const PLSolution& v, const HDomain& region);

// Exact integral of v times a monomial basis function over the domain,
// world measure. Basis in graded-lex order: 1, x1, x2, x1^2, x1*x2, x2^2.
// Throws UnsupportedBasisIndex beyond that.
Q2 integral(const PLSolution& v, int basis_index = 1);

// Exact (integral of H^0 of slice counts, H^1) for a jump set projected
// onto the given world axis; the integral never exceeds the length.
std::pair<Q2, Q2> slicing_count(const JumpSet& j, int projection_axis);

}  // namespace eikjump
