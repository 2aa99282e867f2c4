#pragma once

#include <functional>
#include <vector>

#include "eikjump/geometry.hpp"
#include "eikjump/q2.hpp"
#include "eikjump/solution.hpp"

namespace eikjump {

// Brute-force ground truth. The 2-D side enumerates every continuous
// piecewise-affine function on a grid-aligned domain that vanishes on the
// boundary, is affine along every lattice edge, and uses only the four
// admissible rotated gradients (+-1, 0) and (0, +-1) per piece. Such a
// function is determined by its values at the lattice vertices: each cell's
// corner quadruple either matches one of the four single-gradient patterns
// or one of the eight odd-corner patterns filled by a diagonal split, and
// the filling is unique. Vertex values are therefore multiples of the pitch
// and bounded by the distance to the boundary, which makes the search
// finite. Functions with kinks interior to lattice edges are outside this
// family by construction; that restriction is the module's scope.
struct GridSpec {
  HDomain domain;  // rotated-frame boundary on the pitch grid
  Rat pitch;
};

struct EnumStats {
  long long solutions = 0;
  long long nodes = 0;  // vertex value assignments attempted
};

// Visits every solution of the family in a deterministic order (row-major
// lexicographic in the vertex values). Every emitted solution has passed
// validate(). Throws TooLarge once the sweep attempts more vertex
// assignments than the node budget, NotGridAligned or EmptyDomain for bad
// input.
EnumStats enumerate_grid_solutions(const GridSpec& spec,
                                   const std::function<void(const PLSolution&)>& visit,
                                   long long node_budget = 100000000LL);

struct GridMinimum {
  Q2 value;
  std::vector<PLSolution> argmin;  // all attaining solutions, visit order
  EnumStats stats;
};

// Exact minimum of F over the family, cross-checked: F from the solution
// module must agree with an independent recount of jumping lattice edges
// and cell diagonals for every enumerated solution.
GridMinimum min_F_grid(const GridSpec& spec, long long node_budget = 100000000LL);

// 1-D counterpart on [-L, L]: u(+-L) = 0 and |u'| = 1 off finitely many
// jumps of u'. Breakpoint representation; u is affine with slope +-1
// between consecutive breakpoints.
struct Solution1D {
  std::vector<Rat> x;  // breakpoints, -L first, L last
  std::vector<Rat> u;  // values at the breakpoints
  int jumps = 0;       // sign changes of u'
};

struct Oracle1DResult {
  bool feasible = false;
  int min_jumps = -1;
  std::vector<Solution1D> solutions;  // all attaining the minimum
};

// Minimum jump count of u' over sign sequences whose run lengths are solved
// symbolically against the two boundary conditions, and the attaining
// solutions. A constant sign cannot return to zero, so max_jumps = 0 is
// infeasible; one jump forces the tent +-(L - |x|).
Oracle1DResult oracle_1d(const Rat& half_length, int max_jumps);

}  // namespace eikjump
