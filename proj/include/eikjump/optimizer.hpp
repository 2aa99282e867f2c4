#pragma once

#include <string>
#include <vector>

#include "eikjump/geometry.hpp"
#include "eikjump/q2.hpp"
#include "eikjump/solution.hpp"
#include "eikjump/weight.hpp"

namespace eikjump {

// Knobs shared by both searches. `pitch` fixes the candidate grid for the
// unweighted search; `restarts` counts independent starts beyond the two
// canonical single-part ones; `max_iters` caps accepted moves per start.
struct SearchParams {
  Rat pitch = Rat(1) / Rat(2);
  unsigned seed = 0;
  int restarts = 4;
  int max_iters = 64;
};

// One evaluated candidate: a running evaluation index, a human-readable
// move label, the objective (F, or the F_h upper bound plus tail), and
// whether the search moved to the candidate.
struct TraceRow {
  long long iteration = 0;
  std::string move;
  Q2 value;
  bool accepted = false;
};

// CSV rendering of a trace: header plus one line per row, exact values.
std::string trace_csv(const std::vector<TraceRow>& trace);

struct SearchResult {
  PLSolution best;
  Q2 value;
  std::vector<TraceRow> trace;
};

// Greedy first-improvement descent with restarts over signed grid
// partitions of the domain: a state assigns every pitch cell to a part and
// every part a sign, and the candidate it denotes is the glued signed
// distance solution of the parts. Moves: flip a part's sign, merge two
// adjacent parts (either resulting sign), split a part along a grid line
// (split-off side keeping or flipping the sign, boundary-vertex lines tried
// first), and replace a part by the cells-grouped pieces of its own
// distance solution. Starts: the whole-domain distance solution, its
// negation, then seeded random split/flip states. Deterministic for a
// fixed seed. Throws NotGridAligned when the boundary is off the pitch
// grid.
SearchResult minimize_F(const HDomain& domain, const SearchParams& params);

// World-polygon entry point: accepted only when the domain is
// hypothesis-compliant, i.e. every face normal is diagonal; otherwise
// HypothesisHViolated.
SearchResult minimize_F(const GeneralDomain& domain, const SearchParams& params);

struct SearchResultH {
  LazySolution best;
  FhEnclosure enclosure;
  std::vector<TraceRow> trace;
};

// The weighted variant, restricted to the built shells: candidates are the
// shell solution with a choice of sign per kept layer (the outermost kept
// layer stays positive so the enclosure's rim and tail terms remain valid
// for every candidate), the objective is the enclosure upper end plus the
// tail, and the search is plain greedy descent from the all-positive seed.
// A trivial weight delegates to minimize_F on its domain. Throws
// OutsideBuiltShells when no shells were built.
SearchResultH minimize_Fh(const WeightH& weight, const SearchParams& params);

struct LexChoice {
  PLSolution chosen;
  bool multiple_survivors = false;
};

// Among candidates of equal objective, iteratively keeps the argmax of the
// exact moment integral of u against the k-th monomial basis function for
// k = 1..depth. Survivors past the last round agree on all tested moments;
// the lowest-serialization one is returned with the flag set. Throws
// EmptyCandidateSet on an empty input.
LexChoice lexicographic_select(const std::vector<PLSolution>& candidates, int depth);

}  // namespace eikjump
