#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "eikjump/distance_solution.hpp"
#include "eikjump/errors.hpp"
#include "eikjump/optimizer.hpp"
#include "eikjump/oracle.hpp"
#include "eikjump/weight.hpp"

using namespace eikjump;

namespace {

HDomain rect_domain(long long s0, long long s1, long long t0, long long t1) {
  return build_hdomain({{RPoint{Rat(s0), Rat(t0)}, RPoint{Rat(s1), Rat(t0)},
                         RPoint{Rat(s1), Rat(t1)}, RPoint{Rat(s0), Rat(t1)}}});
}

HDomain diamond(const Rat& r) {
  return build_hdomain({{RPoint{-r, -r}, RPoint{r, -r}, RPoint{r, r}, RPoint{-r, r}}});
}

// diamond of radius 3 with a radius-1 diamond attached along one face
HDomain example1_union() {
  return rect_boolean(BoolOp::Union, rect_domain(-3, 3, -3, 3), rect_domain(3, 5, -1, 1))
      .domain;
}

// large square, medium square attached along part of a face, two small
// squares in the reentrant corners
HDomain example2_union() {
  HDomain u =
      rect_boolean(BoolOp::Union, rect_domain(-12, 12, -12, 12), rect_domain(12, 28, -8, 8))
          .domain;
  u = rect_boolean(BoolOp::Union, u, rect_domain(12, 14, -10, -8)).domain;
  return rect_boolean(BoolOp::Union, u, rect_domain(12, 14, 8, 10)).domain;
}

GeneralDomain unit_square() {
  return build_general_domain({{WPoint{Rat(-1), Rat(-1)}, WPoint{Rat(1), Rat(-1)},
                                WPoint{Rat(1), Rat(1)}, WPoint{Rat(-1), Rat(1)}}});
}

SearchParams quick_params(int restarts, int max_iters) {
  SearchParams p;
  p.pitch = Rat(1, 2);
  p.seed = 0;
  p.restarts = restarts;
  p.max_iters = max_iters;
  return p;
}

// true when v equals sgn * distance at a spread of interior probes
bool matches_signed_distance(const PLSolution& v, const HDomain& dom, int sgn) {
  std::vector<RPoint> probes = {{Rat(0), Rat(0)},       {Rat(1, 4), Rat(1, 4)},
                                {Rat(-3, 8), Rat(1, 8)}, {Rat(1, 2), Rat(-1, 2)},
                                {Rat(-5, 8), Rat(-5, 8)}};
  for (const RPoint& p : probes) {
    if (!dom.contains(p)) continue;
    if (solution_value(v, p) != Rat(sgn) * l1_distance(p, dom)) return false;
  }
  return true;
}

// the best value must equal the minimum over all evaluated candidates, and
// accepted non-start rows must strictly descend within their run
void check_trace_shape(const std::vector<TraceRow>& trace, const Q2& final_value) {
  REQUIRE(!trace.empty());
  Q2 run_min = trace[0].value;
  Q2 current = trace[0].value;
  for (const TraceRow& row : trace) {
    if (row.value < run_min) run_min = row.value;
    if (!row.accepted) continue;
    if (row.move.rfind("start", 0) == 0) {
      current = row.value;
    } else {
      CHECK(row.value < current);
      current = row.value;
    }
  }
  CHECK(run_min == final_value);
}

}  // namespace

TEST_CASE("attached diamond: the reflex split beats the distance solution") {
  HDomain dom = example1_union();
  SearchParams p = quick_params(2, 32);
  SearchResult r = minimize_F(dom, p);

  Q2 f_dist = functional_F(distance_solution(dom));
  CHECK(f_dist == Q2(Rat(16)) + q2_sqrt2(Rat(2)));
  CHECK(r.value == Q2(Rat(16)));
  CHECK(r.value < f_dist);
  CHECK(validate(r.best).ok());
  CHECK(functional_F(r.best) == r.value);

  // negation symmetry of the functional
  CHECK(functional_F(negate(r.best)) == r.value);

  REQUIRE(!r.trace.empty());
  CHECK(r.trace.front().move == "start: whole-domain distance");
  CHECK(r.trace.front().value == f_dist);
  bool saw_reflex_cut = false;
  for (const TraceRow& row : r.trace) {
    if (row.accepted && row.move == "split part 0 at s=3 flipped") saw_reflex_cut = true;
  }
  CHECK(saw_reflex_cut);
  check_trace_shape(r.trace, r.value);

  SearchResult again = minimize_F(dom, p);
  CHECK(trace_csv(again.trace) == trace_csv(r.trace));
  CHECK(again.value == r.value);
}

TEST_CASE("four squares: sign-aware partitions undercut both paper values") {
  HDomain dom = example2_union();
  SearchParams p = quick_params(2, 40);
  SearchResult r = minimize_F(dom, p);

  Q2 paper_partition = Q2(Rat(88)) + q2_sqrt2(Rat(24));
  Q2 paper_distance = Q2(Rat(120)) + q2_sqrt2(Rat(16));
  CHECK(functional_F(distance_solution(dom)) == paper_distance);
  CHECK(paper_partition < paper_distance);
  CHECK(r.value <= paper_partition);
  CHECK(validate(r.best).ok());
  check_trace_shape(r.trace, r.value);
}

TEST_CASE("diamond: the search sits on the oracle minimum") {
  HDomain dom = diamond(Rat(1));
  SearchParams p = quick_params(4, 24);
  SearchResult r = minimize_F(dom, p);

  GridMinimum oracle = min_F_grid({dom, Rat(1, 2)});
  CHECK(oracle.value == Q2(Rat(4)));
  CHECK(r.value == oracle.value);
  bool plus = matches_signed_distance(r.best, dom, 1);
  bool minus = matches_signed_distance(r.best, dom, -1);
  CHECK((plus || minus));
  check_trace_shape(r.trace, r.value);
}

TEST_CASE("world-frame entry: diagonal normals pass, axis normals are refused") {
  GeneralDomain world_diamond = build_general_domain(
      {{WPoint{Rat(1), Rat(0)}, WPoint{Rat(0), Rat(1)}, WPoint{Rat(-1), Rat(0)},
        WPoint{Rat(0), Rat(-1)}}});
  SearchParams p = quick_params(2, 16);
  SearchResult r = minimize_F(world_diamond, p);
  CHECK(r.value == Q2(Rat(4)));

  CHECK_THROWS_AS(minimize_F(unit_square(), p), HypothesisHViolated);
}

TEST_CASE("weighted search never returns worse than its shell seed") {
  WeightH w = build_weight(unit_square(), 4);
  REQUIRE(w.n_built() == 4);

  LazySolution seed = shell_solution(w);
  FhEnclosure seed_enc = functional_Fh(w, seed, 6);
  Q2 seed_objective = seed_enc.upper + seed_enc.tail;

  SearchParams p = quick_params(2, 24);
  SearchResultH r = minimize_Fh(w, p);
  Q2 best_objective = r.enclosure.upper + r.enclosure.tail;

  CHECK(best_objective <= seed_objective);
  // sign flips cancel whole ring interfaces, so the drop is strict here
  CHECK(best_objective < seed_objective);
  CHECK(r.enclosure.lower <= r.enclosure.upper);
  CHECK(r.enclosure.tail == seed_enc.tail);
  REQUIRE(r.best.layers.size() == seed.layers.size());
  CHECK(r.best.truncation == seed.truncation);

  // the outermost kept layer keeps its seed sign: the tail accounting
  // depends on it
  const AffinePiece& probe = seed.layers.back().pieces.front();
  RPoint inside = poly_centroid(probe.cell);
  CHECK(solution_value(r.best.layers.back(), inside) ==
        solution_value(seed.layers.back(), inside));
  CHECK(solution_value(r.best.layers.back(), inside) > 0);

  REQUIRE(!r.trace.empty());
  CHECK(r.trace.front().accepted);
  Q2 current = r.trace.front().value;
  for (size_t i = 1; i < r.trace.size(); ++i) {
    if (r.trace[i].accepted) {
      CHECK(r.trace[i].value < current);
      current = r.trace[i].value;
    }
  }
  CHECK(current == best_objective);
}

TEST_CASE("a constant weight reduces the weighted search to the plain one") {
  HDomain dom = diamond(Rat(1));
  WeightH w = trivial_weight(dom);

  CHECK(h_eval(w, WPoint{Rat(0), Rat(0)}) == Q2(Rat(1)));
  CHECK(h_eval(w, WPoint{Rat(1, 2), Rat(1, 4)}) == Q2(Rat(1)));
  CHECK_THROWS_AS(h_eval(w, WPoint{Rat(5), Rat(5)}), OutsideBuiltShells);

  LazySolution shell = shell_solution(w);
  REQUIRE(shell.layers.size() == 1);
  CHECK(shell.tail_bound == Q2(Rat(0)));
  FhEnclosure shell_enc = functional_Fh(w, shell, 4);
  CHECK(shell_enc.lower == shell_enc.upper);
  CHECK(shell_enc.upper == functional_F(distance_solution(dom)));

  SearchParams p = quick_params(2, 16);
  SearchResult plain = minimize_F(dom, p);
  SearchResultH weighted = minimize_Fh(w, p);
  CHECK(weighted.enclosure.lower == plain.value);
  CHECK(weighted.enclosure.upper == plain.value);
  CHECK(weighted.enclosure.tail == Q2(Rat(0)));
  CHECK(trace_csv(weighted.trace) == trace_csv(plain.trace));
  REQUIRE(weighted.best.layers.size() == 1);
  CHECK(functional_F(weighted.best.layers[0]) == plain.value);
}

TEST_CASE("a weight with no built shells cannot seed the weighted search") {
  WeightH w = build_weight(diamond(Rat(1, 4)), 2);
  REQUIRE(w.n_built() == 0);
  CHECK_THROWS_AS(minimize_Fh(w, quick_params(2, 8)), OutsideBuiltShells);
}

TEST_CASE("lexicographic selection prefers the positive cone on the diamond") {
  HDomain dom = diamond(Rat(1));
  PLSolution d = distance_solution(dom);
  PLSolution nd = negate(d);

  CHECK(integral(d, 1) == Q2(Rat(2, 3)));
  CHECK(integral(nd, 1) == Q2(Rat(-2, 3)));

  LexChoice pick = lexicographic_select({nd, d}, 1);
  CHECK(!pick.multiple_survivors);
  CHECK(solution_value(pick.chosen, RPoint{Rat(0), Rat(0)}) == Rat(1));

  LexChoice sole = lexicographic_select({nd}, 1);
  CHECK(!sole.multiple_survivors);
  CHECK(solution_value(sole.chosen, RPoint{Rat(0), Rat(0)}) == Rat(-1));

  CHECK_THROWS_AS(lexicographic_select({}, 1), EmptyCandidateSet);
}

TEST_CASE("the second moment separates candidates the first one ties") {
  HDomain strip = rect_domain(-2, 2, -1, 1);
  HDomain left = rect_domain(-2, 0, -1, 1);
  HDomain right = rect_domain(0, 2, -1, 1);

  PLSolution a = partition_solution({{left, 1}, {right, -1}});
  PLSolution b = negate(a);
  CHECK(functional_F(a) == functional_F(b));

  // odd under the s-mirror, so the zeroth moments tie at zero
  CHECK(integral(a, 1) == Q2(Rat(0)));
  CHECK(integral(b, 1) == Q2(Rat(0)));
  Q2 ma = integral(a, 2);
  Q2 mb = integral(b, 2);
  REQUIRE(ma != Q2(Rat(0)));
  CHECK(mb == -ma);

  LexChoice shallow = lexicographic_select({a, b}, 1);
  CHECK(shallow.multiple_survivors);

  LexChoice deep = lexicographic_select({a, b}, 2);
  CHECK(!deep.multiple_survivors);
  CHECK(integral(deep.chosen, 2) == (ma < mb ? mb : ma));

  (void)strip;
}

TEST_CASE("traces render as one csv row per evaluation") {
  HDomain dom = diamond(Rat(1));
  SearchResult r = minimize_F(dom, quick_params(2, 8));
  std::string csv = trace_csv(r.trace);
  CHECK(csv.rfind("iteration,move,value,accepted\n", 0) == 0);
  size_t lines = 0;
  for (char c : csv) {
    if (c == '\n') ++lines;
  }
  CHECK(lines == r.trace.size() + 1);
}
