#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "eikjump/distance_solution.hpp"
#include "eikjump/errors.hpp"
#include "eikjump/solution.hpp"
#include "eikjump/weight.hpp"

using namespace eikjump;

namespace {

GeneralDomain unit_square() {
  return build_general_domain(
      {{WPoint{Rat(-1), Rat(-1)}, WPoint{Rat(1), Rat(-1)},
        WPoint{Rat(1), Rat(1)}, WPoint{Rat(-1), Rat(1)}}});
}

HDomain diamond(const Rat& r) {
  return build_hdomain({{RPoint{-r, -r}, RPoint{r, -r}, RPoint{r, r},
                         RPoint{-r, r}}});
}

const WeightH& square_weight() {
  static WeightH w = build_weight(unit_square(), 4);
  return w;
}

// The ring-m blend recomputed from the stored shells, for interface checks.
Q2 ring_formula(const WeightH& w, int m, const RPoint& p) {
  Rat d_in = l1_distance(p, w.shells[m - 2].full);
  Rat d_out = l1_distance(p, w.shells[m - 1].full);
  Q2 a = Q2(Rat(1)) /
         (Q2(Rat((long long)m * m)) * (w.alpha(m - 1) + w.alpha(m)));
  Q2 b = Q2(Rat(1)) / (Q2(Rat((long long)(m + 1) * (m + 1))) *
                       (w.alpha(m) + w.alpha(m + 1)));
  return (Q2(d_out) * a + Q2(d_in) * b) / Q2(d_in + d_out);
}

Q2 plateau(const WeightH& w) {
  return Q2(Rat(1)) / (Q2(Rat(4)) * (w.alpha(1) + w.alpha(2)));
}

Rat rnd_frac(std::mt19937& rng, int den = 64) {
  std::uniform_int_distribution<int> num(0, den);
  return Rat(num(rng), den);
}

RPoint boundary_sample(const HDomain& dom, std::mt19937& rng) {
  std::uniform_int_distribution<size_t> pick(0, dom.faces.size() - 1);
  const Face& f = dom.faces[pick(rng)];
  Rat u = f.lo + (f.hi - f.lo) * rnd_frac(rng);
  return f.at(u);
}

std::vector<ConvexPoly> own_cells(const PLSolution& v) {
  std::vector<ConvexPoly> cells;
  for (const AffinePiece& p : v.pieces) cells.push_back(p.cell);
  return cells;
}

}  // namespace

TEST_CASE("unit square builds four certified shells") {
  const WeightH& w = square_weight();
  REQUIRE(w.n_built() == 4);
  CHECK(w.truncation_note.empty());
  CHECK(w.alpha_ext.size() == 1);
  CHECK(w.eval_shells() == 4);

  Rat area_sum(0);
  for (int n = 1; n <= 4; ++n) {
    const WeightShell& s = w.shells[n - 1];
    CHECK(s.cert.min_distance >= Rat(2, 2 * n + 1));
    CHECK(s.cert.min_distance <= Rat(1, n));
    CHECK(s.alpha >= Q2(Rat(1)));
    CHECK(s.delta_hat > Q2(Rat(0)));
    area_sum += s.ring.world_area();
    if (n > 1) {
      // Strict nesting.
      CHECK(w.shells[n - 2].full.world_area() < s.full.world_area());
      CHECK(s.ring.world_area() ==
            s.full.world_area() - w.shells[n - 2].full.world_area());
    }
  }
  CHECK(area_sum == w.shells[3].full.world_area());
  CHECK(w.shells[0].ring.world_area() == w.shells[0].full.world_area());
}

TEST_CASE("weight is the plateau constant on the innermost shell") {
  const WeightH& w = square_weight();
  CHECK(h_eval(w, WPoint{Rat(0), Rat(0)}) == plateau(w));
  // Any point of Omega_1 gives the same constant.
  std::mt19937 rng(7);
  Rat s0, s1, t0, t1;
  w.shells[0].full.bounding_box(s0, s1, t0, t1);
  int hits = 0;
  while (hits < 50) {
    RPoint p{s0 + (s1 - s0) * rnd_frac(rng), t0 + (t1 - t0) * rnd_frac(rng)};
    if (!w.shells[0].full.contains_closed(p)) continue;
    ++hits;
    CHECK(h_eval(w, to_world(p)) == plateau(w));
  }
}

TEST_CASE("one-sided formulas agree exactly at interface points") {
  const WeightH& w = square_weight();
  std::mt19937 rng(11);
  for (int n = 1; n <= 3; ++n) {
    for (int k = 0; k < 334; ++k) {
      RPoint p = boundary_sample(w.shells[n - 1].full, rng);
      Q2 inner = n == 1 ? plateau(w) : ring_formula(w, n, p);
      Q2 outer = ring_formula(w, n + 1, p);
      REQUIRE(inner == outer);
      REQUIRE(h_eval(w, to_world(p)) == inner);
    }
  }
}

TEST_CASE("weight is positive and below the shell decay bound") {
  const WeightH& w = square_weight();
  std::mt19937 rng(13);
  for (int n = 1; n <= 4; ++n) {
    const HDomain& outer = w.shells[n - 1].full;
    Rat s0, s1, t0, t1;
    outer.bounding_box(s0, s1, t0, t1);
    int hits = 0;
    while (hits < 1000) {
      RPoint p{s0 + (s1 - s0) * rnd_frac(rng, 128),
               t0 + (t1 - t0) * rnd_frac(rng, 128)};
      if (!outer.contains_closed(p)) continue;
      if (n > 1 && w.shells[n - 2].full.contains(p)) continue;
      ++hits;
      Q2 h = h_eval(w, to_world(p));
      CHECK(h > Q2(Rat(0)));
      CHECK(h * w.alpha(n) * Q2(Rat((long long)n * n)) <= Q2(Rat(2)));
    }
  }
}

TEST_CASE("evaluation stops at the built shells") {
  const WeightH& w = square_weight();
  CHECK_THROWS_AS(h_eval(w, WPoint{Rat(0), Rat(99, 100)}), OutsideBuiltShells);
  CHECK_THROWS_AS(h_eval(w, WPoint{Rat(2), Rat(0)}), OutsideBuiltShells);

  // Without the extra ring constant the outermost ring loses evaluability.
  WeightH clipped = w;
  clipped.alpha_ext.clear();
  CHECK(clipped.eval_shells() == 3);
  std::mt19937 rng(17);
  int hits = 0;
  Rat s0, s1, t0, t1;
  w.shells[3].full.bounding_box(s0, s1, t0, t1);
  while (hits < 20) {
    RPoint p{s0 + (s1 - s0) * rnd_frac(rng, 128),
             t0 + (t1 - t0) * rnd_frac(rng, 128)};
    if (!w.shells[3].full.contains_closed(p) ||
        w.shells[2].full.contains_closed(p))
      continue;
    ++hits;
    CHECK(h_eval(w, to_world(p)) > Q2(Rat(0)));
    CHECK_THROWS_AS(h_eval(clipped, to_world(p)), OutsideBuiltShells);
  }
}

TEST_CASE("a tiny diamond leaves no shells") {
  WeightH w = build_weight(diamond(Rat(1, 4)), 2);
  CHECK(w.n_built() == 0);
  CHECK(!w.truncation_note.empty());
  CHECK_THROWS_AS(h_eval(w, WPoint{Rat(0), Rat(0)}), OutsideBuiltShells);
}

TEST_CASE("build rejects a depth below two") {
  CHECK_THROWS_AS(build_weight(diamond(Rat(3)), 1), Error);
}

TEST_CASE("diamond shells are nested frames") {
  WeightH w = build_weight(diamond(Rat(3)), 2);
  REQUIRE(w.n_built() == 2);

  // First shell: the grid square snapped inside {d >= 8/11}; its distance
  // solution is the square pyramid, whose two diagonal ridges have world
  // length 9/2 each.
  Rat s0, s1, t0, t1;
  w.shells[0].full.bounding_box(s0, s1, t0, t1);
  CHECK(s0 == Rat(-9, 4));
  CHECK(s1 == Rat(9, 4));
  CHECK(t0 == Rat(-9, 4));
  CHECK(t1 == Rat(9, 4));
  CHECK(w.shells[0].delta_hat == Q2(Rat(9)));

  // Second ring is a frame: one component with one hole.
  CHECK(w.shells[1].ring.component_count() == 1);
  CHECK(w.shells[1].ring.loops.size() == 2);

  // Interface continuity across the inner boundary.
  std::mt19937 rng(19);
  for (int k = 0; k < 100; ++k) {
    RPoint p = boundary_sample(w.shells[0].full, rng);
    CHECK(ring_formula(w, 2, p) == plateau(w));
  }
}

TEST_CASE("shell solution layers glue into valid solutions with growing F") {
  const WeightH& w = square_weight();
  LazySolution u = shell_solution(w);
  REQUIRE(u.truncation == 4);
  CHECK(u.tail_bound == Q2(Rat(1)));

  Q2 prev_f;
  for (int k = 1; k <= 4; ++k) {
    PLSolution vk = truncated_sum(w, u, k);
    CHECK(vk.domain.world_area() == w.shells[k - 1].full.world_area());
    ValidationReport rep = validate(vk, own_cells(vk));
    for (const CheckResult& c : rep.checks) {
      INFO(c.name << ": " << c.detail);
      CHECK(c.pass);
    }
    Q2 fk = functional_F(vk);
    if (k > 1) CHECK(fk > prev_f);
    prev_f = fk;
  }
  CHECK_THROWS_AS(truncated_sum(w, u, 5), Error);
}

TEST_CASE("weighted functional encloses the shell solution below the series bound") {
  const WeightH& w = square_weight();
  LazySolution u = shell_solution(w);

  FhEnclosure r8 = functional_Fh(w, u, 8);
  CHECK(r8.lower > Q2(Rat(0)));
  CHECK(r8.lower <= r8.upper);
  CHECK(r8.tail == Q2(Rat(1)));
  //

  // Upper end stays below the partial series sum, and the whole budget
  // stays below 2*pi^2/3 (= 6.5797...): compare against 6.5 exactly.
  Q2 partial(Rat(4) + Rat(1) + Rat(4, 9) + Rat(1, 4));
  CHECK(r8.upper <= partial);
  CHECK(r8.upper + r8.tail < Q2(Rat(13, 2)));

  // Doubling the order tightens the bracket without leaving it.
  FhEnclosure r16 = functional_Fh(w, u, 16);
  CHECK(r16.lower >= r8.lower);
  CHECK(r16.upper <= r8.upper);
  CHECK(r16.lower <= r16.upper);
  CHECK(r16.tail == r8.tail);
  CHECK(r16.upper - r16.lower < r8.upper - r8.lower);
}

TEST_CASE("weighted functional on plain solutions") {
  const WeightH& w = square_weight();
  LazySolution u = shell_solution(w);

  // Jumps confined to the first two shells: exact part only, empty tail.
  PLSolution v2 = truncated_sum(w, u, 2);
  FhEnclosure r = functional_Fh(w, v2, 8);
  CHECK(r.tail == Q2(Rat(0)));
  CHECK(r.lower > Q2(Rat(0)));
  CHECK(r.lower <= r.upper);

  // A jump-free solution integrates to an exact zero.
  PLSolution flat;
  flat.domain = diamond(Rat(1, 8));
  AffinePiece piece;
  piece.cell = {RPoint{Rat(-1, 8), Rat(-1, 8)}, RPoint{Rat(1, 8), Rat(-1, 8)},
                RPoint{Rat(1, 8), Rat(1, 8)}, RPoint{Rat(-1, 8), Rat(1, 8)}};
  piece.g1 = 1;
  piece.g2 = 1;
  piece.offset = Rat(0);
  flat.pieces.push_back(piece);
  FhEnclosure z = functional_Fh(w, flat, 4);
  CHECK(z.lower == Q2(Rat(0)));
  CHECK(z.upper == Q2(Rat(0)));
  CHECK(z.tail == Q2(Rat(0)));

  // Jumps reaching past the built shells are refused.
  PLSolution wide = distance_solution(diamond(Rat(7, 8)));
  CHECK_THROWS_AS(functional_Fh(w, wide, 8), OutsideBuiltShells);
}

TEST_CASE("truncated evaluability still brackets the lazy solution") {
  const WeightH& w = square_weight();
  LazySolution u = shell_solution(w);
  FhEnclosure full = functional_Fh(w, u, 8);

  WeightH clipped = w;
  clipped.alpha_ext.clear();
  FhEnclosure part = functional_Fh(clipped, u, 8);
  CHECK(part.tail == Q2(Rat(4, 3)));
  CHECK(part.lower <= part.upper);
  CHECK(part.upper <= full.upper);
  // Both enclose the same true value.
  CHECK(part.upper + part.tail >= full.lower);
  CHECK(full.upper + full.tail >= part.lower);
}
