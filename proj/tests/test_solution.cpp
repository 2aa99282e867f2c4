#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "eikjump/distance_solution.hpp"
#include "eikjump/errors.hpp"
#include "eikjump/solution.hpp"

using namespace eikjump;

namespace {

RLoop rect_loop(long long s0, long long s1, long long t0, long long t1) {
  return {{Rat(s0), Rat(t0)}, {Rat(s1), Rat(t0)}, {Rat(s1), Rat(t1)}, {Rat(s0), Rat(t1)}};
}

HDomain rect_domain(long long s0, long long s1, long long t0, long long t1) {
  return build_hdomain({rect_loop(s0, s1, t0, t1)});
}

AffinePiece piece(ConvexPoly cell, int g1, int g2, Rat offset) {
  AffinePiece p;
  p.cell = std::move(cell);
  p.g1 = g1;
  p.g2 = g2;
  p.offset = std::move(offset);
  return p;
}

// distance pyramid on the world unit diamond (rotated square [-1,1]^2):
// one piece per quadrant of the rotated frame
PLSolution unit_pyramid() {
  PLSolution v;
  v.domain = rect_domain(-1, 1, -1, 1);
  ConvexPoly right{{Rat(0), Rat(0)}, {Rat(1), Rat(-1)}, {Rat(1), Rat(1)}};
  ConvexPoly top{{Rat(0), Rat(0)}, {Rat(1), Rat(1)}, {Rat(-1), Rat(1)}};
  ConvexPoly left{{Rat(0), Rat(0)}, {Rat(-1), Rat(1)}, {Rat(-1), Rat(-1)}};
  ConvexPoly bottom{{Rat(0), Rat(0)}, {Rat(-1), Rat(-1)}, {Rat(1), Rat(-1)}};
  v.pieces.push_back(piece(right, -1, -1, Rat(1)));   // 1 - s
  v.pieces.push_back(piece(top, -1, 1, Rat(1)));      // 1 - t
  v.pieces.push_back(piece(left, 1, 1, Rat(1)));      // 1 + s
  v.pieces.push_back(piece(bottom, 1, -1, Rat(1)));   // 1 + t
  return v;
}

std::vector<ConvexPoly> own_cells(const PLSolution& v) {
  std::vector<ConvexPoly> out;
  for (const AffinePiece& p : v.pieces) out.push_back(p.cell);
  return out;
}

const CheckResult& check_named(const ValidationReport& r, const std::string& name) {
  for (const CheckResult& c : r.checks) {
    if (c.name == name) return c;
  }
  REQUIRE(false);
  return r.checks.front();
}

}  // namespace

TEST_CASE("pyramid on the unit diamond validates") {
  PLSolution v = unit_pyramid();
  ValidationReport rep = validate(v, own_cells(v));
  for (const CheckResult& c : rep.checks) {
    INFO(c.name, ": ", c.detail);
    CHECK(c.pass);
  }
  CHECK(rep.ok());
  CHECK(rep.checks.size() == 5);

  // full validation path that derives the overlay from the distance solution
  CHECK(validate(v).ok());
  CHECK(validate(negate(v)).ok());
}

TEST_CASE("pyramid jump sets are the world axes through the center") {
  PLSolution v = unit_pyramid();
  auto [j1, j2] = jump_sets(v);
  CHECK(j1.component == 1);
  CHECK(j2.component == 2);

  // collinear fragments on each diagonal merge into a single segment
  REQUIRE(j1.segments.size() == 1);
  REQUIRE(j2.segments.size() == 1);
  CHECK(j1.total_length == Q2(Rat(2)));
  CHECK(j2.total_length == Q2(Rat(2)));

  // J1 is the world segment {x1 = 0}, rotated anti-diagonal
  const JumpSegment& s1 = j1.segments[0];
  CHECK(s1.a.s + s1.a.t == 0);
  CHECK(s1.b.s + s1.b.t == 0);
  CHECK(s1.length == Q2(Rat(2)));
  WPoint wa = to_world(s1.a), wb = to_world(s1.b);
  CHECK(wa.x1 == 0);
  CHECK(wb.x1 == 0);

  // the normal points from the g1 = -1 side (x1 > 0) toward x1 < 0
  Rat nu_x1 = Rat(s1.nu_s + s1.nu_t) / 2;
  CHECK(nu_x1 < 0);
  CHECK(s1.nu_s == s1.nu_t);  // world-axis normal of a world-axis segment

  CHECK(functional_F(v) == Q2(Rat(4)));
  CHECK(functional_F(negate(v)) == Q2(Rat(4)));
}

TEST_CASE("jump length restricted to a region clips exactly") {
  PLSolution v = unit_pyramid();
  CHECK(functional_F(v, v.domain) == Q2(Rat(4)));

  // upper half (rotated): keeps one half of each diagonal
  CHECK(functional_F(v, rect_domain(-1, 1, 0, 1)) == Q2(Rat(2)));

  // quarter: J2 diagonal crosses it, J1 only touches it at the origin
  CHECK(functional_F(v, rect_domain(0, 1, 0, 1)) == Q2(Rat(1)));

  // the opposite quarter holds the other half of J1
  CHECK(functional_F(v, rect_domain(-1, 0, 0, 1)) == Q2(Rat(1)));

  // a region the jumps never enter
  HDomain off = build_hdomain({{{Rat(1, 2), Rat(-1, 4)},
                                {Rat(1), Rat(-1, 4)},
                                {Rat(1), Rat(1, 4)},
                                {Rat(1, 2), Rat(1, 4)}}});
  CHECK(functional_F(v, off) == Q2(Rat(0)));
}

TEST_CASE("continuity violations are caught and isolated") {
  PLSolution v = unit_pyramid();
  // replace the top piece by t - 1: still vanishes on its outer face, but
  // disagrees with its neighbours along the diagonals
  v.pieces[1] = piece(v.pieces[1].cell, 1, -1, Rat(-1));
  ValidationReport rep = validate(v, own_cells(v));
  CHECK(!rep.ok());
  CHECK(check_named(rep, "structure").pass);
  CHECK(check_named(rep, "tiling").pass);
  CHECK(!check_named(rep, "continuity").pass);
  CHECK(check_named(rep, "continuity").witness.has_value());
  CHECK(check_named(rep, "zero trace").pass);
}

TEST_CASE("zero trace and the distance bound fail together for v = x1 + x2") {
  PLSolution v;
  v.domain = rect_domain(0, 2, -1, 1);
  ConvexPoly cell{{Rat(0), Rat(-1)}, {Rat(2), Rat(-1)}, {Rat(2), Rat(1)}, {Rat(0), Rat(1)}};
  v.pieces.push_back(piece(cell, 1, 1, Rat(0)));  // v = s
  ValidationReport rep = validate(v, own_cells(v));
  CHECK(check_named(rep, "structure").pass);
  CHECK(check_named(rep, "tiling").pass);
  CHECK(check_named(rep, "continuity").pass);
  CHECK(!check_named(rep, "zero trace").pass);
  CHECK(!check_named(rep, "ebound").pass);
}

TEST_CASE("tiling violations are caught") {
  PLSolution v = unit_pyramid();

  SUBCASE("missing piece") {
    v.pieces.pop_back();
    ValidationReport rep = validate(v, own_cells(v));
    CHECK(!check_named(rep, "tiling").pass);
  }

  SUBCASE("overlapping pieces") {
    v.pieces.push_back(v.pieces[0]);
    ValidationReport rep = validate(v, own_cells(v));
    CHECK(!check_named(rep, "tiling").pass);
  }

  SUBCASE("cell protrudes past the domain") {
    v.pieces[0].cell = ConvexPoly{{Rat(0), Rat(0)}, {Rat(2), Rat(-2)}, {Rat(2), Rat(2)}};
    ValidationReport rep = validate(v, own_cells(v));
    CHECK(!check_named(rep, "tiling").pass);
  }
}

TEST_CASE("gradient labels must be unit") {
  PLSolution v = unit_pyramid();
  v.pieces[0].g1 = 0;
  ValidationReport rep = validate(v, own_cells(v));
  CHECK(!check_named(rep, "structure").pass);
  CHECK(!rep.ok());
}

TEST_CASE("uniform gradient has empty jump sets, T-junctions included") {
  PLSolution v;
  v.domain = rect_domain(0, 2, 0, 2);
  // three cells, one T-junction at (1,1); all carry the same affine function
  ConvexPoly a{{Rat(0), Rat(0)}, {Rat(2), Rat(0)}, {Rat(2), Rat(1)}, {Rat(0), Rat(1)}};
  ConvexPoly b{{Rat(0), Rat(1)}, {Rat(1), Rat(1)}, {Rat(1), Rat(2)}, {Rat(0), Rat(2)}};
  ConvexPoly c{{Rat(1), Rat(1)}, {Rat(2), Rat(1)}, {Rat(2), Rat(2)}, {Rat(1), Rat(2)}};
  for (const ConvexPoly& cell : {a, b, c}) v.pieces.push_back(piece(cell, 1, 1, Rat(0)));
  auto [j1, j2] = jump_sets(v);
  CHECK(j1.segments.empty());
  CHECK(j2.segments.empty());
  CHECK(functional_F(v) == Q2());
}

TEST_CASE("an edge bounded by three pieces raises NonManifoldEdge") {
  PLSolution v;
  v.domain = rect_domain(0, 2, 0, 2);
  ConvexPoly a{{Rat(0), Rat(0)}, {Rat(2), Rat(0)}, {Rat(2), Rat(1)}, {Rat(0), Rat(1)}};
  ConvexPoly b{{Rat(0), Rat(1)}, {Rat(2), Rat(1)}, {Rat(2), Rat(2)}, {Rat(0), Rat(2)}};
  ConvexPoly c{{Rat(0), Rat(1)}, {Rat(1), Rat(1)}, {Rat(1), Rat(2)}, {Rat(0), Rat(2)}};
  for (const ConvexPoly& cell : {a, b, c}) v.pieces.push_back(piece(cell, 1, 1, Rat(0)));
  CHECK_THROWS_AS(jump_sets(v), NonManifoldEdge);
}

TEST_CASE("integrals of the pyramid against the monomial basis") {
  PLSolution v = unit_pyramid();
  CHECK(integral(v) == Q2(Rat(2, 3)));
  CHECK(integral(v, 1) == Q2(Rat(2, 3)));
  CHECK(integral(negate(v), 1) == Q2(Rat(-2, 3)));

  // odd moments vanish by symmetry
  CHECK(integral(v, 2) == Q2());
  CHECK(integral(v, 3) == Q2());
  CHECK(integral(v, 5) == Q2());

  // second moments: int d * x1^2 = int d * x2^2 = 1/15
  CHECK(integral(v, 4) == Q2(Rat(1, 15)));
  CHECK(integral(v, 6) == Q2(Rat(1, 15)));

  CHECK_THROWS_AS(integral(v, 0), UnsupportedBasisIndex);
  CHECK_THROWS_AS(integral(v, 7), UnsupportedBasisIndex);
}

TEST_CASE("slice counting against segment length") {
  // single world segment (0,0) -> (1,1), projected onto x2
  JumpSet j;
  j.component = 1;
  RPoint a = to_rotated({Rat(0), Rat(0)});
  RPoint b = to_rotated({Rat(1), Rat(1)});
  j.segments.push_back({a, b, Rat(0), Rat(1), world_length(a, b)});
  j.total_length = j.segments[0].length;
  auto [count2, h1] = slicing_count(j, 2);
  CHECK(count2 == Q2(Rat(1)));
  CHECK(h1 == q2_sqrt2());
  auto [count1, h1b] = slicing_count(j, 1);
  CHECK(count1 == Q2(Rat(1)));
  CHECK(h1b == h1);

  // pyramid jumps: J1 = {x1 = 0} x2 in [-1,1]: zero slices in x1, two in x2
  PLSolution v = unit_pyramid();
  auto [j1, j2] = jump_sets(v);
  auto [c1, l1] = slicing_count(j1, 1);
  CHECK(c1 == Q2());
  CHECK(l1 == Q2(Rat(2)));
  auto [c2, l2] = slicing_count(j1, 2);
  CHECK(c2 == Q2(Rat(2)));
  CHECK(l2 == Q2(Rat(2)));

  CHECK_THROWS_AS(slicing_count(j1, 3), Error);
}
