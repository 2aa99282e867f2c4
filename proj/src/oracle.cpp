#include "eikjump/oracle.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <string>
#include <utility>

#include "eikjump/distance_solution.hpp"
#include "eikjump/errors.hpp"

namespace eikjump {

namespace {

// How one cell interpolates its four corner values. Affine cells carry one
// gradient; split cells carry two pieces separated by a cell diagonal.
enum class FillKind {
  Affine,    // single gradient across the cell
  MainDiag,  // split along the (s0,t0)-(s1,t1) diagonal
  AntiDiag,  // split along the (s1,t0)-(s0,t1) diagonal
};

// Rotated gradients (gs, gt) with exactly one entry of modulus 1.
struct RGrad {
  int gs = 0, gt = 0;
};

struct CellFill {
  FillKind kind = FillKind::Affine;
  RGrad lo;  // Affine: the gradient. MainDiag: lower-right piece.
             // AntiDiag: lower-left piece.
  RGrad hi;  // the complementary piece of a split
};

// Corner values in pitch units: a = v00, b = v10, c = v01, d = v11.
// Admissible quadruples are the four single-gradient patterns and the eight
// odd-corner patterns (one corner off by one step from an otherwise constant
// quadruple); anything else, including a flat cell, admits no interpolation
// that is affine along all four edges with the admissible gradients.
bool classify_cell(long long a, long long b, long long c, long long d, CellFill& out) {
  long long B = b - a, T = d - c, L = c - a, R = d - b;
  for (long long e : {B, T, L, R}) {
    if (e < -1 || e > 1) return false;
  }
  if (B == T && L == R && (B != 0) != (L != 0)) {
    out.kind = FillKind::Affine;
    out.lo = B != 0 ? RGrad{(int)B, 0} : RGrad{0, (int)L};
    out.hi = out.lo;
    return true;
  }
  if (B == 0 && L == 0 && T == R && T != 0) {
    // odd corner v11: v = v00 + s*min(s', t')
    int s = (int)T;
    out.kind = FillKind::MainDiag;
    out.lo = {0, s};  // the lower-right piece rides the t ramp
    out.hi = {s, 0};
    return true;
  }
  if (T == 0 && R == 0 && B == L && B != 0) {
    // odd corner v00: v = v00 + s*max(s', t')
    int s = (int)B;
    out.kind = FillKind::MainDiag;
    out.lo = {s, 0};
    out.hi = {0, s};
    return true;
  }
  if (T == 0 && L == 0 && B == -R && B != 0) {
    // odd corner v10: v = v00 + s*min(s', pitch - t')
    int s = (int)B;
    out.kind = FillKind::AntiDiag;
    out.lo = {s, 0};
    out.hi = {0, -s};
    return true;
  }
  if (B == 0 && R == 0 && T == -L && T != 0) {
    // odd corner v01: v = v00 - s*min(t', pitch - s')
    int s = (int)T;
    out.kind = FillKind::AntiDiag;
    out.lo = {0, -s};
    out.hi = {s, 0};
    return true;
  }
  return false;
}

// The rotated gradient of the piece whose closure covers the given side.
// side: 0 bottom, 1 right, 2 top, 3 left.
RGrad side_gradient(const CellFill& f, int side) {
  switch (f.kind) {
    case FillKind::Affine:
      return f.lo;
    case FillKind::MainDiag:
      return (side == 0 || side == 1) ? f.lo : f.hi;
    case FillKind::AntiDiag:
      return (side == 0 || side == 3) ? f.lo : f.hi;
  }
  std::abort();
}

std::pair<int, int> world_grad(const RGrad& g) { return {g.gs + g.gt, g.gs - g.gt}; }

struct Lattice {
  CellGrid grid;
  int nvx = 0, nvy = 0;                    // vertex counts per axis
  std::vector<int8_t> kind;                // 0 irrelevant, 1 boundary, 2 interior
  std::vector<long long> bound;            // |k| cap for interior vertices
  std::vector<std::pair<int, int>> order;  // relevant vertices, row-major

  int vid(int i, int j) const { return j * nvx + i; }
  bool occ(int i, int j) const { return grid.at(i, j); }
  RPoint vertex(int i, int j) const {
    return {Rat(grid.origin_s + Rat(i) * grid.pitch), Rat(grid.origin_t + Rat(j) * grid.pitch)};
  }
};

Lattice build_lattice(const GridSpec& spec) {
  if (spec.domain.empty()) throw EmptyDomain("grid enumeration of an empty domain");
  if (spec.pitch <= 0) throw Error("grid enumeration: pitch must be positive");
  Lattice lat;
  lat.grid = rasterize(spec.domain, spec.pitch);
  lat.nvx = lat.grid.nx + 1;
  lat.nvy = lat.grid.ny + 1;
  lat.kind.assign((size_t)lat.nvx * lat.nvy, 0);
  lat.bound.assign((size_t)lat.nvx * lat.nvy, 0);
  for (int j = 0; j < lat.nvy; ++j) {
    for (int i = 0; i < lat.nvx; ++i) {
      int touching = lat.occ(i - 1, j - 1) + lat.occ(i, j - 1) + lat.occ(i - 1, j) + lat.occ(i, j);
      if (touching == 0) continue;
      int id = lat.vid(i, j);
      if (touching == 4) {
        lat.kind[id] = 2;
        Rat d = l1_distance(lat.vertex(i, j), spec.domain);
        lat.bound[id] = rat_floor(Rat(d / spec.pitch)).convert_to<long long>();
      } else {
        lat.kind[id] = 1;  // touches the complement, so it lies on the boundary
      }
      lat.order.push_back({i, j});
    }
  }
  return lat;
}

// Pieces of the canonical interpolation of one cell, appended to out.
void emit_cell_pieces(const Lattice& lat, const std::vector<long long>& val, int ci, int cj,
                      std::vector<AffinePiece>& out) {
  const Rat& pitch = lat.grid.pitch;
  long long a = val[lat.vid(ci, cj)], b = val[lat.vid(ci + 1, cj)];
  long long c = val[lat.vid(ci, cj + 1)], d = val[lat.vid(ci + 1, cj + 1)];
  CellFill fill;
  if (!classify_cell(a, b, c, d, fill)) throw Error("emitting an inadmissible cell");
  RPoint p00 = lat.vertex(ci, cj);
  Rat s0 = p00.s, t0 = p00.t;
  Rat s1 = Rat(s0 + pitch), t1 = Rat(t0 + pitch);
  Rat v00 = Rat(Rat(a) * pitch);

  // affine piece through (s0, t0) with value v00 there; the one piece that
  // does not reach that corner (the upper-right of an anti-diagonal split)
  // gets its offset corrected afterwards
  auto mk = [&](const RGrad& g, ConvexPoly cell) {
    AffinePiece p;
    p.cell = std::move(cell);
    p.g1 = g.gs + g.gt;
    p.g2 = g.gs - g.gt;
    p.offset = Rat(v00 - Rat(g.gs) * s0 - Rat(g.gt) * t0);
    return p;
  };

  ConvexPoly square{{s0, t0}, {s1, t0}, {s1, t1}, {s0, t1}};
  ConvexPoly lower_right{{s0, t0}, {s1, t0}, {s1, t1}};
  ConvexPoly upper_left{{s0, t0}, {s1, t1}, {s0, t1}};
  ConvexPoly lower_left{{s0, t0}, {s1, t0}, {s0, t1}};
  ConvexPoly upper_right{{s1, t0}, {s1, t1}, {s0, t1}};

  switch (fill.kind) {
    case FillKind::Affine:
      out.push_back(mk(fill.lo, std::move(square)));
      break;
    case FillKind::MainDiag:
      // both pieces pass through (s0, t0) with value v00
      out.push_back(mk(fill.lo, std::move(lower_right)));
      out.push_back(mk(fill.hi, std::move(upper_left)));
      break;
    case FillKind::AntiDiag: {
      AffinePiece lo = mk(fill.lo, std::move(lower_left));
      AffinePiece hi = mk(fill.hi, std::move(upper_right));
      // match the pieces at their shared corner (s1, t0)
      Rat want = Rat(Rat(fill.lo.gs) * s1 + Rat(fill.lo.gt) * t0 + lo.offset);
      hi.offset = Rat(want - Rat(fill.hi.gs) * s1 - Rat(fill.hi.gt) * t0);
      out.push_back(std::move(lo));
      out.push_back(std::move(hi));
      break;
    }
  }
}

PLSolution assemble_solution(const GridSpec& spec, const Lattice& lat,
                             const std::vector<long long>& val) {
  PLSolution v;
  v.domain = spec.domain;
  for (int cj = 0; cj < lat.grid.ny; ++cj) {
    for (int ci = 0; ci < lat.grid.nx; ++ci) {
      if (lat.occ(ci, cj)) emit_cell_pieces(lat, val, ci, cj, v.pieces);
    }
  }
  return v;
}

// Jump measure of an assignment in integer units: `edges` lattice edges with
// one differing world gradient component each, `diags` split-cell diagonals.
// A lattice edge spans one pitch in rotated coordinates (world length
// pitch/sqrt(2)); a cell diagonal is a world-axis step of length pitch.
struct JumpUnits {
  long long edges = 0, diags = 0;
};

Q2 jump_units_to_q2(const JumpUnits& u, const Rat& pitch) {
  Q2 total = q2_sqrt2(Rat(Rat(u.edges) * pitch / 2));
  total += Q2(Rat(Rat(u.diags) * pitch));
  return total;
}

// sign of a + sqrt(2) b, exactly
int sign_rat_sqrt2(long long a, long long b) {
  if (a >= 0 && b >= 0) return (a || b) ? 1 : 0;
  if (a <= 0 && b <= 0) return -((a || b) ? 1 : 0);
  __int128 q = (__int128)a * a - (__int128)2 * b * b;
  int s = q > 0 ? 1 : q < 0 ? -1 : 0;
  return a > 0 ? s : -s;
}

// compare u against w: sign of (u - w) as a jump measure
int cmp_units(const JumpUnits& u, const JumpUnits& w) {
  return sign_rat_sqrt2(2 * (u.diags - w.diags), u.edges - w.edges);
}

// Independent recount of the jump measure, straight from the assignment.
JumpUnits direct_jump_count(const Lattice& lat, const std::vector<long long>& val) {
  auto fill_of = [&](int ci, int cj) {
    CellFill f;
    long long a = val[lat.vid(ci, cj)], b = val[lat.vid(ci + 1, cj)];
    long long c = val[lat.vid(ci, cj + 1)], d = val[lat.vid(ci + 1, cj + 1)];
    if (!classify_cell(a, b, c, d, f)) throw Error("recount hit an inadmissible cell");
    return f;
  };
  JumpUnits u;
  for (int cj = 0; cj < lat.grid.ny; ++cj) {
    for (int ci = 0; ci < lat.grid.nx; ++ci) {
      if (!lat.occ(ci, cj)) continue;
      CellFill f = fill_of(ci, cj);
      if (f.kind != FillKind::Affine) ++u.diags;
      if (lat.occ(ci + 1, cj)) {
        auto [l1, l2] = world_grad(side_gradient(f, 1));
        auto [r1, r2] = world_grad(side_gradient(fill_of(ci + 1, cj), 3));
        u.edges += (l1 != r1) + (l2 != r2);
      }
      if (lat.occ(ci, cj + 1)) {
        auto [b1, b2] = world_grad(side_gradient(f, 2));
        auto [t1, t2] = world_grad(side_gradient(fill_of(ci, cj + 1), 0));
        u.edges += (b1 != t1) + (b2 != t2);
      }
    }
  }
  return u;
}

// Slice-count lower bound. Restricting a solution to a world-axis line
// gives a one-dimensional function with slopes +-1 vanishing at the ends of
// every crossing interval, so each interval forces at least one gradient
// jump there. Lines parallel to an axis sweep bands between consecutive
// lattice diagonals; within one band every line crosses the same staircase
// of cells, and every jump segment covers one band exactly (lattice edges)
// or two (cell diagonals). Unmet band requirements therefore bound the jump
// measure still to come: each missing slice jump costs at least pitch/2 of
// world length.
struct BandBound {
  int nb = 0;  // bands per axis
  // [0]: lines of constant world x1 (bands in s+t), fed by jumps of the
  //      second gradient component; [1]: constant world x2 (bands in s-t),
  //      fed by the first component
  std::vector<int> need[2], cnt[2];
  long long deficit = 0;  // unmet requirements, in pitch/2 world units

  void add(int axis, int band, int dir) {
    if (dir > 0) {
      if (cnt[axis][band]++ < need[axis][band]) --deficit;
    } else {
      if (--cnt[axis][band] < need[axis][band]) ++deficit;
    }
  }
};

BandBound make_band_bound(const CellGrid& g) {
  BandBound b;
  b.nb = g.nx + g.ny;
  for (int axis : {0, 1}) {
    b.need[axis].assign(b.nb, 0);
    b.cnt[axis].assign(b.nb, 0);
  }
  // a line in band B of axis 0 crosses cells with ci+cj in {B-1, B}, upper
  // one first within each column; runs of occupied cells = crossing
  // intervals, each requiring a jump
  for (int B = 0; B < b.nb; ++B) {
    int runs = 0;
    bool in = false;
    for (int ci = 0; ci < g.nx; ++ci) {
      for (int cj : {B - ci, B - 1 - ci}) {
        bool occ = g.at(ci, cj);
        if (occ && !in) ++runs;
        in = occ;
      }
    }
    b.need[0][B] = runs;
    b.deficit += runs;
  }
  // axis 1, band base B - ny: cells with ci-cj in {base, base+1}, lower
  // one first within each column
  for (int B = 0; B < b.nb; ++B) {
    int base = B - g.ny;
    int runs = 0;
    bool in = false;
    for (int ci = 0; ci < g.nx; ++ci) {
      for (int cj : {ci - base - 1, ci - base}) {
        bool occ = g.at(ci, cj);
        if (occ && !in) ++runs;
        in = occ;
      }
    }
    b.need[1][B] = runs;
    b.deficit += runs;
  }
  return b;
}

// Shared depth-first machinery over the relevant vertices in row-major
// order, values in ascending order of k: emissions are lexicographic and
// deterministic. on_cell is called when a value assignment completes the
// cell below-left of the vertex (classification already passed) and may
// veto the branch; on_leaf handles a complete admissible assignment;
// on_unwind undoes whatever on_cell accumulated.
struct SweepHooks {
  // returns false to prune the branch
  std::function<bool(int ci, int cj, const CellFill&)> on_cell;
  std::function<void()> on_leaf;
  std::function<void(int ci, int cj)> on_unwind;
};

struct Sweep {
  const Lattice& lat;
  std::vector<long long> val;
  EnumStats stats;
  long long budget;

  Sweep(const Lattice& l, long long b) : lat(l), val((size_t)l.nvx * l.nvy, 0), budget(b) {}

  void run(const SweepHooks& hooks) { step(hooks, 0); }

  void step(const SweepHooks& hooks, size_t pos) {
    if (pos == lat.order.size()) {
      hooks.on_leaf();
      return;
    }
    auto [i, j] = lat.order[pos];
    int id = lat.vid(i, j);
    long long cap = lat.kind[id] == 2 ? lat.bound[id] : 0;
    long long lo = -cap, hi = cap;
    // edges toward already assigned vertices must stay affine in steps
    if (i > 0 && (lat.occ(i - 1, j - 1) || lat.occ(i - 1, j))) {
      long long w = val[lat.vid(i - 1, j)];
      lo = std::max(lo, w - 1);
      hi = std::min(hi, w + 1);
    }
    if (j > 0 && (lat.occ(i - 1, j - 1) || lat.occ(i, j - 1))) {
      long long w = val[lat.vid(i, j - 1)];
      lo = std::max(lo, w - 1);
      hi = std::min(hi, w + 1);
    }
    for (long long k = lo; k <= hi; ++k) {
      if (++stats.nodes > budget) {
        throw TooLarge("grid sweep passed " + std::to_string(budget) +
                       " vertex assignments; raise the budget to attempt it");
      }
      val[id] = k;
      // assigning the last corner settles the cell below and to the left
      bool completes = i > 0 && j > 0 && lat.occ(i - 1, j - 1);
      if (completes) {
        CellFill f;
        if (!classify_cell(val[lat.vid(i - 1, j - 1)], val[lat.vid(i, j - 1)],
                           val[lat.vid(i - 1, j)], val[id], f)) {
          continue;
        }
        if (!hooks.on_cell(i - 1, j - 1, f)) {
          hooks.on_unwind(i - 1, j - 1);
          continue;
        }
      }
      step(hooks, pos + 1);
      if (completes) hooks.on_unwind(i - 1, j - 1);
    }
    val[id] = 0;
  }
};

std::vector<ConvexPoly> distance_overlay(const HDomain& dom) {
  std::vector<ConvexPoly> overlay;
  for (const AffinePiece& p : distance_solution(dom).pieces) overlay.push_back(p.cell);
  return overlay;
}

// The distance function's own assignment, when it belongs to the family:
// its vertex values are exactly the interior bounds. On domains where the
// distance has ridges through cell interiors it fails cell classification
// and there is no seed.
bool distance_assignment_admissible(const Lattice& lat, std::vector<long long>& val) {
  val.assign((size_t)lat.nvx * lat.nvy, 0);
  for (auto [i, j] : lat.order) {
    int id = lat.vid(i, j);
    val[id] = lat.kind[id] == 2 ? lat.bound[id] : 0;
  }
  for (int cj = 0; cj < lat.grid.ny; ++cj) {
    for (int ci = 0; ci < lat.grid.nx; ++ci) {
      if (!lat.occ(ci, cj)) continue;
      CellFill f;
      if (!classify_cell(val[lat.vid(ci, cj)], val[lat.vid(ci + 1, cj)],
                         val[lat.vid(ci, cj + 1)], val[lat.vid(ci + 1, cj + 1)], f)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

EnumStats enumerate_grid_solutions(const GridSpec& spec,
                                   const std::function<void(const PLSolution&)>& visit,
                                   long long node_budget) {
  Lattice lat = build_lattice(spec);
  std::vector<ConvexPoly> overlay = distance_overlay(spec.domain);
  Sweep sweep(lat, node_budget);
  SweepHooks hooks;
  hooks.on_cell = [](int, int, const CellFill&) { return true; };
  hooks.on_unwind = [](int, int) {};
  hooks.on_leaf = [&]() {
    PLSolution v = assemble_solution(spec, lat, sweep.val);
    ValidationReport rep = validate(v, overlay);
    if (!rep.ok()) throw Error("enumerated grid solution failed validation");
    Q2 f = functional_F(v);
    Q2 recount = jump_units_to_q2(direct_jump_count(lat, sweep.val), lat.grid.pitch);
    if (!(f == recount)) throw Error("edge recount disagrees with the jump functional");
    ++sweep.stats.solutions;
    if (visit) visit(v);
  };
  sweep.run(hooks);
  return sweep.stats;
}

GridMinimum min_F_grid(const GridSpec& spec, long long node_budget) {
  Lattice lat = build_lattice(spec);
  std::vector<ConvexPoly> overlay = distance_overlay(spec.domain);
  Sweep sweep(lat, node_budget);

  // Branch and bound: cell contributions to the jump measure are fixed once
  // the cell completes and never negative, and the slice-count bound adds a
  // certified floor for what the unfinished cells must still produce, so a
  // partial sum plus deficit above the best known value closes the branch.
  // Ties are kept open to collect the full argmin set. The distance
  // assignment, when admissible, provides the initial bound; it is
  // rediscovered as a leaf, so the bound is always attained.
  std::vector<CellFill> fills((size_t)lat.grid.nx * std::max(lat.grid.ny, 1));
  struct CellStep {
    JumpUnits u;
    int nrec = 0;
    std::array<std::pair<int, int>, 6> rec;  // (axis, band) bumps to undo
  };
  std::vector<CellStep> steps(fills.size());
  auto cid = [&](int ci, int cj) { return (size_t)cj * lat.grid.nx + ci; };

  BandBound bands = make_band_bound(lat.grid);
  JumpUnits partial, best;
  bool have = false;
  {
    std::vector<long long> dval;
    if (distance_assignment_admissible(lat, dval)) {
      best = direct_jump_count(lat, dval);
      have = true;
    }
  }

  GridMinimum out;
  std::vector<std::vector<long long>> argmin_vals;

  SweepHooks hooks;
  hooks.on_cell = [&](int ci, int cj, const CellFill& f) {
    CellStep st;
    auto hit = [&](int axis, int band) {
      st.rec[st.nrec++] = {axis, band};
      bands.add(axis, band, +1);
    };
    if (f.kind == FillKind::MainDiag) {
      // the diagonal jumps the second component across two s+t bands
      ++st.u.diags;
      hit(0, ci + cj);
      hit(0, ci + cj + 1);
    } else if (f.kind == FillKind::AntiDiag) {
      // first component, two s-t bands
      ++st.u.diags;
      hit(1, ci - cj - 1 + lat.grid.ny);
      hit(1, ci - cj + lat.grid.ny);
    }
    if (ci > 0 && lat.occ(ci - 1, cj)) {
      auto [l1, l2] = world_grad(side_gradient(fills[cid(ci - 1, cj)], 1));
      auto [c1, c2] = world_grad(side_gradient(f, 3));
      if (l1 != c1) {
        ++st.u.edges;
        hit(1, ci - cj - 1 + lat.grid.ny);
      }
      if (l2 != c2) {
        ++st.u.edges;
        hit(0, ci + cj);
      }
    }
    if (cj > 0 && lat.occ(ci, cj - 1)) {
      auto [b1, b2] = world_grad(side_gradient(fills[cid(ci, cj - 1)], 2));
      auto [c1, c2] = world_grad(side_gradient(f, 0));
      if (b1 != c1) {
        ++st.u.edges;
        hit(1, ci - cj + lat.grid.ny);
      }
      if (b2 != c2) {
        ++st.u.edges;
        hit(0, ci + cj);
      }
    }
    fills[cid(ci, cj)] = f;
    partial.edges += st.u.edges;
    partial.diags += st.u.diags;
    steps[cid(ci, cj)] = st;
    // everything in pitch/2 units: completed cells contribute 2 per
    // diagonal and sqrt(2) per edge hit, the deficit floor 1 per slice
    return !(have && sign_rat_sqrt2(2 * (partial.diags - best.diags) + bands.deficit,
                                    partial.edges - best.edges) > 0);
  };
  hooks.on_unwind = [&](int ci, int cj) {
    CellStep& st = steps[cid(ci, cj)];
    partial.edges -= st.u.edges;
    partial.diags -= st.u.diags;
    for (int r = 0; r < st.nrec; ++r) bands.add(st.rec[r].first, st.rec[r].second, -1);
    st = {};
  };
  hooks.on_leaf = [&]() {
    ++sweep.stats.solutions;
    JumpUnits recount = direct_jump_count(lat, sweep.val);
    if (recount.edges != partial.edges || recount.diags != partial.diags) {
      throw Error("incremental jump count drifted from the recount");
    }
    if (bands.deficit != 0) throw Error("slice bound unmet by a complete solution");
    int rel = have ? cmp_units(partial, best) : -1;
    if (rel > 0) return;
    if (rel < 0) {
      best = partial;
      have = true;
      argmin_vals.clear();
    }
    argmin_vals.push_back(sweep.val);
  };
  sweep.run(hooks);

  if (!have || argmin_vals.empty()) throw Error("the grid family is empty on this domain");
  out.value = jump_units_to_q2(best, lat.grid.pitch);
  for (const std::vector<long long>& val : argmin_vals) {
    PLSolution v = assemble_solution(spec, lat, val);
    ValidationReport rep = validate(v, overlay);
    if (!rep.ok()) throw Error("grid minimizer failed validation");
    if (!(functional_F(v) == out.value)) {
      throw Error("edge recount disagrees with the jump functional on a minimizer");
    }
    out.argmin.push_back(std::move(v));
  }
  out.stats = sweep.stats;
  return out;
}

Oracle1DResult oracle_1d(const Rat& half_length, int max_jumps) {
  if (half_length <= 0) throw Error("oracle_1d: half length must be positive");
  Oracle1DResult res;
  if (max_jumps < 1) {
    // u' of constant sign integrates to +-2L over [-L, L], never 0
    return res;
  }
  // one sign change splits [-L, L] into two runs whose lengths must bring
  // u back to zero: both equal L, leaving the tent and its negation
  for (int sigma : {+1, -1}) {
    Solution1D s;
    s.x = {Rat(-half_length), Rat(0), half_length};
    s.u = {Rat(0), Rat(Rat(sigma) * half_length), Rat(0)};
    s.jumps = 1;
    res.solutions.push_back(std::move(s));
  }
  res.feasible = true;
  res.min_jumps = 1;
  return res;
}

}  // namespace eikjump
