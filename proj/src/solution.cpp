#include "eikjump/solution.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "eikjump/distance_solution.hpp"
#include "eikjump/errors.hpp"

namespace eikjump {

namespace {

std::string rat_str(const Rat& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

std::string point_str(const RPoint& p) {
  WPoint w = to_world(p);
  return "(" + rat_str(w.x1) + ", " + rat_str(w.x2) + ")";
}

// Carrier line of an edge as a primitive integer triple A*s + B*t = C with
// the leading nonzero of (A, B) positive, so collinear edges of different
// pieces land on the same key.
struct LineKey {
  Int A, B, C;
  bool operator==(const LineKey& o) const { return A == o.A && B == o.B && C == o.C; }
  bool operator<(const LineKey& o) const {
    if (A != o.A) return A < o.A;
    if (B != o.B) return B < o.B;
    return C < o.C;
  }
};

LineKey line_through(const RPoint& a, const RPoint& b) {
  Rat ra = b.t - a.t, rb = a.s - b.s;
  Rat rc = ra * a.s + rb * a.t;
  using boost::multiprecision::gcd;
  using boost::multiprecision::lcm;
  Int l = lcm(lcm(rat_den(ra), rat_den(rb)), rat_den(rc));
  Int ia = rat_num(ra) * (l / rat_den(ra));
  Int ib = rat_num(rb) * (l / rat_den(rb));
  Int ic = rat_num(rc) * (l / rat_den(rc));
  Int g = gcd(gcd(Int(abs(ia)), Int(abs(ib))), Int(abs(ic)));
  if (g == 0) throw Error("degenerate edge in cell polygon");
  ia /= g;
  ib /= g;
  ic /= g;
  if (ia < 0 || (ia == 0 && ib < 0)) {
    ia = -ia;
    ib = -ib;
    ic = -ic;
  }
  return {ia, ib, ic};
}

// Position along the line, strictly monotone in the direction (-B, A).
Rat line_param(const LineKey& k, const RPoint& p) {
  return Rat(Rat(-k.B) * p.s + Rat(k.A) * p.t);
}

int line_side(const LineKey& k, const RPoint& p) {
  Rat e = Rat(k.A) * p.s + Rat(k.B) * p.t - Rat(k.C);
  return e > 0 ? 1 : (e < 0 ? -1 : 0);
}

struct EdgeSpan {
  Rat t0, t1;
  int piece;
  int side;  // which side of the carrier the piece interior lies on
};

struct CarrierLine {
  LineKey key;
  std::vector<EdgeSpan> spans;
  std::map<Rat, RPoint> points;  // param -> point, shared endpoint pool
};

// Elementary edge portion between two consecutive breakpoints of a carrier
// line, with the pieces incident from either side. T-junctions disappear at
// this level: every span fully covers or misses an elementary portion.
struct Fragment {
  RPoint a, b, mid;
  Int A, B;  // carrier normal
  int line_index = 0;
  std::vector<int> pos, neg;
};

std::vector<CarrierLine> collect_carriers(const PLSolution& v) {
  std::map<LineKey, CarrierLine> acc;
  for (size_t i = 0; i < v.pieces.size(); ++i) {
    const ConvexPoly& cell = v.pieces[i].cell;
    if (cell.size() < 3 || poly_area2(cell) == 0) {
      throw Error("piece " + std::to_string(i) + " has a degenerate cell");
    }
    RPoint cen = poly_centroid(cell);
    for (size_t e = 0; e < cell.size(); ++e) {
      const RPoint& p = cell[e];
      const RPoint& q = cell[(e + 1) % cell.size()];
      if (p == q) continue;
      LineKey k = line_through(p, q);
      CarrierLine& line = acc[k];
      line.key = k;
      Rat tp = line_param(k, p);
      Rat tq = line_param(k, q);
      int side = line_side(k, cen);
      if (side == 0) throw Error("cell centroid on its own edge line");
      line.spans.push_back({std::min(tp, tq), std::max(tp, tq), static_cast<int>(i), side});
      line.points.emplace(tp, p);
      line.points.emplace(tq, q);
    }
  }
  std::vector<CarrierLine> lines;
  lines.reserve(acc.size());
  for (auto& [k, line] : acc) lines.push_back(std::move(line));
  return lines;
}

std::vector<Fragment> build_fragments(const std::vector<CarrierLine>& lines) {
  std::vector<Fragment> out;
  for (size_t li = 0; li < lines.size(); ++li) {
    const CarrierLine& line = lines[li];
    std::vector<std::pair<Rat, RPoint>> bps(line.points.begin(), line.points.end());
    for (size_t i = 0; i + 1 < bps.size(); ++i) {
      Fragment f;
      f.a = bps[i].second;
      f.b = bps[i + 1].second;
      f.A = line.key.A;
      f.B = line.key.B;
      f.line_index = static_cast<int>(li);
      for (const EdgeSpan& sp : line.spans) {
        if (sp.t0 <= bps[i].first && bps[i + 1].first <= sp.t1) {
          (sp.side > 0 ? f.pos : f.neg).push_back(sp.piece);
        }
      }
      if (f.pos.empty() && f.neg.empty()) continue;
      f.mid = {Rat((f.a.s + f.b.s) / 2), Rat((f.a.t + f.b.t) / 2)};
      out.push_back(std::move(f));
    }
  }
  return out;
}

// Double-precision bounding box used only to skip exact work.
struct DBox {
  double slo, shi, tlo, thi;
  bool overlaps(const DBox& o) const {
    return slo <= o.shi && o.slo <= shi && tlo <= o.thi && o.tlo <= thi;
  }
};

DBox dbox_of(const RPoint& a, const RPoint& b) {
  double as = rat_to_double(a.s), bs = rat_to_double(b.s);
  double at = rat_to_double(a.t), bt = rat_to_double(b.t);
  DBox box{std::min(as, bs), std::max(as, bs), std::min(at, bt), std::max(at, bt)};
  double pad = 1e-9 * (std::fabs(box.slo) + std::fabs(box.shi) + std::fabs(box.tlo) +
                       std::fabs(box.thi) + 1.0);
  box.slo -= pad;
  box.shi += pad;
  box.tlo -= pad;
  box.thi += pad;
  return box;
}

DBox dbox_of(const ConvexPoly& cell) {
  DBox box = dbox_of(cell.front(), cell.front());
  for (const RPoint& p : cell) {
    DBox b = dbox_of(p, p);
    box.slo = std::min(box.slo, b.slo);
    box.shi = std::max(box.shi, b.shi);
    box.tlo = std::min(box.tlo, b.tlo);
    box.thi = std::max(box.thi, b.thi);
  }
  return box;
}

std::optional<RPoint> segment_cross(const RPoint& p0, const RPoint& p1, const RPoint& q0,
                                    const RPoint& q1) {
  Rat rs = p1.s - p0.s, rt = p1.t - p0.t;
  Rat zs = q1.s - q0.s, zt = q1.t - q0.t;
  Rat den = rs * zt - rt * zs;
  if (den == 0) return std::nullopt;  // parallel; overlaps are spanned by endpoints
  Rat ds = q0.s - p0.s, dt = q0.t - p0.t;
  Rat u = Rat((ds * zt - dt * zs) / den);
  Rat w = Rat((ds * rt - dt * rs) / den);
  if (u < 0 || u > 1 || w < 0 || w > 1) return std::nullopt;
  return RPoint{Rat(p0.s + u * rs), Rat(p0.t + u * rt)};
}

struct SegRec {
  RPoint a, b;
  DBox box;
};

std::vector<SegRec> polygon_edges(const std::vector<ConvexPoly>& polys) {
  std::vector<SegRec> out;
  for (const ConvexPoly& poly : polys) {
    for (size_t i = 0; i < poly.size(); ++i) {
      const RPoint& a = poly[i];
      const RPoint& b = poly[(i + 1) % poly.size()];
      if (a == b) continue;
      out.push_back({a, b, dbox_of(a, b)});
    }
  }
  return out;
}

}  // namespace

PLSolution negate(const PLSolution& v) {
  PLSolution out = v;
  for (AffinePiece& p : out.pieces) {
    p.g1 = -p.g1;
    p.g2 = -p.g2;
    p.offset = -p.offset;
  }
  return out;
}

Rat solution_value(const PLSolution& v, const RPoint& p) {
  for (const AffinePiece& piece : v.pieces) {
    if (point_in_convex_closed(piece.cell, p)) return piece.eval(p);
  }
  throw Error("point " + point_str(p) + " is outside every cell");
}

ValidationReport validate(const PLSolution& v, const std::vector<ConvexPoly>& overlay) {
  ValidationReport report;
  auto add = [&report](const std::string& name, bool pass, const std::string& detail,
                       std::optional<RPoint> witness = std::nullopt) {
    report.checks.push_back({name, pass, detail, std::move(witness)});
  };

  // structure: unit gradient labels, convex positively oriented cells
  bool structure_ok = !v.pieces.empty() && !v.domain.empty();
  std::string structure_detail;
  if (v.domain.empty()) {
    structure_detail = "empty domain";
  } else if (v.pieces.empty()) {
    structure_detail = "no pieces";
  }
  std::optional<RPoint> structure_witness;
  for (size_t i = 0; structure_ok && i < v.pieces.size(); ++i) {
    const AffinePiece& p = v.pieces[i];
    if (p.g1 * p.g1 != 1 || p.g2 * p.g2 != 1) {
      structure_ok = false;
      structure_detail = "piece " + std::to_string(i) + " has a non-unit gradient label";
    } else if (!poly_is_convex_ccw(p.cell)) {
      structure_ok = false;
      structure_detail = "piece " + std::to_string(i) + " cell is not convex ccw";
      if (!p.cell.empty()) structure_witness = p.cell.front();
    }
  }
  if (structure_ok) {
    structure_detail = std::to_string(v.pieces.size()) + " pieces with unit gradient labels";
  }
  add("structure", structure_ok, structure_detail, structure_witness);

  if (!structure_ok) {
    for (const char* name : {"tiling", "continuity", "zero trace", "ebound"}) {
      add(name, false, "not checked: structure invalid");
    }
    return report;
  }

  std::vector<CarrierLine> lines = collect_carriers(v);
  std::vector<Fragment> fragments = build_fragments(lines);

  // tiling: exact area balance plus boundary accounting on elementary edges.
  // A cell protruding from the domain or a hole in the cover leaves some
  // once-covered fragment away from the boundary; an overlap covers some
  // fragment twice from one side.
  bool tiling_ok = true;
  std::string tiling_detail;
  std::optional<RPoint> tiling_witness;
  Rat area_sum;
  for (const AffinePiece& p : v.pieces) area_sum += poly_area2(p.cell);
  area_sum /= 2;
  if (area_sum != v.domain.rotated_area()) {
    tiling_ok = false;
    tiling_detail = "cell area sum " + rat_str(Rat(area_sum / 2)) + " != domain area " +
                    rat_str(v.domain.world_area()) + " (world)";
  }
  for (const Fragment& f : fragments) {
    if (!tiling_ok) break;
    if (f.pos.size() > 1 || f.neg.size() > 1) {
      tiling_ok = false;
      tiling_detail = "cells overlap along an edge at " + point_str(f.mid);
      tiling_witness = f.mid;
    } else if (f.pos.size() + f.neg.size() == 1) {
      if (!v.domain.on_boundary(f.a) || !v.domain.on_boundary(f.b) ||
          !v.domain.on_boundary(f.mid)) {
        tiling_ok = false;
        tiling_detail = "uncovered cell edge away from the boundary at " + point_str(f.mid);
        tiling_witness = f.mid;
      }
    }
  }
  if (tiling_ok) tiling_detail = "cells tile the domain exactly";
  add("tiling", tiling_ok, tiling_detail, tiling_witness);

  // continuity: both incident affine functions agree on every shared edge;
  // affine along the edge, so the two endpoints decide.
  bool cont_ok = true;
  std::string cont_detail;
  std::optional<RPoint> cont_witness;
  size_t shared_edges = 0;
  for (const Fragment& f : fragments) {
    if (f.pos.size() != 1 || f.neg.size() != 1) continue;
    ++shared_edges;
    const AffinePiece& l = v.pieces[f.pos[0]];
    const AffinePiece& r = v.pieces[f.neg[0]];
    for (const RPoint& q : {f.a, f.b}) {
      if (l.eval(q) != r.eval(q)) {
        cont_ok = false;
        cont_detail = "pieces " + std::to_string(f.pos[0]) + " and " + std::to_string(f.neg[0]) +
                      " disagree at " + point_str(q);
        cont_witness = q;
        break;
      }
    }
    if (!cont_ok) break;
  }
  if (cont_ok) cont_detail = "continuous across " + std::to_string(shared_edges) + " shared edges";
  add("continuity", cont_ok, cont_detail, cont_witness);

  // zero trace on the domain boundary
  bool trace_ok = true;
  std::string trace_detail;
  std::optional<RPoint> trace_witness;
  size_t boundary_edges = 0;
  for (const Fragment& f : fragments) {
    if (f.pos.size() + f.neg.size() != 1) continue;
    ++boundary_edges;
    const AffinePiece& p = v.pieces[f.pos.empty() ? f.neg[0] : f.pos[0]];
    for (const RPoint& q : {f.a, f.b}) {
      if (p.eval(q) != 0) {
        trace_ok = false;
        trace_detail = "nonzero trace " + rat_str(p.eval(q)) + " at " + point_str(q);
        trace_witness = q;
        break;
      }
    }
    if (!trace_ok) break;
  }
  if (trace_ok) {
    trace_detail = "vanishes on " + std::to_string(boundary_edges) + " boundary edges";
  }
  add("zero trace", trace_ok, trace_detail, trace_witness);

  // |v| <= l1 distance to the boundary. Both sides are affine on each cell
  // of the overlay of v's cells with the reference complex, so checking all
  // overlay vertices (cell corners plus edge crossings) is exhaustive.
  bool bound_ok = true;
  std::string bound_detail;
  std::optional<RPoint> bound_witness;
  std::set<std::pair<Rat, Rat>> point_set;
  for (const AffinePiece& p : v.pieces) {
    for (const RPoint& q : p.cell) point_set.emplace(q.s, q.t);
  }
  for (const ConvexPoly& poly : overlay) {
    for (const RPoint& q : poly) point_set.emplace(q.s, q.t);
  }
  {
    std::vector<ConvexPoly> own;
    own.reserve(v.pieces.size());
    for (const AffinePiece& p : v.pieces) own.push_back(p.cell);
    std::vector<SegRec> ve = polygon_edges(own);
    std::vector<SegRec> oe = polygon_edges(overlay);
    for (const SegRec& e1 : ve) {
      for (const SegRec& e2 : oe) {
        if (!e1.box.overlaps(e2.box)) continue;
        if (auto q = segment_cross(e1.a, e1.b, e2.a, e2.b)) point_set.emplace(q->s, q->t);
      }
    }
  }
  std::vector<DBox> piece_boxes;
  piece_boxes.reserve(v.pieces.size());
  for (const AffinePiece& p : v.pieces) piece_boxes.push_back(dbox_of(p.cell));
  size_t checked = 0;
  for (const auto& [ps, pt] : point_set) {
    RPoint q{ps, pt};
    DBox qb = dbox_of(q, q);
    const AffinePiece* holder = nullptr;
    for (size_t i = 0; i < v.pieces.size(); ++i) {
      if (!piece_boxes[i].overlaps(qb)) continue;
      if (point_in_convex_closed(v.pieces[i].cell, q)) {
        holder = &v.pieces[i];
        break;
      }
    }
    if (!holder) continue;  // overlay vertex outside the solution's cells
    ++checked;
    Rat value = holder->eval(q);
    Rat dist = l1_distance(q, v.domain);
    if (rat_abs(value) > dist) {
      bound_ok = false;
      bound_detail = "|v| = " + rat_str(rat_abs(value)) + " > d = " + rat_str(dist) + " at " +
                     point_str(q);
      bound_witness = q;
      break;
    }
  }
  if (bound_ok) {
    bound_detail = "|v| <= d at all " + std::to_string(checked) + " overlay vertices";
  }
  add("ebound", bound_ok, bound_detail, bound_witness);

  return report;
}

ValidationReport validate(const PLSolution& v) {
  std::vector<ConvexPoly> overlay;
  if (!v.domain.empty()) {
    PLSolution dist = distance_solution(v.domain);
    overlay.reserve(dist.pieces.size());
    for (AffinePiece& p : dist.pieces) overlay.push_back(std::move(p.cell));
  }
  return validate(v, overlay);
}

std::pair<JumpSet, JumpSet> jump_sets(const PLSolution& v) {
  std::vector<CarrierLine> lines = collect_carriers(v);
  std::vector<Fragment> fragments = build_fragments(lines);

  JumpSet j1, j2;
  j1.component = 1;
  j2.component = 2;

  // Per component: sweep fragments (grouped per carrier line, ordered along
  // it) and grow maximal collinear runs of jumping fragments.
  for (int comp = 1; comp <= 2; ++comp) {
    JumpSet& out = comp == 1 ? j1 : j2;
    bool open = false;
    RPoint run_a, run_b;
    int run_line = -1;
    Rat nu_s, nu_t;
    auto flush = [&]() {
      if (!open) return;
      JumpSegment seg{run_a, run_b, nu_s, nu_t, world_length(run_a, run_b)};
      out.total_length = out.total_length + seg.length;
      out.segments.push_back(std::move(seg));
      open = false;
    };
    for (const Fragment& f : fragments) {
      if (f.pos.size() + f.neg.size() == 1) {
        if (open && f.line_index == run_line) flush();
        continue;
      }
      if (f.pos.size() != 1 || f.neg.size() != 1) {
        throw NonManifoldEdge("edge portion at " + point_str(f.mid) + " is bounded by " +
                              std::to_string(f.pos.size() + f.neg.size()) + " pieces");
      }
      const AffinePiece& lp = v.pieces[f.pos[0]];
      const AffinePiece& rp = v.pieces[f.neg[0]];
      int gl = comp == 1 ? lp.g1 : lp.g2;
      int gr = comp == 1 ? rp.g1 : rp.g2;
      if (gl == gr) {
        if (open && f.line_index == run_line) flush();
        continue;
      }
      if (open && f.line_index == run_line && run_b == f.a) {
        run_b = f.b;
        continue;
      }
      flush();
      open = true;
      run_a = f.a;
      run_b = f.b;
      run_line = f.line_index;
      // normal from the lower gradient label toward the higher one;
      // (A, B) points into the positive side of the carrier
      if (gl > gr) {
        nu_s = Rat(f.A);
        nu_t = Rat(f.B);
      } else {
        nu_s = Rat(-f.A);
        nu_t = Rat(-f.B);
      }
    }
    flush();
  }
  return {std::move(j1), std::move(j2)};
}

Q2 functional_F(const PLSolution& v) {
  auto [j1, j2] = jump_sets(v);
  return j1.total_length + j2.total_length;
}

Q2 functional_F(const PLSolution& v, const HDomain& region) {
  auto [j1, j2] = jump_sets(v);
  Q2 total;
  for (const JumpSet* js : {&j1, &j2}) {
    for (const JumpSegment& seg : js->segments) {
      Rat ds = seg.b.s - seg.a.s, dt = seg.b.t - seg.a.t;
      std::vector<Rat> cuts{Rat(0), Rat(1)};
      for (const Face& f : region.faces) {
        // parameter where the segment meets the face, if transversal
        const Rat& dc = f.axis == 0 ? dt : ds;
        if (dc == 0) continue;
        Rat u = f.axis == 0 ? Rat((f.coord - seg.a.t) / dt) : Rat((f.coord - seg.a.s) / ds);
        if (u <= 0 || u >= 1) continue;
        Rat along = f.axis == 0 ? Rat(seg.a.s + u * ds) : Rat(seg.a.t + u * dt);
        if (f.lo <= along && along <= f.hi) cuts.push_back(u);
      }
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
      for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        Rat um((cuts[i] + cuts[i + 1]) / 2);
        RPoint mid{Rat(seg.a.s + um * ds), Rat(seg.a.t + um * dt)};
        // open-region convention: portions exactly on the region boundary
        // carry no interior jump mass
        if (!region.contains(mid)) continue;
        RPoint qa{Rat(seg.a.s + cuts[i] * ds), Rat(seg.a.t + cuts[i] * dt)};
        RPoint qb{Rat(seg.a.s + cuts[i + 1] * ds), Rat(seg.a.t + cuts[i + 1] * dt)};
        total = total + world_length(qa, qb);
      }
    }
  }
  return total;
}

namespace {

// Polynomial in barycentric parameters (u, w), total degree <= 3.
struct Poly3 {
  Rat c[4][4];
  Poly3() = default;
  static Poly3 affine(const Rat& c0, const Rat& cu, const Rat& cw) {
    Poly3 p;
    p.c[0][0] = c0;
    p.c[1][0] = cu;
    p.c[0][1] = cw;
    return p;
  }
  Poly3 operator*(const Poly3& o) const {
    Poly3 r;
    for (int i = 0; i <= 3; ++i) {
      for (int j = 0; i + j <= 3; ++j) {
        if (c[i][j] == 0) continue;
        for (int k = 0; i + k <= 3; ++k) {
          for (int l = 0; i + j + k + l <= 3; ++l) {
            if (o.c[k][l] == 0) continue;
            r.c[i + k][j + l] += c[i][j] * o.c[k][l];
          }
        }
      }
    }
    return r;
  }
  Poly3 operator+(const Poly3& o) const {
    Poly3 r;
    for (int i = 0; i <= 3; ++i) {
      for (int j = 0; j <= 3; ++j) r.c[i][j] = c[i][j] + o.c[i][j];
    }
    return r;
  }
  Poly3 scaled(const Rat& f) const {
    Poly3 r;
    for (int i = 0; i <= 3; ++i) {
      for (int j = 0; j <= 3; ++j) r.c[i][j] = c[i][j] * f;
    }
    return r;
  }
};

// integral of u^i w^j over the reference triangle {u, w >= 0, u + w <= 1}
Rat reference_moment(int i, int j) {
  static const Int fact[6] = {1, 1, 2, 6, 24, 120};
  return Rat(Rat(fact[i] * fact[j]) / Rat(fact[i + j + 2]));
}

}  // namespace

Q2 integral(const PLSolution& v, int basis_index) {
  if (basis_index < 1 || basis_index > 6) {
    throw UnsupportedBasisIndex("monomial basis index " + std::to_string(basis_index) +
                                " out of range 1..6");
  }
  Rat total;
  for (const AffinePiece& piece : v.pieces) {
    std::vector<WPoint> w;
    w.reserve(piece.cell.size());
    for (const RPoint& q : piece.cell) w.push_back(to_world(q));
    for (size_t i = 1; i + 1 < w.size(); ++i) {
      const WPoint& p0 = w[0];
      const WPoint& p1 = w[i];
      const WPoint& p2 = w[i + 1];
      Rat det = Rat((p1.x1 - p0.x1) * (p2.x2 - p0.x2) - (p1.x2 - p0.x2) * (p2.x1 - p0.x1));
      Poly3 x1 = Poly3::affine(p0.x1, Rat(p1.x1 - p0.x1), Rat(p2.x1 - p0.x1));
      Poly3 x2 = Poly3::affine(p0.x2, Rat(p1.x2 - p0.x2), Rat(p2.x2 - p0.x2));
      Poly3 val = x1.scaled(Rat(piece.g1)) + x2.scaled(Rat(piece.g2)) +
                  Poly3::affine(piece.offset, Rat(0), Rat(0));
      Poly3 basis;
      switch (basis_index) {
        case 1: basis = Poly3::affine(Rat(1), Rat(0), Rat(0)); break;
        case 2: basis = x1; break;
        case 3: basis = x2; break;
        case 4: basis = x1 * x1; break;
        case 5: basis = x1 * x2; break;
        case 6: basis = x2 * x2; break;
      }
      Poly3 product = val * basis;
      Rat tri;
      for (int a = 0; a <= 3; ++a) {
        for (int b = 0; a + b <= 3; ++b) {
          if (product.c[a][b] != 0) tri += product.c[a][b] * reference_moment(a, b);
        }
      }
      total += tri * rat_abs(det);
    }
  }
  return Q2(total);
}

std::pair<Q2, Q2> slicing_count(const JumpSet& j, int projection_axis) {
  if (projection_axis != 1 && projection_axis != 2) {
    throw Error("projection axis must be 1 or 2");
  }
  Rat slices;
  Q2 h1;
  for (const JumpSegment& seg : j.segments) {
    WPoint wa = to_world(seg.a);
    WPoint wb = to_world(seg.b);
    slices += rat_abs(projection_axis == 1 ? Rat(wa.x1 - wb.x1) : Rat(wa.x2 - wb.x2));
    h1 = h1 + seg.length;
  }
  return {Q2(slices), h1};
}

}  // namespace eikjump
