#include "eikjump/distance_solution.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>

#include "eikjump/errors.hpp"

namespace eikjump {

namespace {

// Affine candidate piece of the distance, rotated frame: gs*s + gt*t + c
// with (gs, gt) a unit step along a rotated axis.
struct AffineFn {
  int gs = 0, gt = 0;
  Rat c;
  Rat at(const RPoint& p) const { return Rat(Rat(gs) * p.s + Rat(gt) * p.t + c); }
  bool operator==(const AffineFn& o) const { return gs == o.gs && gt == o.gt && c == o.c; }
  bool operator<(const AffineFn& o) const {
    if (gs != o.gs) return gs < o.gs;
    if (gt != o.gt) return gt < o.gt;
    return c < o.c;
  }
};

// Chebyshev distance to a face equals the max of four affine functions:
// the two band pieces across the face line and the two cone pieces past
// its endpoints.
std::array<AffineFn, 4> face_affines(const Face& f) {
  if (f.axis == 0) {
    return {{{0, 1, Rat(-f.coord)}, {0, -1, f.coord}, {-1, 0, f.lo}, {1, 0, Rat(-f.hi)}}};
  }
  return {{{1, 0, Rat(-f.coord)}, {-1, 0, f.coord}, {0, -1, f.lo}, {0, 1, Rat(-f.hi)}}};
}

struct RectR {
  Rat s0, s1, t0, t1;
  std::array<RPoint, 4> corners() const {
    return {RPoint{s0, t0}, RPoint{s1, t0}, RPoint{s1, t1}, RPoint{s0, t1}};
  }
};

// Axis-aligned rectangles whose interiors partition the component: vertical
// strips between consecutive face lines, stacked by the horizontal faces
// spanning each strip.
std::vector<RectR> slab_rectangles(const HDomain& comp) {
  std::set<Rat> scut;
  for (const Face& f : comp.faces) {
    if (f.axis == 1) scut.insert(f.coord);
  }
  std::vector<Rat> ss(scut.begin(), scut.end());
  std::vector<RectR> out;
  for (size_t i = 0; i + 1 < ss.size(); ++i) {
    const Rat& s0 = ss[i];
    const Rat& s1 = ss[i + 1];
    std::vector<std::pair<Rat, int>> events;
    for (const Face& f : comp.faces) {
      if (f.axis == 0 && f.lo <= s0 && s1 <= f.hi) events.emplace_back(f.coord, f.side);
    }
    std::sort(events.begin(), events.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (size_t j = 0; j + 1 < events.size(); j += 2) {
      if (events[j].second != 1 || events[j + 1].second != -1) {
        throw Error("inconsistent face orientation in slab decomposition");
      }
      out.push_back({s0, s1, events[j].first, events[j + 1].first});
    }
    if (events.size() % 2 != 0) throw Error("odd face count in slab strip");
  }
  return out;
}

Rat interval_gap(const Rat& lo, const Rat& hi, const Rat& a, const Rat& b) {
  Rat g;
  if (a - hi > g) g = a - hi;
  if (lo - b > g) g = lo - b;
  return g;
}

// Least Chebyshev distance from the box to the face; the along-face and
// across-face gaps are attained simultaneously at one box point.
Rat face_box_min(const Face& f, const RectR& r) {
  Rat along, across;
  if (f.axis == 0) {
    along = interval_gap(f.lo, f.hi, r.s0, r.s1);
    across = interval_gap(f.coord, f.coord, r.t0, r.t1);
  } else {
    along = interval_gap(f.lo, f.hi, r.t0, r.t1);
    across = interval_gap(f.coord, f.coord, r.s0, r.s1);
  }
  return std::max(along, across);
}

// Greatest Chebyshev distance from the box to the face; convex in the
// point, so attained at a box corner.
Rat face_box_max(const Face& f, const RectR& r) {
  std::array<AffineFn, 4> fns = face_affines(f);
  Rat best;
  bool first = true;
  for (const RPoint& q : r.corners()) {
    Rat v = fns[0].at(q);
    for (int k = 1; k < 4; ++k) v = std::max(v, fns[k].at(q));
    if (first || v > best) best = v;
    first = false;
  }
  return best;
}

struct FaceD {
  double coord, lo, hi;
  int axis;
};

double interval_gap_d(double lo, double hi, double a, double b) {
  return std::max(0.0, std::max(a - hi, lo - b));
}

double face_box_min_d(const FaceD& f, double s0, double s1, double t0, double t1) {
  double along, across;
  if (f.axis == 0) {
    along = interval_gap_d(f.lo, f.hi, s0, s1);
    across = interval_gap_d(f.coord, f.coord, t0, t1);
  } else {
    along = interval_gap_d(f.lo, f.hi, t0, t1);
    across = interval_gap_d(f.coord, f.coord, s0, s1);
  }
  return std::max(along, across);
}

double face_box_max_d(const FaceD& f, double s0, double s1, double t0, double t1) {
  double best = 0;
  for (double s : {s0, s1}) {
    for (double t : {t0, t1}) {
      double along, across;
      if (f.axis == 0) {
        along = std::max(f.lo - s, s - f.hi);
        across = std::abs(t - f.coord);
      } else {
        along = std::max(f.lo - t, t - f.hi);
        across = std::abs(s - f.coord);
      }
      best = std::max(best, std::max(along, across));
    }
  }
  return best;
}

struct CandidateLine {
  Int a, b, c;  // a*s + b*t + c = 0, primitive, sign-normalized
  bool operator<(const CandidateLine& o) const {
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    return c < o.c;
  }
};

std::optional<CandidateLine> tie_line(const AffineFn& f, const AffineFn& g) {
  int da = f.gs - g.gs, db = f.gt - g.gt;
  if (da == 0 && db == 0) return std::nullopt;
  Rat dc = f.c - g.c;
  Int den = rat_den(dc);
  Int ia = Int(da) * den, ib = Int(db) * den, ic = rat_num(dc);
  using boost::multiprecision::gcd;
  Int g0 = gcd(gcd(Int(abs(ia)), Int(abs(ib))), Int(abs(ic)));
  ia /= g0;
  ib /= g0;
  ic /= g0;
  if (ia < 0 || (ia == 0 && ib < 0)) {
    ia = -ia;
    ib = -ib;
    ic = -ic;
  }
  return CandidateLine{ia, ib, ic};
}

struct PieceRec {
  AffineFn fn;
  ConvexPoly cell;
  Rat area2;
};

Rat hull_cross(const RPoint& o, const RPoint& a, const RPoint& b) {
  return Rat((a.s - o.s) * (b.t - o.t) - (a.t - o.t) * (b.s - o.s));
}

ConvexPoly convex_hull(std::vector<RPoint> pts) {
  std::sort(pts.begin(), pts.end(), [](const RPoint& a, const RPoint& b) {
    if (a.s != b.s) return a.s < b.s;
    return a.t < b.t;
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  size_t n = pts.size();
  if (n < 3) return pts;
  std::vector<RPoint> hull(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {
    while (k >= 2 && hull_cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  size_t lower = k + 1;
  for (size_t i = n - 1; i-- > 0;) {
    while (k >= lower && hull_cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

// Intersection segment of the line a*s + b*t + c = 0 with the closed
// rectangle, assuming the strict corner-sign test already confirmed a
// crossing. Returns the two extreme boundary hits.
std::pair<RPoint, RPoint> clip_line_rect(const CandidateLine& line, const RectR& r) {
  Rat a(line.a), b(line.b), c(line.c);
  std::vector<RPoint> hits;
  auto add = [&hits](const RPoint& p) {
    for (const RPoint& q : hits) {
      if (q.s == p.s && q.t == p.t) return;
    }
    hits.push_back(p);
  };
  if (b != 0) {
    for (const Rat& s : {r.s0, r.s1}) {
      Rat t = Rat(-(a * s + c) / b);
      if (t >= r.t0 && t <= r.t1) add({s, t});
    }
  }
  if (a != 0) {
    for (const Rat& t : {r.t0, r.t1}) {
      Rat s = Rat(-(b * t + c) / a);
      if (s >= r.s0 && s <= r.s1) add({s, t});
    }
  }
  if (hits.size() < 2) throw Error("line clip lost a confirmed crossing");
  size_t lo = 0, hi = 0;
  for (size_t i = 1; i < hits.size(); ++i) {
    auto less = [](const RPoint& x, const RPoint& y) {
      return x.s != y.s ? x.s < y.s : x.t < y.t;
    };
    if (less(hits[i], hits[lo])) lo = i;
    if (less(hits[hi], hits[i])) hi = i;
  }
  return {hits[lo], hits[hi]};
}

// The nearest-face distance within one rectangle of the slab decomposition.
// Cells are cut by every tie line between candidate affine pieces that
// crosses the rectangle and can actually tie at the distance value, so on
// each cell the nearest face and its active affine piece are constant and
// the centroid decides them. Rectangles that keep too many candidate faces
// are quartered first: pair enumeration is quadratic, and slab strips can
// run the whole domain while the distance only ever depends on nearby faces.
void rectangle_pieces(const HDomain& comp, const std::vector<FaceD>& faces_d, const RectR& r,
                      std::vector<PieceRec>& out, int depth = 0) {
  constexpr double kSlack = 1e-9;
  constexpr int kSplitThreshold = 12;
  constexpr int kMaxDepth = 24;
  double s0 = rat_to_double(r.s0), s1 = rat_to_double(r.s1);
  double t0 = rat_to_double(r.t0), t1 = rat_to_double(r.t1);
  double scale = std::max({std::fabs(s0), std::fabs(s1), std::fabs(t0), std::fabs(t1), 1.0});
  double slack = kSlack * scale;

  // upper bound: some face is this close everywhere in the rectangle
  double ub_d = std::numeric_limits<double>::infinity();
  for (const FaceD& f : faces_d) ub_d = std::min(ub_d, face_box_max_d(f, s0, s1, t0, t1));
  Rat ub;
  bool have_ub = false;
  for (size_t i = 0; i < faces_d.size(); ++i) {
    if (face_box_max_d(faces_d[i], s0, s1, t0, t1) > ub_d + slack) continue;
    Rat v = face_box_max(comp.faces[i], r);
    if (!have_ub || v < ub) ub = v;
    have_ub = true;
  }
  if (!have_ub) throw Error("no faces visible from a slab rectangle");

  std::vector<int> kept;
  for (size_t i = 0; i < faces_d.size(); ++i) {
    if (face_box_min_d(faces_d[i], s0, s1, t0, t1) > ub_d + slack) continue;
    if (face_box_min(comp.faces[i], r) <= ub) kept.push_back(static_cast<int>(i));
  }
  if (kept.empty()) throw Error("face pruning discarded every candidate");

  if (static_cast<int>(kept.size()) > kSplitThreshold && depth < kMaxDepth) {
    RectR first = r, second = r;
    if (r.s1 - r.s0 >= r.t1 - r.t0) {
      Rat mid = Rat((r.s0 + r.s1) / 2);
      first.s1 = mid;
      second.s0 = mid;
    } else {
      Rat mid = Rat((r.t0 + r.t1) / 2);
      first.t1 = mid;
      second.t0 = mid;
    }
    rectangle_pieces(comp, faces_d, first, out, depth + 1);
    rectangle_pieces(comp, faces_d, second, out, depth + 1);
    return;
  }

  std::set<AffineFn> pool;
  for (int fi : kept) {
    for (const AffineFn& fn : face_affines(comp.faces[fi])) pool.insert(fn);
  }
  std::set<CandidateLine> lines;
  for (auto i = pool.begin(); i != pool.end(); ++i) {
    for (auto j = std::next(i); j != pool.end(); ++j) {
      auto line = tie_line(*i, *j);
      if (!line || lines.count(*line)) continue;
      bool neg = false, pos = false;
      for (const RPoint& q : r.corners()) {
        Rat v = Rat(Rat(line->a) * q.s + Rat(line->b) * q.t + Rat(line->c));
        if (v < 0) neg = true;
        if (v > 0) pos = true;
      }
      if (!neg || !pos) continue;
      // The shared value of the two affines is affine along the line; if it
      // exceeds the distance bound across the whole rectangle the tie can
      // never be active here.
      auto [pa, pb] = clip_line_rect(*line, r);
      if (i->at(pa) > ub && i->at(pb) > ub) continue;
      lines.insert(*line);
    }
  }

  std::vector<ConvexPoly> cells{{r.corners()[0], r.corners()[1], r.corners()[2], r.corners()[3]}};
  for (const CandidateLine& line : lines) {
    std::vector<ConvexPoly> next;
    next.reserve(cells.size() + 4);
    for (const ConvexPoly& cell : cells) {
      ConvexPoly lo, hi;
      split_by_line(cell, Rat(line.a), Rat(line.b), Rat(-line.c), lo, hi);
      if (!lo.empty()) next.push_back(std::move(lo));
      if (!hi.empty()) next.push_back(std::move(hi));
    }
    cells = std::move(next);
  }

  for (ConvexPoly& cell : cells) {
    RPoint cen = poly_centroid(cell);
    bool have = false;
    Rat best;
    AffineFn active;
    for (int fi : kept) {
      std::array<AffineFn, 4> fns = face_affines(comp.faces[fi]);
      std::array<Rat, 4> vals;
      Rat fv;
      for (int k = 0; k < 4; ++k) {
        vals[k] = fns[k].at(cen);
        if (k == 0 || vals[k] > fv) fv = vals[k];
      }
      AffineFn fact;
      bool found = false;
      for (int k = 0; k < 4; ++k) {
        if (vals[k] != fv) continue;
        if (!found) {
          fact = fns[k];
          found = true;
        } else if (!(fns[k] == fact)) {
          throw Error("ambiguous active piece inside an arrangement cell");
        }
      }
      if (!have || fv < best) {
        best = fv;
        active = fact;
        have = true;
      } else if (fv == best && !(fact == active)) {
        throw Error("ambiguous nearest face inside an arrangement cell");
      }
    }
    out.push_back({active, std::move(cell), Rat()});
  }
}

// Glue neighbouring cells that carry the same affine function whenever the
// union stays convex. Exact criterion: the hull of the two vertex sets has
// the same area as the pair, which holds iff the union is convex with
// disjoint interiors.
void merge_equal_affines(std::vector<PieceRec>& recs) {
  for (PieceRec& rec : recs) rec.area2 = poly_area2(rec.cell);
  std::map<AffineFn, std::vector<size_t>> groups;
  for (size_t i = 0; i < recs.size(); ++i) groups[recs[i].fn].push_back(i);
  std::vector<bool> alive(recs.size(), true);
  for (auto& [fn, idxs] : groups) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t a = 0; a < idxs.size(); ++a) {
        if (!alive[idxs[a]]) continue;
        for (size_t b = a + 1; b < idxs.size(); ++b) {
          if (!alive[idxs[b]]) continue;
          PieceRec& ra = recs[idxs[a]];
          PieceRec& rb = recs[idxs[b]];
          std::vector<RPoint> pts = ra.cell;
          pts.insert(pts.end(), rb.cell.begin(), rb.cell.end());
          ConvexPoly hull = convex_hull(std::move(pts));
          if (hull.size() >= 3 && poly_area2(hull) == ra.area2 + rb.area2) {
            ra.cell = std::move(hull);
            ra.area2 = Rat(ra.area2 + rb.area2);
            alive[idxs[b]] = false;
            changed = true;
          }
        }
      }
    }
  }
  std::vector<PieceRec> keep;
  keep.reserve(recs.size());
  for (size_t i = 0; i < recs.size(); ++i) {
    if (alive[i]) keep.push_back(std::move(recs[i]));
  }
  recs = std::move(keep);
}

}  // namespace

PLSolution distance_solution(const HDomain& d) {
  if (d.empty()) throw EmptyDomain("distance solution of an empty domain");
  PLSolution out;
  out.domain = d;
  for (const HDomain& comp : d.components()) {
    std::vector<FaceD> faces_d;
    faces_d.reserve(comp.faces.size());
    for (const Face& f : comp.faces) {
      faces_d.push_back(
          {rat_to_double(f.coord), rat_to_double(f.lo), rat_to_double(f.hi), f.axis});
    }
    std::vector<PieceRec> recs;
    for (const RectR& r : slab_rectangles(comp)) {
      rectangle_pieces(comp, faces_d, r, recs);
    }
    merge_equal_affines(recs);
    for (PieceRec& rec : recs) {
      AffinePiece piece;
      piece.cell = std::move(rec.cell);
      piece.g1 = rec.fn.gs + rec.fn.gt;
      piece.g2 = rec.fn.gs - rec.fn.gt;
      piece.offset = rec.fn.c;
      out.pieces.push_back(std::move(piece));
    }
  }
  std::vector<ConvexPoly> own;
  own.reserve(out.pieces.size());
  for (const AffinePiece& p : out.pieces) own.push_back(p.cell);
  ValidationReport rep = validate(out, own);
  if (!rep.ok()) {
    for (const CheckResult& c : rep.checks) {
      if (!c.pass) throw Error("distance solution failed self-validation: " + c.name + ": " + c.detail);
    }
  }
  return out;
}

PLSolution partition_solution(const std::vector<std::pair<HDomain, int>>& parts,
                              const std::vector<ConvexPoly>* ebound_overlay) {
  if (parts.empty()) throw NotAPartition("no parts given");
  for (const auto& [domain, sign] : parts) {
    if (domain.empty()) throw NotAPartition("empty part");
    if (sign != 1 && sign != -1) throw Error("part sign must be +1 or -1");
  }
  HDomain whole = parts.front().first;
  Rat area_sum = parts.front().first.rotated_area();
  for (size_t i = 1; i < parts.size(); ++i) {
    whole = rect_boolean(BoolOp::Union, whole, parts[i].first).domain;
    area_sum += parts[i].first.rotated_area();
  }
  if (area_sum != whole.rotated_area()) {
    throw NotAPartition("parts overlap: area excess " +
                        std::to_string(rat_to_double(Rat(area_sum - whole.rotated_area()) / 2)) +
                        " in world measure");
  }
  PLSolution out;
  out.domain = std::move(whole);
  for (const auto& [domain, sign] : parts) {
    PLSolution part = distance_solution(domain);
    if (sign < 0) part = negate(part);
    for (AffinePiece& p : part.pieces) out.pieces.push_back(std::move(p));
  }
  ValidationReport rep = ebound_overlay ? validate(out, *ebound_overlay) : validate(out);
  if (!rep.ok()) {
    for (const CheckResult& c : rep.checks) {
      if (!c.pass) {
        throw Error("glued partition solution failed validation: " + c.name + ": " + c.detail);
      }
    }
  }
  return out;
}

}  // namespace eikjump
