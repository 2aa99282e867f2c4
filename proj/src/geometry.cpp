#include "eikjump/geometry.hpp"

#include <algorithm>
#include <cstdlib>
#include <utility>

#include "eikjump/errors.hpp"

namespace eikjump {

namespace {

Rat range_gap(const Rat& x, const Rat& lo, const Rat& hi) {
  if (x < lo) return Rat(lo - x);
  if (x > hi) return Rat(x - hi);
  return Rat(0);
}

Rat cross(const RPoint& o, const RPoint& a, const RPoint& b) {
  return (a.s - o.s) * (b.t - o.t) - (a.t - o.t) * (b.s - o.s);
}

Rat loop_area2(const RLoop& loop) {
  Rat acc = 0;
  for (size_t i = 0; i < loop.size(); ++i) {
    const RPoint& p = loop[i];
    const RPoint& q = loop[(i + 1) % loop.size()];
    acc += p.s * q.t - q.s * p.t;
  }
  return acc;
}

// Drops repeated vertices, checks every edge is axis-parallel, merges
// collinear runs (cyclically), and rejects zero-width spikes.
RLoop normalize_rloop(RLoop loop, int* merged) {
  RLoop out;
  for (const RPoint& p : loop) {
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  }
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  if (out.size() < 4) throw SelfIntersecting("loop degenerates to fewer than 4 corners");

  for (size_t i = 0; i < out.size(); ++i) {
    const RPoint& p = out[i];
    const RPoint& q = out[(i + 1) % out.size()];
    bool hs = (p.t == q.t), vs = (p.s == q.s);
    if (hs == vs) throw NotRectilinear("edge is not axis-parallel in the rotated frame");
  }

  // Cyclic collinear merge, linear pass. An axis repeat with reversed
  // direction is a spike: the boundary doubles back over itself.
  auto run_axis = [](const RPoint& a, const RPoint& b, const RPoint& c) -> int {
    if (a.t == b.t && b.t == c.t) return 0;
    if (a.s == b.s && b.s == c.s) return 1;
    return -1;
  };
  auto drop_middle = [&](RLoop& m, size_t mid) {
    size_t n = m.size();
    const RPoint& a = m[(mid + n - 1) % n];
    const RPoint& b = m[mid];
    const RPoint& c = m[(mid + 1) % n];
    const Rat& u0 = (a.t == b.t) ? a.s : a.t;
    const Rat& u1 = (a.t == b.t) ? b.s : b.t;
    const Rat& u2 = (a.t == b.t) ? c.s : c.t;
    if (sgn(u1 - u0) != sgn(u2 - u1)) {
      throw SelfIntersecting("boundary spike (reversed collinear edge)");
    }
    m.erase(m.begin() + (long)mid);
    if (merged) ++*merged;
  };
  RLoop m;
  for (const RPoint& p : out) {
    m.push_back(p);
    while (m.size() >= 3 && run_axis(m[m.size() - 3], m[m.size() - 2], m.back()) >= 0) {
      drop_middle(m, m.size() - 2);
    }
  }
  for (bool wrap = true; wrap && m.size() >= 4;) {
    wrap = false;
    if (run_axis(m[m.size() - 2], m.back(), m.front()) >= 0) {
      drop_middle(m, m.size() - 1);
      wrap = true;
    } else if (run_axis(m.back(), m.front(), m[1]) >= 0) {
      drop_middle(m, 0);
      wrap = true;
    }
  }
  if (m.size() < 4) throw SelfIntersecting("loop degenerates to fewer than 4 corners");
  return m;
}

struct AxisSeg {
  int axis;           // 0: t = coord, s in [lo, hi]; 1: s = coord, t in [lo, hi]
  Rat coord, lo, hi;  // lo <= hi
  size_t loop, index;
};

AxisSeg edge_to_seg(const RPoint& p, const RPoint& q, size_t li, size_t ei) {
  if (p.t == q.t) return {0, p.t, std::min(p.s, q.s), std::max(p.s, q.s), li, ei};
  return {1, p.s, std::min(p.t, q.t), std::max(p.t, q.t), li, ei};
}

// Pairwise crossing scan for untrusted input. Non-adjacent edges may share
// at most a single point that is an endpoint of both (a pinch vertex).
void check_simple(const std::vector<RLoop>& loops) {
  std::vector<AxisSeg> segs;
  for (size_t li = 0; li < loops.size(); ++li) {
    const RLoop& L = loops[li];
    for (size_t i = 0; i < L.size(); ++i) {
      segs.push_back(edge_to_seg(L[i], L[(i + 1) % L.size()], li, i));
    }
  }
  for (size_t i = 0; i < segs.size(); ++i) {
    for (size_t j = i + 1; j < segs.size(); ++j) {
      const AxisSeg& A = segs[i];
      const AxisSeg& B = segs[j];
      bool adjacent = false;
      if (A.loop == B.loop) {
        size_t n = loops[A.loop].size();
        size_t d = (B.index + n - A.index) % n;
        adjacent = (d == 1 || d == n - 1);
      }
      if (adjacent) continue;  // perpendicular after merge; meet only at the shared corner
      if (A.axis == B.axis) {
        if (A.coord != B.coord) continue;
        Rat lo = std::max(A.lo, B.lo), hi = std::min(A.hi, B.hi);
        if (lo > hi) continue;
        if (lo < hi) throw SelfIntersecting("collinear boundary edges overlap");
        // single collinear touch point; endpoint of both by construction
      } else {
        const AxisSeg& H = A.axis == 0 ? A : B;
        const AxisSeg& V = A.axis == 0 ? B : A;
        if (V.coord < H.lo || V.coord > H.hi || H.coord < V.lo || H.coord > V.hi) continue;
        bool corner_h = (V.coord == H.lo || V.coord == H.hi);
        bool corner_v = (H.coord == V.lo || H.coord == V.hi);
        if (!(corner_h && corner_v)) throw SelfIntersecting("boundary edges cross");
      }
    }
  }
}

// Parity test of p against one loop's edges, ray cast toward t = -inf.
// Undefined when p lies on the loop; callers rule that out first.
bool loop_parity_contains(const RLoop& L, const RPoint& p) {
  long hits = 0;
  for (size_t i = 0; i < L.size(); ++i) {
    const RPoint& a = L[i];
    const RPoint& b = L[(i + 1) % L.size()];
    if (a.t != b.t) continue;
    Rat lo = std::min(a.s, b.s), hi = std::max(a.s, b.s);
    if (a.t < p.t && lo <= p.s && p.s < hi) ++hits;
  }
  return hits % 2 == 1;
}

// A boundary point of L that is never on another non-overlapping loop:
// midpoint of the lowest (then leftmost) horizontal edge.
RPoint loop_rep_point(const RLoop& L) {
  bool found = false;
  Rat best_t, best_lo, best_hi;
  for (size_t i = 0; i < L.size(); ++i) {
    const RPoint& a = L[i];
    const RPoint& b = L[(i + 1) % L.size()];
    if (a.t != b.t) continue;
    Rat lo = std::min(a.s, b.s), hi = std::max(a.s, b.s);
    if (!found || a.t < best_t || (a.t == best_t && lo < best_lo)) {
      found = true;
      best_t = a.t;
      best_lo = lo;
      best_hi = hi;
    }
  }
  return {Rat((best_lo + best_hi) / 2), best_t};
}

std::vector<Face> extract_faces(const std::vector<RLoop>& loops) {
  std::vector<Face> faces;
  for (const RLoop& L : loops) {
    for (size_t i = 0; i < L.size(); ++i) {
      const RPoint& p = L[i];
      const RPoint& q = L[(i + 1) % L.size()];
      Face f;
      if (p.t == q.t) {
        f.axis = 0;
        f.coord = p.t;
        f.lo = std::min(p.s, q.s);
        f.hi = std::max(p.s, q.s);
        f.side = q.s > p.s ? +1 : -1;  // interior on the left of the walk
      } else {
        f.axis = 1;
        f.coord = p.s;
        f.lo = std::min(p.t, q.t);
        f.hi = std::max(p.t, q.t);
        f.side = q.t > p.t ? -1 : +1;
      }
      faces.push_back(std::move(f));
    }
  }
  return faces;
}

}  // namespace

Q2 world_length(const RPoint& a, const RPoint& b) {
  Rat ds = b.s - a.s, dt = b.t - a.t;
  if (ds == 0 && dt == 0) return Q2();
  if (dt == 0) return q2_sqrt2(rat_abs(ds) / 2);
  if (ds == 0) return q2_sqrt2(rat_abs(dt) / 2);
  if (ds == dt || ds == -dt) return Q2(rat_abs(ds));
  throw Error("world_length: segment is neither world- nor rotated-axis-parallel");
}

Rat l1_gap(const RPoint& a, const RPoint& b) {
  return std::max(rat_abs(b.s - a.s), rat_abs(b.t - a.t));
}

namespace detail {

HDomain assemble_hdomain(std::vector<RLoop> loops, bool validate_simple, int* merged_collinear) {
  HDomain d;
  if (merged_collinear) *merged_collinear = 0;
  if (loops.empty()) return d;

  for (RLoop& L : loops) L = normalize_rloop(std::move(L), merged_collinear);
  if (validate_simple) check_simple(loops);

  std::vector<Rat> area2(loops.size());
  std::vector<RPoint> reps(loops.size());
  for (size_t i = 0; i < loops.size(); ++i) {
    area2[i] = loop_area2(loops[i]);
    if (area2[i] == 0) throw SelfIntersecting("loop encloses zero area");
    reps[i] = loop_rep_point(loops[i]);
  }

  std::vector<int> depth(loops.size(), 0);
  for (size_t i = 0; i < loops.size(); ++i) {
    for (size_t j = 0; j < loops.size(); ++j) {
      if (i != j && loop_parity_contains(loops[j], reps[i])) ++depth[i];
    }
  }

  // Outer loops counter-clockwise, holes clockwise.
  for (size_t i = 0; i < loops.size(); ++i) {
    bool want_ccw = depth[i] % 2 == 0;
    if (want_ccw != (area2[i] > 0)) std::reverse(loops[i].begin(), loops[i].end());
  }

  d.loops = std::move(loops);
  d.loop_parent.assign(d.loops.size(), -1);
  for (size_t i = 0; i < d.loops.size(); ++i) {
    if (depth[i] % 2 == 0) continue;
    for (size_t j = 0; j < d.loops.size(); ++j) {
      if (j != i && depth[j] == depth[i] - 1 && loop_parity_contains(d.loops[j], reps[i])) {
        d.loop_parent[i] = (int)j;
        break;
      }
    }
    if (d.loop_parent[i] < 0) throw SelfIntersecting("hole without an enclosing loop");
  }
  d.faces = extract_faces(d.loops);
  return d;
}

}  // namespace detail

HDomain build_hdomain(const std::vector<RLoop>& rotated_loops, int* merged_collinear) {
  return detail::assemble_hdomain(rotated_loops, true, merged_collinear);
}

HDomain build_hdomain_world(const std::vector<std::vector<WPoint>>& world_loops,
                            int* merged_collinear) {
  std::vector<RLoop> rl;
  rl.reserve(world_loops.size());
  for (const auto& L : world_loops) {
    RLoop r;
    r.reserve(L.size());
    for (const WPoint& p : L) r.push_back(to_rotated(p));
    rl.push_back(std::move(r));
  }
  return build_hdomain(rl, merged_collinear);
}

int HDomain::component_count() const {
  int n = 0;
  for (int p : loop_parent) n += (p < 0);
  return n;
}

Rat HDomain::rotated_area() const {
  Rat acc = 0;
  for (const RLoop& L : loops) acc += loop_area2(L);
  return Rat(acc / 2);
}

Q2 HDomain::world_perimeter() const {
  Rat half_sum = 0;
  for (const Face& f : faces) half_sum += f.hi - f.lo;
  return q2_sqrt2(Rat(half_sum / 2));
}

void HDomain::bounding_box(Rat& s0, Rat& s1, Rat& t0, Rat& t1) const {
  if (empty()) throw EmptyDomain("bounding box of an empty domain");
  bool first = true;
  for (const RLoop& L : loops) {
    for (const RPoint& p : L) {
      if (first) {
        s0 = s1 = p.s;
        t0 = t1 = p.t;
        first = false;
      } else {
        s0 = std::min(s0, p.s);
        s1 = std::max(s1, p.s);
        t0 = std::min(t0, p.t);
        t1 = std::max(t1, p.t);
      }
    }
  }
}

bool HDomain::on_boundary(const RPoint& p) const {
  for (const Face& f : faces) {
    const Rat& along = f.axis == 0 ? p.s : p.t;
    const Rat& across = f.axis == 0 ? p.t : p.s;
    if (across == f.coord && f.lo <= along && along <= f.hi) return true;
  }
  return false;
}

bool HDomain::contains(const RPoint& p) const {
  if (on_boundary(p)) return false;
  long hits = 0;
  for (const Face& f : faces) {
    if (f.axis == 0 && f.coord < p.t && f.lo <= p.s && p.s < f.hi) ++hits;
  }
  return hits % 2 == 1;
}

std::vector<HDomain> HDomain::components() const {
  std::vector<HDomain> out;
  for (size_t i = 0; i < loops.size(); ++i) {
    if (loop_parent[i] >= 0) continue;
    HDomain c;
    c.loops.push_back(loops[i]);
    c.loop_parent.push_back(-1);
    for (size_t j = 0; j < loops.size(); ++j) {
      if (loop_parent[j] == (int)i) {
        c.loops.push_back(loops[j]);
        c.loop_parent.push_back(0);
      }
    }
    c.faces = extract_faces(c.loops);
    out.push_back(std::move(c));
  }
  return out;
}

// --- general (non-rectilinear) polygons, world frame ---

namespace {

Rat wcross(const WPoint& o, const WPoint& a, const WPoint& b) {
  return (a.x1 - o.x1) * (b.x2 - o.x2) - (a.x2 - o.x2) * (b.x1 - o.x1);
}

bool on_wsegment(const WPoint& p, const WPoint& a, const WPoint& b) {
  if (wcross(a, b, p) != 0) return false;
  return std::min(a.x1, b.x1) <= p.x1 && p.x1 <= std::max(a.x1, b.x1) &&
         std::min(a.x2, b.x2) <= p.x2 && p.x2 <= std::max(a.x2, b.x2);
}

bool wsegments_share_point(const WPoint& p1, const WPoint& p2, const WPoint& q1, const WPoint& q2) {
  Rat d1 = wcross(q1, q2, p1), d2 = wcross(q1, q2, p2);
  Rat d3 = wcross(p1, p2, q1), d4 = wcross(p1, p2, q2);
  if (sgn(d1) * sgn(d2) < 0 && sgn(d3) * sgn(d4) < 0) return true;
  return (d1 == 0 && on_wsegment(p1, q1, q2)) || (d2 == 0 && on_wsegment(p2, q1, q2)) ||
         (d3 == 0 && on_wsegment(q1, p1, p2)) || (d4 == 0 && on_wsegment(q2, p1, p2));
}

Rat wloop_area2(const std::vector<WPoint>& L) {
  Rat acc = 0;
  for (size_t i = 0; i < L.size(); ++i) {
    const WPoint& p = L[i];
    const WPoint& q = L[(i + 1) % L.size()];
    acc += p.x1 * q.x2 - q.x1 * p.x2;
  }
  return acc;
}

bool wloop_parity_contains(const std::vector<WPoint>& L, const WPoint& p) {
  long hits = 0;
  for (size_t i = 0; i < L.size(); ++i) {
    const WPoint& a = L[i];
    const WPoint& b = L[(i + 1) % L.size()];
    if (a.x2 == b.x2) continue;
    bool straddles = (a.x2 <= p.x2 && p.x2 < b.x2) || (b.x2 <= p.x2 && p.x2 < a.x2);
    if (!straddles) continue;
    Rat xi = a.x1 + (p.x2 - a.x2) * (b.x1 - a.x1) / (b.x2 - a.x2);
    if (xi > p.x1) ++hits;
  }
  return hits % 2 == 1;
}

}  // namespace

GeneralDomain build_general_domain(const std::vector<std::vector<WPoint>>& world_loops) {
  GeneralDomain d;
  for (const auto& raw : world_loops) {
    std::vector<WPoint> L;
    for (const WPoint& p : raw) {
      if (L.empty() || !(L.back() == p)) L.push_back(p);
    }
    while (L.size() > 1 && L.front() == L.back()) L.pop_back();
    if (L.size() < 3) throw SelfIntersecting("polygon loop needs at least 3 distinct vertices");
    // merge collinear runs (cyclic)
    bool changed = true;
    while (changed && L.size() > 3) {
      changed = false;
      for (size_t i = 0; i < L.size() && L.size() > 3; ++i) {
        const WPoint& a = L[(i + L.size() - 1) % L.size()];
        const WPoint& c = L[(i + 1) % L.size()];
        if (wcross(a, L[i], c) == 0) {
          L.erase(L.begin() + (long)i);
          changed = true;
          break;
        }
      }
    }
    if (wloop_area2(L) == 0) throw SelfIntersecting("polygon loop encloses zero area");
    d.loops.push_back(std::move(L));
  }
  if (d.loops.empty()) throw EmptyDomain("general domain without loops");

  // non-adjacent edges may not meet at all
  struct E {
    WPoint a, b;
    size_t loop, index;
  };
  std::vector<E> edges;
  for (size_t li = 0; li < d.loops.size(); ++li) {
    const auto& L = d.loops[li];
    for (size_t i = 0; i < L.size(); ++i) edges.push_back({L[i], L[(i + 1) % L.size()], li, i});
  }
  for (size_t i = 0; i < edges.size(); ++i) {
    for (size_t j = i + 1; j < edges.size(); ++j) {
      bool adjacent = false;
      if (edges[i].loop == edges[j].loop) {
        size_t n = d.loops[edges[i].loop].size();
        size_t dd = (edges[j].index + n - edges[i].index) % n;
        adjacent = (dd == 1 || dd == n - 1);
      }
      if (adjacent) continue;
      if (wsegments_share_point(edges[i].a, edges[i].b, edges[j].a, edges[j].b)) {
        throw SelfIntersecting("polygon boundary self-intersects");
      }
    }
  }

  // orientation by nesting depth: outer counter-clockwise, holes clockwise
  for (size_t i = 0; i < d.loops.size(); ++i) {
    int depth = 0;
    for (size_t j = 0; j < d.loops.size(); ++j) {
      if (i != j && wloop_parity_contains(d.loops[j], d.loops[i][0])) ++depth;
    }
    bool want_ccw = depth % 2 == 0;
    if (want_ccw != (wloop_area2(d.loops[i]) > 0)) {
      std::reverse(d.loops[i].begin(), d.loops[i].end());
    }
  }
  return d;
}

bool GeneralDomain::on_boundary(const WPoint& p) const {
  for (const auto& L : loops) {
    for (size_t i = 0; i < L.size(); ++i) {
      if (on_wsegment(p, L[i], L[(i + 1) % L.size()])) return true;
    }
  }
  return false;
}

bool GeneralDomain::contains(const WPoint& p) const {
  if (on_boundary(p)) return false;
  long parity = 0;
  for (const auto& L : loops) parity += wloop_parity_contains(L, p) ? 1 : 0;
  return parity % 2 == 1;
}

void GeneralDomain::bounding_box(Rat& x1lo, Rat& x1hi, Rat& x2lo, Rat& x2hi) const {
  if (loops.empty()) throw EmptyDomain("bounding box of an empty domain");
  bool first = true;
  for (const auto& L : loops) {
    for (const WPoint& p : L) {
      if (first) {
        x1lo = x1hi = p.x1;
        x2lo = x2hi = p.x2;
        first = false;
      } else {
        x1lo = std::min(x1lo, p.x1);
        x1hi = std::max(x1hi, p.x1);
        x2lo = std::min(x2lo, p.x2);
        x2hi = std::max(x2hi, p.x2);
      }
    }
  }
}

// --- distances ---

Rat cheb_point_face(const RPoint& p, const Face& f) {
  const Rat& along = f.axis == 0 ? p.s : p.t;
  const Rat& across = f.axis == 0 ? p.t : p.s;
  return std::max(range_gap(along, f.lo, f.hi), rat_abs(across - f.coord));
}

Rat l1_distance(const RPoint& p, const HDomain& d) {
  if (d.empty()) throw EmptyDomain("distance to an empty domain");
  Rat best;
  bool first = true;
  for (const Face& f : d.faces) {
    Rat v = cheb_point_face(p, f);
    if (first || v < best) {
      best = v;
      first = false;
    }
  }
  return best;
}

namespace {

// Chebyshev distance from p to segment [a,b] of arbitrary rational
// direction, all in rotated coordinates. The objective max(|ds|,|dt|) is
// convex piecewise-affine along the segment, so the minimum sits at a
// parameter where ds = 0, dt = 0, |ds| = |dt|, or at an endpoint.
Rat cheb_point_segment(const RPoint& p, const RPoint& a, const RPoint& b) {
  Rat es = b.s - a.s, et = b.t - a.t;
  std::vector<Rat> cands = {Rat(0), Rat(1)};
  auto add = [&cands](const Rat& num, const Rat& den) {
    if (den != 0) {
      Rat w(num / den);
      if (w > 0 && w < 1) cands.push_back(std::move(w));
    }
  };
  add(p.s - a.s, es);
  add(p.t - a.t, et);
  add((p.s - a.s) - (p.t - a.t), es - et);   // ds = dt
  add((p.s - a.s) + (p.t - a.t), es + et);   // ds = -dt
  Rat best;
  bool first = true;
  for (const Rat& w : cands) {
    Rat ds = a.s + w * es - p.s;
    Rat dt = a.t + w * et - p.t;
    Rat v = std::max(rat_abs(ds), rat_abs(dt));
    if (first || v < best) {
      best = v;
      first = false;
    }
  }
  return best;
}

}  // namespace

Rat l1_distance(const WPoint& p, const GeneralDomain& d) {
  if (d.loops.empty()) throw EmptyDomain("distance to an empty domain");
  RPoint rp = to_rotated(p);
  Rat best;
  bool first = true;
  for (const auto& L : d.loops) {
    for (size_t i = 0; i < L.size(); ++i) {
      RPoint a = to_rotated(L[i]);
      RPoint b = to_rotated(L[(i + 1) % L.size()]);
      Rat v = cheb_point_segment(rp, a, b);
      if (first || v < best) {
        best = v;
        first = false;
      }
    }
  }
  return best;
}

Rat cheb_segment_segment(const RPoint& a, const RPoint& b, const RPoint& c, const RPoint& d,
                         RPoint* witness) {
  // Over (u, w) in the unit square, ds and dt are affine:
  //   ds(u,w) = f0 + fu*u + fw*w,  dt(u,w) = g0 + gu*u + gw*w.
  // max(|ds|,|dt|) is convex piecewise-affine; its minimum over the square
  // is attained where two of the arrangement lines meet (or at a corner).
  Rat f0 = a.s - c.s, fu = b.s - a.s, fw = c.s - d.s;
  Rat g0 = a.t - c.t, gu = b.t - a.t, gw = c.t - d.t;

  struct Line {
    Rat A, B, C;  // A*u + B*w = C
  };
  std::vector<Line> lines = {
      {Rat(1), Rat(0), Rat(0)}, {Rat(1), Rat(0), Rat(1)},
      {Rat(0), Rat(1), Rat(0)}, {Rat(0), Rat(1), Rat(1)},
      {fu, fw, Rat(-f0)},       {gu, gw, Rat(-g0)},
      {Rat(fu - gu), Rat(fw - gw), Rat(g0 - f0)},
      {Rat(fu + gu), Rat(fw + gw), Rat(-f0 - g0)},
  };

  Rat best;
  RPoint best_pt;
  bool first = true;
  auto consider = [&](const Rat& u, const Rat& w) {
    if (u < 0 || u > 1 || w < 0 || w > 1) return;
    Rat ds = f0 + fu * u + fw * w;
    Rat dt = g0 + gu * u + gw * w;
    Rat v = std::max(rat_abs(ds), rat_abs(dt));
    if (first || v < best) {
      best = v;
      best_pt = {Rat(a.s + u * (b.s - a.s)), Rat(a.t + u * (b.t - a.t))};
      first = false;
    }
  };
  for (size_t i = 0; i < lines.size(); ++i) {
    for (size_t j = i + 1; j < lines.size(); ++j) {
      Rat det = lines[i].A * lines[j].B - lines[j].A * lines[i].B;
      if (det == 0) continue;
      Rat u((lines[i].C * lines[j].B - lines[j].C * lines[i].B) / det);
      Rat w((lines[i].A * lines[j].C - lines[j].A * lines[i].C) / det);
      consider(u, w);
    }
  }
  if (witness) *witness = best_pt;
  return best;
}

// --- convex polygon utilities ---

Rat poly_area2(const ConvexPoly& p) {
  Rat acc = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    const RPoint& u = p[i];
    const RPoint& v = p[(i + 1) % p.size()];
    acc += u.s * v.t - v.s * u.t;
  }
  return acc;
}

RPoint poly_centroid(const ConvexPoly& p) {
  Rat a2 = poly_area2(p);
  if (a2 == 0) throw Error("centroid of a degenerate polygon");
  Rat cs = 0, ct = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    const RPoint& u = p[i];
    const RPoint& v = p[(i + 1) % p.size()];
    Rat w = u.s * v.t - v.s * u.t;
    cs += (u.s + v.s) * w;
    ct += (u.t + v.t) * w;
  }
  return {Rat(cs / (3 * a2)), Rat(ct / (3 * a2))};
}

bool poly_is_convex_ccw(const ConvexPoly& p) {
  if (p.size() < 3) return false;
  for (size_t i = 0; i < p.size(); ++i) {
    if (cross(p[i], p[(i + 1) % p.size()], p[(i + 2) % p.size()]) < 0) return false;
  }
  return poly_area2(p) > 0;
}

ConvexPoly clip_halfplane(const ConvexPoly& p, const Rat& ns, const Rat& nt, const Rat& c) {
  ConvexPoly out;
  size_t n = p.size();
  for (size_t i = 0; i < n; ++i) {
    const RPoint& cur = p[i];
    const RPoint& nxt = p[(i + 1) % n];
    Rat ec = ns * cur.s + nt * cur.t - c;
    Rat en = ns * nxt.s + nt * nxt.t - c;
    if (ec <= 0) out.push_back(cur);
    if ((ec < 0 && en > 0) || (ec > 0 && en < 0)) {
      Rat w(ec / (ec - en));
      out.push_back({Rat(cur.s + w * (nxt.s - cur.s)), Rat(cur.t + w * (nxt.t - cur.t))});
    }
  }
  ConvexPoly dedup;
  for (const RPoint& q : out) {
    if (dedup.empty() || !(dedup.back() == q)) dedup.push_back(q);
  }
  while (dedup.size() > 1 && dedup.front() == dedup.back()) dedup.pop_back();
  if (dedup.size() < 3 || poly_area2(dedup) == 0) return {};
  return dedup;
}

void split_by_line(const ConvexPoly& p, const Rat& ns, const Rat& nt, const Rat& c,
                   ConvexPoly& lo, ConvexPoly& hi) {
  lo = clip_halfplane(p, ns, nt, c);
  hi = clip_halfplane(p, Rat(-ns), Rat(-nt), Rat(-c));
}

ConvexPoly convex_intersect(const ConvexPoly& a, const ConvexPoly& b) {
  ConvexPoly r = a;
  for (size_t i = 0; i < b.size() && !r.empty(); ++i) {
    const RPoint& p = b[i];
    const RPoint& q = b[(i + 1) % b.size()];
    // interior of b lies left of (p -> q): cross(q-p, x-p) >= 0
    Rat ns = q.t - p.t, nt = p.s - q.s;
    Rat c = ns * p.s + nt * p.t;
    r = clip_halfplane(r, ns, nt, c);
  }
  return r;
}

bool point_in_convex_closed(const ConvexPoly& p, const RPoint& q) {
  for (size_t i = 0; i < p.size(); ++i) {
    if (cross(p[i], p[(i + 1) % p.size()], q) < 0) return false;
  }
  return !p.empty();
}

}  // namespace eikjump
