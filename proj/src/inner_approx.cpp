#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "eikjump/errors.hpp"
#include "eikjump/geometry.hpp"

namespace eikjump {

namespace {

using RSeg = std::pair<RPoint, RPoint>;

// Exact Chebyshev distance between the box [s0,s1]x[t0,t1] and the segment
// [a,b]. The objective is convex piecewise-affine along the segment, so the
// minimum is attained at a breakpoint: an endpoint, a crossing of the box's
// coordinate strips, or a tie between the two gap components.
Rat box_segment_dist(const Rat& s0, const Rat& s1, const Rat& t0, const Rat& t1,
                     const RPoint& a, const RPoint& b) {
  Rat es = b.s - a.s, et = b.t - a.t;
  std::vector<Rat> cands = {Rat(0), Rat(1)};
  auto add = [&cands](const Rat& num, const Rat& den) {
    if (den != 0) {
      Rat w(num / den);
      if (w > 0 && w < 1) cands.push_back(std::move(w));
    }
  };
  add(s0 - a.s, es);
  add(s1 - a.s, es);
  add(t0 - a.t, et);
  add(t1 - a.t, et);
  for (const Rat* sx : {&s0, &s1}) {
    for (const Rat* ty : {&t0, &t1}) {
      add((*sx - a.s) - (*ty - a.t), es - et);
      add((*sx - a.s) + (*ty - a.t), es + et);
    }
  }
  auto gap = [](const Rat& x, const Rat& lo, const Rat& hi) -> Rat {
    if (x < lo) return Rat(lo - x);
    if (x > hi) return Rat(x - hi);
    return Rat(0);
  };
  Rat best;
  bool first = true;
  for (const Rat& w : cands) {
    Rat cs = a.s + w * es, ct = a.t + w * et;
    Rat v = std::max(gap(cs, s0, s1), gap(ct, t0, t1));
    if (first || v < best) {
      best = v;
      first = false;
    }
  }
  return best;
}

// Same computation in floating point; used as a filter, never as evidence.
double box_segment_dist_dbl(double s0, double s1, double t0, double t1, double as, double at,
                            double bs, double bt) {
  double es = bs - as, et = bt - at;
  double cands[20];
  int nc = 0;
  cands[nc++] = 0.0;
  cands[nc++] = 1.0;
  auto add = [&](double num, double den) {
    if (den != 0.0) {
      double w = num / den;
      if (w > 0.0 && w < 1.0) cands[nc++] = w;
    }
  };
  add(s0 - as, es);
  add(s1 - as, es);
  add(t0 - at, et);
  add(t1 - at, et);
  for (double sx : {s0, s1}) {
    for (double ty : {t0, t1}) {
      add((sx - as) - (ty - at), es - et);
      add((sx - as) + (ty - at), es + et);
    }
  }
  auto gap = [](double x, double lo, double hi) {
    if (x < lo) return lo - x;
    if (x > hi) return x - hi;
    return 0.0;
  };
  double best = 1e300;
  for (int k = 0; k < nc; ++k) {
    double cs = as + cands[k] * es, ct = at + cands[k] * et;
    best = std::min(best, std::max(gap(cs, s0, s1), gap(ct, t0, t1)));
  }
  return best;
}

struct FaceBuckets {
  std::map<std::pair<int, Rat>, std::vector<std::pair<Rat, Rat>>> ranges;

  explicit FaceBuckets(const HDomain& d) {
    for (const Face& f : d.faces) ranges[{f.axis, f.coord}].push_back({f.lo, f.hi});
  }
  bool point_on(const RPoint& p) const {
    auto hit = [this](int axis, const Rat& coord, const Rat& along) {
      auto it = ranges.find({axis, coord});
      if (it == ranges.end()) return false;
      for (const auto& r : it->second) {
        if (r.first <= along && along <= r.second) return true;
      }
      return false;
    };
    return hit(0, p.t, p.s) || hit(1, p.s, p.t);
  }
  bool range_touches(int axis, const Rat& coord, const Rat& lo, const Rat& hi) const {
    auto it = ranges.find({axis, coord});
    if (it == ranges.end()) return false;
    for (const auto& r : it->second) {
      if (std::max(lo, r.first) <= std::min(hi, r.second)) return true;
    }
    return false;
  }
};

// True when prev's closure meets the boundary of cover; with prev a subset
// of cover this is exactly the failure of strict interior containment.
bool boundaries_touch(const HDomain& prev, const HDomain& cover) {
  FaceBuckets cb(cover);
  FaceBuckets pb(prev);
  for (const Face& f : prev.faces) {
    if (cb.range_touches(f.axis, f.coord, f.lo, f.hi)) return true;
  }
  for (const RLoop& L : prev.loops) {
    for (const RPoint& v : L) {
      if (cb.point_on(v)) return true;
    }
  }
  for (const RLoop& L : cover.loops) {
    for (const RPoint& v : L) {
      if (pb.point_on(v)) return true;
    }
  }
  // perpendicular interior-interior crossings cannot occur for a subset
  return false;
}

long long floor_div(const Rat& x, const Rat& p) {
  return rat_floor(Rat(x / p)).convert_to<long long>();
}

struct Attempt {
  bool ok = false;
  bool hopeless = false;  // no refinement can succeed
  HDomain domain;
  InnerApproxCert cert;
};

Attempt attempt_pitch(const std::vector<RSeg>& bsegs, int n, const HDomain& prev, const Rat& pitch,
                      const std::function<Rat(const RPoint&)>& recheck) {
  Attempt res;
  Rat T = Rat(1) / (Rat(n) + rat(3, 8));
  Rat lower = Rat(1) / (Rat(n) + rat(1, 2));
  Rat upper = Rat(1) / Rat(n);

  Rat smin = bsegs[0].first.s, smax = smin, tmin = bsegs[0].first.t, tmax = tmin;
  for (const RSeg& e : bsegs) {
    for (const RPoint* p : {&e.first, &e.second}) {
      smin = std::min(smin, p->s);
      smax = std::max(smax, p->s);
      tmin = std::min(tmin, p->t);
      tmax = std::max(tmax, p->t);
    }
  }
  long long i_lo = floor_div(smin, pitch) - 1, i_hi = floor_div(smax, pitch) + 2;
  long long j_lo = floor_div(tmin, pitch) - 1, j_hi = floor_div(tmax, pitch) + 2;
  long long ni = i_hi - i_lo, nj = j_hi - j_lo;
  if (ni > 4096 || nj > 4096) return res;  // over the refinement budget

  // inside flags for cell centers by column parity
  std::vector<uint8_t> inside((size_t)(ni * nj), 0);
  for (long long i = 0; i < ni; ++i) {
    Rat mid_s = (Rat(i_lo + i) + rat(1, 2)) * pitch;
    std::vector<Rat> crossings;
    for (const RSeg& e : bsegs) {
      const RPoint& A = e.first;
      const RPoint& B = e.second;
      if (A.s == B.s) continue;
      const RPoint& L = A.s < B.s ? A : B;
      const RPoint& R = A.s < B.s ? B : A;
      if (L.s <= mid_s && mid_s < R.s) {
        crossings.push_back(Rat(L.t + (mid_s - L.s) * (R.t - L.t) / (R.s - L.s)));
      }
    }
    std::sort(crossings.begin(), crossings.end());
    size_t ptr = 0;
    for (long long j = 0; j < nj; ++j) {
      Rat mid_t = (Rat(j_lo + j) + rat(1, 2)) * pitch;
      while (ptr < crossings.size() && crossings[ptr] < mid_t) ++ptr;
      inside[(size_t)(j * ni + i)] = (ptr % 2 == 1) ? 1 : 0;
    }
  }

  // cell filter: keep cells whose whole closure stays T away from every
  // boundary segment; floating point decides the clear cases, exact
  // arithmetic the borderline ones
  std::vector<std::array<double, 4>> segd;
  segd.reserve(bsegs.size());
  for (const RSeg& e : bsegs) {
    segd.push_back({rat_to_double(e.first.s), rat_to_double(e.first.t), rat_to_double(e.second.s),
                    rat_to_double(e.second.t)});
  }
  double pd = rat_to_double(pitch), Td = rat_to_double(T);
  const double slack = 1e-6;

  CellGrid g;
  g.pitch = pitch;
  g.origin_s = Rat(i_lo) * pitch;
  g.origin_t = Rat(j_lo) * pitch;
  g.nx = (int)ni;
  g.ny = (int)nj;
  g.in.assign((size_t)(ni * nj), 0);

  bool any = false;
  double max_reach = 0;  // upper bound for sup of the distance over cells
  for (long long j = 0; j < nj; ++j) {
    double ct0 = rat_to_double(g.origin_t) + (double)j * pd;
    for (long long i = 0; i < ni; ++i) {
      if (!inside[(size_t)(j * ni + i)]) continue;
      double cs0 = rat_to_double(g.origin_s) + (double)i * pd;
      double d = 1e300;
      for (const auto& sd : segd) {
        d = std::min(d, box_segment_dist_dbl(cs0, cs0 + pd, ct0, ct0 + pd, sd[0], sd[1], sd[2],
                                             sd[3]));
      }
      max_reach = std::max(max_reach, d + pd);
      bool keep;
      if (d >= Td + slack) {
        keep = true;
      } else if (d < Td - slack) {
        keep = false;
      } else {
        Rat s0 = g.origin_s + Rat(i) * pitch;
        Rat t0 = g.origin_t + Rat(j) * pitch;
        Rat ex;
        bool first = true;
        for (const RSeg& e : bsegs) {
          Rat v = box_segment_dist(s0, Rat(s0 + pitch), t0, Rat(t0 + pitch), e.first, e.second);
          if (first || v < ex) {
            ex = v;
            first = false;
          }
        }
        keep = ex >= T;
      }
      if (keep) {
        g.set((int)i, (int)j, true);
        any = true;
      }
    }
  }
  if (!any) {
    // Once the pitch is below T, every point with d >= T would lie in a cell
    // whose center is inside, so a small max_reach proves sup d < T and no
    // finer pitch can help.
    if (pd < Td && max_reach < Td - slack) res.hopeless = true;
    return res;
  }

  // union with the previous shell on a common refinement of the grid
  HDomain out;
  if (prev.empty()) {
    out = grid_to_domain(g);
  } else {
    Rat q = pitch;
    int guard = 0;
    auto aligned = [&q](const HDomain& d) {
      for (const RLoop& L : d.loops) {
        for (const RPoint& p : L) {
          if (rat_den(Rat(p.s / q)) != 1 || rat_den(Rat(p.t / q)) != 1) return false;
        }
      }
      return true;
    };
    while (!aligned(prev)) {
      q /= 2;
      if (++guard > 48) throw NotGridAligned("previous shell is not on a dyadic grid");
    }
    CellGrid pg = rasterize(prev, q);
    long long m = floor_div(pitch, q);  // exact integer refinement factor
    long long gi = floor_div(g.origin_s, q), gj = floor_div(g.origin_t, q);
    long long pi = floor_div(pg.origin_s, q), pj = floor_div(pg.origin_t, q);
    long long u_i0 = std::min(gi, pi), u_j0 = std::min(gj, pj);
    long long u_i1 = std::max(gi + m * g.nx, pi + pg.nx);
    long long u_j1 = std::max(gj + m * g.ny, pj + pg.ny);
    CellGrid u;
    u.pitch = q;
    u.origin_s = Rat(u_i0) * q;
    u.origin_t = Rat(u_j0) * q;
    u.nx = (int)(u_i1 - u_i0);
    u.ny = (int)(u_j1 - u_j0);
    if ((long long)u.nx * u.ny > (64LL << 20)) throw TooLarge("shell union grid too large");
    u.in.assign((size_t)u.nx * u.ny, 0);
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        if (!g.at(i, j)) continue;
        for (long long b = 0; b < m; ++b) {
          for (long long a = 0; a < m; ++a) {
            u.set((int)(gi - u_i0 + m * i + a), (int)(gj - u_j0 + m * j + b), true);
          }
        }
      }
    }
    for (int j = 0; j < pg.ny; ++j) {
      for (int i = 0; i < pg.nx; ++i) {
        if (pg.at(i, j)) u.set((int)(pi - u_i0 + i), (int)(pj - u_j0 + j), true);
      }
    }
    out = grid_to_domain(u);
    if (boundaries_touch(prev, out)) return res;  // not strictly interior yet
  }

  // exact certificate: min distance between the shell boundary and the
  // domain boundary, with a floating-point prefilter on segment pairs
  Rat best;
  RPoint best_pt;
  bool first = true;
  double best_d = 1e300;
  for (const Face& f : out.faces) {
    RPoint fa = f.at(f.lo), fb = f.at(f.hi);
    double fs0 = std::min(rat_to_double(fa.s), rat_to_double(fb.s));
    double fs1 = std::max(rat_to_double(fa.s), rat_to_double(fb.s));
    double ft0 = std::min(rat_to_double(fa.t), rat_to_double(fb.t));
    double ft1 = std::max(rat_to_double(fa.t), rat_to_double(fb.t));
    for (const RSeg& e : bsegs) {
      if (!first) {
        double lb = box_segment_dist_dbl(fs0, fs1, ft0, ft1, rat_to_double(e.first.s),
                                         rat_to_double(e.first.t), rat_to_double(e.second.s),
                                         rat_to_double(e.second.t));
        if (lb > best_d + 1e-9) continue;
      }
      RPoint w;
      Rat v = cheb_segment_segment(fa, fb, e.first, e.second, &w);
      if (first || v < best) {
        best = v;
        best_pt = w;
        best_d = rat_to_double(v);
        first = false;
      }
    }
  }
  if (first) return res;

  if (best < lower || best > upper) return res;
  if (recheck(best_pt) != best) throw Error("inner approximation certificate recheck failed");

  res.ok = true;
  res.domain = std::move(out);
  res.cert = {best, best_pt, best_pt, pitch};
  return res;
}

InnerApproxResult inner_core(const std::vector<RSeg>& bsegs, int n, const HDomain& prev,
                             const std::function<Rat(const RPoint&)>& recheck) {
  if (n < 1) throw Error("inner approximation level must be at least 1");
  if (bsegs.empty()) throw EmptyDomain("inner approximation of an empty domain");
  const Rat cap = rat(1, 4096);
  for (Rat pitch = rat(1, 4);; pitch /= 2) {
    Attempt a = attempt_pitch(bsegs, n, prev, pitch, recheck);
    if (a.ok) return {std::move(a.domain), std::move(a.cert)};
    if (a.hopeless || pitch <= cap) {
      throw Infeasible("no grid pitch certifies the level-" + std::to_string(n) +
                       " distance bounds; the domain is too small for this level");
    }
  }
}

}  // namespace

InnerApproxResult inner_approx(const HDomain& d, int n, const HDomain& prev) {
  std::vector<RSeg> segs;
  for (const Face& f : d.faces) segs.push_back({f.at(f.lo), f.at(f.hi)});
  return inner_core(segs, n, prev, [&d](const RPoint& p) { return l1_distance(p, d); });
}

InnerApproxResult inner_approx(const GeneralDomain& d, int n, const HDomain& prev) {
  std::vector<RSeg> segs;
  for (const auto& L : d.loops) {
    for (size_t i = 0; i < L.size(); ++i) {
      segs.push_back({to_rotated(L[i]), to_rotated(L[(i + 1) % L.size()])});
    }
  }
  return inner_core(segs, n, prev,
                    [&d](const RPoint& p) { return l1_distance(to_world(p), d); });
}

}  // namespace eikjump
