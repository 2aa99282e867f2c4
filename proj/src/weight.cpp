#include "eikjump/weight.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <utility>

#include "eikjump/errors.hpp"

namespace eikjump {

namespace {

// ---------------------------------------------------------------------------
// Continuous piecewise-affine functions of the segment parameter, used to
// carry the exact profile of each boundary distance d_m along a jump
// segment. Breakpoints are strictly increasing; values interpolate linearly
// between them.
struct PW {
  std::vector<Rat> t;
  std::vector<Rat> v;
};

Rat pw_interp(const Rat& t0, const Rat& v0, const Rat& t1, const Rat& v1,
              const Rat& x) {
  if (t1 == t0) return v0;
  return v0 + (v1 - v0) * (x - t0) / (t1 - t0);
}

Rat pw_value(const PW& f, const Rat& x) {
  size_t n = f.t.size();
  if (x <= f.t.front()) return f.v.front();
  if (x >= f.t.back()) return f.v.back();
  size_t lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    size_t mid = (lo + hi) / 2;
    if (f.t[mid] <= x)
      lo = mid;
    else
      hi = mid;
  }
  return pw_interp(f.t[lo], f.v[lo], f.t[hi], f.v[hi], x);
}

PW pw_affine(const Rat& lo, const Rat& hi, Rat vlo, Rat vhi) {
  return PW{{lo, hi}, {std::move(vlo), std::move(vhi)}};
}

// Pointwise max (upper = true) or min of two functions over the same span.
PW pw_merge(const PW& f, const PW& g, bool upper) {
  std::vector<Rat> bp;
  bp.reserve(f.t.size() + g.t.size());
  std::merge(f.t.begin(), f.t.end(), g.t.begin(), g.t.end(),
             std::back_inserter(bp));
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

  PW out;
  auto push = [&out](const Rat& x, const Rat& val) {
    if (!out.t.empty() && out.t.back() == x) {
      out.v.back() = val;
      return;
    }
    out.t.push_back(x);
    out.v.push_back(val);
  };

  for (size_t k = 0; k + 1 < bp.size(); ++k) {
    Rat f0 = pw_value(f, bp[k]), f1 = pw_value(f, bp[k + 1]);
    Rat g0 = pw_value(g, bp[k]), g1 = pw_value(g, bp[k + 1]);
    Rat d0 = f0 - g0, d1 = f1 - g1;
    auto pick = [&](const Rat& fv, const Rat& gv) {
      bool fwins = upper ? fv >= gv : fv <= gv;
      return fwins ? fv : gv;
    };
    push(bp[k], pick(f0, g0));
    if ((d0 < 0 && d1 > 0) || (d0 > 0 && d1 < 0)) {
      Rat cross = bp[k] + (bp[k + 1] - bp[k]) * d0 / (d0 - d1);
      if (cross > bp[k] && cross < bp[k + 1]) {
        Rat fc = pw_interp(bp[k], f0, bp[k + 1], f1, cross);
        push(cross, fc);
      }
    }
    push(bp[k + 1], pick(f1, g1));
  }
  return out;
}

// The Chebyshev distance to one face, restricted to the segment
// x(tau) = a + tau*(b - a), as a max of four affine functions of tau.
PW face_profile(const Face& f, const RPoint& a, const RPoint& b) {
  Rat s0 = a.s, s1 = b.s, t0 = a.t, t1 = b.t;
  // Affine components (value at tau=0, value at tau=1).
  std::vector<std::pair<Rat, Rat>> parts;
  if (f.axis == 0) {
    parts.push_back({t0 - f.coord, t1 - f.coord});
    parts.push_back({f.coord - t0, f.coord - t1});
    parts.push_back({f.lo - s0, f.lo - s1});
    parts.push_back({s0 - f.hi, s1 - f.hi});
  } else {
    parts.push_back({s0 - f.coord, s1 - f.coord});
    parts.push_back({f.coord - s0, f.coord - s1});
    parts.push_back({f.lo - t0, f.lo - t1});
    parts.push_back({t0 - f.hi, t1 - f.hi});
  }
  PW acc = pw_affine(Rat(0), Rat(1), parts[0].first, parts[0].second);
  for (size_t i = 1; i < parts.size(); ++i)
    acc = pw_merge(acc, pw_affine(Rat(0), Rat(1), parts[i].first,
                                  parts[i].second),
                   true);
  return acc;
}

// Face data in doubles, for cheap candidate pruning before any exact work.
struct FaceW {
  double coord, lo, hi;
  int axis;
};

std::vector<FaceW> faces_double(const HDomain& dom) {
  std::vector<FaceW> out;
  out.reserve(dom.faces.size());
  for (const Face& f : dom.faces) {
    out.push_back({rat_to_double(f.coord), rat_to_double(f.lo),
                   rat_to_double(f.hi), f.axis});
  }
  return out;
}

// Exact profile of l1_distance(x(tau), boundary of dom) on tau in [0, 1]:
// the lower envelope of the per-face profiles, after discarding faces that
// provably never achieve the minimum on the segment. A double pass with
// slack narrows the candidates; the decisions that matter stay exact.
PW boundary_profile(const HDomain& dom, const std::vector<FaceW>& fd,
                    const RPoint& a, const RPoint& b) {
  constexpr double kSlack = 1e-9;
  double sd0 = rat_to_double(a.s), sd1 = rat_to_double(b.s);
  double td0 = rat_to_double(a.t), td1 = rat_to_double(b.t);
  double slack =
      kSlack *
      std::max({std::fabs(sd0), std::fabs(sd1), std::fabs(td0), std::fabs(td1), 1.0});

  // Per-face endpoint values and segment lower bound, in doubles. Each of
  // the four affine parts is minimized at an endpoint of the segment, and
  // the convex max is attained at one.
  auto cheb_d = [](const FaceW& f, double s, double t) {
    double band = std::fabs((f.axis == 0 ? t : s) - f.coord);
    double axis = f.axis == 0 ? s : t;
    return std::max({band, f.lo - axis, axis - f.hi});
  };
  std::vector<double> lb_d(fd.size());
  double ub_d = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < fd.size(); ++i) {
    const FaceW& f = fd[i];
    double v0 = cheb_d(f, sd0, td0), v1 = cheb_d(f, sd1, td1);
    ub_d = std::min(ub_d, std::max(v0, v1));
    double w0 = f.axis == 0 ? td0 : sd0, w1 = f.axis == 0 ? td1 : sd1;
    double x0 = f.axis == 0 ? sd0 : td0, x1 = f.axis == 0 ? sd1 : td1;
    double lb = std::min(w0 - f.coord, w1 - f.coord);
    lb = std::max(lb, std::min(f.coord - w0, f.coord - w1));
    lb = std::max(lb, std::min(f.lo - x0, f.lo - x1));
    lb = std::max(lb, std::min(x0 - f.hi, x1 - f.hi));
    lb_d[i] = lb;
  }

  std::vector<std::pair<double, size_t>> cand;
  for (size_t i = 0; i < fd.size(); ++i) {
    if (lb_d[i] <= ub_d + slack) cand.push_back({lb_d[i], i});
  }
  std::sort(cand.begin(), cand.end());

  // Merge in order of increasing lower bound. A face whose profile cannot
  // dip below the running envelope's maximum never reshapes it, and once
  // the sorted lower bounds pass that maximum the remaining faces are all
  // such, so the loop stops early: the result is still the exact envelope.
  PW env;
  bool started = false;
  Rat env_max;
  double env_max_d = 0;
  Rat s0 = a.s, s1 = b.s, t0 = a.t, t1 = b.t;
  for (const auto& [ld, idx] : cand) {
    if (started && ld > env_max_d + slack) break;
    const Face& f = dom.faces[idx];
    Rat lb;
    auto upd = [&lb](const Rat& x, const Rat& y, bool first) {
      Rat m = x < y ? x : y;
      if (first || m > lb) lb = m;
    };
    if (f.axis == 0) {
      upd(t0 - f.coord, t1 - f.coord, true);
      upd(f.coord - t0, f.coord - t1, false);
      upd(f.lo - s0, f.lo - s1, false);
      upd(s0 - f.hi, s1 - f.hi, false);
    } else {
      upd(s0 - f.coord, s1 - f.coord, true);
      upd(f.coord - s0, f.coord - s1, false);
      upd(f.lo - t0, f.lo - t1, false);
      upd(t0 - f.hi, t1 - f.hi, false);
    }
    if (started && lb >= env_max) continue;
    PW fp = face_profile(f, a, b);
    env = started ? pw_merge(env, fp, false) : std::move(fp);
    started = true;
    env_max = env.v[0];
    for (const Rat& v : env.v) {
      if (v > env_max) env_max = v;
    }
    env_max_d = rat_to_double(env_max);
  }
  assert(started);
  return env;
}

// Blend coefficients of the weight on ring m (m >= 2): h = A at the inner
// interface, B at the outer one.
Q2 blend_inner(const WeightH& w, int m) {
  return Q2(Rat(1)) /
         (Q2(Rat((long long)m * m)) * (w.alpha(m - 1) + w.alpha(m)));
}
Q2 blend_outer(const WeightH& w, int m) {
  return Q2(Rat(1)) /
         (Q2(Rat((long long)(m + 1) * (m + 1))) * (w.alpha(m) + w.alpha(m + 1)));
}

struct Bracket {
  Q2 lo, hi;
};

// Darboux bracket of the integral of h over one segment piece lying in ring
// m, given the exact distance profiles u = d_m, v = d_{m-1} restricted to
// [p0, p1] and the world length of the whole segment.
void integrate_ring_piece(const WeightH& w, int m, const PW& du, const PW& dv,
                          const Rat& p0, const Rat& p1, const Q2& seg_len,
                          int order, Bracket& acc) {
  Q2 A = blend_inner(w, m), B = blend_outer(w, m);
  // Union of breakpoints inside the piece.
  std::vector<Rat> bp;
  bp.push_back(p0);
  for (const Rat& x : du.t)
    if (x > p0 && x < p1) bp.push_back(x);
  for (const Rat& x : dv.t)
    if (x > p0 && x < p1) bp.push_back(x);
  bp.push_back(p1);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

  for (size_t k = 0; k + 1 < bp.size(); ++k) {
    Rat q0 = bp[k], q1 = bp[k + 1];
    Rat u0 = pw_value(du, q0), u1 = pw_value(du, q1);
    Rat v0 = pw_value(dv, q0), v1 = pw_value(dv, q1);
    // Split where the blend fraction u/(u+v) changes direction; its
    // derivative keeps the sign of u'v - uv', affine on the piece.
    Rat Du = u1 - u0, Dv = v1 - v0;
    Rat W0 = Du * v0 - u0 * Dv;
    Rat W1 = Du * v1 - u1 * Dv;
    std::vector<Rat> marks{q0};
    if ((W0 < 0 && W1 > 0) || (W0 > 0 && W1 < 0)) {
      Rat sigma = W0 / (W0 - W1);
      Rat root = q0 + (q1 - q0) * sigma;
      if (root > q0 && root < q1) marks.push_back(root);
    }
    marks.push_back(q1);

    for (size_t r = 0; r + 1 < marks.size(); ++r) {
      Rat a0 = marks[r], a1 = marks[r + 1];
      if (a0 == a1) continue;
      Rat ua = pw_interp(q0, u0, q1, u1, a0), ub = pw_interp(q0, u0, q1, u1, a1);
      Rat va = pw_interp(q0, v0, q1, v1, a0), vb = pw_interp(q0, v0, q1, v1, a1);
      Q2 step_len = seg_len * Q2(Rat(a1 - a0) / Rat(order));
      Q2 prev_h;
      for (int j = 0; j <= order; ++j) {
        Rat lam = Rat(j) / Rat(order);
        Rat u = ua + (ub - ua) * lam;
        Rat v = va + (vb - va) * lam;
        Rat sum = u + v;
        assert(sum > 0);
        Rat g = u / sum;
        Q2 h = B + (A - B) * Q2(g);
        if (j > 0) {
          acc.lo += q2_min(prev_h, h) * step_len;
          acc.hi += q2_max(prev_h, h) * step_len;
        }
        prev_h = h;
      }
    }
  }
}

// Integrates h over one jump segment. Returns false when a portion lies
// beyond the evaluable shells (nothing is accumulated for that portion).
// fw holds faces_double(shells[m].full) for m = 0 .. eval_shells - 1.
bool integrate_segment(const WeightH& w,
                       const std::vector<std::vector<FaceW>>& fw,
                       const JumpSegment& seg, int order, Bracket& acc) {
  int e = w.eval_shells();
  // Exact distance profiles to every usable shell boundary.
  std::vector<PW> prof;
  prof.reserve(e);
  for (int m = 1; m <= e; ++m)
    prof.push_back(boundary_profile(w.shells[m - 1].full, fw[m - 1], seg.a, seg.b));

  // Cut wherever some d_m hits zero: ring membership is constant between
  // consecutive cuts.
  std::vector<Rat> cuts{Rat(0), Rat(1)};
  for (const PW& f : prof)
    for (size_t i = 0; i < f.t.size(); ++i)
      if (f.v[i] == 0 && f.t[i] > 0 && f.t[i] < 1) cuts.push_back(f.t[i]);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  bool covered = true;
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    Rat p0 = cuts[k], p1 = cuts[k + 1];
    Rat mid = (p0 + p1) / 2;
    RPoint pm{seg.a.s + (seg.b.s - seg.a.s) * mid,
              seg.a.t + (seg.b.t - seg.a.t) * mid};
    int ring = 0;
    for (int m = 1; m <= e; ++m) {
      if (w.shells[m - 1].full.contains_closed(pm)) {
        ring = m;
        break;
      }
    }
    if (ring == 0) {
      covered = false;
      continue;
    }
    if (ring == 1) {
      // Constant plateau value.
      Q2 c = blend_inner(w, 2);
      Q2 len = seg.length * Q2(Rat(p1 - p0));
      acc.lo += c * len;
      acc.hi += c * len;
    } else {
      integrate_ring_piece(w, ring, prof[ring - 1], prof[ring - 2], p0, p1,
                           seg.length, order, acc);
    }
  }
  return covered;
}

template <typename DomainT>
WeightH build_weight_impl(const DomainT& domain, int n_max) {
  if (n_max < 2) throw Error("build_weight: n_max must be at least 2");
  WeightH w;
  HDomain prev;
  bool truncated = false;
  for (int n = 1; n <= n_max; ++n) {
    InnerApproxResult r;
    try {
      r = inner_approx(domain, n, prev);
    } catch (const Infeasible& e) {
      w.truncation_note =
          "shell " + std::to_string(n) + " infeasible: " + e.what();
      truncated = true;
      break;
    }
    WeightShell shell;
    shell.full = r.domain;
    shell.cert = r.cert;
    shell.ring =
        prev.empty() ? r.domain
                     : rect_boolean(BoolOp::Difference, r.domain, prev).domain;
    shell.delta_hat = functional_F(distance_solution(shell.ring));
    shell.alpha =
        q2_max(Q2(Rat(1)), shell.delta_hat + shell.full.world_perimeter());
    prev = r.domain;
    w.shells.push_back(std::move(shell));
  }
  // One ring past the kept shells provides the alpha that makes h evaluable
  // on the outermost kept ring.
  if (!truncated && !w.shells.empty()) {
    try {
      InnerApproxResult r = inner_approx(domain, n_max + 1, prev);
      HDomain ring = rect_boolean(BoolOp::Difference, r.domain, prev).domain;
      Q2 delta = functional_F(distance_solution(ring));
      w.alpha_ext.push_back(
          q2_max(Q2(Rat(1)), delta + r.domain.world_perimeter()));
    } catch (const Infeasible&) {
      // h simply stops one ring earlier.
    }
  }
  return w;
}

}  // namespace

const Q2& WeightH::alpha(int n) const {
  assert(n >= 1 && n <= alpha_count());
  if (n <= n_built()) return shells[n - 1].alpha;
  return alpha_ext[n - 1 - n_built()];
}

WeightH build_weight(const HDomain& domain, int n_max) {
  WeightH w = build_weight_impl(domain, n_max);
  w.general = false;
  w.domain_h = domain;
  return w;
}

WeightH build_weight(const GeneralDomain& domain, int n_max) {
  WeightH w = build_weight_impl(domain, n_max);
  w.general = true;
  w.domain_g = domain;
  return w;
}

WeightH trivial_weight(const HDomain& domain) {
  if (domain.empty()) throw EmptyDomain("constant weight needs a nonempty domain");
  WeightH w;
  w.trivial = true;
  w.domain_h = domain;
  return w;
}

Q2 h_eval(const WeightH& w, const WPoint& x) {
  if (w.trivial) {
    if (!w.domain_h.contains_closed(to_rotated(x)))
      throw OutsideBuiltShells("point outside the domain of the constant weight");
    return Q2(Rat(1));
  }
  int e = w.eval_shells();
  if (e < 1) throw OutsideBuiltShells("weight has no evaluable shells");
  RPoint p = to_rotated(x);
  if (!w.shells[e - 1].full.contains_closed(p))
    throw OutsideBuiltShells("point beyond shell " + std::to_string(e));
  if (w.shells[0].full.contains_closed(p)) return blend_inner(w, 2);
  int m = 2;
  while (!w.shells[m - 1].full.contains_closed(p)) ++m;
  Rat d_in = l1_distance(p, w.shells[m - 2].full);
  Rat d_out = l1_distance(p, w.shells[m - 1].full);
  Q2 num = Q2(d_out) * blend_inner(w, m) + Q2(d_in) * blend_outer(w, m);
  return num / Q2(d_in + d_out);
}

LazySolution shell_solution(const WeightH& w) {
  LazySolution u;
  if (w.trivial) {
    u.layers.push_back(distance_solution(w.domain_h));
    u.truncation = 1;
    u.tail_bound = Q2(Rat(0));
    return u;
  }
  for (const WeightShell& s : w.shells)
    u.layers.push_back(distance_solution(s.ring));
  u.truncation = w.n_built();
  u.tail_bound =
      u.truncation >= 1 ? Q2(Rat(4) / Rat(u.truncation)) : Q2(Rat(8));
  return u;
}

PLSolution truncated_sum(const WeightH& w, const LazySolution& u, int k) {
  if (k < 1 || k > (int)u.layers.size() || (!w.trivial && k > w.n_built()))
    throw Error("truncated_sum: layer index out of range");
  PLSolution v;
  v.domain = w.trivial ? w.domain_h : w.shells[k - 1].full;
  for (int n = 0; n < k; ++n)
    v.pieces.insert(v.pieces.end(), u.layers[n].pieces.begin(),
                    u.layers[n].pieces.end());
  return v;
}

FhEnclosure functional_Fh(const WeightH& w, const PLSolution& v,
                          int quadrature_order) {
  if (quadrature_order < 1)
    throw Error("functional_Fh: quadrature order must be positive");
  if (w.trivial) {
    Q2 f = functional_F(v);
    return FhEnclosure{f, f, Q2(Rat(0))};
  }
  Bracket acc{Q2(Rat(0)), Q2(Rat(0))};
  int e = w.eval_shells();
  std::vector<std::vector<FaceW>> fw;
  for (int m = 1; m <= e; ++m) fw.push_back(faces_double(w.shells[m - 1].full));
  auto [j1, j2] = jump_sets(v);
  for (const JumpSet* js : {&j1, &j2}) {
    for (const JumpSegment& seg : js->segments) {
      if (e < 1 || !integrate_segment(w, fw, seg, quadrature_order, acc))
        throw OutsideBuiltShells("jump segment beyond the evaluable shells");
    }
  }
  return FhEnclosure{acc.lo, acc.hi, Q2(Rat(0))};
}

FhEnclosure functional_Fh(const WeightH& w, const LazySolution& v,
                          int quadrature_order) {
  if (quadrature_order < 1)
    throw Error("functional_Fh: quadrature order must be positive");
  if (w.trivial) {
    if (v.layers.empty()) return FhEnclosure{Q2(Rat(0)), Q2(Rat(0)), v.tail_bound};
    PLSolution glued = truncated_sum(w, v, (int)v.layers.size());
    Q2 f = functional_F(glued);
    return FhEnclosure{f, f, v.tail_bound};
  }
  int kept = (int)v.layers.size();
  int e = w.eval_shells();
  if (kept == 0 || e == 0)
    return FhEnclosure{Q2(Rat(0)), Q2(Rat(0)), Q2(Rat(8))};

  Bracket acc{Q2(Rat(0)), Q2(Rat(0))};
  std::vector<std::vector<FaceW>> fw;
  for (int m = 1; m <= e; ++m) fw.push_back(faces_double(w.shells[m - 1].full));
  int glue_k = std::min(kept, e + 1);
  PLSolution glued = truncated_sum(w, v, glue_k);
  auto [j1, j2] = jump_sets(glued);
  for (const JumpSet* js : {&j1, &j2})
    for (const JumpSegment& seg : js->segments)
      integrate_segment(w, fw, seg, quadrature_order, acc);  // tail covers the rest

  if (e >= kept) {
    // The outermost interface of the represented infinite sum: both world
    // gradient components flip across it almost everywhere (the inner and
    // outer ring ramps oppose along the shared boundary), so it carries the
    // interface value of h with multiplicity two, exactly.
    Q2 rim = Q2(Rat(2)) * blend_outer(w, kept) *
             w.shells[kept - 1].full.world_perimeter();
    acc.lo += rim;
    acc.hi += rim;
  }
  int tail_from = std::min(kept, e);
  return FhEnclosure{acc.lo, acc.hi, Q2(Rat(4) / Rat(tail_from))};
}

}  // namespace eikjump
