#include "eikjump/optimizer.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "eikjump/distance_solution.hpp"
#include "eikjump/errors.hpp"

namespace eikjump {

namespace {

// Canonical rendering of a candidate. Pieces are rendered and sorted so the
// string does not depend on gluing order; used only for deterministic
// tie-breaking, never parsed back.
std::string solution_signature(const PLSolution& v) {
  std::vector<std::string> rows;
  rows.reserve(v.pieces.size());
  for (const AffinePiece& p : v.pieces) {
    std::string s;
    for (const RPoint& q : p.cell) {
      s += '(';
      s += rat_to_string(q.s);
      s += ',';
      s += rat_to_string(q.t);
      s += ')';
    }
    s += '|';
    s += std::to_string(p.g1);
    s += '|';
    s += std::to_string(p.g2);
    s += '|';
    s += rat_to_string(p.offset);
    rows.push_back(std::move(s));
  }
  std::sort(rows.begin(), rows.end());
  std::string out;
  for (const std::string& r : rows) {
    out += r;
    out += '\n';
  }
  return out;
}

// A search state: every in-domain grid cell carries a part id, every part a
// sign. The candidate a state denotes is the glued signed distance solution
// of its parts.
struct PartitionState {
  std::vector<int> cell_part;  // flat j*nx+i, -1 outside the domain
  std::vector<int> sign;       // per part
  int nparts = 0;
};

struct SearchContext {
  CellGrid grid;
  std::vector<int> occupied;        // flat indices of in-domain cells, row-major
  std::vector<ConvexPoly> overlay;  // whole-domain reference complex for validation
  std::vector<long long> vertex_s;  // split thresholds under domain boundary vertices
  std::vector<long long> vertex_t;
  std::map<std::string, Q2> memo;

  bool have_best = false;
  PLSolution best;
  Q2 best_value;
  size_t best_parts = 0;
  std::string best_sig;

  std::vector<TraceRow> trace;
  long long evals = 0;
};

// Renumber parts in first-seen row-major order and drop empty ids, so that
// states describing the same partition compare equal.
void compact(const SearchContext& ctx, PartitionState& st) {
  std::vector<int> remap((size_t)st.nparts, -1);
  std::vector<int> signs;
  int next = 0;
  for (int c : ctx.occupied) {
    int p = st.cell_part[(size_t)c];
    if (remap[(size_t)p] < 0) {
      remap[(size_t)p] = next++;
      signs.push_back(st.sign[(size_t)p]);
    }
  }
  for (int c : ctx.occupied) {
    st.cell_part[(size_t)c] = remap[(size_t)st.cell_part[(size_t)c]];
  }
  st.sign = std::move(signs);
  st.nparts = next;
}

std::string state_key(const SearchContext& ctx, const PartitionState& st) {
  std::string key;
  key.reserve(2 * ctx.occupied.size() + (size_t)st.nparts);
  for (int c : ctx.occupied) {
    int p = st.cell_part[(size_t)c];
    key += (char)(p & 0xff);
    key += (char)((p >> 8) & 0xff);
  }
  for (int p = 0; p < st.nparts; ++p) key += st.sign[(size_t)p] > 0 ? '+' : '-';
  return key;
}

PLSolution build_candidate(const SearchContext& ctx, const PartitionState& st) {
  std::vector<std::vector<std::pair<long long, long long>>> cells((size_t)st.nparts);
  for (int c : ctx.occupied) {
    cells[(size_t)st.cell_part[(size_t)c]].push_back(
        {c % ctx.grid.nx, c / ctx.grid.nx});
  }
  std::vector<std::pair<HDomain, int>> parts;
  parts.reserve((size_t)st.nparts);
  for (int p = 0; p < st.nparts; ++p) {
    if (cells[(size_t)p].empty()) throw Error("search state carries an empty part");
    parts.push_back({cells_to_domain(ctx.grid.origin_s, ctx.grid.origin_t, ctx.grid.pitch,
                                     cells[(size_t)p]),
                     st.sign[(size_t)p]});
  }
  return partition_solution(parts, &ctx.overlay);
}

// Evaluate a (compacted) state, with memoization across starts. Every call
// appends a trace row; the caller marks acceptance on the last row. Fresh
// evaluations update the incumbent under the (value, part count, signature)
// order.
Q2 evaluate(SearchContext& ctx, const PartitionState& st, std::string label) {
  std::string key = state_key(ctx, st);
  Q2 val;
  auto it = ctx.memo.find(key);
  if (it != ctx.memo.end()) {
    val = it->second;
  } else {
    PLSolution v = build_candidate(ctx, st);
    val = functional_F(v);
    ctx.memo.emplace(std::move(key), val);
    size_t np = (size_t)st.nparts;
    bool take = false;
    if (!ctx.have_best || val < ctx.best_value) {
      take = true;
    } else if (val == ctx.best_value && np < ctx.best_parts) {
      take = true;
    } else if (val == ctx.best_value && np == ctx.best_parts) {
      if (ctx.best_sig.empty()) ctx.best_sig = solution_signature(ctx.best);
      std::string sig = solution_signature(v);
      if (sig < ctx.best_sig) {
        ctx.best_sig = std::move(sig);
        take = true;
      }
    }
    if (take) {
      if (val < ctx.best_value || !ctx.have_best || np < ctx.best_parts) ctx.best_sig.clear();
      ctx.have_best = true;
      ctx.best = std::move(v);
      ctx.best_value = val;
      ctx.best_parts = np;
    }
  }
  ctx.trace.push_back({ctx.evals++, std::move(label), val, false});
  return val;
}

std::vector<std::pair<int, int>> adjacent_pairs(const SearchContext& ctx,
                                                const PartitionState& st) {
  std::set<std::pair<int, int>> pairs;
  int nx = ctx.grid.nx;
  for (int c : ctx.occupied) {
    int i = c % nx, j = c / nx;
    int p = st.cell_part[(size_t)c];
    if (ctx.grid.at(i + 1, j)) {
      int q = st.cell_part[(size_t)c + 1];
      if (q != p) pairs.insert({std::min(p, q), std::max(p, q)});
    }
    if (ctx.grid.at(i, j + 1)) {
      int q = st.cell_part[(size_t)c + (size_t)nx];
      if (q != p) pairs.insert({std::min(p, q), std::max(p, q)});
    }
  }
  return {pairs.begin(), pairs.end()};
}

void part_bbox(const SearchContext& ctx, const PartitionState& st, int p, long long& i0,
               long long& i1, long long& j0, long long& j1) {
  bool first = true;
  for (int c : ctx.occupied) {
    if (st.cell_part[(size_t)c] != p) continue;
    long long i = c % ctx.grid.nx, j = c / ctx.grid.nx;
    if (first) {
      i0 = i1 = i;
      j0 = j1 = j;
      first = false;
    } else {
      i0 = std::min(i0, i);
      i1 = std::max(i1, i);
      j0 = std::min(j0, j);
      j1 = std::max(j1, j);
    }
  }
}

// Split thresholds for one part and axis, boundary-vertex lines first (the
// structural cuts live there: reflex corners and face extensions), then an
// evenly strided sample of the remaining interior lines so one full move
// scan stays affordable on large grids. Valid thresholds are (lo, hi].
std::vector<long long> split_lines(const std::vector<long long>& vertex_lines, long long lo,
                                   long long hi, long long fill_cap) {
  std::vector<long long> first, rest;
  for (long long k : vertex_lines) {
    if (k > lo && k <= hi) first.push_back(k);
  }
  for (long long k = lo + 1; k <= hi; ++k) {
    if (std::find(first.begin(), first.end(), k) == first.end()) rest.push_back(k);
  }
  long long room = fill_cap;
  if ((long long)rest.size() > room) {
    std::vector<long long> pick;
    if (room > 0) {
      long long stride = ((long long)rest.size() + room - 1) / room;
      for (size_t i = (size_t)(stride / 2); i < rest.size(); i += (size_t)stride) {
        pick.push_back(rest[i]);
      }
    }
    rest = std::move(pick);
  }
  first.insert(first.end(), rest.begin(), rest.end());
  return first;
}

PartitionState apply_split(const SearchContext& ctx, const PartitionState& st, int p, int axis,
                           long long threshold, bool flip_new) {
  PartitionState next = st;
  int fresh = next.nparts;
  next.sign.push_back(flip_new ? -st.sign[(size_t)p] : st.sign[(size_t)p]);
  ++next.nparts;
  for (int c : ctx.occupied) {
    if (next.cell_part[(size_t)c] != p) continue;
    long long coord = axis == 0 ? c % ctx.grid.nx : c / ctx.grid.nx;
    if (coord >= threshold) next.cell_part[(size_t)c] = fresh;
  }
  compact(ctx, next);
  return next;
}

// Replace part p by the grouping of its cells under the affine pieces of
// its own distance solution (cell centers decide, first containing piece
// wins). Returns false when everything lands in one group.
bool apply_subpartition(const SearchContext& ctx, const PartitionState& st, int p,
                        PartitionState& out) {
  std::vector<std::pair<long long, long long>> cells;
  for (int c : ctx.occupied) {
    if (st.cell_part[(size_t)c] == p) cells.push_back({c % ctx.grid.nx, c / ctx.grid.nx});
  }
  HDomain dom = cells_to_domain(ctx.grid.origin_s, ctx.grid.origin_t, ctx.grid.pitch, cells);
  PLSolution dp = distance_solution(dom);
  if (dp.pieces.size() <= 1) return false;

  Rat half = ctx.grid.pitch / 2;
  std::map<size_t, int> group_of;  // piece index -> fresh part id
  out = st;
  for (int c : ctx.occupied) {
    if (out.cell_part[(size_t)c] != p) continue;
    RPoint center{ctx.grid.origin_s + Rat(c % ctx.grid.nx) * ctx.grid.pitch + half,
                  ctx.grid.origin_t + Rat(c / ctx.grid.nx) * ctx.grid.pitch + half};
    size_t hit = dp.pieces.size();
    for (size_t q = 0; q < dp.pieces.size(); ++q) {
      if (point_in_convex_closed(dp.pieces[q].cell, center)) {
        hit = q;
        break;
      }
    }
    if (hit == dp.pieces.size()) throw Error("cell center escaped its own part");
    auto ins = group_of.emplace(hit, out.nparts);
    if (ins.second) {
      out.sign.push_back(st.sign[(size_t)p]);
      ++out.nparts;
    }
    out.cell_part[(size_t)c] = ins.first->second;
  }
  if (group_of.size() <= 1) return false;
  compact(ctx, out);
  return true;
}

// One first-improvement pass: flips, merges (both resulting signs), splits
// (vertex lines before strided fill lines, split-off side keeping then
// flipping the sign), then distance sub-partitions. Returns true and
// replaces the state when a strictly better neighbor is found.
bool improve_once(SearchContext& ctx, PartitionState& st, Q2& cur) {
  auto coord_name = [&ctx](int axis, long long k) {
    Rat c = axis == 0 ? ctx.grid.origin_s + Rat(k) * ctx.grid.pitch
                      : ctx.grid.origin_t + Rat(k) * ctx.grid.pitch;
    return std::string(axis == 0 ? "s=" : "t=") + rat_to_string(c);
  };

  for (int p = 0; p < st.nparts; ++p) {
    PartitionState next = st;
    next.sign[(size_t)p] = -next.sign[(size_t)p];
    Q2 val = evaluate(ctx, next, "flip part " + std::to_string(p));
    if (val < cur) {
      ctx.trace.back().accepted = true;
      st = std::move(next);
      cur = val;
      return true;
    }
  }

  for (auto [a, b] : adjacent_pairs(ctx, st)) {
    for (int variant = 0; variant < 2; ++variant) {
      PartitionState next = st;
      for (int c : ctx.occupied) {
        if (next.cell_part[(size_t)c] == b) next.cell_part[(size_t)c] = a;
      }
      next.sign[(size_t)a] = variant == 0 ? st.sign[(size_t)a] : -st.sign[(size_t)a];
      compact(ctx, next);
      Q2 val = evaluate(ctx, next,
                        "merge parts " + std::to_string(a) + "," + std::to_string(b) +
                            (variant == 0 ? "" : " flipped"));
      if (val < cur) {
        ctx.trace.back().accepted = true;
        st = std::move(next);
        cur = val;
        return true;
      }
    }
  }

  // Candidate evaluation cost grows with the domain, so the budget for
  // split lines beyond the boundary-vertex ones shrinks on large grids.
  long long fill_cap = ctx.occupied.size() > 1024 ? 1 : 16;
  for (int p = 0; p < st.nparts; ++p) {
    long long i0 = 0, i1 = 0, j0 = 0, j1 = 0;
    part_bbox(ctx, st, p, i0, i1, j0, j1);
    for (int axis = 0; axis < 2; ++axis) {
      long long lo = axis == 0 ? i0 : j0, hi = axis == 0 ? i1 : j1;
      for (long long k : split_lines(axis == 0 ? ctx.vertex_s : ctx.vertex_t, lo, hi, fill_cap)) {
        for (int variant = 0; variant < 2; ++variant) {
          PartitionState next = apply_split(ctx, st, p, axis, k, variant == 1);
          Q2 val = evaluate(ctx, next,
                            "split part " + std::to_string(p) + " at " + coord_name(axis, k) +
                                (variant == 0 ? "" : " flipped"));
          if (val < cur) {
            ctx.trace.back().accepted = true;
            st = std::move(next);
            cur = val;
            return true;
          }
        }
      }
    }
  }

  // Sub-partitions of big parts produce long staircase interfaces whose
  // glued solutions are costly to build and never cheap to beat; the move
  // is only scanned on parts below the same size threshold.
  for (int p = 0; p < st.nparts; ++p) {
    long long pcells = 0;
    for (int c : ctx.occupied) {
      if (st.cell_part[(size_t)c] == p) ++pcells;
    }
    if (pcells > 1024) continue;
    PartitionState next;
    if (!apply_subpartition(ctx, st, p, next)) continue;
    Q2 val = evaluate(ctx, next, "subpartition part " + std::to_string(p));
    if (val < cur) {
      ctx.trace.back().accepted = true;
      st = std::move(next);
      cur = val;
      return true;
    }
  }
  return false;
}

PartitionState whole_domain_state(const SearchContext& ctx, int sign) {
  PartitionState st;
  st.cell_part.assign(ctx.grid.in.size(), -1);
  for (int c : ctx.occupied) st.cell_part[(size_t)c] = 0;
  st.sign = {sign};
  st.nparts = 1;
  return st;
}

}  // namespace

std::string trace_csv(const std::vector<TraceRow>& trace) {
  std::string out = "iteration,move,value,accepted\n";
  for (const TraceRow& r : trace) {
    out += std::to_string(r.iteration);
    out += ',';
    out += r.move;
    out += ',';
    out += q2_to_string(r.value);
    out += ',';
    out += r.accepted ? '1' : '0';
    out += '\n';
  }
  return out;
}

SearchResult minimize_F(const HDomain& domain, const SearchParams& params) {
  if (domain.empty()) throw EmptyDomain("minimization needs a nonempty domain");
  if (params.pitch <= 0) throw Error("minimize_F: pitch must be positive");

  SearchContext ctx;
  ctx.grid = rasterize(domain, params.pitch);
  for (int j = 0; j < ctx.grid.ny; ++j) {
    for (int i = 0; i < ctx.grid.nx; ++i) {
      if (ctx.grid.at(i, j)) ctx.occupied.push_back(j * ctx.grid.nx + i);
    }
  }
  if (ctx.occupied.empty()) throw EmptyDomain("domain rasterized to no cells");

  PLSolution dfull = distance_solution(domain);
  ctx.overlay.reserve(dfull.pieces.size());
  for (const AffinePiece& p : dfull.pieces) ctx.overlay.push_back(p.cell);

  {
    std::set<long long> vs, vt;
    for (const RLoop& loop : domain.loops) {
      for (const RPoint& v : loop) {
        vs.insert(rat_floor(Rat(v.s - ctx.grid.origin_s) / ctx.grid.pitch).convert_to<long long>());
        vt.insert(rat_floor(Rat(v.t - ctx.grid.origin_t) / ctx.grid.pitch).convert_to<long long>());
      }
    }
    ctx.vertex_s.assign(vs.begin(), vs.end());
    ctx.vertex_t.assign(vt.begin(), vt.end());
  }

  std::mt19937 rng(params.seed);
  int nstarts = std::max(2, params.restarts);
  for (int r = 0; r < nstarts; ++r) {
    PartitionState st = whole_domain_state(ctx, r == 1 ? -1 : 1);
    std::string label = r == 0   ? "start: whole-domain distance"
                        : r == 1 ? "start: negated whole-domain distance"
                                 : "start: random " + std::to_string(r);
    if (r >= 2) {
      int cuts = 1 + (int)(rng() % 3u);
      for (int c = 0; c < cuts; ++c) {
        int p = (int)(rng() % (unsigned)st.nparts);
        int axis = (int)(rng() & 1u);
        long long i0 = 0, i1 = 0, j0 = 0, j1 = 0;
        part_bbox(ctx, st, p, i0, i1, j0, j1);
        long long lo = axis == 0 ? i0 : j0, hi = axis == 0 ? i1 : j1;
        if (hi <= lo) continue;
        long long k = lo + 1 + (long long)(rng() % (unsigned long long)(hi - lo));
        st = apply_split(ctx, st, p, axis, k, (rng() & 1u) != 0);
      }
      for (int p = 0; p < st.nparts; ++p) {
        if (rng() & 1u) st.sign[(size_t)p] = -st.sign[(size_t)p];
      }
    }
    Q2 cur = evaluate(ctx, st, std::move(label));
    ctx.trace.back().accepted = true;
    for (int iter = 0; iter < params.max_iters; ++iter) {
      if (!improve_once(ctx, st, cur)) break;
    }
  }

  return SearchResult{std::move(ctx.best), ctx.best_value, std::move(ctx.trace)};
}

SearchResult minimize_F(const GeneralDomain& domain, const SearchParams& params) {
  HDomain h;
  try {
    h = build_hdomain_world(domain.loops);
  } catch (const NotRectilinear&) {
    throw HypothesisHViolated("a face normal leaves the admissible diagonal set");
  }
  return minimize_F(h, params);
}

SearchResultH minimize_Fh(const WeightH& weight, const SearchParams& params) {
  if (weight.trivial) {
    SearchResult plain = minimize_F(weight.domain_h, params);
    SearchResultH out;
    out.best.layers.push_back(std::move(plain.best));
    out.best.truncation = 1;
    out.best.tail_bound = Q2(Rat(0));
    out.enclosure = FhEnclosure{plain.value, plain.value, Q2(Rat(0))};
    out.trace = std::move(plain.trace);
    return out;
  }
  if (weight.n_built() < 1) throw OutsideBuiltShells("no shells were built for this weight");

  const int order = 6;
  auto upper = [](const FhEnclosure& e) { return e.upper + e.tail; };

  LazySolution cur = shell_solution(weight);
  int kept = (int)cur.layers.size();
  int glue_k = std::min(kept, weight.eval_shells() + 1);
  std::vector<ConvexPoly> overlay;
  {
    PLSolution ref = distance_solution(weight.shells[(size_t)glue_k - 1].full);
    overlay.reserve(ref.pieces.size());
    for (const AffinePiece& p : ref.pieces) overlay.push_back(p.cell);
  }
  auto checked = [&](const LazySolution& v, const std::string& what) {
    ValidationReport rep = validate(truncated_sum(weight, v, glue_k), overlay);
    if (!rep.ok()) throw Error("weighted candidate failed validation: " + what);
    return functional_Fh(weight, v, order);
  };

  std::vector<TraceRow> trace;
  long long evals = 0;
  FhEnclosure best = checked(cur, "seed");
  trace.push_back({evals++, "start: shell solution", upper(best), true});

  // The sign of the outermost kept layer is pinned: the enclosure's rim term
  // models the interface against the untouched positive tail, so only the
  // inner layers are free to flip.
  int flippable = kept - 1;
  for (int iter = 0; iter < params.max_iters && flippable > 0; ++iter) {
    bool moved = false;
    for (int m = 0; m < flippable; ++m) {
      LazySolution cand = cur;
      cand.layers[(size_t)m] = negate(cand.layers[(size_t)m]);
      FhEnclosure e = checked(cand, "flip of layer " + std::to_string(m + 1));
      trace.push_back({evals++, "flip layer " + std::to_string(m + 1), upper(e), false});
      if (upper(e) < upper(best)) {
        trace.back().accepted = true;
        cur = std::move(cand);
        best = e;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return SearchResultH{std::move(cur), best, std::move(trace)};
}

LexChoice lexicographic_select(const std::vector<PLSolution>& candidates, int depth) {
  if (candidates.empty()) throw EmptyCandidateSet("selection over an empty candidate set");
  std::vector<size_t> alive(candidates.size());
  for (size_t i = 0; i < alive.size(); ++i) alive[i] = i;

  for (int k = 1; k <= depth && alive.size() > 1; ++k) {
    Q2 mx;
    bool has = false;
    std::vector<Q2> moments;
    moments.reserve(alive.size());
    for (size_t idx : alive) {
      Q2 m = integral(candidates[idx], k);
      moments.push_back(m);
      if (!has || mx < m) {
        mx = m;
        has = true;
      }
    }
    std::vector<size_t> keep;
    for (size_t i = 0; i < alive.size(); ++i) {
      if (moments[i] == mx) keep.push_back(alive[i]);
    }
    alive = std::move(keep);
  }

  if (alive.size() == 1) return LexChoice{candidates[alive[0]], false};
  size_t pick = alive[0];
  std::string best_sig = solution_signature(candidates[pick]);
  for (size_t i = 1; i < alive.size(); ++i) {
    std::string sig = solution_signature(candidates[alive[i]]);
    if (sig < best_sig) {
      best_sig = std::move(sig);
      pick = alive[i];
    }
  }
  return LexChoice{candidates[pick], true};
}

}  // namespace eikjump
