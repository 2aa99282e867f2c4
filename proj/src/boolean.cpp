#include <algorithm>
#include <functional>
#include <unordered_map>
#include <vector>

#include "eikjump/errors.hpp"
#include "eikjump/geometry.hpp"

namespace eikjump {

long long CellGrid::count() const {
  long long n = 0;
  for (uint8_t v : in) n += v;
  return n;
}

namespace {

// Reconstructs the region boundary from an occupancy predicate over a
// compressed grid. Directed elementary edges keep the interior on the left;
// at degree-four pinch corners the walk prefers the left turn, which keeps
// diagonally touching regions on separate loops.
HDomain walk_boundary(const std::vector<Rat>& S, const std::vector<Rat>& T,
                      const std::function<bool(int, int)>& in, bool revalidate) {
  if (S.size() < 2 || T.size() < 2) return HDomain();
  int nx = (int)S.size() - 1, ny = (int)T.size() - 1;

  struct DEdge {
    int from, to, dir;  // dir: 0 east, 1 north, 2 west, 3 south
    bool used = false;
  };
  std::vector<DEdge> edges;
  auto node = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int i = 0; i <= nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      bool west = i > 0 && in(i - 1, j);
      bool east = i < nx && in(i, j);
      if (east && !west) edges.push_back({node(i, j + 1), node(i, j), 3});
      if (west && !east) edges.push_back({node(i, j), node(i, j + 1), 1});
    }
  }
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      bool south = j > 0 && in(i, j - 1);
      bool north = j < ny && in(i, j);
      if (north && !south) edges.push_back({node(i, j), node(i + 1, j), 0});
      if (south && !north) edges.push_back({node(i + 1, j), node(i, j), 2});
    }
  }
  if (edges.empty()) return HDomain();

  std::unordered_map<int, std::vector<int>> outgoing;
  for (int e = 0; e < (int)edges.size(); ++e) outgoing[edges[e].from].push_back(e);

  std::vector<RLoop> loops;
  for (int e0 = 0; e0 < (int)edges.size(); ++e0) {
    if (edges[e0].used) continue;
    RLoop L;
    int start = edges[e0].from;
    int cur = e0;
    while (true) {
      edges[cur].used = true;
      int fi = edges[cur].from;
      L.push_back({S[fi % (nx + 1)], T[fi / (nx + 1)]});
      int v = edges[cur].to;
      if (v == start) break;
      int pick = -1, best_rank = 4;
      for (int cand : outgoing[v]) {
        if (edges[cand].used) continue;
        int turn = (edges[cand].dir - edges[cur].dir + 4) % 4;
        int rank = turn == 1 ? 0 : turn == 0 ? 1 : 2;  // left, straight, right
        if (rank < best_rank) {
          best_rank = rank;
          pick = cand;
        }
      }
      if (pick < 0) throw Error("boundary walk ran into a dead end");
      cur = pick;
    }
    loops.push_back(std::move(L));
  }
  return detail::assemble_hdomain(std::move(loops), revalidate, nullptr);
}

std::vector<uint8_t> inside_flags(const HDomain& d, const std::vector<Rat>& S,
                                  const std::vector<Rat>& T) {
  int nx = (int)S.size() - 1, ny = (int)T.size() - 1;
  std::vector<uint8_t> flags((size_t)nx * ny, 0);
  for (int i = 0; i < nx; ++i) {
    Rat mid_s = (S[i] + S[i + 1]) / 2;
    std::vector<Rat> crossings;
    for (const Face& f : d.faces) {
      if (f.axis == 0 && f.lo < mid_s && mid_s < f.hi) crossings.push_back(f.coord);
    }
    std::sort(crossings.begin(), crossings.end());
    size_t ptr = 0;
    for (int j = 0; j < ny; ++j) {
      Rat mid_t = (T[j] + T[j + 1]) / 2;
      while (ptr < crossings.size() && crossings[ptr] < mid_t) ++ptr;
      flags[(size_t)j * nx + i] = (ptr % 2 == 1) ? 1 : 0;
    }
  }
  return flags;
}

}  // namespace

BoolResult rect_boolean(BoolOp op, const HDomain& a, const HDomain& b) {
  BoolResult res;
  if (a.empty() || b.empty()) {
    switch (op) {
      case BoolOp::Union:
        res.domain = a.empty() ? b : a;
        break;
      case BoolOp::Intersection:
        break;
      case BoolOp::Difference:
        if (!a.empty()) res.domain = a;
        break;
    }
    return res;
  }

  std::vector<Rat> S, T;
  for (const HDomain* d : {&a, &b}) {
    for (const RLoop& L : d->loops) {
      for (const RPoint& p : L) {
        S.push_back(p.s);
        T.push_back(p.t);
      }
    }
  }
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());
  std::sort(T.begin(), T.end());
  T.erase(std::unique(T.begin(), T.end()), T.end());
  int nx = (int)S.size() - 1, ny = (int)T.size() - 1;

  std::vector<uint8_t> fa = inside_flags(a, S, T);
  std::vector<uint8_t> fb = inside_flags(b, S, T);
  std::vector<uint8_t> fr((size_t)nx * ny, 0);
  for (size_t k = 0; k < fr.size(); ++k) {
    switch (op) {
      case BoolOp::Union:
        fr[k] = fa[k] || fb[k];
        break;
      case BoolOp::Intersection:
        fr[k] = fa[k] && fb[k];
        break;
      case BoolOp::Difference:
        fr[k] = fa[k] && !fb[k];
        break;
    }
  }

  auto at = [nx](const std::vector<uint8_t>& f, int i, int j) -> bool {
    return f[(size_t)j * nx + i];
  };
  res.domain = walk_boundary(
      S, T, [&](int i, int j) { return at(fr, i, j) != 0; }, true);

  // Contact side channel: elementary edges where both operand boundaries
  // coincide while the result has no boundary (a seam interior to a union,
  // or a touch along an empty intersection), merged into maximal segments.
  auto contact_here = [&](int i1, int j1, int i2, int j2) {
    bool ba = at(fa, i1, j1) != at(fa, i2, j2);
    bool bb = at(fb, i1, j1) != at(fb, i2, j2);
    bool br = at(fr, i1, j1) != at(fr, i2, j2);
    return ba && bb && !br;
  };
  for (int i = 1; i < nx; ++i) {
    int run = -1;
    for (int j = 0; j <= ny; ++j) {
      bool on = j < ny && contact_here(i - 1, j, i, j);
      if (on && run < 0) run = j;
      if (!on && run >= 0) {
        res.contacts.push_back({{S[i], T[run]}, {S[i], T[j]}});
        run = -1;
      }
    }
  }
  for (int j = 1; j < ny; ++j) {
    int run = -1;
    for (int i = 0; i <= nx; ++i) {
      bool on = i < nx && contact_here(i, j - 1, i, j);
      if (on && run < 0) run = i;
      if (!on && run >= 0) {
        res.contacts.push_back({{S[run], T[j]}, {S[i], T[j]}});
        run = -1;
      }
    }
  }
  return res;
}

CellGrid rasterize(const HDomain& d, const Rat& pitch) {
  if (pitch <= 0) throw Error("rasterize: pitch must be positive");
  CellGrid g;
  g.pitch = pitch;
  if (d.empty()) return g;

  auto snap = [&pitch](const Rat& x) -> long long {
    Rat q(x / pitch);
    if (rat_den(q) != 1) throw NotGridAligned("boundary coordinate off the pitch grid");
    Int n = rat_num(q);
    return n.convert_to<long long>();
  };
  Rat s0, s1, t0, t1;
  d.bounding_box(s0, s1, t0, t1);
  long long i0 = snap(s0), i1 = snap(s1), j0 = snap(t0), j1 = snap(t1);
  g.origin_s = Rat(i0 * pitch);
  g.origin_t = Rat(j0 * pitch);
  g.nx = (int)(i1 - i0);
  g.ny = (int)(j1 - j0);
  if (g.nx <= 0 || g.ny <= 0) throw EmptyDomain("rasterize: degenerate bounding box");
  g.in.assign((size_t)g.nx * g.ny, 0);

  // Column parity fill from the horizontal faces, all in integer indices.
  std::vector<std::vector<long long>> col_cross((size_t)g.nx);
  for (const Face& f : d.faces) {
    if (f.axis != 0) continue;
    long long lo = snap(f.lo) - i0, hi = snap(f.hi) - i0, row = snap(f.coord) - j0;
    for (long long i = std::max(0LL, lo); i < std::min((long long)g.nx, hi); ++i) {
      col_cross[(size_t)i].push_back(row);
    }
  }
  for (int i = 0; i < g.nx; ++i) {
    auto& cr = col_cross[(size_t)i];
    std::sort(cr.begin(), cr.end());
    size_t ptr = 0;
    for (int j = 0; j < g.ny; ++j) {
      while (ptr < cr.size() && cr[ptr] <= j) ++ptr;
      g.set(i, j, ptr % 2 == 1);
    }
  }
  return g;
}

HDomain grid_to_domain(const CellGrid& g) {
  if (g.nx <= 0 || g.ny <= 0 || g.count() == 0) return HDomain();
  std::vector<Rat> S((size_t)g.nx + 1), T((size_t)g.ny + 1);
  for (int i = 0; i <= g.nx; ++i) S[(size_t)i] = g.origin_s + Rat(i) * g.pitch;
  for (int j = 0; j <= g.ny; ++j) T[(size_t)j] = g.origin_t + Rat(j) * g.pitch;
  return walk_boundary(
      S, T, [&g](int i, int j) { return g.at(i, j); }, false);
}

HDomain cells_to_domain(const Rat& origin_s, const Rat& origin_t, const Rat& pitch,
                        const std::vector<std::pair<long long, long long>>& cells) {
  if (cells.empty()) return HDomain();
  long long i0 = cells[0].first, i1 = i0, j0 = cells[0].second, j1 = j0;
  for (const auto& c : cells) {
    i0 = std::min(i0, c.first);
    i1 = std::max(i1, c.first);
    j0 = std::min(j0, c.second);
    j1 = std::max(j1, c.second);
  }
  CellGrid g;
  g.pitch = pitch;
  g.origin_s = origin_s + Rat(i0) * pitch;
  g.origin_t = origin_t + Rat(j0) * pitch;
  g.nx = (int)(i1 - i0 + 1);
  g.ny = (int)(j1 - j0 + 1);
  g.in.assign((size_t)g.nx * g.ny, 0);
  for (const auto& c : cells) g.set((int)(c.first - i0), (int)(c.second - j0), true);
  return grid_to_domain(g);
}

}  // namespace eikjump
