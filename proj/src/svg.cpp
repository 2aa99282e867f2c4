#include <sstream>
#include <string>
#include <vector>

#include "eikjump/errors.hpp"
#include "eikjump/io.hpp"

namespace eikjump {
namespace {

std::string dec(const Rat& r) { return rat_to_decimal(r, 6); }

// SVG y grows downward; world x2 grows upward.
std::string xy(const RPoint& p) {
  WPoint w = to_world(p);
  return dec(w.x1) + "," + dec(Rat(0) - w.x2);
}

// Endpoints of the chord cut by {s == c} (use_s) or {t == c} out of a convex
// cell: crossings and on-line vertices collected along the boundary, then the
// extreme pair along the free coordinate. Empty when the line misses the
// interior.
std::vector<RPoint> level_chord(const ConvexPoly& cell, bool use_s, const Rat& c) {
  std::vector<RPoint> pts;
  std::size_t n = cell.size();
  for (std::size_t i = 0; i < n; ++i) {
    const RPoint& p = cell[i];
    const RPoint& q = cell[(i + 1) % n];
    Rat fp = (use_s ? p.s : p.t) - c;
    Rat fq = (use_s ? q.s : q.t) - c;
    if (fp == 0) pts.push_back(p);
    if ((fp < 0 && fq > 0) || (fp > 0 && fq < 0)) {
      Rat lam = fp / (fp - fq);
      pts.push_back({p.s + lam * (q.s - p.s), p.t + lam * (q.t - p.t)});
    }
  }
  if (pts.empty()) return {};
  auto free_coord = [&](const RPoint& p) { return use_s ? p.t : p.s; };
  RPoint lo = pts.front(), hi = pts.front();
  for (const RPoint& p : pts) {
    if (free_coord(p) < free_coord(lo)) lo = p;
    if (free_coord(p) > free_coord(hi)) hi = p;
  }
  if (free_coord(lo) == free_coord(hi)) return {};
  return {lo, hi};
}

}  // namespace

std::string render_svg(const PLSolution& v, bool show_jumps, int level_curves) {
  if (v.domain.empty()) throw EmptyDomain("nothing to render");

  Rat x1lo, x1hi, x2lo, x2hi;
  bool first = true;
  for (const RLoop& loop : v.domain.loops) {
    for (const RPoint& p : loop) {
      WPoint w = to_world(p);
      if (first || w.x1 < x1lo) x1lo = w.x1;
      if (first || w.x1 > x1hi) x1hi = w.x1;
      if (first || w.x2 < x2lo) x2lo = w.x2;
      if (first || w.x2 > x2hi) x2hi = w.x2;
      first = false;
    }
  }
  Rat span = x1hi - x1lo;
  if (x2hi - x2lo > span) span = x2hi - x2lo;
  Rat margin = span / 10;
  if (margin == 0) margin = 1;
  Rat stroke = span / 150;
  if (stroke == 0) stroke = Rat(1, 100);

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\""
     << dec(x1lo - margin) << " " << dec(Rat(0) - x2hi - margin) << " "
     << dec(x1hi - x1lo + 2 * margin) << " " << dec(x2hi - x2lo + 2 * margin)
     << "\">\n";

  os << "  <path id=\"domain\" fill=\"#eef1f5\" fill-rule=\"evenodd\" stroke=\"#1b1b1b\""
     << " stroke-width=\"" << dec(stroke) << "\" d=\"";
  for (const RLoop& loop : v.domain.loops) {
    for (std::size_t i = 0; i < loop.size(); ++i)
      os << (i == 0 ? "M " : "L ") << xy(loop[i]) << " ";
    os << "Z ";
  }
  os << "\"/>\n";

  if (level_curves > 0 && !v.pieces.empty()) {
    Rat vmin, vmax;
    bool have = false;
    for (const AffinePiece& p : v.pieces) {
      for (const RPoint& vert : p.cell) {
        Rat val = p.eval(vert);
        if (!have || val < vmin) vmin = val;
        if (!have || val > vmax) vmax = val;
        have = true;
      }
    }
    os << "  <g id=\"levels\" fill=\"none\" stroke=\"#9aa3ad\" stroke-width=\""
       << dec(stroke / 2) << "\">\n";
    if (have && vmin != vmax) {
      for (int k = 1; k <= level_curves; ++k) {
        Rat c = vmin + Rat(k) * (vmax - vmin) / Rat(level_curves + 1);
        for (const AffinePiece& p : v.pieces) {
          bool use_s = p.gs() != 0;
          Rat line = (c - p.offset) / Rat(use_s ? p.gs() : p.gt());
          std::vector<RPoint> chord = level_chord(p.cell, use_s, line);
          if (chord.size() == 2)
            os << "    <polyline points=\"" << xy(chord[0]) << " " << xy(chord[1])
               << "\"/>\n";
        }
      }
    }
    os << "  </g>\n";
  }

  if (show_jumps) {
    auto [j1, j2] = jump_sets(v);
    const char* color[2] = {"#c62828", "#1565c0"};
    const JumpSet* sets[2] = {&j1, &j2};
    for (int c = 0; c < 2; ++c) {
      os << "  <g id=\"jumps-" << (c + 1) << "\" fill=\"none\" stroke=\"" << color[c]
         << "\" stroke-width=\"" << dec(stroke * 2) << "\" stroke-linecap=\"round\">\n";
      for (const JumpSegment& s : sets[c]->segments)
        os << "    <polyline points=\"" << xy(s.a) << " " << xy(s.b) << "\"/>\n";
      os << "  </g>\n";
    }
  }

  os << "</svg>\n";
  return os.str();
}

}  // namespace eikjump
