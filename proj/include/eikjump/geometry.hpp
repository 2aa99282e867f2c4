#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "eikjump/q2.hpp"
#include "eikjump/rational.hpp"

namespace eikjump {

// World frame: Cartesian (x1, x2). Rotated frame: s = x1 + x2, t = x1 - x2.
// Under this map the world l1 metric becomes the rotated Chebyshev metric,
// and admissible face normals become the rotated coordinate axes, so every
// admissible domain is an axis-parallel rectilinear polygon in (s, t).

struct WPoint {
  Rat x1, x2;
  bool operator==(const WPoint&) const = default;
};

struct RPoint {
  Rat s, t;
  bool operator==(const RPoint&) const = default;
};

inline RPoint to_rotated(const WPoint& p) { return {p.x1 + p.x2, p.x1 - p.x2}; }
inline WPoint to_world(const RPoint& p) { return {(p.s + p.t) / 2, (p.s - p.t) / 2}; }

// World Euclidean length of the segment [a, b]; exact in Q[sqrt2] for
// world-axis-parallel segments (rational) and rotated-axis-parallel ones
// (rational multiple of sqrt2). Throws for other directions.
Q2 world_length(const RPoint& a, const RPoint& b);

// l1 length of the world displacement = Chebyshev length in rotated frame.
Rat l1_gap(const RPoint& a, const RPoint& b);

// Axis-parallel face of a rectilinear boundary, rotated frame.
// axis == 0: {t = coord, s in [lo, hi]};  axis == 1: {s = coord, t in [lo, hi]}.
// side = +1 when the domain interior lies on the increasing-coord side.
struct Face {
  int axis = 0;
  Rat coord, lo, hi;
  int side = 0;
  RPoint at(const Rat& u) const {
    return axis == 0 ? RPoint{u, coord} : RPoint{coord, u};
  }
  Q2 world_h1() const { return q2_sqrt2(Rat(hi - lo) / 2); }
};

using RLoop = std::vector<RPoint>;

// Rectilinear polygon in the rotated frame (hypothesis-compliant domain).
// Loops are closed without repeating the first vertex; outer loops are
// counter-clockwise, holes clockwise. Components may be several.
struct HDomain {
  std::vector<RLoop> loops;
  std::vector<Face> faces;       // maximal axis-parallel boundary pieces
  std::vector<int> loop_parent;  // index of enclosing outer loop, -1 for outer

  bool empty() const { return loops.empty(); }
  int component_count() const;
  Rat rotated_area() const;
  Rat world_area() const { return rotated_area() / 2; }
  Q2 world_perimeter() const;
  void bounding_box(Rat& s0, Rat& s1, Rat& t0, Rat& t1) const;

  bool contains(const RPoint& p) const;           // strict interior
  bool on_boundary(const RPoint& p) const;
  bool contains_closed(const RPoint& p) const { return contains(p) || on_boundary(p); }

  // Split into connected components (each with its holes).
  std::vector<HDomain> components() const;
};

// Simple polygon with arbitrary edge directions, world frame. Used for
// domains that violate the face-normal hypothesis (e.g. axis squares).
struct GeneralDomain {
  std::vector<std::vector<WPoint>> loops;  // outer CCW, holes CW

  bool contains(const WPoint& p) const;
  bool on_boundary(const WPoint& p) const;
  void bounding_box(Rat& x1lo, Rat& x1hi, Rat& x2lo, Rat& x2hi) const;
};

// Builders validate: closed simple loops, >= 4 vertices per loop after
// collinear merge (with warning count reported), orientation normalization,
// hole containment. build_hdomain throws NotRectilinear when a rotated-frame
// edge is not axis-parallel, SelfIntersecting on crossings.
HDomain build_hdomain(const std::vector<RLoop>& rotated_loops, int* merged_collinear = nullptr);
HDomain build_hdomain_world(const std::vector<std::vector<WPoint>>& world_loops,
                            int* merged_collinear = nullptr);
GeneralDomain build_general_domain(const std::vector<std::vector<WPoint>>& world_loops);

// Exact l1 distance from a world point to the domain boundary (min over
// faces; sign-less, works from either side).
Rat l1_distance(const RPoint& p, const HDomain& d);
Rat l1_distance(const WPoint& p, const GeneralDomain& d);

// Chebyshev (rotated-frame) distance from point to axis-parallel face.
Rat cheb_point_face(const RPoint& p, const Face& f);

// Exact min over p in [a,b], q in [c,d] of the rotated Chebyshev metric;
// segments may have arbitrary rational direction. Also reports an achieving
// point on [a,b].
Rat cheb_segment_segment(const RPoint& a, const RPoint& b, const RPoint& c, const RPoint& d,
                         RPoint* witness = nullptr);

// --- convex polygon utilities (rotated frame, CCW vertex order) ---

using ConvexPoly = std::vector<RPoint>;

Rat poly_area2(const ConvexPoly& p);  // doubled signed area
RPoint poly_centroid(const ConvexPoly& p);
bool poly_is_convex_ccw(const ConvexPoly& p);

// Intersection with half-plane {n.s*s + n.t*t <= c}; may return empty.
ConvexPoly clip_halfplane(const ConvexPoly& p, const Rat& ns, const Rat& nt, const Rat& c);
// Split by line ns*s + nt*t = c into (<= side, >= side); either may be empty.
void split_by_line(const ConvexPoly& p, const Rat& ns, const Rat& nt, const Rat& c,
                   ConvexPoly& lo, ConvexPoly& hi);
ConvexPoly convex_intersect(const ConvexPoly& a, const ConvexPoly& b);
bool point_in_convex_closed(const ConvexPoly& p, const RPoint& q);

// --- boolean operations on rectilinear domains ---

enum class BoolOp { Union, Intersection, Difference };

struct BoolResult {
  HDomain domain;  // may be empty
  // Closed contact segments between the two operands' boundaries that do not
  // bound the result interior (degenerate touching reported out of band).
  std::vector<std::pair<RPoint, RPoint>> contacts;
};

BoolResult rect_boolean(BoolOp op, const HDomain& a, const HDomain& b);

// Uniform-grid occupancy bitmap; cell (i, j) spans
// [origin_s + i*pitch, +pitch] x [origin_t + j*pitch, +pitch].
struct CellGrid {
  Rat origin_s, origin_t, pitch;
  int nx = 0, ny = 0;
  std::vector<uint8_t> in;

  bool at(int i, int j) const {
    return i >= 0 && j >= 0 && i < nx && j < ny && in[(size_t)j * nx + i];
  }
  void set(int i, int j, bool v) { in[(size_t)j * nx + i] = v ? 1 : 0; }
  long long count() const;
};

// Exact rasterization of a grid-aligned rectilinear domain onto the absolute
// rotated grid of the given pitch (cell corners at integer multiples of the
// pitch). Throws NotGridAligned when a boundary coordinate is off-grid.
CellGrid rasterize(const HDomain& d, const Rat& pitch);

// Boundary extraction of a bitmap; inverse of rasterize up to collinear merge.
HDomain grid_to_domain(const CellGrid& g);

// Union of axis-aligned grid cells: cell (i, j) spans
// [origin_s + i*pitch, ...] x [origin_t + j*pitch, ...]. Cells listed once.
HDomain cells_to_domain(const Rat& origin_s, const Rat& origin_t, const Rat& pitch,
                        const std::vector<std::pair<long long, long long>>& cells);

// --- inner shell construction ---

struct InnerApproxCert {
  Rat min_distance;   // exact min over the closure of the output
  RPoint arg_min;     // boundary point achieving it
  RPoint arg_upper;   // output point witnessing min_distance <= 1/n
  Rat pitch;          // grid pitch used
};

struct InnerApproxResult {
  HDomain domain;
  InnerApproxCert cert;
};

// Grid-snapped inner polygon with certified two-sided distance bound
//   1/(n + 1/2) <= min_{x in closure} l1_distance(x, boundary) <= 1/n,
// containing prev strictly in its interior when prev is nonempty.
// Throws Infeasible when no pitch up to the refinement cap certifies.
InnerApproxResult inner_approx(const GeneralDomain& d, int n, const HDomain& prev);
InnerApproxResult inner_approx(const HDomain& d, int n, const HDomain& prev);

namespace detail {

// Assembly for loop sets produced by our own boundary walks: derives faces,
// orientation, and nesting, but skips the quadratic crossing scan that
// build_hdomain runs on untrusted input.
HDomain assemble_hdomain(std::vector<RLoop> loops, bool validate_simple, int* merged_collinear);

}  // namespace detail

}  // namespace eikjump
