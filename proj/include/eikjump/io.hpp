#pragma once

#include <string>

#include "eikjump/geometry.hpp"
#include "eikjump/solution.hpp"
#include "eikjump/weight.hpp"

namespace eikjump {

// A domain file holds polygon loops in one frame or the other:
//
//   { "frame": "rotated" | "world", "loops": [ [ ["s","t"], ... ], ... ] }
//
// Coordinates are exact rational text ("p/q" or "p"). Rotated files always
// produce an HDomain; world files always produce a GeneralDomain and, when
// every edge normal lies in the admissible diagonal set, an HDomain as
// well (the rectilinear flag says which happened). The canonical writers
// start every loop at its leftmost-lowest vertex and sort the loops by
// that vertex, so equal domains serialize to equal bytes.
struct DomainFile {
  bool world = false;        // frame the file was written in
  bool rectilinear = false;  // h below is usable
  HDomain h;
  GeneralDomain g;
};

DomainFile parse_domain(const std::string& text);
DomainFile read_domain(const std::string& path);
std::string write_domain(const HDomain& d);         // frame "rotated"
std::string write_domain(const GeneralDomain& d);   // frame "world"

// A solution file embeds its domain (inline object, or a path when read
// from disk) and lists the affine pieces:
//
//   { "domain": { ... } | "relative/path.json",
//     "pieces": [ { "cell": [ ["s","t"], ... ],
//                   "grad": [g1, g2], "offset": "p/q" }, ... ] }
//
// grad entries are the world-frame signs (+-1). The reader performs no
// validation beyond shape; run validate() separately. parse_solution
// accepts inline domains only; read_solution also resolves a path string
// against the directory containing the file. The writer emits pieces in a
// sorted canonical order.
PLSolution parse_solution(const std::string& text);
PLSolution read_solution(const std::string& path);
std::string write_solution(const PLSolution& v);

// Weight files persist the full shell construction so that a reloaded
// weight evaluates identically without re-running the build:
//
//   { "domain": { ... }, "trivial": bool,
//     "shells": [ { "full": {...}, "ring": {...},
//                   "cert": { "min_distance": "p/q", "arg_min": ["s","t"],
//                             "arg_upper": ["s","t"], "pitch": "p/q" },
//                   "delta_hat": "<Q[sqrt2] text>", "alpha": "..." }, ... ],
//     "alpha_ext": [ "..." ], "truncation_note": "..." }
WeightH parse_weight(const std::string& text);
WeightH read_weight(const std::string& path);
std::string write_weight(const WeightH& w);

// JSON with one entry per check: name, pass, detail, and the rotated-frame
// witness point when one was recorded; plus the overall verdict.
std::string write_validation(const ValidationReport& report);

// "[lo, hi] + tail t" with 12 significant decimal digits on the bracket
// ends and the tail kept exact (decimal alongside).
std::string enclosure_text(const FhEnclosure& e);

// Decimal rendering with 12 significant digits, shared by the report
// printers above and the command line tool.
std::string q2_to_decimal12(const Q2& x);

std::string read_text_file(const std::string& path);  // ParseError if unreadable
void write_text_file(const std::string& path, const std::string& text);

// An SVG 1.1 figure of the solution in the world frame (x1 right, x2 up):
// the domain outline, one polyline group per jump component when show_jumps
// is set (stroke color cycles per component), and level_curves evenly
// spaced level sets of v when positive. Output is deterministic.
std::string render_svg(const PLSolution& v, bool show_jumps = true,
                       int level_curves = 0);

}  // namespace eikjump
