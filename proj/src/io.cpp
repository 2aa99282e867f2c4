#include "eikjump/io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "eikjump/errors.hpp"

namespace eikjump {
namespace {

using json = nlohmann::ordered_json;

json jparse(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ParseError("malformed json");
  return j;
}

const json& member(const json& j, const char* key) {
  if (!j.is_object()) throw ParseError(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

std::string text_member(const json& j, const char* key) {
  const json& f = member(j, key);
  if (!f.is_string()) throw ParseError(std::string("field '") + key + "' must be a string");
  return f.get<std::string>();
}

Rat rat_value(const json& j, const char* what) {
  if (!j.is_string())
    throw ParseError(std::string(what) + " must be exact rational text, e.g. \"3/2\"");
  return parse_rat(j.get<std::string>());
}

Q2 q2_value(const json& j, const char* what) {
  if (!j.is_string())
    throw ParseError(std::string(what) + " must be exact Q[sqrt2] text, e.g. \"4 + 2 sqrt2\"");
  return parse_q2(j.get<std::string>());
}

json point_json(const RPoint& p) {
  return json::array({rat_to_string(p.s), rat_to_string(p.t)});
}

json point_json(const WPoint& p) {
  return json::array({rat_to_string(p.x1), rat_to_string(p.x2)});
}

RPoint rpoint_value(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("a point must be a 2-element array");
  return {rat_value(j[0], "coordinate"), rat_value(j[1], "coordinate")};
}

WPoint wpoint_value(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("a point must be a 2-element array");
  return {rat_value(j[0], "coordinate"), rat_value(j[1], "coordinate")};
}

bool point_less(const RPoint& a, const RPoint& b) {
  if (a.s != b.s) return a.s < b.s;
  return a.t < b.t;
}

bool point_less(const WPoint& a, const WPoint& b) {
  if (a.x1 != b.x1) return a.x1 < b.x1;
  return a.x2 < b.x2;
}

// Start the loop at its leftmost-lowest vertex; the cyclic order (and with
// it the orientation) is untouched, so equal loops serialize equally.
template <class Loop>
Loop rotate_to_min(const Loop& in) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < in.size(); ++i)
    if (point_less(in[i], in[k])) k = i;
  Loop out;
  out.reserve(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out.push_back(in[(k + i) % in.size()]);
  return out;
}

template <class Loop>
bool loop_less(const Loop& a, const Loop& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (point_less(a[i], b[i])) return true;
    if (point_less(b[i], a[i])) return false;
  }
  return a.size() < b.size();
}

template <class LoopVec>
json loops_json(const LoopVec& raw) {
  LoopVec loops;
  loops.reserve(raw.size());
  for (const auto& l : raw) loops.push_back(rotate_to_min(l));
  std::sort(loops.begin(), loops.end(),
            [](const auto& a, const auto& b) { return loop_less(a, b); });
  json out = json::array();
  for (const auto& l : loops) {
    json jl = json::array();
    for (const auto& p : l) jl.push_back(point_json(p));
    out.push_back(jl);
  }
  return out;
}

json domain_json(const HDomain& d) {
  json out;
  out["frame"] = "rotated";
  out["loops"] = loops_json(d.loops);
  return out;
}

json domain_json(const GeneralDomain& d) {
  json out;
  out["frame"] = "world";
  out["loops"] = loops_json(d.loops);
  return out;
}

DomainFile domain_value(const json& j) {
  std::string frame = text_member(j, "frame");
  const json& jl = member(j, "loops");
  if (!jl.is_array() || jl.empty())
    throw ParseError("'loops' must be a nonempty array of loops");
  DomainFile out;
  if (frame == "rotated") {
    std::vector<RLoop> loops;
    for (const json& l : jl) {
      if (!l.is_array()) throw ParseError("each loop must be an array of points");
      RLoop loop;
      for (const json& p : l) loop.push_back(rpoint_value(p));
      loops.push_back(std::move(loop));
    }
    out.world = false;
    out.rectilinear = true;
    out.h = build_hdomain(loops);
    std::vector<std::vector<WPoint>> world;
    for (const RLoop& l : out.h.loops) {
      std::vector<WPoint> wl;
      for (const RPoint& p : l) wl.push_back(to_world(p));
      world.push_back(std::move(wl));
    }
    out.g = build_general_domain(world);
  } else if (frame == "world") {
    std::vector<std::vector<WPoint>> loops;
    for (const json& l : jl) {
      if (!l.is_array()) throw ParseError("each loop must be an array of points");
      std::vector<WPoint> loop;
      for (const json& p : l) loop.push_back(wpoint_value(p));
      loops.push_back(std::move(loop));
    }
    out.world = true;
    out.g = build_general_domain(loops);
    try {
      out.h = build_hdomain_world(loops);
      out.rectilinear = true;
    } catch (const NotRectilinear&) {
      out.rectilinear = false;
    }
  } else {
    throw ParseError("frame must be \"rotated\" or \"world\"");
  }
  return out;
}

json piece_json(const AffinePiece& p) {
  json out;
  json cell = json::array();
  for (const RPoint& v : rotate_to_min(p.cell)) cell.push_back(point_json(v));
  out["cell"] = cell;
  out["grad"] = json::array({p.g1, p.g2});
  out["offset"] = rat_to_string(p.offset);
  return out;
}

AffinePiece piece_value(const json& j) {
  AffinePiece p;
  const json& jc = member(j, "cell");
  if (!jc.is_array() || jc.size() < 3)
    throw ParseError("'cell' must list at least three vertices");
  for (const json& v : jc) p.cell.push_back(rpoint_value(v));
  const json& jg = member(j, "grad");
  if (!jg.is_array() || jg.size() != 2 || !jg[0].is_number_integer() ||
      !jg[1].is_number_integer())
    throw ParseError("'grad' must be a pair of integers");
  p.g1 = jg[0].get<int>();
  p.g2 = jg[1].get<int>();
  if ((p.g1 != 1 && p.g1 != -1) || (p.g2 != 1 && p.g2 != -1))
    throw ParseError("'grad' entries must be +1 or -1");
  p.offset = rat_value(member(j, "offset"), "'offset'");
  return p;
}

PLSolution solution_value(const json& j, DomainFile domain) {
  if (!domain.rectilinear)
    throw HypothesisHViolated(
        "the solution's domain has a face normal outside the admissible diagonal set");
  PLSolution v;
  v.domain = std::move(domain.h);
  const json& jp = member(j, "pieces");
  if (!jp.is_array()) throw ParseError("'pieces' must be an array");
  for (const json& p : jp) v.pieces.push_back(piece_value(p));
  return v;
}

json cert_json(const InnerApproxCert& c) {
  json out;
  out["min_distance"] = rat_to_string(c.min_distance);
  out["arg_min"] = point_json(c.arg_min);
  out["arg_upper"] = point_json(c.arg_upper);
  out["pitch"] = rat_to_string(c.pitch);
  return out;
}

InnerApproxCert cert_value(const json& j) {
  InnerApproxCert c;
  c.min_distance = rat_value(member(j, "min_distance"), "'min_distance'");
  c.arg_min = rpoint_value(member(j, "arg_min"));
  c.arg_upper = rpoint_value(member(j, "arg_upper"));
  c.pitch = rat_value(member(j, "pitch"), "'pitch'");
  return c;
}

HDomain hdomain_value(const json& j, const char* what) {
  DomainFile f = domain_value(j);
  if (!f.rectilinear)
    throw ParseError(std::string(what) + " must be a rotated-frame (or rectilinear) domain");
  return f.h;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

DomainFile parse_domain(const std::string& text) { return domain_value(jparse(text)); }

DomainFile read_domain(const std::string& path) { return parse_domain(read_text_file(path)); }

std::string write_domain(const HDomain& d) { return dump(domain_json(d)); }

std::string write_domain(const GeneralDomain& d) { return dump(domain_json(d)); }

PLSolution parse_solution(const std::string& text) {
  json j = jparse(text);
  const json& jd = member(j, "domain");
  if (jd.is_string())
    throw ParseError("parse_solution takes inline domains; use read_solution for path domains");
  return solution_value(j, domain_value(jd));
}

PLSolution read_solution(const std::string& path) {
  json j = jparse(read_text_file(path));
  const json& jd = member(j, "domain");
  DomainFile domain;
  if (jd.is_string()) {
    std::filesystem::path ref(jd.get<std::string>());
    std::filesystem::path base = std::filesystem::path(path).parent_path();
    domain = read_domain((base / ref).string());
  } else {
    domain = domain_value(jd);
  }
  return solution_value(j, std::move(domain));
}

std::string write_solution(const PLSolution& v) {
  json out;
  out["domain"] = domain_json(v.domain);
  std::vector<json> pieces;
  pieces.reserve(v.pieces.size());
  for (const AffinePiece& p : v.pieces) pieces.push_back(piece_json(p));
  std::sort(pieces.begin(), pieces.end(),
            [](const json& a, const json& b) { return a.dump() < b.dump(); });
  out["pieces"] = json::array();
  for (json& p : pieces) out["pieces"].push_back(std::move(p));
  return dump(out);
}

WeightH parse_weight(const std::string& text) {
  json j = jparse(text);
  WeightH w;
  const json& jg = member(j, "general");
  const json& jt = member(j, "trivial");
  if (!jg.is_boolean() || !jt.is_boolean())
    throw ParseError("'general' and 'trivial' must be booleans");
  w.general = jg.get<bool>();
  w.trivial = jt.get<bool>();
  DomainFile dom = domain_value(member(j, "domain"));
  if (w.general) {
    w.domain_g = dom.g;
  } else {
    if (!dom.rectilinear) throw ParseError("a non-general weight needs a rectilinear domain");
    w.domain_h = dom.h;
  }
  const json& js = member(j, "shells");
  if (!js.is_array()) throw ParseError("'shells' must be an array");
  for (const json& s : js) {
    WeightShell shell;
    shell.full = hdomain_value(member(s, "full"), "shell 'full'");
    shell.ring = hdomain_value(member(s, "ring"), "shell 'ring'");
    shell.cert = cert_value(member(s, "cert"));
    shell.delta_hat = q2_value(member(s, "delta_hat"), "'delta_hat'");
    shell.alpha = q2_value(member(s, "alpha"), "'alpha'");
    w.shells.push_back(std::move(shell));
  }
  const json& ja = member(j, "alpha_ext");
  if (!ja.is_array()) throw ParseError("'alpha_ext' must be an array");
  for (const json& a : ja) w.alpha_ext.push_back(q2_value(a, "'alpha_ext' entry"));
  w.truncation_note = text_member(j, "truncation_note");
  if (w.trivial && (w.general || !w.shells.empty()))
    throw ParseError("a trivial weight has no shells and a rotated-frame domain");
  return w;
}

WeightH read_weight(const std::string& path) { return parse_weight(read_text_file(path)); }

std::string write_weight(const WeightH& w) {
  json out;
  out["general"] = w.general;
  out["trivial"] = w.trivial;
  out["domain"] = w.general ? domain_json(w.domain_g) : domain_json(w.domain_h);
  json shells = json::array();
  for (const WeightShell& s : w.shells) {
    json js;
    js["full"] = domain_json(s.full);
    js["ring"] = domain_json(s.ring);
    js["cert"] = cert_json(s.cert);
    js["delta_hat"] = q2_to_string(s.delta_hat);
    js["alpha"] = q2_to_string(s.alpha);
    shells.push_back(std::move(js));
  }
  out["shells"] = std::move(shells);
  json alphas = json::array();
  for (const Q2& a : w.alpha_ext) alphas.push_back(q2_to_string(a));
  out["alpha_ext"] = std::move(alphas);
  out["truncation_note"] = w.truncation_note;
  return dump(out);
}

std::string write_validation(const ValidationReport& report) {
  json out;
  json checks = json::array();
  for (const CheckResult& c : report.checks) {
    json jc;
    jc["name"] = c.name;
    jc["pass"] = c.pass;
    jc["detail"] = c.detail;
    if (c.witness) jc["witness"] = point_json(*c.witness);
    checks.push_back(std::move(jc));
  }
  out["checks"] = std::move(checks);
  out["ok"] = report.ok();
  return dump(out);
}

std::string q2_to_decimal12(const Q2& x) {
  if (x == Q2()) return "0";
  Q2 ax = x < Q2() ? Q2() - x : x;
  Q2 ten{Rat(10), Rat(0)};
  Q2 p{Rat(1), Rat(0)};
  int e = 0;
  while (ax >= p * ten) {
    p = p * ten;
    ++e;
  }
  while (ax < p) {
    p = p / ten;
    --e;
  }
  int frac = 11 - e;
  if (frac < 0) frac = 0;
  if (frac > 36) frac = 36;
  return q2_to_decimal(x, frac);
}

std::string enclosure_text(const FhEnclosure& e) {
  std::string out =
      "[" + q2_to_decimal12(e.lower) + ", " + q2_to_decimal12(e.upper) + "]";
  out += " + tail " + q2_to_string(e.tail);
  if (!(e.tail == Q2())) out += " (= " + q2_to_decimal12(e.tail) + ")";
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  out.flush();
  if (!out) throw Error("short write to '" + path + "'");
}

}  // namespace eikjump
