#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "eikjump/distance_solution.hpp"
#include "eikjump/errors.hpp"
#include "eikjump/io.hpp"
#include "eikjump/solution.hpp"
#include "eikjump/weight.hpp"

using namespace eikjump;

namespace {

HDomain rect_domain(const Rat& s0, const Rat& s1, const Rat& t0, const Rat& t1) {
  return build_hdomain({{RPoint{s0, t0}, RPoint{s1, t0}, RPoint{s1, t1},
                         RPoint{s0, t1}}});
}

HDomain diamond(const Rat& r) { return rect_domain(-r, r, -r, r); }

// Square with a reflex notch: the union used throughout the distance tests.
HDomain example1_union() {
  return build_hdomain({{RPoint{-3, -3}, RPoint{3, -3}, RPoint{3, -1},
                         RPoint{5, -1}, RPoint{5, 1}, RPoint{3, 1},
                         RPoint{3, 3}, RPoint{-3, 3}}});
}

GeneralDomain unit_square_world() {
  return build_general_domain(
      {{WPoint{Rat(-1), Rat(-1)}, WPoint{Rat(1), Rat(-1)},
        WPoint{Rat(1), Rat(1)}, WPoint{Rat(-1), Rat(1)}}});
}

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "eikjump_io_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("domain files round-trip in both frames") {
  HDomain ex1 = example1_union();
  std::string text = write_domain(ex1);
  DomainFile f = parse_domain(text);
  CHECK(!f.world);
  CHECK(f.rectilinear);
  CHECK(f.h.loops.size() == ex1.loops.size());
  CHECK(f.h.rotated_area() == ex1.rotated_area());
  CHECK(write_domain(f.h) == text);
  CHECK(!f.g.loops.empty());  // world companion usable for general consumers

  GeneralDomain sq = unit_square_world();
  std::string wtext = write_domain(sq);
  DomainFile wf = parse_domain(wtext);
  CHECK(wf.world);
  CHECK(!wf.rectilinear);  // axis-parallel world edges violate the hypothesis
  CHECK(write_domain(wf.g) == wtext);

  // A world square rotated 45 degrees has diagonal edges only, so the
  // rotated-frame companion exists.
  GeneralDomain dia = build_general_domain(
      {{WPoint{Rat(1), Rat(0)}, WPoint{Rat(0), Rat(1)}, WPoint{Rat(-1), Rat(0)},
        WPoint{Rat(0), Rat(-1)}}});
  DomainFile df = parse_domain(write_domain(dia));
  CHECK(df.world);
  CHECK(df.rectilinear);
  CHECK(functional_F(distance_solution(df.h)) == Q2(Rat(4)));
}

TEST_CASE("the canonical writer forgets loop order and starting vertex") {
  std::string a = R"({ "frame": "rotated",
    "loops": [[["0","0"],["2","0"],["2","2"],["0","2"]]] })";
  std::string b = R"({ "frame": "rotated",
    "loops": [[["2","2"],["0","2"],["0","0"],["2","0"]]] })";
  CHECK(write_domain(parse_domain(a).h) == write_domain(parse_domain(b).h));

  std::string outer_first = R"({ "frame": "rotated", "loops": [
    [["-4","-4"],["4","-4"],["4","4"],["-4","4"]],
    [["-1","-1"],["-1","1"],["1","1"],["1","-1"]] ] })";
  std::string hole_first = R"({ "frame": "rotated", "loops": [
    [["1","1"],["1","-1"],["-1","-1"],["-1","1"]],
    [["4","4"],["-4","4"],["-4","-4"],["4","-4"]] ] })";
  DomainFile u = parse_domain(outer_first);
  DomainFile v = parse_domain(hole_first);
  CHECK(u.h.loops.size() == 2);
  CHECK(write_domain(u.h) == write_domain(v.h));
}

TEST_CASE("solution files round-trip and preserve evaluation") {
  PLSolution d = distance_solution(example1_union());
  std::string text = write_solution(d);
  PLSolution v = parse_solution(text);
  CHECK(validate(v).ok());
  CHECK(functional_F(v) == functional_F(d));
  CHECK(v.pieces.size() == d.pieces.size());
  CHECK(write_solution(v) == text);  // canonical writer is idempotent
  RPoint probe{Rat(1, 2), Rat(1, 4)};
  CHECK(solution_value(v, probe) == solution_value(d, probe));
}

TEST_CASE("a solution file may name its domain by path") {
  auto dir = scratch_dir();
  PLSolution d = distance_solution(diamond(Rat(1)));
  write_text_file((dir / "dom.json").string(), write_domain(d.domain));

  nlohmann::ordered_json j = nlohmann::ordered_json::parse(write_solution(d));
  j["domain"] = "dom.json";
  write_text_file((dir / "sol.json").string(), j.dump(2) + "\n");

  PLSolution v = read_solution((dir / "sol.json").string());
  CHECK(functional_F(v) == functional_F(d));

  // Inline-only parsing refuses the indirection.
  CHECK_THROWS_AS(parse_solution(j.dump()), ParseError);
}

TEST_CASE("weight files reload to an identical weight") {
  WeightH w = build_weight(diamond(Rat(4)), 3);
  REQUIRE(w.n_built() >= 2);
  std::string text = write_weight(w);
  WeightH r = parse_weight(text);
  CHECK(r.general == w.general);
  CHECK(!r.trivial);
  CHECK(r.n_built() == w.n_built());
  CHECK(r.alpha_ext.size() == w.alpha_ext.size());
  CHECK(r.truncation_note == w.truncation_note);
  for (int n = 1; n <= w.n_built(); ++n) {
    CHECK(r.shells[n - 1].delta_hat == w.shells[n - 1].delta_hat);
    CHECK(r.shells[n - 1].alpha == w.shells[n - 1].alpha);
    CHECK(r.shells[n - 1].cert.min_distance == w.shells[n - 1].cert.min_distance);
    CHECK(r.shells[n - 1].full.rotated_area() == w.shells[n - 1].full.rotated_area());
  }
  for (const WPoint& p : {WPoint{Rat(0), Rat(0)}, WPoint{Rat(1, 4), Rat(1, 8)},
                          WPoint{Rat(-3, 8), Rat(5, 16)}})
    CHECK(h_eval(r, p) == h_eval(w, p));
  CHECK(write_weight(r) == text);

  LazySolution su = shell_solution(r);
  LazySolution sw = shell_solution(w);
  REQUIRE(su.layers.size() == sw.layers.size());
  CHECK(su.tail_bound == sw.tail_bound);
  FhEnclosure eu = functional_Fh(r, su, 4);
  FhEnclosure ew = functional_Fh(w, sw, 4);
  CHECK(eu.lower == ew.lower);
  CHECK(eu.upper == ew.upper);
}

TEST_CASE("trivial and general weights serialize too") {
  WeightH t = trivial_weight(diamond(Rat(1)));
  WeightH t2 = parse_weight(write_weight(t));
  CHECK(t2.trivial);
  CHECK(t2.n_built() == 0);
  CHECK(h_eval(t2, WPoint{Rat(0), Rat(0)}) == Q2(Rat(1)));
  CHECK(write_weight(t2) == write_weight(t));

  WeightH g = build_weight(unit_square_world(), 2);
  WeightH g2 = parse_weight(write_weight(g));
  CHECK(g2.general);
  CHECK(g2.n_built() == g.n_built());
  CHECK(write_weight(g2) == write_weight(g));
}

TEST_CASE("malformed files raise parse errors") {
  CHECK_THROWS_AS(parse_domain("nonsense"), ParseError);
  CHECK_THROWS_AS(parse_domain("{}"), ParseError);
  CHECK_THROWS_AS(parse_domain(R"({"frame":"polar","loops":[[["0","0"]]]})"), ParseError);
  CHECK_THROWS_AS(parse_domain(R"({"frame":"rotated","loops":[]})"), ParseError);
  CHECK_THROWS_AS(
      parse_domain(R"({"frame":"rotated","loops":[[[0,0],[2,0],[2,2],[0,2]]]})"),
      ParseError);  // numbers are not exact text
  CHECK_THROWS_AS(parse_solution(R"({"pieces":[]})"), ParseError);
  std::string dom = write_domain(diamond(Rat(1)));
  nlohmann::ordered_json j;
  j["domain"] = nlohmann::ordered_json::parse(dom);
  j["pieces"] = {{{"cell", {{"0", "0"}, {"1", "0"}, {"0", "1"}}},
                  {"grad", {2, 1}},
                  {"offset", "0"}}};
  CHECK_THROWS_AS(parse_solution(j.dump()), ParseError);
  CHECK_THROWS_AS(read_domain("/no/such/file.json"), ParseError);
  CHECK_THROWS_AS(parse_weight(R"({"general":"yes"})"), ParseError);
}

TEST_CASE("validation reports serialize with witnesses") {
  PLSolution good = distance_solution(diamond(Rat(1)));
  std::string ok_text = write_validation(validate(good));
  CHECK(ok_text.find("\"ok\": true") != std::string::npos);
  CHECK(ok_text.find("\"pass\": false") == std::string::npos);

  PLSolution bad = good;
  bad.pieces[0].offset += Rat(1, 8);
  ValidationReport rep = validate(bad);
  CHECK(!rep.ok());
  std::string bad_text = write_validation(rep);
  CHECK(bad_text.find("\"ok\": false") != std::string::npos);
  CHECK(bad_text.find("\"pass\": false") != std::string::npos);
  CHECK(bad_text.find("\"witness\"") != std::string::npos);
}

TEST_CASE("decimals carry twelve significant digits next to exact text") {
  CHECK(q2_to_decimal12(Q2()) == "0");
  CHECK(q2_to_decimal12(parse_q2("16 + 2 sqrt2")) == "18.8284271247");
  CHECK(q2_to_decimal12(parse_q2("1/3")) == "0.333333333333");
  CHECK(q2_to_decimal12(parse_q2("-1/3")) == "-0.333333333333");
  CHECK(q2_to_decimal12(parse_q2("120 + 16 sqrt2")) == "142.627416998");

  FhEnclosure e{Q2(Rat(4)), Q2(Rat(9, 2)), Q2(Rat(28, 25))};
  CHECK(enclosure_text(e) == "[4.0, 4.5] + tail 28/25 (= 1.12)");
  FhEnclosure exact{Q2(Rat(3)), Q2(Rat(3)), Q2()};
  CHECK(enclosure_text(exact) == "[3.0, 3.0] + tail 0");
}

TEST_CASE("svg output is deterministic and shows the jump structure") {
  PLSolution v = distance_solution(example1_union());
  std::string svg = render_svg(v, true, 3);
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("id=\"domain\"") != std::string::npos);
  CHECK(svg.find("id=\"jumps-1\"") != std::string::npos);
  CHECK(svg.find("id=\"jumps-2\"") != std::string::npos);
  CHECK(svg.find("id=\"levels\"") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(render_svg(v, true, 3) == svg);  // byte-identical on rerun

  std::string bare = render_svg(v, false, 0);
  CHECK(bare.find("jumps-") == std::string::npos);
  CHECK(bare.find("id=\"levels\"") == std::string::npos);
  CHECK(bare.find("id=\"domain\"") != std::string::npos);
}
