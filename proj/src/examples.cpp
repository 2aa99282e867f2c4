#include "eikjump/examples.hpp"

#include <string>

#include "eikjump/distance_solution.hpp"
#include "eikjump/geometry.hpp"
#include "eikjump/io.hpp"
#include "eikjump/oracle.hpp"
#include "eikjump/solution.hpp"

namespace eikjump {
namespace {

HDomain rect(long long s0, long long s1, long long t0, long long t1) {
  return build_hdomain({{RPoint{Rat(s0), Rat(t0)}, RPoint{Rat(s1), Rat(t0)},
                         RPoint{Rat(s1), Rat(t1)}, RPoint{Rat(s0), Rat(t1)}}});
}

}  // namespace

int run_examples(std::ostream& os) {
  int failures = 0;
  auto emit = [&](bool pass, const std::string& text) {
    os << (pass ? "PASS" : "FAIL") << "  " << text << "\n";
    if (!pass) ++failures;
  };
  auto value_line = [&](const std::string& label, const Q2& got, const Q2& want) {
    std::string text = label + " = " + q2_to_string(got) +
                       " (= " + q2_to_decimal12(got) + ")";
    if (got != want) text += ", expected " + q2_to_string(want);
    emit(got == want, text);
  };

  // A small diamond glued onto one edge of a big one; in the rotated frame
  // the square [-3,3]^2 with the tab [3,5]x[-1,1].
  HDomain big = rect(-3, 3, -3, 3);
  HDomain tab = rect(3, 5, -1, 1);
  HDomain attached = rect_boolean(BoolOp::Union, big, tab).domain;
  value_line("F(distance) on the attached-diamond domain",
             functional_F(distance_solution(attached)), Q2(Rat(16), Rat(2)));
  value_line("F(two-part signed glue) on the attached-diamond domain",
             functional_F(partition_solution({{big, 1}, {tab, -1}})),
             Q2(Rat(16)));

  // Four squares chained through corner contacts, rotated frame.
  HDomain c1 = rect(-12, 12, -12, 12);
  HDomain c2 = rect(12, 28, -8, 8);
  HDomain c3 = rect(12, 14, -10, -8);
  HDomain c4 = rect(12, 14, 8, 10);
  HDomain chain = rect_boolean(BoolOp::Union, c1, c2).domain;
  chain = rect_boolean(BoolOp::Union, chain, c3).domain;
  chain = rect_boolean(BoolOp::Union, chain, c4).domain;
  value_line("F(distance) on the four-square chain",
             functional_F(distance_solution(chain)), Q2(Rat(120), Rat(16)));
  HDomain c12 = rect_boolean(BoolOp::Union, c1, c2).domain;
  value_line("F(non-negative glue) on the four-square chain",
             functional_F(partition_solution({{c12, 1}, {c3, 1}, {c4, 1}})),
             Q2(Rat(88), Rat(24)));

  // One dimension: a single kink is forced and the tent is the only shape.
  Oracle1DResult tent = oracle_1d(Rat(1), 3);
  bool tent_ok = tent.feasible && tent.min_jumps == 1 && tent.solutions.size() == 2;
  if (tent_ok) {
    bool saw_up = false, saw_down = false;
    for (const Solution1D& s : tent.solutions) {
      if (s.x != std::vector<Rat>{Rat(-1), Rat(0), Rat(1)}) tent_ok = false;
      if (s.u == std::vector<Rat>{Rat(0), Rat(1), Rat(0)}) saw_up = true;
      if (s.u == std::vector<Rat>{Rat(0), Rat(-1), Rat(0)}) saw_down = true;
    }
    tent_ok = tent_ok && saw_up && saw_down;
  }
  emit(tent_ok, "one-dimensional minimum on [-1,1]: 1 jump, u = +-(1 - |x|)");

  return failures;
}

}  // namespace eikjump
