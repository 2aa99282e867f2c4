#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "eikjump/distance_solution.hpp"
#include "eikjump/errors.hpp"
#include "eikjump/examples.hpp"
#include "eikjump/io.hpp"
#include "eikjump/optimizer.hpp"
#include "eikjump/oracle.hpp"
#include "eikjump/solution.hpp"
#include "eikjump/weight.hpp"

using namespace eikjump;

namespace {

// Exit codes: 1 usage or unreadable input, 2 domain or validation trouble,
// 3 oracle budget exhausted, 4 weight evaluated outside its built shells.
constexpr int kUsage = 1;
constexpr int kDomain = 2;
constexpr int kTooLarge = 3;
constexpr int kOutside = 4;

std::string exact_and_decimal(const Q2& x) {
  return q2_to_string(x) + " (= " + q2_to_decimal12(x) + ")";
}

HDomain load_hdomain(const std::string& path) {
  DomainFile f = read_domain(path);
  if (!f.rectilinear)
    throw HypothesisHViolated("domain '" + path +
                              "' has a face normal outside the admissible diagonal set");
  return f.h;
}

Rat positive_rat(const std::string& text, const char* what) {
  Rat r = parse_rat(text);
  if (!(r > 0)) throw ParseError(std::string(what) + " must be positive");
  return r;
}

struct MinimizeArgs {
  std::string domain, pitch = "1/2", weight, out, trace;
  unsigned seed = 0;
  int restarts = 4;
  int max_iters = 64;
};

int cmd_minimize(const MinimizeArgs& a) {
  SearchParams params;
  params.pitch = positive_rat(a.pitch, "--pitch");
  params.seed = a.seed;
  params.restarts = a.restarts;
  params.max_iters = a.max_iters;

  DomainFile df = read_domain(a.domain);
  std::vector<TraceRow> trace;
  PLSolution best;
  if (a.weight.empty()) {
    SearchResult r =
        df.rectilinear ? minimize_F(df.h, params) : minimize_F(df.g, params);
    std::cout << "value = " << exact_and_decimal(r.value) << "\n";
    best = std::move(r.best);
    trace = std::move(r.trace);
  } else {
    WeightH w = read_weight(a.weight);
    std::string built_over =
        w.general ? write_domain(w.domain_g) : write_domain(w.domain_h);
    std::string given =
        (w.general || !df.rectilinear) ? write_domain(df.g) : write_domain(df.h);
    if (built_over != given) {
      std::cerr << "error: the weight in '" << a.weight
                << "' was built over a different domain\n";
      return kDomain;
    }
    SearchResultH r = minimize_Fh(w, params);
    std::cout << "F_h enclosure = " << enclosure_text(r.enclosure) << "\n";
    int glue =
        w.trivial ? 1
                  : std::min(r.best.truncation, std::max(1, w.eval_shells() + 1));
    best = truncated_sum(w, r.best, glue);
    trace = std::move(r.trace);
  }
  if (!a.out.empty()) {
    write_text_file(a.out, write_solution(best));
    std::cout << "wrote best solution to " << a.out << "\n";
  }
  if (!a.trace.empty()) {
    write_text_file(a.trace, trace_csv(trace));
    std::cout << "wrote trace to " << a.trace << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"piecewise-affine eikonal solutions and their jump functional"};
  app.require_subcommand(1);
  int jobs = 1;
  app.add_option("--jobs", jobs, "cap on worker count (evaluation runs sequentially)")
      ->check(CLI::PositiveNumber);

  auto* distance = app.add_subcommand(
      "distance", "write the l1 distance solution of a domain");
  std::string di_domain, di_out;
  distance->add_option("domain", di_domain, "domain file")->required();
  distance->add_option("-o,--output", di_out, "solution file to write")->required();

  auto* validate_cmd = app.add_subcommand(
      "validate", "check a solution file against a domain file");
  std::string va_domain, va_solution;
  validate_cmd->add_option("domain", va_domain, "domain file")->required();
  validate_cmd->add_option("solution", va_solution, "solution file")->required();

  auto* jumps = app.add_subcommand(
      "jumps", "jump set lengths and the functional of a solution");
  std::string ju_solution, ju_region;
  jumps->add_option("solution", ju_solution, "solution file")->required();
  jumps->add_option("--region", ju_region, "clip the functional to this domain");

  auto* minimize = app.add_subcommand(
      "minimize", "search for a low-F solution (or low-F_h with --weight)");
  MinimizeArgs ma;
  minimize->add_option("domain", ma.domain, "domain file")->required();
  minimize->add_option("--pitch", ma.pitch, "cell pitch of the search grid (rational)");
  minimize->add_option("--seed", ma.seed, "random seed for the restart states");
  minimize->add_option("--restarts", ma.restarts, "number of start states")
      ->check(CLI::PositiveNumber);
  minimize->add_option("--max-iters", ma.max_iters, "improvement passes per start")
      ->check(CLI::PositiveNumber);
  minimize->add_option("--weight", ma.weight, "weight file; switches the objective to F_h");
  minimize->add_option("-o,--output", ma.out, "solution file for the best candidate");
  minimize->add_option("--trace", ma.trace, "CSV trace of every evaluation");

  auto* weight = app.add_subcommand(
      "weight", "build the interpolated weight over nested shells");
  std::string we_domain, we_out;
  int we_shells = 0;
  weight->add_option("domain", we_domain, "domain file")->required();
  weight->add_option("--shells", we_shells, "number of shells to attempt (>= 2)")
      ->required();
  weight->add_option("-o,--output", we_out, "weight file to write")->required();

  auto* oracle = app.add_subcommand(
      "oracle", "enumerate all grid solutions and report the exact minimum");
  std::string or_domain, or_pitch, or_prefix;
  bool or_count_only = false;
  long long or_budget = 100000000LL;
  std::vector<std::string> or_refine;
  oracle->add_option("domain", or_domain, "domain file")->required();
  oracle->add_option("--pitch", or_pitch, "grid pitch (rational)")->required();
  oracle->add_flag("--count-only", or_count_only, "only count the solutions");
  oracle->add_option("--budget", or_budget, "node budget for the sweep")
      ->check(CLI::PositiveNumber);
  oracle->add_option("-o,--output", or_prefix, "write each argmin to <prefix>_<i>.json");
  oracle->add_option("--refine", or_refine,
                     "extra pitches; emits a pitch,min_F CSV for refinement studies");

  auto* examples = app.add_subcommand(
      "examples", "recompute the worked examples and print PASS/FAIL lines");

  auto* render = app.add_subcommand("render", "draw a solution as SVG");
  std::string re_solution, re_out;
  bool re_show_jumps = true;
  int re_levels = 0;
  render->add_option("solution", re_solution, "solution file")->required();
  render->add_option("-o,--output", re_out, "SVG file to write")->required();
  render->add_flag("--show-jumps", re_show_jumps, "draw the jump sets (on by default)");
  render->add_option("--show-levels", re_levels, "number of level curves to draw")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (distance->parsed()) {
      PLSolution d = distance_solution(load_hdomain(di_domain));
      write_text_file(di_out, write_solution(d));
      std::cout << "F = " << exact_and_decimal(functional_F(d)) << "\n"
                << "wrote " << di_out << "\n";
      return 0;
    }

    if (validate_cmd->parsed()) {
      HDomain dom = load_hdomain(va_domain);
      PLSolution v = read_solution(va_solution);
      if (write_domain(dom) != write_domain(v.domain)) {
        std::cerr << "error: the solution's domain does not match '" << va_domain
                  << "'\n";
        return kDomain;
      }
      ValidationReport rep = validate(v);
      std::cout << write_validation(rep);
      return rep.ok() ? 0 : kDomain;
    }

    if (jumps->parsed()) {
      PLSolution v = read_solution(ju_solution);
      auto [j1, j2] = jump_sets(v);
      std::cout << "H1(J1) = " << exact_and_decimal(j1.total_length) << "\n"
                << "H1(J2) = " << exact_and_decimal(j2.total_length) << "\n"
                << "F = " << exact_and_decimal(j1.total_length + j2.total_length)
                << "\n";
      if (!ju_region.empty()) {
        HDomain region = load_hdomain(ju_region);
        std::cout << "F in region = "
                  << exact_and_decimal(functional_F(v, region)) << "\n";
      }
      return 0;
    }

    if (minimize->parsed()) return cmd_minimize(ma);

    if (weight->parsed()) {
      DomainFile df = read_domain(we_domain);
      WeightH w =
          df.world ? build_weight(df.g, we_shells) : build_weight(df.h, we_shells);
      std::cout << "built " << w.n_built() << " shells";
      if (!w.truncation_note.empty()) std::cout << " (" << w.truncation_note << ")";
      std::cout << "\n";
      if (w.n_built() > 0) {
        FhEnclosure e = functional_Fh(w, shell_solution(w), 6);
        std::cout << "F_h(shell solution) in " << enclosure_text(e) << "\n";
      }
      write_text_file(we_out, write_weight(w));
      std::cout << "wrote " << we_out << "\n";
      return 0;
    }

    if (oracle->parsed()) {
      GridSpec spec{load_hdomain(or_domain), positive_rat(or_pitch, "--pitch")};
      if (or_count_only) {
        EnumStats stats =
            enumerate_grid_solutions(spec, [](const PLSolution&) {}, or_budget);
        std::cout << stats.solutions << " solutions\n";
        return 0;
      }
      GridMinimum m = min_F_grid(spec, or_budget);
      std::cout << m.stats.solutions << " solutions, min F = "
                << exact_and_decimal(m.value) << "\n";
      if (!or_prefix.empty()) {
        for (std::size_t i = 0; i < m.argmin.size(); ++i) {
          std::string path = or_prefix + "_" + std::to_string(i) + ".json";
          write_text_file(path, write_solution(m.argmin[i]));
          std::cout << "wrote " << path << "\n";
        }
      }
      if (!or_refine.empty()) {
        std::cout << "pitch,min_F\n";
        for (const std::string& ptext : or_refine) {
          GridSpec fine{spec.domain, positive_rat(ptext, "--refine")};
          GridMinimum fm = min_F_grid(fine, or_budget);
          std::cout << rat_to_string(fine.pitch) << "," << q2_to_string(fm.value)
                    << "\n";
        }
      }
      return 0;
    }

    if (examples->parsed()) return run_examples(std::cout) == 0 ? 0 : kDomain;

    if (render->parsed()) {
      PLSolution v = read_solution(re_solution);
      write_text_file(re_out, render_svg(v, re_show_jumps, re_levels));
      std::cout << "wrote " << re_out << "\n";
      return 0;
    }
  } catch (const TooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kTooLarge;
  } catch (const OutsideBuiltShells& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOutside;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DivisionByZero& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomain;
  }
  return kUsage;
}
