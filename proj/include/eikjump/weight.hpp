#pragma once

#include <string>
#include <vector>

#include "eikjump/distance_solution.hpp"
#include "eikjump/geometry.hpp"
#include "eikjump/q2.hpp"
#include "eikjump/solution.hpp"

namespace eikjump {

// One layer of the nested shell construction: the grid-snapped inner
// polygon Omega_n with its distance certificate, the ring
// omega_n = Omega_n \ closure(Omega_{n-1}), the feasible jump value of the
// ring's distance solution, and the resulting interpolation constant.
struct WeightShell {
  HDomain full;     // Omega_n
  HDomain ring;     // omega_n (equals full for n = 1)
  InnerApproxCert cert;
  Q2 delta_hat;     // F of the per-component distance solution on the ring
  Q2 alpha;         // max{1, delta_hat + H^1(boundary of Omega_n)}
};

// The interpolated weight built over nested inner shells of a domain.
// h is constant on Omega_1 and blends two shell constants on each ring;
// alpha_ext holds the constant of one ring beyond the kept shells so that h
// stays evaluable on all of Omega_{n_built} whenever that ring fits.
struct WeightH {
  bool general = false;
  bool trivial = false;    // h identically one; no shells, no blending
  HDomain domain_h;        // the input domain, one representation or the other
  GeneralDomain domain_g;
  std::vector<WeightShell> shells;  // index k holds shell n = k + 1
  std::vector<Q2> alpha_ext;        // alpha_{n_built + 1}, ... (at most one)
  std::string truncation_note;      // set when building stopped early

  int n_built() const { return static_cast<int>(shells.size()); }
  int alpha_count() const {
    return n_built() + static_cast<int>(alpha_ext.size());
  }
  // Highest shell index on whose closure h is defined (the blend on ring m
  // needs alpha_{m+1}).
  int eval_shells() const {
    int e = alpha_count() - 1;
    return e < n_built() ? e : n_built();
  }
  const Q2& alpha(int n) const;  // 1-based, n <= alpha_count()
};

// Builds up to n_max shells (n_max >= 2). An Infeasible ring is recorded as
// truncation, never surfaced as failure; a domain too small for the first
// shell yields an empty WeightH.
WeightH build_weight(const HDomain& domain, int n_max);
WeightH build_weight(const GeneralDomain& domain, int n_max);

// The constant weight h = 1, admissible whenever the domain itself is
// hypothesis-compliant. Evaluation, the shell solution, and the enclosure
// all collapse to their unweighted counterparts: h_eval is 1 on the closed
// domain, shell_solution is the plain distance solution as a single layer
// with a zero tail, and functional_Fh returns the exact unweighted F as a
// degenerate enclosure.
WeightH trivial_weight(const HDomain& domain);

// Exact weight value at a world point of closure(Omega_{eval_shells()}).
// Throws OutsideBuiltShells beyond that set (including the unbuilt rim rings
// and everything outside the shells).
Q2 h_eval(const WeightH& w, const WPoint& x);

// The shell solution u = sum of u_n, kept as its layers: u_n is the
// per-component distance solution on ring n, zero outside it. The tail
// bound dominates the weighted jump mass of all layers beyond the kept ones
// (sum over n > K of 4/n^2).
struct LazySolution {
  std::vector<PLSolution> layers;
  int truncation = 0;  // K, number of layers kept
  Q2 tail_bound;
};

LazySolution shell_solution(const WeightH& w);

// The single piecewise-affine solution on Omega_k equal to the sum of the
// first k layers (1 <= k <= layer count).
PLSolution truncated_sum(const WeightH& w, const LazySolution& u, int k);

// Rigorous enclosure of the weighted jump functional. [lower, upper]
// brackets the exactly integrated part; tail bounds everything beyond the
// shells where h is evaluable (zero for a plain PLSolution). The true value
// lies in [lower, upper + tail]. Larger quadrature orders refine the
// bracket and never move it outside a coarser one.
struct FhEnclosure {
  Q2 lower, upper;
  Q2 tail;
};

FhEnclosure functional_Fh(const WeightH& w, const PLSolution& v,
                          int quadrature_order);
FhEnclosure functional_Fh(const WeightH& w, const LazySolution& v,
                          int quadrature_order);

}  // namespace eikjump
