#pragma once

// Recovery of the A-linear isometry I from an approximately inner-product preserving
// map f on a restricted domain D:
//   I_*(x) = lim_n c^n f(c^{-n} x)            for x in Delta,
//   I(x)   = c^{n(x)} I_*(c^{-n(x)} x),  I(0) = 0,
// with the residual T = f - I. For x in Delta the Cauchy estimate
//   ||f_n(x) - f_m(x)||^2 <= c^{2n} phi(c^-n x, c^-n x) + c^{2m} phi(c^-m x, c^-m x)
//                            + 2 c^{n+m} phi(c^-n x, c^-m x)
// gives an a-priori stopping rule for built-in controls.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "hcm/approx_map.hpp"
#include "hcm/certificates.hpp"
#include "hcm/controls.hpp"
#include "hcm/domains.hpp"
#include "hcm/kernel.hpp"

namespace hcm {

struct CorrectorOptions {
  /// Required accuracy of every extrapolated value.
  double tol = 1e-10;
  int max_iter = 2000;
  /// Built-in controls: after the tail bound drops below `tol`, keep stepping (the
  /// bound costs no map evaluations) until it reaches rounding level of ||x||.
  bool refine = true;
  int reach_cap = kDefaultReachCap;
  Tolerances tolerances;
};

struct Extrapolation {
  ModuleVector value;
  int iterations = 0;
  /// Analytic tail bound at the returned step (built-in controls) or the last
  /// observed Cauchy gap (custom controls).
  double error_bound = 0.0;
};

struct CauchyStep {
  int n = 0;
  double gap = 0.0;    // ||f_{n+1}(x) - f_n(x)||
  double bound = 0.0;  // square root of the Cauchy estimate with m = n + 1
};

using ProbePair = std::pair<ModuleVector, ModuleVector>;

struct CorrectionResult {
  MapEvaluator isometry_eval;
  MapEvaluator residual_eval;
  std::optional<Matrix> materialized;
  /// Extrapolation steps used for the first vector of each probe pair (-1 if it failed).
  std::vector<int> iterations;
  /// Isometry residual, distance bound on Delta, orthogonality and cross identity on D.
  std::vector<Certificate> certificates;
};

struct Report {
  bool applicable = true;
  bool pass = true;
  double max_value = 0.0;
  Certificate certificate;
};

struct HomogeneityReport {
  bool homogeneous = false;
  double max_homogeneity_defect = 0.0;  // max ||f(c x) - c f(x)||
  double max_deviation = 0.0;           // max_n ||c^n f(c^-n x) - f(x)|| when homogeneous
  Certificate certificate;
};

class Corrector {
 public:
  /// Throws VanishingError when the control fails the vanishing condition on D.
  Corrector(ApproxMap f, ControlSpec phi, DomainSpec domain, CorrectorOptions options = {});

  const ApproxMap& map() const { return f_; }
  const ControlSpec& control() const { return phi_; }
  const DomainSpec& domain() const { return domain_; }
  const CorrectorOptions& options() const { return options_; }
  const VanishingVerdict& verdict() const { return verdict_; }

  /// f_n(x) = c^n f(c^{-n} x).
  ModuleVector step(const ModuleVector& x, int n) const;

  /// sup over m >= n of the square-rooted Cauchy estimate (built-in controls).
  double tail_bound(const ModuleVector& x, int n) const;

  /// I_*(x) for x in Delta. Throws DomainError outside Delta, NonConvergenceError
  /// past max_iter.
  Extrapolation extrapolate_on_delta(const ModuleVector& x) const;

  /// I(x) for any x through the reach index.
  Extrapolation extend_detailed(const ModuleVector& x) const;
  ModuleVector extend(const ModuleVector& x) const { return extend_detailed(x).value; }

  std::vector<CauchyStep> cauchy_trace(const ModuleVector& x, int steps) const;

  CorrectionResult decompose(const std::vector<ProbePair>& probes) const;

 private:
  ApproxMap f_;
  ControlSpec phi_;
  DomainSpec domain_;
  CorrectorOptions options_;
  VanishingVerdict verdict_;
};

/// Pairs (p_i, p_{i+1}) and (p_i, p_i) over a probe list.
std::vector<ProbePair> chain_pairs(const std::vector<ModuleVector>& points);

ModuleVector extrapolate_on_delta(const ApproxMap& f, const ControlSpec& phi,
                                  const DomainSpec& domain, const ModuleVector& x, double tol,
                                  int max_iter);
ModuleVector extend(const ApproxMap& f, const ControlSpec& phi, const DomainSpec& domain,
                    const ModuleVector& x, double tol, int max_iter);
CorrectionResult decompose(const ApproxMap& f, const ControlSpec& phi, const DomainSpec& domain,
                           const std::vector<ProbePair>& probes, const CorrectorOptions& options);

/// Coefficients of I on the standard generators, checked for A-linearity on `checks`
/// seeded combinations I(a x + lambda y + z) = a I(x) + lambda I(y) + I(z) and against
/// pointwise evaluation. Stores the matrix in `result`. Throws LinearityError.
Matrix materialize(const Corrector& corrector, CorrectionResult& result, int checks = 1000,
                   std::uint64_t seed = 0x11a7);

/// Max over probes of ||I_{c1}(x) - I_{c2}(x)|| for two admissible scale factors.
Report check_uniqueness(const ApproxMap& f, const ControlSpec& phi, const DomainSpec& domain,
                        double c1, double c2, const std::vector<ModuleVector>& probes,
                        const CorrectorOptions& options);

/// Equal dimensions force T = 0 on Delta; reports max ||T(x)|| over probes in Delta.
/// Unequal dimensions give a NotApplicable report.
Report superstability_check(const ApproxMap& f, const ControlSpec& phi, const DomainSpec& domain,
                            const std::vector<ModuleVector>& probes,
                            const CorrectorOptions& options);

/// Detects f(c x) = c f(x) on the probes; if so, checks that the extrapolation sequence
/// c^n f(c^-n x), n <= iterations, stays at f(x).
HomogeneityReport homogeneity_shortcut(const ApproxMap& f, double c,
                                       const std::vector<ModuleVector>& probes, double tol,
                                       int iterations = 60);

}  // namespace hcm
