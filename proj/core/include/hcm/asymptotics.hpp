#pragma once

// p-asymptotic behaviour at infinity (MaxNorm, 0 < p < 1) or at zero (MinNorm, p > 1):
// a defect bounded by eps ||x||^p ||y||^p beyond K(eps) makes f close to one isometry
// I_0 in the sense ||f(x) - I_0(x)|| / ||x||^p -> 0. Suprema are approximated on
// seeded log-uniform norm shells, so every result here is sampling evidence.

#include <cstdint>
#include <functional>
#include <vector>

#include "hcm/approx_map.hpp"
#include "hcm/certificates.hpp"
#include "hcm/corrector.hpp"

namespace hcm {

enum class AsymptoticMode {
  MaxNorm,  // max(||x||, ||y||) >= K, limit ||x|| -> inf, c = 1/2
  MinNorm   // min(||x||, ||y||) <= K, limit ||x|| -> 0, c = 2
};
std::string to_string(AsymptoticMode m);

struct ShellGrid {
  int shells = 64;
  int directions = 16;
  double span = 1e4;  // shells cover [K, span K] (MaxNorm) or [K / span, K] (MinNorm)
};

struct AsymptoticScenario {
  double p = 0.5;
  std::vector<double> epsilon_grid{1e-1, 1e-2, 1e-3};
  std::function<double(double)> k_map;  // eps -> K(eps)
  AsymptoticMode mode = AsymptoticMode::MaxNorm;
  /// Threshold of the base isometry I_0; <= 0 means K(1), clamped to 1 when degenerate.
  double k0 = 0.0;

  /// Throws ControlError on an invalid p for the mode, a grid that is not strictly
  /// decreasing, or K(eps) moving the wrong way as eps decreases.
  void validate() const;
  double base_threshold() const;
};

struct EpsilonRow {
  double eps = 0.0;
  double threshold = 0.0;
  double measured = 0.0;  // sup of the sampled ratio
  double bound = 0.0;
  Status status = Status::Pass;
};

struct HypothesisReport {
  bool pass = true;
  std::vector<EpsilonRow> rows;
  Certificate certificate;
};

/// For each eps: sup over sampled pairs in the eps-region of
/// ||<f(x), f(y)> - <x, y>|| / (||x||^p ||y||^p); passes iff <= eps.
HypothesisReport verify_asymptotic_hypothesis(const ApproxMap& f, const AsymptoticScenario& s,
                                              const ShellGrid& grid = {},
                                              std::uint64_t seed = 0xa5);

/// Sup of the hypothesis ratio on the region beyond `threshold`.
double hypothesis_ratio(const ApproxMap& f, double p, AsymptoticMode mode, double threshold,
                        const ShellGrid& grid, std::uint64_t seed);

/// Bisection (in log K) for the threshold where the sampled ratio drops to eps, with
/// a factor-2 safety margin applied outward. Returns +inf (MaxNorm) or 0 (MinNorm)
/// when no threshold in [1e-8, 1e12] works.
double estimate_threshold(const ApproxMap& f, double p, AsymptoticMode mode, double eps,
                          const ShellGrid& grid = {}, std::uint64_t seed = 0xa5);

struct ClosenessReport {
  MapEvaluator isometry_eval;  // I_0
  std::vector<EpsilonRow> rows;
  double base_bound_ratio = 0.0;  // sup ||f(x) - I_0(x)|| / ||x||^p beyond K_0
  double collapse_gap = 0.0;      // max ||I_eps(x) - I_0(x)|| on moderate probes
  bool shells_monotone = true;    // MinNorm: ratios nonincreasing on shrinking shells
  std::vector<double> shell_ratios;
  std::vector<Certificate> certificates;
};

/// Recovers I_0 with the restricted-domain corrector (control ||x||^p ||y||^p on the
/// K_0 region), checks the ratio bound sqrt(eps) + tol on shells beyond K(eps), the
/// base bound ||f(x) - I_0(x)|| <= ||x||^p beyond K_0, and that the isometry recovered
/// at every eps coincides with I_0 on `probes`.
ClosenessReport asymptotic_closeness(const ApproxMap& f, const AsymptoticScenario& s,
                                     const std::vector<ModuleVector>& probes, double tol = 1e-8,
                                     const ShellGrid& grid = {}, std::uint64_t seed = 0xa5,
                                     const CorrectorOptions& options = {});

}  // namespace hcm
