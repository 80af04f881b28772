#pragma once

// Hyers-Ulam-Rassias stability on the whole module: an f with
// ||<f(x), f(y)> - <x, y>|| <= phi(x, y) is close to an additive map,
//   ||f(x + y) - f(x) - f(y)|| <= psi(x, y),
// and I(x) = lim c^n f(c^{-n} x) (c = 1/2 or 2 by branch) is an isometry with
// ||f(x) - I(x)|| <= psi~(x).

#include <cstdint>
#include <vector>

#include "hcm/approx_map.hpp"
#include "hcm/certificates.hpp"
#include "hcm/controls.hpp"
#include "hcm/corrector.hpp"
#include "hcm/kernel.hpp"

namespace hcm {

struct HurOptions {
  double tol = 1e-10;      // extrapolation accuracy and slack of the defect / chain checks
  int max_iter = 2000;
  bool refine = true;      // keep stepping to rounding level once the tail is below tol
  int chain_depth = 20;    // chain gaps checked for 0 <= m < n <= chain_depth
  int series_terms = 200;  // partial sum compared with the closed form of psi~
  std::uint64_t seed = 0x4c1;
  Tolerances tolerances;
};

struct DefectMeasurement {
  double defect = 0.0;  // ||f(x + y) - f(x) - f(y)||
  double bound = 0.0;   // psi(x, y)
  bool pass = true;
};

std::vector<DefectMeasurement> additive_defect(const ApproxMap& f, const HurControl& h,
                                               const std::vector<ProbePair>& pairs,
                                               double tol = 1e-10);

struct ChainGap {
  int m = 0;
  int n = 0;
  double gap = 0.0;    // ||c^n f(c^-n x) - c^m f(c^-m x)||
  double bound = 0.0;  // chain partial sum
};

/// I(x). Steps until the remaining series tail is below `tol` (then, if `refine`, to
/// rounding level). Throws NonConvergenceError past max_iter.
Extrapolation hur_extrapolate(const ApproxMap& f, const HurControl& h, const ModuleVector& x,
                              const HurOptions& options = {});
ModuleVector hur_correct(const ApproxMap& f, const HurControl& h, const ModuleVector& x,
                         double tol = 1e-10, int max_iter = 2000);

std::vector<ChainGap> chain_trace(const ApproxMap& f, const HurControl& h, const ModuleVector& x,
                                  int depth);

struct HurResult {
  HurBranch branch = HurBranch::Contractive;
  MapEvaluator isometry_eval;
  std::vector<DefectMeasurement> defects;
  std::vector<double> psi_tilde_values;  // per probe point
  std::vector<double> distances;         // ||f(x) - I(x)|| per probe point
  std::vector<std::vector<ChainGap>> chains;
  /// additive defect, chain estimate, distance bound, isometry, closed form vs series
  /// (PowerSum only), and the A-linearity residual reported as info.
  std::vector<Certificate> certificates;
};

/// Runs every check on `pairs` (defect, isometry, linearity) and on the first
/// coordinates of the pairs (chains, distance, series).
HurResult hur_run(const ApproxMap& f, const HurControl& h, const std::vector<ProbePair>& pairs,
                  const HurOptions& options = {});

struct CrossReport {
  double max_gap = 0.0;
  Certificate certificate;
};

/// Compares the restricted-domain corrector (phi_product on `domain`) with the
/// additive-defect limit (h) on the probes.
CrossReport cross_validate(const ApproxMap& f, const ControlSpec& phi_product,
                           const DomainSpec& domain, const HurControl& h,
                           const std::vector<ModuleVector>& probes, double tol = 1e-8,
                           const CorrectorOptions& corrector_options = {},
                           const HurOptions& hur_options = {});

}  // namespace hcm
