#pragma once

// Deterministic approximate maps with known exact isometries and residuals.
//
// Tail-shift maps f(x) = (g(x), x_1, ..., x_k) are the sharpness construction for the
// square-root distance bound: <f(x), f(y)> - <x, y> = g(x) g(y)^*, the exact isometry
// is the shift I(x) = (0, x_1, ..., x_k) and T(x) = (g(x), 0, ..., 0).

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>

#include "hcm/approx_map.hpp"
#include "hcm/controls.hpp"
#include "hcm/domains.hpp"

namespace hcm {

/// Profile of the scalar g in a tail-shift map: |g(x)| = amplitude * sqrt(phi(x, x)),
/// times a seeded phase e^{i theta(x)} (and a parity indicator for Discontinuous).
struct GProfile {
  enum class Kind { PowerPhase, SumPhase, Bounded, Discontinuous };
  Kind kind = Kind::PowerPhase;
  double coeff = 1.0;  // alpha, beta or the bound M
  double p = 2.0;
  double q = 2.0;
  double amplitude = 1.0;  // in (0, 1]; 1 makes the bound sharp on the diagonal
  double cell = 0.25;      // Discontinuous: g vanishes on odd cells floor(||x|| / cell)

  static GProfile power_phase(double alpha, double p, double q);
  static GProfile sum_phase(double beta, double p);
  static GProfile bounded(double bound);
  static GProfile discontinuous(double alpha, double p, double q, double cell);

  /// The control under which the profile is admissible.
  ControlSpec control() const;
};

enum class DecayProfile {
  InverseSqrt,  // (1 + r)^{-1/2}, decreasing: large-norm asymptotics
  InverseLog,   // 1 / log(e + r), decreasing
  SqrtRatio     // sqrt(r) / (1 + sqrt(r)), increasing: small-norm asymptotics
};

double decay_value(DecayProfile profile, double r);
/// Smallest r with decay <= eps (decreasing profiles) or largest with decay <= eps
/// (increasing profile). May be +inf for InverseLog at small eps.
double decay_threshold(DecayProfile profile, double eps);
bool decay_is_increasing(DecayProfile profile);

namespace fixture {

struct ExactIsometry {};
struct TailShift {
  GProfile profile;
};
/// f(x) = x B + T(x) with T orthogonal to the range of B (k_out > k_in) and of size
/// amplitude * sqrt(phi(x, x)). In square dimensions no such room exists; if a product
/// domain is given, f is instead distorted off Delta, where the domain places no constraint.
struct PerturbedIsometry {
  ControlSpec control;
  double amplitude = 0.9;
  std::optional<DomainSpec> domain;
};
/// f(x) = x B, which commutes with every scaling; `c` is the declared homogeneity scale.
struct Homogeneous {
  double c = 2.0;
};
/// Shift plus (g(x), 0, ...) with |g(x)| = ||x||^p decay(||x||).
struct AsymptoticDecay {
  double p = 0.5;
  DecayProfile decay = DecayProfile::InverseSqrt;
};

}  // namespace fixture

struct FixtureSpec {
  std::variant<fixture::ExactIsometry, fixture::TailShift, fixture::PerturbedIsometry,
               fixture::Homogeneous, fixture::AsymptoticDecay>
      kind;
  int d = 1;
  int k_in = 1;
  int k_out = 2;
};

struct AdmissibilityReport {
  bool pass = true;
  /// max over samples of ||<f(x), f(y)> - <x, y>|| - phi(x, y)
  double max_excess = 0.0;
  /// min over diagonal samples of phi(x, x) - ||<f(x), f(x)> - <x, x>||
  double diagonal_margin = 0.0;
  int samples = 0;
};

struct GroundTruth {
  Matrix coeffs;  // (k_in d) x (k_out d), I(x) = x * coeffs
  MapEvaluator residual;

  ModuleVector isometry(const ModuleVector& x) const { return x.apply(coeffs); }
};

struct Fixture {
  ApproxMap map;
  GroundTruth truth;
  ControlSpec control;
  DomainSpec domain;
  AdmissibilityReport admissibility;
};

/// Builds the map and its ground truth. Throws FixtureError for invalid dimensions,
/// a profile that is not admissible for its control, or a failed admissibility audit.
Fixture generate(const FixtureSpec& spec, std::uint64_t seed);

/// Samples `budget` pairs of D (plus their diagonal pairs) and compares the
/// inner-product defect with phi. Passes iff every excess is <= tol_num * max(1, phi).
AdmissibilityReport admissibility_audit(const ApproxMap& f, const ControlSpec& phi_spec,
                                        const DomainSpec& domain, int budget, std::uint64_t seed,
                                        double tol_num = 1e-11);

}  // namespace hcm
