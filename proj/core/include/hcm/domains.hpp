#pragma once

// Restricted domains D of pairs, their diagonal set Delta = {x : (x, x) in D}, and the
// reach index n(x) = min{n >= 0 : c^{-n} x in Delta}.
//
// Domain axioms, for the scale factor c > 0, c != 1 carried by the spec:
//   (i)  (x, y) in D  =>  (c^{-n} x, c^{-m} y) in D for all n, m >= 0;
//   (ii) for x, y != 0 there are n, m >= 0 with (c^{-n} x, c^{-m} y) in D;
//   and Delta x Delta is contained in D.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hcm/kernel.hpp"
#include "hcm/random.hpp"

namespace hcm {

enum class DomainKind { Full, BallProduct, ExteriorProduct, ExteriorUnion, BallUnion, Custom };

std::string to_string(DomainKind kind);

using PairPredicate = std::function<bool(const ModuleVector&, const ModuleVector&)>;
/// Draws a pair inside D for module dimensions (d, k).
using PairSampler = std::function<std::pair<ModuleVector, ModuleVector>(Rng&, int, int)>;

class DomainSpec {
 public:
  static DomainSpec full(double c);
  /// {||x|| <= r} x {||y|| <= r}; requires c > 1.
  static DomainSpec ball_product(double radius, double c);
  /// {||x|| >= r} x {||y|| >= r}; requires c < 1.
  static DomainSpec exterior_product(double radius, double c);
  /// {(x, y) : max(||x||, ||y||) >= K}; requires c < 1.
  static DomainSpec exterior_union(double threshold, double c);
  /// {(x, y) : min(||x||, ||y||) <= K}; requires c > 1.
  static DomainSpec ball_union(double threshold, double c);
  /// Arbitrary membership predicate; axioms are only checked by sampling (validate_axioms).
  static DomainSpec custom(std::string name, PairPredicate member, double c,
                           PairSampler sampler = {});

  DomainKind kind() const { return kind_; }
  double scale() const { return c_; }
  /// Radius or threshold of the built-in kinds (0 for Full and Custom).
  double radius() const { return radius_; }
  const std::string& name() const { return name_; }
  bool is_builtin() const { return kind_ != DomainKind::Custom; }
  const PairSampler& sampler() const { return sampler_; }

  /// Same kind and radius with another scale factor (re-validated).
  DomainSpec with_scale(double c) const;

  bool contains(const ModuleVector& x, const ModuleVector& y) const;
  bool in_delta(const ModuleVector& x) const { return contains(x, x); }

  /// Norm-level membership for built-in kinds.
  bool contains_norms(double nx, double ny) const;
  bool in_delta_norm(double n) const { return contains_norms(n, n); }

  /// Delta as a closed norm interval [lo, hi] for built-in kinds (hi may be +inf).
  std::optional<std::pair<double, double>> delta_norm_range() const;

  /// True when D coincides with Delta x Delta (Full, BallProduct, ExteriorProduct).
  bool is_delta_product() const;

  std::string describe() const;

 private:
  DomainSpec(DomainKind kind, double radius, double c, std::string name);

  DomainKind kind_;
  double radius_;
  double c_;
  std::string name_;
  PairPredicate member_;
  PairSampler sampler_;
};

constexpr int kDefaultReachCap = 1'000'000;

/// c^{-n} x, computed as pow(c, -n) * x so callers reproduce the exact vector.
ModuleVector scale_down(const DomainSpec& domain, const ModuleVector& x, int n);

/// Minimal n with c^{-n} x in Delta. Throws DomainError for x = 0 and
/// DomainUnreachableError past `n_max` steps.
int reach_index(const DomainSpec& domain, const ModuleVector& x, int n_max = kDefaultReachCap);

struct AxiomViolation {
  std::string axiom;  // "scaling", "reachability", "diagonal" or "nonempty-diagonal"
  double x_norm = 0.0;
  double y_norm = 0.0;
  int n = 0;
  int m = 0;
};

struct ValidationReport {
  bool pass = true;
  bool analytic = false;
  int samples_checked = 0;
  std::optional<AxiomViolation> violation;
  std::string note;
};

/// Built-in kinds pass analytically. Custom kinds are probed with `sample_budget`
/// pairs: scaling for n, m <= 20, reachability for n, m <= 60, Delta x Delta in D.
ValidationReport validate_axioms(const DomainSpec& domain, int sample_budget, std::uint64_t seed,
                                 int d = 1, int k = 2);

/// A pair inside D. Throws DomainError if rejection sampling finds none.
std::pair<ModuleVector, ModuleVector> sample_pair(const DomainSpec& domain, Rng& rng, int d, int k);

/// `count` vectors in Delta with norms stratified (log scale) over [lo, hi] intersected with Delta.
std::vector<ModuleVector> delta_probes(const DomainSpec& domain, Rng& rng, int d, int k, int count,
                                       double lo = 1e-2, double hi = 1e2);

/// `count` vectors with norms stratified over [lo, hi], ignoring the domain.
std::vector<ModuleVector> stratified_probes(Rng& rng, int d, int k, int count, double lo = 1e-2,
                                            double hi = 1e2);

}  // namespace hcm
