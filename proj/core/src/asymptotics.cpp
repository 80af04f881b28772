#include "hcm/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "hcm/errors.hpp"
#include "hcm/random.hpp"

namespace hcm {
namespace {

constexpr const char* kAnchorHypothesis = "asymptotic orthogonality: defect <= eps ||x||^p ||y||^p";
constexpr const char* kAnchorRatio = "asymptotic closeness: ||f(x) - I_0(x)|| / ||x||^p < sqrt(eps)";
constexpr const char* kAnchorBase = "asymptotic closeness: ||f(x) - I_0(x)|| <= ||x||^p beyond K_0";
constexpr const char* kAnchorCollapse = "asymptotic closeness: I_eps = I_0";
constexpr const char* kAnchorShells = "asymptotic closeness at zero: shell ratios nonincreasing";

bool max_mode(AsymptoticMode m) { return m == AsymptoticMode::MaxNorm; }

ModuleVector unit_direction(Rng& rng, int d, int k) {
  ModuleVector v = random_vector(rng, d, k);
  return (1.0 / vec_norm(v)) * v;
}

// Shell s covers [lo, hi] of the log-uniform span on the far side of the threshold.
std::pair<double, double> shell_bounds(AsymptoticMode mode, double threshold, const ShellGrid& g,
                                       int s) {
  const double l0 = std::log(threshold);
  const double step = std::log(g.span) / g.shells;
  const double sign = max_mode(mode) ? 1.0 : -1.0;
  const double a = std::exp(l0 + sign * step * s);
  const double b = std::exp(l0 + sign * step * (s + 1));
  return {std::min(a, b), std::max(a, b)};
}

double pow_norm(double r, double p) { return std::pow(r, p); }

Corrector make_corrector(const ApproxMap& f, const AsymptoticScenario& s, double eps, double k,
                         const CorrectorOptions& options) {
  const ControlSpec phi = ControlSpec::power_product(eps, s.p, s.p);
  const DomainSpec domain = max_mode(s.mode) ? DomainSpec::exterior_union(k, 0.5)
                                             : DomainSpec::ball_union(k, 2.0);
  return Corrector(f, phi, domain, options);
}

}  // namespace

std::string to_string(AsymptoticMode m) { return max_mode(m) ? "max_norm" : "min_norm"; }

void AsymptoticScenario::validate() const {
  if (max_mode(mode) && !(p > 0.0 && p < 1.0)) {
    throw ControlError("max-norm asymptotics need 0 < p < 1");
  }
  if (!max_mode(mode) && !(p > 1.0)) throw ControlError("min-norm asymptotics need p > 1");
  if (!k_map) throw ControlError("asymptotic scenario needs a threshold map K(eps)");
  if (epsilon_grid.empty()) throw ControlError("epsilon grid is empty");
  double prev_k = 0.0;
  for (std::size_t i = 0; i < epsilon_grid.size(); ++i) {
    const double eps = epsilon_grid[i];
    if (!(eps > 0.0)) throw ControlError("epsilon values must be positive");
    if (i > 0 && !(eps < epsilon_grid[i - 1])) {
      throw ControlError("epsilon grid must be strictly decreasing");
    }
    const double k = k_map(eps);
    if (!(k > 0.0) || !std::isfinite(k)) throw ControlError("K(eps) must be positive and finite");
    if (i > 0 && (max_mode(mode) ? k < prev_k : k > prev_k)) {
      throw ControlError("K(eps) must move outward as eps decreases");
    }
    prev_k = k;
  }
}

double AsymptoticScenario::base_threshold() const {
  if (k0 > 0.0) return k0;
  const double k = k_map ? k_map(1.0) : 0.0;
  if (!(k > 0.0) || !std::isfinite(k)) return 1.0;
  return max_mode(mode) ? std::max(k, 1.0) : std::min(k, 1.0);
}

double hypothesis_ratio(const ApproxMap& f, double p, AsymptoticMode mode, double threshold,
                        const ShellGrid& grid, std::uint64_t seed) {
  Rng rng(seed);
  double sup = 0.0;
  // Partners reach far inside the threshold, where the decay of f gives no help.
  const double lo_all = max_mode(mode) ? threshold * 1e-8 : threshold / grid.span;
  const double hi_all = max_mode(mode) ? threshold * grid.span : threshold * 1e8;
  for (int s = 0; s < grid.shells; ++s) {
    const auto [lo, hi] = shell_bounds(mode, threshold, grid, s);
    for (int j = 0; j < grid.directions; ++j) {
      const ModuleVector x = log_uniform(rng, lo, hi) * unit_direction(rng, f.dim(), f.k_in());
      // x alone puts the pair in the region, so y may lie on either side.
      const ModuleVector y =
          log_uniform(rng, lo_all, hi_all) * unit_direction(rng, f.dim(), f.k_in());
      const ModuleVector fx = f(x);
      const double nx = pow_norm(vec_norm(x), p);
      const double ny = pow_norm(vec_norm(y), p);
      sup = std::max(sup, op_norm(inner(fx, f(y)) - inner(x, y)) / (nx * ny));
      sup = std::max(sup, op_norm(inner(fx, fx) - inner(x, x)) / (nx * nx));
    }
  }
  return sup;
}

HypothesisReport verify_asymptotic_hypothesis(const ApproxMap& f, const AsymptoticScenario& s,
                                              const ShellGrid& grid, std::uint64_t seed) {
  s.validate();
  HypothesisReport r;
  CertificateAccumulator acc("asymptotic-hypothesis", kAnchorHypothesis, 0.0);
  for (const double eps : s.epsilon_grid) {
    EpsilonRow row;
    row.eps = eps;
    row.threshold = s.k_map(eps);
    row.measured = hypothesis_ratio(f, s.p, s.mode, row.threshold, grid, seed);
    row.bound = eps;
    row.status = row.measured <= eps ? Status::Pass : Status::Fail;
    acc.add(row.measured, row.bound);
    r.rows.push_back(row);
  }
  r.certificate = acc.result();
  r.pass = r.certificate.status == Status::Pass;
  return r;
}

double estimate_threshold(const ApproxMap& f, double p, AsymptoticMode mode, double eps,
                          const ShellGrid& grid, std::uint64_t seed) {
  const bool mx = max_mode(mode);
  auto ok = [&](double k) { return hypothesis_ratio(f, p, mode, k, grid, seed) <= eps; };
  double lo = std::log(1e-8);
  double hi = std::log(1e12);
  // MaxNorm: small K is bad, large K is good. MinNorm: the reverse.
  double good = mx ? hi : lo;
  double bad = mx ? lo : hi;
  if (!ok(std::exp(good))) return mx ? std::numeric_limits<double>::infinity() : 0.0;
  if (ok(std::exp(bad))) return std::exp(bad);
  for (int i = 0; i < 48; ++i) {
    const double mid = 0.5 * (good + bad);
    (ok(std::exp(mid)) ? good : bad) = mid;
  }
  return mx ? 2.0 * std::exp(good) : 0.5 * std::exp(good);
}

ClosenessReport asymptotic_closeness(const ApproxMap& f, const AsymptoticScenario& s,
                                     const std::vector<ModuleVector>& probes, double tol,
                                     const ShellGrid& grid, std::uint64_t seed,
                                     const CorrectorOptions& options) {
  s.validate();
  ClosenessReport r;
  const double k0 = s.base_threshold();
  auto base = std::make_shared<Corrector>(make_corrector(f, s, 1.0, k0, options));
  r.isometry_eval = [base](const ModuleVector& x) { return base->extend(x); };

  auto ratio_at = [&](const ModuleVector& x) {
    return vec_norm(f(x) - base->extend(x)) / pow_norm(vec_norm(x), s.p);
  };

  CertificateAccumulator ratio("asymptotic-ratio", kAnchorRatio, tol);
  CertificateAccumulator bound("asymptotic-base-bound", kAnchorBase, tol);
  CertificateAccumulator collapse("asymptotic-collapse", kAnchorCollapse, tol);

  Rng rng(seed);
  for (int sh = 0; sh < grid.shells; ++sh) {
    const auto [lo, hi] = shell_bounds(s.mode, k0, grid, sh);
    for (int j = 0; j < grid.directions; ++j) {
      const ModuleVector x = log_uniform(rng, lo, hi) * unit_direction(rng, f.dim(), f.k_in());
      const double q = ratio_at(x);
      r.base_bound_ratio = std::max(r.base_bound_ratio, q);
      bound.add(q, 1.0);
    }
  }

  for (const double eps : s.epsilon_grid) {
    EpsilonRow row;
    row.eps = eps;
    row.threshold = s.k_map(eps);
    row.bound = std::sqrt(eps);
    for (int sh = 0; sh < grid.shells; ++sh) {
      const auto [lo, hi] = shell_bounds(s.mode, row.threshold, grid, sh);
      for (int j = 0; j < grid.directions; ++j) {
        const ModuleVector x = log_uniform(rng, lo, hi) * unit_direction(rng, f.dim(), f.k_in());
        row.measured = std::max(row.measured, ratio_at(x));
      }
    }
    row.status = row.measured <= row.bound + tol ? Status::Pass : Status::Fail;
    ratio.add(row.measured, row.bound);
    r.rows.push_back(row);

    const Corrector at_eps = make_corrector(f, s, eps, row.threshold, options);
    for (const auto& x : probes) {
      try {
        const double gap = vec_norm(at_eps.extend(x) - base->extend(x));
        r.collapse_gap = std::max(r.collapse_gap, gap);
        collapse.add(gap, 0.0);
      } catch (const NonConvergenceError&) {
        collapse.add_indeterminate();
      }
    }
  }

  r.certificates = {ratio.result(), bound.result(), collapse.result()};

  if (!max_mode(s.mode)) {
    // Shrinking shells [r/2, r] from K_0 down by the grid span.
    CertificateAccumulator mono("asymptotic-shells", kAnchorShells, tol);
    const int count = static_cast<int>(std::ceil(std::log2(grid.span)));
    double r_hi = k0;
    for (int i = 0; i < count; ++i, r_hi *= 0.5) {
      double sup = 0.0;
      for (int j = 0; j < grid.directions; ++j) {
        const ModuleVector x =
            log_uniform(rng, 0.5 * r_hi, r_hi) * unit_direction(rng, f.dim(), f.k_in());
        sup = std::max(sup, ratio_at(x));
      }
      if (!r.shell_ratios.empty()) mono.add(sup, r.shell_ratios.back());
      r.shell_ratios.push_back(sup);
    }
    Certificate c = mono.result();
    r.shells_monotone = c.status == Status::Pass;
    r.certificates.push_back(c);
  }
  return r;
}

}  // namespace hcm
