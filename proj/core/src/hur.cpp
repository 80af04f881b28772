#include "hcm/hur.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <memory>

#include "hcm/errors.hpp"
#include "hcm/random.hpp"

namespace hcm {
namespace {

constexpr const char* kAnchorDefect = "additive stability: ||f(x+y) - f(x) - f(y)|| <= psi(x, y)";
constexpr const char* kAnchorChain = "additive stability: Cauchy chain partial sums";
constexpr const char* kAnchorDistance = "additive stability: ||f(x) - I(x)|| <= psi~(x)";
constexpr const char* kAnchorIsometry = "additive stability: <I(x), I(y)> = <x, y>";
constexpr const char* kAnchorSeries = "power-sum corollary: closed form of psi~";
constexpr const char* kAnchorLinearity = "additive stability: A-linearity of I (measured only)";
constexpr const char* kAnchorCross = "cross-check: restricted-domain and additive isometries agree";

ModuleVector chain_step(const ApproxMap& f, double c, const ModuleVector& x, int n) {
  return std::pow(c, static_cast<double>(n)) * f(std::pow(c, -static_cast<double>(n)) * x);
}

}  // namespace

std::vector<DefectMeasurement> additive_defect(const ApproxMap& f, const HurControl& h,
                                               const std::vector<ProbePair>& pairs, double tol) {
  std::vector<DefectMeasurement> out;
  out.reserve(pairs.size());
  for (const auto& [x, y] : pairs) {
    DefectMeasurement m;
    m.defect = vec_norm(f(x + y) - f(x) - f(y));
    m.bound = psi(h, x, y);
    m.pass = m.defect <= m.bound + tol;
    out.push_back(m);
  }
  return out;
}

Extrapolation hur_extrapolate(const ApproxMap& f, const HurControl& h, const ModuleVector& x,
                              const HurOptions& options) {
  const double nx = vec_norm(x);
  if (nx == 0.0) return {ModuleVector(f.dim(), f.k_out()), 0, 0.0};
  const double c = h.chain_scale();
  int n = 0;
  double tail = chain_tail(h, x, 0);
  while (!(tail < options.tol)) {
    if (++n > options.max_iter) {
      throw NonConvergenceError("additive chain tail above tol after max_iter steps", tail,
                                options.max_iter);
    }
    tail = chain_tail(h, x, n);
  }
  if (options.refine) {
    const double floor = DBL_EPSILON * nx;
    while (n < options.max_iter && tail > floor) {
      const double scaled = std::pow(c, -static_cast<double>(n + 1)) * nx;
      if (scaled < 1e-280 || scaled > 1e280) break;
      const double next = chain_tail(h, x, n + 1);
      if (!(next < tail)) break;
      ++n;
      tail = next;
    }
  }
  return {chain_step(f, c, x, n), n, tail};
}

ModuleVector hur_correct(const ApproxMap& f, const HurControl& h, const ModuleVector& x,
                         double tol, int max_iter) {
  HurOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  return hur_extrapolate(f, h, x, opts).value;
}

std::vector<ChainGap> chain_trace(const ApproxMap& f, const HurControl& h, const ModuleVector& x,
                                  int depth) {
  const double c = h.chain_scale();
  std::vector<ModuleVector> steps;
  steps.reserve(depth + 1);
  for (int n = 0; n <= depth; ++n) steps.push_back(chain_step(f, c, x, n));
  std::vector<ChainGap> out;
  for (int n = 1; n <= depth; ++n) {
    for (int m = 0; m < n; ++m) {
      out.push_back({m, n, vec_norm(steps[n] - steps[m]), chain_bound(h, x, m, n)});
    }
  }
  return out;
}

HurResult hur_run(const ApproxMap& f, const HurControl& h, const std::vector<ProbePair>& pairs,
                  const HurOptions& options) {
  HurResult r;
  r.branch = h.branch();
  r.isometry_eval = [f, h, options](const ModuleVector& x) {
    return hur_extrapolate(f, h, x, options).value;
  };

  CertificateAccumulator defect("additive-defect", kAnchorDefect, options.tol);
  r.defects = additive_defect(f, h, pairs, options.tol);
  for (const auto& m : r.defects) defect.add(m.defect, m.bound);

  CertificateAccumulator chain("chain", kAnchorChain, options.tol);
  CertificateAccumulator dist("distance", kAnchorDistance, options.tolerances.iso);
  CertificateAccumulator iso("isometry", kAnchorIsometry, options.tolerances.iso);
  CertificateAccumulator series("series", kAnchorSeries, options.tol);
  CertificateAccumulator lin("linearity", kAnchorLinearity, options.tolerances.iso);
  const bool power_sum = h.base().kind() == ControlKind::PowerSum;

  Rng rng(options.seed);
  for (const auto& [x, y] : pairs) {
    r.chains.push_back(chain_trace(f, h, x, options.chain_depth));
    for (const auto& g : r.chains.back()) chain.add(g.gap, g.bound);

    std::optional<ModuleVector> ix;
    std::optional<ModuleVector> iy;
    try {
      ix = hur_extrapolate(f, h, x, options).value;
      iy = hur_extrapolate(f, h, y, options).value;
    } catch (const NonConvergenceError&) {
      dist.add_indeterminate();
      iso.add_indeterminate();
      lin.add_indeterminate();
    }

    const double bound = psi_tilde(h, x).value;
    r.psi_tilde_values.push_back(bound);
    if (power_sum && vec_norm(x) > 0.0) {
      const double partial = psi_tilde_partial(h, x, options.series_terms);
      series.add(std::abs(partial - bound) / bound, 0.0);
    }
    if (!ix || !iy) {
      r.distances.push_back(-1.0);
      continue;
    }
    const double d = vec_norm(f(x) - *ix);
    r.distances.push_back(d);
    dist.add(d, bound);
    iso.add(op_norm(inner(*ix, *iy) - inner(x, y)), 0.0);

    const AlgebraElement a = random_element(rng, f.dim());
    const Complex lambda = random_complex(rng);
    try {
      const ModuleVector combo = hur_extrapolate(f, h, a * x + lambda * y, options).value;
      lin.add(vec_norm(combo - a * *ix - lambda * *iy), 0.0);
    } catch (const NonConvergenceError&) {
      lin.add_indeterminate();
    }
  }
  r.certificates = {defect.result(), chain.result(), dist.result(), iso.result()};
  r.certificates.push_back(power_sum ? series.result() : not_applicable("series", kAnchorSeries));
  r.certificates.push_back(lin.info());
  return r;
}

CrossReport cross_validate(const ApproxMap& f, const ControlSpec& phi_product,
                           const DomainSpec& domain, const HurControl& h,
                           const std::vector<ModuleVector>& probes, double tol,
                           const CorrectorOptions& corrector_options,
                           const HurOptions& hur_options) {
  const Corrector corrector(f, phi_product, domain, corrector_options);
  CertificateAccumulator acc("cross-validate", kAnchorCross, tol);
  CrossReport r;
  for (const auto& x : probes) {
    try {
      const double gap = vec_norm(corrector.extend(x) - hur_extrapolate(f, h, x, hur_options).value);
      r.max_gap = std::max(r.max_gap, gap);
      acc.add(gap, 0.0);
    } catch (const NonConvergenceError&) {
      acc.add_indeterminate();
    }
  }
  r.certificate = acc.result();
  return r;
}

}  // namespace hcm
