#include "hcm/corrector.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <memory>

#include "hcm/errors.hpp"
#include "hcm/random.hpp"

namespace hcm {
namespace {

constexpr const char* kAnchorIsometry = "stability theorem: <I(x), I(y)> = <x, y>";
constexpr const char* kAnchorDistance = "stability theorem: ||f(x) - I(x)|| <= sqrt(phi(x, x)) on Delta";
constexpr const char* kAnchorOrthogonality = "stability theorem: <T(x), I(y)> = 0";
constexpr const char* kAnchorCross = "stability theorem: <f(x), I(y)> = <x, y> on D";
constexpr const char* kAnchorUniqueness = "stability theorem: uniqueness of I";
constexpr const char* kAnchorSuper = "superstability: f = I on Delta in equal dimensions";
constexpr const char* kAnchorHomogeneity = "homogeneity: f(cx) = c f(x) implies I = f";

constexpr int kTailWindow = 16;
constexpr double kScaleFloor = 1e-280;
constexpr double kScaleCeil = 1e280;

}  // namespace

Corrector::Corrector(ApproxMap f, ControlSpec phi, DomainSpec domain, CorrectorOptions options)
    : f_(std::move(f)),
      phi_(std::move(phi)),
      domain_(std::move(domain)),
      options_(options),
      verdict_(vanishing_verdict(phi_, domain_, VanishingProbe{f_.dim(), f_.k_in()})) {
  if (verdict_.verdict == Verdict::Fails) {
    throw VanishingError("control " + phi_.describe() + " fails the vanishing condition on " +
                         domain_.describe() + ": " + verdict_.reason);
  }
}

ModuleVector Corrector::step(const ModuleVector& x, int n) const {
  const double c = domain_.scale();
  const double up = std::pow(c, static_cast<double>(n));
  const double down = std::pow(c, -static_cast<double>(n));
  return up * f_(down * x);
}

double Corrector::tail_bound(const ModuleVector& x, int n) const {
  const double nx = vec_norm(x);
  const double log_c = std::log(domain_.scale());
  // c^{i+j} phi(c^-i x, c^-j x), evaluated in log space so c^{2n} cannot overflow.
  auto weighted = [&](int i, int j) {
    const double a = std::pow(domain_.scale(), -static_cast<double>(i)) * nx;
    const double b = std::pow(domain_.scale(), -static_cast<double>(j)) * nx;
    const double v = phi_.from_norms(a, b);
    if (v == 0.0) return 0.0;
    return std::exp(log_c * (i + j) + std::log(v));
  };
  const double own = weighted(n, n);
  double sup = 0.0;
  for (int m = n; m <= n + kTailWindow; ++m) {
    sup = std::max(sup, own + weighted(m, m) + 2.0 * weighted(n, m));
  }
  return std::sqrt(sup);
}

Extrapolation Corrector::extrapolate_on_delta(const ModuleVector& x) const {
  if (!domain_.in_delta(x)) throw DomainError("extrapolate_on_delta called outside Delta");
  const double nx = vec_norm(x);
  if (nx == 0.0) return {ModuleVector(f_.dim(), f_.k_out()), 0, 0.0};

  if (!phi_.is_builtin()) {
    ModuleVector prev = step(x, 0);
    int below = 0;
    double gap = 0.0;
    for (int n = 1; n <= options_.max_iter; ++n) {
      ModuleVector cur = step(x, n);
      gap = vec_norm(cur - prev);
      below = gap < options_.tol ? below + 1 : 0;
      if (below >= 3) return {std::move(cur), n, gap};
      prev = std::move(cur);
    }
    throw NonConvergenceError("extrapolation did not settle within max_iter", gap,
                              options_.max_iter);
  }

  int n = 0;
  double bound = tail_bound(x, 0);
  while (!(bound < options_.tol)) {
    if (++n > options_.max_iter) {
      throw NonConvergenceError("Cauchy tail bound above tol after max_iter steps", bound,
                                options_.max_iter);
    }
    bound = tail_bound(x, n);
  }
  if (options_.refine) {
    const double floor = DBL_EPSILON * nx;
    while (n < options_.max_iter && bound > floor) {
      const double scaled = std::pow(domain_.scale(), -static_cast<double>(n + 1)) * nx;
      if (scaled < kScaleFloor || scaled > kScaleCeil) break;
      const double next = tail_bound(x, n + 1);
      if (!(next < bound)) break;
      ++n;
      bound = next;
    }
  }
  return {step(x, n), n, bound};
}

Extrapolation Corrector::extend_detailed(const ModuleVector& x) const {
  if (vec_norm(x) == 0.0) return {ModuleVector(f_.dim(), f_.k_out()), 0, 0.0};
  const int n = reach_index(domain_, x, options_.reach_cap);
  Extrapolation e = extrapolate_on_delta(scale_down(domain_, x, n));
  if (n > 0) {
    const double up = std::pow(domain_.scale(), static_cast<double>(n));
    e.value = up * e.value;
    e.error_bound *= up;
  }
  return e;
}

std::vector<CauchyStep> Corrector::cauchy_trace(const ModuleVector& x, int steps) const {
  std::vector<CauchyStep> out;
  const double nx = vec_norm(x);
  const double c = domain_.scale();
  ModuleVector prev = step(x, 0);
  for (int n = 0; n < steps; ++n) {
    ModuleVector next = step(x, n + 1);
    CauchyStep s;
    s.n = n;
    s.gap = vec_norm(next - prev);
    if (phi_.is_builtin()) {
      const double a = std::pow(c, -static_cast<double>(n)) * nx;
      const double b = std::pow(c, -static_cast<double>(n + 1)) * nx;
      const double e = std::pow(c, 2.0 * n) * phi_.from_norms(a, a) +
                       std::pow(c, 2.0 * (n + 1)) * phi_.from_norms(b, b) +
                       2.0 * std::pow(c, 2.0 * n + 1) * phi_.from_norms(a, b);
      s.bound = std::sqrt(e);
    } else {
      const ModuleVector xa = std::pow(c, -static_cast<double>(n)) * x;
      const ModuleVector xb = std::pow(c, -static_cast<double>(n + 1)) * x;
      s.bound = std::sqrt(std::pow(c, 2.0 * n) * phi_(xa, xa) +
                          std::pow(c, 2.0 * (n + 1)) * phi_(xb, xb) +
                          2.0 * std::pow(c, 2.0 * n + 1) * phi_(xa, xb));
    }
    out.push_back(s);
    prev = std::move(next);
  }
  return out;
}

CorrectionResult Corrector::decompose(const std::vector<ProbePair>& probes) const {
  const double tol = options_.tolerances.iso;
  CertificateAccumulator iso("isometry", kAnchorIsometry, tol);
  CertificateAccumulator dist("distance", kAnchorDistance, tol);
  CertificateAccumulator orth("orthogonality", kAnchorOrthogonality, tol);
  CertificateAccumulator cross("cross-identity", kAnchorCross, tol);

  CorrectionResult result;
  auto self = std::make_shared<Corrector>(*this);
  result.isometry_eval = [self](const ModuleVector& x) { return self->extend(x); };
  result.residual_eval = [self](const ModuleVector& x) { return self->map()(x) - self->extend(x); };

  auto try_extend = [&](const ModuleVector& v) -> std::optional<Extrapolation> {
    try {
      return extend_detailed(v);
    } catch (const NonConvergenceError&) {
      return std::nullopt;
    } catch (const DomainUnreachableError&) {
      return std::nullopt;
    }
  };

  for (const auto& [x, y] : probes) {
    const auto ix = try_extend(x);
    const auto iy = try_extend(y);
    result.iterations.push_back(ix ? ix->iterations : -1);
    const bool in_d = domain_.contains(x, y);
    if (!ix || !iy) {
      iso.add_indeterminate();
      if (in_d) {
        orth.add_indeterminate();
        cross.add_indeterminate();
      }
      if (!ix && domain_.in_delta(x)) dist.add_indeterminate();
      if (!iy && domain_.in_delta(y)) dist.add_indeterminate();
    }
    const ModuleVector fx = f_(x);
    if (ix && domain_.in_delta(x)) dist.add(vec_norm(fx - ix->value), std::sqrt(phi_(x, x)));
    if (iy && domain_.in_delta(y)) {
      dist.add(vec_norm(f_(y) - iy->value), std::sqrt(phi_(y, y)));
    }
    if (!ix || !iy) continue;
    iso.add(op_norm(inner(ix->value, iy->value) - inner(x, y)), 0.0);
    if (in_d) {
      orth.add(op_norm(inner(fx - ix->value, iy->value)), 0.0);
      cross.add(op_norm(inner(fx, iy->value) - inner(x, y)), 0.0);
    }
  }
  result.certificates = {iso.result(), dist.result(), orth.result(), cross.result()};
  return result;
}

std::vector<ProbePair> chain_pairs(const std::vector<ModuleVector>& points) {
  std::vector<ProbePair> out;
  out.reserve(points.size() * 2);
  for (std::size_t i = 0; i < points.size(); ++i) {
    out.emplace_back(points[i], points[(i + 1) % points.size()]);
    out.emplace_back(points[i], points[i]);
  }
  return out;
}

ModuleVector extrapolate_on_delta(const ApproxMap& f, const ControlSpec& phi,
                                  const DomainSpec& domain, const ModuleVector& x, double tol,
                                  int max_iter) {
  CorrectorOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  return Corrector(f, phi, domain, opts).extrapolate_on_delta(x).value;
}

ModuleVector extend(const ApproxMap& f, const ControlSpec& phi, const DomainSpec& domain,
                    const ModuleVector& x, double tol, int max_iter) {
  CorrectorOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  return Corrector(f, phi, domain, opts).extend(x);
}

CorrectionResult decompose(const ApproxMap& f, const ControlSpec& phi, const DomainSpec& domain,
                           const std::vector<ProbePair>& probes, const CorrectorOptions& options) {
  return Corrector(f, phi, domain, options).decompose(probes);
}

Matrix materialize(const Corrector& corrector, CorrectionResult& result, int checks,
                   std::uint64_t seed) {
  const ApproxMap& f = corrector.map();
  const int d = f.dim();
  const double tol = corrector.options().tolerances.iso;
  Matrix coeffs(static_cast<Eigen::Index>(f.k_in()) * d, static_cast<Eigen::Index>(f.k_out()) * d);
  for (int i = 0; i < f.k_in(); ++i) {
    coeffs.middleRows(static_cast<Eigen::Index>(i) * d, d) =
        corrector.extend(generator(d, f.k_in(), i)).blocks();
  }

  Rng rng(seed);
  double worst = 0.0;
  for (int t = 0; t < checks; ++t) {
    const AlgebraElement a = random_element(rng, d);
    const Complex lambda = random_complex(rng);
    const ModuleVector x = random_vector(rng, d, f.k_in());
    const ModuleVector y = random_vector(rng, d, f.k_in());
    const ModuleVector z = random_vector(rng, d, f.k_in());
    const ModuleVector combo = a * x + lambda * y + z;
    const ModuleVector lhs = corrector.extend(combo);
    const ModuleVector ix = corrector.extend(x);
    const ModuleVector rhs = a * ix + lambda * corrector.extend(y) + corrector.extend(z);
    worst = std::max(worst, vec_norm(lhs - rhs));
    worst = std::max(worst, vec_norm(ix - x.apply(coeffs)));
  }
  if (worst > tol) {
    throw LinearityError("recovered map is not A-linear within tol_iso (residual " +
                         std::to_string(worst) + ")");
  }
  result.materialized = coeffs;
  return coeffs;
}

Report check_uniqueness(const ApproxMap& f, const ControlSpec& phi, const DomainSpec& domain,
                        double c1, double c2, const std::vector<ModuleVector>& probes,
                        const CorrectorOptions& options) {
  const Corrector first(f, phi, domain.with_scale(c1), options);
  const Corrector second(f, phi, domain.with_scale(c2), options);
  CertificateAccumulator acc("uniqueness", kAnchorUniqueness, options.tolerances.iso);
  for (const auto& x : probes) {
    try {
      acc.add(vec_norm(first.extend(x) - second.extend(x)), 0.0);
    } catch (const NonConvergenceError&) {
      acc.add_indeterminate();
    }
  }
  Report r;
  r.certificate = acc.result();
  r.max_value = r.certificate.measured;
  r.pass = r.certificate.status == Status::Pass;
  return r;
}

Report superstability_check(const ApproxMap& f, const ControlSpec& phi, const DomainSpec& domain,
                            const std::vector<ModuleVector>& probes,
                            const CorrectorOptions& options) {
  Report r;
  if (f.k_in() != f.k_out()) {
    r.applicable = false;
    r.certificate = not_applicable("superstability", kAnchorSuper);
    return r;
  }
  const Corrector corrector(f, phi, domain, options);
  CertificateAccumulator acc("superstability", kAnchorSuper, options.tolerances.iso);
  for (const auto& x : probes) {
    if (!domain.in_delta(x)) continue;
    try {
      acc.add(vec_norm(f(x) - corrector.extend(x)), 0.0);
    } catch (const NonConvergenceError&) {
      acc.add_indeterminate();
    }
  }
  r.certificate = acc.result();
  r.max_value = r.certificate.measured;
  r.pass = r.certificate.status == Status::Pass;
  return r;
}

HomogeneityReport homogeneity_shortcut(const ApproxMap& f, double c,
                                       const std::vector<ModuleVector>& probes, double tol,
                                       int iterations) {
  HomogeneityReport r;
  r.homogeneous = true;
  for (const auto& x : probes) {
    const ModuleVector fx = f(x);
    const ModuleVector cfx = c * fx;
    const double defect = vec_norm(f(c * x) - cfx);
    r.max_homogeneity_defect = std::max(r.max_homogeneity_defect, defect);
    if (defect > tol * std::max(1.0, vec_norm(cfx))) r.homogeneous = false;
  }
  CertificateAccumulator acc("homogeneity", kAnchorHomogeneity, tol);
  if (!r.homogeneous) {
    r.certificate = not_applicable("homogeneity", kAnchorHomogeneity);
    return r;
  }
  for (const auto& x : probes) {
    const ModuleVector fx = f(x);
    double worst = 0.0;
    for (int n = 1; n <= iterations; ++n) {
      const ModuleVector fn = std::pow(c, static_cast<double>(n)) *
                              f(std::pow(c, -static_cast<double>(n)) * x);
      worst = std::max(worst, vec_norm(fn - fx));
    }
    r.max_deviation = std::max(r.max_deviation, worst);
    acc.add(worst, 0.0);
  }
  r.certificate = acc.result();
  return r;
}

}  // namespace hcm
