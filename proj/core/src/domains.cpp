#include "hcm/domains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hcm/errors.hpp"

namespace hcm {
namespace {

constexpr int kScalingProbeMax = 20;
constexpr int kReachProbeMax = 60;
constexpr int kRejectionTries = 1000;

void check_scale(double c) {
  if (!(c > 0.0) || c == 1.0 || !std::isfinite(c)) {
    throw DomainError("scale factor c must be positive, finite and different from 1");
  }
}

void check_radius(double r, const char* what) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::Full: return "full";
    case DomainKind::BallProduct: return "ball_product";
    case DomainKind::ExteriorProduct: return "exterior_product";
    case DomainKind::ExteriorUnion: return "exterior_union";
    case DomainKind::BallUnion: return "ball_union";
    case DomainKind::Custom: return "custom";
  }
  return "unknown";
}

DomainSpec::DomainSpec(DomainKind kind, double radius, double c, std::string name)
    : kind_(kind), radius_(radius), c_(c), name_(std::move(name)) {
  check_scale(c);
  switch (kind) {
    case DomainKind::BallProduct:
    case DomainKind::BallUnion:
      check_radius(radius, "radius");
      // Scaling by c^{-n} must shrink vectors to stay inside a ball.
      if (c < 1.0) throw DomainError(to_string(kind) + " requires c > 1");
      break;
    case DomainKind::ExteriorProduct:
    case DomainKind::ExteriorUnion:
      check_radius(radius, "radius");
      if (c > 1.0) throw DomainError(to_string(kind) + " requires c < 1");
      break;
    case DomainKind::Full:
    case DomainKind::Custom:
      break;
  }
}

DomainSpec DomainSpec::full(double c) { return {DomainKind::Full, 0.0, c, "full"}; }

DomainSpec DomainSpec::ball_product(double radius, double c) {
  return {DomainKind::BallProduct, radius, c, "ball_product"};
}

DomainSpec DomainSpec::exterior_product(double radius, double c) {
  return {DomainKind::ExteriorProduct, radius, c, "exterior_product"};
}

DomainSpec DomainSpec::exterior_union(double threshold, double c) {
  return {DomainKind::ExteriorUnion, threshold, c, "exterior_union"};
}

DomainSpec DomainSpec::ball_union(double threshold, double c) {
  return {DomainKind::BallUnion, threshold, c, "ball_union"};
}

DomainSpec DomainSpec::custom(std::string name, PairPredicate member, double c,
                              PairSampler sampler) {
  if (!member) throw DomainError("custom domain needs a membership predicate");
  DomainSpec spec(DomainKind::Custom, 0.0, c, std::move(name));
  spec.member_ = std::move(member);
  spec.sampler_ = std::move(sampler);
  return spec;
}

DomainSpec DomainSpec::with_scale(double c) const {
  DomainSpec copy(kind_, radius_, c, name_);
  copy.member_ = member_;
  copy.sampler_ = sampler_;
  return copy;
}

bool DomainSpec::contains_norms(double nx, double ny) const {
  switch (kind_) {
    case DomainKind::Full: return true;
    case DomainKind::BallProduct: return nx <= radius_ && ny <= radius_;
    case DomainKind::ExteriorProduct: return nx >= radius_ && ny >= radius_;
    case DomainKind::ExteriorUnion: return std::max(nx, ny) >= radius_;
    case DomainKind::BallUnion: return std::min(nx, ny) <= radius_;
    case DomainKind::Custom: break;
  }
  throw DomainError("norm-level membership is undefined for custom domains");
}

bool DomainSpec::contains(const ModuleVector& x, const ModuleVector& y) const {
  if (!x.same_shape(y)) throw DimensionError("domain membership for mismatched vectors");
  if (kind_ == DomainKind::Custom) return member_(x, y);
  if (kind_ == DomainKind::Full) return true;
  return contains_norms(vec_norm(x), vec_norm(y));
}

std::optional<std::pair<double, double>> DomainSpec::delta_norm_range() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (kind_) {
    case DomainKind::Full: return std::pair{0.0, inf};
    case DomainKind::BallProduct:
    case DomainKind::BallUnion: return std::pair{0.0, radius_};
    case DomainKind::ExteriorProduct:
    case DomainKind::ExteriorUnion: return std::pair{radius_, inf};
    case DomainKind::Custom: break;
  }
  return std::nullopt;
}

bool DomainSpec::is_delta_product() const {
  return kind_ == DomainKind::Full || kind_ == DomainKind::BallProduct ||
         kind_ == DomainKind::ExteriorProduct;
}

std::string DomainSpec::describe() const {
  std::ostringstream os;
  os << to_string(kind_);
  if (kind_ == DomainKind::Custom) os << "(" << name_ << ")";
  if (radius_ > 0.0) os << "(" << radius_ << ")";
  os << ", c=" << c_;
  return os.str();
}

ModuleVector scale_down(const DomainSpec& domain, const ModuleVector& x, int n) {
  return std::pow(domain.scale(), -static_cast<double>(n)) * x;
}

int reach_index(const DomainSpec& domain, const ModuleVector& x, int n_max) {
  if (vec_norm(x) == 0.0) throw DomainError("reach index is undefined for the zero vector");
  for (int n = 0; n <= n_max; ++n) {
    const double factor = std::pow(domain.scale(), -static_cast<double>(n));
    if (factor == 0.0 || !std::isfinite(factor)) break;
    if (domain.in_delta(factor * x)) return n;
  }
  throw DomainUnreachableError("reach index exceeded the iteration cap for " + domain.describe());
}

namespace {

ValidationReport fail(ValidationReport report, AxiomViolation v, std::string note) {
  report.pass = false;
  report.violation = std::move(v);
  report.note = std::move(note);
  return report;
}

}  // namespace

ValidationReport validate_axioms(const DomainSpec& domain, int sample_budget, std::uint64_t seed,
                                 int d, int k) {
  ValidationReport report;
  if (domain.is_builtin()) {
    report.analytic = true;
    report.note = "built-in kind with compatible scale factor";
    return report;
  }
  Rng rng(seed);
  const double c = domain.scale();
  bool delta_seen = false;
  std::vector<ModuleVector> delta_points;

  for (int s = 0; s < std::max(sample_budget, 1); ++s) {
    std::pair<ModuleVector, ModuleVector> pair{ModuleVector(d, k), ModuleVector(d, k)};
    try {
      pair = sample_pair(domain, rng, d, k);
    } catch (const DomainError&) {
      return fail(report, {"nonempty-diagonal"}, "no sampled pair lies in D");
    }
    const auto& [x, y] = pair;
    ++report.samples_checked;
    for (int n = 0; n <= kScalingProbeMax; ++n) {
      for (int m = 0; m <= kScalingProbeMax; ++m) {
        const ModuleVector xs = std::pow(c, -static_cast<double>(n)) * x;
        const ModuleVector ys = std::pow(c, -static_cast<double>(m)) * y;
        if (!domain.contains(xs, ys)) {
          return fail(report, {"scaling", vec_norm(x), vec_norm(y), n, m},
                      "(c^-n x, c^-m y) left D");
        }
      }
    }
    for (const ModuleVector* v : {&x, &y}) {
      if (domain.in_delta(*v)) {
        delta_seen = true;
        delta_points.push_back(*v);
      }
    }

    // Reachability from a fresh random nonzero pair.
    const ModuleVector u = random_vector_with_norm(rng, d, k, log_uniform(rng, 1e-3, 1e3));
    const ModuleVector v = random_vector_with_norm(rng, d, k, log_uniform(rng, 1e-3, 1e3));
    bool reached = false;
    for (int n = 0; n <= kReachProbeMax && !reached; ++n) {
      for (int m = 0; m <= kReachProbeMax && !reached; ++m) {
        const ModuleVector us = std::pow(c, -static_cast<double>(n)) * u;
        const ModuleVector vs = std::pow(c, -static_cast<double>(m)) * v;
        reached = domain.contains(us, vs);
        if (reached && n == m && domain.in_delta(us)) {
          delta_seen = true;
          delta_points.push_back(us);
        }
      }
    }
    if (!reached) {
      return fail(report, {"reachability", vec_norm(u), vec_norm(v), kReachProbeMax, kReachProbeMax},
                  "no (n, m) <= 60 brings the pair into D");
    }
  }
  if (!delta_seen) return fail(report, {"nonempty-diagonal"}, "no sampled point lies in Delta");
  for (std::size_t i = 0; i < delta_points.size(); ++i) {
    const auto& a = delta_points[i];
    const auto& b = delta_points[(i + 1) % delta_points.size()];
    if (!domain.contains(a, b)) {
      return fail(report, {"diagonal", vec_norm(a), vec_norm(b)}, "Delta x Delta not inside D");
    }
  }
  report.note = "sampled check only";
  return report;
}

std::pair<ModuleVector, ModuleVector> sample_pair(const DomainSpec& domain, Rng& rng, int d, int k) {
  const double r = domain.radius();
  auto vec = [&](double lo, double hi) {
    return random_vector_with_norm(rng, d, k, log_uniform(rng, lo, hi));
  };
  switch (domain.kind()) {
    case DomainKind::Full: {
      ModuleVector x = vec(1e-2, 1e2);
      return {x, vec(1e-2, 1e2)};
    }
    case DomainKind::BallProduct: {
      ModuleVector x = vec(1e-3 * r, r);
      return {x, vec(1e-3 * r, r)};
    }
    case DomainKind::ExteriorProduct: {
      ModuleVector x = vec(r, 1e3 * r);
      return {x, vec(r, 1e3 * r)};
    }
    case DomainKind::ExteriorUnion:
    case DomainKind::BallUnion: {
      const bool exterior = domain.kind() == DomainKind::ExteriorUnion;
      ModuleVector anchor = exterior ? vec(r, 1e3 * r) : vec(1e-3 * r, r);
      ModuleVector other = vec(1e-3 * r, 1e3 * r);
      if (std::uniform_int_distribution<int>(0, 1)(rng) == 0) return {anchor, other};
      return {other, anchor};
    }
    case DomainKind::Custom:
      break;
  }
  if (domain.sampler()) return domain.sampler()(rng, d, k);
  for (int t = 0; t < kRejectionTries; ++t) {
    ModuleVector x = vec(1e-3, 1e3);
    ModuleVector y = vec(1e-3, 1e3);
    if (domain.contains(x, y)) return {x, y};
  }
  throw DomainError("rejection sampling found no pair in " + domain.describe());
}

std::vector<ModuleVector> stratified_probes(Rng& rng, int d, int k, int count, double lo,
                                            double hi) {
  std::vector<ModuleVector> out;
  out.reserve(static_cast<std::size_t>(count));
  for (double n : stratified_norms(rng, count, lo, hi)) {
    out.push_back(random_vector_with_norm(rng, d, k, n));
  }
  return out;
}

std::vector<ModuleVector> delta_probes(const DomainSpec& domain, Rng& rng, int d, int k, int count,
                                       double lo, double hi) {
  if (auto range = domain.delta_norm_range()) {
    const double a = std::max(lo, range->first);
    const double b = std::min(hi, range->second);
    if (!(a <= b) || b <= 0.0) {
      throw DomainError("probe norm window does not meet Delta of " + domain.describe());
    }
    if (a == b) {
      std::vector<ModuleVector> out;
      for (int i = 0; i < count; ++i) out.push_back(random_vector_with_norm(rng, d, k, a));
      return out;
    }
    return stratified_probes(rng, d, k, count, std::max(a, 1e-300), b);
  }
  std::vector<ModuleVector> out;
  int tries = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++tries > count * kRejectionTries) {
      throw DomainError("Delta of " + domain.describe() + " could not be sampled (is it empty?)");
    }
    ModuleVector x = random_vector_with_norm(rng, d, k, log_uniform(rng, lo, hi));
    if (domain.in_delta(x)) out.push_back(std::move(x));
  }
  return out;
}

}  // namespace hcm
