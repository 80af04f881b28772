#include "hcm/fixtures.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "hcm/errors.hpp"
#include "hcm/random.hpp"

namespace hcm {
namespace {

constexpr int kAuditBudget = 256;
constexpr double kTruthTol = 1e-12;

/// Phase theta(x) = arg tr<x, w> for a seeded direction w; depends on the direction of x only.
struct SeededPhase {
  ModuleVector w;

  Complex operator()(const ModuleVector& x) const {
    const Complex t = inner(x, w).matrix().trace();
    const double mag = std::abs(t);
    return mag > 0.0 ? t / mag : Complex(1.0, 0.0);
  }
};

/// [s 1_d | x_1 | ... | x_k] for a scalar s.
ModuleVector prepend_scalar(Complex s, const ModuleVector& x) {
  const int d = x.dim();
  Matrix out(d, x.blocks().cols() + d);
  out.leftCols(d) = Matrix::Identity(d, d) * s;
  out.rightCols(x.blocks().cols()) = x.blocks();
  return ModuleVector::from_blocks(std::move(out));
}

/// The shift I(x) = (0, x_1, ..., x_k) as a (k d) x ((k+1) d) coefficient matrix.
Matrix shift_coeffs(int d, int k) {
  Matrix b = Matrix::Zero(static_cast<Eigen::Index>(k) * d, static_cast<Eigen::Index>(k + 1) * d);
  b.rightCols(static_cast<Eigen::Index>(k) * d) = Matrix::Identity(k * d, k * d);
  return b;
}

void certify_truth(const Matrix& coeffs) {
  const Matrix gram = coeffs * coeffs.adjoint();
  const double err = op_norm(Matrix(gram - Matrix::Identity(gram.rows(), gram.cols())));
  if (err > kTruthTol) throw FixtureError("stored isometry is not inner-product preserving");
}

void require_shift_dims(const FixtureSpec& spec) {
  if (spec.k_out != spec.k_in + 1) throw FixtureError("tail-shift fixtures need k_out = k_in + 1");
}

double diagonal_size(const ControlSpec& control, const ModuleVector& x) {
  return std::sqrt(control(x, x));
}

struct Built {
  MapEvaluator eval;
  Matrix coeffs;
  ControlSpec control;
  DomainSpec domain;
  std::string name;
};

Built build_tail_shift(const FixtureSpec& spec, const GProfile& profile, Rng& rng) {
  require_shift_dims(spec);
  const ControlSpec control = profile.control();
  if (!control.diagonal_dominated()) {
    throw FixtureError("tail-shift profile " + control.describe() +
                       " is not admissible: |g(x)||g(y)| exceeds phi(x, y) off the diagonal");
  }
  if (!(profile.amplitude > 0.0 && profile.amplitude <= 1.0)) {
    throw FixtureError("tail-shift amplitude must lie in (0, 1]");
  }
  SeededPhase phase{random_vector(rng, spec.d, spec.k_in)};
  const bool parity = profile.kind == GProfile::Kind::Discontinuous;
  const double cell = profile.cell;
  const double amp = profile.amplitude;
  auto eval = [control, phase, parity, cell, amp](const ModuleVector& x) {
    double size = amp * diagonal_size(control, x);
    if (parity) {
      const auto index = static_cast<long long>(std::floor(vec_norm(x) / cell));
      if (index % 2 != 0) size = 0.0;
    }
    return prepend_scalar(size * phase(x), x);
  };
  return {eval, shift_coeffs(spec.d, spec.k_in), control, DomainSpec::full(2.0), "tail_shift"};
}

Built build_perturbed(const FixtureSpec& spec, const fixture::PerturbedIsometry& kind, Rng& rng) {
  if (spec.k_out < spec.k_in) throw FixtureError("perturbed isometry needs k_out >= k_in");
  if (!(kind.amplitude >= 0.0 && kind.amplitude <= 1.0)) {
    throw FixtureError("perturbation amplitude must lie in [0, 1]");
  }
  const int d = spec.d;
  const Matrix q = random_unitary(rng, spec.k_out * d);
  const Matrix b = q.topRows(static_cast<Eigen::Index>(spec.k_in) * d);
  const DomainSpec domain = kind.domain.value_or(DomainSpec::full(2.0));
  const ControlSpec control = kind.control;

  if (spec.k_out > spec.k_in) {
    if (!control.diagonal_dominated()) {
      throw FixtureError("perturbation size sqrt(phi(x, x)) is not admissible for " +
                         control.describe());
    }
    const Matrix w = q.middleRows(static_cast<Eigen::Index>(spec.k_in) * d, d);
    SeededPhase phase{random_vector(rng, d, spec.k_in)};
    const double amp = kind.amplitude;
    auto eval = [b, w, control, phase, amp](const ModuleVector& x) {
      const Complex s = amp * diagonal_size(control, x) * phase(x);
      return ModuleVector::from_blocks(x.blocks() * b + s * w);
    };
    return {eval, b, control, domain, "perturbed_isometry"};
  }

  // Square: any admissible f equals the isometry on Delta; distort only outside Delta
  // when D = Delta x Delta leaves those points unconstrained.
  const bool distort = domain.kind() != DomainKind::Full && domain.is_delta_product();
  auto eval = [b, domain, distort](const ModuleVector& x) {
    ModuleVector y = x.apply(b);
    if (distort && !domain.in_delta(x)) return (1.0 + vec_norm(x)) * y;
    return y;
  };
  return {eval, b, control, domain, "perturbed_isometry"};
}

Built build_decay(const FixtureSpec& spec, const fixture::AsymptoticDecay& kind, Rng& rng) {
  require_shift_dims(spec);
  if (!(kind.p > 0.0) || kind.p == 1.0) throw FixtureError("asymptotic fixtures need p > 0, p != 1");
  SeededPhase phase{random_vector(rng, spec.d, spec.k_in)};
  const double p = kind.p;
  const DecayProfile decay = kind.decay;
  auto eval = [p, decay, phase](const ModuleVector& x) {
    const double r = vec_norm(x);
    return prepend_scalar(control_pow(r, p) * decay_value(decay, r) * phase(x), x);
  };
  // decay <= 1 everywhere, so phi(x, y) = ||x||^p ||y||^p bounds the defect globally.
  return {eval, shift_coeffs(spec.d, spec.k_in), ControlSpec::power_product(1.0, p, p),
          DomainSpec::full(2.0), "asymptotic_decay"};
}

}  // namespace

GProfile GProfile::power_phase(double alpha, double p, double q) {
  return {Kind::PowerPhase, alpha, p, q, 1.0, 0.25};
}

GProfile GProfile::sum_phase(double beta, double p) { return {Kind::SumPhase, beta, p, p, 1.0, 0.25}; }

GProfile GProfile::bounded(double bound) { return {Kind::Bounded, bound, 0.0, 0.0, 1.0, 0.25}; }

GProfile GProfile::discontinuous(double alpha, double p, double q, double cell) {
  if (!(cell > 0.0)) throw FixtureError("discontinuous profile needs a positive cell width");
  return {Kind::Discontinuous, alpha, p, q, 1.0, cell};
}

ControlSpec GProfile::control() const {
  switch (kind) {
    case Kind::PowerPhase:
    case Kind::Discontinuous: return ControlSpec::power_product(coeff, p, q);
    case Kind::SumPhase:
      // |g(x)||g(y)| = 2 beta ||x||^{p/2} ||y||^{p/2} <= beta (||x||^p + ||y||^p).
      return ControlSpec::power_sum(coeff, p);
    case Kind::Bounded: return ControlSpec::power_product(coeff * coeff, 0.0, 0.0);
  }
  throw FixtureError("unknown g profile");
}

double decay_value(DecayProfile profile, double r) {
  switch (profile) {
    case DecayProfile::InverseSqrt: return 1.0 / std::sqrt(1.0 + r);
    case DecayProfile::InverseLog: return 1.0 / std::log(std::numbers::e + r);
    case DecayProfile::SqrtRatio: {
      const double s = std::sqrt(r);
      return s / (1.0 + s);
    }
  }
  return 1.0;
}

double decay_threshold(DecayProfile profile, double eps) {
  switch (profile) {
    case DecayProfile::InverseSqrt: return eps >= 1.0 ? 0.0 : 1.0 / (eps * eps) - 1.0;
    case DecayProfile::InverseLog: {
      if (eps >= 1.0) return 0.0;
      const double e = 1.0 / eps;
      return e > 700.0 ? std::numeric_limits<double>::infinity() : std::exp(e) - std::numbers::e;
    }
    case DecayProfile::SqrtRatio: {
      if (eps >= 1.0) return std::numeric_limits<double>::infinity();
      const double s = eps / (1.0 - eps);
      return s * s;
    }
  }
  return 0.0;
}

bool decay_is_increasing(DecayProfile profile) { return profile == DecayProfile::SqrtRatio; }

AdmissibilityReport admissibility_audit(const ApproxMap& f, const ControlSpec& phi_spec,
                                        const DomainSpec& domain, int budget, std::uint64_t seed,
                                        double tol_num) {
  AdmissibilityReport report;
  report.diagonal_margin = std::numeric_limits<double>::infinity();
  Rng rng(seed);
  bool first = true;
  auto check = [&](const ModuleVector& x, const ModuleVector& y, bool diagonal) {
    const double defect = op_norm(inner(f(x), f(y)) - inner(x, y));
    const double bound = phi_spec(x, y);
    const double excess = defect - bound;
    if (first || excess > report.max_excess) report.max_excess = excess;
    first = false;
    if (diagonal) report.diagonal_margin = std::min(report.diagonal_margin, bound - defect);
    if (excess > tol_num * std::max(1.0, bound)) report.pass = false;
    ++report.samples;
  };
  for (int s = 0; s < budget; ++s) {
    const auto [x, y] = sample_pair(domain, rng, f.dim(), f.k_in());
    check(x, y, false);
    if (domain.in_delta(x)) check(x, x, true);
    if (domain.in_delta(y)) check(y, y, true);
  }
  return report;
}

Fixture generate(const FixtureSpec& spec, std::uint64_t seed) {
  if (spec.d <= 0 || spec.k_in <= 0 || spec.k_out <= 0) {
    throw FixtureError("fixture dimensions must be positive");
  }
  Rng rng(seed);
  Built built = std::visit(
      [&](const auto& kind) -> Built {
        using K = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<K, fixture::ExactIsometry> ||
                      std::is_same_v<K, fixture::Homogeneous>) {
          if (spec.k_out < spec.k_in) throw FixtureError("isometry fixtures need k_out >= k_in");
          const Matrix b = random_isometry(rng, spec.k_in * spec.d, spec.k_out * spec.d);
          double c = 2.0;
          if constexpr (std::is_same_v<K, fixture::Homogeneous>) c = kind.c;
          const char* name =
              std::is_same_v<K, fixture::Homogeneous> ? "homogeneous" : "exact_isometry";
          return {[b](const ModuleVector& x) { return x.apply(b); }, b,
                  ControlSpec::power_product(1e-3, 2.0, 2.0), DomainSpec::full(c), name};
        } else if constexpr (std::is_same_v<K, fixture::TailShift>) {
          return build_tail_shift(spec, kind.profile, rng);
        } else if constexpr (std::is_same_v<K, fixture::PerturbedIsometry>) {
          return build_perturbed(spec, kind, rng);
        } else {
          return build_decay(spec, kind, rng);
        }
      },
      spec.kind);

  certify_truth(built.coeffs);
  ApproxMap map(built.name, spec.d, spec.k_in, spec.k_out, built.eval);
  map.declare(built.control, built.domain);

  const Matrix coeffs = built.coeffs;
  const MapEvaluator eval = built.eval;
  GroundTruth truth{coeffs, [eval, coeffs](const ModuleVector& x) {
                      return eval(x) - x.apply(coeffs);
                    }};

  AdmissibilityReport audit =
      admissibility_audit(map, built.control, built.domain, kAuditBudget, seed ^ 0xad1155ULL);
  if (!audit.pass) {
    throw FixtureError("fixture '" + built.name + "' violates its control " +
                       built.control.describe() + " (excess " + std::to_string(audit.max_excess) +
                       ")");
  }
  return {std::move(map), std::move(truth), built.control, built.domain, audit};
}

}  // namespace hcm
