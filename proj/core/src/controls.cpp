#include "hcm/controls.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "hcm/errors.hpp"

namespace hcm {
namespace {

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ControlError(std::string(what) + " must be finite");
}

/// Nine-term psi(y, y) for a built-in control, from ||y|| alone (||2y|| = 2||y||).
double psi_diagonal_from_norm(const ControlSpec& s, double n) {
  const double m = 2.0 * n;
  const double sum = s.from_norms(m, m) + 2.0 * s.from_norms(n, m) + 2.0 * s.from_norms(m, n) +
                     4.0 * s.from_norms(n, n);
  return std::sqrt(sum);
}

struct SeriesSum {
  double value = 0.0;
  double tail = 0.0;
  int terms = 0;
};

/// Sums term(k) for k = first, first+1, ... until the geometric majorant of the
/// remaining tail (last term times rho/(1-rho), rho the largest of the recent term
/// ratios) is below tol.
template <typename Term>
SeriesSum sum_with_majorant(Term term, int first, double tol) {
  constexpr int kWindow = 5;
  SeriesSum out;
  std::deque<double> ratios;
  double prev = -1.0;
  int zero_run = 0;
  for (int k = first; out.terms < kMaxSeriesTerms; ++k) {
    const double t = term(k);
    if (!std::isfinite(t)) throw DivergenceError("psi~ series term is not finite");
    out.value += t;
    ++out.terms;
    if (t == 0.0) {
      if (++zero_run >= kWindow) {
        out.tail = 0.0;
        return out;
      }
      prev = t;
      continue;
    }
    zero_run = 0;
    if (prev > 0.0) {
      ratios.push_back(t / prev);
      if (static_cast<int>(ratios.size()) > kWindow) ratios.pop_front();
    }
    prev = t;
    if (static_cast<int>(ratios.size()) == kWindow) {
      const double rho = *std::max_element(ratios.begin(), ratios.end());
      if (rho < 1.0) {
        const double tail = t * rho / (1.0 - rho);
        if (tail < tol) {
          out.tail = tail;
          return out;
        }
      }
    }
  }
  throw DivergenceError("psi~ series shows no geometric decay within " +
                        std::to_string(kMaxSeriesTerms) + " terms");
}

}  // namespace

double control_pow(double r, double t) {
  if (r == 0.0) {
    if (t > 0.0) return 0.0;
    if (t == 0.0) return 1.0;
    throw ControlError("control evaluated at the zero vector with a negative exponent");
  }
  return std::pow(r, t);
}

ControlSpec ControlSpec::power_product(double alpha, double p, double q) {
  check_finite(alpha, "alpha");
  check_finite(p, "p");
  check_finite(q, "q");
  if (!(alpha > 0.0)) throw ControlError("alpha must be positive");
  return {ControlKind::PowerProduct, alpha, p, q, "power_product"};
}

ControlSpec ControlSpec::power_sum(double beta, double p) {
  check_finite(beta, "beta");
  check_finite(p, "p");
  if (!(beta > 0.0)) throw ControlError("beta must be positive");
  return {ControlKind::PowerSum, beta, p, p, "power_sum"};
}

ControlSpec ControlSpec::custom(std::string name, ControlEvaluator eval) {
  if (!eval) throw ControlError("custom control needs an evaluator");
  ControlSpec spec(ControlKind::Custom, 0.0, 0.0, 0.0, std::move(name));
  spec.eval_ = std::move(eval);
  return spec;
}

double ControlSpec::from_norms(double nx, double ny) const {
  switch (kind_) {
    case ControlKind::PowerProduct: return coeff_ * control_pow(nx, p_) * control_pow(ny, q_);
    case ControlKind::PowerSum: return coeff_ * (control_pow(nx, p_) + control_pow(ny, p_));
    case ControlKind::Custom: break;
  }
  throw ControlError("custom controls have no norm-level form");
}

double ControlSpec::operator()(const ModuleVector& x, const ModuleVector& y) const {
  if (!x.same_shape(y)) throw DimensionError("control evaluated on mismatched vectors");
  if (kind_ != ControlKind::Custom) return from_norms(vec_norm(x), vec_norm(y));
  const double v = eval_(x, y);
  if (!std::isfinite(v) || v < 0.0) {
    throw ControlError("custom control '" + name_ + "' returned a negative or non-finite value");
  }
  return v;
}

bool ControlSpec::diagonal_dominated() const {
  switch (kind_) {
    case ControlKind::PowerProduct: return p_ == q_;
    case ControlKind::PowerSum: return true;
    case ControlKind::Custom: return false;
  }
  return false;
}

std::string ControlSpec::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case ControlKind::PowerProduct:
      os << "power_product(alpha=" << coeff_ << ", p=" << p_ << ", q=" << q_ << ")";
      break;
    case ControlKind::PowerSum: os << "power_sum(beta=" << coeff_ << ", p=" << p_ << ")"; break;
    case ControlKind::Custom: os << "custom(" << name_ << ")"; break;
  }
  return os.str();
}

double phi(const ControlSpec& spec, const ModuleVector& x, const ModuleVector& y) {
  return spec(x, y);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

VanishingVerdict vanishing_verdict(const ControlSpec& spec, const DomainSpec& domain,
                                   const VanishingProbe& probe) {
  const double c = domain.scale();
  auto toward = [c](double e) { return (c > 1.0 && e > 1.0) || (c < 1.0 && e < 1.0); };

  switch (spec.kind()) {
    case ControlKind::PowerProduct: {
      const double p = spec.p();
      const double q = spec.q();
      if (p == 1.0 && q == 1.0) {
        return {Verdict::Fails, false, "p = q = 1: c^{m+n} phi(c^-m x, c^-n y) is constant"};
      }
      if (toward(p) && toward(q)) return {Verdict::Holds, false, "both exponents on the side of c"};
      if ((p == 1.0 && toward(q)) || (q == 1.0 && toward(p))) {
        return {Verdict::Holds, true,
                "one exponent equals 1: the diagonal estimate vanishes but the double limit does not"};
      }
      return {Verdict::Fails, false, "an exponent lies on the wrong side of 1 for this c"};
    }
    case ControlKind::PowerSum: {
      // c^{m+n} beta (c^{-mp}||x||^p + c^{-np}||y||^p) = beta (c^{m(1-p)+n} ... ).
      if (c < 1.0 && spec.p() < 1.0) return {Verdict::Holds, false, "c < 1 and p < 1"};
      return {Verdict::Fails, false, "power-sum controls vanish only for c < 1 and p < 1"};
    }
    case ControlKind::Custom: break;
  }

  constexpr int kGrid = 60;
  Rng rng(probe.seed);
  bool all_decay = true;
  for (int s = 0; s < probe.samples; ++s) {
    const auto [x, y] = sample_pair(domain, rng, probe.d, probe.k);
    double head = 0.0;
    double tail = 0.0;
    for (int m = 0; m <= kGrid; ++m) {
      for (int n = 0; m + n <= kGrid; ++n) {
        const double cm = std::pow(c, -static_cast<double>(m));
        const double cn = std::pow(c, -static_cast<double>(n));
        const double v = std::pow(c, static_cast<double>(m + n)) * spec(cm * x, cn * y);
        if (m + n <= 10) head = std::max(head, v);
        if (m + n >= 50) tail = std::max(tail, v);
      }
    }
    if (head == 0.0 && tail == 0.0) continue;
    if (tail >= head / 10.0) {
      return {Verdict::Fails, false, "sampled c^{m+n} phi stays within 10x of its initial size"};
    }
    if (tail > 1e-6 * head) all_decay = false;
  }
  if (all_decay) return {Verdict::Holds, false, "sampled grid m + n <= 60 decays by 1e6"};
  return {Verdict::Unknown, false, "sampled grid neither decays nor stays bounded away from 0"};
}

std::string to_string(HurBranch b) {
  return b == HurBranch::Contractive ? "contractive" : "expansive";
}

HurControl HurControl::make(ControlSpec base, std::optional<HurBranch> branch) {
  if (base.kind() == ControlKind::Custom) {
    if (!branch) throw ControlError("custom controls need an explicit chain branch");
    return {std::move(base), *branch};
  }
  const double s = base.kind() == ControlKind::PowerSum ? base.p() : base.p() + base.q();
  if (s == 2.0) {
    throw UnsupportedExponentError(
        "exponent 2 is not supported: no Hyers-Ulam-Rassias bound is known for this case "
        "(the p = 2 case is open)");
  }
  const HurBranch natural = s < 2.0 ? HurBranch::Contractive : HurBranch::Expansive;
  if (branch && *branch != natural) {
    throw ControlError("the " + to_string(*branch) + " chain diverges for " + base.describe());
  }
  return {std::move(base), natural};
}

double psi(const ControlSpec& s, const ModuleVector& x, const ModuleVector& y) {
  const ModuleVector xy = x + y;
  const double sum = s(xy, xy) + s(x, xy) + s(y, xy) + s(xy, x) + s(x, x) + s(y, x) + s(xy, y) +
                     s(x, y) + s(y, y);
  return std::sqrt(sum);
}

double psi(const HurControl& h, const ModuleVector& x, const ModuleVector& y) {
  return psi(h.base(), x, y);
}

double chain_term(const HurControl& h, const ModuleVector& x, int k) {
  const bool contractive = h.branch() == HurBranch::Contractive;
  const int shift = contractive ? k : -k;
  const double weight = contractive ? std::ldexp(1.0, -k - 1) : std::ldexp(1.0, k - 1);
  if (h.base().is_builtin()) {
    return weight * psi_diagonal_from_norm(h.base(), std::ldexp(vec_norm(x), shift));
  }
  const ModuleVector y = std::ldexp(1.0, shift) * x;
  return weight * psi(h.base(), y, y);
}

double power_sum_constant(double beta, double p) {
  return std::sqrt(6.0 * beta * (std::pow(2.0, p) + 2.0)) / std::abs(std::pow(2.0, p / 2.0) - 2.0);
}

SeriesValue psi_tilde(const HurControl& h, const ModuleVector& x, double tol) {
  const ControlSpec& base = h.base();
  if (base.kind() == ControlKind::PowerSum) {
    const double p = base.p();
    return {power_sum_constant(base.coefficient(), p) * control_pow(vec_norm(x), p / 2.0), 0.0, 0};
  }
  const int first = h.branch() == HurBranch::Contractive ? 0 : 1;
  const SeriesSum s = sum_with_majorant([&](int k) { return chain_term(h, x, k); }, first, tol);
  return {s.value, s.tail, s.terms};
}

double psi_tilde_partial(const HurControl& h, const ModuleVector& x, int terms) {
  const int first = h.branch() == HurBranch::Contractive ? 0 : 1;
  double sum = 0.0;
  for (int k = first; k < first + terms; ++k) sum += chain_term(h, x, k);
  return sum;
}

double chain_bound(const HurControl& h, const ModuleVector& x, int m, int n) {
  double sum = 0.0;
  if (h.branch() == HurBranch::Contractive) {
    for (int k = m; k < n; ++k) sum += chain_term(h, x, k);
  } else {
    for (int k = m + 1; k <= n; ++k) sum += chain_term(h, x, k);
  }
  return sum;
}

double chain_tail(const HurControl& h, const ModuleVector& x, int n, double tol) {
  const ControlSpec& base = h.base();
  if (base.kind() == ControlKind::PowerSum) {
    const double p = base.p();
    const double lead = std::sqrt(6.0 * base.coefficient() * (std::pow(2.0, p) + 2.0)) *
                        control_pow(vec_norm(x), p / 2.0);
    if (h.branch() == HurBranch::Contractive) {
      const double r = std::pow(2.0, p / 2.0 - 1.0);
      return lead * std::pow(r, n) / (2.0 - std::pow(2.0, p / 2.0));
    }
    const double s = std::pow(2.0, 1.0 - p / 2.0);
    return lead * std::pow(s, n + 1) / (2.0 * (1.0 - s));
  }
  const int first = h.branch() == HurBranch::Contractive ? n : n + 1;
  const SeriesSum s = sum_with_majorant([&](int k) { return chain_term(h, x, k); }, first, tol);
  return s.value + s.tail;
}

}  // namespace hcm
