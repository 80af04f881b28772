#pragma once

// Control functions phi bounding the inner-product defect, the vanishing-condition
// verdict, and the derived additive-defect control psi with its weighted series psi~.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "hcm/domains.hpp"
#include "hcm/kernel.hpp"

namespace hcm {

enum class ControlKind { PowerProduct, PowerSum, Custom };

using ControlEvaluator = std::function<double(const ModuleVector&, const ModuleVector&)>;

/// phi(x, y) = alpha ||x||^p ||y||^q, beta (||x||^p + ||y||^p), or a user evaluator.
/// Powers use 0^t = 0 for t > 0 and 0^0 = 1; a zero argument with a negative
/// exponent raises ControlError.
class ControlSpec {
 public:
  static ControlSpec power_product(double alpha, double p, double q);
  static ControlSpec power_sum(double beta, double p);
  /// The evaluator must be pure and return finite nonnegative values.
  static ControlSpec custom(std::string name, ControlEvaluator eval);

  ControlKind kind() const { return kind_; }
  bool is_builtin() const { return kind_ != ControlKind::Custom; }
  double coefficient() const { return coeff_; }
  double p() const { return p_; }
  double q() const { return q_; }
  const std::string& name() const { return name_; }

  double operator()(const ModuleVector& x, const ModuleVector& y) const;
  /// Built-in kinds only: the control as a function of the two norms.
  double from_norms(double nx, double ny) const;

  /// True when sqrt(phi(x,x) phi(y,y)) <= phi(x,y) for all x, y (PowerProduct with
  /// p = q, PowerSum). Rank-one residuals of size sqrt(phi(x,x)) are then admissible.
  bool diagonal_dominated() const;

  std::string describe() const;

 private:
  ControlSpec(ControlKind kind, double coeff, double p, double q, std::string name)
      : kind_(kind), coeff_(coeff), p_(p), q_(q), name_(std::move(name)) {}

  ControlKind kind_;
  double coeff_;
  double p_;
  double q_;
  std::string name_;
  ControlEvaluator eval_;
};

/// 0^t convention used by the built-in controls.
double control_pow(double r, double t);

/// phi(x, y) with validation of the returned value.
double phi(const ControlSpec& spec, const ModuleVector& x, const ModuleVector& y);

enum class Verdict { Holds, Fails, Unknown };
std::string to_string(Verdict v);

struct VanishingVerdict {
  Verdict verdict = Verdict::Unknown;
  /// Set when the result rests on the mixed-exponent case (one exponent equal to 1)
  /// rather than on the generic double limit.
  bool caveat = false;
  std::string reason;
};

struct VanishingProbe {
  int d = 1;
  int k = 2;
  int samples = 8;
  std::uint64_t seed = 0x5eed;
};

/// Whether lim_{m+n->inf} c^{m+n} phi(c^{-m} x, c^{-n} y) = 0 on D, with c = D.scale().
VanishingVerdict vanishing_verdict(const ControlSpec& spec, const DomainSpec& domain,
                                   const VanishingProbe& probe = {});

enum class HurBranch {
  Contractive,  // psi~(x) = sum_{n>=0} 2^{-n-1} psi(2^n x, 2^n x); limit of 2^{-n} f(2^n x)
  Expansive     // psi~(x) = sum_{n>=1} 2^{n-1} psi(2^{-n} x, 2^{-n} x); limit of 2^n f(2^{-n} x)
};
std::string to_string(HurBranch b);

class HurControl {
 public:
  /// PowerSum/PowerProduct pick the branch from the exponent (p < 2 contractive, p > 2
  /// expansive; the exponent 2 raises UnsupportedExponentError). Custom controls need
  /// an explicit branch, which is checked for a decaying series.
  static HurControl make(ControlSpec base, std::optional<HurBranch> branch = std::nullopt);

  const ControlSpec& base() const { return base_; }
  HurBranch branch() const { return branch_; }
  /// 1/2 for the contractive chain, 2 for the expansive one (I = lim c^n f(c^{-n} x)).
  double chain_scale() const { return branch_ == HurBranch::Contractive ? 0.5 : 2.0; }

 private:
  HurControl(ControlSpec base, HurBranch branch) : base_(std::move(base)), branch_(branch) {}

  ControlSpec base_;
  HurBranch branch_;
};

/// The nine-term additive-defect control
///   psi(x,y) = ( phi(x+y,x+y) + phi(x,x+y) + phi(y,x+y) + phi(x+y,x) + phi(x,x)
///              + phi(y,x) + phi(x+y,y) + phi(x,y) + phi(y,y) )^{1/2}.
double psi(const ControlSpec& phi_spec, const ModuleVector& x, const ModuleVector& y);
double psi(const HurControl& h, const ModuleVector& x, const ModuleVector& y);

struct SeriesValue {
  double value = 0.0;
  double truncation_bound = 0.0;
  int terms = 0;
};

constexpr int kMaxSeriesTerms = 10'000;

/// psi~(x). PowerSum uses the closed form sqrt(6 beta (2^p + 2)) ||x||^{p/2} / |2^{p/2} - 2|
/// with zero truncation bound; other controls sum terms until the geometric-majorant
/// tail drops below `tol`.
SeriesValue psi_tilde(const HurControl& h, const ModuleVector& x, double tol = 1e-14);

/// psi~ by plain summation of the first `terms` terms (no closed form).
double psi_tilde_partial(const HurControl& h, const ModuleVector& x, int terms);

/// The k-th chain term: 2^{-k-1} psi(2^k x, 2^k x) (contractive, k >= 0) or
/// 2^{k-1} psi(2^{-k} x, 2^{-k} x) (expansive, k >= 1).
double chain_term(const HurControl& h, const ModuleVector& x, int k);

/// Right-hand side of the Cauchy chain estimate between steps m < n:
/// sum_{k=m}^{n-1} (contractive) or sum_{k=m+1}^{n} (expansive) of chain_term.
double chain_bound(const HurControl& h, const ModuleVector& x, int m, int n);

/// Bound on ||c^n f(c^{-n} x) - I(x)||: the series tail after step n.
/// Closed form for PowerSum; summed with a geometric majorant otherwise.
double chain_tail(const HurControl& h, const ModuleVector& x, int n, double tol = 1e-14);

/// sqrt(6 beta (2^p + 2)) / |2^{p/2} - 2|, the power-sum distance constant.
double power_sum_constant(double beta, double p);

}  // namespace hcm
