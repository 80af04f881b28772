#pragma once

#include <functional>
#include <optional>
#include <string>

#include "hcm/controls.hpp"
#include "hcm/domains.hpp"
#include "hcm/kernel.hpp"

namespace hcm {

using MapEvaluator = std::function<ModuleVector(const ModuleVector&)>;

/// A black-box map f: A^{k_in} -> A^{k_out}, optionally tagged with the control and
/// domain under which it claims ||<f(x), f(y)> - <x, y>|| <= phi(x, y).
/// The evaluator must be deterministic and pure.
class ApproxMap {
 public:
  ApproxMap(std::string name, int d, int k_in, int k_out, MapEvaluator eval);

  /// Checks input and output shapes on every call.
  ModuleVector operator()(const ModuleVector& x) const;

  const std::string& name() const { return name_; }
  int dim() const { return d_; }
  int k_in() const { return k_in_; }
  int k_out() const { return k_out_; }

  const std::optional<ControlSpec>& declared_control() const { return control_; }
  const std::optional<DomainSpec>& declared_domain() const { return domain_; }
  ApproxMap& declare(ControlSpec control, DomainSpec domain);

 private:
  std::string name_;
  int d_;
  int k_in_;
  int k_out_;
  MapEvaluator eval_;
  std::optional<ControlSpec> control_;
  std::optional<DomainSpec> domain_;
};

/// The A-linear map x -> x * coeffs for a (k_in d) x (k_out d) coefficient matrix.
ApproxMap linear_map(std::string name, int d, const Matrix& coeffs);

}  // namespace hcm
