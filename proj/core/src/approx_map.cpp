#include "hcm/approx_map.hpp"

#include "hcm/errors.hpp"

namespace hcm {

ApproxMap::ApproxMap(std::string name, int d, int k_in, int k_out, MapEvaluator eval)
    : name_(std::move(name)), d_(d), k_in_(k_in), k_out_(k_out), eval_(std::move(eval)) {
  if (d <= 0 || k_in <= 0 || k_out <= 0) throw DimensionError("map dimensions must be positive");
  if (!eval_) throw DimensionError("map needs an evaluator");
}

ModuleVector ApproxMap::operator()(const ModuleVector& x) const {
  if (x.dim() != d_ || x.rank() != k_in_) {
    throw DimensionError("map '" + name_ + "' called with a vector of the wrong module");
  }
  ModuleVector y = eval_(x);
  if (y.dim() != d_ || y.rank() != k_out_) {
    throw DimensionError("map '" + name_ + "' returned a vector of the wrong module");
  }
  return y;
}

ApproxMap& ApproxMap::declare(ControlSpec control, DomainSpec domain) {
  control_ = std::move(control);
  domain_ = std::move(domain);
  return *this;
}

ApproxMap linear_map(std::string name, int d, const Matrix& coeffs) {
  if (coeffs.rows() % d != 0 || coeffs.cols() % d != 0) {
    throw DimensionError("coefficient matrix is not made of d x d blocks");
  }
  const int k_in = static_cast<int>(coeffs.rows() / d);
  const int k_out = static_cast<int>(coeffs.cols() / d);
  return ApproxMap(std::move(name), d, k_in, k_out,
                   [coeffs](const ModuleVector& x) { return x.apply(coeffs); });
}

}  // namespace hcm
