#include "hcm/random.hpp"

#include <cmath>

#include "hcm/errors.hpp"

namespace hcm {

Complex random_complex(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

Matrix random_matrix(Rng& rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = random_complex(rng);
  }
  return m;
}

AlgebraElement random_element(Rng& rng, int d) { return AlgebraElement(random_matrix(rng, d, d)); }

ModuleVector random_vector(Rng& rng, int d, int k) {
  return ModuleVector::from_blocks(random_matrix(rng, d, k * d));
}

ModuleVector random_vector_with_norm(Rng& rng, int d, int k, double norm) {
  ModuleVector x = random_vector(rng, d, k);
  const double n = vec_norm(x);
  if (norm == 0.0 || n == 0.0) return ModuleVector(d, k);
  return (norm / n) * x;
}

Matrix random_unitary(Rng& rng, int n) {
  const Matrix z = random_matrix(rng, n, n);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    const Complex diag = r(i, i);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(i) *= diag / mag;
  }
  return q;
}

Matrix random_isometry(Rng& rng, int rows, int cols) {
  if (rows > cols) throw DimensionError("isometry needs rows <= cols");
  return random_unitary(rng, cols).topRows(rows);
}

double log_uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

std::vector<double> stratified_norms(Rng& rng, int count, double lo, double hi) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  const double a = std::log(lo);
  const double width = (std::log(hi) - a) / count;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < count; ++i) out.push_back(std::exp(a + width * (i + u(rng))));
  return out;
}

}  // namespace hcm
