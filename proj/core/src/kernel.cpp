#include "hcm/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hcm/errors.hpp"

namespace hcm {
namespace {

constexpr Eigen::Index kDenseSvdLimit = 64;
constexpr int kPowerIterations = 500;
constexpr double kPowerRelStop = 1e-13;

bool all_finite(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const Complex v = m(i, j);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
  }
  return true;
}

double power_iteration_norm(const Matrix& a) {
  // Dominant eigenvalue of the smaller Gram matrix, from a fixed non-symmetric start.
  const Matrix gram = a.rows() < a.cols() ? Matrix(a * a.adjoint()) : Matrix(a.adjoint() * a);
  Eigen::VectorXcd v(gram.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v(i) = Complex(1.0 + 0.37 * std::sin(1.0 + static_cast<double>(i)), 0.11 * static_cast<double>(i % 7));
  }
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < kPowerIterations; ++it) {
    Eigen::VectorXcd w = gram * v;
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    const double next = std::real(v.dot(w));
    v = w / wn;
    if (it > 0 && std::abs(next - lambda) <= kPowerRelStop * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

}  // namespace

AlgebraElement::AlgebraElement(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
    throw DimensionError("algebra element must be a non-empty square matrix");
  }
  if (!all_finite(entries_)) throw DimensionError("algebra element has non-finite entries");
}

AlgebraElement AlgebraElement::zero(int d) { return AlgebraElement(Matrix::Zero(d, d)); }

AlgebraElement AlgebraElement::identity(int d) { return AlgebraElement(Matrix::Identity(d, d)); }

AlgebraElement AlgebraElement::scalar(int d, Complex value) {
  return AlgebraElement(Matrix::Identity(d, d) * value);
}

AlgebraElement AlgebraElement::adjoint() const { return {entries_.adjoint(), Unchecked{}}; }

AlgebraElement AlgebraElement::operator+(const AlgebraElement& other) const {
  if (dim() != other.dim()) throw DimensionError("algebra dimension mismatch");
  return {entries_ + other.entries_, Unchecked{}};
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& other) const {
  if (dim() != other.dim()) throw DimensionError("algebra dimension mismatch");
  return {entries_ - other.entries_, Unchecked{}};
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& other) const {
  if (dim() != other.dim()) throw DimensionError("algebra dimension mismatch");
  return {entries_ * other.entries_, Unchecked{}};
}

AlgebraElement AlgebraElement::operator*(Complex s) const { return {entries_ * s, Unchecked{}}; }

ModuleVector::ModuleVector(int d, int k) : dim_(d), rank_(k) {
  if (d <= 0 || k <= 0) throw DimensionError("module dimensions must be positive");
  blocks_ = Matrix::Zero(d, static_cast<Eigen::Index>(k) * d);
}

ModuleVector ModuleVector::from_blocks(Matrix blocks) {
  const auto d = blocks.rows();
  if (d == 0 || blocks.cols() == 0 || blocks.cols() % d != 0) {
    throw DimensionError("module vector blocks must be d x (k*d)");
  }
  if (!all_finite(blocks)) throw DimensionError("module vector has non-finite entries");
  const int k = static_cast<int>(blocks.cols() / d);
  return {static_cast<int>(d), k, std::move(blocks)};
}

ModuleVector ModuleVector::from_coords(std::span<const AlgebraElement> coords) {
  if (coords.empty()) throw DimensionError("module vector needs at least one coordinate");
  const int d = coords.front().dim();
  Matrix blocks(d, static_cast<Eigen::Index>(coords.size()) * d);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i].dim() != d) throw DimensionError("coordinates differ in algebra dimension");
    blocks.middleCols(static_cast<Eigen::Index>(i) * d, d) = coords[i].matrix();
  }
  return {d, static_cast<int>(coords.size()), std::move(blocks)};
}

ModuleVector ModuleVector::from_scalars(std::span<const Complex> values) {
  Matrix blocks(1, static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) blocks(0, static_cast<Eigen::Index>(i)) = values[i];
  return from_blocks(std::move(blocks));
}

AlgebraElement ModuleVector::coord(int i) const {
  if (i < 0 || i >= rank_) throw DimensionError("coordinate index out of range");
  return AlgebraElement(blocks_.middleCols(static_cast<Eigen::Index>(i) * dim_, dim_));
}

std::vector<AlgebraElement> ModuleVector::coords() const {
  std::vector<AlgebraElement> out;
  out.reserve(static_cast<std::size_t>(rank_));
  for (int i = 0; i < rank_; ++i) out.push_back(coord(i));
  return out;
}

ModuleVector ModuleVector::operator+(const ModuleVector& other) const {
  if (!same_shape(other)) throw DimensionError("module vector shape mismatch");
  return {dim_, rank_, blocks_ + other.blocks_};
}

ModuleVector ModuleVector::operator-(const ModuleVector& other) const {
  if (!same_shape(other)) throw DimensionError("module vector shape mismatch");
  return {dim_, rank_, blocks_ - other.blocks_};
}

ModuleVector ModuleVector::operator*(Complex s) const { return {dim_, rank_, blocks_ * s}; }

ModuleVector operator*(const AlgebraElement& a, const ModuleVector& x) {
  if (a.dim() != x.dim_) throw DimensionError("algebra/module dimension mismatch");
  return {x.dim_, x.rank_, a.matrix() * x.blocks_};
}

ModuleVector ModuleVector::apply(const Matrix& coeffs) const {
  if (coeffs.rows() != blocks_.cols() || coeffs.cols() % dim_ != 0) {
    throw DimensionError("coefficient matrix does not match module vector");
  }
  return {dim_, static_cast<int>(coeffs.cols() / dim_), blocks_ * coeffs};
}

AlgebraElement inner(const ModuleVector& x, const ModuleVector& y) {
  if (!x.same_shape(y)) {
    throw DimensionError("inner product of vectors from different modules");
  }
  return AlgebraElement(x.blocks() * y.blocks().adjoint());
}

double op_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  if (a.rows() <= kDenseSvdLimit && a.cols() <= kDenseSvdLimit) {
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues().size() == 0 ? 0.0 : svd.singularValues()(0);
  }
  return power_iteration_norm(a);
}

double op_norm(const AlgebraElement& a) { return op_norm(a.matrix()); }

double vec_norm(const ModuleVector& x) {
  // ||<x,x>|| = ||X X^*|| = ||X||^2, so the block row's largest singular value is ||x||.
  return op_norm(x.blocks());
}

bool is_hermitian(const AlgebraElement& a, double tol) {
  return op_norm(Matrix(a.matrix() - a.matrix().adjoint())) <= tol;
}

double min_eigenvalue(const AlgebraElement& a) {
  const Matrix h = 0.5 * (a.matrix() + a.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

AlgebraElement pos_sqrt(const AlgebraElement& a, const Tolerances& tol) {
  const double norm_a = op_norm(a);
  const double tol_psd = tol.psd(norm_a);
  if (!is_hermitian(a, tol_psd)) throw PositivityError("pos_sqrt: element is not Hermitian");
  const Matrix h = 0.5 * (a.matrix() + a.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  Eigen::VectorXd values = eig.eigenvalues();
  if (values(0) < -tol_psd) {
    throw PositivityError("pos_sqrt: eigenvalue " + std::to_string(values(0)) +
                          " below -tol_psd");
  }
  for (Eigen::Index i = 0; i < values.size(); ++i) values(i) = std::sqrt(std::max(values(i), 0.0));
  const Matrix& u = eig.eigenvectors();
  Matrix r = u * values.cast<Complex>().asDiagonal() * u.adjoint();
  r = 0.5 * (r + r.adjoint());
  return AlgebraElement(std::move(r));
}

AlgebraElement re_part(const AlgebraElement& a) {
  return AlgebraElement(0.5 * (a.matrix() + a.matrix().adjoint()));
}

AlgebraElement abs_value(const ModuleVector& x, const Tolerances& tol) {
  return pos_sqrt(inner(x, x), tol);
}

ModuleVector generator(int d, int k, int i) {
  if (i < 0 || i >= k) throw DimensionError("generator index out of range");
  Matrix blocks = Matrix::Zero(d, static_cast<Eigen::Index>(k) * d);
  blocks.middleCols(static_cast<Eigen::Index>(i) * d, d) = Matrix::Identity(d, d);
  return ModuleVector::from_blocks(std::move(blocks));
}

}  // namespace hcm
