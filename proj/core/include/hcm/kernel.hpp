#pragma once

// Arithmetic for the C*-algebra A = M_d(C) and the free Hilbert A-module A^k.
//
// A module vector x = (x_1, ..., x_k) is stored as the d x (k*d) block row
// [x_1 | x_2 | ... | x_k], so that the A-valued inner product is
//   <x, y> = sum_i x_i y_i^* = X Y^*
// and an A-linear map A^k -> A^m is right multiplication by a (k*d) x (m*d)
// coefficient matrix.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace hcm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Numerical tolerances shared by the kernel and the engines.
struct Tolerances {
  double num = 1e-11;       // absolute slack for identities that hold exactly
  double psd_rel = 1e-10;   // tol_psd = psd_rel * (1 + ||a||)
  double sqrt = 1e-9;       // ||r*r - a|| <= sqrt * (1 + ||a||)
  double iso = 1e-8;        // isometry / certificate slack

  double psd(double norm_a) const { return psd_rel * (1.0 + norm_a); }
};

class AlgebraElement {
 public:
  /// Throws DimensionError for non-square or empty input and for non-finite entries.
  explicit AlgebraElement(Matrix entries);

  static AlgebraElement zero(int d);
  static AlgebraElement identity(int d);
  static AlgebraElement scalar(int d, Complex value);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& matrix() const { return entries_; }
  Complex operator()(int i, int j) const { return entries_(i, j); }

  AlgebraElement adjoint() const;

  AlgebraElement operator+(const AlgebraElement& other) const;
  AlgebraElement operator-(const AlgebraElement& other) const;
  AlgebraElement operator*(const AlgebraElement& other) const;
  AlgebraElement operator*(Complex s) const;
  friend AlgebraElement operator*(Complex s, const AlgebraElement& a) { return a * s; }

 private:
  struct Unchecked {};
  AlgebraElement(Matrix entries, Unchecked) : entries_(std::move(entries)) {}

  Matrix entries_;
};

class ModuleVector {
 public:
  /// The zero vector of A^k with A = M_d(C).
  ModuleVector(int d, int k);

  /// From a d x (k*d) block row. Throws DimensionError on bad shape or non-finite entries.
  static ModuleVector from_blocks(Matrix blocks);
  static ModuleVector from_coords(std::span<const AlgebraElement> coords);
  /// d = 1 convenience: the Hilbert space vector (t_1, ..., t_k).
  static ModuleVector from_scalars(std::span<const Complex> values);

  int dim() const { return dim_; }
  int rank() const { return rank_; }
  const Matrix& blocks() const { return blocks_; }

  AlgebraElement coord(int i) const;
  std::vector<AlgebraElement> coords() const;

  ModuleVector operator+(const ModuleVector& other) const;
  ModuleVector operator-(const ModuleVector& other) const;
  ModuleVector operator*(Complex s) const;
  friend ModuleVector operator*(Complex s, const ModuleVector& x) { return x * s; }
  friend ModuleVector operator*(double s, const ModuleVector& x) { return x * Complex(s, 0.0); }

  /// Left module action (a x)_i = a x_i.
  friend ModuleVector operator*(const AlgebraElement& a, const ModuleVector& x);

  /// Apply the A-linear map with coefficient matrix `coeffs` ((k*d) x (m*d)).
  ModuleVector apply(const Matrix& coeffs) const;

  bool same_shape(const ModuleVector& other) const {
    return dim_ == other.dim_ && rank_ == other.rank_;
  }

 private:
  ModuleVector(int d, int k, Matrix blocks) : dim_(d), rank_(k), blocks_(std::move(blocks)) {}

  int dim_;
  int rank_;
  Matrix blocks_;
};

/// <x, y> = sum_i x_i y_i^*. Throws DimensionError on shape mismatch.
AlgebraElement inner(const ModuleVector& x, const ModuleVector& y);

/// Largest singular value. Dense SVD up to 64 rows/cols, power iteration on a^* a above.
double op_norm(const Matrix& a);
double op_norm(const AlgebraElement& a);

/// ||x|| = ||<x, x>||^{1/2}.
double vec_norm(const ModuleVector& x);

/// Positive square root of a Hermitian PSD element; eigenvalues in [-tol_psd, 0) are clamped.
AlgebraElement pos_sqrt(const AlgebraElement& a, const Tolerances& tol = {});

/// Re(a) = (a + a^*) / 2.
AlgebraElement re_part(const AlgebraElement& a);

/// The A-valued "norm" |x| = <x, x>^{1/2}.
AlgebraElement abs_value(const ModuleVector& x, const Tolerances& tol = {});

bool is_hermitian(const AlgebraElement& a, double tol);
/// Smallest eigenvalue of the Hermitian part of a.
double min_eigenvalue(const AlgebraElement& a);

/// Standard generator e_i of A^k (identity in slot i, zero elsewhere).
ModuleVector generator(int d, int k, int i);

}  // namespace hcm
