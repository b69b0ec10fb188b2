#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "sqpm/errors.hpp"

namespace sqpm {

using Scalar = double;
using Complex = std::complex<Scalar>;
using CMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using RMat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using RVec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Absolute tolerance within which entries[i][j] == conj(entries[j][i]).
inline constexpr Scalar kHermitianTol = 1e-12;
/// Symmetrization corrections above this raise the `corrected()` flag.
inline constexpr Scalar kHermitianWarnTol = 1e-9;
/// Relative singular-value threshold for rank decisions.
inline constexpr Scalar kRankTol = 1e-9;

/// Complex self-adjoint d x d matrix.
///
/// Inputs are symmetrized on construction, A <- (A + A^H)/2. When the
/// correction exceeds kHermitianWarnTol the `corrected()` flag is set so file
/// loaders can report it.
class HermitianOperator {
 public:
  HermitianOperator() = default;

  template <typename Derived>
  explicit HermitianOperator(const Eigen::MatrixBase<Derived>& m) : mat_(m.template cast<Complex>()) {
    if (mat_.rows() != mat_.cols() || mat_.rows() < 1) {
      throw DimensionMismatch("HermitianOperator: matrix must be square with dim >= 1");
    }
    CMat sym = (mat_ + mat_.adjoint()) / Scalar(2);
    correction_ = (sym - mat_).cwiseAbs().maxCoeff();
    mat_ = std::move(sym);
  }

  static HermitianOperator identity(int dim) { return HermitianOperator(CMat::Identity(dim, dim)); }
  static HermitianOperator zero(int dim) { return HermitianOperator(CMat::Zero(dim, dim)); }
  /// Rank-one projector |v><v| (v is normalized first).
  static HermitianOperator projector(const Eigen::VectorXcd& v);

  int dim() const noexcept { return static_cast<int>(mat_.rows()); }
  const CMat& matrix() const noexcept { return mat_; }
  Complex operator()(int i, int j) const { return mat_(i, j); }
  Scalar trace() const { return mat_.trace().real(); }

  Scalar correction() const noexcept { return correction_; }
  bool corrected() const noexcept { return correction_ > kHermitianWarnTol; }

  HermitianOperator& operator+=(const HermitianOperator& o);
  HermitianOperator& operator-=(const HermitianOperator& o);
  HermitianOperator& operator*=(Scalar s);

  friend HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) { return a += b; }
  friend HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b) { return a -= b; }
  friend HermitianOperator operator*(Scalar s, HermitianOperator a) { return a *= s; }
  friend HermitianOperator operator*(HermitianOperator a, Scalar s) { return a *= s; }

 private:
  CMat mat_;
  Scalar correction_ = 0;
};

namespace pauli {
HermitianOperator I();
HermitianOperator X();
HermitianOperator Y();
HermitianOperator Z();
}  // namespace pauli

/// Tr(a b) for Hermitian a, b; the (rounding-level) imaginary part is dropped.
Scalar trace_inner(const HermitianOperator& a, const HermitianOperator& b);

/// Smallest eigenvalue via the self-adjoint eigensolver.
Scalar min_eigenvalue(const HermitianOperator& a);

/// Full spectrum, ascending.
RVec eigenvalues(const HermitianOperator& a);

/// Real symmetric 2d x 2d block form [[Re A, -Im A], [Im A, Re A]].
///
/// Every eigenvalue of A appears twice in the output, and
/// <emb(A), emb(B)> = 2 Tr(A B).
template <typename Derived>
RMat real_embedding(const Eigen::MatrixBase<Derived>& a) {
  const Eigen::Index d = a.rows();
  RMat out(2 * d, 2 * d);
  out.topLeftCorner(d, d) = a.real();
  out.topRightCorner(d, d) = -a.imag();
  out.bottomLeftCorner(d, d) = a.imag();
  out.bottomRightCorner(d, d) = a.real();
  return out;
}

inline RMat real_embedding(const HermitianOperator& a) { return real_embedding(a.matrix()); }

/// Inverse of real_embedding, averaging the redundant blocks.
template <typename Derived>
CMat complex_from_embedding(const Eigen::MatrixBase<Derived>& x) {
  const Eigen::Index d = x.rows() / 2;
  const RMat re = (x.topLeftCorner(d, d) + x.bottomRightCorner(d, d)) / Scalar(2);
  const RMat im = (x.bottomLeftCorner(d, d) - x.topRightCorner(d, d)) / Scalar(2);
  CMat out(d, d);
  out.real() = re;
  out.imag() = im;
  return out;
}

/// Generalized Gell-Mann basis of Herm(C^d), orthonormal under Tr(A B).
/// Element 0 is I/sqrt(d); then symmetric, antisymmetric and diagonal
/// generators.
std::vector<HermitianOperator> gell_mann_basis(int d);

/// Coordinates of `a` in gell_mann_basis(a.dim()) (length d^2).
RVec hermitian_coordinates(const HermitianOperator& a);

/// Inverse of hermitian_coordinates.
HermitianOperator from_coordinates(const RVec& coords, int d);

/// Real dimension of span{ops} inside Herm(C^d).
int span_rank(const std::vector<HermitianOperator>& ops);

/// Positive part (spectral projection onto eigenvalues > 0).
HermitianOperator positive_part(const HermitianOperator& a);

struct Decomposition {
  RVec coefficients;
  Scalar residual = 0;  // Frobenius norm of f - sum_x c_x op_x
};

/// Least-squares coefficients c with sum_x c_x ops[x] = f.
/// Throws NotInSpan when the residual exceeds 1e-8 * ||f||.
Decomposition decompose_over(const HermitianOperator& f, const std::vector<HermitianOperator>& ops);

}  // namespace sqpm
