#include "sqpm/herm.hpp"

#include <cmath>

namespace sqpm {

HermitianOperator HermitianOperator::projector(const Eigen::VectorXcd& v) {
  const Scalar n = v.norm();
  if (n == 0) throw InvalidArgument("projector: zero vector");
  const Eigen::VectorXcd u = v / n;
  return HermitianOperator(u * u.adjoint());
}

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& o) {
  if (o.dim() != dim()) throw DimensionMismatch("HermitianOperator +: dimension mismatch");
  mat_ += o.mat_;
  return *this;
}

HermitianOperator& HermitianOperator::operator-=(const HermitianOperator& o) {
  if (o.dim() != dim()) throw DimensionMismatch("HermitianOperator -: dimension mismatch");
  mat_ -= o.mat_;
  return *this;
}

HermitianOperator& HermitianOperator::operator*=(Scalar s) {
  mat_ *= s;
  return *this;
}

namespace pauli {
HermitianOperator I() { return HermitianOperator::identity(2); }
HermitianOperator X() {
  CMat m(2, 2);
  m << 0, 1, 1, 0;
  return HermitianOperator(m);
}
HermitianOperator Y() {
  CMat m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return HermitianOperator(m);
}
HermitianOperator Z() {
  CMat m(2, 2);
  m << 1, 0, 0, -1;
  return HermitianOperator(m);
}
}  // namespace pauli

Scalar trace_inner(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("trace_inner: dimension mismatch");
  // Tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B.
  return (a.matrix().array() * b.matrix().array().conjugate()).sum().real();
}

RVec eigenvalues(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("eigenvalues: eigensolver failed");
  return es.eigenvalues();
}

Scalar min_eigenvalue(const HermitianOperator& a) { return eigenvalues(a)(0); }

std::vector<HermitianOperator> gell_mann_basis(int d) {
  if (d < 1) throw InvalidArgument("gell_mann_basis: d must be >= 1");
  std::vector<HermitianOperator> basis;
  basis.reserve(static_cast<std::size_t>(d) * d);
  basis.push_back(HermitianOperator(CMat::Identity(d, d) / std::sqrt(Scalar(d))));
  const Scalar r = 1 / std::sqrt(Scalar(2));
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      CMat s = CMat::Zero(d, d);
      s(j, k) = r;
      s(k, j) = r;
      basis.emplace_back(s);
      CMat a = CMat::Zero(d, d);
      a(j, k) = Complex(0, -r);
      a(k, j) = Complex(0, r);
      basis.emplace_back(a);
    }
  }
  for (int l = 1; l < d; ++l) {
    CMat g = CMat::Zero(d, d);
    const Scalar c = 1 / std::sqrt(Scalar(l) * (l + 1));
    for (int j = 0; j < l; ++j) g(j, j) = c;
    g(l, l) = -l * c;
    basis.emplace_back(g);
  }
  return basis;
}

RVec hermitian_coordinates(const HermitianOperator& a) {
  const auto basis = gell_mann_basis(a.dim());
  RVec v(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) v(static_cast<Eigen::Index>(k)) = trace_inner(basis[k], a);
  return v;
}

HermitianOperator from_coordinates(const RVec& coords, int d) {
  const auto basis = gell_mann_basis(d);
  if (coords.size() != static_cast<Eigen::Index>(basis.size())) {
    throw DimensionMismatch("from_coordinates: expected d^2 coordinates");
  }
  CMat m = CMat::Zero(d, d);
  for (std::size_t k = 0; k < basis.size(); ++k) m += coords(static_cast<Eigen::Index>(k)) * basis[k].matrix();
  return HermitianOperator(m);
}

namespace {

RMat coordinate_matrix(const std::vector<HermitianOperator>& ops) {
  const int d = ops.front().dim();
  RMat v(d * d, static_cast<Eigen::Index>(ops.size()));
  for (std::size_t x = 0; x < ops.size(); ++x) {
    if (ops[x].dim() != d) throw DimensionMismatch("operators of different dimension");
    v.col(static_cast<Eigen::Index>(x)) = hermitian_coordinates(ops[x]);
  }
  return v;
}

}  // namespace

int span_rank(const std::vector<HermitianOperator>& ops) {
  if (ops.empty()) throw InvalidArgument("span_rank: empty list");
  const RMat v = coordinate_matrix(ops);
  Eigen::JacobiSVD<RMat> svd(v);
  const RVec& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > kRankTol * s(0)) ++rank;
  }
  return rank;
}

HermitianOperator positive_part(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a.matrix());
  RVec ev = es.eigenvalues().cwiseMax(Scalar(0));
  return HermitianOperator(es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint());
}

Decomposition decompose_over(const HermitianOperator& f, const std::vector<HermitianOperator>& ops) {
  if (ops.empty()) throw InvalidArgument("decompose_over: empty operator list");
  if (ops.front().dim() != f.dim()) throw DimensionMismatch("decompose_over: dimension mismatch");
  const RMat v = coordinate_matrix(ops);
  const RVec target = hermitian_coordinates(f);
  Decomposition out;
  out.coefficients = v.completeOrthogonalDecomposition().solve(target);
  out.residual = (v * out.coefficients - target).norm();
  const Scalar fnorm = f.matrix().norm();
  if (out.residual > 1e-8 * fnorm) {
    throw NotInSpan("operator is not in the real span of the supplied set (residual " +
                    std::to_string(out.residual) + ")");
  }
  return out;
}

}  // namespace sqpm
