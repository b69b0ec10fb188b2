#pragma once

#include <vector>

#include "sqpm/herm.hpp"
#include "sqpm/sdp.hpp"

namespace sqpm::sdp {

/// Variable handle inside a Model.
struct Var {
  int id = -1;
};

/// Real linear functional of model variables:
/// sum c * s (scalar variables) + sum Tr(K H) (Hermitian variables).
class LinearForm {
 public:
  LinearForm& add(Var scalar_var, Scalar c);
  LinearForm& add(Var hermitian_var, const HermitianOperator& k);

 private:
  friend class Model;
  struct Term {
    Var var;
    Scalar c = 0;
    CMat k;  // empty for scalar terms
  };
  std::vector<Term> terms_;
};

/// Hermitian-valued linear map: sum c * H (Hermitian variables) + sum s * K
/// (scalar variables times fixed operators).
class HermitianForm {
 public:
  HermitianForm& add(Var hermitian_var, Scalar c);
  HermitianForm& add(Var scalar_var, const HermitianOperator& k);

 private:
  friend class Model;
  struct Term {
    Var var;
    Scalar c = 0;
    CMat k;
  };
  std::vector<Term> terms_;
};

/// Handle of a Hermitian equality: d^2 consecutive rows starting at `first`.
struct HermitianRow {
  int first = 0;
  int dim = 0;
};

class ModelSolution;

/// Builder for conic programs over nonnegative scalars and complex PSD
/// matrices. Hermitian blocks are stored through real_embedding; a Hermitian
/// equality is imposed coordinate-wise in the Gell-Mann basis.
class Model {
 public:
  Var add_scalar();
  Var add_hermitian(int dim);

  /// Minimize the given form (default objective is zero).
  void minimize(const LinearForm& f);
  int add_constraint(const LinearForm& f, Scalar rhs);
  HermitianRow add_constraint(const HermitianForm& f, const HermitianOperator& rhs);

  SdpProblem problem() const;
  ModelSolution solve(const SolveOptions& options = {}) const;

  int dim_of(Var v) const;
  bool is_scalar(Var v) const { return dim_of(v) == 0; }

 private:
  struct VarInfo {
    int dim = 0;  // 0 for scalar
  };
  void check(Var v, bool want_scalar) const;
  RMat block_coefficient(Var v, Scalar c, const CMat& k) const;

  std::vector<VarInfo> vars_;
  LinearForm objective_;
  std::vector<Constraint> rows_;
};

class ModelSolution {
 public:
  ModelSolution(const Model& model, SdpSolution raw) : model_(&model), raw_(std::move(raw)) {}

  const SdpSolution& raw() const noexcept { return raw_; }
  Status status() const noexcept { return raw_.status; }
  bool optimal() const noexcept { return raw_.optimal(); }

  Scalar value(Var scalar_var) const;
  HermitianOperator hermitian_value(Var hermitian_var) const;
  /// Multiplier y_i of a scalar row.
  Scalar dual(int row) const;
  /// Multiplier operator sum_k y_k G_k of a Hermitian equality.
  HermitianOperator dual(const HermitianRow& row) const;
  /// Dual slack of a scalar variable.
  Scalar slack(Var scalar_var) const;
  /// Dual slack of a Hermitian variable as an operator on C^d.
  HermitianOperator hermitian_slack(Var hermitian_var) const;

 private:
  const Model* model_;
  SdpSolution raw_;
};

}  // namespace sqpm::sdp
