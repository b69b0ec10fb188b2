#include "sqpm/sdp_model.hpp"

#include <string>

namespace sqpm::sdp {

LinearForm& LinearForm::add(Var scalar_var, Scalar c) {
  terms_.push_back({scalar_var, c, CMat()});
  return *this;
}

LinearForm& LinearForm::add(Var hermitian_var, const HermitianOperator& k) {
  terms_.push_back({hermitian_var, 0, k.matrix()});
  return *this;
}

HermitianForm& HermitianForm::add(Var hermitian_var, Scalar c) {
  terms_.push_back({hermitian_var, c, CMat()});
  return *this;
}

HermitianForm& HermitianForm::add(Var scalar_var, const HermitianOperator& k) {
  terms_.push_back({scalar_var, 0, k.matrix()});
  return *this;
}

Var Model::add_scalar() {
  vars_.push_back({0});
  return {static_cast<int>(vars_.size()) - 1};
}

Var Model::add_hermitian(int dim) {
  if (dim < 1) throw InvalidArgument("Model: Hermitian variable needs dim >= 1");
  vars_.push_back({dim});
  return {static_cast<int>(vars_.size()) - 1};
}

int Model::dim_of(Var v) const {
  if (v.id < 0 || v.id >= static_cast<int>(vars_.size())) throw InvalidArgument("Model: unknown variable");
  return vars_[static_cast<std::size_t>(v.id)].dim;
}

void Model::check(Var v, bool want_scalar) const {
  if (is_scalar(v) != want_scalar) {
    throw InvalidArgument(std::string("Model: expected a ") + (want_scalar ? "scalar" : "Hermitian") +
                          " variable");
  }
}

RMat Model::block_coefficient(Var v, Scalar c, const CMat& k) const {
  if (k.size() == 0) {
    check(v, true);
    return RMat::Constant(1, 1, c);
  }
  check(v, false);
  if (k.rows() != dim_of(v)) throw DimensionMismatch("Model: coefficient dimension mismatch");
  return real_embedding(k) / 2;
}

void Model::minimize(const LinearForm& f) { objective_ = f; }

int Model::add_constraint(const LinearForm& f, Scalar rhs) {
  Constraint con;
  con.rhs = rhs;
  for (const auto& t : f.terms_) con.terms.push_back({t.var.id, block_coefficient(t.var, t.c, t.k)});
  rows_.push_back(std::move(con));
  return static_cast<int>(rows_.size()) - 1;
}

HermitianRow Model::add_constraint(const HermitianForm& f, const HermitianOperator& rhs) {
  const int d = rhs.dim();
  HermitianRow handle{static_cast<int>(rows_.size()), d};
  for (const auto& g : gell_mann_basis(d)) {
    Constraint con;
    con.rhs = trace_inner(g, rhs);
    for (const auto& t : f.terms_) {
      if (t.k.size() == 0) {
        check(t.var, false);
        if (dim_of(t.var) != d) throw DimensionMismatch("Model: Hermitian equality dimension mismatch");
        con.terms.push_back({t.var.id, real_embedding(t.c * g.matrix()) / 2});
      } else {
        check(t.var, true);
        if (t.k.rows() != d) throw DimensionMismatch("Model: Hermitian equality dimension mismatch");
        con.terms.push_back({t.var.id, RMat::Constant(1, 1, trace_inner(g, HermitianOperator(t.k)))});
      }
    }
    rows_.push_back(std::move(con));
  }
  return handle;
}

SdpProblem Model::problem() const {
  SdpProblem p;
  for (const auto& v : vars_) p.block_sizes.push_back(v.dim == 0 ? 1 : 2 * v.dim);
  p.objective.resize(vars_.size());
  for (std::size_t k = 0; k < vars_.size(); ++k) p.objective[k] = RMat::Zero(p.block_sizes[k], p.block_sizes[k]);
  for (const auto& t : objective_.terms_) {
    p.objective[static_cast<std::size_t>(t.var.id)] += block_coefficient(t.var, t.c, t.k);
  }
  p.constraints = rows_;
  return p;
}

ModelSolution Model::solve(const SolveOptions& options) const {
  return ModelSolution(*this, sdp::solve(problem(), options));
}

Scalar ModelSolution::value(Var v) const {
  if (!model_->is_scalar(v)) throw InvalidArgument("ModelSolution: not a scalar variable");
  return raw_.primal[static_cast<std::size_t>(v.id)](0, 0);
}

HermitianOperator ModelSolution::hermitian_value(Var v) const {
  if (model_->is_scalar(v)) throw InvalidArgument("ModelSolution: not a Hermitian variable");
  return HermitianOperator(complex_from_embedding(raw_.primal[static_cast<std::size_t>(v.id)]));
}

Scalar ModelSolution::dual(int row) const { return raw_.dual(row); }

HermitianOperator ModelSolution::dual(const HermitianRow& row) const {
  const auto basis = gell_mann_basis(row.dim);
  CMat y = CMat::Zero(row.dim, row.dim);
  for (std::size_t k = 0; k < basis.size(); ++k) y += raw_.dual(row.first + static_cast<int>(k)) * basis[k].matrix();
  return HermitianOperator(y);
}

Scalar ModelSolution::slack(Var v) const {
  if (!model_->is_scalar(v)) throw InvalidArgument("ModelSolution: not a scalar variable");
  return raw_.dual_slack[static_cast<std::size_t>(v.id)](0, 0);
}

HermitianOperator ModelSolution::hermitian_slack(Var v) const {
  if (model_->is_scalar(v)) throw InvalidArgument("ModelSolution: not a Hermitian variable");
  return HermitianOperator(2 * complex_from_embedding(raw_.dual_slack[static_cast<std::size_t>(v.id)]));
}

}  // namespace sqpm::sdp
