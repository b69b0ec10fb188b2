#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "sqpm/herm.hpp"

namespace sqpm::sdp {

/// One block's share of a linear constraint: <matrix, X_block>.
struct BlockTerm {
  int block = 0;
  RMat matrix;
};

struct Constraint {
  std::vector<BlockTerm> terms;
  Scalar rhs = 0;
};

/// Block-diagonal program in standard primal form
///
///   minimize   sum_k <C_k, X_k>
///   subject to sum_k <A_ik, X_k> = b_i,   X_k >= 0.
///
/// A block of size 1 is a nonnegative scalar. Dual:
///
///   maximize   b^T y
///   subject to C_k - sum_i y_i A_ik = Z_k >= 0.
struct SdpProblem {
  std::vector<int> block_sizes;
  std::vector<RMat> objective;  // one per block; empty means zero
  std::vector<Constraint> constraints;

  int num_blocks() const { return static_cast<int>(block_sizes.size()); }
  int num_constraints() const { return static_cast<int>(constraints.size()); }
  /// Throws InvalidArgument unless sizes, symmetry and indices are consistent.
  void validate() const;
};

enum class Status { Optimal, PrimalInfeasible, DualInfeasible, MaxIterations, NumericalError };

std::string to_string(Status s);

struct SdpSolution;

struct SolveOptions {
  Scalar tol_gap = 1e-8;
  Scalar tol_feas = 1e-8;
  /// Residual tolerance for infeasibility certificates.
  Scalar tol_infeas = 1e-7;
  int max_iter = 200;
  /// Called with every finished solution (diagnostics and auditing).
  std::function<void(const SdpSolution&)> on_solve;
};

struct SdpSolution {
  Status status = Status::NumericalError;
  std::vector<RMat> primal;      // X_k
  RVec dual;                     // y
  std::vector<RMat> dual_slack;  // Z_k
  Scalar primal_value = 0;
  Scalar dual_value = 0;
  /// sum_k <X_k, Z_k>; the objective mismatch is bounded by the residuals.
  Scalar gap = 0;
  /// ||b - A(X)|| / (1 + ||b||).
  Scalar primal_residual = 0;
  /// ||C - A^T y - Z|| / (1 + ||C||).
  Scalar dual_residual = 0;
  int iterations = 0;
  /// Rows dropped by presolve as linear combinations of others (dual value 0).
  std::vector<int> dropped_constraints;

  bool optimal() const { return status == Status::Optimal; }
};

/// Infeasible-start primal-dual interior point method (HKM direction,
/// Mehrotra predictor-corrector, dense Schur complement). Deterministic.
SdpSolution solve(const SdpProblem& problem, const SolveOptions& options = {});

/// Result of locating the feasibility threshold of a monotone family.
struct BisectionResult {
  Scalar critical = 0;
  /// Final bracket: infeasible side first, feasible side second.
  std::pair<Scalar, Scalar> bracket;
  /// Coarse grid probes (parameter, feasible), ascending.
  std::vector<std::pair<Scalar, bool>> probes;
  int evaluations = 0;
};

using FeasibilityTest = std::function<bool(Scalar)>;

/// Bisection on a feasibility test that flips at most once on [lo, hi].
///
/// The interval is first probed on `grid_points` equally spaced values; more
/// than one flip raises NonMonotoneDetected. A family feasible everywhere
/// returns the boundary on the feasible side nearest the infeasible
/// direction (lo for increasing feasibility).
BisectionResult bisect_feasibility(const FeasibilityTest& feasible, Scalar lo, Scalar hi, Scalar tol,
                                   int grid_points = 11);

/// Convenience overload: feasible iff solve() of the built problem is Optimal.
BisectionResult bisect_feasibility(const std::function<SdpProblem(Scalar)>& builder, Scalar lo, Scalar hi,
                                   Scalar tol, const SolveOptions& options = {}, int grid_points = 11);

/// Frobenius inner product of symmetric matrices.
inline Scalar inner(const RMat& a, const RMat& b) { return (a.array() * b.array()).sum(); }

}  // namespace sqpm::sdp
