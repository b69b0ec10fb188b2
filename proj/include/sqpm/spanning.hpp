#pragma once

#include "sqpm/herm.hpp"
#include "sqpm/scenario.hpp"

namespace sqpm {

/// d^2 states whose real span is Herm(C^d): I/d followed by the normalized
/// positive part of every traceless Gell-Mann generator.
StateList spanning_states(int d);

/// Real span dimension of a state list.
int span_rank(const StateList& states);

/// Coefficients lambda_x with sum_x lambda_x rho_x = f; throws NotInSpan when
/// the residual exceeds 1e-8 ||f||.
Decomposition decompose_over_states(const HermitianOperator& f, const StateList& states);

}  // namespace sqpm
