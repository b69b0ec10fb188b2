#include "sqpm/spanning.hpp"

namespace sqpm {

namespace {

std::vector<HermitianOperator> operators(const StateList& states) {
  std::vector<HermitianOperator> ops;
  ops.reserve(states.size());
  for (const auto& s : states) ops.push_back(s.op());
  return ops;
}

}  // namespace

StateList spanning_states(int d) {
  if (d < 2) throw InvalidArgument("spanning_states: d must be >= 2");
  const auto basis = gell_mann_basis(d);
  StateList out;
  out.push_back(QuantumState::maximally_mixed(d));
  for (std::size_t k = 1; k < basis.size(); ++k) {
    const HermitianOperator p = positive_part(basis[k]);
    out.emplace_back(p * (1 / p.trace()));
  }
  return out;
}

int span_rank(const StateList& states) {
  if (states.empty()) throw InvalidArgument("span_rank: empty list");
  return span_rank(operators(states));
}

Decomposition decompose_over_states(const HermitianOperator& f, const StateList& states) {
  if (states.empty()) throw InvalidArgument("decompose_over_states: empty state list");
  return decompose_over(f, operators(states));
}

}  // namespace sqpm
