#include "sqpm/scenario.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sqpm/channels.hpp"

namespace sqpm {

QuantumState::QuantumState(HermitianOperator op) : op_(std::move(op)) {
  if (std::abs(op_.trace() - 1) > kProbTol) {
    throw InvalidArgument("QuantumState: trace " + std::to_string(op_.trace()) + " differs from 1");
  }
  if (min_eigenvalue(op_) < -kProbTol) throw InvalidArgument("QuantumState: operator is not positive semidefinite");
}

QuantumState QuantumState::pure(const Eigen::VectorXcd& v) { return QuantumState(HermitianOperator::projector(v)); }

QuantumState QuantumState::maximally_mixed(int d) {
  if (d < 1) throw InvalidArgument("QuantumState: dimension must be >= 1");
  return QuantumState(CMat::Identity(d, d) / Scalar(d));
}

namespace qubit {
QuantumState zero() { return QuantumState::pure(Eigen::Vector2cd(1, 0)); }
QuantumState one() { return QuantumState::pure(Eigen::Vector2cd(0, 1)); }
QuantumState plus() { return QuantumState::pure(Eigen::Vector2cd(1, 1)); }
QuantumState minus() { return QuantumState::pure(Eigen::Vector2cd(1, -1)); }
QuantumState right() { return QuantumState::pure(Eigen::Vector2cd(1, Complex(0, 1))); }
QuantumState mixed() { return QuantumState::maximally_mixed(2); }
}  // namespace qubit

Povm::Povm(std::vector<HermitianOperator> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw InvalidArgument("Povm: no elements");
  const int d = elements_.front().dim();
  CMat sum = CMat::Zero(d, d);
  for (std::size_t b = 0; b < elements_.size(); ++b) {
    const auto& e = elements_[b];
    if (e.dim() != d) throw DimensionMismatch("Povm: elements of different dimension");
    if (min_eigenvalue(e) < -kProbTol) {
      throw InvalidArgument("Povm: element " + std::to_string(b) + " is not positive semidefinite");
    }
    sum += e.matrix();
  }
  if ((sum - CMat::Identity(d, d)).cwiseAbs().maxCoeff() > kProbTol) {
    throw InvalidArgument("Povm: elements do not sum to the identity");
  }
}

Povm Povm::binary(const HermitianOperator& observable) {
  const int d = observable.dim();
  const CMat id = CMat::Identity(d, d);
  return Povm({HermitianOperator((id + observable.matrix()) / 2), HermitianOperator((id - observable.matrix()) / 2)});
}

Povm Povm::padded(int o) const {
  if (o < outcomes()) throw InvalidArgument("Povm::padded: cannot drop outcomes");
  std::vector<HermitianOperator> els = elements_;
  while (static_cast<int>(els.size()) < o) els.push_back(HermitianOperator::zero(dim()));
  return Povm(std::move(els));
}

MeasurementSet::MeasurementSet(std::vector<Povm> povms) : povms_(std::move(povms)) {
  if (povms_.empty()) throw InvalidArgument("MeasurementSet: no measurements");
  int o = 0;
  for (const auto& p : povms_) {
    if (p.dim() != povms_.front().dim()) throw DimensionMismatch("MeasurementSet: POVMs of different dimension");
    o = std::max(o, p.outcomes());
  }
  for (auto& p : povms_) {
    if (p.outcomes() < o) p = p.padded(o);
  }
}

MeasurementSet pauli_measurements() {
  return MeasurementSet({Povm::binary(pauli::X()), Povm::binary(pauli::Y()), Povm::binary(pauli::Z())});
}

namespace {

constexpr Scalar kNonnegTol = 1e-12;

void check_shape(const ProbabilityTable& t) {
  if (t.empty() || t.front().empty() || t.front().front().empty()) {
    throw InvalidArgument("Behaviour: empty probability table");
  }
  const std::size_t m = t.front().size();
  const std::size_t o = t.front().front().size();
  for (const auto& row : t) {
    if (row.size() != m) throw DimensionMismatch("Behaviour: ragged table (measurement count)");
    for (const auto& dist : row) {
      if (dist.size() != o) throw DimensionMismatch("Behaviour: ragged table (outcome count)");
    }
  }
}

}  // namespace

Behaviour::Behaviour(StateList states, ProbabilityTable table) : states_(std::move(states)), table_(std::move(table)) {
  check_shape(table_);
  if (states_.size() != table_.size()) {
    throw DimensionMismatch("Behaviour: " + std::to_string(states_.size()) + " states but " +
                            std::to_string(table_.size()) + " table rows");
  }
  for (const auto& s : states_) {
    if (s.dim() != states_.front().dim()) throw DimensionMismatch("Behaviour: states of different dimension");
  }
  for (std::size_t x = 0; x < table_.size(); ++x) {
    for (std::size_t y = 0; y < table_[x].size(); ++y) {
      auto& dist = table_[x][y];
      Scalar sum = 0;
      for (auto& p : dist) {
        if (!std::isfinite(p)) throw InvalidArgument("Behaviour: non-finite probability");
        if (p < -kProbTol) {
          throw InvalidArgument("Behaviour: negative probability at [" + std::to_string(x) + "][" +
                                std::to_string(y) + "]");
        }
        p = std::max(p, Scalar(0));
        sum += p;
      }
      if (std::abs(sum - 1) > kProbTol) {
        throw InvalidArgument("Behaviour: distribution [" + std::to_string(x) + "][" + std::to_string(y) +
                              "] sums to " + std::to_string(sum));
      }
      for (auto& p : dist) p /= sum;
    }
  }
}

bool Behaviour::same_scenario(const Behaviour& other) const {
  if (num_states() != other.num_states() || num_measurements() != other.num_measurements() ||
      outcomes() != other.outcomes() || dim() != other.dim()) {
    return false;
  }
  for (int x = 0; x < num_states(); ++x) {
    const CMat diff = states_[static_cast<std::size_t>(x)].matrix() - other.states_[static_cast<std::size_t>(x)].matrix();
    if (diff.cwiseAbs().maxCoeff() > kProbTol) return false;
  }
  return true;
}

Behaviour born_behaviour(const StateList& states, const MeasurementSet& m) {
  if (states.empty()) throw InvalidArgument("born_behaviour: no states");
  ProbabilityTable t(states.size());
  for (std::size_t x = 0; x < states.size(); ++x) {
    if (states[x].dim() != m.dim()) throw DimensionMismatch("born_behaviour: state/measurement dimension mismatch");
    t[x].resize(static_cast<std::size_t>(m.size()));
    for (int y = 0; y < m.size(); ++y) {
      auto& dist = t[x][static_cast<std::size_t>(y)];
      for (int b = 0; b < m.outcomes(); ++b) dist.push_back(trace_inner(states[x].op(), m.element(b, y)));
    }
  }
  return Behaviour(states, std::move(t));
}

Behaviour cc_behaviour(const Povm& n, const ResponseTable& f, const StateList& states) {
  if (states.empty()) throw InvalidArgument("cc_behaviour: no states");
  if (f.empty()) throw InvalidArgument("cc_behaviour: empty response table");
  const std::size_t na = static_cast<std::size_t>(n.outcomes());
  const std::size_t o = f.front().empty() ? 0 : f.front().front().size();
  if (o == 0) throw InvalidArgument("cc_behaviour: response table has no outcomes");
  for (std::size_t y = 0; y < f.size(); ++y) {
    if (f[y].size() != na) {
      throw DimensionMismatch("cc_behaviour: response table for y=" + std::to_string(y) + " needs " +
                              std::to_string(na) + " rows");
    }
    for (const auto& dist : f[y]) {
      if (dist.size() != o) throw DimensionMismatch("cc_behaviour: ragged response table");
      Scalar sum = 0;
      for (Scalar p : dist) {
        if (!(p >= -kProbTol)) throw InvalidArgument("cc_behaviour: negative response probability");
        sum += p;
      }
      if (std::abs(sum - 1) > kProbTol) throw InvalidArgument("cc_behaviour: response distribution not normalized");
    }
  }
  ProbabilityTable t(states.size(), std::vector<std::vector<Scalar>>(f.size(), std::vector<Scalar>(o, 0)));
  for (std::size_t x = 0; x < states.size(); ++x) {
    if (states[x].dim() != n.dim()) throw DimensionMismatch("cc_behaviour: state/POVM dimension mismatch");
    for (std::size_t a = 0; a < na; ++a) {
      const Scalar pa = trace_inner(states[x].op(), n[static_cast<int>(a)]);
      for (std::size_t y = 0; y < f.size(); ++y) {
        for (std::size_t b = 0; b < o; ++b) t[x][y][b] += pa * f[y][a][b];
      }
    }
  }
  return Behaviour(states, std::move(t));
}

BehaviourReport validate_behaviour(const ProbabilityTable& table) {
  BehaviourReport r;
  try {
    check_shape(table);
  } catch (const Error&) {
    r.ok = false;
    r.normalization = std::numeric_limits<Scalar>::infinity();
    return r;
  }
  for (const auto& row : table) {
    for (const auto& dist : row) {
      Scalar sum = 0;
      for (Scalar p : dist) {
        if (p < 0) r.nonnegativity = std::max(r.nonnegativity, -p);
        sum += p;
      }
      r.normalization = std::max(r.normalization, std::abs(sum - 1));
    }
  }
  r.ok = r.nonnegativity <= kNonnegTol && r.normalization <= kProbTol;
  return r;
}

std::uint64_t deterministic_vertex_count(int num_states, int m, int o) {
  if (num_states < 1 || m < 1 || o < 1) throw InvalidArgument("deterministic_vertex_count: sizes must be >= 1");
  constexpr std::uint64_t limit = std::uint64_t(1) << 63;
  const std::uint64_t exponent = static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(num_states);
  std::uint64_t v = 1;
  for (std::uint64_t i = 0; i < exponent; ++i) {
    if (v > (limit - 1) / static_cast<std::uint64_t>(o)) {
      throw Overflow("deterministic_vertex_count: o^(m|S|) exceeds 2^63");
    }
    v *= static_cast<std::uint64_t>(o);
    if (o == 1) break;
  }
  return v;
}

StateList apply_channel(const StateList& states, const DepolarisingChannel& ch) {
  StateList out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(depolarise(ch, s));
  return out;
}

}  // namespace sqpm
