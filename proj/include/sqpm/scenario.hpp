#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "sqpm/herm.hpp"

namespace sqpm {

/// Probability/state tolerance for validated domain objects.
inline constexpr Scalar kProbTol = 1e-9;

/// Density operator: PSD to -kProbTol, unit trace to kProbTol.
class QuantumState {
 public:
  explicit QuantumState(HermitianOperator op);
  template <typename Derived>
  explicit QuantumState(const Eigen::MatrixBase<Derived>& m) : QuantumState(HermitianOperator(m)) {}

  static QuantumState pure(const Eigen::VectorXcd& v);
  static QuantumState maximally_mixed(int d);

  int dim() const noexcept { return op_.dim(); }
  const HermitianOperator& op() const noexcept { return op_; }
  const CMat& matrix() const noexcept { return op_.matrix(); }

 private:
  HermitianOperator op_;
};

using StateList = std::vector<QuantumState>;

/// Qubit states used throughout the examples.
namespace qubit {
QuantumState zero();
QuantumState one();
QuantumState plus();
QuantumState minus();
/// |r> = (|0> + i|1>)/sqrt(2)
QuantumState right();
QuantumState mixed();
}  // namespace qubit

/// Positive operator-valued measure; elements PSD and summing to I.
class Povm {
 public:
  explicit Povm(std::vector<HermitianOperator> elements);

  /// Two-outcome measurement {(I + A)/2, (I - A)/2} of an observable with
  /// spectrum in [-1, 1]; outcome 0 is the +1 eigenspace.
  static Povm binary(const HermitianOperator& observable);

  int dim() const noexcept { return elements_.front().dim(); }
  int outcomes() const noexcept { return static_cast<int>(elements_.size()); }
  const HermitianOperator& operator[](int b) const { return elements_.at(static_cast<std::size_t>(b)); }
  const std::vector<HermitianOperator>& elements() const noexcept { return elements_; }

  /// Copy extended with zero elements up to `o` outcomes.
  Povm padded(int o) const;

 private:
  std::vector<HermitianOperator> elements_;
};

/// m measurements with a common outcome count o (shorter POVMs are padded
/// with zero elements).
class MeasurementSet {
 public:
  explicit MeasurementSet(std::vector<Povm> povms);

  int dim() const noexcept { return povms_.front().dim(); }
  int size() const noexcept { return static_cast<int>(povms_.size()); }
  int outcomes() const noexcept { return povms_.front().outcomes(); }
  const Povm& operator[](int y) const { return povms_.at(static_cast<std::size_t>(y)); }
  /// M_{b|y}
  const HermitianOperator& element(int b, int y) const { return (*this)[y][b]; }
  const std::vector<Povm>& povms() const noexcept { return povms_; }

 private:
  std::vector<Povm> povms_;
};

/// {sigma_x, sigma_y, sigma_z} as binary measurements.
MeasurementSet pauli_measurements();

/// table[x][y][b]
using ProbabilityTable = std::vector<std::vector<std::vector<Scalar>>>;

/// State-conditioned behaviour P(b | rho_x, y) with its trusted states.
///
/// Construction accepts up to kProbTol of slack per entry and per (x, y)
/// normalization and renormalizes; larger violations throw InvalidArgument.
class Behaviour {
 public:
  Behaviour(StateList states, ProbabilityTable table);

  int num_states() const noexcept { return static_cast<int>(states_.size()); }
  int num_measurements() const noexcept { return static_cast<int>(table_.front().size()); }
  int outcomes() const noexcept { return static_cast<int>(table_.front().front().size()); }
  int dim() const noexcept { return states_.front().dim(); }

  const StateList& states() const noexcept { return states_; }
  const ProbabilityTable& table() const noexcept { return table_; }
  Scalar operator()(int x, int y, int b) const {
    return table_[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)][static_cast<std::size_t>(b)];
  }

  /// Same states, m and o (states compared entrywise to kProbTol).
  bool same_scenario(const Behaviour& other) const;

 private:
  StateList states_;
  ProbabilityTable table_;
};

/// P[x][y][b] = Tr(rho_x M_{b|y}).
Behaviour born_behaviour(const StateList& states, const MeasurementSet& m);

/// f[y][a][b] = f(b | y, a)
using ResponseTable = std::vector<std::vector<std::vector<Scalar>>>;

/// P[x][y][b] = sum_a Tr(rho_x N_a) f(b | y, a).
Behaviour cc_behaviour(const Povm& n, const ResponseTable& f, const StateList& states);

struct BehaviourReport {
  bool ok = true;
  /// Largest magnitude of a negative entry (0 if none).
  Scalar nonnegativity = 0;
  /// Largest |sum_b P(b|x,y) - 1|.
  Scalar normalization = 0;
  Scalar worst() const { return std::max(nonnegativity, normalization); }
};

/// Checks nonnegativity (to 1e-12) and per-(x, y) normalization (to 1e-9).
/// A ragged table is reported with normalization = infinity.
BehaviourReport validate_behaviour(const ProbabilityTable& table);
inline BehaviourReport validate_behaviour(const Behaviour& b) { return validate_behaviour(b.table()); }

/// o^(m |S|), the number of deterministic behaviours; throws Overflow at 2^63.
std::uint64_t deterministic_vertex_count(int num_states, int m, int o);

class DepolarisingChannel;

/// Maps every state through the channel.
StateList apply_channel(const StateList& states, const DepolarisingChannel& ch);

}  // namespace sqpm
