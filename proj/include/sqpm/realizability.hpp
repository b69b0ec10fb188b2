#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sqpm/scenario.hpp"
#include "sqpm/sdp.hpp"

namespace sqpm {

/// Decision threshold on optimal noise weights.
inline constexpr Scalar kDecisionTol = 1e-7;
/// Tolerance of post-hoc operator-inequality checks on witnesses.
inline constexpr Scalar kWitnessTol = 1e-7;

struct RobustnessOptions {
  sdp::SolveOptions solver{};
  /// Largest admitted mother-measurement outcome count o^m.
  std::uint64_t mother_cap = 4096;
};

/// Coefficient table indexed [b][x][y].
using Coefficients = std::vector<std::vector<std::vector<Scalar>>>;

Coefficients zero_coefficients(int o, int num_states, int m);

/// All outcome strings a in [o]^m; a[y] is the answer to question y.
std::vector<std::vector<int>> outcome_strings(int m, int o);

/// Uniform noise q(b|x,y) = 1/o on the given states.
Behaviour white_noise(const StateList& states, int m, int o);
/// Measurement-dependent white noise q(b|x,y) = Tr(M_{b|y})/d.
Behaviour white_noise(const StateList& states, const MeasurementSet& m);

struct QuantumRobustness {
  /// Optimal value of the generalized-noise program (>= 0).
  Scalar eta = 0;
  bool realizable = false;
  /// Measurements of the optimal point; reproduce P when realizable.
  std::optional<MeasurementSet> measurements;
  sdp::SdpSolution solver;
};

/// min eta s.t. (1-eta) P + q = Tr(rho_x M_{b|y}), q >= 0, sum_b q = eta.
QuantumRobustness quantum_robustness(const Behaviour& b, const RobustnessOptions& opt = {});

struct CcRobustness {
  Scalar eta = 0;
  /// max(eta, 0)
  Scalar robustness = 0;
  bool realizable = false;
  /// Mother POVM over outcome_strings(m, o).
  std::vector<HermitianOperator> mother;
  sdp::SdpSolution solver;
};

/// Generalized robustness of non-CC-realizability (noise POVMs sum to eta I).
CcRobustness cc_robustness(const Behaviour& b, const RobustnessOptions& opt = {});

/// The same program with the noise fixed to `noise` (mixed as (1-eta) P + eta q).
CcRobustness cc_fixed_noise_robustness(const Behaviour& b, const Behaviour& noise, const RobustnessOptions& opt = {});

/// Fixed white noise Tr(M_{b|y})/d; b must equal born_behaviour(b.states(), m)
/// to kProbTol, else BehaviourMeasurementMismatch.
CcRobustness cc_white_noise_robustness(const Behaviour& b, const MeasurementSet& m, const RobustnessOptions& opt = {});

/// sum_{b,x,y} mu_{bxy} P(b|rho_x,y) >= beta = Tr(B) on every CC behaviour.
struct QcWitness {
  Coefficients mu;
  HermitianOperator bound_operator;
  Scalar beta = 0;
};

/// sum_{b,x,y} lambda_{bxy} P(b|rho_x,y) >= alpha = sum_y Tr(A_y) on every
/// quantum behaviour.
struct PostQuantumWitness {
  Coefficients lambda;
  std::vector<HermitianOperator> a;
  Scalar alpha = 0;
};

template <typename W>
struct WitnessReport {
  W witness;
  /// sum coefficients * P on the input.
  Scalar value = 0;
  /// bound - value (> 0 means violated).
  Scalar violation = 0;
  /// Optimal noise weight of the fixed-noise primal.
  Scalar robustness = 0;
  sdp::SdpSolution solver;
};

/// Dual of the fixed-noise quantum program. Throws WitnessUnavailable when
/// the input is quantum-realizable. The default noise is uniform.
WitnessReport<PostQuantumWitness> post_quantum_witness(const Behaviour& b, const std::optional<Behaviour>& noise = {},
                                                       const RobustnessOptions& opt = {});

/// Dual of the fixed-noise CC program. Throws WitnessUnavailable when the
/// input is CC-realizable. The default noise is uniform.
WitnessReport<QcWitness> qc_witness(const Behaviour& b, const std::optional<Behaviour>& noise = {},
                                    const RobustnessOptions& opt = {});

Scalar evaluate_witness(const QcWitness& w, const Behaviour& b);
Scalar evaluate_witness(const PostQuantumWitness& w, const Behaviour& b);

/// min over outcome strings a of lambda_min(sum mu_{bxy} rho_x delta_{a_y,b} - B).
Scalar verify_witness(const QcWitness& w, const StateList& states);
/// min over (b, y) of lambda_min(sum_x lambda_{bxy} rho_x - A_y).
Scalar verify_witness(const PostQuantumWitness& w, const StateList& states);

/// sum coefficients * (q - P).
Scalar witness_normalization(const Coefficients& c, const Behaviour& b, const Behaviour& noise);

/// Fixes the gauge of a witness: each (x, y) column is shifted so that
/// max_b coefficient = 0 (with the bound operators shifted accordingly), then
/// the whole witness is rescaled so that sum coefficients * (q - P) = 1.
/// Throws DegenerateScaling when that normalization is not positive.
QcWitness canonicalize(const QcWitness& w, const Behaviour& b, const Behaviour& noise);
PostQuantumWitness canonicalize(const PostQuantumWitness& w, const Behaviour& b, const Behaviour& noise);

/// Raw programs, for inspection and dumping.
sdp::SdpProblem quantum_robustness_problem(const Behaviour& b);
sdp::SdpProblem cc_robustness_problem(const Behaviour& b, const RobustnessOptions& opt = {});
sdp::SdpProblem cc_fixed_noise_problem(const Behaviour& b, const Behaviour& noise, const RobustnessOptions& opt = {});

}  // namespace sqpm
