#pragma once

#include <optional>
#include <vector>

#include "sqpm/realizability.hpp"
#include "sqpm/scenario.hpp"
#include "sqpm/sdp.hpp"

namespace sqpm {

/// sum_{b,y} Tr(F_{by} M_{b|y}) >= gamma on every compatible set.
struct MiWitness {
  std::vector<std::vector<HermitianOperator>> f;  // [b][y]
  Scalar gamma = 0;
};

struct IncompatRobustness {
  Scalar eta = 0;
  /// max(eta, 0)
  Scalar robustness = 0;
  bool compatible = false;
  /// Mother POVM over outcome_strings(m, o) at the optimal mixture.
  std::vector<HermitianOperator> mother;
  /// Dual certificate; violated by the input by `eta` when incompatible.
  MiWitness witness;
  sdp::SdpSolution solver;
};

/// min eta s.t. (1-eta) M_{b|y} + eta Q_{b|y} = sum_a N_a delta_{a_y,b} with
/// N and every Q_y POVMs.
IncompatRobustness incompat_robustness(const MeasurementSet& m, const RobustnessOptions& opt = {});

/// Whether a mother POVM with deterministic responses reproduces m.
bool jm_feasible(const MeasurementSet& m, const RobustnessOptions& opt = {});

struct WhiteNoiseIncompat {
  /// Critical noise eta = 1 - t of the depolarized set D_t(M).
  Scalar eta = 0;
  sdp::BisectionResult bisection;
};

/// Bisects jm_feasible(D_{1-eta}(M)) over eta in [0, 1] to `tol`.
WhiteNoiseIncompat white_noise_incompat(const MeasurementSet& m, Scalar tol = 1e-5, const RobustnessOptions& opt = {});

struct RestrictedCompatibility {
  bool compatible = false;
  /// Generalized robustness restricted to the states.
  Scalar robustness = 0;
};

/// Compatibility on a state set: cc_robustness of born_behaviour(states, m).
RestrictedCompatibility compat_on_states(const MeasurementSet& m, const StateList& states,
                                         const RobustnessOptions& opt = {});

/// sum_{b,y} Tr(F_{by} M_{b|y}).
Scalar evaluate_witness(const MiWitness& w, const MeasurementSet& m);

struct MiBound {
  /// min over mother POVMs N of sum_a Tr(N_a sum_y F_{a_y,y}).
  Scalar value = 0;
  /// Optimal B with sum_y F_{a_y,y} >= B for all a, Tr(B) = value.
  HermitianOperator bound_operator;
};

/// Tightest bound of the witness over compatible sets (a valid witness has
/// value >= gamma).
MiBound mi_witness_bound(const MiWitness& w, const RobustnessOptions& opt = {});

/// QC witness with mu_{bxy} = lambda^{by}_x from F_{by} = sum_x lambda^{by}_x rho_x
/// and beta = gamma. Defaults to spanning_states(d). Throws NotInSpan, or
/// InvalidArgument when gamma exceeds the tightest bound.
QcWitness mi_to_qc(const MiWitness& w, const std::optional<StateList>& states = {}, const RobustnessOptions& opt = {});

struct Subensemble {
  QuantumState state;
  Scalar prior = 0;
};

struct DiscriminationGame {
  std::vector<std::vector<Subensemble>> ensembles;  // [y][b]
  Scalar nu = 0;
  Scalar alpha = 0;
};

/// p^y(b) sigma^y_b = alpha (sum_x mu_{bxy} rho_x + nu I) with
/// nu = sum_{b,y} max_x |mu_{bxy}| and alpha = (sum mu + o m nu / d)^-1.
/// Priors are the traces of the scaled operators (not renormalized). Throws
/// DegenerateScaling when the alpha denominator is <= 1e-12 and
/// InvalidArgument when a scaled operator is not positive semidefinite.
DiscriminationGame qc_to_discrimination(const QcWitness& w, const StateList& states, int d);

}  // namespace sqpm
