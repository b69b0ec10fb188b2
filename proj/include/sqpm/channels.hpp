#pragma once

#include "sqpm/herm.hpp"
#include "sqpm/scenario.hpp"

namespace sqpm {

/// D_t(A) = t A + (1 - t) Tr(A) I/d, with transmittance t in [0, 1]
/// (noise eta = 1 - t).
class DepolarisingChannel {
 public:
  DepolarisingChannel(int dim, Scalar t);

  int dim() const noexcept { return dim_; }
  Scalar t() const noexcept { return t_; }
  Scalar noise() const noexcept { return 1 - t_; }

 private:
  int dim_;
  Scalar t_;
};

HermitianOperator depolarise(const DepolarisingChannel& ch, const HermitianOperator& a);
QuantumState depolarise(const DepolarisingChannel& ch, const QuantumState& rho);
/// Adjoint action on every element; D_t is self-adjoint.
MeasurementSet depolarise_measurements(const DepolarisingChannel& ch, const MeasurementSet& m);

/// t^proj_d = (1/(d-1)) (-1 + sum_{k=1}^d 1/k).
Scalar threshold_projective(int d);

struct AsPrintedThreshold {
  Scalar value = 0;
  /// False when the value is not a transmittance (outside [0, 1]).
  bool valid = true;
};

/// (3d-1)(d-1)^(d-1) / ((d-1) d^d), evaluated exactly as printed.
AsPrintedThreshold threshold_all_povms(int d);

/// 1/(d+1).
Scalar threshold_entanglement_breaking(int d);

}  // namespace sqpm
