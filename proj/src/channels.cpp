#include "sqpm/channels.hpp"

#include <cmath>

namespace sqpm {

DepolarisingChannel::DepolarisingChannel(int dim, Scalar t) : dim_(dim), t_(t) {
  if (dim < 1) throw InvalidArgument("DepolarisingChannel: dim must be >= 1");
  if (!(t >= 0 && t <= 1)) throw InvalidArgument("DepolarisingChannel: t must lie in [0, 1]");
}

HermitianOperator depolarise(const DepolarisingChannel& ch, const HermitianOperator& a) {
  if (a.dim() != ch.dim()) throw DimensionMismatch("depolarise: channel/operator dimension mismatch");
  const int d = ch.dim();
  return HermitianOperator(ch.t() * a.matrix() + (1 - ch.t()) * a.trace() / d * CMat::Identity(d, d));
}

QuantumState depolarise(const DepolarisingChannel& ch, const QuantumState& rho) {
  return QuantumState(depolarise(ch, rho.op()));
}

MeasurementSet depolarise_measurements(const DepolarisingChannel& ch, const MeasurementSet& m) {
  std::vector<Povm> out;
  out.reserve(static_cast<std::size_t>(m.size()));
  for (const auto& povm : m.povms()) {
    std::vector<HermitianOperator> els;
    for (const auto& e : povm.elements()) els.push_back(depolarise(ch, e));
    out.emplace_back(std::move(els));
  }
  return MeasurementSet(std::move(out));
}

Scalar threshold_projective(int d) {
  if (d < 2) throw InvalidArgument("threshold_projective: d must be >= 2");
  Scalar h = 0;
  for (int k = 1; k <= d; ++k) h += Scalar(1) / k;
  return (h - 1) / (d - 1);
}

AsPrintedThreshold threshold_all_povms(int d) {
  if (d < 2) throw InvalidArgument("threshold_all_povms: d must be >= 2");
  const Scalar v = (3.0 * d - 1) * std::pow(Scalar(d - 1), d - 1) / ((d - 1) * std::pow(Scalar(d), d));
  return {v, v >= 0 && v <= 1};
}

Scalar threshold_entanglement_breaking(int d) {
  if (d < 2) throw InvalidArgument("threshold_entanglement_breaking: d must be >= 2");
  return Scalar(1) / (d + 1);
}

}  // namespace sqpm
