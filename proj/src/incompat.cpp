#include "sqpm/incompat.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sqpm/channels.hpp"
#include "sqpm/sdp_model.hpp"
#include "sqpm/spanning.hpp"

namespace sqpm {

using sdp::HermitianForm;
using sdp::HermitianRow;
using sdp::LinearForm;
using sdp::Model;
using sdp::Var;

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

std::vector<std::vector<int>> mother_strings(int m, int o, const RobustnessOptions& opt) {
  std::uint64_t n = 0;
  try {
    n = deterministic_vertex_count(1, m, o);
  } catch (const Overflow&) {
    throw MotherTooLarge("mother measurement with o^m outcomes overflows");
  }
  if (n > opt.mother_cap) {
    throw MotherTooLarge("mother measurement needs " + std::to_string(n) + " outcomes (cap " +
                         std::to_string(opt.mother_cap) + ")");
  }
  return outcome_strings(m, o);
}

void check_witness_shape(const MiWitness& w) {
  if (w.f.empty() || w.f.front().empty()) throw InvalidArgument("MiWitness: no operators");
  const int d = w.f.front().front().dim();
  for (const auto& fb : w.f) {
    if (fb.size() != w.f.front().size()) throw DimensionMismatch("MiWitness: ragged operator table");
    for (const auto& op : fb) {
      if (op.dim() != d) throw DimensionMismatch("MiWitness: operators of different dimension");
    }
  }
}

// sum_y F_{a_y, y}
CMat witness_sum(const MiWitness& w, const std::vector<int>& a) {
  const int d = w.f.front().front().dim();
  CMat s = CMat::Zero(d, d);
  for (std::size_t y = 0; y < a.size(); ++y) s += w.f[u(a[y])][y].matrix();
  return s;
}

// Lowers B by the worst negativity of sum_y F_{a_y,y} - B over all strings.
HermitianOperator tighten(const MiWitness& w, const std::vector<std::vector<int>>& strings, HermitianOperator b) {
  Scalar worst = std::numeric_limits<Scalar>::infinity();
  for (const auto& a : strings) worst = std::min(worst, min_eigenvalue(HermitianOperator(witness_sum(w, a) - b.matrix())));
  if (worst < 0) b += worst * HermitianOperator::identity(b.dim());
  return b;
}

}  // namespace

IncompatRobustness incompat_robustness(const MeasurementSet& m, const RobustnessOptions& opt) {
  const int nm = m.size(), o = m.outcomes(), d = m.dim();
  const auto strings = mother_strings(nm, o, opt);
  Model model;
  const Var eta = model.add_scalar();
  std::vector<Var> mother;
  for (std::size_t a = 0; a < strings.size(); ++a) mother.push_back(model.add_hermitian(d));
  std::vector<std::vector<Var>> noise(u(o));  // [b][y]
  for (int k = 0; k < o; ++k) {
    for (int y = 0; y < nm; ++y) noise[u(k)].push_back(model.add_hermitian(d));
  }
  std::vector<std::vector<HermitianRow>> rows(u(o));
  for (int k = 0; k < o; ++k) {
    for (int y = 0; y < nm; ++y) {
      const HermitianOperator& mby = m.element(k, y);
      HermitianForm f;
      f.add(eta, -1.0 * mby).add(noise[u(k)][u(y)], 1.0);
      for (std::size_t a = 0; a < strings.size(); ++a) {
        if (strings[a][u(y)] == k) f.add(mother[a], -1.0);
      }
      rows[u(k)].push_back(model.add_constraint(f, -1.0 * mby));
    }
  }
  for (int y = 0; y < nm; ++y) {
    HermitianForm s;
    for (int k = 0; k < o; ++k) s.add(noise[u(k)][u(y)], 1.0);
    s.add(eta, -1.0 * HermitianOperator::identity(d));
    model.add_constraint(s, HermitianOperator::zero(d));
  }
  HermitianForm sum;
  for (const auto& v : mother) sum.add(v, 1.0);
  const HermitianRow mother_row = model.add_constraint(sum, HermitianOperator::identity(d));
  model.minimize(LinearForm().add(eta, 1.0));

  const auto sol = model.solve(opt.solver);
  if (!sol.optimal()) throw SolverFailure("incompat_robustness: solver returned " + sdp::to_string(sol.status()));
  IncompatRobustness r;
  r.eta = sol.value(eta);
  r.robustness = std::max<Scalar>(r.eta, 0);
  r.compatible = r.eta <= kDecisionTol;
  for (const auto& v : mother) r.mother.push_back(sol.hermitian_value(v));
  r.witness.f.assign(u(o), {});
  for (int k = 0; k < o; ++k) {
    for (int y = 0; y < nm; ++y) r.witness.f[u(k)].push_back(sol.dual(rows[u(k)][u(y)]));
  }
  r.witness.gamma = tighten(r.witness, strings, sol.dual(mother_row)).trace();
  r.solver = sol.raw();
  return r;
}

bool jm_feasible(const MeasurementSet& m, const RobustnessOptions& opt) {
  const int nm = m.size(), o = m.outcomes(), d = m.dim();
  const auto strings = mother_strings(nm, o, opt);
  Model model;
  std::vector<Var> mother;
  for (std::size_t a = 0; a < strings.size(); ++a) mother.push_back(model.add_hermitian(d));
  for (int k = 0; k < o; ++k) {
    for (int y = 0; y < nm; ++y) {
      HermitianForm f;
      for (std::size_t a = 0; a < strings.size(); ++a) {
        if (strings[a][u(y)] == k) f.add(mother[a], 1.0);
      }
      model.add_constraint(f, m.element(k, y));
    }
  }
  return model.solve(opt.solver).optimal();
}

WhiteNoiseIncompat white_noise_incompat(const MeasurementSet& m, Scalar tol, const RobustnessOptions& opt) {
  auto feasible = [&](Scalar eta) {
    return jm_feasible(depolarise_measurements(DepolarisingChannel(m.dim(), 1 - eta), m), opt);
  };
  WhiteNoiseIncompat r;
  r.bisection = sdp::bisect_feasibility(feasible, 0, 1, tol);
  r.eta = r.bisection.critical;
  return r;
}

RestrictedCompatibility compat_on_states(const MeasurementSet& m, const StateList& states, const RobustnessOptions& opt) {
  const CcRobustness cc = cc_robustness(born_behaviour(states, m), opt);
  return {cc.realizable, cc.robustness};
}

Scalar evaluate_witness(const MiWitness& w, const MeasurementSet& m) {
  check_witness_shape(w);
  if (w.f.size() != u(m.outcomes()) || w.f.front().size() != u(m.size()) || w.f.front().front().dim() != m.dim()) {
    throw DimensionMismatch("MiWitness shape differs from the measurement set");
  }
  Scalar v = 0;
  for (int k = 0; k < m.outcomes(); ++k)
    for (int y = 0; y < m.size(); ++y) v += trace_inner(w.f[u(k)][u(y)], m.element(k, y));
  return v;
}

MiBound mi_witness_bound(const MiWitness& w, const RobustnessOptions& opt) {
  check_witness_shape(w);
  const int o = static_cast<int>(w.f.size());
  const int nm = static_cast<int>(w.f.front().size());
  const int d = w.f.front().front().dim();
  const auto strings = mother_strings(nm, o, opt);
  Model model;
  LinearForm objective;
  HermitianForm sum;
  for (const auto& a : strings) {
    const Var n = model.add_hermitian(d);
    objective.add(n, HermitianOperator(witness_sum(w, a)));
    sum.add(n, 1.0);
  }
  const HermitianRow row = model.add_constraint(sum, HermitianOperator::identity(d));
  model.minimize(objective);
  const auto sol = model.solve(opt.solver);
  if (!sol.optimal()) throw SolverFailure("mi_witness_bound: solver returned " + sdp::to_string(sol.status()));
  MiBound r;
  r.bound_operator = tighten(w, strings, sol.dual(row));
  r.value = r.bound_operator.trace();
  return r;
}

QcWitness mi_to_qc(const MiWitness& w, const std::optional<StateList>& states, const RobustnessOptions& opt) {
  check_witness_shape(w);
  const int o = static_cast<int>(w.f.size());
  const int nm = static_cast<int>(w.f.front().size());
  const int d = w.f.front().front().dim();
  const StateList s = states ? *states : spanning_states(d);
  if (s.empty()) throw InvalidArgument("mi_to_qc: empty state list");
  if (s.front().dim() != d) throw DimensionMismatch("mi_to_qc: state/witness dimension mismatch");

  QcWitness q;
  q.mu = zero_coefficients(o, static_cast<int>(s.size()), nm);
  for (int k = 0; k < o; ++k) {
    for (int y = 0; y < nm; ++y) {
      const HermitianOperator& f = w.f[u(k)][u(y)];
      if (f.matrix().norm() == 0) continue;
      const Decomposition dec = decompose_over_states(f, s);
      for (std::size_t x = 0; x < s.size(); ++x) q.mu[u(k)][x][u(y)] = dec.coefficients(static_cast<Eigen::Index>(x));
    }
  }
  const MiBound bound = mi_witness_bound(w, opt);
  if (bound.value < w.gamma - kWitnessTol * (1 + std::abs(w.gamma))) {
    throw InvalidArgument("mi_to_qc: gamma " + std::to_string(w.gamma) + " exceeds the tightest valid bound " +
                          std::to_string(bound.value));
  }
  const Scalar excess = bound.bound_operator.trace() - w.gamma;
  q.bound_operator = bound.bound_operator - (excess / d) * HermitianOperator::identity(d);
  q.beta = w.gamma;
  return q;
}

DiscriminationGame qc_to_discrimination(const QcWitness& w, const StateList& states, int d) {
  if (states.empty()) throw InvalidArgument("qc_to_discrimination: empty state list");
  if (w.mu.empty() || w.mu.front().size() != states.size()) {
    throw DimensionMismatch("qc_to_discrimination: witness is not defined over the given states");
  }
  for (const auto& s : states) {
    if (s.dim() != d) throw DimensionMismatch("qc_to_discrimination: state dimension differs from d");
  }
  const int o = static_cast<int>(w.mu.size());
  const int nm = static_cast<int>(w.mu.front().front().size());
  DiscriminationGame g;
  Scalar total = 0;
  for (int k = 0; k < o; ++k) {
    for (int y = 0; y < nm; ++y) {
      Scalar mx = 0;
      for (std::size_t x = 0; x < states.size(); ++x) {
        mx = std::max(mx, std::abs(w.mu[u(k)][x][u(y)]));
        total += w.mu[u(k)][x][u(y)];
      }
      g.nu += mx;
    }
  }
  const Scalar denom = total + o * nm * g.nu / d;
  if (denom <= 1e-12) throw DegenerateScaling("qc_to_discrimination: alpha denominator " + std::to_string(denom) + " <= 1e-12");
  g.alpha = 1 / denom;
  g.ensembles.assign(u(nm), {});
  for (int y = 0; y < nm; ++y) {
    for (int k = 0; k < o; ++k) {
      CMat op = g.nu * CMat::Identity(d, d);
      for (std::size_t x = 0; x < states.size(); ++x) op += w.mu[u(k)][x][u(y)] * states[x].matrix();
      op *= g.alpha;
      const HermitianOperator h(op);
      const Scalar scale = 1 + op.norm();
      if (min_eigenvalue(h) < -kProbTol * scale) {
        throw InvalidArgument("qc_to_discrimination: scaled operator for (b=" + std::to_string(k) +
                              ", y=" + std::to_string(y) + ") is not positive semidefinite");
      }
      const Scalar p = h.trace();
      if (p <= 1e-12) {
        g.ensembles[u(y)].push_back({QuantumState::maximally_mixed(d), 0});
      } else {
        g.ensembles[u(y)].push_back({QuantumState(positive_part(h) * (1 / positive_part(h).trace())), p});
      }
    }
  }
  return g;
}

}  // namespace sqpm
