#include "sqpm/realizability.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sqpm/sdp_model.hpp"

namespace sqpm {

using sdp::HermitianForm;
using sdp::HermitianRow;
using sdp::LinearForm;
using sdp::Model;
using sdp::Var;

Coefficients zero_coefficients(int o, int num_states, int m) {
  return Coefficients(static_cast<std::size_t>(o),
                      std::vector<std::vector<Scalar>>(static_cast<std::size_t>(num_states),
                                                       std::vector<Scalar>(static_cast<std::size_t>(m), 0)));
}

std::vector<std::vector<int>> outcome_strings(int m, int o) {
  if (m < 1 || o < 1) throw InvalidArgument("outcome_strings: m and o must be >= 1");
  const auto n = deterministic_vertex_count(1, m, o);
  std::vector<std::vector<int>> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::uint64_t i = 0; i < n; ++i) {
    std::vector<int> a(static_cast<std::size_t>(m));
    std::uint64_t r = i;
    for (int y = 0; y < m; ++y) {
      a[static_cast<std::size_t>(y)] = static_cast<int>(r % static_cast<std::uint64_t>(o));
      r /= static_cast<std::uint64_t>(o);
    }
    out.push_back(std::move(a));
  }
  return out;
}

Behaviour white_noise(const StateList& states, int m, int o) {
  ProbabilityTable t(states.size(), std::vector<std::vector<Scalar>>(static_cast<std::size_t>(m),
                                                                     std::vector<Scalar>(static_cast<std::size_t>(o), 1.0 / o)));
  return Behaviour(states, std::move(t));
}

Behaviour white_noise(const StateList& states, const MeasurementSet& m) {
  const Behaviour mixed = born_behaviour(StateList(states.size(), QuantumState::maximally_mixed(m.dim())), m);
  return Behaviour(states, mixed.table());
}

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

void require_same_scenario(const Behaviour& b, const Behaviour& noise) {
  if (!b.same_scenario(noise)) {
    throw DimensionMismatch("noise behaviour must share the states, m and o of the input");
  }
}

void check_mother(int m, int o, const RobustnessOptions& opt) {
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
}

void require_optimal(const sdp::SdpSolution& s, const char* what) {
  if (!s.optimal()) throw SolverFailure(std::string(what) + ": solver returned " + sdp::to_string(s.status));
}

using RowIndex = std::vector<std::vector<std::vector<int>>>;  // [b][x][y]

RowIndex make_row_index(const Behaviour& b) {
  return RowIndex(u(b.outcomes()), std::vector<std::vector<int>>(u(b.num_states()), std::vector<int>(u(b.num_measurements()), -1)));
}

// (A.1) with generalized noise, or its fixed-noise variant when `noise` is set.
struct QuantumProgram {
  Model model;
  Var eta;
  std::vector<std::vector<Var>> m;  // [y][b]
  RowIndex rows;
  std::vector<HermitianRow> povm_rows;
};

QuantumProgram build_quantum(const Behaviour& b, const Behaviour* noise) {
  const int nx = b.num_states(), nm = b.num_measurements(), o = b.outcomes(), d = b.dim();
  QuantumProgram p;
  p.eta = p.model.add_scalar();
  p.m.assign(u(nm), {});
  for (int y = 0; y < nm; ++y) {
    for (int k = 0; k < o; ++k) p.m[u(y)].push_back(p.model.add_hermitian(d));
  }
  p.rows = make_row_index(b);
  std::vector<std::vector<std::vector<Var>>> q;
  if (noise == nullptr) {
    q.assign(u(o), std::vector<std::vector<Var>>(u(nx), std::vector<Var>(u(nm))));
    for (auto& qb : q)
      for (auto& qbx : qb)
        for (auto& v : qbx) v = p.model.add_scalar();
  }
  for (int x = 0; x < nx; ++x) {
    const HermitianOperator minus_rho = -1.0 * b.states()[u(x)].op();
    for (int y = 0; y < nm; ++y) {
      for (int k = 0; k < o; ++k) {
        LinearForm f;
        if (noise == nullptr) {
          f.add(p.eta, -b(x, y, k)).add(q[u(k)][u(x)][u(y)], 1.0);
        } else {
          f.add(p.eta, (*noise)(x, y, k) - b(x, y, k));
        }
        f.add(p.m[u(y)][u(k)], minus_rho);
        p.rows[u(k)][u(x)][u(y)] = p.model.add_constraint(f, -b(x, y, k));
      }
      if (noise == nullptr) {
        LinearForm s;
        for (int k = 0; k < o; ++k) s.add(q[u(k)][u(x)][u(y)], 1.0);
        s.add(p.eta, -1.0);
        p.model.add_constraint(s, 0.0);
      }
    }
  }
  for (int y = 0; y < nm; ++y) {
    HermitianForm s;
    for (int k = 0; k < o; ++k) s.add(p.m[u(y)][u(k)], 1.0);
    p.povm_rows.push_back(p.model.add_constraint(s, HermitianOperator::identity(d)));
  }
  p.model.minimize(LinearForm().add(p.eta, 1.0));
  return p;
}

// (B.1) with generalized noise, or its fixed-noise variant when `noise` is set.
struct CcProgram {
  Model model;
  Var eta;
  std::vector<Var> mother;
  std::vector<std::vector<Var>> noise_povms;  // [y][b], generalized only
  RowIndex rows;
  HermitianRow mother_row;
};

CcProgram build_cc(const Behaviour& b, const Behaviour* noise, const RobustnessOptions& opt) {
  const int nx = b.num_states(), nm = b.num_measurements(), o = b.outcomes(), d = b.dim();
  check_mother(nm, o, opt);
  const auto strings = outcome_strings(nm, o);
  CcProgram p;
  p.eta = p.model.add_scalar();
  for (std::size_t a = 0; a < strings.size(); ++a) p.mother.push_back(p.model.add_hermitian(d));
  if (noise == nullptr) {
    p.noise_povms.assign(u(nm), {});
    for (int y = 0; y < nm; ++y) {
      for (int k = 0; k < o; ++k) p.noise_povms[u(y)].push_back(p.model.add_hermitian(d));
    }
  }
  p.rows = make_row_index(b);
  for (int x = 0; x < nx; ++x) {
    const HermitianOperator& rho = b.states()[u(x)].op();
    const HermitianOperator minus_rho = -1.0 * rho;
    for (int y = 0; y < nm; ++y) {
      for (int k = 0; k < o; ++k) {
        LinearForm f;
        if (noise == nullptr) {
          f.add(p.eta, -b(x, y, k)).add(p.noise_povms[u(y)][u(k)], rho);
        } else {
          f.add(p.eta, (*noise)(x, y, k) - b(x, y, k));
        }
        for (std::size_t a = 0; a < strings.size(); ++a) {
          if (strings[a][u(y)] == k) f.add(p.mother[a], minus_rho);
        }
        p.rows[u(k)][u(x)][u(y)] = p.model.add_constraint(f, -b(x, y, k));
      }
    }
  }
  if (noise == nullptr) {
    for (int y = 0; y < nm; ++y) {
      HermitianForm s;
      for (int k = 0; k < o; ++k) s.add(p.noise_povms[u(y)][u(k)], 1.0);
      s.add(p.eta, -1.0 * HermitianOperator::identity(d));
      p.model.add_constraint(s, HermitianOperator::zero(d));
    }
  }
  HermitianForm sum;
  for (const auto& v : p.mother) sum.add(v, 1.0);
  p.mother_row = p.model.add_constraint(sum, HermitianOperator::identity(d));
  p.model.minimize(LinearForm().add(p.eta, 1.0));
  return p;
}

CcRobustness solve_cc(const CcProgram& p, const RobustnessOptions& opt, const char* what) {
  const auto sol = p.model.solve(opt.solver);
  require_optimal(sol.raw(), what);
  CcRobustness r;
  r.eta = sol.value(p.eta);
  r.robustness = std::max<Scalar>(r.eta, 0);
  r.realizable = r.eta <= kDecisionTol;
  for (const auto& v : p.mother) r.mother.push_back(sol.hermitian_value(v));
  r.solver = sol.raw();
  return r;
}

void check_coefficient_shape(const Coefficients& c, const Behaviour& b) {
  if (c.size() != u(b.outcomes())) throw DimensionMismatch("witness outcome count differs from the behaviour");
  for (const auto& cb : c) {
    if (cb.size() != u(b.num_states())) throw DimensionMismatch("witness state count differs from the behaviour");
    for (const auto& cbx : cb) {
      if (cbx.size() != u(b.num_measurements())) {
        throw DimensionMismatch("witness measurement count differs from the behaviour");
      }
    }
  }
}

void check_coefficient_shape(const Coefficients& c, std::size_t num_states) {
  if (c.empty()) throw DimensionMismatch("witness has no coefficients");
  for (const auto& cb : c) {
    if (cb.size() != num_states) throw DimensionMismatch("witness state count differs from the state list");
    for (const auto& cbx : cb) {
      if (cbx.size() != c.front().front().size()) throw DimensionMismatch("ragged witness coefficients");
    }
  }
}

Scalar contract(const Coefficients& c, const Behaviour& b) {
  check_coefficient_shape(c, b);
  Scalar v = 0;
  for (int k = 0; k < b.outcomes(); ++k)
    for (int x = 0; x < b.num_states(); ++x)
      for (int y = 0; y < b.num_measurements(); ++y) v += c[u(k)][u(x)][u(y)] * b(x, y, k);
  return v;
}

Behaviour default_noise(const Behaviour& b, const std::optional<Behaviour>& noise) {
  if (noise) {
    require_same_scenario(b, *noise);
    return *noise;
  }
  return white_noise(b.states(), b.num_measurements(), b.outcomes());
}

// Per-(x,y) maxima over b.
std::vector<std::vector<Scalar>> column_max(const Coefficients& c) {
  std::vector<std::vector<Scalar>> out(c.front().size(),
                                       std::vector<Scalar>(c.front().front().size(), -std::numeric_limits<Scalar>::infinity()));
  for (const auto& cb : c)
    for (std::size_t x = 0; x < cb.size(); ++x)
      for (std::size_t y = 0; y < cb[x].size(); ++y) out[x][y] = std::max(out[x][y], cb[x][y]);
  return out;
}

}  // namespace

sdp::SdpProblem quantum_robustness_problem(const Behaviour& b) { return build_quantum(b, nullptr).model.problem(); }

sdp::SdpProblem cc_robustness_problem(const Behaviour& b, const RobustnessOptions& opt) {
  return build_cc(b, nullptr, opt).model.problem();
}

sdp::SdpProblem cc_fixed_noise_problem(const Behaviour& b, const Behaviour& noise, const RobustnessOptions& opt) {
  require_same_scenario(b, noise);
  return build_cc(b, &noise, opt).model.problem();
}

QuantumRobustness quantum_robustness(const Behaviour& b, const RobustnessOptions& opt) {
  const QuantumProgram p = build_quantum(b, nullptr);
  const auto sol = p.model.solve(opt.solver);
  require_optimal(sol.raw(), "quantum_robustness");
  QuantumRobustness r;
  r.eta = sol.value(p.eta);
  r.realizable = r.eta <= kDecisionTol;
  if (r.realizable) {
    std::vector<Povm> povms;
    for (const auto& my : p.m) {
      // Clip rounding negativity and renormalize: M_b <- S^-1/2 M_b S^-1/2 with S = sum_b M_b.
      std::vector<HermitianOperator> els;
      CMat sum = CMat::Zero(b.dim(), b.dim());
      for (const auto& v : my) {
        els.push_back(positive_part(sol.hermitian_value(v)));
        sum += els.back().matrix();
      }
      Eigen::SelfAdjointEigenSolver<CMat> es(sum);
      if (es.eigenvalues().minCoeff() <= 0) break;
      const CMat inv_sqrt = es.operatorInverseSqrt();
      for (auto& e : els) e = HermitianOperator(inv_sqrt * e.matrix() * inv_sqrt);
      povms.emplace_back(std::move(els));
    }
    if (povms.size() != p.m.size()) povms.clear();
    if (!povms.empty()) r.measurements.emplace(std::move(povms));
  }
  r.solver = sol.raw();
  return r;
}

CcRobustness cc_robustness(const Behaviour& b, const RobustnessOptions& opt) {
  return solve_cc(build_cc(b, nullptr, opt), opt, "cc_robustness");
}

CcRobustness cc_fixed_noise_robustness(const Behaviour& b, const Behaviour& noise, const RobustnessOptions& opt) {
  require_same_scenario(b, noise);
  return solve_cc(build_cc(b, &noise, opt), opt, "cc_fixed_noise_robustness");
}

CcRobustness cc_white_noise_robustness(const Behaviour& b, const MeasurementSet& m, const RobustnessOptions& opt) {
  if (m.size() != b.num_measurements() || m.outcomes() != b.outcomes() || m.dim() != b.dim()) {
    throw BehaviourMeasurementMismatch("measurement set shape differs from the behaviour");
  }
  const Behaviour born = born_behaviour(b.states(), m);
  for (int x = 0; x < b.num_states(); ++x)
    for (int y = 0; y < b.num_measurements(); ++y)
      for (int k = 0; k < b.outcomes(); ++k) {
        if (std::abs(born(x, y, k) - b(x, y, k)) > kProbTol) {
          throw BehaviourMeasurementMismatch("behaviour is not the Born behaviour of the supplied measurements");
        }
      }
  return cc_fixed_noise_robustness(b, white_noise(b.states(), m), opt);
}

WitnessReport<PostQuantumWitness> post_quantum_witness(const Behaviour& b, const std::optional<Behaviour>& noise,
                                                       const RobustnessOptions& opt) {
  const Behaviour q = default_noise(b, noise);
  const QuantumProgram p = build_quantum(b, &q);
  const auto sol = p.model.solve(opt.solver);
  require_optimal(sol.raw(), "post_quantum_witness");
  WitnessReport<PostQuantumWitness> r;
  r.robustness = sol.value(p.eta);
  if (r.robustness <= kDecisionTol) throw WitnessUnavailable("no witness: behaviour is quantum-realizable");
  auto& w = r.witness;
  w.lambda = zero_coefficients(b.outcomes(), b.num_states(), b.num_measurements());
  for (int k = 0; k < b.outcomes(); ++k)
    for (int x = 0; x < b.num_states(); ++x)
      for (int y = 0; y < b.num_measurements(); ++y) w.lambda[u(k)][u(x)][u(y)] = sol.dual(p.rows[u(k)][u(x)][u(y)]);
  for (const auto& row : p.povm_rows) w.a.push_back(sol.dual(row));
  // Tighten each A_y by the residual negativity so the inequality holds exactly.
  for (int y = 0; y < b.num_measurements(); ++y) {
    Scalar worst = std::numeric_limits<Scalar>::infinity();
    for (int k = 0; k < b.outcomes(); ++k) {
      CMat s = -w.a[u(y)].matrix();
      for (int x = 0; x < b.num_states(); ++x) s += w.lambda[u(k)][u(x)][u(y)] * b.states()[u(x)].matrix();
      worst = std::min(worst, min_eigenvalue(HermitianOperator(s)));
    }
    if (worst < 0) w.a[u(y)] += worst * HermitianOperator::identity(b.dim());
  }
  w.alpha = 0;
  for (const auto& ay : w.a) w.alpha += ay.trace();
  r.value = evaluate_witness(w, b);
  r.violation = w.alpha - r.value;
  r.solver = sol.raw();
  return r;
}

WitnessReport<QcWitness> qc_witness(const Behaviour& b, const std::optional<Behaviour>& noise,
                                    const RobustnessOptions& opt) {
  const Behaviour q = default_noise(b, noise);
  const CcProgram p = build_cc(b, &q, opt);
  const auto sol = p.model.solve(opt.solver);
  require_optimal(sol.raw(), "qc_witness");
  WitnessReport<QcWitness> r;
  r.robustness = sol.value(p.eta);
  if (r.robustness <= kDecisionTol) throw WitnessUnavailable("no witness: behaviour is CC-realizable");
  auto& w = r.witness;
  w.mu = zero_coefficients(b.outcomes(), b.num_states(), b.num_measurements());
  for (int k = 0; k < b.outcomes(); ++k)
    for (int x = 0; x < b.num_states(); ++x)
      for (int y = 0; y < b.num_measurements(); ++y) w.mu[u(k)][u(x)][u(y)] = sol.dual(p.rows[u(k)][u(x)][u(y)]);
  w.bound_operator = sol.dual(p.mother_row);
  w.beta = w.bound_operator.trace();
  const Scalar worst = verify_witness(w, b.states());
  if (worst < 0) {
    w.bound_operator += worst * HermitianOperator::identity(b.dim());
    w.beta = w.bound_operator.trace();
  }
  r.value = evaluate_witness(w, b);
  r.violation = w.beta - r.value;
  r.solver = sol.raw();
  return r;
}

Scalar evaluate_witness(const QcWitness& w, const Behaviour& b) { return contract(w.mu, b); }
Scalar evaluate_witness(const PostQuantumWitness& w, const Behaviour& b) { return contract(w.lambda, b); }

Scalar verify_witness(const QcWitness& w, const StateList& states) {
  check_coefficient_shape(w.mu, states.size());
  const int o = static_cast<int>(w.mu.size());
  const int m = static_cast<int>(w.mu.front().front().size());
  if (w.bound_operator.dim() != states.front().dim()) throw DimensionMismatch("bound operator dimension mismatch");
  Scalar worst = std::numeric_limits<Scalar>::infinity();
  for (const auto& a : outcome_strings(m, o)) {
    CMat s = -w.bound_operator.matrix();
    for (std::size_t x = 0; x < states.size(); ++x)
      for (int y = 0; y < m; ++y) s += w.mu[u(a[u(y)])][x][u(y)] * states[x].matrix();
    worst = std::min(worst, min_eigenvalue(HermitianOperator(s)));
  }
  return worst;
}

Scalar verify_witness(const PostQuantumWitness& w, const StateList& states) {
  check_coefficient_shape(w.lambda, states.size());
  const int o = static_cast<int>(w.lambda.size());
  const int m = static_cast<int>(w.lambda.front().front().size());
  if (static_cast<int>(w.a.size()) != m) throw DimensionMismatch("one bound operator per measurement required");
  Scalar worst = std::numeric_limits<Scalar>::infinity();
  for (int y = 0; y < m; ++y) {
    for (int k = 0; k < o; ++k) {
      CMat s = -w.a[u(y)].matrix();
      for (std::size_t x = 0; x < states.size(); ++x) s += w.lambda[u(k)][x][u(y)] * states[x].matrix();
      worst = std::min(worst, min_eigenvalue(HermitianOperator(s)));
    }
  }
  return worst;
}

Scalar witness_normalization(const Coefficients& c, const Behaviour& b, const Behaviour& noise) {
  require_same_scenario(b, noise);
  return contract(c, noise) - contract(c, b);
}

QcWitness canonicalize(const QcWitness& w, const Behaviour& b, const Behaviour& noise) {
  check_coefficient_shape(w.mu, b);
  const auto shift = column_max(w.mu);
  QcWitness out = w;
  CMat bop = w.bound_operator.matrix();
  for (auto& cb : out.mu)
    for (std::size_t x = 0; x < cb.size(); ++x)
      for (std::size_t y = 0; y < cb[x].size(); ++y) cb[x][y] -= shift[x][y];
  for (std::size_t x = 0; x < shift.size(); ++x)
    for (std::size_t y = 0; y < shift[x].size(); ++y) bop -= shift[x][y] * b.states()[x].matrix();
  const Scalar n = witness_normalization(out.mu, b, noise);
  if (!(n > 1e-12)) throw DegenerateScaling("canonicalize: witness normalization is not positive");
  for (auto& cb : out.mu)
    for (auto& cbx : cb)
      for (auto& v : cbx) v /= n;
  out.bound_operator = HermitianOperator(bop / n);
  out.beta = out.bound_operator.trace();
  return out;
}

PostQuantumWitness canonicalize(const PostQuantumWitness& w, const Behaviour& b, const Behaviour& noise) {
  check_coefficient_shape(w.lambda, b);
  const auto shift = column_max(w.lambda);
  PostQuantumWitness out = w;
  for (auto& cb : out.lambda)
    for (std::size_t x = 0; x < cb.size(); ++x)
      for (std::size_t y = 0; y < cb[x].size(); ++y) cb[x][y] -= shift[x][y];
  std::vector<CMat> a;
  for (const auto& ay : w.a) a.push_back(ay.matrix());
  for (std::size_t x = 0; x < shift.size(); ++x)
    for (std::size_t y = 0; y < shift[x].size(); ++y) a[y] -= shift[x][y] * b.states()[x].matrix();
  const Scalar n = witness_normalization(out.lambda, b, noise);
  if (!(n > 1e-12)) throw DegenerateScaling("canonicalize: witness normalization is not positive");
  for (auto& cb : out.lambda)
    for (auto& cbx : cb)
      for (auto& v : cbx) v /= n;
  out.alpha = 0;
  for (std::size_t y = 0; y < a.size(); ++y) {
    out.a[y] = HermitianOperator(a[y] / n);
    out.alpha += out.a[y].trace();
  }
  return out;
}

}  // namespace sqpm
