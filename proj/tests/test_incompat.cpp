#include <doctest.h>

#include <cmath>

#include "sqpm/channels.hpp"
#include "sqpm/incompat.hpp"
#include "sqpm/sdp_model.hpp"
#include "sqpm/spanning.hpp"
#include "support/random.hpp"

using namespace sqpm;
using namespace sqpm::testing;

namespace {

MeasurementSet xz() { return MeasurementSet({Povm::binary(pauli::X()), Povm::binary(pauli::Z())}); }

int power(int o, int m) {
  int n = 1;
  for (int i = 0; i < m; ++i) n *= o;
  return n;
}

int digit(int a, int y, int o) { return (a / power(o, y)) % o; }

// Least s >= 0 with P_a - s I summing to I and reproducing (1-eta) M + eta Q
// for some POVMs Q_y. Zero exactly when the mixture is jointly measurable.
Scalar generalized_slack(const MeasurementSet& m, Scalar eta) {
  const int d = m.dim(), o = m.outcomes(), n = m.size(), na = power(o, n);
  const HermitianOperator id = HermitianOperator::identity(d);
  sdp::Model model;
  const sdp::Var s = model.add_scalar();
  std::vector<sdp::Var> p, q;
  for (int a = 0; a < na; ++a) p.push_back(model.add_hermitian(d));
  for (int i = 0; i < o * n; ++i) q.push_back(model.add_hermitian(d));
  sdp::HermitianForm total;
  for (int a = 0; a < na; ++a) total.add(p[static_cast<std::size_t>(a)], 1);
  total.add(s, -Scalar(na) * id);
  model.add_constraint(total, id);
  for (int y = 0; y < n; ++y) {
    sdp::HermitianForm qsum;
    for (int b = 0; b < o; ++b) qsum.add(q[static_cast<std::size_t>(y * o + b)], 1);
    model.add_constraint(qsum, id);
    for (int b = 0; b < o; ++b) {
      sdp::HermitianForm f;
      int count = 0;
      for (int a = 0; a < na; ++a)
        if (digit(a, y, o) == b) {
          f.add(p[static_cast<std::size_t>(a)], 1);
          ++count;
        }
      f.add(s, -Scalar(count) * id);
      f.add(q[static_cast<std::size_t>(y * o + b)], -eta);
      model.add_constraint(f, (1 - eta) * m.element(b, y));
    }
  }
  model.minimize(sdp::LinearForm().add(s, 1));
  const sdp::ModelSolution sol = model.solve();
  REQUIRE(sol.optimal());
  return sol.value(s);
}

Scalar bisect(const std::function<bool(Scalar)>& feasible, Scalar tol) {
  Scalar lo = 0, hi = 1;
  if (feasible(lo)) return 0;
  while (hi - lo > tol) {
    const Scalar mid = (lo + hi) / 2;
    (feasible(mid) ? hi : lo) = mid;
  }
  return (lo + hi) / 2;
}

// min eta with (1-eta) M + eta Tr(M) I/d jointly measurable, solved directly.
Scalar white_noise_oracle(const MeasurementSet& m) {
  const int d = m.dim(), o = m.outcomes(), n = m.size(), na = power(o, n);
  const HermitianOperator id = HermitianOperator::identity(d);
  sdp::Model model;
  const sdp::Var eta = model.add_scalar();
  std::vector<sdp::Var> p;
  for (int a = 0; a < na; ++a) p.push_back(model.add_hermitian(d));
  for (int y = 0; y < n; ++y)
    for (int b = 0; b < o; ++b) {
      sdp::HermitianForm f;
      for (int a = 0; a < na; ++a)
        if (digit(a, y, o) == b) f.add(p[static_cast<std::size_t>(a)], 1);
      const HermitianOperator& e = m.element(b, y);
      f.add(eta, e - (e.trace() / d) * id);
      model.add_constraint(f, e);
    }
  model.minimize(sdp::LinearForm().add(eta, 1));
  const sdp::ModelSolution sol = model.solve();
  REQUIRE(sol.optimal());
  return sol.value(eta);
}

// Least eta for which (1-eta) M + Q (Q_y >= 0 summing to eta I) has the
// statistics of a jointly measurable set on every state of s.
Scalar restricted_oracle(const MeasurementSet& m, const StateList& s) {
  const int d = m.dim(), o = m.outcomes(), n = m.size(), na = power(o, n);
  const HermitianOperator id = HermitianOperator::identity(d);
  sdp::Model model;
  const sdp::Var eta = model.add_scalar();
  std::vector<sdp::Var> p, q;
  for (int a = 0; a < na; ++a) p.push_back(model.add_hermitian(d));
  for (int i = 0; i < o * n; ++i) q.push_back(model.add_hermitian(d));
  sdp::HermitianForm total;
  for (int a = 0; a < na; ++a) total.add(p[static_cast<std::size_t>(a)], 1);
  model.add_constraint(total, id);
  for (int y = 0; y < n; ++y) {
    sdp::HermitianForm qsum;
    for (int b = 0; b < o; ++b) qsum.add(q[static_cast<std::size_t>(y * o + b)], 1);
    qsum.add(eta, -1.0 * id);
    model.add_constraint(qsum, HermitianOperator::zero(d));
    for (int b = 0; b < o; ++b)
      for (const QuantumState& rho : s) {
        const Scalar pr = trace_inner(rho.op(), m.element(b, y));
        sdp::LinearForm f;
        for (int a = 0; a < na; ++a)
          if (digit(a, y, o) == b) f.add(p[static_cast<std::size_t>(a)], rho.op());
        f.add(q[static_cast<std::size_t>(y * o + b)], -1.0 * rho.op());
        f.add(eta, pr);
        model.add_constraint(f, pr);
      }
  }
  model.minimize(sdp::LinearForm().add(eta, 1));
  const sdp::ModelSolution sol = model.solve();
  REQUIRE(sol.optimal());
  return sol.value(eta);
}

// Random jointly measurable set: a random mother with deterministic responses.
MeasurementSet random_compatible(int d, int n, int o, Rng& rng) {
  const int na = 2 + static_cast<int>(rng() % 3);
  const Povm mother = random_povm(d, na, rng);
  std::vector<Povm> out;
  for (int y = 0; y < n; ++y) {
    std::vector<HermitianOperator> e(static_cast<std::size_t>(o), HermitianOperator::zero(d));
    for (int a = 0; a < na; ++a) e[rng() % static_cast<unsigned>(o)] += mother[a];
    out.emplace_back(e);
  }
  return MeasurementSet(out);
}

StateList hat_states() { return {qubit::plus(), qubit::zero(), qubit::right(), qubit::mixed()}; }

}  // namespace

TEST_CASE("incompat_robustness trivial cases") {
  const Povm z = Povm::binary(pauli::Z());
  CHECK(incompat_robustness(MeasurementSet({z, z})).robustness <= 1e-7);
  CHECK(incompat_robustness(MeasurementSet({z, z})).compatible);
  Rng rng(2);
  const IncompatRobustness single = incompat_robustness(random_measurements(3, 1, 3, rng));
  CHECK(single.robustness <= 1e-7);
  CHECK(single.compatible);
  RobustnessOptions tight;
  tight.mother_cap = 7;
  CHECK_THROWS_AS(incompat_robustness(pauli_measurements(), tight), MotherTooLarge);
}

TEST_CASE("incompat_robustness of {X, Z} matches a feasibility bisection") {
  const IncompatRobustness r = incompat_robustness(xz());
  const Scalar oracle = bisect([](Scalar eta) { return generalized_slack(xz(), eta) <= 1e-8; }, 1e-7);
  CHECK(std::abs(r.robustness - oracle) <= 1e-5);
  CHECK_FALSE(r.compatible);
  CHECK(evaluate_witness(r.witness, xz()) <= r.witness.gamma - r.eta + 1e-6);

  // The returned mother reproduces the critical mixture up to a noise POVM.
  REQUIRE(r.mother.size() == 4);
  CMat sum = CMat::Zero(2, 2);
  for (const HermitianOperator& n : r.mother) {
    CHECK(min_eigenvalue(n) >= -1e-7);
    sum += n.matrix();
  }
  CHECK((sum - CMat::Identity(2, 2)).norm() <= 1e-6);
}

TEST_CASE("white_noise_incompat") {
  CHECK(std::abs(white_noise_incompat(pauli_measurements()).eta - (1 - 1 / std::sqrt(3.0))) <= 1e-4);
  const Scalar two = white_noise_incompat(xz()).eta;
  CHECK(two > 0);
  CHECK(two < 1 - 1 / std::sqrt(3.0));
  CHECK(std::abs(two - white_noise_oracle(xz())) <= 1e-5);
  CHECK(std::abs(two - (1 - 1 / std::sqrt(2.0))) <= 1e-5);
  const Povm z = Povm::binary(pauli::Z());
  CHECK(white_noise_incompat(MeasurementSet({z, z})).eta == 0);
  Rng rng(6);
  for (int i = 0; i < 3; ++i) {
    const MeasurementSet m = random_measurements(2, 2, 2, rng);
    CHECK(std::abs(white_noise_incompat(m).eta - white_noise_oracle(m)) <= 1e-5);
  }
}

TEST_CASE("compat_on_states on nested qubit state chains") {
  const MeasurementSet m = pauli_measurements();
  const StateList s1 = {qubit::zero(), qubit::plus()};
  const StateList s2 = {qubit::zero(), qubit::plus(), qubit::right()};
  const StateList s3 = {qubit::zero(), qubit::plus(), qubit::right(), qubit::mixed()};
  const Scalar r1 = compat_on_states(m, s1).robustness;
  const Scalar r2 = compat_on_states(m, s2).robustness;
  const Scalar r3 = compat_on_states(m, s3).robustness;
  CHECK(r1 <= r2 + 1e-7);
  CHECK(r2 <= r3 + 1e-7);
  CHECK(std::abs(r3 - incompat_robustness(m).robustness) <= 1e-5);
  CHECK_FALSE(compat_on_states(m, s3).compatible);

  // S_1 becomes compatible once t drops below 0.9449.
  CHECK(compat_on_states(depolarise_measurements(DepolarisingChannel(2, 0.9445), m), s1).compatible);
  CHECK_FALSE(compat_on_states(depolarise_measurements(DepolarisingChannel(2, 0.9455), m), s1).compatible);
  // S_3 follows the unrestricted threshold 1/sqrt(3).
  CHECK(compat_on_states(depolarise_measurements(DepolarisingChannel(2, 0.577), m), s3).compatible);
  CHECK_FALSE(compat_on_states(depolarise_measurements(DepolarisingChannel(2, 0.578), m), s3).compatible);

  const RestrictedCompatibility one = compat_on_states(m, {qubit::plus()});
  CHECK(one.compatible);
  CHECK(one.robustness <= 1e-7);
}

TEST_CASE("compat_on_states agrees with a direct restricted-compatibility program") {
  Rng rng(13);
  for (int i = 0; i < 10; ++i) {
    const MeasurementSet m = random_measurements(2, 2, 2, rng);
    const StateList s = random_states(2 + i % 3, 2, rng);
    CHECK(std::abs(compat_on_states(m, s).robustness - restricted_oracle(m, s)) <= 1e-5);
  }
  const MeasurementSet m = pauli_measurements();
  const StateList s1 = {qubit::zero(), qubit::plus()};
  CHECK(std::abs(compat_on_states(m, s1).robustness - restricted_oracle(m, s1)) <= 1e-5);
}

TEST_CASE("restricted robustness never exceeds incompatibility robustness") {
  Rng rng(23);
  std::uniform_real_distribution<Scalar> u(0, 1);
  for (int i = 0; i < 100; ++i) {
    const MeasurementSet m = depolarise_measurements(DepolarisingChannel(2, u(rng)), random_measurements(2, 2, 2, rng));
    const StateList s = random_states(2 + i % 3, 2, rng);
    CHECK(cc_robustness(born_behaviour(s, m)).robustness <= incompat_robustness(m).robustness + 1e-6);
  }
}

TEST_CASE("restricted and unrestricted robustness agree on spanning sets") {
  Rng rng(29);
  for (int i = 0; i < 15; ++i) {
    const int d = 2 + (i % 5 == 4);
    const MeasurementSet m = random_measurements(d, 2, 2, rng);
    const StateList s = spanning_states(d);
    REQUIRE(span_rank(s) == d * d);
    CHECK(std::abs(cc_robustness(born_behaviour(s, m)).robustness - incompat_robustness(m).robustness) <= 1e-5);
  }
}

TEST_CASE("incompatibility witnesses hold on compatible sets") {
  const MiWitness w = incompat_robustness(pauli_measurements()).witness;
  Rng rng(37);
  Scalar worst = 1e300;
  for (int i = 0; i < 100; ++i) worst = std::min(worst, evaluate_witness(w, random_compatible(2, 3, 2, rng)) - w.gamma);
  CHECK(worst >= -1e-6);
  CHECK(evaluate_witness(w, pauli_measurements()) < w.gamma);
}

TEST_CASE("mi_witness_bound") {
  const MiWitness w = incompat_robustness(xz()).witness;
  const MiBound bound = mi_witness_bound(w);
  CHECK(bound.value >= w.gamma - 1e-6);
  CHECK(bound.bound_operator.trace() == doctest::Approx(bound.value).epsilon(1e-7));
}

TEST_CASE("mi_to_qc") {
  MiWitness zero;
  zero.f.assign(2, std::vector<HermitianOperator>(2, HermitianOperator::zero(2)));
  const QcWitness z = mi_to_qc(zero);
  for (const auto& row : z.mu)
    for (const auto& col : row)
      for (Scalar v : col) CHECK(std::abs(v) <= 1e-12);
  CHECK(z.beta == 0);
  CHECK(std::abs(z.bound_operator.trace()) <= 1e-12);

  const MiWitness w = incompat_robustness(xz()).witness;
  const QcWitness q = mi_to_qc(w);
  const StateList s = spanning_states(2);
  const Behaviour b = born_behaviour(s, xz());
  CHECK(evaluate_witness(q, b) < q.beta - 1e-3);
  CHECK(std::abs(evaluate_witness(q, b) - evaluate_witness(w, xz())) <= 1e-9);
  CHECK(q.beta == w.gamma);
  CHECK(q.bound_operator.trace() == doctest::Approx(w.gamma).epsilon(1e-12));

  Rng rng(43);
  for (int i = 0; i < 10; ++i) {
    const MeasurementSet m = random_measurements(2, 2, 2, rng);
    CHECK(std::abs(evaluate_witness(q, born_behaviour(s, m)) - evaluate_witness(w, m)) <= 1e-9);
    CHECK(evaluate_witness(q, random_cc_behaviour(s, 2, 2, rng)) >= q.beta - 1e-6);
  }

  CHECK_THROWS_AS(mi_to_qc(w, StateList{qubit::zero(), qubit::plus()}), NotInSpan);
  MiWitness loose = w;
  loose.gamma = mi_witness_bound(w).value + 0.1;
  CHECK_THROWS_AS(mi_to_qc(loose), InvalidArgument);
}

TEST_CASE("qc_to_discrimination") {
  const StateList s = hat_states();
  QcWitness zero{zero_coefficients(2, 4, 2), HermitianOperator::zero(2), 0};
  CHECK_THROWS_AS(qc_to_discrimination(zero, s, 2), DegenerateScaling);

  Rng rng(47);
  std::uniform_real_distribution<Scalar> u(-1, 1);
  for (int i = 0; i < 50; ++i) {
    QcWitness w{zero_coefficients(2, 4, 2), HermitianOperator::zero(2), 0};
    for (auto& row : w.mu)
      for (auto& col : row)
        for (Scalar& v : col) v = u(rng);
    const DiscriminationGame g = qc_to_discrimination(w, s, 2);
    REQUIRE(g.ensembles.size() == 2);
    for (int y = 0; y < 2; ++y) {
      for (int b = 0; b < 2; ++b) {
        const Subensemble& e = g.ensembles[static_cast<std::size_t>(y)][static_cast<std::size_t>(b)];
        CHECK(e.prior >= 0);
        CHECK(e.state.matrix().trace().real() == doctest::Approx(1).epsilon(1e-12));
        CHECK(min_eigenvalue(e.state.op()) >= -1e-9);
      }
    }
  }

  QcWitness w{zero_coefficients(2, 4, 2), HermitianOperator::zero(2), 0};
  w.mu[0][0][0] = 0.5;
  w.mu[1][1][0] = -0.25;
  w.mu[0][2][1] = 0.75;
  w.mu[1][3][1] = 1;
  const Scalar nu = 0.5 + 0.25 + 0.75 + 1;
  const Scalar alpha = 1 / (0.5 - 0.25 + 0.75 + 1 + 2 * 2 * nu / 2);
  const DiscriminationGame g = qc_to_discrimination(w, s, 2);
  CHECK(g.nu == doctest::Approx(nu).epsilon(1e-14));
  CHECK(g.alpha == doctest::Approx(alpha).epsilon(1e-14));
  for (int y = 0; y < 2; ++y)
    for (int b = 0; b < 2; ++b) {
      CMat expect = nu * CMat::Identity(2, 2);
      for (int x = 0; x < 4; ++x) expect += w.mu[static_cast<std::size_t>(b)][static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] * s[static_cast<std::size_t>(x)].matrix();
      expect *= alpha;
      const Subensemble& e = g.ensembles[static_cast<std::size_t>(y)][static_cast<std::size_t>(b)];
      CHECK((e.prior * e.state.matrix() - expect).norm() <= 1e-12);
    }
}
