#include <doctest.h>

#include <cmath>

#include "sqpm/channels.hpp"
#include "sqpm/scenario.hpp"
#include "sqpm/spanning.hpp"
#include "support/random.hpp"

using namespace sqpm;
using namespace sqpm::testing;

namespace {

MeasurementSet z_only() { return MeasurementSet({Povm::binary(pauli::Z())}); }

}  // namespace

TEST_CASE("QuantumState invariants") {
  CHECK_NOTHROW(QuantumState(HermitianOperator(CMat::Identity(2, 2) / 2)));
  CHECK_THROWS_AS(QuantumState(HermitianOperator(CMat::Identity(2, 2))), InvalidArgument);
  CMat neg(2, 2);
  neg << 1.01, 0, 0, -0.01;
  CHECK_THROWS_AS(QuantumState(HermitianOperator(neg)), InvalidArgument);
  const QuantumState r = qubit::right();
  CHECK(std::abs(r.matrix()(1, 0) - Complex(0, 0.5)) < 1e-15);
}

TEST_CASE("Povm invariants and padding") {
  CHECK_THROWS_AS(Povm({HermitianOperator::identity(2), HermitianOperator::identity(2)}), InvalidArgument);
  const Povm z = Povm::binary(pauli::Z());
  CHECK(std::abs(z[0].matrix()(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(z[1].matrix()(1, 1) - 1.0) < 1e-15);
  const MeasurementSet m({Povm({HermitianOperator::identity(2)}), z, Povm::binary(pauli::X()).padded(3)});
  CHECK(m.outcomes() == 3);
  CHECK(m.element(1, 0).matrix().norm() == 0);
  CHECK(m.element(2, 1).matrix().norm() == 0);
}

TEST_CASE("born_behaviour") {
  const Behaviour b = born_behaviour({qubit::zero()}, z_only());
  CHECK(b(0, 0, 0) == doctest::Approx(1));
  CHECK(b(0, 0, 1) == doctest::Approx(0));

  Rng rng(11);
  const MeasurementSet m = random_measurements(2, 2, 3, rng);
  const Behaviour mixed = born_behaviour({qubit::mixed()}, m);
  for (int y = 0; y < 2; ++y) {
    for (int k = 0; k < 3; ++k) CHECK(mixed(0, y, k) == doctest::Approx(m.element(k, y).trace() / 2).epsilon(1e-12));
  }

  for (int i = 0; i < 50; ++i) {
    const int d = 2 + i % 2;
    const Behaviour r = born_behaviour(random_states(3, d, rng), random_measurements(d, 2, 2 + i % 3, rng));
    CHECK(validate_behaviour(r).ok);
  }
  CHECK_THROWS_AS(born_behaviour({QuantumState::maximally_mixed(3)}, z_only()), DimensionMismatch);
}

TEST_CASE("Behaviour tolerance and renormalization") {
  const StateList s = {qubit::zero()};
  const Behaviour b(s, {{{0.5 + 4e-10, 0.5}}});
  CHECK(b(0, 0, 0) + b(0, 0, 1) == doctest::Approx(1).epsilon(1e-15));
  CHECK_THROWS_AS(Behaviour(s, {{{0.6, 0.5}}}), InvalidArgument);
  CHECK_THROWS_AS(Behaviour(s, {{{1.01, -0.01}}}), InvalidArgument);
  CHECK_THROWS_AS(Behaviour(s, {{{1.0}, {0.5, 0.5}}}), DimensionMismatch);
}

TEST_CASE("cc_behaviour") {
  const StateList s = {qubit::zero(), qubit::plus()};
  const Behaviour det = cc_behaviour(Povm({HermitianOperator::identity(2)}), {{{1, 0}}, {{1, 0}}}, s);
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) CHECK(det(x, y, 0) == doctest::Approx(1));
  }

  const Behaviour relay = cc_behaviour(Povm::binary(pauli::Z()), {{{1, 0}, {0, 1}}}, {qubit::zero(), qubit::one()});
  CHECK(relay(0, 0, 0) == doctest::Approx(1));
  CHECK(relay(1, 0, 1) == doctest::Approx(1));

  CHECK_THROWS_AS(cc_behaviour(Povm::binary(pauli::Z()), {{{0.7, 0.7}, {0, 1}}}, s), InvalidArgument);
  CHECK_THROWS_AS(cc_behaviour(Povm::binary(pauli::Z()), {{{1, 0}}}, s), DimensionMismatch);
}

TEST_CASE("validate_behaviour") {
  CHECK(validate_behaviour(born_behaviour({qubit::plus()}, pauli_measurements())).ok);
  const BehaviourReport short_sum = validate_behaviour(ProbabilityTable{{{0.4, 0.5}}});
  CHECK_FALSE(short_sum.ok);
  CHECK(short_sum.normalization == doctest::Approx(0.1));
  const BehaviourReport negative = validate_behaviour(ProbabilityTable{{{1.01, -0.01}}});
  CHECK_FALSE(negative.ok);
  CHECK(negative.nonnegativity == doctest::Approx(0.01));
  CHECK(std::isinf(validate_behaviour(ProbabilityTable{{{0.5, 0.5}, {1.0}}}).normalization));
}

TEST_CASE("deterministic_vertex_count") {
  CHECK(deterministic_vertex_count(2, 1, 2) == 4);
  CHECK(deterministic_vertex_count(3, 2, 2) == 64);
  CHECK(deterministic_vertex_count(1, 1, 5) == 5);
  CHECK(deterministic_vertex_count(1, 62, 2) == (std::uint64_t{1} << 62));
  CHECK_THROWS_AS(deterministic_vertex_count(1, 63, 2), Overflow);
  CHECK_THROWS_AS(deterministic_vertex_count(4, 20, 3), Overflow);
}

TEST_CASE("apply_channel") {
  Rng rng(5);
  const StateList s = random_states(4, 3, rng);
  const StateList same = apply_channel(s, DepolarisingChannel(3, 1));
  const StateList flat = apply_channel(s, DepolarisingChannel(3, 0));
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK((same[i].matrix() - s[i].matrix()).norm() < 1e-15);
    CHECK((flat[i].matrix() - CMat::Identity(3, 3) / 3).norm() < 1e-15);
  }
  const Scalar t = 0.3;
  const StateList z = apply_channel({qubit::zero()}, DepolarisingChannel(2, t));
  CHECK(z[0].matrix()(0, 0).real() == doctest::Approx(t + (1 - t) / 2));
  CHECK(z[0].matrix()(1, 1).real() == doctest::Approx((1 - t) / 2));
  CHECK_THROWS_AS(apply_channel(s, DepolarisingChannel(2, 0.5)), DimensionMismatch);
}

TEST_CASE("depolarized states and measurements give the same behaviour") {
  Rng rng(17);
  for (int i = 0; i < 20; ++i) {
    const int d = 2 + i % 2;
    const DepolarisingChannel ch(d, std::uniform_real_distribution<Scalar>(0, 1)(rng));
    const StateList s = random_states(3, d, rng);
    const MeasurementSet m = random_measurements(d, 2, 3, rng);
    const Behaviour a = born_behaviour(apply_channel(s, ch), m);
    const Behaviour b = born_behaviour(s, depolarise_measurements(ch, m));
    for (int x = 0; x < 3; ++x)
      for (int y = 0; y < 2; ++y)
        for (int k = 0; k < 3; ++k) CHECK(std::abs(a(x, y, k) - b(x, y, k)) <= 1e-12);
  }
}

TEST_CASE("spanning_states") {
  for (int d = 2; d <= 4; ++d) {
    const StateList s = spanning_states(d);
    CHECK(static_cast<int>(s.size()) == d * d);
    CHECK(span_rank(s) == d * d);
  }
  CHECK(span_rank({qubit::zero(), qubit::plus()}) == 2);
  CHECK(span_rank({qubit::zero(), qubit::plus(), qubit::right(), qubit::mixed()}) == 4);
  CHECK(span_rank({qubit::zero(), qubit::one(), qubit::mixed()}) == 2);

  Rng rng(3);
  const StateList s = spanning_states(3);
  for (int i = 0; i < 20; ++i) {
    const HermitianOperator f = random_hermitian(3, rng);
    const Decomposition dec = decompose_over_states(f, s);
    CMat back = CMat::Zero(3, 3);
    for (std::size_t x = 0; x < s.size(); ++x) back += dec.coefficients(static_cast<Eigen::Index>(x)) * s[x].matrix();
    CHECK((back - f.matrix()).norm() <= 1e-9 * (1 + f.matrix().norm()));
  }
  CHECK_THROWS_AS(decompose_over_states(pauli::Y(), {qubit::zero(), qubit::plus()}), NotInSpan);
}
