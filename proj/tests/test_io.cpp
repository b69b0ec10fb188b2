#include <doctest.h>

#include <cctype>
#include <cmath>

#include "sqpm/io.hpp"
#include "support/random.hpp"

using namespace sqpm;
using namespace sqpm::testing;
using io::Json;

namespace {

std::string data(const std::string& name) { return std::string(SQPM_TEST_DATA) + "/" + name; }

std::string parse_error_path(const Json& j) {
  try {
    io::scenario_from_json(j);
  } catch (const ParseError& e) {
    return e.path();
  }
  return "<none>";
}

Json minimal() { return Json::parse(R"({"version": "sqpm-1", "states": [{"ket": [1, 0]}]})"); }

}  // namespace

TEST_CASE("round12") {
  CHECK(io::round12(0.1 + 0.2) == 0.3);
  CHECK(io::round12(1 / 3.0) == 0.333333333333);
  CHECK(std::signbit(io::round12(-0.0)) == false);
}

TEST_CASE("scenario files round-trip byte-stably") {
  for (const char* name : {"pauli_s1.json", "pauli_s3.json", "witness_xy.json", "postquantum.json", "cc_depolarised.json"}) {
    const io::ScenarioFile s = io::scenario_from_json(io::read_json(data(name)));
    const std::string once = io::dump(io::to_json(s));
    const std::string twice = io::dump(io::to_json(io::scenario_from_json(Json::parse(once))));
    CHECK(once == twice);
    CHECK(once.back() == '\n');
  }
}

TEST_CASE("scenario parsing") {
  const io::ScenarioFile s = io::scenario_from_json(io::read_json(data("pauli_s3.json")));
  CHECK(s.dim == 2);
  REQUIRE(s.states.size() == 4);
  CHECK(s.states[1].name == "plus");
  CHECK((s.states[1].state.matrix() - qubit::plus().matrix()).norm() <= 1e-12);
  REQUIRE(s.measurements.size() == 3);
  CHECK((s.measurement_set().element(0, 1).matrix() - pauli_measurements().element(0, 1).matrix()).norm() <= 1e-12);

  const io::ScenarioFile m = io::scenario_from_json(minimal());
  CHECK(m.dim == 2);
  CHECK((m.states[0].state.matrix() - qubit::zero().matrix()).norm() == 0);
  CHECK(m.states[0].name == "rho1");
  CHECK_FALSE(m.has_measurements());

  Json real = minimal();
  real["states"][0] = Json::parse(R"({"matrix": [[0.5, 0.5], [0.5, 0.5]]})");
  CHECK((io::scenario_from_json(real).states[0].state.matrix() - qubit::plus().matrix()).norm() <= 1e-15);

  Json skew = minimal();
  skew["states"][0] = Json::parse(R"({"matrix": [[0.5, [0.5, 1e-6]], [0.5, 0.5]]})");
  const io::ScenarioFile warned = io::scenario_from_json(skew);
  CHECK(warned.warnings.size() == 1);
}

TEST_CASE("scenario errors carry field paths") {
  const Json bad = io::read_json(data("malformed_matrix.json"));
  CHECK(parse_error_path(bad) == "states[0].matrix[1][1]");

  Json version = minimal();
  version["version"] = "sqpm-0";
  CHECK(parse_error_path(version) == "version");
  Json missing = minimal();
  missing.erase("version");
  CHECK(parse_error_path(missing) == "version");

  Json dims = minimal();
  dims["dim"] = 3;
  CHECK(parse_error_path(dims).rfind("states[0]", 0) == 0);

  Json povm = minimal();
  povm["measurements"] = Json::parse(R"([{"elements": [[[1, 0], [0, 0]], [[1, 0], [0, 1]]]}])");
  CHECK(parse_error_path(povm) == "measurements[0].elements");

  Json table = minimal();
  table["behaviour"] = Json::parse("[[[0.6, 0.6]]]");
  CHECK(parse_error_path(table) == "behaviour");

  Json shape = io::read_json(data("pauli_s1.json"));
  shape["behaviour"] = Json::parse("[[[1, 0]], [[1, 0]]]");
  CHECK(parse_error_path(shape) == "behaviour");
  Json noise = io::read_json(data("pauli_s1.json"));
  noise["noise"] = Json::parse(R"({"kind": "behaviour", "table": [[[1, 0]], [[1, 0]]]})");
  CHECK(parse_error_path(noise) == "noise.table");

  Json nostates = Json::parse(R"({"version": "sqpm-1", "behaviour": [[[1, 0]]]})");
  CHECK(parse_error_path(nostates) != "<none>");

  CHECK_THROWS_AS(io::read_json(data("does_not_exist.json")), ParseError);
}

TEST_CASE("scenario_behaviour applies the channel to the measurements") {
  const io::ScenarioFile s = io::scenario_from_json(io::read_json(data("cc_depolarised.json")));
  REQUIRE(s.channel);
  const Behaviour b = io::scenario_behaviour(s);
  const Behaviour expect = born_behaviour(apply_channel(s.state_list(), *s.channel), s.measurement_set());
  for (int x = 0; x < b.num_states(); ++x)
    for (int y = 0; y < b.num_measurements(); ++y)
      for (int k = 0; k < b.outcomes(); ++k) CHECK(std::abs(b(x, y, k) - expect(x, y, k)) <= 1e-12);
  CHECK((b.states()[0].matrix() - s.state_list()[0].matrix()).norm() == 0);

  const io::ScenarioFile pq = io::scenario_from_json(io::read_json(data("postquantum.json")));
  CHECK(io::scenario_behaviour(pq)(2, 0, 0) == 1);
}

TEST_CASE("fingerprint") {
  const StateList s = {qubit::zero(), qubit::plus()};
  const std::string f = io::fingerprint(s, 2, 2);
  CHECK(f.size() == 16);
  for (char c : f) CHECK(std::isxdigit(static_cast<unsigned char>(c)));
  CHECK(f == io::fingerprint(s, 2, 2));
  CHECK(f != io::fingerprint(s, 3, 2));
  CHECK(f != io::fingerprint({qubit::zero(), qubit::minus()}, 2, 2));
}

TEST_CASE("witness files round-trip") {
  Rng rng(5);
  QcWitness w{zero_coefficients(2, 3, 2), HermitianOperator(random_hermitian(2, rng)), 0};
  for (auto& row : w.mu)
    for (auto& col : row)
      for (Scalar& v : col) v = std::uniform_real_distribution<Scalar>(-1, 1)(rng);
  w.beta = w.bound_operator.trace();
  const Json j = io::to_json(w, "0123456789abcdef");
  CHECK(j["kind"] == "qc-witness");
  const QcWitness back = io::qc_witness_from_json(Json::parse(io::dump(j)));
  CHECK(io::witness_fingerprint(j) == "0123456789abcdef");
  CHECK(back.beta == doctest::Approx(w.beta).epsilon(1e-11));
  CHECK((back.bound_operator.matrix() - w.bound_operator.matrix()).norm() <= 1e-11);
  for (int k = 0; k < 2; ++k)
    for (int x = 0; x < 3; ++x)
      for (int y = 0; y < 2; ++y) CHECK(std::abs(back.mu[k][x][y] - w.mu[k][x][y]) <= 1e-11);

  Json inconsistent = j;
  inconsistent["beta"] = w.beta + 1;
  CHECK_THROWS_AS(io::qc_witness_from_json(inconsistent), ParseError);

  MiWitness mi;
  mi.f = {{random_hermitian(2, rng), random_hermitian(2, rng)}, {random_hermitian(2, rng), random_hermitian(2, rng)}};
  mi.gamma = -0.25;
  const MiWitness mback = io::mi_witness_from_json(Json::parse(io::dump(io::to_json(mi))));
  CHECK(mback.gamma == -0.25);
  for (int k = 0; k < 2; ++k)
    for (int y = 0; y < 2; ++y) CHECK((mback.f[k][y].matrix() - mi.f[k][y].matrix()).norm() <= 1e-11);
  CHECK(io::witness_fingerprint(io::to_json(mi)).empty());
}

TEST_CASE("dump keeps scalar arrays on one line") {
  const Json j = Json::parse(R"({"a": [1, 2.5, -3], "b": {"c": "x"}, "d": [[1, 0], [0, 1]]})");
  CHECK(io::dump(j) == "{\n  \"a\": [1, 2.5, -3],\n  \"b\": {\n    \"c\": \"x\"\n  },\n  \"d\": [\n    [1, 0],\n    [0, 1]\n  ]\n}\n");
}
