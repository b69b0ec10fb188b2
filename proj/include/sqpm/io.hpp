#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "sqpm/channels.hpp"
#include "sqpm/incompat.hpp"
#include "sqpm/realizability.hpp"
#include "sqpm/scenario.hpp"
#include "sqpm/sdp.hpp"

namespace sqpm::io {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "sqpm-1";

/// Rounds to 12 significant digits (and maps -0 to 0) so that output is
/// byte-stable across platforms and round trips.
Scalar round12(Scalar v);

struct NamedState {
  std::string name;
  QuantumState state;
};

struct NamedMeasurement {
  std::string name;
  Povm povm;
};

struct NoiseSpec {
  enum class Kind { White, Behaviour } kind = Kind::White;
  ProbabilityTable table;  // Behaviour only
};

/// Contents of a scenario container. Every section is optional except the
/// version tag; `dim` is inferred from the first matrix when absent.
struct ScenarioFile {
  int dim = 0;
  std::vector<NamedState> states;
  std::vector<NamedMeasurement> measurements;
  std::optional<ProbabilityTable> behaviour;
  std::optional<DepolarisingChannel> channel;
  std::optional<NoiseSpec> noise;
  /// Names of operators whose Hermitian symmetrization exceeded the warning
  /// threshold while parsing.
  std::vector<std::string> warnings;

  StateList state_list() const;
  MeasurementSet measurement_set() const;
  bool has_measurements() const { return !measurements.empty(); }
};

/// Matrices are row-major nested arrays of [re, im] pairs (a bare number is
/// read as a real entry).
Json to_json(const CMat& m);
Json to_json(const RMat& m);
CMat complex_matrix_from_json(const Json& j, const std::string& path);
RMat real_matrix_from_json(const Json& j, const std::string& path);

Json to_json(const ScenarioFile& s);
ScenarioFile scenario_from_json(const Json& j);

/// The behaviour of a scenario: the stored table, else born_behaviour of the
/// states and measurements (through the channel when one is present). The
/// trusted states are always the undepolarized ones.
Behaviour scenario_behaviour(const ScenarioFile& s);
/// Measurements actually producing scenario_behaviour (channel applied in the
/// Heisenberg picture).
MeasurementSet effective_measurements(const ScenarioFile& s);

/// 16-hex-digit FNV-1a hash of the states (rounded) and the shape (m, o).
std::string fingerprint(const StateList& states, int m, int o);

Json to_json(const QcWitness& w, const std::string& fingerprint);
Json to_json(const PostQuantumWitness& w, const std::string& fingerprint);
Json to_json(const MiWitness& w);
Json to_json(const DiscriminationGame& g);
Json to_json(const sdp::SdpProblem& p);
Json povm_to_json(const std::vector<HermitianOperator>& elements);

QcWitness qc_witness_from_json(const Json& j);
MiWitness mi_witness_from_json(const Json& j);
/// Returns the stored fingerprint (empty when absent).
std::string witness_fingerprint(const Json& j);

/// Reads and parses a file; errors become ParseError with the file name.
Json read_json(const std::string& path);
/// Two-space indentation with arrays of scalars kept on one line.
std::string dump(const Json& j);

}  // namespace sqpm::io
