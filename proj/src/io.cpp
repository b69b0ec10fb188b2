#include "sqpm/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sqpm::io {

Scalar round12(Scalar v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  const Scalar r = std::strtod(buf, nullptr);
  return r == 0 ? 0.0 : r;
}

namespace {

std::string at(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const Json& require(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ParseError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(at(path, key), "missing field");
  return *it;
}

Scalar number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path, "expected a number");
  return j.get<Scalar>();
}

int integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError(path, "expected an integer");
  return j.get<int>();
}

const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array");
  return j;
}

Complex complex_entry(const Json& j, const std::string& path) {
  if (j.is_number()) return {j.get<Scalar>(), 0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<Scalar>(), j[1].get<Scalar>()};
  throw ParseError(path, "expected a [re, im] pair");
}

Scalar clean(Scalar v) { return std::abs(v) < 1e-12 ? 0.0 : round12(v); }

Json complex_value(Complex c) { return Json::array({clean(c.real()), clean(c.imag())}); }

ProbabilityTable table_from_json(const Json& j, const std::string& path) {
  ProbabilityTable t;
  for (std::size_t x = 0; x < array(j, path).size(); ++x) {
    const std::string px = at(path, x);
    t.emplace_back();
    for (std::size_t y = 0; y < array(j[x], px).size(); ++y) {
      const std::string py = at(px, y);
      t.back().emplace_back();
      for (std::size_t b = 0; b < array(j[x][y], py).size(); ++b) t.back().back().push_back(number(j[x][y][b], at(py, b)));
    }
  }
  return t;
}

Json table_to_json(const ProbabilityTable& t) {
  Json j = Json::array();
  for (const auto& row : t) {
    Json jr = Json::array();
    for (const auto& dist : row) {
      Json jd = Json::array();
      for (Scalar p : dist) jd.push_back(clean(p));
      jr.push_back(jd);
    }
    j.push_back(jr);
  }
  return j;
}

Json coefficients_to_json(const Coefficients& c) {
  Json j = Json::array();
  for (const auto& cb : c) {
    Json jb = Json::array();
    for (const auto& cbx : cb) {
      Json jx = Json::array();
      for (Scalar v : cbx) jx.push_back(clean(v));
      jb.push_back(jx);
    }
    j.push_back(jb);
  }
  return j;
}

Coefficients coefficients_from_json(const Json& j, const std::string& path) {
  Coefficients c;
  for (std::size_t b = 0; b < array(j, path).size(); ++b) {
    c.emplace_back();
    for (std::size_t x = 0; x < array(j[b], at(path, b)).size(); ++x) {
      c.back().emplace_back();
      const std::string px = at(at(path, b), x);
      for (std::size_t y = 0; y < array(j[b][x], px).size(); ++y) c.back().back().push_back(number(j[b][x][y], at(px, y)));
    }
  }
  if (c.empty() || c.front().empty() || c.front().front().empty()) throw ParseError(path, "empty coefficient table");
  for (const auto& cb : c) {
    if (cb.size() != c.front().size()) throw ParseError(path, "ragged coefficient table");
    for (const auto& cbx : cb) {
      if (cbx.size() != c.front().front().size()) throw ParseError(path, "ragged coefficient table");
    }
  }
  return c;
}

HermitianOperator hermitian_from_json(const Json& j, const std::string& path, std::vector<std::string>* warnings) {
  const CMat m = complex_matrix_from_json(j, path);
  if (m.rows() != m.cols()) throw ParseError(path, "matrix must be square");
  HermitianOperator h(m);
  if (h.corrected() && warnings) warnings->push_back(path);
  return h;
}

template <typename F>
auto wrap(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(path, e.what());
  }
}

}  // namespace

Json to_json(const CMat& m) {
  Json j = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_value(m(r, c)));
    j.push_back(row);
  }
  return j;
}

Json to_json(const RMat& m) {
  Json j = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    j.push_back(row);
  }
  return j;
}

CMat complex_matrix_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ParseError(path, "expected a non-empty matrix");
  const std::size_t rows = j.size();
  const std::size_t cols = array(j[0], at(path, 0)).size();
  if (cols == 0) throw ParseError(at(path, 0), "empty row");
  CMat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string pr = at(path, r);
    if (array(j[r], pr).size() != cols) throw ParseError(pr, "ragged matrix row");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_entry(j[r][c], at(pr, c));
    }
  }
  return m;
}

RMat real_matrix_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ParseError(path, "expected a non-empty matrix");
  const std::size_t cols = array(j[0], at(path, 0)).size();
  RMat m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (array(j[r], at(path, r)).size() != cols) throw ParseError(at(path, r), "ragged matrix row");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = number(j[r][c], at(at(path, r), c));
    }
  }
  return m;
}

StateList ScenarioFile::state_list() const {
  StateList out;
  for (const auto& s : states) out.push_back(s.state);
  return out;
}

MeasurementSet ScenarioFile::measurement_set() const {
  if (measurements.empty()) throw InvalidArgument("scenario has no measurements");
  std::vector<Povm> povms;
  for (const auto& m : measurements) povms.push_back(m.povm);
  return MeasurementSet(std::move(povms));
}

Json to_json(const ScenarioFile& s) {
  Json j;
  j["version"] = kVersion;
  if (s.dim > 0) j["dim"] = s.dim;
  if (!s.states.empty()) {
    Json arr = Json::array();
    for (const auto& st : s.states) arr.push_back({{"name", st.name}, {"matrix", to_json(st.state.matrix())}});
    j["states"] = arr;
  }
  if (!s.measurements.empty()) {
    Json arr = Json::array();
    for (const auto& m : s.measurements) {
      Json els = Json::array();
      for (const auto& e : m.povm.elements()) els.push_back(to_json(e.matrix()));
      arr.push_back({{"name", m.name}, {"elements", els}});
    }
    j["measurements"] = arr;
  }
  if (s.behaviour) j["behaviour"] = table_to_json(*s.behaviour);
  if (s.channel) j["channel"] = {{"kind", "depolarising"}, {"dim", s.channel->dim()}, {"t", round12(s.channel->t())}};
  if (s.noise) {
    if (s.noise->kind == NoiseSpec::Kind::White) {
      j["noise"] = {{"kind", "white"}};
    } else {
      j["noise"] = {{"kind", "behaviour"}, {"table", table_to_json(s.noise->table)}};
    }
  }
  return j;
}

ScenarioFile scenario_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("", "expected a JSON object");
  const Json& version = require(j, "version", "");
  if (!version.is_string() || version.get<std::string>() != kVersion) {
    throw ParseError("version", std::string("expected \"") + kVersion + "\"");
  }
  ScenarioFile s;
  if (j.contains("dim")) {
    s.dim = integer(j["dim"], "dim");
    if (s.dim < 1) throw ParseError("dim", "must be >= 1");
  }
  if (j.contains("states")) {
    const Json& arr = array(j["states"], "states");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = at("states", i);
      const Json& e = arr[i];
      std::string name = "rho" + std::to_string(i + 1);
      if (e.is_object() && e.contains("name")) {
        if (!e["name"].is_string()) throw ParseError(at(p, "name"), "expected a string");
        name = e["name"].get<std::string>();
      }
      if (e.is_object() && e.contains("ket")) {
        const std::string pk = at(p, "ket");
        const Json& k = array(e["ket"], pk);
        Eigen::VectorXcd v(static_cast<Eigen::Index>(k.size()));
        for (std::size_t r = 0; r < k.size(); ++r) v(static_cast<Eigen::Index>(r)) = complex_entry(k[r], at(pk, r));
        s.states.push_back({name, wrap(pk, [&] { return QuantumState::pure(v); })});
      } else {
        const std::string pm = at(p, "matrix");
        const HermitianOperator h = hermitian_from_json(require(e, "matrix", p), pm, &s.warnings);
        s.states.push_back({name, wrap(pm, [&] { return QuantumState(h); })});
      }
    }
  }
  if (j.contains("measurements")) {
    const Json& arr = array(j["measurements"], "measurements");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = at("measurements", i);
      const Json& e = arr[i];
      std::string name = "M" + std::to_string(i + 1);
      if (e.is_object() && e.contains("name")) {
        if (!e["name"].is_string()) throw ParseError(at(p, "name"), "expected a string");
        name = e["name"].get<std::string>();
      }
      if (e.is_object() && e.contains("observable")) {
        const std::string po = at(p, "observable");
        const HermitianOperator h = hermitian_from_json(e["observable"], po, &s.warnings);
        s.measurements.push_back({name, wrap(po, [&] { return Povm::binary(h); })});
      } else {
        const std::string pe = at(p, "elements");
        const Json& els = array(require(e, "elements", p), pe);
        std::vector<HermitianOperator> ops;
        for (std::size_t b = 0; b < els.size(); ++b) ops.push_back(hermitian_from_json(els[b], at(pe, b), &s.warnings));
        s.measurements.push_back({name, wrap(pe, [&] { return Povm(ops); })});
      }
    }
  }
  if (s.dim == 0) {
    if (!s.states.empty()) s.dim = s.states.front().state.dim();
    else if (!s.measurements.empty()) s.dim = s.measurements.front().povm.dim();
  }
  for (std::size_t i = 0; i < s.states.size(); ++i) {
    if (s.states[i].state.dim() != s.dim) throw ParseError(at("states", i), "dimension differs from dim");
  }
  for (std::size_t i = 0; i < s.measurements.size(); ++i) {
    if (s.measurements[i].povm.dim() != s.dim) throw ParseError(at("measurements", i), "dimension differs from dim");
  }
  if (!s.measurements.empty()) wrap("measurements", [&] { return s.measurement_set(); });
  if (j.contains("behaviour")) {
    ProbabilityTable t = table_from_json(j["behaviour"], "behaviour");
    if (s.states.empty()) throw ParseError("behaviour", "a behaviour needs the trusted states");
    const Behaviour b = wrap("behaviour", [&] { return Behaviour(s.state_list(), t); });
    if (!s.measurements.empty()) {
      const MeasurementSet m = s.measurement_set();
      if (b.num_measurements() != m.size() || b.outcomes() != m.outcomes()) {
        throw ParseError("behaviour", "shape differs from the measurements");
      }
    }
    s.behaviour = b.table();
  }
  if (j.contains("channel")) {
    const Json& c = j["channel"];
    const Json& kind = require(c, "kind", "channel");
    if (!kind.is_string() || kind.get<std::string>() != "depolarising") {
      throw ParseError("channel.kind", "only \"depolarising\" is supported");
    }
    const int dim = integer(require(c, "dim", "channel"), "channel.dim");
    const Scalar t = number(require(c, "t", "channel"), "channel.t");
    if (s.dim != 0 && dim != s.dim) throw ParseError("channel.dim", "differs from the scenario dimension");
    s.channel = wrap("channel", [&] { return DepolarisingChannel(dim, t); });
  }
  if (j.contains("noise")) {
    const Json& n = j["noise"];
    const Json& kind = require(n, "kind", "noise");
    NoiseSpec spec;
    if (kind == "white") {
      spec.kind = NoiseSpec::Kind::White;
    } else if (kind == "behaviour") {
      spec.kind = NoiseSpec::Kind::Behaviour;
      spec.table = table_from_json(require(n, "table", "noise"), "noise.table");
      if (s.states.empty()) throw ParseError("noise", "a noise behaviour needs the trusted states");
      const Behaviour q = wrap("noise.table", [&] { return Behaviour(s.state_list(), spec.table); });
      const bool shaped = s.behaviour ? q.same_scenario(Behaviour(s.state_list(), *s.behaviour))
                        : s.measurements.empty() || (q.num_measurements() == s.measurement_set().size() &&
                                                    q.outcomes() == s.measurement_set().outcomes());
      if (!shaped) throw ParseError("noise.table", "shape differs from the scenario");
      spec.table = q.table();
    } else {
      throw ParseError("noise.kind", "expected \"white\" or \"behaviour\"");
    }
    s.noise = spec;
  }
  return s;
}

MeasurementSet effective_measurements(const ScenarioFile& s) {
  const MeasurementSet m = s.measurement_set();
  return s.channel ? depolarise_measurements(*s.channel, m) : m;
}

Behaviour scenario_behaviour(const ScenarioFile& s) {
  if (s.states.empty()) throw InvalidArgument("scenario has no states");
  if (s.behaviour) return Behaviour(s.state_list(), *s.behaviour);
  if (!s.has_measurements()) throw InvalidArgument("scenario has neither a behaviour nor measurements");
  return born_behaviour(s.state_list(), effective_measurements(s));
}

std::string fingerprint(const StateList& states, int m, int o) {
  Json j;
  j["m"] = m;
  j["o"] = o;
  j["states"] = Json::array();
  for (const auto& s : states) j["states"].push_back(to_json(s.matrix()));
  const std::string text = j.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json to_json(const QcWitness& w, const std::string& fp) {
  return {{"version", kVersion}, {"kind", "qc-witness"},     {"mu", coefficients_to_json(w.mu)},
          {"B", to_json(w.bound_operator.matrix())},       {"beta", round12(w.beta)}, {"scenario", fp}};
}

Json to_json(const PostQuantumWitness& w, const std::string& fp) {
  Json a = Json::array();
  for (const auto& ay : w.a) a.push_back(to_json(ay.matrix()));
  return {{"version", kVersion}, {"kind", "postquantum-witness"}, {"lambda", coefficients_to_json(w.lambda)},
          {"A", a},              {"alpha", round12(w.alpha)},     {"scenario", fp}};
}

Json to_json(const MiWitness& w) {
  Json f = Json::array();
  for (const auto& fb : w.f) {
    Json row = Json::array();
    for (const auto& op : fb) row.push_back(to_json(op.matrix()));
    f.push_back(row);
  }
  return {{"version", kVersion}, {"kind", "mi-witness"}, {"F", f}, {"gamma", round12(w.gamma)}};
}

Json to_json(const DiscriminationGame& g) {
  Json ens = Json::array();
  for (const auto& ey : g.ensembles) {
    Json row = Json::array();
    for (const auto& e : ey) row.push_back({{"prior", round12(e.prior)}, {"state", to_json(e.state.matrix())}});
    ens.push_back(row);
  }
  return {{"version", kVersion}, {"kind", "discrimination-game"}, {"nu", round12(g.nu)},
          {"alpha", round12(g.alpha)}, {"ensembles", ens}};
}

Json to_json(const sdp::SdpProblem& p) {
  Json j;
  j["version"] = kVersion;
  j["kind"] = "sdp-problem";
  j["blocks"] = p.block_sizes;
  j["objective"] = Json::array();
  for (const auto& c : p.objective) j["objective"].push_back(to_json(c));
  j["constraints"] = Json::array();
  for (const auto& con : p.constraints) {
    Json terms = Json::array();
    for (const auto& t : con.terms) terms.push_back({{"block", t.block}, {"matrix", to_json(t.matrix)}});
    j["constraints"].push_back({{"rhs", con.rhs}, {"terms", terms}});
  }
  return j;
}

Json povm_to_json(const std::vector<HermitianOperator>& elements) {
  Json j = Json::array();
  for (const auto& e : elements) j.push_back(to_json(e.matrix()));
  return {{"version", kVersion}, {"kind", "povm"}, {"elements", j}};
}

namespace {

void require_kind(const Json& j, const char* kind) {
  const Json& k = require(j, "kind", "");
  if (!k.is_string() || k.get<std::string>() != kind) throw ParseError("kind", std::string("expected \"") + kind + "\"");
}

}  // namespace

QcWitness qc_witness_from_json(const Json& j) {
  require_kind(j, "qc-witness");
  QcWitness w;
  w.mu = coefficients_from_json(require(j, "mu", ""), "mu");
  w.bound_operator = hermitian_from_json(require(j, "B", ""), "B", nullptr);
  w.beta = number(require(j, "beta", ""), "beta");
  if (std::abs(w.beta - w.bound_operator.trace()) > 1e-9 * (1 + std::abs(w.beta))) {
    throw ParseError("beta", "differs from Tr(B)");
  }
  return w;
}

MiWitness mi_witness_from_json(const Json& j) {
  require_kind(j, "mi-witness");
  MiWitness w;
  const Json& f = array(require(j, "F", ""), "F");
  for (std::size_t b = 0; b < f.size(); ++b) {
    w.f.emplace_back();
    const Json& row = array(f[b], at("F", b));
    for (std::size_t y = 0; y < row.size(); ++y) w.f.back().push_back(hermitian_from_json(row[y], at(at("F", b), y), nullptr));
  }
  if (w.f.empty() || w.f.front().empty()) throw ParseError("F", "empty operator table");
  w.gamma = number(require(j, "gamma", ""), "gamma");
  return w;
}

std::string witness_fingerprint(const Json& j) {
  if (j.is_object() && j.contains("scenario") && j["scenario"].is_string()) return j["scenario"].get<std::string>();
  return {};
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw ParseError(path, e.what());
  }
}

namespace {

bool flat(const Json& j) {
  if (!j.is_array()) return false;
  for (const auto& e : j) {
    if (e.is_structured()) return false;
  }
  return true;
}

void write(std::ostream& os, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  if (j.is_object() && !j.empty()) {
    os << "{\n";
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
      os << pad << Json(it.key()).dump() << ": ";
      write(os, it.value(), indent + 2);
      os << (i + 1 < j.size() ? ",\n" : "\n");
    }
    os << std::string(static_cast<std::size_t>(indent), ' ') << "}";
  } else if (j.is_array() && !j.empty() && !flat(j)) {
    os << "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      os << pad;
      write(os, j[i], indent + 2);
      os << (i + 1 < j.size() ? ",\n" : "\n");
    }
    os << std::string(static_cast<std::size_t>(indent), ' ') << "]";
  } else if (j.is_array()) {
    os << "[";
    for (std::size_t i = 0; i < j.size(); ++i) os << (i ? ", " : "") << j[i].dump();
    os << "]";
  } else {
    os << j.dump();
  }
}

}  // namespace

std::string dump(const Json& j) {
  std::ostringstream os;
  write(os, j, 0);
  os << "\n";
  return os.str();
}

}  // namespace sqpm::io
