#include "sqpm/cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "sqpm/channels.hpp"
#include "sqpm/incompat.hpp"
#include "sqpm/io.hpp"
#include "sqpm/realizability.hpp"
#include "sqpm/spanning.hpp"

namespace sqpm::cli {
namespace {

using io::Json;

// Decided-free points report exactly zero so output does not carry solver noise.
Scalar shown(bool free, Scalar v) { return free ? 0.0 : v; }

std::string fmt(Scalar v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", io::round12(v));
  return buf;
}

void print_solver(std::ostream& out, const sdp::SdpSolution& s) {
  out << "solver: " << sdp::to_string(s.status) << ", iterations " << s.iterations << ", gap " << fmt(s.gap)
      << ", residuals " << fmt(s.primal_residual) << " " << fmt(s.dual_residual) << "\n";
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
  if (!f) throw Error("cannot write " + path);
}

io::ScenarioFile load_scenario(const std::string& path, std::ostream& err) {
  const Json j = io::read_json(path);
  io::ScenarioFile s;
  try {
    s = io::scenario_from_json(j);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.path(), e.message());
  }
  for (const auto& w : s.warnings) err << "warning: " << path << ": " << w << " symmetrized beyond 1e-9\n";
  return s;
}

Behaviour white_for(const io::ScenarioFile& s, const Behaviour& b) {
  if (s.has_measurements() && !s.behaviour) return white_noise(b.states(), io::effective_measurements(s));
  return white_noise(b.states(), b.num_measurements(), b.outcomes());
}

Behaviour resolve_noise(const std::string& flag, const io::ScenarioFile& s, const Behaviour& b, std::ostream& err) {
  if (flag == "white") return white_for(s, b);
  if (flag.empty()) {
    if (s.noise && s.noise->kind == io::NoiseSpec::Kind::Behaviour) return Behaviour(b.states(), s.noise->table);
    return white_for(s, b);
  }
  const io::ScenarioFile n = load_scenario(flag, err);
  if (n.noise && n.noise->kind == io::NoiseSpec::Kind::Behaviour) return Behaviour(b.states(), n.noise->table);
  if (n.behaviour) return Behaviour(b.states(), *n.behaviour);
  if (!n.states.empty() && n.has_measurements()) return Behaviour(b.states(), io::scenario_behaviour(n).table());
  throw ParseError(flag, "no noise behaviour in file");
}

struct Common {
  std::string dump_sdp;
};

int cmd_check(const std::string& kind, const std::string& file, const Common& c, std::ostream& out,
              std::ostream& err) {
  const io::ScenarioFile s = load_scenario(file, err);
  const Behaviour b = io::scenario_behaviour(s);
  if (kind == "quantum") {
    if (!c.dump_sdp.empty()) write_file(c.dump_sdp, io::dump(io::to_json(quantum_robustness_problem(b))));
    const QuantumRobustness r = quantum_robustness(b);
    out << "quantum: " << (r.realizable ? "REALIZABLE" : "NOT-REALIZABLE") << "\n";
    out << "robustness: " << fmt(shown(r.realizable, r.eta)) << "\n";
    print_solver(out, r.solver);
    return r.realizable ? kExitOk : kExitNegative;
  }
  if (!c.dump_sdp.empty()) write_file(c.dump_sdp, io::dump(io::to_json(cc_robustness_problem(b))));
  const CcRobustness r = cc_robustness(b);
  out << "cc: " << (r.realizable ? "REALIZABLE" : "NOT-REALIZABLE") << "\n";
  out << "robustness: " << fmt(shown(r.realizable, r.robustness)) << "\n";
  print_solver(out, r.solver);
  return r.realizable ? kExitOk : kExitNegative;
}

template <typename W>
void print_report(std::ostream& out, const char* label, const WitnessReport<W>& r, Scalar bound, Scalar margin) {
  out << label << ": VIOLATED\n";
  out << "bound: " << fmt(bound) << "\n";
  out << "value: " << fmt(r.value) << "\n";
  out << "violation: " << fmt(r.violation) << "\n";
  out << "robustness: " << fmt(r.robustness) << "\n";
  out << "inequality margin: " << fmt(margin) << "\n";
  print_solver(out, r.solver);
}

int cmd_witness(const std::string& kind, const std::string& file, const std::string& noise_flag,
                const std::string& out_path, bool raw, std::ostream& out, std::ostream& err) {
  const io::ScenarioFile s = load_scenario(file, err);
  const Behaviour b = io::scenario_behaviour(s);
  const Behaviour noise = resolve_noise(noise_flag, s, b, err);
  const std::string fp = io::fingerprint(b.states(), b.num_measurements(), b.outcomes());
  Json doc;
  if (kind == "qc") {
    WitnessReport<QcWitness> r;
    try {
      r = qc_witness(b, noise);
    } catch (const WitnessUnavailable&) {
      out << "no witness: behaviour is CC-realizable\n";
      return kExitNegative;
    }
    if (!raw) {
      r.witness = canonicalize(r.witness, b, noise);
      r.value = evaluate_witness(r.witness, b);
      r.violation = r.witness.beta - r.value;
    }
    print_report(out, "qc-witness", r, r.witness.beta, verify_witness(r.witness, b.states()));
    doc = io::to_json(r.witness, fp);
  } else {
    WitnessReport<PostQuantumWitness> r;
    try {
      r = post_quantum_witness(b, noise);
    } catch (const WitnessUnavailable&) {
      out << "no witness: behaviour is quantum-realizable\n";
      return kExitNegative;
    }
    if (!raw) {
      r.witness = canonicalize(r.witness, b, noise);
      r.value = evaluate_witness(r.witness, b);
      r.violation = r.witness.alpha - r.value;
    }
    print_report(out, "postquantum-witness", r, r.witness.alpha, verify_witness(r.witness, b.states()));
    doc = io::to_json(r.witness, fp);
  }
  if (out_path.empty()) {
    out << io::dump(doc);
  } else {
    write_file(out_path, io::dump(doc));
  }
  return kExitOk;
}

Json mother_json(const std::vector<HermitianOperator>& mother, int m, int o) {
  Json j = io::povm_to_json(mother);
  j["kind"] = "mother-povm";
  j["strings"] = outcome_strings(m, o);
  return j;
}

int cmd_incompat(const std::string& file, const std::string& states_file, const std::string& mode,
                 const std::string& mother_path, const std::string& witness_path, std::ostream& out,
                 std::ostream& err) {
  const io::ScenarioFile s = load_scenario(file, err);
  if (!s.has_measurements()) throw ParseError(file + ": measurements", "missing field");
  const MeasurementSet m = io::effective_measurements(s);
  const bool white = mode == "white";
  if (white && (!mother_path.empty() || !witness_path.empty())) {
    throw CLI::ValidationError("--mother and --witness require --mode generalized");
  }
  bool compatible = false;
  if (states_file.empty()) {
    if (white) {
      const WhiteNoiseIncompat r = white_noise_incompat(m);
      compatible = r.eta <= kDecisionTol;
      out << "white-noise incompatibility robustness: " << fmt(shown(compatible, r.eta)) << "\n";
      out << "bracket: " << fmt(r.bisection.bracket.first) << " " << fmt(r.bisection.bracket.second) << "\n";
      out << "evaluations: " << r.bisection.evaluations << "\n";
    } else {
      const IncompatRobustness r = incompat_robustness(m);
      compatible = r.compatible;
      out << "incompatibility robustness: " << fmt(shown(compatible, r.robustness)) << "\n";
      print_solver(out, r.solver);
      if (!mother_path.empty()) write_file(mother_path, io::dump(mother_json(r.mother, m.size(), m.outcomes())));
      if (!witness_path.empty()) write_file(witness_path, io::dump(io::to_json(r.witness)));
    }
  } else {
    if (!witness_path.empty()) throw CLI::ValidationError("--witness is only available without --states");
    const io::ScenarioFile st = load_scenario(states_file, err);
    if (st.states.empty()) throw ParseError(states_file + ": states", "missing field");
    const Behaviour born = born_behaviour(st.state_list(), m);
    if (white) {
      const CcRobustness r = cc_white_noise_robustness(born, m);
      compatible = r.realizable;
      out << "restricted white-noise robustness: " << fmt(shown(compatible, r.robustness)) << "\n";
      print_solver(out, r.solver);
    } else {
      const CcRobustness r = cc_robustness(born);
      compatible = r.realizable;
      out << "restricted robustness: " << fmt(shown(compatible, r.robustness)) << "\n";
      print_solver(out, r.solver);
      if (!mother_path.empty()) write_file(mother_path, io::dump(mother_json(r.mother, m.size(), m.outcomes())));
    }
  }
  out << "status: " << (compatible ? "compatible" : "incompatible") << "\n";
  return compatible ? kExitOk : kExitNegative;
}

struct SweepFlags {
  Scalar eta_min = 0;
  Scalar eta_max = 1;
  int steps = 21;
  int workers = 1;
  bool bisect = false;
  Scalar tol = 1e-4;
  std::string out;
};

int cmd_sweep(const std::string& file, const SweepFlags& f, std::ostream& out, std::ostream& err) {
  const io::ScenarioFile s = load_scenario(file, err);
  if (s.states.empty()) throw ParseError(file + ": states", "missing field");
  if (!s.has_measurements()) throw ParseError(file + ": measurements", "missing field");
  if (!(f.eta_min >= 0 && f.eta_max <= 1 && f.eta_min <= f.eta_max)) {
    throw CLI::ValidationError("need 0 <= --eta-min <= --eta-max <= 1");
  }
  const StateList states = s.state_list();
  const MeasurementSet base = s.measurement_set();
  auto evaluate = [&](Scalar eta) {
    const MeasurementSet m = depolarise_measurements(DepolarisingChannel(base.dim(), 1 - eta), base);
    return cc_white_noise_robustness(born_behaviour(states, m), m);
  };

  const std::size_t n = static_cast<std::size_t>(f.steps);
  std::vector<Scalar> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = n == 1 ? f.eta_min : f.eta_min + (f.eta_max - f.eta_min) * static_cast<Scalar>(i) / static_cast<Scalar>(n - 1);
  }
  std::vector<CcRobustness> results(n);
  std::vector<std::exception_ptr> failures(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = evaluate(grid[i]);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const int workers = std::max(1, std::min(f.workers, f.steps));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& e : failures) {
    if (e) std::rethrow_exception(e);
  }

  std::ostringstream csv;
  csv << "eta,robustness,status\n";
  for (std::size_t i = 0; i < n; ++i) {
    csv << fmt(grid[i]) << "," << fmt(shown(results[i].realizable, results[i].robustness)) << ","
        << (results[i].realizable ? "REALIZABLE" : "NOT-REALIZABLE") << "\n";
  }
  if (f.bisect) {
    const auto r = sdp::bisect_feasibility([&](Scalar eta) { return evaluate(eta).realizable; }, f.eta_min, f.eta_max,
                                           f.tol);
    csv << "# critical_eta=" << fmt(r.critical) << "\n";
    if (!f.out.empty()) out << "critical_eta: " << fmt(r.critical) << "\n";
  }
  if (f.out.empty()) {
    out << csv.str();
  } else {
    write_file(f.out, csv.str());
  }
  return kExitOk;
}

StateList states_from(const std::string& path, std::ostream& err) {
  const io::ScenarioFile s = load_scenario(path, err);
  if (s.states.empty()) throw ParseError(path + ": states", "missing field");
  return s.state_list();
}

int cmd_convert(const std::string& kind, const std::string& file, const std::string& states_file,
                const std::string& out_path, std::ostream& out, std::ostream& err) {
  const Json j = io::read_json(file);
  Json doc;
  if (kind == "mi-to-qc") {
    MiWitness w;
    try {
      w = io::mi_witness_from_json(j);
    } catch (const ParseError& e) {
      throw ParseError(file + ": " + e.path(), e.message());
    }
    const int d = w.f.front().front().dim();
    const StateList states = states_file.empty() ? spanning_states(d) : states_from(states_file, err);
    const QcWitness q = mi_to_qc(w, states);
    out << "beta: " << fmt(q.beta) << "\n";
    doc = io::to_json(q, io::fingerprint(states, static_cast<int>(w.f.front().size()), static_cast<int>(w.f.size())));
  } else {
    if (states_file.empty()) throw CLI::ValidationError("qc-to-discrimination needs --states");
    QcWitness w;
    try {
      w = io::qc_witness_from_json(j);
    } catch (const ParseError& e) {
      throw ParseError(file + ": " + e.path(), e.message());
    }
    const StateList states = states_from(states_file, err);
    const int nm = static_cast<int>(w.mu.front().front().size());
    const std::string stored = io::witness_fingerprint(j);
    if (!stored.empty() && stored != io::fingerprint(states, nm, static_cast<int>(w.mu.size()))) {
      err << "warning: witness fingerprint differs from the supplied states\n";
    }
    const DiscriminationGame g = qc_to_discrimination(w, states, states.front().dim());
    out << "nu: " << fmt(g.nu) << "\n";
    out << "alpha: " << fmt(g.alpha) << "\n";
    for (std::size_t y = 0; y < g.ensembles.size(); ++y) {
      for (std::size_t b = 0; b < g.ensembles[y].size(); ++b) {
        out << "prior y=" << y << " b=" << b << ": " << fmt(g.ensembles[y][b].prior) << "\n";
      }
    }
    doc = io::to_json(g);
  }
  if (out_path.empty()) {
    out << io::dump(doc);
  } else {
    write_file(out_path, io::dump(doc));
  }
  return kExitOk;
}

int cmd_thresholds(int d, std::ostream& out) {
  const AsPrintedThreshold all = threshold_all_povms(d);
  out << "dim: " << d << "\n";
  out << "projective: " << fmt(threshold_projective(d)) << "\n";
  out << "all-povms: " << fmt(all.value) << (all.valid ? "" : " (as printed; not a transmittance)") << "\n";
  out << "entanglement-breaking: " << fmt(threshold_entanglement_breaking(d)) << "\n";
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semi-quantum prepare-and-measure realizability toolkit", "sqpm"};
  app.require_subcommand(1);
  Common common;
  std::function<int()> action;

  std::string kind, file, noise, out_path, states_file, mode = "generalized", mother_path, witness_path;
  bool raw = false;
  SweepFlags sweep;
  int dim = 2;

  auto* check = app.add_subcommand("check", "Decide quantum or CC realizability");
  check->add_option("kind", kind)->required()->check(CLI::IsMember({"quantum", "cc"}));
  check->add_option("file", file, "Scenario file")->required();
  check->add_option("--dump-sdp", common.dump_sdp)->group("");
  check->callback([&] { action = [&] { return cmd_check(kind, file, common, out, err); }; });

  auto* witness = app.add_subcommand("witness", "Extract a witness violated by the behaviour");
  witness->add_option("kind", kind)->required()->check(CLI::IsMember({"qc", "postquantum"}));
  witness->add_option("file", file, "Scenario file")->required();
  witness->add_option("--noise", noise, "white, or a file holding a noise behaviour");
  witness->add_option("--out", out_path, "Witness output file");
  witness->add_flag("--raw", raw, "Skip canonicalization");
  witness->callback([&] { action = [&] { return cmd_witness(kind, file, noise, out_path, raw, out, err); }; });

  auto* incompat = app.add_subcommand("incompat", "Measurement incompatibility robustness");
  incompat->add_option("file", file, "Scenario file with measurements")->required();
  incompat->add_option("--states", states_file, "Restrict compatibility to the states of this file");
  incompat->add_option("--mode", mode)->check(CLI::IsMember({"generalized", "white"}));
  incompat->add_option("--mother", mother_path, "Write the mother POVM");
  incompat->add_option("--witness", witness_path, "Write the incompatibility witness");
  incompat->callback([&] {
    action = [&] { return cmd_incompat(file, states_file, mode, mother_path, witness_path, out, err); };
  });

  auto* sw = app.add_subcommand("sweep", "Depolarizing sweep of the white-noise CC robustness");
  sw->add_option("file", file, "Scenario file")->required();
  sw->add_option("--eta-min", sweep.eta_min);
  sw->add_option("--eta-max", sweep.eta_max);
  sw->add_option("--steps", sweep.steps)->check(CLI::PositiveNumber);
  sw->add_option("--workers", sweep.workers)->check(CLI::PositiveNumber);
  sw->add_flag("--bisect", sweep.bisect, "Append the critical eta");
  sw->add_option("--tol", sweep.tol)->check(CLI::PositiveNumber);
  sw->add_option("--out", sweep.out, "CSV output file");
  sw->callback([&] { action = [&] { return cmd_sweep(file, sweep, out, err); }; });

  auto* convert = app.add_subcommand("convert", "Convert witnesses");
  convert->add_option("kind", kind)->required()->check(CLI::IsMember({"mi-to-qc", "qc-to-discrimination"}));
  convert->add_option("file", file, "Witness file")->required();
  convert->add_option("--states", states_file, "Scenario file holding the states");
  convert->add_option("--out", out_path, "Output file");
  convert->callback([&] { action = [&] { return cmd_convert(kind, file, states_file, out_path, out, err); }; });

  auto* thresholds = app.add_subcommand("thresholds", "Analytic depolarizing thresholds");
  thresholds->add_option("--dim", dim, "Dimension d >= 2")->check(CLI::Range(2, 1 << 16));
  thresholds->callback([&] { action = [&] { return cmd_thresholds(dim, out); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    return action();
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << "\n";
  } catch (const NotInSpan& e) {
    err << "error: " << e.what() << "\n";
    return kExitNegative;
  } catch (const DegenerateScaling& e) {
    err << "error: " << e.what() << "\n";
    return kExitNegative;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitError;
}

}  // namespace sqpm::cli
