#include "fecp/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "fecp/analytics.hpp"
#include "fecp/cavity.hpp"
#include "fecp/engine.hpp"
#include "fecp/format.hpp"
#include "fecp/error.hpp"
#include "fecp/montecarlo.hpp"

namespace fecp::cli {

namespace {

using nlohmann::json;

std::string format_complex(std::complex<double> z) {
  std::string im = format_fixed6(std::abs(z.imag()));
  const bool negative = z.imag() < 0 && im != "0.000000";
  return format_fixed6(z.real()) + (negative ? "-" : "+") + im + "i";
}

const CLI::Validator kOpenUnitInterval(
    [](std::string& s) -> std::string {
      double v = 0;
      try {
        v = std::stod(s);
      } catch (...) {
        return "not a number: " + s;
      }
      if (!(v > 0.0 && v < 1.0)) return "|alpha|^2 must lie in the open interval (0, 1)";
      return {};
    },
    "in (0,1)");

// Writes to --out when given, else to `out`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& out) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw std::ios_base::failure("cannot open " + path);
    }
    os_ = file_ ? file_.get() : &out;
  }
  std::ostream& stream() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

struct CavityOptions {
  double kappa = 1.0;
  double gamma = 0.0;
  std::optional<double> g, detuning_c, detuning_0;
  double omega_c = 1.0;
  bool ideal = false;
  std::string sweep;
  std::string format = "text";
  std::string out;
};

struct SweepSpec {
  double min = 0, max = 0;
  std::size_t steps = 0;
};

SweepSpec parse_sweep(const std::string& spec) {
  // wp:min:max:steps
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 4 || parts[0] != "wp") {
    throw InvalidArgument("sweep must look like wp:min:max:steps");
  }
  SweepSpec s;
  try {
    s.min = std::stod(parts[1]);
    s.max = std::stod(parts[2]);
    s.steps = std::stoul(parts[3]);
  } catch (const std::exception&) {
    throw InvalidArgument("sweep bounds must be numbers: " + spec);
  }
  if (s.steps < 1) throw InvalidArgument("sweep needs at least one step");
  return s;
}

CavityParams<double> cavity_params(const CavityOptions& o) {
  if (o.ideal) return ideal_operating_point(o.kappa, o.omega_c);
  CavityParams<double> p;
  p.kappa = o.kappa;
  p.gamma = o.gamma;
  p.g = o.g.value_or(o.kappa / 2);
  p.omega_c = o.omega_c;
  p.omega_p = o.omega_c - o.detuning_c.value_or(o.kappa / 2);
  p.omega_0 = p.omega_p + o.detuning_0.value_or(o.kappa / 2);
  p.validate();
  return p;
}

json cavity_record(const CavityParams<double>& p) {
  const auto r = reflection_coefficient(p);
  const auto r0 = empty_cavity_reflection(p);
  const auto ph = phase_pair(p);
  const auto th = faraday_angles(ph);
  return {{"omega_p", p.omega_p},
          {"r_re", r.real()},
          {"r_im", r.imag()},
          {"r0_re", r0.real()},
          {"r0_im", r0.imag()},
          {"phi", ph.phi},
          {"phi0", ph.phi_0},
          {"theta_minus", th.theta_minus},
          {"theta_plus", th.theta_plus},
          {"gate_phase_error", gate_phase_error(p)}};
}

const std::vector<std::string> kCavityColumns = {
    "omega_p", "r_re", "r_im", "r0_re", "r0_im", "phi", "phi0", "theta_minus",
    "theta_plus", "gate_phase_error"};

int cmd_cavity(const CavityOptions& o, std::ostream& out) {
  const CavityParams<double> base = cavity_params(o);
  Sink sink(o.out, out);
  std::ostream& os = sink.stream();

  if (o.sweep.empty()) {
    const json rec = cavity_record(base);
    if (o.format == "json") {
      os << rec.dump(2) << '\n';
      return 0;
    }
    os << "r=" << format_complex({rec["r_re"], rec["r_im"]}) << '\n'
       << "r0=" << format_complex({rec["r0_re"], rec["r0_im"]}) << '\n';
    for (const char* key :
         {"phi", "phi0", "theta_minus", "theta_plus", "gate_phase_error"}) {
      os << key << '=' << format_fixed6(rec[key].get<double>()) << '\n';
    }
    return 0;
  }

  const SweepSpec sw = parse_sweep(o.sweep);
  json rows = json::array();
  for (std::size_t i = 0; i < sw.steps; ++i) {
    CavityParams<double> p = base;
    p.omega_p = sw.steps == 1 ? sw.min
                              : sw.min + (sw.max - sw.min) * static_cast<double>(i) /
                                             static_cast<double>(sw.steps - 1);
    rows.push_back(cavity_record(p));
  }
  if (o.format == "json") {
    os << rows.dump(2) << '\n';
    return 0;
  }
  for (std::size_t c = 0; c < kCavityColumns.size(); ++c) {
    os << (c ? "," : "") << kCavityColumns[c];
  }
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < kCavityColumns.size(); ++c) {
      os << (c ? "," : "") << format_fixed6(row[kCavityColumns[c]].get<double>());
    }
    os << '\n';
  }
  return 0;
}

struct RoundOptions {
  double alpha2 = 0.5;
  std::size_t n = 2;
  std::uint64_t seed = 0;
};

int cmd_round(const RoundOptions& o, std::ostream& out) {
  const CoefficientPair c = CoefficientPair::from_weight(o.alpha2);
  Rng rng(o.seed);
  const RoundResult r = run_round(prepare_initial(c, o.n), c, rng);
  const PureState target =
      is_success(r.classification) ? maximally_entangled(o.n) : prepare_initial(*r.next_coefficients, o.n);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", fidelity(r.corrected_state, target));
  out << "# seed=" << o.seed << " n=" << o.n << "\n"
      << format_round(r) << "\n"
      << "outcome=" << to_string(r.outcome) << " classification=" << to_string(r.classification)
      << " probability=" << format_fixed6(r.probability) << " fidelity=" << buf << "\n";
  return 0;
}

struct ProtocolOptions {
  double alpha2 = 0.5;
  std::size_t n = 2;
  std::size_t max_rounds = 5;
  std::size_t trials = 100000;
  std::uint64_t seed = 0;
  std::optional<double> eta_p, eta_a;
  std::string loss_model = "none";
  unsigned threads = 0;
  std::string format = "json";
  std::string out;
};

int cmd_protocol(const ProtocolOptions& o, std::ostream& out) {
  SimulationConfig cfg;
  cfg.coefficients = CoefficientPair::from_weight(o.alpha2);
  cfg.n_atoms = o.n;
  cfg.max_rounds = o.max_rounds;
  cfg.trials = o.trials;
  cfg.master_seed = o.seed;
  cfg.loss_model = parse_loss_model(o.loss_model);
  cfg.threads = o.threads;
  if (o.eta_p || o.eta_a) {
    cfg.efficiency = DetectionEfficiency{o.eta_p.value_or(1.0), o.eta_a.value_or(1.0)};
  }
  cfg.validate();

  const EmpiricalLedger ledger = estimate(cfg);
  const std::vector<double> analytic = analytic_round_probabilities(cfg);
  const auto w = weights_of(cfg.coefficients);

  double analytic_total = 0.0;
  for (double p : analytic) analytic_total += p;

  Sink sink(o.out, out);
  std::ostream& os = sink.stream();
  if (o.format == "csv") {
    os << "round,successes,empirical_p,stderr,analytic_p,analytic_p_ideal\n";
    for (std::size_t k = 0; k < cfg.max_rounds; ++k) {
      os << k + 1 << ',' << ledger.success_count_by_round[k] << ','
         << format_fixed6(ledger.empirical_p[k]) << ',' << format_fixed6(ledger.stderr_p[k]) << ','
         << format_fixed6(analytic[k]) << ',' << format_fixed6(round_probability(w, k + 1)) << '\n';
    }
    os << "total," << ledger.total_successes() << ',' << format_fixed6(ledger.empirical_total()) << ','
       << format_fixed6(ledger.total_stderr()) << ',' << format_fixed6(analytic_total) << ','
       << format_fixed6(total_probability(w, cfg.max_rounds)) << '\n';
    return 0;
  }

  json doc;
  doc["config"] = {{"alpha2", o.alpha2},
                   {"n_atoms", cfg.n_atoms},
                   {"max_rounds", cfg.max_rounds},
                   {"trials", cfg.trials},
                   {"seed", cfg.master_seed},
                   {"loss_model", to_string(cfg.loss_model)}};
  if (cfg.efficiency) {
    doc["config"]["eta_p"] = cfg.efficiency->eta_p;
    doc["config"]["eta_a"] = cfg.efficiency->eta_a;
  }
  json rounds = json::array();
  for (std::size_t k = 0; k < cfg.max_rounds; ++k) {
    rounds.push_back({{"round", k + 1},
                      {"successes", ledger.success_count_by_round[k]},
                      {"empirical_p", ledger.empirical_p[k]},
                      {"stderr", ledger.stderr_p[k]},
                      {"analytic_p", analytic[k]},
                      {"analytic_p_ideal", round_probability(w, k + 1)}});
  }
  doc["rounds"] = rounds;
  doc["empirical_total"] = ledger.empirical_total();
  doc["total_stderr"] = ledger.total_stderr();
  doc["analytic_total"] = analytic_total;
  doc["analytic_total_ideal"] = total_probability(w, cfg.max_rounds);
  os << doc.dump(2) << '\n';
  return 0;
}

struct FigureOptions {
  int which = 4;
  std::size_t k = 5;
  std::size_t grid = 199;
  double eta_p = 0.9;
  double eta_a = 0.9;
  std::string format = "csv";
  std::string out;
};

int cmd_figure(const FigureOptions& o, std::ostream& out) {
  const auto alphas = default_alpha_grid(o.grid);
  Sink sink(o.out, out);
  std::ostream& os = sink.stream();
  if (o.which == 4) {
    const auto rows = figure4_table(alphas, o.k);
    o.format == "json" ? write_json(os, rows) : write_csv(os, rows);
  } else {
    const auto rows = figure5_table(alphas, {o.eta_p, o.eta_a}, o.k, 5, 10);
    o.format == "json" ? write_json(os, rows) : write_csv(os, rows);
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement concentration by photonic Faraday rotation"};
  app.set_config("--config", "", "Read options from a key=value file");
  app.require_subcommand(1);

  CavityOptions cav;
  auto* cavity = app.add_subcommand("cavity", "Reflection coefficients and Faraday angles");
  cavity->add_option("--kappa", cav.kappa, "Cavity damping rate")->check(CLI::PositiveNumber);
  cavity->add_option("--gamma", cav.gamma, "Atomic decay rate")->check(CLI::NonNegativeNumber);
  cavity->add_option("--g", cav.g, "Atom-cavity coupling (default kappa/2)")
      ->check(CLI::NonNegativeNumber);
  cavity->add_option("--detuning-c", cav.detuning_c, "omega_c - omega_p (default kappa/2)");
  cavity->add_option("--detuning-0", cav.detuning_0, "omega_0 - omega_p (default kappa/2)");
  cavity->add_option("--omega-c", cav.omega_c, "Cavity frequency");
  cavity->add_flag("--ideal", cav.ideal, "Use the ideal operating point for --kappa");
  cavity->add_option("--sweep", cav.sweep, "Sweep omega_p as wp:min:max:steps");
  cavity->add_option("--format", cav.format)->check(CLI::IsMember({"text", "csv", "json"}));
  cavity->add_option("--out", cav.out, "Output file (default stdout)");

  RoundOptions rnd;
  auto* round = app.add_subcommand("round", "Run and sample a single concentration round");
  round->add_option("--alpha2", rnd.alpha2, "|alpha|^2 of the input state")
      ->required()
      ->check(kOpenUnitInterval);
  round->add_option("--n", rnd.n, "Number of atoms in the GHZ state")->check(CLI::Range(2, 4096));
  round->add_option("--seed", rnd.seed, "RNG seed")->envname("FECP_SEED");

  ProtocolOptions proto;
  auto* protocol = app.add_subcommand("protocol", "Monte Carlo estimate of per-round success");
  protocol->add_option("--alpha2", proto.alpha2, "|alpha|^2 of the input state")
      ->required()
      ->check(kOpenUnitInterval);
  protocol->add_option("--n", proto.n, "Number of atoms")->check(CLI::Range(2, 4096));
  protocol->add_option("--max-rounds", proto.max_rounds, "Maximum rounds K")
      ->check(CLI::Range(1, 64));
  protocol->add_option("--trials", proto.trials, "Number of trials")
      ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
  protocol->add_option("--seed", proto.seed, "Master seed")->envname("FECP_SEED");
  protocol->add_option("--eta-p", proto.eta_p, "Photon detector efficiency")
      ->check(CLI::Range(0.0, 1.0));
  protocol->add_option("--eta-a", proto.eta_a, "Atom detector efficiency")
      ->check(CLI::Range(0.0, 1.0));
  protocol->add_option("--loss-model", proto.loss_model)
      ->check(CLI::IsMember({"none", "paper", "cascaded"}));
  protocol->add_option("--threads", proto.threads, "Worker threads (0 = all cores)");
  protocol->add_option("--format", proto.format)->check(CLI::IsMember({"json", "csv"}));
  protocol->add_option("--out", proto.out, "Output file (default stdout)");

  FigureOptions fig;
  auto* figure = app.add_subcommand("figure", "Success probability tables versus alpha");
  figure->add_option("--which", fig.which, "4: ideal detection, 5: 90% detectors")
      ->required()
      ->check(CLI::IsMember({4, 5}));
  figure->add_option("--k", fig.k, "Rounds K")->check(CLI::Range(1, 64));
  figure->add_option("--grid", fig.grid, "Uniform alpha points on [0.005, 0.995]")
      ->check(CLI::Range(2, 1000000));
  figure->add_option("--eta-p", fig.eta_p)->check(CLI::Range(0.0, 1.0));
  figure->add_option("--eta-a", fig.eta_a)->check(CLI::Range(0.0, 1.0));
  figure->add_option("--format", fig.format)->check(CLI::IsMember({"csv", "json"}));
  figure->add_option("--out", fig.out, "Output file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*cavity) return cmd_cavity(cav, out);
    if (*round) return cmd_round(rnd, out);
    if (*protocol) return cmd_protocol(proto, out);
    if (*figure) return cmd_figure(fig, out);
  } catch (const SingularParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kSingularParameters;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
  return kDomainError;
}

}  // namespace fecp::cli
