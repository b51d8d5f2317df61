#include "fecp/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "fecp/error.hpp"

namespace fecp {

std::string to_string(LossModel m) {
  switch (m) {
    case LossModel::None: return "none";
    case LossModel::PaperGlobal: return "paper";
    case LossModel::CascadedPerRound: return "cascaded";
  }
  return "?";
}

LossModel parse_loss_model(const std::string& name) {
  if (name == "none") return LossModel::None;
  if (name == "paper") return LossModel::PaperGlobal;
  if (name == "cascaded") return LossModel::CascadedPerRound;
  throw InvalidArgument("unknown loss model '" + name + "' (none, paper, cascaded)");
}

void SimulationConfig::validate() const {
  if (trials < 1) throw InvalidArgument("trials must be at least 1");
  if (max_rounds < 1) throw InvalidArgument("max_rounds must be at least 1");
  if (n_atoms < 2) throw InvalidArgument("GHZ register needs at least two atoms");
  if (coefficients.degenerate()) {
    throw DegenerateStateError("alpha * beta == 0, nothing to concentrate");
  }
  if (loss_model == LossModel::None && efficiency) {
    throw InvalidArgument("detection efficiency given without a loss model");
  }
  if (loss_model != LossModel::None) {
    if (!efficiency) throw InvalidArgument("loss model requires detection efficiencies");
    efficiency->validate();
  }
}

std::uint64_t EmpiricalLedger::total_successes() const {
  return std::accumulate(success_count_by_round.begin(), success_count_by_round.end(),
                         std::uint64_t{0});
}

double EmpiricalLedger::empirical_total() const {
  return static_cast<double>(total_successes()) / static_cast<double>(trials);
}

double EmpiricalLedger::total_stderr() const {
  const double p = empirical_total();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

namespace {

// Round (1-based) at which the trial succeeded, or 0.
std::size_t run_trial(const SimulationConfig& cfg, std::uint64_t index) {
  Rng rng(cfg.master_seed, index);
  HeraldGate herald;
  if (cfg.loss_model == LossModel::CascadedPerRound) {
    const DetectionEfficiency eff = *cfg.efficiency;
    herald = [eff](Rng& r) {
      const bool photon = r.bernoulli(eff.eta_p);
      const bool atom = r.bernoulli(eff.eta_a);
      return photon && atom;
    };
  }
  const ProtocolTranscript t =
      run_protocol(cfg.coefficients, cfg.n_atoms, cfg.max_rounds, rng, herald);
  if (!t.succeeded()) return 0;
  if (cfg.loss_model == LossModel::PaperGlobal &&
      !rng.bernoulli(cfg.efficiency->eta_p * cfg.efficiency->eta_a)) {
    return 0;
  }
  return t.final_round;
}

}  // namespace

EmpiricalLedger estimate(const SimulationConfig& config) {
  config.validate();
  const std::size_t k_max = config.max_rounds;
  unsigned workers = config.threads ? config.threads : std::thread::hardware_concurrency();
  workers = static_cast<unsigned>(
      std::clamp<std::size_t>(workers == 0 ? 1 : workers, 1, config.trials));

  std::vector<std::vector<std::uint64_t>> partial(workers,
                                                  std::vector<std::uint64_t>(k_max, 0));
  std::vector<std::exception_ptr> errors(workers);

  auto work = [&](unsigned w) {
    try {
      const std::size_t begin = config.trials * w / workers;
      const std::size_t end = config.trials * (w + 1) / workers;
      for (std::size_t i = begin; i < end; ++i) {
        if (const std::size_t k = run_trial(config, i)) ++partial[w][k - 1];
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  EmpiricalLedger ledger;
  ledger.trials = config.trials;
  ledger.success_count_by_round.assign(k_max, 0);
  for (const auto& counts : partial) {
    for (std::size_t k = 0; k < k_max; ++k) ledger.success_count_by_round[k] += counts[k];
  }
  const double m = static_cast<double>(config.trials);
  for (std::uint64_t c : ledger.success_count_by_round) {
    const double p = static_cast<double>(c) / m;
    ledger.empirical_p.push_back(p);
    ledger.stderr_p.push_back(std::sqrt(p * (1.0 - p) / m));
  }
  return ledger;
}

std::vector<double> analytic_round_probabilities(const SimulationConfig& config) {
  config.validate();
  const auto w = weights_of(config.coefficients);
  std::vector<double> out;
  for (std::size_t k = 1; k <= config.max_rounds; ++k) {
    switch (config.loss_model) {
      case LossModel::None:
        out.push_back(round_probability(w, k));
        break;
      case LossModel::PaperGlobal:
        out.push_back(config.efficiency->eta_p * config.efficiency->eta_a *
                      round_probability(w, k));
        break;
      case LossModel::CascadedPerRound:
        out.push_back(cascaded_round_probability(w, *config.efficiency, k));
        break;
    }
  }
  return out;
}

}  // namespace fecp
