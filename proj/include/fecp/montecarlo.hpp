#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fecp/analytics.hpp"
#include "fecp/engine.hpp"

namespace fecp {

enum class LossModel {
  None,
  // One Bernoulli(eta_p * eta_a) gate on every otherwise successful trial.
  PaperGlobal,
  // Each round needs its own photon and atom clicks, else the trial is lost.
  CascadedPerRound,
};

std::string to_string(LossModel m);
LossModel parse_loss_model(const std::string& name);  // none | paper | cascaded

struct SimulationConfig {
  CoefficientPair coefficients = CoefficientPair::from_weight(0.5);
  std::size_t n_atoms = 2;
  std::size_t max_rounds = 5;
  std::size_t trials = 100000;
  std::uint64_t master_seed = 0;
  LossModel loss_model = LossModel::None;
  std::optional<DetectionEfficiency> efficiency;
  // Worker threads; 0 picks the hardware concurrency. Never affects results.
  unsigned threads = 0;

  void validate() const;
};

struct EmpiricalLedger {
  std::vector<std::uint64_t> success_count_by_round;  // index k-1 for round k
  std::uint64_t trials = 0;
  std::vector<double> empirical_p;
  std::vector<double> stderr_p;  // sqrt(p(1-p)/trials)

  std::uint64_t total_successes() const;
  double empirical_total() const;
  double total_stderr() const;
  bool operator==(const EmpiricalLedger&) const = default;
};

// Runs `trials` independent protocol executions. Trial i draws from
// Rng(master_seed, i), so the ledger depends only on the config.
EmpiricalLedger estimate(const SimulationConfig& config);

// Analytic P_k under the configured loss model, aligned with the ledger.
std::vector<double> analytic_round_probabilities(const SimulationConfig& config);

}  // namespace fecp
