#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fecp/gates.hpp"
#include "fecp/rng.hpp"
#include "fecp/state.hpp"

namespace fecp {

// Amplitudes (alpha, beta) of alpha|gL gR..gR> + beta|gR gL..gL>.
class CoefficientPair {
 public:
  // Requires |alpha|^2 + |beta|^2 = 1 within kNormTolerance.
  CoefficientPair(Amplitude alpha, Amplitude beta);

  // Rescales (alpha, beta) to unit norm; throws on a zero pair.
  static CoefficientPair normalized(Amplitude alpha, Amplitude beta);
  // alpha = sqrt(w), beta = sqrt(1 - w), both real and non-negative.
  static CoefficientPair from_weight(double alpha2);

  Amplitude alpha() const { return alpha_; }
  Amplitude beta() const { return beta_; }
  double alpha2() const { return std::norm(alpha_); }
  double beta2() const { return std::norm(beta_); }
  bool degenerate() const { return alpha_ * beta_ == Amplitude{}; }

 private:
  Amplitude alpha_, beta_;
};

enum class Classification { Success, SuccessAfterFlip, Recycle, RecycleAfterFlip };

std::string to_string(Classification c);
Classification classify(const DetectionOutcome& o);
inline bool is_success(Classification c) {
  return c == Classification::Success || c == Classification::SuccessAfterFlip;
}

struct RoundResult {
  std::size_t round = 1;
  CoefficientPair coefficients;  // pair the round was run on
  DetectionOutcome outcome;
  Classification classification;
  double probability;
  PureState corrected_state;
  std::optional<CoefficientPair> next_coefficients;  // set iff recycled
};

enum class ProtocolStatus { Succeeded, Exhausted, Lost };

std::string to_string(ProtocolStatus s);

struct ProtocolTranscript {
  std::vector<RoundResult> rounds;
  ProtocolStatus status = ProtocolStatus::Exhausted;
  // Round that heralded success, or was lost; number of rounds otherwise.
  std::size_t final_round = 0;
  PureState final_state;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  bool succeeded() const { return status == ProtocolStatus::Succeeded; }
};

// alpha|gL gR..gR> + beta|gR gL..gL> over n atoms.
PureState prepare_initial(const CoefficientPair& c, std::size_t n_atoms);

// (|gL gR..gR> + |gR gL..gL>)/sqrt2, the concentration target.
PureState maximally_entangled(std::size_t n_atoms);

// beta|gL> + alpha|gR>.
PureState prepare_aux_atom(const CoefficientPair& c);

// (alpha^2, beta^2) / sqrt(|alpha|^4 + |beta|^4).
CoefficientPair recycled_coefficients(const CoefficientPair& c);

// Runs one concentration round on `state` and samples the detectors.
RoundResult run_round(const PureState& state, const CoefficientPair& c, Rng& rng,
                      std::size_t round_index = 1);

// The same round without sampling: one result per detector pattern with
// nonzero weight.
std::vector<RoundResult> round_branches(const PureState& state, const CoefficientPair& c,
                                        std::size_t round_index = 1);

// Called after each heralding detection; returning false loses the trial.
using HeraldGate = std::function<bool(Rng&)>;

// Repeats rounds, recycling failures, until success or max_rounds.
ProtocolTranscript run_protocol(const CoefficientPair& c, std::size_t n_atoms,
                                std::size_t max_rounds, Rng& rng,
                                const HeraldGate& herald = {});

// One whitespace separated record per round:
//   round outcome classification probability alpha_re alpha_im beta_re beta_im
std::string format_round(const RoundResult& r);
void write_transcript(std::ostream& os, const ProtocolTranscript& t);

struct RoundRecord {
  std::size_t round = 0;
  DetectionOutcome outcome;
  Classification classification = Classification::Success;
  double probability = 0.0;
  Amplitude alpha, beta;
};
RoundRecord parse_round(const std::string& line);

}  // namespace fecp
