#pragma once

// Closed-form success probabilities of the recycling concentration protocol
// and of the two-pair reference scheme, with and without detector losses.
//
// Every function takes the coefficient weights |alpha|^2 and |beta|^2 only;
// the probabilities are blind to the phases of alpha and beta.

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "fecp/error.hpp"

namespace fecp {

class CoefficientPair;

template <typename Real = double>
struct Weights {
  Real alpha2{};
  Real beta2{};
};

Weights<double> weights_of(const CoefficientPair& c);

struct DetectionEfficiency {
  double eta_p = 1.0;  // single-photon detector
  double eta_a = 1.0;  // single-atom detector

  void validate() const {
    if (!(eta_p >= 0.0 && eta_p <= 1.0) || !(eta_a >= 0.0 && eta_a <= 1.0)) {
      throw InvalidArgument("detection efficiencies must lie in [0, 1]");
    }
  }
};

namespace detail {

// Walks the recycle chain. Round 1 runs on (a, b); every later round runs
// on the normalized squares of the previous pair, written through the ratio
// t = min/max, which just squares from round to round. Calls
// visit(k, reach, success) for k = 1..rounds, where reach is the probability
// of getting to round k and success the conditional success probability
// there. Returns the probability of recycling through all of them.
template <typename Real, typename Visit>
Real walk_recycle_chain(const Weights<Real>& w, std::size_t rounds, Visit&& visit) {
  Real reach(1);
  const Real hi = w.alpha2 > w.beta2 ? w.alpha2 : w.beta2;
  const Real lo = w.alpha2 > w.beta2 ? w.beta2 : w.alpha2;
  if (!(lo > Real(0))) {
    for (std::size_t k = 1; k <= rounds; ++k) visit(k, reach, Real(0));
    return reach;
  }
  Real t = lo / hi;
  for (std::size_t k = 1; k <= rounds; ++k) {
    Real success, recycle;
    if (k == 1) {
      success = Real(2) * hi * lo;
      recycle = hi * hi + lo * lo;
    } else {
      const Real d = (Real(1) + t) * (Real(1) + t);
      success = Real(2) * t / d;
      recycle = (Real(1) + t * t) / d;
    }
    visit(k, reach, success);
    reach *= recycle;
    t *= t;
  }
  return reach;
}

}  // namespace detail

// Unconditional probability that round k is the one heralding success:
//   P_1 = 2 |ab|^2,
//   P_k = 2 |ab|^(2^k) / prod_{j=2..k} (|a|^(2^j) + |b|^(2^j)).
// Evaluated along the recycle chain; the closed form's numerator and
// denominator both underflow long before P_k does.
template <typename Real>
Real round_probability(const Weights<Real>& w, std::size_t k) {
  if (k < 1) throw InvalidArgument("round index starts at 1");
  Real out(0);
  detail::walk_recycle_chain(w, k, [&](std::size_t j, const Real& reach, const Real& success) {
    if (j == k) out = reach * success;
  });
  return out;
}

template <typename Real>
Real total_probability(const Weights<Real>& w, std::size_t max_rounds) {
  if (max_rounds < 1) throw InvalidArgument("max_rounds must be at least 1");
  Real sum(0);
  detail::walk_recycle_chain(w, max_rounds, [&](std::size_t, const Real& reach, const Real& success) {
    sum += reach * success;
  });
  return sum;
}

// Probability that all of the first `rounds` rounds fall into a recycle
// branch: (|a|^(2^(K+1)) + |b|^(2^(K+1))) / prod_{j=2..K}(...).
template <typename Real>
Real recycle_probability(const Weights<Real>& w, std::size_t rounds) {
  return detail::walk_recycle_chain(w, rounds, [](std::size_t, const Real&, const Real&) {});
}

// Single-shot success of the two-pair reference protocol.
template <typename Real>
Real reference_probability(const Weights<Real>& w) {
  return Real(2) * w.alpha2 * w.beta2;
}

// Reference protocol with detector losses: eta_p * eta_a^N * 2|ab|^2.
template <typename Real>
Real imperfect_reference(const Weights<Real>& w, const DetectionEfficiency& eff,
                         std::size_t n_atoms) {
  using std::pow;
  eff.validate();
  return Real(eff.eta_p) * pow(Real(eff.eta_a), static_cast<int>(n_atoms)) *
         reference_probability(w);
}

// One photon and one atom detection charged per protocol run; independent
// of the number of atoms.
template <typename Real>
Real imperfect_total(const Weights<Real>& w, const DetectionEfficiency& eff,
                     std::size_t max_rounds) {
  eff.validate();
  return Real(eff.eta_p) * Real(eff.eta_a) * total_probability(w, max_rounds);
}

// Every round's detections must fire: (eta_p eta_a)^k P_k. This is a
// stricter alternative to imperfect_total, matching the cascaded loss
// model of the Monte Carlo sampler.
template <typename Real>
Real cascaded_round_probability(const Weights<Real>& w, const DetectionEfficiency& eff,
                                std::size_t k) {
  using std::pow;
  eff.validate();
  return pow(Real(eff.eta_p) * Real(eff.eta_a), static_cast<int>(k)) * round_probability(w, k);
}

double round_probability(const CoefficientPair& c, std::size_t k);
double total_probability(const CoefficientPair& c, std::size_t max_rounds);
double reference_probability(const CoefficientPair& c);
double imperfect_reference(const CoefficientPair& c, const DetectionEfficiency& eff,
                           std::size_t n_atoms);
double imperfect_total(const CoefficientPair& c, const DetectionEfficiency& eff,
                       std::size_t max_rounds);

struct ProbabilityLedger {
  std::vector<double> per_round;    // P_1 .. P_K
  std::vector<double> conditional;  // success probability given round k is reached
  double total = 0.0;
  double still_recycling = 0.0;  // probability of no success after K rounds
};

ProbabilityLedger probability_ledger(const Weights<double>& w, std::size_t max_rounds);

struct Figure4Row {
  double alpha, alpha2, ours, reference;
};

struct Figure5Row {
  double alpha, alpha2, ours, reference, ref_n_small, ref_n_large;
};

// `points` uniform amplitudes on [0.005, 0.995], plus alpha = 1/sqrt2.
std::vector<double> default_alpha_grid(std::size_t points = 199);

std::vector<Figure4Row> figure4_table(const std::vector<double>& alphas,
                                      std::size_t max_rounds = 5);

std::vector<Figure5Row> figure5_table(const std::vector<double>& alphas,
                                      const DetectionEfficiency& eff = {0.9, 0.9},
                                      std::size_t max_rounds = 5, std::size_t n_small = 5,
                                      std::size_t n_large = 10);

// CSV: header row, 6 decimals. JSON: array of records, full precision.
void write_csv(std::ostream& os, const std::vector<Figure4Row>& rows);
void write_csv(std::ostream& os, const std::vector<Figure5Row>& rows);
void write_json(std::ostream& os, const std::vector<Figure4Row>& rows);
void write_json(std::ostream& os, const std::vector<Figure5Row>& rows);

}  // namespace fecp
