#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "fecp/cavity.hpp"
#include "fecp/rng.hpp"
#include "fecp/state.hpp"

namespace fecp {

// Phase picked up by the (photon, atom) pair when the photon reflects off
// the cavity holding the atom. A photon whose circular polarization matches
// the atom's ground sublevel couples (factor e^{i phi}); otherwise it sees
// an empty cavity (factor e^{i phi_0}).
class FaradayGate {
 public:
  // Throws NonUnitaryError unless every factor has unit modulus.
  FaradayGate(Amplitude ll, Amplitude rl, Amplitude lr, Amplitude rr);

  // (-1, i, i, -1): the factors at the ideal operating point.
  static FaradayGate ideal();
  // Pure-phase approximation e^{i arg r}, e^{i arg r0} at the given point.
  static FaradayGate from_cavity(const CavityParams<double>& p);

  Amplitude factor(Polarization photon, AtomLevel atom) const;

  Amplitude phase_LL() const { return ll_; }
  Amplitude phase_RL() const { return rl_; }
  Amplitude phase_LR() const { return lr_; }
  Amplitude phase_RR() const { return rr_; }

 private:
  Amplitude ll_, rl_, lr_, rr_;
};

struct DetectionOutcome {
  Polarization photon = Polarization::H;  // H or V
  AtomLevel aux_atom = AtomLevel::gL;

  bool operator==(const DetectionOutcome&) const = default;
};

std::string to_string(const DetectionOutcome& o);

struct Detection {
  DetectionOutcome outcome;
  double probability = 0.0;
  PureState post_state;  // photon and auxiliary atom removed
};

PureState faraday_interact(const PureState& s, std::size_t atom_site,
                           const FaradayGate& gate = FaradayGate::ideal());

// The photon reflects off the cavity of atom_a, then off that of atom_b.
PureState pass_two_cavities(const PureState& s, std::size_t atom_a, std::size_t atom_b,
                            const FaradayGate& gate = FaradayGate::ideal());

Matrix2 hadamard_matrix();
PureState atom_hadamard(const PureState& s, std::size_t atom_site);

// Wave plate taking L -> (H+V)/sqrt2 and R -> (H-V)/sqrt2.
PureState photon_qwp(const PureState& s);

// Polarizing beam splitter plus photon and auxiliary-atom detectors. Both
// measured systems are consumed.
Detection pbs_and_detect(const PureState& s, std::size_t aux_atom_site, Rng& rng);

// All four (or fewer, when some carry zero weight) detection branches.
std::vector<Detection> detection_branches(const PureState& s, std::size_t aux_atom_site);

// |gR> -> -|gR> on one atom.
PureState phase_flip(const PureState& s, std::size_t atom_site);

}  // namespace fecp
