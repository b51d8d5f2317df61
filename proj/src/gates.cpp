#include "fecp/gates.hpp"

#include <cmath>
#include <numbers>

#include "fecp/error.hpp"

namespace fecp {

namespace {

void require_unimodular(Amplitude a) {
  if (std::abs(std::abs(a) - 1.0) > kNormTolerance) {
    throw NonUnitaryError("Faraday gate factors must have unit modulus");
  }
}

void require_lr_photon(const PureState& s) {
  if (!s.has_photon()) throw ShapeError("state carries no photon");
  if (s.photon_basis() != PhotonBasis::LR) {
    throw BasisError("photon must be in the circular (L/R) basis");
  }
}

void require_atom(const PureState& s, std::size_t site) {
  if (site >= s.register_size()) throw ShapeError("atom site outside register");
}

Detection to_detection(MeasurementRecord rec, std::size_t aux_atom_site) {
  DetectionOutcome o{std::get<Polarization>(rec.outcome[0]), std::get<AtomLevel>(rec.outcome[1])};
  return {o, rec.probability,
          discard_sites(rec.post_state, {Site::photon(), Site::atom(aux_atom_site)})};
}

const std::vector<Site> detector_sites(std::size_t aux_atom_site) {
  return {Site::photon(), Site::atom(aux_atom_site)};
}

void require_hv_photon(const PureState& s) {
  if (!s.has_photon()) throw ShapeError("state carries no photon");
  if (s.photon_basis() != PhotonBasis::HV) {
    throw BasisError("detection requires the photon in the linear (H/V) basis");
  }
}

}  // namespace

FaradayGate::FaradayGate(Amplitude ll, Amplitude rl, Amplitude lr, Amplitude rr)
    : ll_(ll), rl_(rl), lr_(lr), rr_(rr) {
  for (Amplitude a : {ll, rl, lr, rr}) require_unimodular(a);
}

FaradayGate FaradayGate::ideal() { return {{-1, 0}, {0, 1}, {0, 1}, {-1, 0}}; }

FaradayGate FaradayGate::from_cavity(const CavityParams<double>& p) {
  const PhasePair<double> ph = phase_pair(p);
  const Amplitude coupled = std::polar(1.0, ph.phi);
  const Amplitude empty = std::polar(1.0, ph.phi_0);
  return {coupled, empty, empty, coupled};
}

Amplitude FaradayGate::factor(Polarization photon, AtomLevel atom) const {
  if (basis_of(photon) != PhotonBasis::LR) throw BasisError("Faraday gate acts on L/R photons");
  const bool left = photon == Polarization::L;
  if (atom == AtomLevel::gL) return left ? ll_ : rl_;
  return left ? lr_ : rr_;
}

std::string to_string(const DetectionOutcome& o) {
  return to_string(o.photon) + "," + to_string(o.aux_atom);
}

PureState faraday_interact(const PureState& s, std::size_t atom_site, const FaradayGate& gate) {
  require_lr_photon(s);
  require_atom(s, atom_site);
  return apply_diagonal(s, [&](const BasisConfig& c) {
    return gate.factor(*c.photon, c.atoms[atom_site]);
  });
}

PureState pass_two_cavities(const PureState& s, std::size_t atom_a, std::size_t atom_b,
                            const FaradayGate& gate) {
  if (atom_a == atom_b) throw InvalidArgument("the two cavities must hold different atoms");
  return faraday_interact(faraday_interact(s, atom_a, gate), atom_b, gate);
}

Matrix2 hadamard_matrix() {
  Matrix2 h;
  h << 1, 1, 1, -1;
  return h / std::numbers::sqrt2;
}

PureState atom_hadamard(const PureState& s, std::size_t atom_site) {
  require_atom(s, atom_site);
  return apply_single_site_unitary(s, Site::atom(atom_site), hadamard_matrix());
}

PureState photon_qwp(const PureState& s) {
  require_lr_photon(s);
  // Column j: image of the j-th circular state in the (H, V) basis.
  return change_photon_basis(s, hadamard_matrix(), PhotonBasis::HV);
}

Detection pbs_and_detect(const PureState& s, std::size_t aux_atom_site, Rng& rng) {
  require_hv_photon(s);
  require_atom(s, aux_atom_site);
  return to_detection(measure(s, detector_sites(aux_atom_site), rng), aux_atom_site);
}

std::vector<Detection> detection_branches(const PureState& s, std::size_t aux_atom_site) {
  require_hv_photon(s);
  require_atom(s, aux_atom_site);
  std::vector<Detection> out;
  for (auto& rec : measurement_branches(s, detector_sites(aux_atom_site))) {
    out.push_back(to_detection(std::move(rec), aux_atom_site));
  }
  return out;
}

PureState phase_flip(const PureState& s, std::size_t atom_site) {
  require_atom(s, atom_site);
  Matrix2 z;
  z << 1, 0, 0, -1;
  return apply_single_site_unitary(s, Site::atom(atom_site), z);
}

}  // namespace fecp
