#include "fecp/state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fecp/error.hpp"

namespace fecp {

namespace {

bool is_finite(const Amplitude& a) { return std::isfinite(a.real()) && std::isfinite(a.imag()); }

void check_site(const PureState& s, Site site) {
  if (site.is_photon()) {
    if (!s.has_photon()) throw ShapeError("state carries no photon");
  } else if (site.index >= s.register_size()) {
    throw ShapeError("atom site " + std::to_string(site.index) + " outside register of size " +
                     std::to_string(s.register_size()));
  }
}

int label_index_at(const BasisConfig& c, Site site) {
  return site.is_photon() ? level_index(*c.photon) : level_index(c.atoms[site.index]);
}

Label label_at(const BasisConfig& c, Site site) {
  if (site.is_photon()) return *c.photon;
  return c.atoms[site.index];
}

}  // namespace

PhotonBasis basis_of(Polarization p) {
  return (p == Polarization::L || p == Polarization::R) ? PhotonBasis::LR : PhotonBasis::HV;
}

int level_index(Polarization p) { return (p == Polarization::L || p == Polarization::H) ? 0 : 1; }

Polarization polarization_at(PhotonBasis basis, int index) {
  if (basis == PhotonBasis::LR) return index == 0 ? Polarization::L : Polarization::R;
  return index == 0 ? Polarization::H : Polarization::V;
}

std::string to_string(Polarization p) {
  switch (p) {
    case Polarization::L: return "L";
    case Polarization::R: return "R";
    case Polarization::H: return "H";
    case Polarization::V: return "V";
  }
  return "?";
}

std::string to_string(AtomLevel a) { return a == AtomLevel::gL ? "gL" : "gR"; }

std::string to_string(const BasisConfig& c) {
  std::string out = "|";
  if (c.photon) out += to_string(*c.photon) + ";";
  for (std::size_t i = 0; i < c.atoms.size(); ++i) {
    if (i) out += ",";
    out += to_string(c.atoms[i]);
  }
  return out + ">";
}

double PureState::norm() const {
  double sum = 0.0;
  for (const auto& [cfg, amp] : terms_) sum += std::norm(amp);
  return std::sqrt(sum);
}

Amplitude PureState::amplitude(const BasisConfig& c) const {
  auto it = terms_.find(c);
  return it == terms_.end() ? Amplitude{} : it->second;
}

std::string PureState::to_string() const {
  std::ostringstream os;
  os.precision(6);
  bool first = true;
  for (const auto& [cfg, amp] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << amp.real() << (amp.imag() < 0 ? "" : "+") << amp.imag() << "i)"
       << fecp::to_string(cfg);
  }
  return os.str();
}

PureState PureState::assemble(TermMap terms, std::size_t register_size, bool photon_present,
                              PhotonBasis basis, bool renormalize) {
  std::erase_if(terms, [](const auto& kv) { return std::abs(kv.second) < kDropTolerance; });
  if (terms.empty()) throw ConstructionError("state has zero norm");
  if (renormalize) {
    double sum = 0.0;
    for (const auto& [cfg, amp] : terms) sum += std::norm(amp);
    const double scale = 1.0 / std::sqrt(sum);
    for (auto& [cfg, amp] : terms) amp *= scale;
  }
  for (const auto& [cfg, amp] : terms) {
    if (!is_finite(amp)) throw ConstructionError("non-finite amplitude");
  }
  return PureState(std::move(terms), register_size, photon_present,
                   photon_present ? basis : PhotonBasis::LR);
}

PureState make_state(const std::vector<std::pair<BasisConfig, Amplitude>>& terms) {
  if (terms.empty()) throw ConstructionError("empty term list");
  const BasisConfig& first = terms.front().first;
  const std::size_t n = first.atoms.size();
  const bool photon = first.photon.has_value();
  const PhotonBasis basis = photon ? basis_of(*first.photon) : PhotonBasis::LR;

  PureState::TermMap map;
  for (const auto& [cfg, amp] : terms) {
    if (cfg.atoms.size() != n) throw ShapeError("inconsistent register sizes");
    if (cfg.photon.has_value() != photon) throw ShapeError("inconsistent photon presence");
    if (photon && basis_of(*cfg.photon) != basis) throw ShapeError("mixed photon bases");
    if (!is_finite(amp)) throw ConstructionError("non-finite amplitude");
    map[cfg] += amp;
  }
  return PureState::assemble(std::move(map), n, photon, basis, true);
}

PureState tensor(const PureState& a, const PureState& b) {
  if (a.has_photon() && b.has_photon()) throw ShapeError("both operands carry a photon");
  const bool photon = a.has_photon() || b.has_photon();
  const PhotonBasis basis = a.has_photon() ? a.photon_basis() : b.photon_basis();

  PureState::TermMap map;
  for (const auto& [ca, xa] : a.terms()) {
    for (const auto& [cb, xb] : b.terms()) {
      BasisConfig c;
      c.photon = ca.photon ? ca.photon : cb.photon;
      c.atoms.reserve(ca.atoms.size() + cb.atoms.size());
      c.atoms.insert(c.atoms.end(), ca.atoms.begin(), ca.atoms.end());
      c.atoms.insert(c.atoms.end(), cb.atoms.begin(), cb.atoms.end());
      map.emplace(std::move(c), xa * xb);
    }
  }
  return PureState::assemble(std::move(map), a.register_size() + b.register_size(), photon,
                             basis, false);
}

bool is_unitary(const Matrix2& u, double tol) {
  return (u.adjoint() * u - Matrix2::Identity()).cwiseAbs().maxCoeff() <= tol;
}

PureState apply_single_site_unitary(const PureState& s, Site site, const Matrix2& u) {
  check_site(s, site);
  if (!is_unitary(u)) throw NonUnitaryError("single-site operator is not unitary");

  PureState::TermMap map;
  for (const auto& [cfg, amp] : s.terms()) {
    const int from = label_index_at(cfg, site);
    for (int to = 0; to < 2; ++to) {
      const Amplitude factor = u(to, from);
      if (factor == Amplitude{}) continue;
      BasisConfig out = cfg;
      if (site.is_photon()) {
        out.photon = polarization_at(s.photon_basis(), to);
      } else {
        out.atoms[site.index] = atom_level_at(to);
      }
      map[out] += factor * amp;
    }
  }
  return PureState::assemble(std::move(map), s.register_size(), s.has_photon(), s.photon_basis(),
                             false);
}

PureState apply_diagonal(const PureState& s,
                         const std::function<Amplitude(const BasisConfig&)>& phase) {
  PureState::TermMap map;
  for (const auto& [cfg, amp] : s.terms()) {
    const Amplitude f = phase(cfg);
    if (std::abs(std::abs(f) - 1.0) > kNormTolerance) {
      throw NonUnitaryError("diagonal factor is not unimodular");
    }
    map.emplace(cfg, f * amp);
  }
  return PureState::assemble(std::move(map), s.register_size(), s.has_photon(), s.photon_basis(),
                             false);
}

PureState change_photon_basis(const PureState& s, const Matrix2& u, PhotonBasis target) {
  if (!s.has_photon()) throw ShapeError("state carries no photon");
  if (!is_unitary(u)) throw NonUnitaryError("basis change is not unitary");

  PureState::TermMap map;
  for (const auto& [cfg, amp] : s.terms()) {
    const int from = level_index(*cfg.photon);
    for (int to = 0; to < 2; ++to) {
      const Amplitude factor = u(to, from);
      if (factor == Amplitude{}) continue;
      BasisConfig out = cfg;
      out.photon = polarization_at(target, to);
      map[out] += factor * amp;
    }
  }
  return PureState::assemble(std::move(map), s.register_size(), true, target, false);
}

Amplitude inner_product(const PureState& a, const PureState& b) {
  if (a.register_size() != b.register_size() || a.has_photon() != b.has_photon() ||
      (a.has_photon() && a.photon_basis() != b.photon_basis())) {
    throw ShapeError("fidelity between states of different shape");
  }
  const auto& small = a.term_count() <= b.term_count() ? a.terms() : b.terms();
  const auto& large = a.term_count() <= b.term_count() ? b.terms() : a.terms();
  Amplitude sum{};
  for (const auto& [cfg, amp] : small) {
    auto it = large.find(cfg);
    if (it != large.end()) sum += amp * std::conj(it->second);
  }
  // sum is <large|small>; swap back to <a|b> when needed.
  return a.term_count() <= b.term_count() ? std::conj(sum) : sum;
}

double fidelity(const PureState& a, const PureState& b) {
  const double f = std::norm(inner_product(a, b)) / (std::norm(a.norm()) * std::norm(b.norm()));
  return std::clamp(f, 0.0, 1.0);
}

std::vector<MeasurementRecord> measurement_branches(const PureState& s,
                                                    const std::vector<Site>& sites) {
  if (sites.empty()) throw InvalidArgument("no sites to measure");
  for (std::size_t i = 0; i < sites.size(); ++i) {
    check_site(s, sites[i]);
    for (std::size_t j = 0; j < i; ++j) {
      if (sites[i] == sites[j]) throw InvalidArgument("site measured twice");
    }
  }

  // Group terms by the label tuple they carry on the measured sites.
  std::map<std::vector<int>, PureState::TermMap> groups;
  double total = 0.0;
  for (const auto& [cfg, amp] : s.terms()) {
    std::vector<int> key;
    key.reserve(sites.size());
    for (Site site : sites) key.push_back(label_index_at(cfg, site));
    groups[key].emplace(cfg, amp);
    total += std::norm(amp);
  }

  std::vector<MeasurementRecord> out;
  out.reserve(groups.size());
  for (auto& [key, terms] : groups) {
    double weight = 0.0;
    for (const auto& [cfg, amp] : terms) weight += std::norm(amp);
    std::vector<Label> outcome;
    const BasisConfig& rep = terms.begin()->first;
    for (Site site : sites) outcome.push_back(label_at(rep, site));
    out.push_back(MeasurementRecord{
        sites, std::move(outcome), weight / total,
        PureState::assemble(std::move(terms), s.register_size(), s.has_photon(),
                            s.photon_basis(), true)});
  }
  return out;
}

MeasurementRecord measure(const PureState& s, const std::vector<Site>& sites, Rng& rng) {
  auto branches = measurement_branches(s, sites);
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (auto& b : branches) {
    cumulative += b.probability;
    if (u < cumulative) return std::move(b);
  }
  // Rounding left the cumulative sum a hair below 1.
  return std::move(branches.back());
}

PureState discard_sites(const PureState& s, std::vector<Site> sites) {
  for (Site site : sites) check_site(s, site);
  const auto& first = s.terms().begin()->first;
  for (const auto& [cfg, amp] : s.terms()) {
    for (Site site : sites) {
      if (label_index_at(cfg, site) != label_index_at(first, site)) {
        throw ShapeError("cannot discard a site that is not in a definite state");
      }
    }
  }

  bool drop_photon = false;
  std::vector<std::size_t> atoms;
  for (Site site : sites) {
    if (site.is_photon()) {
      drop_photon = true;
    } else {
      atoms.push_back(site.index);
    }
  }
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());

  PureState::TermMap map;
  for (const auto& [cfg, amp] : s.terms()) {
    BasisConfig out;
    if (!drop_photon) out.photon = cfg.photon;
    out.atoms.reserve(cfg.atoms.size() - atoms.size());
    for (std::size_t i = 0; i < cfg.atoms.size(); ++i) {
      if (!std::binary_search(atoms.begin(), atoms.end(), i)) out.atoms.push_back(cfg.atoms[i]);
    }
    map.emplace(std::move(out), amp);
  }
  return PureState::assemble(std::move(map), s.register_size() - atoms.size(),
                             s.has_photon() && !drop_photon, s.photon_basis(), true);
}

}  // namespace fecp
