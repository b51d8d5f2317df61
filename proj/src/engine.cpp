#include "fecp/engine.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "fecp/error.hpp"

namespace fecp {

namespace {

// Fidelity floor for accepting a caller-supplied state as GHZ-class with
// the given coefficients.
constexpr double kPreconditionFidelity = 1.0 - 1e-9;

PureState photon_plus() {
  return make_state({{{Polarization::L, {}}, 1.0}, {{Polarization::R, {}}, 1.0}});
}

RoundResult finish_round(Detection d, const CoefficientPair& c, std::size_t round) {
  const Classification cls = classify(d.outcome);
  PureState corrected = d.post_state;
  if (cls == Classification::SuccessAfterFlip || cls == Classification::RecycleAfterFlip) {
    corrected = phase_flip(corrected, 0);
  }
  std::optional<CoefficientPair> next;
  if (!is_success(cls)) next = recycled_coefficients(c);
  return RoundResult{round, c, d.outcome, cls, d.probability, std::move(corrected), next};
}

// Photon through the auxiliary cavity and then the first GHZ atom's cavity,
// Hadamard on the auxiliary atom, wave plate. Returns the state ready for
// detection and the auxiliary atom's site.
std::pair<PureState, std::size_t> evolve_round(const PureState& state, const CoefficientPair& c) {
  if (state.has_photon()) throw ShapeError("round input must not carry a photon");
  const std::size_t n = state.register_size();
  if (n < 2) throw ShapeError("GHZ register needs at least two atoms");
  if (c.degenerate()) throw DegenerateStateError("alpha * beta == 0, nothing to concentrate");
  if (fidelity(state, prepare_initial(c, n)) < kPreconditionFidelity) {
    throw InvalidArgument("state does not match the supplied coefficients");
  }

  const std::size_t aux = n;
  PureState s = tensor(tensor(photon_plus(), state), prepare_aux_atom(c));
  s = pass_two_cavities(s, aux, 0);
  s = atom_hadamard(s, aux);
  s = photon_qwp(s);
  return {std::move(s), aux};
}

}  // namespace

CoefficientPair::CoefficientPair(Amplitude alpha, Amplitude beta) : alpha_(alpha), beta_(beta) {
  const bool finite = std::isfinite(alpha.real()) && std::isfinite(alpha.imag()) &&
                      std::isfinite(beta.real()) && std::isfinite(beta.imag());
  if (!finite) throw InvalidArgument("coefficients must be finite");
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > kNormTolerance) {
    throw InvalidArgument("|alpha|^2 + |beta|^2 must equal 1");
  }
}

CoefficientPair CoefficientPair::normalized(Amplitude alpha, Amplitude beta) {
  const double n = std::sqrt(std::norm(alpha) + std::norm(beta));
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("cannot normalize coefficients");
  return {alpha / n, beta / n};
}

CoefficientPair CoefficientPair::from_weight(double alpha2) {
  if (!(alpha2 >= 0.0 && alpha2 <= 1.0)) throw InvalidArgument("|alpha|^2 must lie in [0, 1]");
  return {std::sqrt(alpha2), std::sqrt(1.0 - alpha2)};
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Success: return "Success";
    case Classification::SuccessAfterFlip: return "SuccessAfterFlip";
    case Classification::Recycle: return "Recycle";
    case Classification::RecycleAfterFlip: return "RecycleAfterFlip";
  }
  return "?";
}

std::string to_string(ProtocolStatus s) {
  switch (s) {
    case ProtocolStatus::Succeeded: return "Succeeded";
    case ProtocolStatus::Exhausted: return "Exhausted";
    case ProtocolStatus::Lost: return "Lost";
  }
  return "?";
}

Classification classify(const DetectionOutcome& o) {
  const bool v = o.photon == Polarization::V;
  const bool gr = o.aux_atom == AtomLevel::gR;
  if (v) return gr ? Classification::Success : Classification::SuccessAfterFlip;
  return gr ? Classification::RecycleAfterFlip : Classification::Recycle;
}

PureState prepare_initial(const CoefficientPair& c, std::size_t n_atoms) {
  if (n_atoms < 2) throw InvalidArgument("GHZ register needs at least two atoms");
  std::vector<AtomLevel> first(n_atoms, AtomLevel::gR);
  std::vector<AtomLevel> second(n_atoms, AtomLevel::gL);
  first[0] = AtomLevel::gL;
  second[0] = AtomLevel::gR;
  return make_state({{{std::nullopt, first}, c.alpha()}, {{std::nullopt, second}, c.beta()}});
}

PureState maximally_entangled(std::size_t n_atoms) {
  return prepare_initial(CoefficientPair::from_weight(0.5), n_atoms);
}

PureState prepare_aux_atom(const CoefficientPair& c) {
  return make_state({{{std::nullopt, {AtomLevel::gL}}, c.beta()},
                     {{std::nullopt, {AtomLevel::gR}}, c.alpha()}});
}

CoefficientPair recycled_coefficients(const CoefficientPair& c) {
  if (c.degenerate()) throw DegenerateStateError("alpha * beta == 0, nothing to concentrate");
  return CoefficientPair::normalized(c.alpha() * c.alpha(), c.beta() * c.beta());
}

RoundResult run_round(const PureState& state, const CoefficientPair& c, Rng& rng,
                      std::size_t round_index) {
  auto [s, aux] = evolve_round(state, c);
  return finish_round(pbs_and_detect(s, aux, rng), c, round_index);
}

std::vector<RoundResult> round_branches(const PureState& state, const CoefficientPair& c,
                                        std::size_t round_index) {
  auto [s, aux] = evolve_round(state, c);
  std::vector<RoundResult> out;
  for (auto& d : detection_branches(s, aux)) {
    out.push_back(finish_round(std::move(d), c, round_index));
  }
  return out;
}

ProtocolTranscript run_protocol(const CoefficientPair& c, std::size_t n_atoms,
                                std::size_t max_rounds, Rng& rng, const HeraldGate& herald) {
  if (max_rounds < 1) throw InvalidArgument("max_rounds must be at least 1");
  if (c.degenerate()) throw DegenerateStateError("alpha * beta == 0, nothing to concentrate");

  std::vector<RoundResult> rounds;
  PureState state = prepare_initial(c, n_atoms);
  CoefficientPair current = c;
  ProtocolStatus status = ProtocolStatus::Exhausted;
  std::size_t final_round = 0;

  for (std::size_t k = 1; k <= max_rounds; ++k) {
    // Deep recycling can underflow one coefficient to zero; the state is
    // then a product state and no further round can herald success.
    if (current.degenerate()) break;
    RoundResult r = run_round(state, current, rng, k);
    final_round = k;
    state = r.corrected_state;
    const bool success = is_success(r.classification);
    if (r.next_coefficients) current = *r.next_coefficients;
    rounds.push_back(std::move(r));
    if (herald && !herald(rng)) {
      status = ProtocolStatus::Lost;
      break;
    }
    if (success) {
      status = ProtocolStatus::Succeeded;
      break;
    }
  }
  return ProtocolTranscript{std::move(rounds), status, final_round, std::move(state), rng.seed(),
                            rng.stream()};
}

std::string format_round(const RoundResult& r) {
  char buf[256];
  const Amplitude a = r.coefficients.alpha();
  const Amplitude b = r.coefficients.beta();
  std::snprintf(buf, sizeof buf, "%zu %s %s %.17g %.17g %.17g %.17g %.17g", r.round,
                to_string(r.outcome).c_str(), to_string(r.classification).c_str(), r.probability,
                a.real(), a.imag(), b.real(), b.imag());
  return buf;
}

void write_transcript(std::ostream& os, const ProtocolTranscript& t) {
  os << "# seed=" << t.seed << " stream=" << t.stream << " status=" << to_string(t.status)
     << " final_round=" << t.final_round << "\n";
  for (const auto& r : t.rounds) os << format_round(r) << "\n";
}

RoundRecord parse_round(const std::string& line) {
  std::istringstream is(line);
  RoundRecord rec;
  std::string outcome, cls;
  double ar, ai, br, bi;
  if (!(is >> rec.round >> outcome >> cls >> rec.probability >> ar >> ai >> br >> bi)) {
    throw InvalidArgument("malformed round record: " + line);
  }
  const auto comma = outcome.find(',');
  if (comma == std::string::npos) throw InvalidArgument("malformed outcome: " + outcome);
  const std::string ph = outcome.substr(0, comma);
  const std::string at = outcome.substr(comma + 1);
  if (ph != "H" && ph != "V") throw InvalidArgument("photon outcome must be H or V");
  if (at != "gL" && at != "gR") throw InvalidArgument("atom outcome must be gL or gR");
  rec.outcome = {ph == "H" ? Polarization::H : Polarization::V,
                 at == "gL" ? AtomLevel::gL : AtomLevel::gR};
  bool known = false;
  for (Classification c : {Classification::Success, Classification::SuccessAfterFlip,
                           Classification::Recycle, Classification::RecycleAfterFlip}) {
    if (to_string(c) == cls) {
      rec.classification = c;
      known = true;
    }
  }
  if (!known) throw InvalidArgument("unknown classification: " + cls);
  rec.alpha = {ar, ai};
  rec.beta = {br, bi};
  return rec;
}

}  // namespace fecp
