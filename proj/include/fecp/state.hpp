#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "fecp/rng.hpp"

namespace fecp {

using Amplitude = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;

// Amplitudes with modulus below this are removed after every operation.
inline constexpr double kDropTolerance = 1e-12;
// Tolerance for unit norm and for unitarity of user supplied matrices.
inline constexpr double kNormTolerance = 1e-9;

enum class Polarization : std::uint8_t { L, R, H, V };
enum class PhotonBasis : std::uint8_t { LR, HV };
// Two degenerate ground sublevels of the three-level atom. The excited
// level is only virtually populated and has no label.
enum class AtomLevel : std::uint8_t { gL, gR };

PhotonBasis basis_of(Polarization p);
// Position of p inside its own basis: L, H -> 0 and R, V -> 1.
int level_index(Polarization p);
Polarization polarization_at(PhotonBasis basis, int index);
inline int level_index(AtomLevel a) { return a == AtomLevel::gL ? 0 : 1; }
inline AtomLevel atom_level_at(int index) { return index == 0 ? AtomLevel::gL : AtomLevel::gR; }

std::string to_string(Polarization p);
std::string to_string(AtomLevel a);

struct BasisConfig {
  std::optional<Polarization> photon;
  std::vector<AtomLevel> atoms;

  auto operator<=>(const BasisConfig&) const = default;
  bool operator==(const BasisConfig&) const = default;
};

std::string to_string(const BasisConfig& c);

// Addresses either the single photon or one atom of the register.
struct Site {
  enum class Kind : std::uint8_t { Photon, Atom };
  Kind kind = Kind::Atom;
  std::size_t index = 0;

  static constexpr Site photon() { return {Kind::Photon, 0}; }
  static constexpr Site atom(std::size_t i) { return {Kind::Atom, i}; }
  bool is_photon() const { return kind == Kind::Photon; }

  auto operator<=>(const Site&) const = default;
  bool operator==(const Site&) const = default;
};

using Label = std::variant<Polarization, AtomLevel>;

struct MeasurementRecord;

// Normalized pure state stored sparsely as configuration -> amplitude.
// Values are immutable; every operation returns a new state.
class PureState {
 public:
  using TermMap = std::map<BasisConfig, Amplitude>;

  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  std::size_t register_size() const { return register_size_; }
  bool has_photon() const { return photon_present_; }
  PhotonBasis photon_basis() const { return photon_basis_; }

  double norm() const;
  // Zero for configurations that are not stored.
  Amplitude amplitude(const BasisConfig& c) const;

  std::string to_string() const;

 private:
  PureState(TermMap terms, std::size_t register_size, bool photon_present, PhotonBasis basis)
      : terms_(std::move(terms)),
        register_size_(register_size),
        photon_present_(photon_present),
        photon_basis_(basis) {}

  friend PureState make_state(const std::vector<std::pair<BasisConfig, Amplitude>>&);
  friend PureState tensor(const PureState&, const PureState&);
  friend PureState apply_single_site_unitary(const PureState&, Site, const Matrix2&);
  friend PureState apply_diagonal(const PureState&,
                                  const std::function<Amplitude(const BasisConfig&)>&);
  friend PureState change_photon_basis(const PureState&, const Matrix2&, PhotonBasis);
  friend PureState discard_sites(const PureState&, std::vector<Site>);
  friend std::vector<MeasurementRecord> measurement_branches(const PureState&,
                                                             const std::vector<Site>&);
  static PureState assemble(TermMap terms, std::size_t register_size, bool photon_present,
                            PhotonBasis basis, bool renormalize);

  TermMap terms_;
  std::size_t register_size_ = 0;
  bool photon_present_ = false;
  PhotonBasis photon_basis_ = PhotonBasis::LR;
};

struct MeasurementRecord {
  std::vector<Site> sites;
  std::vector<Label> outcome;  // one label per measured site, same order
  double probability = 0.0;
  PureState post_state;
};

// Builds a normalized state. Duplicate configurations are summed first.
// Throws ConstructionError for an empty or all-zero list and ShapeError
// for inconsistent register sizes or photon bases.
PureState make_state(const std::vector<std::pair<BasisConfig, Amplitude>>& terms);

// Product state; atoms of `a` come first. At most one operand may carry
// the photon.
PureState tensor(const PureState& a, const PureState& b);

PureState apply_single_site_unitary(const PureState& s, Site site, const Matrix2& u);

// Multiplies each amplitude by phase(config). Each factor must be unimodular.
PureState apply_diagonal(const PureState& s,
                         const std::function<Amplitude(const BasisConfig&)>& phase);

// Rewrites the photon into `target` basis; column j of `u` holds the
// target-basis components of the j-th current-basis vector.
PureState change_photon_basis(const PureState& s, const Matrix2& u, PhotonBasis target);

// |<a|b>|^2, clamped to [0, 1].
double fidelity(const PureState& a, const PureState& b);
Amplitude inner_product(const PureState& a, const PureState& b);

// Every outcome with nonzero Born weight, in deterministic (label) order,
// each with its renormalized projected state.
std::vector<MeasurementRecord> measurement_branches(const PureState& s,
                                                    const std::vector<Site>& sites);

// Samples one outcome of a projective measurement by the Born rule.
MeasurementRecord measure(const PureState& s, const std::vector<Site>& sites, Rng& rng);

// Removes sites that hold the same label in every term (for instance right
// after measuring them). Atom indices above a removed atom shift down.
PureState discard_sites(const PureState& s, std::vector<Site> sites);

bool is_unitary(const Matrix2& u, double tol = kNormTolerance);

}  // namespace fecp
