#pragma once

// Input-output relation of a single photon reflected from a one-sided low-Q
// cavity holding a three-level atom, in the weak-excitation limit.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>

#include "fecp/error.hpp"

namespace fecp {

// All frequencies and rates share one arbitrary unit; only detunings
// relative to kappa enter the reflection coefficient.
template <typename Scalar = double>
struct CavityParams {
  Scalar omega_c = Scalar(1);  // cavity field mode
  Scalar omega_0 = Scalar(1);  // atomic transition
  Scalar omega_p = Scalar(1);  // probe photon
  Scalar kappa = Scalar(1);    // cavity damping
  Scalar gamma = Scalar(0);    // atomic decay
  Scalar g = Scalar(0);        // atom-cavity coupling

  void validate() const {
    using std::isfinite;
    if (!(isfinite(omega_c) && isfinite(omega_0) && isfinite(omega_p) && isfinite(kappa) &&
          isfinite(gamma) && isfinite(g))) {
      throw InvalidArgument("cavity parameters must be finite");
    }
    if (!(kappa > Scalar(0))) throw InvalidArgument("kappa must be positive");
    if (gamma < Scalar(0)) throw InvalidArgument("gamma must be non-negative");
    if (g < Scalar(0)) throw InvalidArgument("g must be non-negative");
  }

  CavityParams scaled(Scalar factor) const {
    return {omega_c * factor, omega_0 * factor, omega_p * factor,
            kappa * factor,   gamma * factor,   g * factor};
  }
};

// Phases of the coupled (phi) and empty-cavity (phi_0) reflections, each
// the principal value in (-pi, pi].
template <typename Scalar = double>
struct PhasePair {
  Scalar phi{};
  Scalar phi_0{};
};

template <typename Scalar = double>
struct FaradayAngles {
  Scalar theta_minus{};  // atom in gL
  Scalar theta_plus{};   // atom in gR
};

template <typename Scalar>
Scalar principal_arg(const std::complex<Scalar>& z) {
  using std::atan2;
  Scalar a = atan2(z.imag(), z.real());
  // atan2 gives -pi for (-1, -0.0); fold onto the closed end of (-pi, pi].
  if (a <= -std::numbers::pi_v<Scalar>) a += Scalar(2) * std::numbers::pi_v<Scalar>;
  return a;
}

template <typename Scalar>
std::complex<Scalar> reflection_coefficient(const CavityParams<Scalar>& p) {
  p.validate();
  using C = std::complex<Scalar>;
  const C i(0, 1);
  const C cavity = i * (p.omega_c - p.omega_p);
  const C atom = i * (p.omega_0 - p.omega_p) + p.gamma / Scalar(2);
  const Scalar g2 = p.g * p.g;
  const C num = (cavity - p.kappa / Scalar(2)) * atom + g2;
  const C den = (cavity + p.kappa / Scalar(2)) * atom + g2;
  using std::abs;
  if (abs(den) < Scalar(1e-15)) {
    throw SingularParameterError("reflection denominator vanishes for these parameters");
  }
  return num / den;
}

template <typename Scalar>
std::complex<Scalar> empty_cavity_reflection(const CavityParams<Scalar>& p) {
  p.validate();
  using C = std::complex<Scalar>;
  const C cavity = C(0, 1) * (p.omega_c - p.omega_p);
  return (cavity - p.kappa / Scalar(2)) / (cavity + p.kappa / Scalar(2));
}

template <typename Scalar>
PhasePair<Scalar> phase_pair(const CavityParams<Scalar>& p) {
  return {principal_arg(reflection_coefficient(p)), principal_arg(empty_cavity_reflection(p))};
}

template <typename Scalar>
FaradayAngles<Scalar> faraday_angles(const PhasePair<Scalar>& ph) {
  const Scalar plus = (ph.phi - ph.phi_0) / Scalar(2);
  return {-plus, plus};
}

// omega_0 = omega_c, omega_p = omega_c - kappa/2, g = kappa/2, gamma = 0,
// where the coupled reflection is -1 and the empty one is i.
template <typename Scalar = double>
CavityParams<Scalar> ideal_operating_point(Scalar kappa, Scalar omega_c = Scalar(1)) {
  if (!(kappa > Scalar(0))) throw InvalidArgument("kappa must be positive");
  return {omega_c, omega_c, omega_c - kappa / Scalar(2), kappa, Scalar(0), kappa / Scalar(2)};
}

// Largest distance of (r, r0) from the ideal gate phases (-1, i).
template <typename Scalar>
Scalar gate_phase_error(const CavityParams<Scalar>& p) {
  using C = std::complex<Scalar>;
  using std::abs;
  const Scalar coupled = abs(reflection_coefficient(p) - C(-1, 0));
  const Scalar empty = abs(empty_cavity_reflection(p) - C(0, 1));
  return std::max(coupled, empty);
}

}  // namespace fecp
