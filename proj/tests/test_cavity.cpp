#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "fecp/cavity.hpp"
#include "fecp/gates.hpp"

using namespace fecp;
using C = std::complex<double>;

TEST(Reflection, IdealOperatingPoint) {
  for (double kappa : {1.0, 0.25, 3.0, 1e3}) {
    const auto p = ideal_operating_point(kappa, 7.0);
    EXPECT_NEAR(std::abs(reflection_coefficient(p) - C(-1, 0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(empty_cavity_reflection(p) - C(0, 1)), 0.0, 1e-12);
    EXPECT_NEAR(gate_phase_error(p), 0.0, 1e-12);
    const auto ph = phase_pair(p);
    EXPECT_NEAR(ph.phi, std::numbers::pi, 1e-12);
    EXPECT_NEAR(ph.phi_0, std::numbers::pi / 2, 1e-12);
    const auto th = faraday_angles(ph);
    EXPECT_NEAR(th.theta_plus, std::numbers::pi / 4, 1e-12);
    EXPECT_NEAR(th.theta_minus, -std::numbers::pi / 4, 1e-12);
  }
}

TEST(Reflection, UncoupledAtomReducesToEmptyCavity) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int rep = 0; rep < 100; ++rep) {
    CavityParams<double> p{1.0, 1.0 + u(gen), 1.0 + u(gen), 0.5 + std::abs(u(gen)), std::abs(u(gen)), 0.0};
    EXPECT_NEAR(std::abs(reflection_coefficient(p) - empty_cavity_reflection(p)), 0.0, 1e-12);
  }
}

TEST(Reflection, FarDetunedProbeIsFullyReflected) {
  auto p = ideal_operating_point(1.0);
  p.omega_p = p.omega_c - 1e6;
  const C r = reflection_coefficient(p);
  EXPECT_NEAR(std::abs(r), 1.0, 1e-3);
  EXPECT_NEAR(principal_arg(r), 0.0, 1e-3);
  EXPECT_NEAR(principal_arg(r), 1e-6, 1e-12);
  EXPECT_NEAR(std::abs(empty_cavity_reflection(p) - C(1, 0)), 0.0, 1e-3);
}

TEST(Reflection, LosslessAtomIsUnimodular) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int rep = 0; rep < 1000; ++rep) {
    CavityParams<double> p{1.0 + u(gen), 1.0 + u(gen), 1.0 + u(gen), 0.1 + std::abs(u(gen)), 0.0,
                           std::abs(u(gen))};
    EXPECT_NEAR(std::abs(reflection_coefficient(p)), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(empty_cavity_reflection(p)), 1.0, 1e-12);
  }
}

TEST(Reflection, DissipationNeverAmplifies) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int rep = 0; rep < 1000; ++rep) {
    CavityParams<double> p{1.0, 1.0 + u(gen) - 1, u(gen), 0.1 + u(gen), u(gen), u(gen)};
    EXPECT_LE(std::abs(reflection_coefficient(p)), 1.0 + 1e-12);
  }
}

TEST(Reflection, InvariantUnderCommonRescaling) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int rep = 0; rep < 200; ++rep) {
    CavityParams<double> p{u(gen), u(gen), u(gen), 0.2 + u(gen), u(gen), u(gen)};
    for (double f : {1e-3, 0.5, 10.0, 1e3}) {
      EXPECT_NEAR(std::abs(reflection_coefficient(p.scaled(f)) - reflection_coefficient(p)), 0.0, 1e-12);
      EXPECT_NEAR(std::abs(empty_cavity_reflection(p.scaled(f)) - empty_cavity_reflection(p)), 0.0, 1e-12);
    }
  }
}

TEST(Reflection, WeakAtomicDecayAnchor) {
  auto p = ideal_operating_point(1.0);
  p.gamma = 0.01;
  const C r = reflection_coefficient(p);
  EXPECT_NEAR(r.real(), -0.980199960792002, 1e-12);
  EXPECT_NEAR(r.imag(), 0.000196039992158, 1e-12);
  EXPECT_NEAR(std::abs(r + 1.0), 0.019801009679226, 1e-12);
  EXPECT_LT(std::abs(r), 1.0);
}

TEST(Reflection, CouplingSweepMinimizesAtHalfKappa) {
  auto p = ideal_operating_point(1.0);
  double best_g = 0.0, best_err = 1e9;
  for (int i = 0; i <= 400; ++i) {
    p.g = 0.3 + 0.4 * i / 400.0;
    const double err = std::abs(reflection_coefficient(p) + 1.0);
    if (err < best_err) best_err = err, best_g = p.g;
  }
  EXPECT_NEAR(best_g, 0.5, 1e-12);
  EXPECT_NEAR(best_err, 0.0, 1e-12);
  p.g = 0.3;
  EXPECT_NEAR(std::abs(reflection_coefficient(p) + 1.0), 1.078107392846735, 1e-12);
  p.g = 0.7;
  EXPECT_NEAR(std::abs(reflection_coefficient(p) + 1.0), 1.385063656379427, 1e-12);
}

TEST(Reflection, TemplatedOnLongDouble) {
  const auto p = ideal_operating_point<long double>(1.0L);
  const auto r = reflection_coefficient(p);
  EXPECT_LT(std::abs(r + 1.0L), 1e-15L);
}

TEST(Reflection, RejectsBadParameters) {
  CavityParams<double> p = ideal_operating_point(1.0);
  p.kappa = 0.0;
  EXPECT_THROW(reflection_coefficient(p), InvalidArgument);
  p.kappa = -1.0;
  EXPECT_THROW(empty_cavity_reflection(p), InvalidArgument);
  p = ideal_operating_point(1.0);
  p.gamma = -0.1;
  EXPECT_THROW(reflection_coefficient(p), InvalidArgument);
  p = ideal_operating_point(1.0);
  p.omega_p = std::nan("");
  EXPECT_THROW(reflection_coefficient(p), InvalidArgument);
  EXPECT_THROW(ideal_operating_point(0.0), InvalidArgument);
}

TEST(Reflection, SingularDenominator) {
  // Resonant probe with gamma = 0 and g = 0 leaves (kappa/2)(0) + 0 = 0.
  CavityParams<double> p{1.0, 1.0, 1.0, 1.0, 0.0, 0.0};
  p.omega_c = p.omega_p;
  p.omega_0 = p.omega_p;
  EXPECT_THROW(reflection_coefficient(p), SingularParameterError);
}

TEST(Angles, PrincipalBranchAndAntisymmetry) {
  EXPECT_DOUBLE_EQ(principal_arg(C(-1.0, 0.0)), std::numbers::pi);
  EXPECT_DOUBLE_EQ(principal_arg(C(-1.0, -0.0)), std::numbers::pi);
  EXPECT_DOUBLE_EQ(principal_arg(C(0.0, 1.0)), std::numbers::pi / 2);
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int rep = 0; rep < 200; ++rep) {
    CavityParams<double> p{1.0, 1.0 + u(gen), 1.0 + u(gen), 0.5 + std::abs(u(gen)), 0.0, std::abs(u(gen))};
    const auto ph = phase_pair(p);
    EXPECT_GT(ph.phi, -std::numbers::pi);
    EXPECT_LE(ph.phi, std::numbers::pi);
    const auto th = faraday_angles(ph);
    EXPECT_DOUBLE_EQ(th.theta_plus, -th.theta_minus);
  }
}

TEST(Angles, GateFromIdealCavity) {
  const FaradayGate g = FaradayGate::from_cavity(ideal_operating_point(2.0));
  EXPECT_NEAR(std::abs(g.phase_LL() - C(-1, 0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(g.phase_RL() - C(0, 1)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(g.phase_LR() - C(0, 1)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(g.phase_RR() - C(-1, 0)), 0.0, 1e-12);
}
