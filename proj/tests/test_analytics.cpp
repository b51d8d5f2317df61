#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"

#include "fecp/analytics.hpp"
#include "fecp/engine.hpp"
#include "fecp/format.hpp"

using namespace fecp;

namespace {

Weights<double> w_of(double a2) { return {a2, 1.0 - a2}; }

}  // namespace

TEST(RoundProbability, SymmetricInputHalvesEachRound) {
  for (std::size_t k = 1; k <= 20; ++k) {
    EXPECT_NEAR(round_probability(w_of(0.5), k), std::ldexp(1.0, -static_cast<int>(k)), 1e-15);
  }
  EXPECT_NEAR(total_probability(w_of(0.5), 5), 0.96875, 1e-15);
  EXPECT_NEAR(recycle_probability(w_of(0.5), 5), 0.03125, 1e-15);
}

TEST(RoundProbability, KnownValues) {
  EXPECT_NEAR(round_probability(w_of(0.8), 1), 0.32, 1e-15);
  EXPECT_NEAR(round_probability(w_of(0.8), 2), 0.0752941176470588, 1e-12);
  EXPECT_NEAR(reference_probability(w_of(0.8)), 0.32, 1e-15);
  EXPECT_THROW(round_probability(w_of(0.8), 0), InvalidArgument);
  EXPECT_EQ(round_probability(w_of(1.0), 3), 0.0);
  EXPECT_EQ(round_probability(w_of(0.0), 1), 0.0);
}

TEST(RoundProbability, TelescopesOverRecycledPairs) {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> u(0.001, 0.999), ph(-3.0, 3.0);
  for (int rep = 0; rep < 100; ++rep) {
    const double a2 = u(gen);
    CoefficientPair c(std::polar(std::sqrt(a2), ph(gen)), std::polar(std::sqrt(1 - a2), ph(gen)));
    const auto w0 = weights_of(c);
    double reach = 1.0;
    for (std::size_t k = 1; k <= 8; ++k) {
      const double pk = reach * 2.0 * c.alpha2() * c.beta2();
      EXPECT_NEAR(round_probability(w0, k), pk, 1e-12 + 1e-10 * pk) << "a2=" << a2 << " k=" << k;
      reach *= c.alpha2() * c.alpha2() + c.beta2() * c.beta2();
      if (!(c.alpha2() * c.beta2() > 0.0)) break;
      c = recycled_coefficients(c);
      if (c.degenerate()) break;
    }
  }
}

TEST(RoundProbability, MassConservation) {
  std::mt19937_64 gen(43);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto w = w_of(u(gen));
    for (std::size_t K : {1u, 2u, 5u, 12u, 30u}) {
      const double total = total_probability(w, K);
      EXPECT_GE(total, 0.0);
      EXPECT_LE(total, 1.0 + 1e-12);
      EXPECT_NEAR(total + recycle_probability(w, K), 1.0, 1e-12);
    }
  }
}

TEST(RoundProbability, SymmetricInWeightsAndBlindToPhases) {
  std::mt19937_64 gen(44);
  std::uniform_real_distribution<double> u(0.0, 1.0), ph(-3.0, 3.0);
  for (int rep = 0; rep < 200; ++rep) {
    const double a2 = u(gen);
    for (std::size_t k = 1; k <= 6; ++k) {
      EXPECT_NEAR(round_probability(w_of(a2), k), round_probability(Weights<double>{1 - a2, a2}, k), 1e-15);
    }
    const CoefficientPair plain = CoefficientPair::from_weight(a2);
    const CoefficientPair phased(std::polar(std::sqrt(a2), ph(gen)), std::polar(std::sqrt(1 - a2), ph(gen)));
    EXPECT_NEAR(total_probability(plain, 5), total_probability(phased, 5), 1e-14);
  }
}

TEST(RoundProbability, RecyclingNeverLosesToReference) {
  std::mt19937_64 gen(45);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto w = w_of(u(gen));
    EXPECT_GE(total_probability(w, 5), reference_probability(w));
    EXPECT_GE(total_probability(w, 6), total_probability(w, 5));
  }
}

TEST(RoundProbability, StableForDeepRoundsAndTinyWeights) {
  // The closed form's powers underflow here; the result must not.
  const double p = round_probability(w_of(0.9), 60);
  EXPECT_TRUE(std::isfinite(p));
  EXPECT_GE(p, 0.0);
  const double tiny = total_probability(w_of(1e-300), 10);
  EXPECT_TRUE(std::isfinite(tiny));
  EXPECT_NEAR(tiny, 2e-300, 1e-310);
}

TEST(RoundProbability, LongDoubleInstantiation) {
  EXPECT_NEAR(static_cast<double>(total_probability(Weights<long double>{0.5L, 0.5L}, 5)), 0.96875, 1e-18);
}

TEST(Imperfect, SpotValues) {
  const auto w = w_of(0.5);
  const DetectionEfficiency eff{0.9, 0.9};
  EXPECT_NEAR(imperfect_total(w, eff, 5), 0.7846875, 1e-12);
  EXPECT_NEAR(imperfect_reference(w, eff, 5), 0.2657205, 1e-12);
  EXPECT_NEAR(imperfect_reference(w, eff, 10), 0.156905298045, 1e-12);
  EXPECT_EQ(format_fixed6(imperfect_total(w, eff, 5)), "0.784688");
  EXPECT_EQ(format_fixed6(imperfect_reference(w, eff, 5)), "0.265720");
}

TEST(Imperfect, ReferenceDecaysWithRegisterSize) {
  std::mt19937_64 gen(46);
  std::uniform_real_distribution<double> u(0.01, 0.99), e(0.05, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    const auto w = w_of(u(gen));
    const DetectionEfficiency eff{e(gen), e(gen)};
    const double r5 = imperfect_reference(w, eff, 5);
    const double r10 = imperfect_reference(w, eff, 10);
    EXPECT_NEAR(r10 / r5, std::pow(eff.eta_a, 5), 1e-12);
    EXPECT_LE(r10, r5);
    EXPECT_NEAR(imperfect_total(w, eff, 5), eff.eta_p * eff.eta_a * total_probability(w, 5), 1e-15);
  }
  EXPECT_THROW(imperfect_total(w_of(0.5), DetectionEfficiency{1.1, 0.9}, 5), InvalidArgument);
}

TEST(Imperfect, CascadedIsNeverAboveGlobal) {
  const auto w = w_of(0.7);
  const DetectionEfficiency eff{0.9, 0.8};
  double cascaded = 0.0;
  for (std::size_t k = 1; k <= 5; ++k) cascaded += cascaded_round_probability(w, eff, k);
  EXPECT_LE(cascaded, imperfect_total(w, eff, 5));
  EXPECT_NEAR(cascaded_round_probability(w, eff, 1), 0.72 * 0.42, 1e-15);
}

TEST(Ledger, ConditionalProbabilities) {
  const auto led = probability_ledger(w_of(0.8), 4);
  ASSERT_EQ(led.per_round.size(), 4u);
  EXPECT_NEAR(led.conditional[0], 0.32, 1e-15);
  // Round 2 runs on the recycled pair (0.941176.., 0.058823..).
  const double a2 = 0.64 / 0.68;
  EXPECT_NEAR(led.conditional[1], 2 * a2 * (1 - a2), 1e-12);
  EXPECT_NEAR(led.total + led.still_recycling, 1.0, 1e-12);
}

TEST(Figures, GridAndTables) {
  const auto grid = default_alpha_grid();
  ASSERT_EQ(grid.size(), 200u);
  EXPECT_DOUBLE_EQ(grid.front(), 0.005);
  EXPECT_DOUBLE_EQ(grid.back(), 0.995);
  EXPECT_TRUE(std::is_sorted(grid.begin(), grid.end()));
  EXPECT_NE(std::find(grid.begin(), grid.end(), std::numbers::sqrt2 / 2), grid.end());

  const auto f4 = figure4_table(grid);
  const auto f5 = figure5_table(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_GE(f4[i].ours, f4[i].reference);
    EXPECT_GE(f5[i].ref_n_small, f5[i].ref_n_large);
    EXPECT_NEAR(f5[i].ours, 0.81 * f4[i].ours, 1e-15);
    // Mirror symmetry about alpha^2 = 1/2.
    EXPECT_NEAR(f4[i].ours, total_probability(w_of(1 - f4[i].alpha2), 5), 1e-12);
  }
  EXPECT_THROW(figure4_table({1.2}), InvalidArgument);
}

TEST(Figures, CsvAndJson) {
  const std::vector<double> alphas = {std::numbers::sqrt2 / 2};
  std::ostringstream c4, c5, j5;
  write_csv(c4, figure4_table(alphas));
  write_csv(c5, figure5_table(alphas));
  write_json(j5, figure5_table(alphas));
  EXPECT_EQ(c4.str(), "alpha,alpha2,p_total_ours,p_reference\n0.707107,0.500000,0.968750,0.500000\n");
  EXPECT_EQ(c5.str(),
            "alpha,alpha2,p_total_ours,p_reference,p_ref_n5,p_ref_n10\n"
            "0.707107,0.500000,0.784688,0.500000,0.265720,0.156905\n");
  const auto j = nlohmann::json::parse(j5.str());
  ASSERT_EQ(j.size(), 1u);
  EXPECT_NEAR(j[0]["p_total_ours"].get<double>(), 0.7846875, 1e-12);
}

TEST(Format, FixedSixDecimals) {
  EXPECT_EQ(format_fixed6(0.0), "0.000000");
  EXPECT_EQ(format_fixed6(-0.0), "0.000000");
  EXPECT_EQ(format_fixed6(-1e-9), "0.000000");
  EXPECT_EQ(format_fixed6(0.1234565), "0.123456");
  EXPECT_EQ(format_fixed6(0.1234575), "0.123458");
  EXPECT_EQ(format_fixed6(0.12345651), "0.123457");
  EXPECT_EQ(format_fixed6(1.0), "1.000000");
  EXPECT_EQ(format_fixed6(-0.5), "-0.500000");
}
