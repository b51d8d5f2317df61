#include "fecp/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "json.hpp"

#include "fecp/engine.hpp"
#include "fecp/format.hpp"

namespace fecp {

namespace {

Weights<double> weights_of_amplitude(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in [0, 1]");
  const double a2 = alpha * alpha;
  return {a2, 1.0 - a2};
}

}  // namespace

Weights<double> weights_of(const CoefficientPair& c) { return {c.alpha2(), c.beta2()}; }

double round_probability(const CoefficientPair& c, std::size_t k) {
  return round_probability(weights_of(c), k);
}

double total_probability(const CoefficientPair& c, std::size_t max_rounds) {
  return total_probability(weights_of(c), max_rounds);
}

double reference_probability(const CoefficientPair& c) {
  return reference_probability(weights_of(c));
}

double imperfect_reference(const CoefficientPair& c, const DetectionEfficiency& eff,
                           std::size_t n_atoms) {
  return imperfect_reference(weights_of(c), eff, n_atoms);
}

double imperfect_total(const CoefficientPair& c, const DetectionEfficiency& eff,
                       std::size_t max_rounds) {
  return imperfect_total(weights_of(c), eff, max_rounds);
}

ProbabilityLedger probability_ledger(const Weights<double>& w, std::size_t max_rounds) {
  if (max_rounds < 1) throw InvalidArgument("max_rounds must be at least 1");
  ProbabilityLedger ledger;
  for (std::size_t k = 1; k <= max_rounds; ++k) {
    const double p = round_probability(w, k);
    const double reach = recycle_probability(w, k - 1);
    ledger.per_round.push_back(p);
    ledger.conditional.push_back(reach > 0.0 ? p / reach : 0.0);
    ledger.total += p;
  }
  ledger.still_recycling = recycle_probability(w, max_rounds);
  return ledger;
}

std::vector<double> default_alpha_grid(std::size_t points) {
  if (points < 2) throw InvalidArgument("grid needs at least two points");
  std::vector<double> grid;
  grid.reserve(points + 1);
  const double lo = 0.005, hi = 0.995;
  for (std::size_t i = 0; i < points; ++i) {
    grid.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  const double sym = std::numbers::sqrt2 / 2.0;
  if (std::find(grid.begin(), grid.end(), sym) == grid.end()) {
    grid.insert(std::upper_bound(grid.begin(), grid.end(), sym), sym);
  }
  return grid;
}

std::vector<Figure4Row> figure4_table(const std::vector<double>& alphas, std::size_t max_rounds) {
  std::vector<Figure4Row> rows;
  rows.reserve(alphas.size());
  for (double a : alphas) {
    const auto w = weights_of_amplitude(a);
    rows.push_back({a, w.alpha2, total_probability(w, max_rounds), reference_probability(w)});
  }
  return rows;
}

std::vector<Figure5Row> figure5_table(const std::vector<double>& alphas,
                                      const DetectionEfficiency& eff, std::size_t max_rounds,
                                      std::size_t n_small, std::size_t n_large) {
  eff.validate();
  std::vector<Figure5Row> rows;
  rows.reserve(alphas.size());
  for (double a : alphas) {
    const auto w = weights_of_amplitude(a);
    rows.push_back({a, w.alpha2, imperfect_total(w, eff, max_rounds), reference_probability(w),
                    imperfect_reference(w, eff, n_small), imperfect_reference(w, eff, n_large)});
  }
  return rows;
}

void write_csv(std::ostream& os, const std::vector<Figure4Row>& rows) {
  os << "alpha,alpha2,p_total_ours,p_reference\n";
  for (const auto& r : rows) {
    os << format_fixed6(r.alpha) << ',' << format_fixed6(r.alpha2) << ',' << format_fixed6(r.ours) << ','
       << format_fixed6(r.reference) << '\n';
  }
}

void write_csv(std::ostream& os, const std::vector<Figure5Row>& rows) {
  os << "alpha,alpha2,p_total_ours,p_reference,p_ref_n5,p_ref_n10\n";
  for (const auto& r : rows) {
    os << format_fixed6(r.alpha) << ',' << format_fixed6(r.alpha2) << ',' << format_fixed6(r.ours) << ','
       << format_fixed6(r.reference) << ',' << format_fixed6(r.ref_n_small) << ',' << format_fixed6(r.ref_n_large)
       << '\n';
  }
}

void write_json(std::ostream& os, const std::vector<Figure4Row>& rows) {
  auto arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"alpha", r.alpha},
                   {"alpha2", r.alpha2},
                   {"p_total_ours", r.ours},
                   {"p_reference", r.reference}});
  }
  os << arr.dump(2) << '\n';
}

void write_json(std::ostream& os, const std::vector<Figure5Row>& rows) {
  auto arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"alpha", r.alpha},
                   {"alpha2", r.alpha2},
                   {"p_total_ours", r.ours},
                   {"p_reference", r.reference},
                   {"p_ref_n5", r.ref_n_small},
                   {"p_ref_n10", r.ref_n_large}});
  }
  os << arr.dump(2) << '\n';
}

}  // namespace fecp
