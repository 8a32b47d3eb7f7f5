#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dabg/rng.hpp"

namespace dabg {

struct CauchyParams {
  double location = 0.0;
  double scale = 1.0;

  void validate(const std::string& field = "cauchy") const;
};

struct GammaParams {
  double shape = 1.0;
  double location = 0.0;
  double scale = 1.0;

  void validate(const std::string& field = "gamma") const;
};

// Cauchy density 1/(pi*s*(1+((x-l)/s)^2)). Throws std::domain_error for
// non-finite x.
double cauchy_pdf(double x, const CauchyParams& params);

// Three-parameter gamma density ((x-l)/s)^(a-1) * exp(-(x-l)/s) / (s*Gamma(a)).
// The support is [location, inf); x below the location is a domain error, not
// a zero density.
double gamma_pdf(double x, const GammaParams& params);

double draw_cauchy(Rng& rng, const CauchyParams& params);
double draw_gamma(Rng& rng, const GammaParams& params);

// Splits `total` into integer counts proportional to `weights` (non-negative,
// positive sum), conserving the total exactly. Remainders are assigned by
// largest fractional part, ties toward the lower slot.
std::vector<std::int64_t> apportion_largest_remainder(
    std::span<const double> weights, std::int64_t total);

// Per-snapshot counts over a horizon of `t_total` slots: one cycle of Cauchy
// densities sampled at slot midpoints, tiled t_total/cycle_length times,
// normalized, and apportioned.
struct CyclicCountSeries {
  std::vector<std::int64_t> counts;  // length t_total, sums to total
  std::int64_t total = 0;
  int cycle_length = 0;
};

CyclicCountSeries cyclic_count_series(std::int64_t total, int t_total,
                                      int cycle_length,
                                      const CauchyParams& params);

// Snapshot-participation weights never exceed kMaxWeightRatio times the
// smallest weight in the table; raw inverse densities in the gamma tail would
// otherwise overflow the sampling arithmetic.
inline constexpr double kMaxWeightRatio = 1e6;

// One row per node: a characteristic degree drawn from the gamma law, its
// density under that law, and the inverse-density sampling weight.
struct DegreeProbabilityTable {
  std::vector<double> characteristic_degree;
  std::vector<double> density;
  std::vector<double> weight;

  std::size_t size() const { return weight.size(); }
};

DegreeProbabilityTable degree_probability_table(std::size_t n,
                                                const GammaParams& params,
                                                std::uint64_t seed);

inline constexpr double kFitScaleFloor = 1e-9;

// Robust estimators: median / half-IQR for Cauchy, method of moments on
// location-shifted data for gamma. Both need at least 3 samples.
CauchyParams fit_cauchy(std::span<const double> samples);
GammaParams fit_gamma(std::span<const double> samples);
GammaParams fit_gamma(std::span<const double> samples, double location);

// Linear-interpolation quantile of a sorted sample, p in [0, 1].
double sorted_quantile(std::span<const double> sorted, double p);

}  // namespace dabg
