#include "dabg/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dabg/error.hpp"

namespace dabg {

void CauchyParams::validate(const std::string& field) const {
  if (!std::isfinite(location)) {
    throw ValidationError(field + ".location", "must be finite");
  }
  if (!std::isfinite(scale) || scale <= 0.0) {
    throw ValidationError(field + ".scale", "must be a positive real");
  }
}

void GammaParams::validate(const std::string& field) const {
  if (!std::isfinite(shape) || shape <= 0.0) {
    throw ValidationError(field + ".shape", "must be a positive real");
  }
  if (!std::isfinite(location)) {
    throw ValidationError(field + ".location", "must be finite");
  }
  if (!std::isfinite(scale) || scale <= 0.0) {
    throw ValidationError(field + ".scale", "must be a positive real");
  }
}

double cauchy_pdf(double x, const CauchyParams& params) {
  params.validate();
  if (!std::isfinite(x)) {
    throw std::domain_error("cauchy_pdf: non-finite x");
  }
  const double z = (x - params.location) / params.scale;
  return 1.0 / (std::numbers::pi * params.scale * (1.0 + z * z));
}

double gamma_pdf(double x, const GammaParams& params) {
  params.validate();
  if (!std::isfinite(x)) {
    throw std::domain_error("gamma_pdf: non-finite x");
  }
  if (x < params.location) {
    throw std::domain_error("gamma_pdf: x below the location parameter");
  }
  const double z = (x - params.location) / params.scale;
  return std::pow(z, params.shape - 1.0) * std::exp(-z) /
         (params.scale * std::tgamma(params.shape));
}

double draw_cauchy(Rng& rng, const CauchyParams& params) {
  return rng.cauchy(params.location, params.scale);
}

double draw_gamma(Rng& rng, const GammaParams& params) {
  return params.location + params.scale * rng.gamma(params.shape);
}

std::vector<std::int64_t> apportion_largest_remainder(
    std::span<const double> weights, std::int64_t total) {
  if (total < 0) {
    throw ValidationError("total", "must be non-negative");
  }
  if (weights.empty()) {
    throw ValidationError("weights", "must be non-empty");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw ValidationError("weights", "must be finite and non-negative");
    }
    sum += w;
  }
  std::vector<std::int64_t> counts(weights.size(), 0);
  if (total == 0) return counts;
  if (sum <= 0.0) {
    throw ValidationError("weights", "must have a positive sum");
  }

  std::vector<double> fractions(weights.size());
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double quota = static_cast<double>(total) * (weights[i] / sum);
    const double base = std::floor(quota);
    counts[i] = static_cast<std::int64_t>(base);
    fractions[i] = quota - base;
    assigned += counts[i];
  }

  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return fractions[a] > fractions[b];
  });
  std::int64_t remainder = total - assigned;
  for (std::int64_t k = 0; k < remainder; ++k) {
    counts[order[static_cast<std::size_t>(k) % order.size()]] += 1;
  }
  return counts;
}

CyclicCountSeries cyclic_count_series(std::int64_t total, int t_total,
                                      int cycle_length,
                                      const CauchyParams& params) {
  params.validate();
  if (total < 0) {
    throw ValidationError("total", "must be non-negative");
  }
  if (t_total < 1) {
    throw ValidationError("t_total", "must be positive");
  }
  if (cycle_length < 1 || cycle_length > t_total) {
    throw ValidationError("cycle_length", "must be in [1, t_total]");
  }
  if (t_total % cycle_length != 0) {
    throw ValidationError(
        "t_total", "must be a multiple of cycle_length (pad before calling)");
  }

  // The location acts as a phase within the cycle.
  double phase = std::fmod(params.location, static_cast<double>(cycle_length));
  if (phase < 0.0) phase += static_cast<double>(cycle_length);
  const CauchyParams folded{phase, params.scale};

  std::vector<double> cycle(static_cast<std::size_t>(cycle_length));
  for (int k = 0; k < cycle_length; ++k) {
    cycle[static_cast<std::size_t>(k)] = cauchy_pdf(k + 0.5, folded);
  }

  std::vector<double> tiled(static_cast<std::size_t>(t_total));
  for (int t = 0; t < t_total; ++t) {
    tiled[static_cast<std::size_t>(t)] =
        cycle[static_cast<std::size_t>(t % cycle_length)];
  }

  CyclicCountSeries series;
  series.counts = apportion_largest_remainder(tiled, total);
  series.total = total;
  series.cycle_length = cycle_length;
  return series;
}

DegreeProbabilityTable degree_probability_table(std::size_t n,
                                                const GammaParams& params,
                                                std::uint64_t seed) {
  params.validate();
  if (n < 1) {
    throw ValidationError("n", "must be at least 1");
  }

  Rng rng(seed);
  DegreeProbabilityTable table;
  table.characteristic_degree.resize(n);
  table.density.resize(n);
  table.weight.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = draw_gamma(rng, params);
    // Keep densities strictly positive and finite so the inverse is usable.
    const double p =
        std::clamp(gamma_pdf(d, params), 1e-300, 1e300);
    table.characteristic_degree[i] = d;
    table.density[i] = p;
    table.weight[i] = 1.0 / p;
  }
  const double min_weight =
      *std::min_element(table.weight.begin(), table.weight.end());
  const double cap = min_weight * kMaxWeightRatio;
  for (double& w : table.weight) {
    w = std::min(w, cap);
  }
  return table;
}

double sorted_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) {
    throw ValidationError("samples", "must be non-empty");
  }
  if (sorted.size() == 1) return sorted[0];
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::clamp(
      std::floor(h), 0.0, static_cast<double>(sorted.size() - 2)));
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

CauchyParams fit_cauchy(std::span<const double> samples) {
  if (samples.size() < 3) {
    throw ValidationError("samples", "need at least 3 samples");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted_quantile(sorted, 0.5);
  const double iqr =
      sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25);
  return CauchyParams{median, std::max(0.5 * iqr, kFitScaleFloor)};
}

GammaParams fit_gamma(std::span<const double> samples) {
  if (samples.empty()) {
    throw ValidationError("samples", "need at least 3 samples");
  }
  const double location =
      *std::min_element(samples.begin(), samples.end()) - kFitScaleFloor;
  return fit_gamma(samples, location);
}

GammaParams fit_gamma(std::span<const double> samples, double location) {
  if (samples.size() < 3) {
    throw ValidationError("samples", "need at least 3 samples");
  }
  double mean = 0.0;
  for (double x : samples) {
    if (x - location <= 0.0) {
      throw ValidationError("samples",
                            "all samples must exceed the location parameter");
    }
    mean += x - location;
  }
  mean /= static_cast<double>(samples.size());

  double ss = 0.0;
  for (double x : samples) {
    const double d = (x - location) - mean;
    ss += d * d;
  }
  const double variance = ss / static_cast<double>(samples.size() - 1);
  if (variance == 0.0) {
    throw ValidationError("samples", "zero variance");
  }
  return GammaParams{mean * mean / variance, location, variance / mean};
}

}  // namespace dabg
