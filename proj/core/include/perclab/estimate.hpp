#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include <nlohmann/json.hpp>

namespace perclab {

// Monte Carlo estimate with a two-sided confidence interval.
struct Estimate {
  std::size_t n_samples = 0;
  double sum = 0.0;  // success count for proportions
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double confidence = 0.99;
};

// Wilson score interval.
Estimate proportion_estimate(std::uint64_t successes, std::size_t n_samples, double confidence = 0.99);
// Student-t interval for the mean; values are summed in the given order.
Estimate mean_estimate(std::span<const double> values, double confidence = 0.99);

// Two-sided level whose upper (or lower) end is a one-sided bound at `one_sided` level.
constexpr double two_sided_for_one_sided(double one_sided) noexcept { return 2.0 * one_sided - 1.0; }

nlohmann::json to_json(const Estimate& estimate);

}  // namespace perclab
