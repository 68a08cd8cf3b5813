#include "perclab/estimate.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "perclab/error.hpp"

namespace perclab {

namespace {

void require_confidence(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw PreconditionError("confidence must lie in (0, 1)");
}

}  // namespace

Estimate proportion_estimate(std::uint64_t successes, std::size_t n_samples, double confidence) {
  require_confidence(confidence);
  if (n_samples == 0) throw PreconditionError("estimate needs at least one sample");
  if (successes > n_samples) throw PreconditionError("more successes than samples");
  const double n = static_cast<double>(n_samples);
  const double phat = static_cast<double>(successes) / n;
  const double z = boost::math::quantile(boost::math::normal(), 0.5 + 0.5 * confidence);
  const double z2 = z * z;
  const double centre = (phat + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z / (1.0 + z2 / n) * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
  Estimate e;
  e.n_samples = n_samples;
  e.sum = static_cast<double>(successes);
  e.mean = phat;
  e.ci_low = std::clamp(std::min(centre - half, phat), 0.0, 1.0);
  e.ci_high = std::clamp(std::max(centre + half, phat), 0.0, 1.0);
  if (successes == 0) e.ci_low = 0.0;
  if (successes == n_samples) e.ci_high = 1.0;
  e.confidence = confidence;
  return e;
}

Estimate mean_estimate(std::span<const double> values, double confidence) {
  require_confidence(confidence);
  if (values.size() < 2) throw PreconditionError("mean estimate needs at least two samples");
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  const boost::math::students_t dist(n - 1.0);
  const double t = boost::math::quantile(dist, 0.5 + 0.5 * confidence);
  Estimate e;
  e.n_samples = values.size();
  e.sum = sum;
  e.mean = mean;
  e.ci_low = mean - t * sd / std::sqrt(n);
  e.ci_high = mean + t * sd / std::sqrt(n);
  e.confidence = confidence;
  return e;
}

nlohmann::json to_json(const Estimate& e) {
  return {{"n_samples", e.n_samples}, {"mean", e.mean},       {"ci_low", e.ci_low},
          {"ci_high", e.ci_high},     {"confidence", e.confidence}};
}

}  // namespace perclab
