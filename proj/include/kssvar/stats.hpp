#pragma once

#include <cstddef>
#include <span>

namespace kssvar {

struct SampleSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;        // unbiased
  double se_mean = 0.0;
  double se_variance = 0.0;     // delete-one jackknife
  double se_variance_m4 = 0.0;  // from the fourth central moment
};

/// Requires n >= 3 for the variance standard errors (they are 0 otherwise).
SampleSummary summarize(std::span<const double> x);

}  // namespace kssvar
