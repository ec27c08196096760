#include "kssvar/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace kssvar {

SampleSummary summarize(std::span<const double> x) {
  SampleSummary s;
  s.n = x.size();
  if (s.n < 2) throw std::invalid_argument("summarize: need at least 2 observations");
  const double n = static_cast<double>(s.n);
  double sum = 0.0;
  for (double v : x) sum += v;
  s.mean = sum / n;
  double m2 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d2 = (v - s.mean) * (v - s.mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  s.variance = m2 / (n - 1.0);
  s.se_mean = std::sqrt(s.variance / n);
  if (s.n < 3) return s;

  // Leave-one-out variances: (m2 - n/(n-1) (x_i - mean)^2) / (n - 2).
  double jsum = 0.0, jsum2 = 0.0;
  for (double v : x) {
    const double vi = (m2 - n / (n - 1.0) * (v - s.mean) * (v - s.mean)) / (n - 2.0);
    jsum += vi;
    jsum2 += vi * vi;
  }
  const double jmean = jsum / n;
  s.se_variance = std::sqrt(std::max(0.0, (n - 1.0) / n * (jsum2 - n * jmean * jmean)));

  const double mu2 = m2 / n, mu4 = m4 / n;
  s.se_variance_m4 = std::sqrt(std::max(0.0, (mu4 - (n - 3.0) / (n - 1.0) * mu2 * mu2) / n));
  return s;
}

}  // namespace kssvar
