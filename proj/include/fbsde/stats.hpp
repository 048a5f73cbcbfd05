#ifndef FBSDE_STATS_HPP
#define FBSDE_STATS_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "fbsde/errors.hpp"

namespace fbsde {

struct SampleStats {
  double mean = 0.0;
  double std_error = 0.0;  // sample std deviation / sqrt(n)
  std::size_t n = 0;
};

// Pairwise-tree sum; order is fixed by the index layout, so totals are
// independent of the worker count that produced the values.
inline double tree_sum(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc;
  }
  const std::size_t half = n / 2;
  return tree_sum(values.subspan(0, half)) + tree_sum(values.subspan(half));
}

inline SampleStats summarize(std::span<const double> values) {
  SampleStats s;
  s.n = values.size();
  if (s.n == 0) return s;
  s.mean = tree_sum(values) / static_cast<double>(s.n);
  if (s.n == 1) return s;
  double ss = 0.0;
  for (double v : values) {
    const double d = v - s.mean;
    ss += d * d;
  }
  const double var = ss / static_cast<double>(s.n - 1);
  s.std_error = std::sqrt(var / static_cast<double>(s.n));
  return s;
}

inline SampleStats summarize(const std::vector<double>& values) {
  return summarize(std::span<const double>(values));
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw DimensionMismatch("fit_line: need matching samples, at least two");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

}  // namespace fbsde

#endif  // FBSDE_STATS_HPP
