#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "magicbullet/errors.hpp"

namespace mb {

struct LineSearchResult {
  double x;
  double value;
  int iterations;
};

// Counts strict local maxima of f on a uniform sweep of `points` samples over
// [lo, hi]. Plateaus are collapsed before counting; endpoint maxima count.
template <typename F>
std::size_t count_local_maxima(F&& f, double lo, double hi, std::size_t points) {
  std::vector<double> values;
  values.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    const double v = f(x);
    if (values.empty() || v != values.back()) values.push_back(v);
  }
  std::size_t maxima = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const bool left_ok = i == 0 || values[i] > values[i - 1];
    const bool right_ok = i + 1 == values.size() || values[i] > values[i + 1];
    if (left_ok && right_ok) ++maxima;
  }
  return maxima;
}

// Golden-section maximization of a unimodal f on [lo, hi]; stops once the
// bracket is narrower than tol.
template <typename F>
LineSearchResult golden_section_maximize(F&& f, double lo, double hi, double tol) {
  if (!(lo < hi) || !(tol > 0.0)) {
    throw std::invalid_argument("golden_section_maximize: need lo < hi and tol > 0");
  }
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int iterations = 0;
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++iterations;
  }
  const double x = 0.5 * (a + b);
  return {x, f(x), iterations};
}

// Guarded variant: a `guard_points` sweep must find exactly one local maximum
// before the line search runs.
template <typename F>
LineSearchResult guarded_maximize(F&& f, double lo, double hi, double tol,
                                  std::size_t guard_points = 101) {
  const std::size_t maxima = count_local_maxima(f, lo, hi, guard_points);
  if (maxima != 1) {
    throw InternalError("guard sweep found " + std::to_string(maxima) +
                        " local maxima on [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "]; objective is not unimodal");
  }
  return golden_section_maximize(f, lo, hi, tol);
}

}  // namespace mb
