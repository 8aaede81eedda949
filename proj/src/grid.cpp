#include "magicbullet/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "magicbullet/errors.hpp"

namespace mb {

namespace {

// Relative slack when comparing positions against grid nodes.
constexpr double kNodeSlack = 1e-12;

double node_slack(const GridSpec& g) {
  return kNodeSlack * std::max({std::abs(g.x_min), std::abs(g.x_max), g.x_max - g.x_min});
}

void append_number(std::string& line, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  line.append(buf, ptr);
}

// Integral of the linear interpolant between (x0, d0) and (x1, d1) over [lo, hi].
double linear_segment_integral(double x0, double d0, double x1, double d1, double lo, double hi) {
  if (hi <= lo) return 0.0;
  const double slope = (d1 - d0) / (x1 - x0);
  const double dlo = d0 + slope * (lo - x0);
  const double dhi = d0 + slope * (hi - x0);
  return 0.5 * (dlo + dhi) * (hi - lo);
}

}  // namespace

void GridSpec::validate() const {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max)) {
    throw std::invalid_argument("grid needs finite x_min < x_max");
  }
  if (n < 2) throw std::invalid_argument("grid needs n >= 2");
}

GridSpec GridSpec::centered(double half_width, std::size_t n) {
  GridSpec g{-half_width, half_width, n};
  g.validate();
  return g;
}

GridSpec GridSpec::centered_with_spacing(double half_width, double max_spacing) {
  if (!(max_spacing > 0.0)) throw std::invalid_argument("grid spacing must be positive");
  const auto intervals = static_cast<std::size_t>(std::ceil(2.0 * half_width / max_spacing));
  return centered(half_width, std::max<std::size_t>(intervals, 1) + 1);
}

SampledField::SampledField(GridSpec grid, std::vector<cdouble> values, Plane plane)
    : grid_(grid), values_(std::move(values)), plane_(plane) {
  grid_.validate();
  if (values_.size() != grid_.n) {
    throw std::invalid_argument("field has " + std::to_string(values_.size()) +
                                " values for a grid of " + std::to_string(grid_.n));
  }
  for (const cdouble& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw std::invalid_argument("field contains a non-finite value");
    }
  }
}

std::vector<double> SampledField::density() const {
  std::vector<double> d(values_.size());
  std::transform(values_.begin(), values_.end(), d.begin(), [](cdouble v) { return std::norm(v); });
  return d;
}

SampledField SampledField::scaled(cdouble factor) const {
  std::vector<cdouble> v(values_);
  for (cdouble& x : v) x *= factor;
  return SampledField(grid_, std::move(v), plane_);
}

std::vector<double> trapezoid_weights(const GridSpec& grid) {
  std::vector<double> w(grid.n, grid.spacing());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

SampledField sample(const WaveProfile& profile, const GridSpec& grid) {
  grid.validate();
  std::vector<cdouble> values(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) values[i] = eval_profile(profile, grid.x(i));
  return SampledField(grid, std::move(values), profile.plane);
}

cdouble inner_product(const SampledField& f, const SampledField& h) {
  if (!(f.grid() == h.grid())) throw MismatchError("inner_product: fields live on different grids");
  if (f.plane() != h.plane()) throw MismatchError("inner_product: fields live in different planes");
  const std::vector<double> w = trapezoid_weights(f.grid());
  cdouble sum{0.0, 0.0};
  for (std::size_t i = 0; i < w.size(); ++i) sum += w[i] * std::conj(f[i]) * h[i];
  return sum;
}

double window_mass(const SampledField& f) {
  const std::vector<double> w = trapezoid_weights(f.grid());
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) sum += w[i] * std::norm(f[i]);
  return sum;
}

double probability_in_interval(const SampledField& f, double a, double b) {
  const GridSpec& g = f.grid();
  if (a > b) throw std::invalid_argument("probability_in_interval: need a <= b");
  const double slack = node_slack(g);
  if (a < g.x_min - slack || b > g.x_max + slack) {
    throw std::invalid_argument("probability_in_interval: [" + std::to_string(a) + ", " +
                                std::to_string(b) + "] leaves the grid window");
  }
  if (a == b) return 0.0;
  a = std::max(a, g.x_min);
  b = std::min(b, g.x_max);
  const double dx = g.spacing();
  // Snap endpoints that sit on a node up to round-off, so node-aligned
  // intervals reproduce the trapezoid rule exactly.
  const auto cell_of = [&](double x) {
    const double t = (x - g.x_min) / dx;
    const double r = std::round(t);
    const double snapped = std::abs(t - r) < 1e-9 ? r : std::floor(t);
    return std::min(static_cast<std::size_t>(std::max(snapped, 0.0)), g.n - 2);
  };
  const std::size_t first = cell_of(a);
  const std::size_t last = cell_of(b);
  double sum = 0.0;
  for (std::size_t i = first; i <= last && i + 1 < g.n; ++i) {
    const double x0 = g.x(i);
    const double x1 = g.x(i + 1);
    const double lo = std::max(a, x0);
    const double hi = std::min(b, x1);
    sum += linear_segment_integral(x0, std::norm(f[i]), x1, std::norm(f[i + 1]), lo, hi);
  }
  return std::clamp(sum, 0.0, 1.0);
}

SampledField apply_screen(const SampledField& f, double half_width) {
  if (f.plane() != Plane::source) {
    throw std::invalid_argument("apply_screen: the screen sits in the source plane");
  }
  if (half_width < 0.0) throw std::invalid_argument("apply_screen: negative half width");
  const GridSpec& g = f.grid();
  const double slack = node_slack(g);
  std::vector<cdouble> v(f.values().begin(), f.values().end());
  if (half_width > 0.0) {
    for (std::size_t i = 0; i < g.n; ++i) {
      if (std::abs(g.x(i)) <= half_width + slack) v[i] = {0.0, 0.0};
    }
  }
  return SampledField(g, std::move(v), f.plane());
}

void write_profile_csv(std::ostream& out, const SampledField& f) {
  out << "x,re,im,density\n";
  std::string line;
  for (std::size_t i = 0; i < f.size(); ++i) {
    line.clear();
    append_number(line, f.grid().x(i));
    line.push_back(',');
    append_number(line, f[i].real());
    line.push_back(',');
    append_number(line, f[i].imag());
    line.push_back(',');
    append_number(line, std::norm(f[i]));
    line.push_back('\n');
    out << line;
  }
}

}  // namespace mb
