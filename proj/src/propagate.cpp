#include "magicbullet/propagate.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "magicbullet/errors.hpp"

namespace mb {

namespace {

// Exact sincos re-anchoring period for the rotation recurrence.
constexpr std::size_t kReanchorEvery = 512;

double kernel_sign(const PropagationSpec& spec) {
  double s = spec.direction == Direction::forward ? 1.0 : -1.0;
  if (spec.convention == KernelConvention::conjugated) s = -s;
  return s;
}

cdouble kernel_prefactor(double lambda_z, double sign) {
  return std::polar(1.0 / std::sqrt(lambda_z), -sign * kPi / 4.0);
}

template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  }
}

// K(x - x') = pref * exp(i s pi x^2/lz) * exp(i s pi x'^2/lz) * exp(-2 i s pi x x'/lz).
// The x'-dependent chirp is folded into the input once; the linear phase is
// advanced by a fixed rotation and re-anchored periodically.
std::vector<cdouble> propagate_direct(const SampledField& in, double lz, double sign,
                                      const GridSpec& out) {
  const GridSpec& g = in.grid();
  const std::vector<double> w = trapezoid_weights(g);
  std::vector<cdouble> folded(g.n);
  for (std::size_t j = 0; j < g.n; ++j) {
    const double xp = g.x(j);
    folded[j] = w[j] * in[j] * std::polar(1.0, sign * kPi * xp * xp / lz);
  }
  const cdouble pref = kernel_prefactor(lz, sign);
  const double dx = g.spacing();
  std::vector<cdouble> result(out.n);
  parallel_for(out.n, [&](std::size_t i) {
    const double x = out.x(i);
    const double rate = -2.0 * sign * kPi * x / lz;
    const cdouble step = std::polar(1.0, rate * dx);
    cdouble sum{0.0, 0.0};
    cdouble rot{1.0, 0.0};
    for (std::size_t j = 0; j < g.n; ++j) {
      if (j % kReanchorEvery == 0) rot = std::polar(1.0, rate * g.x(j));
      sum += folded[j] * rot;
      rot *= step;
    }
    result[i] = pref * std::polar(1.0, sign * kPi * x * x / lz) * sum;
  });
  return result;
}

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwPlan {
  fftw_plan plan = nullptr;
  FftwPlan(std::vector<cdouble>& buf, int direction) {
    std::lock_guard lock(fftw_planner_mutex());
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    plan = fftw_plan_dft_1d(static_cast<int>(buf.size()), p, p, direction, FFTW_ESTIMATE);
    if (!plan) throw InternalError("fftw plan creation failed");
  }
  ~FftwPlan() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  FftwPlan(const FftwPlan&) = delete;
  FftwPlan& operator=(const FftwPlan&) = delete;
  void execute() const { fftw_execute(plan); }
};

std::size_t next_pow2(std::size_t v) {
  std::size_t p = 1;
  while (p < v) p <<= 1;
  return p;
}

// Linear convolution on an auxiliary grid with the input spacing, starting at
// out.x_min; the result is linearly interpolated onto `out` unless the
// spacings agree.
std::vector<cdouble> propagate_fft(const SampledField& in, double lz, double sign,
                                   const GridSpec& out) {
  const GridSpec& g = in.grid();
  const double dx = g.spacing();
  const std::size_t n = g.n;
  const double span = out.x_max - out.x_min;
  const bool aligned = std::abs(out.spacing() - dx) <= 1e-12 * dx;
  const std::size_t m =
      aligned ? out.n : static_cast<std::size_t>(std::ceil(span / dx - 1e-9)) + 1;
  const std::size_t taps = n + m - 1;
  const std::size_t size = next_pow2(2 * taps);

  const std::vector<double> w = trapezoid_weights(g);
  std::vector<cdouble> a(size, cdouble{0.0, 0.0});
  std::vector<cdouble> b(size, cdouble{0.0, 0.0});
  for (std::size_t j = 0; j < n; ++j) a[j] = w[j] * in[j];
  const cdouble pref = kernel_prefactor(lz, sign);
  const double offset = out.x_min - g.x_min;
  for (std::size_t t = 0; t < taps; ++t) {
    const double xi = offset + (static_cast<double>(t) - static_cast<double>(n - 1)) * dx;
    b[t] = pref * std::polar(1.0, sign * kPi * xi * xi / lz);
  }
  {
    FftwPlan fa(a, FFTW_FORWARD);
    FftwPlan fb(b, FFTW_FORWARD);
    fa.execute();
    fb.execute();
  }
  for (std::size_t k = 0; k < size; ++k) a[k] *= b[k];
  {
    FftwPlan inv(a, FFTW_BACKWARD);
    inv.execute();
  }
  const double scale = 1.0 / static_cast<double>(size);
  std::vector<cdouble> aux(m);
  for (std::size_t i = 0; i < m; ++i) aux[i] = a[i + n - 1] * scale;
  if (aligned) return aux;

  std::vector<cdouble> result(out.n);
  for (std::size_t i = 0; i < out.n; ++i) {
    const double t = (out.x(i) - out.x_min) / dx;
    const auto k = std::min(static_cast<std::size_t>(t), m - 2);
    const double frac = t - static_cast<double>(k);
    result[i] = aux[k] * (1.0 - frac) + aux[k + 1] * frac;
  }
  return result;
}

}  // namespace

PropagationSpec PropagationSpec::across(Overlap g, double separations, Direction direction,
                                        Method method) {
  return {mb::lambda_z(g, separations), direction, method, KernelConvention::standard};
}

double max_alias_free_spacing(const GridSpec& input, const GridSpec& output, double lz) {
  const double extent =
      std::max(std::abs(output.x_max - input.x_min), std::abs(input.x_max - output.x_min));
  return lz / (2.0 * extent);
}

SampledField fresnel_propagate(const SampledField& input, const PropagationSpec& spec,
                               const GridSpec& out_grid, Plane out_plane) {
  out_grid.validate();
  if (!(spec.lambda_z > 0.0) || !std::isfinite(spec.lambda_z)) {
    throw DomainError("fresnel_propagate: lambda*z must be positive");
  }
  const double limit = max_alias_free_spacing(input.grid(), out_grid, spec.lambda_z);
  if (input.grid().spacing() > limit * (1.0 + 1e-9)) {
    throw AliasingError("fresnel_propagate: input spacing " +
                        std::to_string(input.grid().spacing()) + " exceeds the chirp limit " +
                        std::to_string(limit));
  }
  const double sign = kernel_sign(spec);
  std::vector<cdouble> values = spec.method == Method::direct_quadrature
                                    ? propagate_direct(input, spec.lambda_z, sign, out_grid)
                                    : propagate_fft(input, spec.lambda_z, sign, out_grid);
  return SampledField(out_grid, std::move(values), out_plane);
}

cdouble calibrate_phase(const SampledField& reference, const SampledField& computed) {
  const cdouble z = inner_product(reference, computed);
  const double mag = std::abs(z);
  if (!(mag > 0.0)) throw DegenerateError("calibrate_phase: reference and computed are orthogonal");
  return std::conj(z) / mag;
}

double relative_l2_error(const SampledField& reference, const SampledField& computed) {
  if (!(reference.grid() == computed.grid())) {
    throw MismatchError("relative_l2_error: fields live on different grids");
  }
  const std::vector<double> w = trapezoid_weights(reference.grid());
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    diff += w[i] * std::norm(computed[i] - reference[i]);
    ref += w[i] * std::norm(reference[i]);
  }
  if (!(ref > 0.0)) throw DegenerateError("relative_l2_error: reference has zero norm");
  return std::sqrt(diff / ref);
}

}  // namespace mb
