#include "stmd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "stmd/error.hpp"

namespace stmd {

namespace {

double kahan_sum(const std::vector<double>& values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

void normalize(std::vector<double>& taps) {
  const double total = kahan_sum(taps);
  if (!(total > 0.0)) throw ParameterError("kernel has no mass at this sampling step");
  for (double& t : taps) t /= total;
}

void check_cutoff(double mass_cutoff) {
  if (!(mass_cutoff > 0.0 && mass_cutoff < 1.0))
    throw ParameterError("mass_cutoff must lie in (0, 1)");
}

void check_step(double step) {
  if (!(step > 0.0)) throw ParameterError("step must be positive");
}

// Samples `density` at t = k*step until `tail(t)` < cutoff or `cap` taps.
template <typename Density, typename Tail>
std::vector<double> sample_causal(Density density, Tail tail, double step, double cutoff,
                                  std::size_t cap) {
  std::vector<double> taps;
  for (std::size_t k = 0; k < cap; ++k) {
    const double t = static_cast<double>(k) * step;
    taps.push_back(density(t));
    if (tail(t) < cutoff) break;
  }
  return taps;
}

}  // namespace

double DiscreteKernel1D::sum() const { return kahan_sum(taps); }

double DiscreteKernel2D::sum() const { return kahan_sum(taps); }

double DiscreteKernel2D::positive_sum() const {
  double s = 0.0;
  for (double t : taps) s += std::max(t, 0.0);
  return s;
}

double DiscreteKernel2D::negative_sum() const {
  double s = 0.0;
  for (double t : taps) s += std::min(t, 0.0);
  return s;
}

DiscreteKernel2D DiscreteKernel2D::identity() {
  DiscreteKernel2D k;
  k.radius = 0;
  k.taps = {1.0};
  return k;
}

DiscreteKernel2D DiscreteKernel2D::zeros(int radius) {
  DiscreteKernel2D k;
  k.radius = radius;
  k.taps.assign(static_cast<std::size_t>(k.side()) * k.side(), 0.0);
  return k;
}

DiscreteKernel2D pad_to_radius(const DiscreteKernel2D& kernel, int radius) {
  if (radius < kernel.radius) throw DimensionError("cannot pad a kernel to a smaller radius");
  DiscreteKernel2D out = DiscreteKernel2D::zeros(radius);
  for (int dy = -kernel.radius; dy <= kernel.radius; ++dy)
    for (int dx = -kernel.radius; dx <= kernel.radius; ++dx) out.at(dx, dy) = kernel.at(dx, dy);
  return out;
}

double gamma_tail_mass(int n, double tau, double t) {
  // Q(n+1, x) = exp(-x) * sum_{j=0}^{n} x^j / j!
  const double x = n * t / tau;
  double term = 1.0;
  double series = 1.0;
  for (int j = 1; j <= n; ++j) {
    term *= x / j;
    series += term;
  }
  return std::exp(-x) * series;
}

DiscreteKernel1D gamma_kernel(int n, double tau, double step, double mass_cutoff) {
  if (n < 1) throw ParameterError("gamma kernel order must be >= 1, got " + std::to_string(n));
  if (!(tau > 0.0)) throw ParameterError("gamma kernel tau must be positive");
  check_step(step);
  check_cutoff(mass_cutoff);

  const double log_norm = std::lgamma(static_cast<double>(n)) + (n + 1) * std::log(tau);
  auto density = [&](double t) {
    if (t <= 0.0) return 0.0;
    return std::exp(n * std::log(n * t) - n * t / tau - log_norm);
  };
  auto tail = [&](double t) { return gamma_tail_mass(n, tau, t); };
  const auto cap = static_cast<std::size_t>(std::ceil(10.0 * tau / step));

  DiscreteKernel1D k;
  k.taps = sample_causal(density, tail, step, mass_cutoff, std::max<std::size_t>(cap, 2));
  k.step = step;
  normalize(k.taps);
  return k;
}

DiscreteKernel1D temporal_bandpass(int n1, double tau1, int n2, double tau2, double step,
                                   double mass_cutoff) {
  const DiscreteKernel1D fast = gamma_kernel(n1, tau1, step, mass_cutoff);
  const DiscreteKernel1D slow = gamma_kernel(n2, tau2, step, mass_cutoff);
  DiscreteKernel1D k;
  k.step = step;
  k.taps.assign(std::max(fast.size(), slow.size()), 0.0);
  for (std::size_t i = 0; i < fast.size(); ++i) k.taps[i] += fast.taps[i];
  for (std::size_t i = 0; i < slow.size(); ++i) k.taps[i] -= slow.taps[i];
  return k;
}

DiscreteKernel1D exp_kernel(double lambda, double step, double mass_cutoff) {
  if (!(lambda > 0.0)) throw ParameterError("exponential kernel lambda must be positive");
  check_step(step);
  check_cutoff(mass_cutoff);
  auto density = [&](double t) { return std::exp(-t / lambda) / lambda; };
  auto tail = [&](double t) { return std::exp(-t / lambda); };
  const auto cap = static_cast<std::size_t>(std::ceil(10.0 * lambda / step));

  DiscreteKernel1D k;
  k.taps = sample_causal(density, tail, step, mass_cutoff, std::max<std::size_t>(cap, 1));
  k.step = step;
  normalize(k.taps);
  return k;
}

std::vector<double> gaussian1d(double sigma, double truncation_sigmas) {
  if (!(sigma > 0.0)) throw ParameterError("gaussian sigma must be positive");
  if (!(truncation_sigmas > 0.0)) throw ParameterError("truncation radius must be positive");
  const int radius = static_cast<int>(std::ceil(truncation_sigmas * sigma));
  std::vector<double> taps(2 * radius + 1);
  for (int i = -radius; i <= radius; ++i)
    taps[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
  normalize(taps);
  return taps;
}

DiscreteKernel2D gaussian2d(double sigma, double truncation_sigmas) {
  const std::vector<double> g = gaussian1d(sigma, truncation_sigmas);
  DiscreteKernel2D k;
  k.radius = static_cast<int>(g.size() / 2);
  k.taps.resize(g.size() * g.size());
  for (std::size_t y = 0; y < g.size(); ++y)
    for (std::size_t x = 0; x < g.size(); ++x) k.taps[y * g.size() + x] = g[y] * g[x];
  return k;
}

DogSplit dog_split(double sigma2, double sigma3, double truncation_sigmas) {
  if (!(sigma2 > 0.0) || !(sigma3 > sigma2))
    throw ParameterError("dog_split requires sigma3 > sigma2 > 0");
  const DiscreteKernel2D narrow = gaussian2d(sigma2, truncation_sigmas);
  const DiscreteKernel2D wide = gaussian2d(sigma3, truncation_sigmas);
  const int radius = std::max(narrow.radius, wide.radius);
  const DiscreteKernel2D a = pad_to_radius(narrow, radius);
  const DiscreteKernel2D b = pad_to_radius(wide, radius);

  DogSplit split{DiscreteKernel2D::zeros(radius), DiscreteKernel2D::zeros(radius)};
  for (std::size_t i = 0; i < a.taps.size(); ++i) {
    const double d = a.taps[i] - b.taps[i];
    split.positive_part.taps[i] = std::max(d, 0.0);
    split.negative_part.taps[i] = std::min(d, 0.0);
  }
  return split;
}

DiscreteKernel2D w2_kernel(double sigma4, double sigma5, double e, double rho, double A, double B,
                           double truncation_sigmas) {
  if (!(sigma4 > 0.0) || !(sigma5 > sigma4))
    throw ParameterError("w2_kernel requires sigma5 > sigma4 > 0");
  const DiscreteKernel2D center = gaussian2d(sigma4, truncation_sigmas);
  const DiscreteKernel2D surround = gaussian2d(sigma5, truncation_sigmas);
  const int radius = std::max(center.radius, surround.radius);
  const DiscreteKernel2D c = pad_to_radius(center, radius);
  const DiscreteKernel2D s = pad_to_radius(surround, radius);

  DiscreteKernel2D w = DiscreteKernel2D::zeros(radius);
  for (std::size_t i = 0; i < w.taps.size(); ++i) {
    const double g = c.taps[i] - e * s.taps[i] - rho;
    w.taps[i] = A * std::max(g, 0.0) + B * std::min(g, 0.0);
  }
  return w;
}

DiscreteKernel1D w3_kernel(double sigma6, double sigma7, int bins) {
  if (bins < 2) throw ParameterError("w3_kernel needs at least two direction bins");
  if (!(sigma6 > 0.0) || sigma7 < sigma6)
    throw ParameterError("w3_kernel requires sigma7 >= sigma6 > 0");
  const int lo = -(bins / 2);
  auto circular_gaussian = [&](double sigma) {
    std::vector<double> g(bins);
    for (int i = 0; i < bins; ++i) {
      const double offset = lo + i;
      g[i] = std::exp(-(offset * offset) / (2.0 * sigma * sigma));
    }
    normalize(g);
    return g;
  };
  const std::vector<double> narrow = circular_gaussian(sigma6);
  const std::vector<double> wide = circular_gaussian(sigma7);

  DiscreteKernel1D k;
  k.causal = false;
  k.origin = -lo;
  k.step = 1.0;
  k.taps.resize(bins);
  for (int i = 0; i < bins; ++i) k.taps[i] = narrow[i] - wide[i];
  return k;
}

double w3_tap(const DiscreteKernel1D& w3, int offset) {
  const int bins = static_cast<int>(w3.size());
  int index = (offset + w3.origin) % bins;
  if (index < 0) index += bins;
  return w3.taps[index];
}

}  // namespace stmd
