#pragma once

#include <utility>
#include <vector>

namespace stmd {

/// Sampled, truncated 1-D filter.
///
/// Causal temporal kernels store tap k at lag k (k = 0 is the current frame).
/// Non-causal kernels store taps for offsets -origin ... size()-1-origin.
struct DiscreteKernel1D {
  std::vector<double> taps;
  double step = 1.0;  // frames per tap
  bool causal = true;
  int origin = 0;

  std::size_t size() const { return taps.size(); }
  double sum() const;
};

/// Square 2-D filter of side 2*radius+1, row-major, centred on (radius, radius).
struct DiscreteKernel2D {
  std::vector<double> taps;
  int radius = 0;

  int side() const { return 2 * radius + 1; }
  double at(int dx, int dy) const { return taps[(dy + radius) * side() + (dx + radius)]; }
  double& at(int dx, int dy) { return taps[(dy + radius) * side() + (dx + radius)]; }
  double sum() const;
  double positive_sum() const;
  double negative_sum() const;

  static DiscreteKernel2D identity();
  static DiscreteKernel2D zeros(int radius);
};

/// Zero-pads `kernel` symmetrically to a larger radius.
DiscreteKernel2D pad_to_radius(const DiscreteKernel2D& kernel, int radius);

/// Truncation defaults for all temporal kernels.
inline constexpr double kDefaultMassCutoff = 1e-3;
inline constexpr double kDefaultTruncationSigmas = 3.0;

/// Upper tail mass beyond t of the continuous Gamma density of order n and
/// time constant tau (a Gamma distribution with shape n+1, rate n/tau).
double gamma_tail_mass(int n, double tau, double t);

/// Gamma kernel (nt)^n exp(-nt/tau) / ((n-1)! tau^(n+1)) sampled at multiples
/// of `step`. Sampling stops once the continuous tail mass drops below
/// `mass_cutoff` or after ceil(10 tau / step) taps. Taps sum to one.
DiscreteKernel1D gamma_kernel(int n, double tau, double step = 1.0,
                              double mass_cutoff = kDefaultMassCutoff);

/// Difference of two Gamma kernels, shorter one zero-padded. Zero DC gain.
DiscreteKernel1D temporal_bandpass(int n1, double tau1, int n2, double tau2, double step = 1.0,
                                   double mass_cutoff = kDefaultMassCutoff);

/// (1/lambda) exp(-t/lambda), truncated by tail mass, unit sum.
DiscreteKernel1D exp_kernel(double lambda, double step = 1.0,
                            double mass_cutoff = kDefaultMassCutoff);

/// Normalised 1-D Gaussian over offsets -radius..radius,
/// radius = ceil(truncation_sigmas * sigma).
std::vector<double> gaussian1d(double sigma, double truncation_sigmas = kDefaultTruncationSigmas);

/// Normalised isotropic 2-D Gaussian. Built as the outer product of
/// gaussian1d, which equals the sampled 2-D density renormalised.
DiscreteKernel2D gaussian2d(double sigma, double truncation_sigmas = kDefaultTruncationSigmas);

struct DogSplit {
  DiscreteKernel2D positive_part;
  DiscreteKernel2D negative_part;  // taps <= 0
};

/// Half-wave split of G(sigma2) - G(sigma3) on the union support.
DogSplit dog_split(double sigma2, double sigma3,
                   double truncation_sigmas = kDefaultTruncationSigmas);

/// Second-order lateral inhibition kernel A[g]^+ + B[g]^- with
/// g = G(sigma4) - e G(sigma5) - rho.
DiscreteKernel2D w2_kernel(double sigma4, double sigma5, double e, double rho, double A, double B,
                           double truncation_sigmas = kDefaultTruncationSigmas);

/// Circular difference of Gaussians over direction bins. Offsets run
/// -bins/2 ... bins/2-1 in units of one bin; each Gaussian is normalised over
/// that support before differencing. `origin` marks offset zero.
DiscreteKernel1D w3_kernel(double sigma6, double sigma7, int bins = 8);

/// Tap for a circular bin offset (any integer, wrapped into the support).
double w3_tap(const DiscreteKernel1D& w3, int offset);

}  // namespace stmd
