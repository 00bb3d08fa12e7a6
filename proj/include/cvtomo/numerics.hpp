#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace cvtomo {

using Complex = std::complex<double>;

/// Base class for runtime failures of the simulation pipeline (as opposed to
/// precondition violations, which throw std::invalid_argument).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Adaptive quadrature failed to reach the requested tolerance.
struct QuadratureError : Error {
  using Error::Error;
};

/// Policy for the adaptive Gauss-Legendre integrators. Panels are 16-point;
/// an interval is accepted when bisecting it changes the estimate by less
/// than the tolerance (relative to an L1-norm scale of the integrand).
struct QuadratureSpec {
  double relative_tolerance = 1e-10;
  int max_subdivisions = 24;  // bisection levels below the original interval
};

/// Deterministic pseudo-random stream. A given (seed, stream_index) pair
/// produces the same sequence on every platform and run; substreams let
/// independent consumers (e.g. mesh cells) draw without interleaving.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_index = 0);

  /// New stream with the same seed and the given index. Does not disturb
  /// this stream.
  RandomStream substream(std::uint64_t index) const;

  /// Next uniform draw in [0, 1), 53-bit resolution. Advances the stream.
  double uniform();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
};

/// Physicists' Hermite polynomial H_n(x) via the three-term recurrence
/// H_{k+1} = 2x H_k - 2k H_{k-1}.
double hermite_eval(int n, double x);

/// Adaptive composite 16-point Gauss-Legendre integral of f over [a, b].
/// Requires a <= b. Throws QuadratureError if the tolerance is not met
/// within spec.max_subdivisions bisection levels.
Complex integrate_line(const std::function<Complex(double)>& f, double a,
                       double b, const QuadratureSpec& spec = {});

/// Tensor-product version of integrate_line: integrates f(x, y) over
/// [x_lo, x_hi] x [y_lo, y_hi]. Same tolerance contract per axis.
Complex integrate_rect(const std::function<Complex(double, double)>& f,
                       double x_lo, double x_hi, double y_lo, double y_hi,
                       const QuadratureSpec& spec = {});

/// Draws index k with probability probs[k]. Entries down to -1e-12 are
/// clamped to zero (quadrature round-off); the sum must be within 1e-9 of 1
/// or std::invalid_argument is thrown. Advances the stream.
std::size_t sample_index(std::span<const double> probs, RandomStream& stream);

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre recurrence.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre_rule(int n);

}  // namespace cvtomo
