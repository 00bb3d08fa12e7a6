#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "cvtomo/numerics.hpp"

namespace cvtomo {

/// Energy eigenstate of the harmonic oscillator,
/// psi_n(x) = C_n e^{-x^2/2} H_n(x) with C_n = (2^n n! sqrt(pi))^{-1/2}.
/// Dimensionless units (hbar = m = omega = 1) throughout.
struct OscillatorState {
  int level = 0;
  double log_normalization = 0.0;  // log C_n, via lgamma so n <= 30 stays stable
};

/// Squeezed coherent state,
/// psi(x) = C exp[-(x - <x>)^2 / (2 sigma^2) + i <p> x], C = (pi sigma^2)^{-1/4}.
struct SqueezedCoherentState {
  double mean_x = 0.0;
  double mean_p = 0.0;
  double sigma = 1.0;
  double normalization = 0.0;
};

/// One of the shipped analytic pure states. Normalization is verified by
/// quadrature at construction (within 1e-8) and the state is immutable
/// afterwards.
class PureState {
 public:
  static PureState oscillator(int n);
  static PureState squeezed(double mean_x, double mean_p, double sigma);

  /// Parses "oscillator:<n>" or "squeezed:<mean_x>,<mean_p>,<sigma>".
  static PureState parse(const std::string& descriptor);

  Complex psi(double x) const;

  /// Half-width of an interval about center() that holds all but ~1e-12 of
  /// the probability mass; used for normalization checks and test grids.
  double support_half_width() const;
  double center() const;

  const OscillatorState* as_oscillator() const;
  const SqueezedCoherentState* as_squeezed() const;
  std::string describe() const;

 private:
  explicit PureState(std::variant<OscillatorState, SqueezedCoherentState> f)
      : family_(std::move(f)) {}
  std::variant<OscillatorState, SqueezedCoherentState> family_;
};

/// Position-representation kernel rho(x, x') = psi(x) conj(psi(x')).
/// Hermitian by construction. A kernel built from a raw function (no source
/// state) is accepted everywhere downstream; only fidelity needs the
/// wavefunction itself.
class DensityKernel {
 public:
  explicit DensityKernel(PureState state);
  explicit DensityKernel(std::function<Complex(double, double)> rho);

  Complex operator()(double x, double xp) const { return rho_(x, xp); }
  const std::optional<PureState>& source() const { return source_; }

 private:
  std::optional<PureState> source_;
  std::function<Complex(double, double)> rho_;
};

Complex density(const PureState& state, double x, double xp);

/// Probability mass of the diagonal over [a, b]: integral of rho(y, y) dy.
double diagonal_weight(const DensityKernel& kernel, double a, double b,
                       const QuadratureSpec& spec = {});
double diagonal_weight(const PureState& state, double a, double b,
                       const QuadratureSpec& spec = {});

}  // namespace cvtomo
