#include "cvtomo/states.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace cvtomo {

namespace {

void check_normalized(const PureState& state) {
  const double half = state.support_half_width();
  const double c = state.center();
  const double mass = integrate_line(
                          [&](double x) {
                            const Complex v = state.psi(x);
                            return Complex(std::norm(v), 0.0);
                          },
                          c - half, c + half)
                          .real();
  if (std::abs(mass - 1.0) > 1e-8) {
    throw Error("PureState: normalization check failed, mass = " +
                std::to_string(mass));
  }
}

}  // namespace

PureState PureState::oscillator(int n) {
  if (n < 0) throw std::invalid_argument("oscillator level must be >= 0");
  OscillatorState s;
  s.level = n;
  s.log_normalization = -0.5 * (n * std::numbers::ln2 + std::lgamma(n + 1.0) +
                                0.5 * std::log(std::numbers::pi));
  PureState state{std::variant<OscillatorState, SqueezedCoherentState>{s}};
  check_normalized(state);
  return state;
}

PureState PureState::squeezed(double mean_x, double mean_p, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
  SqueezedCoherentState s;
  s.mean_x = mean_x;
  s.mean_p = mean_p;
  s.sigma = sigma;
  s.normalization = std::pow(std::numbers::pi * sigma * sigma, -0.25);
  PureState state{std::variant<OscillatorState, SqueezedCoherentState>{s}};
  check_normalized(state);
  return state;
}

PureState PureState::parse(const std::string& descriptor) {
  const auto colon = descriptor.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("state descriptor needs the form kind:params");
  }
  const std::string kind = descriptor.substr(0, colon);
  const std::string params = descriptor.substr(colon + 1);
  if (kind == "oscillator") {
    std::size_t used = 0;
    const int n = std::stoi(params, &used);
    if (used != params.size()) {
      throw std::invalid_argument("oscillator descriptor: expected oscillator:<n>");
    }
    return oscillator(n);
  }
  if (kind == "squeezed") {
    std::istringstream in(params);
    double mx = 0, mp = 0, sigma = 0;
    char c1 = 0, c2 = 0;
    if (!(in >> mx >> c1 >> mp >> c2 >> sigma) || c1 != ',' || c2 != ',' ||
        !in.eof()) {
      throw std::invalid_argument(
          "squeezed descriptor: expected squeezed:<mean_x>,<mean_p>,<sigma>");
    }
    return squeezed(mx, mp, sigma);
  }
  throw std::invalid_argument("unknown state kind: " + kind);
}

Complex PureState::psi(double x) const {
  if (const auto* osc = std::get_if<OscillatorState>(&family_)) {
    const double h = hermite_eval(osc->level, x);
    return {std::exp(osc->log_normalization - 0.5 * x * x) * h, 0.0};
  }
  const auto& sq = std::get<SqueezedCoherentState>(family_);
  const double d = x - sq.mean_x;
  const double amplitude =
      sq.normalization * std::exp(-d * d / (2.0 * sq.sigma * sq.sigma));
  return std::polar(amplitude, sq.mean_p * x);
}

double PureState::support_half_width() const {
  if (const auto* osc = std::get_if<OscillatorState>(&family_)) {
    // classical turning point sqrt(2n+1) plus a Gaussian tail margin
    return std::sqrt(2.0 * osc->level + 1.0) + 8.0;
  }
  const auto& sq = std::get<SqueezedCoherentState>(family_);
  return 8.0 * std::max(sq.sigma, 1.0);
}

double PureState::center() const {
  if (const auto* sq = std::get_if<SqueezedCoherentState>(&family_)) {
    return sq->mean_x;
  }
  return 0.0;
}

const OscillatorState* PureState::as_oscillator() const {
  return std::get_if<OscillatorState>(&family_);
}

const SqueezedCoherentState* PureState::as_squeezed() const {
  return std::get_if<SqueezedCoherentState>(&family_);
}

namespace {

std::string format_double(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

}  // namespace

std::string PureState::describe() const {
  if (const auto* osc = as_oscillator()) {
    return "oscillator:" + std::to_string(osc->level);
  }
  const auto* sq = as_squeezed();
  return "squeezed:" + format_double(sq->mean_x) + "," +
         format_double(sq->mean_p) + "," + format_double(sq->sigma);
}

DensityKernel::DensityKernel(PureState state)
    : source_(std::move(state)),
      rho_([s = *source_](double x, double xp) {
        return s.psi(x) * std::conj(s.psi(xp));
      }) {}

DensityKernel::DensityKernel(std::function<Complex(double, double)> rho)
    : rho_(std::move(rho)) {
  if (!rho_) throw std::invalid_argument("DensityKernel: null function");
}

Complex density(const PureState& state, double x, double xp) {
  return state.psi(x) * std::conj(state.psi(xp));
}

double diagonal_weight(const DensityKernel& kernel, double a, double b,
                       const QuadratureSpec& spec) {
  if (!(a <= b)) throw std::invalid_argument("diagonal_weight: requires a <= b");
  return integrate_line([&](double y) { return kernel(y, y); }, a, b, spec)
      .real();
}

double diagonal_weight(const PureState& state, double a, double b,
                       const QuadratureSpec& spec) {
  if (!(a <= b)) throw std::invalid_argument("diagonal_weight: requires a <= b");
  return integrate_line(
             [&](double y) {
               return Complex(std::norm(state.psi(y)), 0.0);
             },
             a, b, spec)
      .real();
}

}  // namespace cvtomo
