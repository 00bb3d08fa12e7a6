#include "cvtomo/protocol.hpp"

#include <array>
#include <cmath>

namespace cvtomo {

namespace {

void check_settings(const CircuitSettings& s) {
  if (!(s.delta > 0.0)) {
    throw std::invalid_argument("CircuitSettings: delta must be > 0");
  }
  if (!std::isfinite(s.r) || !std::isfinite(s.rp)) {
    throw std::invalid_argument("CircuitSettings: r, rp must be finite");
  }
}

Complex window_integral(const DensityKernel& kernel, const CircuitSettings& s,
                        const QuadratureSpec& spec) {
  const double scale_x = std::exp(-s.r);
  const double scale_xp = std::exp(-s.rp);
  return integrate_line(
      [&](double y) {
        return kernel(scale_x * y + s.x, scale_xp * y + s.xp);
      },
      -0.5 * s.delta, 0.5 * s.delta, spec);
}

}  // namespace

Complex coherence_integral(const DensityKernel& kernel,
                           const CircuitSettings& s,
                           const QuadratureSpec& spec) {
  check_settings(s);
  return std::exp(-0.5 * (s.r + s.rp)) * window_integral(kernel, s, spec);
}

double branch_probability(const DensityKernel& kernel, const CircuitSettings& s,
                          Branch branch, const QuadratureSpec& spec) {
  check_settings(s);
  const double shift = branch == Branch::control0 ? s.x : s.xp;
  const double squeeze = branch == Branch::control0 ? s.r : s.rp;
  const double scale = std::exp(-squeeze);
  const Complex integral = integrate_line(
      [&](double y) {
        const double u = scale * y + shift;
        return kernel(u, u);
      },
      -0.5 * s.delta, 0.5 * s.delta, spec);
  return 0.5 * scale * integral.real();
}

OutcomeDistribution outcome_distribution(const DensityKernel& kernel,
                                         const CircuitSettings& s, Axis axis,
                                         const QuadratureSpec& spec) {
  check_settings(s);
  const double p0 = branch_probability(kernel, s, Branch::control0, spec);
  const double p1 = branch_probability(kernel, s, Branch::control1, spec);
  const Complex c = coherence_integral(kernel, s, spec);
  const double a = axis == Axis::sigma_x ? c.real() : c.imag();

  OutcomeDistribution dist;
  dist.axis = axis;
  dist.p_plus = 0.5 * (p0 + p1 + a);
  dist.p_minus = 0.5 * (p0 + p1 - a);
  dist.p_noclick = 1.0 - p0 - p1;
  for (double p : {dist.p_plus, dist.p_minus, dist.p_noclick}) {
    if (p < -1e-9) {
      throw ProtocolError("outcome_distribution: probability " +
                          std::to_string(p) + " < -1e-9");
    }
  }
  dist.p_plus = std::max(dist.p_plus, 0.0);
  dist.p_minus = std::max(dist.p_minus, 0.0);
  dist.p_noclick = std::max(dist.p_noclick, 0.0);
  return dist;
}

ShotTally sample_shots(const OutcomeDistribution& dist, std::uint64_t shots,
                       RandomStream& stream) {
  if (shots < 1) throw std::invalid_argument("sample_shots: shots must be >= 1");
  const std::array<double, 3> probs{dist.p_noclick, dist.p_plus, dist.p_minus};
  ShotTally tally;
  tally.axis = dist.axis;
  for (std::uint64_t m = 0; m < shots; ++m) {
    switch (sample_index(probs, stream)) {
      case 0: ++tally.n_noclick; break;
      case 1: ++tally.n_plus; break;
      default: ++tally.n_minus; break;
    }
  }
  return tally;
}

Complex estimate_from_tallies(const ShotTally& tally_x, const ShotTally& tally_y,
                              const CircuitSettings& s) {
  check_settings(s);
  if (tally_x.axis != Axis::sigma_x || tally_y.axis != Axis::sigma_y) {
    throw ProtocolError("estimate_from_tallies: tallies have the wrong axes");
  }
  if (tally_x.total() == 0 || tally_y.total() == 0) {
    throw std::invalid_argument("estimate_from_tallies: empty tally");
  }
  const auto mean = [](const ShotTally& t) {
    return (static_cast<double>(t.n_plus) - static_cast<double>(t.n_minus)) /
           static_cast<double>(t.total());
  };
  const double prefactor = std::exp(0.5 * (s.r + s.rp)) / s.delta;
  return prefactor * Complex(mean(tally_x), mean(tally_y));
}

Complex exact_estimate(const DensityKernel& kernel, const CircuitSettings& s,
                       const QuadratureSpec& spec) {
  check_settings(s);
  return window_integral(kernel, s, spec) / s.delta;
}

std::uint64_t chernoff_condition_shots(double epsilon, double fail_prob) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (!(fail_prob > 0.0 && fail_prob < 1.0)) {
    throw std::invalid_argument("fail_prob must be in (0, 1)");
  }
  const double bound = std::log(2.0 / fail_prob) / (2.0 * epsilon * epsilon);
  return static_cast<std::uint64_t>(std::ceil(bound));
}

std::uint64_t chernoff_estimate_shots(double epsilon, double fail_prob,
                                      double delta, double r, double rp) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (!(fail_prob > 0.0 && fail_prob < 1.0)) {
    throw std::invalid_argument("fail_prob must be in (0, 1)");
  }
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
  const double bound = 2.0 * std::log(2.0 / fail_prob) /
                       (epsilon * epsilon * delta * delta * std::exp(-(r + rp)));
  return static_cast<std::uint64_t>(std::ceil(bound));
}

}  // namespace cvtomo
