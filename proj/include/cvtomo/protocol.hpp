#pragma once

#include <cstdint>

#include "cvtomo/states.hpp"

namespace cvtomo {

/// A probability came out negative beyond round-off, or tallies are
/// inconsistent with their settings: a modeling bug, not a user error.
struct ProtocolError : Error {
  using Error::Error;
};

/// One configuration of the measurement circuit: anticontrolled translation
/// and squeezing (x, r), controlled translation and squeezing (xp, rp), and
/// the detector window width delta. Negative r (anti-squeezing) is valid:
/// full reconstruction needs windows wider than delta.
struct CircuitSettings {
  double x = 0.0;
  double xp = 0.0;
  double r = 0.0;
  double rp = 0.0;
  double delta = 0.1;
};

enum class Axis { sigma_x, sigma_y };

/// Ancilla branch selected by measuring the control qubit.
enum class Branch { control0, control1 };

/// Probabilities of the three shot outcomes for one axis choice:
/// no detector click (ancilla ignored), click with ancilla +1, click with -1.
struct OutcomeDistribution {
  Axis axis = Axis::sigma_x;
  double p_noclick = 0.0;
  double p_plus = 0.0;
  double p_minus = 0.0;
};

struct ShotTally {
  Axis axis = Axis::sigma_x;
  std::uint64_t n_plus = 0;
  std::uint64_t n_minus = 0;
  std::uint64_t n_noclick = 0;
  std::uint64_t total() const { return n_plus + n_minus + n_noclick; }
};

/// Shot budget from a Chernoff bound: uncertainty target epsilon at failure
/// probability fail_prob needs at least `shots` runs.
struct ChernoffPlan {
  double epsilon = 0.0;
  double fail_prob = 0.0;
  std::uint64_t shots = 0;
};

/// c = e^{-(r+rp)/2} * integral_{-delta/2}^{delta/2} rho(e^{-r} y + x,
/// e^{-rp} y + xp) dy. Re c and Im c are the expectations of the windowed
/// sigma_x and sigma_y observables on the post-circuit state.
Complex coherence_integral(const DensityKernel& kernel,
                           const CircuitSettings& s,
                           const QuadratureSpec& spec = {});

/// Probability of a detector click with the ancilla projected onto |0> (the
/// (x, r) branch) or |1> (the (xp, rp) branch).
double branch_probability(const DensityKernel& kernel, const CircuitSettings& s,
                          Branch branch, const QuadratureSpec& spec = {});

/// Full three-outcome distribution for one axis.
OutcomeDistribution outcome_distribution(const DensityKernel& kernel,
                                         const CircuitSettings& s, Axis axis,
                                         const QuadratureSpec& spec = {});

/// M independent categorical draws, tallied. Outcome order per draw is
/// (no-click, +1, -1); fixed so that seeded runs reproduce bit-exactly.
ShotTally sample_shots(const OutcomeDistribution& dist, std::uint64_t shots,
                       RandomStream& stream);

/// Inverts the measured means back to the density-matrix element:
/// rho_est = (e^{(r+rp)/2} / delta) [ (n+ - n-)/M |_x + i (n+ - n-)/M |_y ].
/// No-click shots count as 0 in the mean, so M is the full shot count.
Complex estimate_from_tallies(const ShotTally& tally_x, const ShotTally& tally_y,
                              const CircuitSettings& s);

/// Quadrature version of the same estimator: (1/delta) * integral of rho
/// along the window diagonal. This is what sampling converges to.
Complex exact_estimate(const DensityKernel& kernel, const CircuitSettings& s,
                       const QuadratureSpec& spec = {});

/// Shots for one branch-condition test (two outcomes):
/// ceil( ln(2/p) / (2 epsilon^2) ).
std::uint64_t chernoff_condition_shots(double epsilon, double fail_prob);

/// Shots per axis for one element estimate (three outcomes):
/// ceil( 2 ln(2/p) / (epsilon^2 delta^2 e^{-(r+rp)}) ).
std::uint64_t chernoff_estimate_shots(double epsilon, double fail_prob,
                                      double delta, double r, double rp);

}  // namespace cvtomo
