#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "cvtomo/mesh.hpp"

namespace cvtomo {

/// Everything a protocol run needs besides the state itself. epsilon_weight
/// sizes regions and mesh cells; stat_epsilon and fail_prob size the shot
/// budgets in sampled mode.
struct RunConfig {
  double delta = 0.1;
  double epsilon_weight = 0.01;
  Mode mode = Mode::exact;
  double stat_epsilon = 0.1;
  double fail_prob = 0.05;
  std::uint64_t seed = 0;
  double tail_mass = 1e-6;
  double seed_lower = -1.625;
  double seed_upper = 1.625;
  int max_depth = 40;
  QuadratureSpec quadrature{};

  RefinementConfig refinement() const;
};

struct ElementEstimate {
  double x = 0.0;
  double xp = 0.0;
  Complex value{0.0, 0.0};
  double r = 0.0;
  double rp = 0.0;
  std::uint64_t shots_used = 0;  // 2M in sampled mode (M per axis), 0 exact
  double epsilon_weight = 0.0;
  RegionSelection selection;
  std::optional<ChernoffPlan> plan;  // per-axis plan, sampled mode only
};

/// Piecewise-constant estimate of rho over the partition's cell grid.
/// cells(i, j) is the estimate for row interval i and column interval j.
class ReconstructedState {
 public:
  using ShotMatrix =
      Eigen::Matrix<std::uint64_t, Eigen::Dynamic, Eigen::Dynamic>;

  ReconstructedState(Partition partition, double delta, Mode mode,
                     Eigen::MatrixXcd cells, ShotMatrix cell_shots);

  const Partition& partition() const { return partition_; }
  double delta() const { return delta_; }
  Mode mode() const { return mode_; }
  const Eigen::MatrixXcd& cells() const { return cells_; }
  const ShotMatrix& cell_shots() const { return cell_shots_; }
  std::uint64_t total_shots() const { return total_shots_; }

  /// Constant cell value at (x, xp); 0 outside the support square.
  Complex evaluate(double x, double xp) const;

 private:
  Partition partition_;
  double delta_;
  Mode mode_;
  Eigen::MatrixXcd cells_;
  ShotMatrix cell_shots_;
  std::uint64_t total_shots_;
};

struct FidelityReport {
  double fidelity = 0.0;
  double imag_residue = 0.0;  // discarded imaginary part of the overlap sum
  std::string state;
  double epsilon_weight = 0.0;
  double delta = 0.0;
  Eigen::MatrixXcd contributions;  // per-cell overlap terms, sums to fidelity
};

/// Full single-element protocol: region selection, then either the exact
/// window integral or Chernoff-sized shot sampling on both axes.
ElementEstimate estimate_element(const DensityKernel& kernel, double x,
                                 double xp, const RunConfig& config,
                                 RandomStream* stream = nullptr);
ElementEstimate estimate_element(const PureState& state, double x, double xp,
                                 const RunConfig& config,
                                 RandomStream* stream = nullptr);

/// Full reconstruction: one partition, then one element estimate per cell
/// pair with the squeezing matched to the cell widths. Sampled mode draws
/// cell (i, j) from substream i*N + j, so results are schedule-independent;
/// the partition's own condition tests use the reserved substream ~0.
ReconstructedState reconstruct(const PureState& state, const RunConfig& config);

/// Overlap <psi| rho_est |psi> as the per-cell sum of the estimate times the
/// kernel integral over the (transposed) cell, which factors through the
/// interval integrals of psi for a product kernel.
FidelityReport fidelity(const ReconstructedState& recon, const PureState& state,
                        const QuadratureSpec& spec = {});
FidelityReport fidelity(const ReconstructedState& recon,
                        const std::function<Complex(double)>& psi,
                        const QuadratureSpec& spec = {});

}  // namespace cvtomo
