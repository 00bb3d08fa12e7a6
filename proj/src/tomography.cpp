#include "cvtomo/tomography.hpp"

#include <cmath>

namespace cvtomo {

RefinementConfig RunConfig::refinement() const {
  RefinementConfig rc;
  rc.epsilon_weight = epsilon_weight;
  rc.tail_mass = tail_mass;
  rc.max_depth = max_depth;
  rc.mode = mode;
  rc.condition_shots =
      mode == Mode::sampled ? chernoff_condition_shots(stat_epsilon, fail_prob) : 0;
  rc.seed_lower = seed_lower;
  rc.seed_upper = seed_upper;
  rc.quadrature = quadrature;
  return rc;
}

ReconstructedState::ReconstructedState(Partition partition, double delta,
                                       Mode mode, Eigen::MatrixXcd cells,
                                       ShotMatrix cell_shots)
    : partition_(std::move(partition)),
      delta_(delta),
      mode_(mode),
      cells_(std::move(cells)),
      cell_shots_(std::move(cell_shots)),
      total_shots_(0) {
  const auto n = static_cast<Eigen::Index>(partition_.size());
  if (cells_.rows() != n || cells_.cols() != n) {
    throw std::invalid_argument("ReconstructedState: cell matrix is not NxN");
  }
  if (cell_shots_.rows() != n || cell_shots_.cols() != n) {
    throw std::invalid_argument("ReconstructedState: shot matrix is not NxN");
  }
  total_shots_ = cell_shots_.sum();
}

Complex ReconstructedState::evaluate(double x, double xp) const {
  const std::size_t i = partition_.locate(x);
  if (i == Partition::npos) return {0.0, 0.0};
  const std::size_t j = partition_.locate(xp);
  if (j == Partition::npos) return {0.0, 0.0};
  return cells_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

namespace {

ElementEstimate estimate_with_selection(const DensityKernel& kernel, double x,
                                        double xp, const RegionSelection& sel,
                                        const RunConfig& config,
                                        RandomStream* stream) {
  ElementEstimate est;
  est.x = x;
  est.xp = xp;
  est.r = sel.r;
  est.rp = sel.rp;
  est.epsilon_weight = config.epsilon_weight;
  est.selection = sel;

  CircuitSettings settings;
  settings.x = x;
  settings.xp = xp;
  settings.r = sel.r;
  settings.rp = sel.rp;
  settings.delta = config.delta;

  if (config.mode == Mode::exact) {
    est.value = exact_estimate(kernel, settings, config.quadrature);
    return est;
  }
  if (stream == nullptr) {
    throw std::invalid_argument("estimate_element: sampled mode needs a stream");
  }
  const std::uint64_t shots = chernoff_estimate_shots(
      config.stat_epsilon, config.fail_prob, config.delta, sel.r, sel.rp);
  est.plan = ChernoffPlan{config.stat_epsilon, config.fail_prob, shots};
  const OutcomeDistribution dist_x =
      outcome_distribution(kernel, settings, Axis::sigma_x, config.quadrature);
  const OutcomeDistribution dist_y =
      outcome_distribution(kernel, settings, Axis::sigma_y, config.quadrature);
  const ShotTally tally_x = sample_shots(dist_x, shots, *stream);
  const ShotTally tally_y = sample_shots(dist_y, shots, *stream);
  est.value = estimate_from_tallies(tally_x, tally_y, settings);
  est.shots_used = 2 * shots;
  return est;
}

}  // namespace

ElementEstimate estimate_element(const DensityKernel& kernel, double x,
                                 double xp, const RunConfig& config,
                                 RandomStream* stream) {
  const RegionSelection sel =
      select_region(kernel, x, xp, config.delta, config.epsilon_weight,
                    config.refinement(), stream);
  return estimate_with_selection(kernel, x, xp, sel, config, stream);
}

ElementEstimate estimate_element(const PureState& state, double x, double xp,
                                 const RunConfig& config, RandomStream* stream) {
  return estimate_element(DensityKernel(state), x, xp, config, stream);
}

ReconstructedState reconstruct(const PureState& state, const RunConfig& config) {
  const DensityKernel kernel(state);
  RandomStream partition_stream(config.seed, static_cast<std::uint64_t>(-1));
  const Partition partition = refine_partition(
      kernel, config.refinement(),
      config.mode == Mode::sampled ? &partition_stream : nullptr);

  const auto n = static_cast<Eigen::Index>(partition.size());
  Eigen::MatrixXcd cells(n, n);
  ReconstructedState::ShotMatrix shots = ReconstructedState::ShotMatrix::Zero(n, n);

  std::vector<double> squeezings(partition.size());
  for (std::size_t i = 0; i < partition.size(); ++i) {
    squeezings[i] = squeezing_for_width(partition.cell(i).interval.width(),
                                        config.delta);
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      CircuitSettings settings;
      settings.x = partition.cell(i).interval.center();
      settings.xp = partition.cell(j).interval.center();
      settings.r = squeezings[i];
      settings.rp = squeezings[j];
      settings.delta = config.delta;
      if (config.mode == Mode::exact) {
        cells(i, j) = exact_estimate(kernel, settings, config.quadrature);
        continue;
      }
      const std::uint64_t m = chernoff_estimate_shots(
          config.stat_epsilon, config.fail_prob, config.delta, settings.r,
          settings.rp);
      RandomStream cell_stream(
          config.seed, static_cast<std::uint64_t>(i) * partition.size() +
                           static_cast<std::uint64_t>(j));
      const ShotTally tally_x =
          sample_shots(outcome_distribution(kernel, settings, Axis::sigma_x,
                                            config.quadrature),
                       m, cell_stream);
      const ShotTally tally_y =
          sample_shots(outcome_distribution(kernel, settings, Axis::sigma_y,
                                            config.quadrature),
                       m, cell_stream);
      cells(i, j) = estimate_from_tallies(tally_x, tally_y, settings);
      shots(i, j) = 2 * m;
    }
  }
  return ReconstructedState(partition, config.delta, config.mode,
                            std::move(cells), std::move(shots));
}

FidelityReport fidelity(const ReconstructedState& recon,
                        const std::function<Complex(double)>& psi,
                        const QuadratureSpec& spec) {
  const Partition& partition = recon.partition();
  const auto n = static_cast<Eigen::Index>(partition.size());

  // Interval integrals of psi. For the product kernel rho(x', x) =
  // psi(x') conj(psi(x)), the overlap of cell (i, j) is
  // conj(A_i) A_j, so the double integral never has to be done per cell.
  Eigen::VectorXcd a(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Interval& iv = partition.cell(i).interval;
    a(i) = integrate_line(psi, iv.lower(), iv.upper(), spec);
  }

  FidelityReport report;
  report.epsilon_weight = partition.epsilon_weight();
  report.delta = recon.delta();
  report.contributions =
      recon.cells().array() * (a.conjugate() * a.transpose()).array();
  const Complex overlap = report.contributions.sum();
  report.fidelity = overlap.real();
  report.imag_residue = overlap.imag();
  return report;
}

FidelityReport fidelity(const ReconstructedState& recon, const PureState& state,
                        const QuadratureSpec& spec) {
  FidelityReport report =
      fidelity(recon, [&](double x) { return state.psi(x); }, spec);
  report.state = state.describe();
  return report;
}

}  // namespace cvtomo
