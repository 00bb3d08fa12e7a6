#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cvtomo/protocol.hpp"

namespace cvtomo {

/// Support search or region selection could not satisfy its condition.
struct MeshError : Error {
  using Error::Error;
};

enum class Mode { exact, sampled };

/// Dyadic subinterval of a root interval: width = root_width / 2^depth,
/// position = index within that level. Endpoints are always derived from the
/// root by exact binary fractions, so neighbours at any mix of depths share
/// endpoints bit-for-bit and a partition tiles without gaps.
class Interval {
 public:
  Interval(double root_lower, double root_width, int depth, std::uint64_t index);
  static Interval root(double lower, double upper);

  double width() const;   // root_width / 2^depth, exact
  double lower() const;   // root_lower + index * width
  double upper() const;   // root_lower + (index + 1) * width
  double center() const;  // root_lower + (index + 1/2) * width

  int depth() const { return depth_; }
  std::uint64_t index() const { return index_; }

  Interval left_child() const;
  Interval right_child() const;

  /// Left-closed, right-open, matching partition cell ownership.
  bool contains(double x) const { return lower() <= x && x < upper(); }

 private:
  double root_lower_;
  double root_width_;
  int depth_;
  std::uint64_t index_;
};

/// Rectangle row x col in the (x, x') plane.
struct Region {
  Interval row;
  Interval col;
};

/// Interval plus the weight value that decided its refinement: the exact
/// diagonal integral in exact mode, twice the empirical click frequency in
/// sampled mode. over_threshold marks cells that still violated the weight
/// condition when max_depth stopped the recursion.
struct WeightedInterval {
  Interval interval;
  double weight;
  bool over_threshold = false;
};

/// Ordered dyadic tiling of a support interval in which every unflagged cell
/// has diagonal weight <= epsilon_weight.
class Partition {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Partition(Interval initial, double epsilon_weight,
            std::vector<WeightedInterval> cells);

  const Interval& initial_interval() const { return initial_; }
  double epsilon_weight() const { return epsilon_weight_; }
  std::span<const WeightedInterval> cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  const WeightedInterval& cell(std::size_t i) const { return cells_[i]; }

  /// Index of the cell owning x (left-closed/right-open, rightmost cell
  /// closed), or npos outside the initial interval.
  std::size_t locate(double x) const;

  std::size_t flagged_count() const;
  double total_weight() const;

 private:
  Interval initial_;
  double epsilon_weight_;
  std::vector<WeightedInterval> cells_;
};

struct RefinementConfig {
  double epsilon_weight = 0.01;
  double tail_mass = 1e-6;
  int max_depth = 40;
  Mode mode = Mode::exact;
  std::uint64_t condition_shots = 0;  // per weight test in sampled mode
  // Seed for the support search. [-13/8, 13/8] makes the doubled supports
  // land on the meshes that reproduce the reference tables.
  double seed_lower = -1.625;
  double seed_upper = 1.625;
  QuadratureSpec quadrature{};
};

/// Smallest power-of-two dilation of the seed (about its center) whose
/// diagonal weight reaches 1 - tail_mass. Fails after 60 doublings.
Interval find_support_interval(const DensityKernel& kernel, double tail_mass,
                               const Interval& seed,
                               const QuadratureSpec& spec = {});

/// Builds the support interval from config.seed_* and bisects until every
/// cell passes the weight condition or max_depth is hit (such cells are
/// flagged, not dropped). Sampled mode tests each cell with
/// config.condition_shots Bernoulli draws from the stream.
Partition refine_partition(const DensityKernel& kernel,
                           const RefinementConfig& config,
                           RandomStream* stream = nullptr);

/// r such that e^{-r} * delta = width, i.e. r = ln(delta / width).
/// Negative for cells wider than the detector window.
double squeezing_for_width(double width, double delta);

struct BranchProbe {
  Branch branch;
  int halvings;  // r = halvings * ln 2
  double r;
  double value;  // branch probability (exact) or empirical frequency (sampled)
};

struct RegionSelection {
  double r = 0.0;
  double rp = 0.0;
  std::vector<BranchProbe> probes;
};

/// Starts both branches at r = 0 and halves each window (r += ln 2,
/// independently per branch) until the branch click probability is at most
/// epsilon/2. Exact mode compares the integral; sampled mode compares the
/// empirical frequency over config.condition_shots draws.
RegionSelection select_region(const DensityKernel& kernel, double x, double xp,
                              double delta, double epsilon,
                              const RefinementConfig& config,
                              RandomStream* stream = nullptr);

/// Region integral helper for the induced cell bound |II rho| <= epsilon.
Complex integrate_rect(const std::function<Complex(double, double)>& f,
                       const Region& rect, const QuadratureSpec& spec = {});

}  // namespace cvtomo
