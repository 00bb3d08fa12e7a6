#include "cvtomo/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cvtomo {

Interval::Interval(double root_lower, double root_width, int depth,
                   std::uint64_t index)
    : root_lower_(root_lower),
      root_width_(root_width),
      depth_(depth),
      index_(index) {
  if (!(root_width > 0.0)) {
    throw std::invalid_argument("Interval: root width must be > 0");
  }
  if (depth < 0 || depth > 62) {
    throw std::invalid_argument("Interval: depth out of range");
  }
  if (index >= (std::uint64_t{1} << depth)) {
    throw std::invalid_argument("Interval: index out of range for depth");
  }
}

Interval Interval::root(double lower, double upper) {
  if (!(lower < upper)) {
    throw std::invalid_argument("Interval::root: requires lower < upper");
  }
  return Interval(lower, upper - lower, 0, 0);
}

double Interval::width() const { return std::ldexp(root_width_, -depth_); }

double Interval::lower() const {
  return root_lower_ + static_cast<double>(index_) * width();
}

double Interval::upper() const {
  return root_lower_ + static_cast<double>(index_ + 1) * width();
}

double Interval::center() const {
  return root_lower_ + (static_cast<double>(index_) + 0.5) * width();
}

Interval Interval::left_child() const {
  return Interval(root_lower_, root_width_, depth_ + 1, 2 * index_);
}

Interval Interval::right_child() const {
  return Interval(root_lower_, root_width_, depth_ + 1, 2 * index_ + 1);
}

Partition::Partition(Interval initial, double epsilon_weight,
                     std::vector<WeightedInterval> cells)
    : initial_(initial), epsilon_weight_(epsilon_weight), cells_(std::move(cells)) {
  if (cells_.empty()) throw std::invalid_argument("Partition: no cells");
  if (!(epsilon_weight > 0.0 && epsilon_weight <= 1.0)) {
    throw std::invalid_argument("Partition: epsilon_weight must be in (0, 1]");
  }
}

std::size_t Partition::locate(double x) const {
  if (x < initial_.lower() || x > initial_.upper()) return npos;
  if (x == initial_.upper()) return cells_.size() - 1;  // rightmost cell closed
  // first cell whose lower edge exceeds x, minus one
  auto it = std::upper_bound(
      cells_.begin(), cells_.end(), x,
      [](double v, const WeightedInterval& c) { return v < c.interval.lower(); });
  return static_cast<std::size_t>(std::distance(cells_.begin(), it)) - 1;
}

std::size_t Partition::flagged_count() const {
  return static_cast<std::size_t>(
      std::count_if(cells_.begin(), cells_.end(),
                    [](const WeightedInterval& c) { return c.over_threshold; }));
}

double Partition::total_weight() const {
  double sum = 0.0;
  for (const auto& c : cells_) sum += c.weight;
  return sum;
}

Interval find_support_interval(const DensityKernel& kernel, double tail_mass,
                               const Interval& seed,
                               const QuadratureSpec& spec) {
  if (!(tail_mass > 0.0 && tail_mass < 0.1)) {
    throw std::invalid_argument("find_support_interval: tail_mass must be in (0, 0.1)");
  }
  if (diagonal_weight(kernel, seed.lower(), seed.upper(), spec) >=
      1.0 - tail_mass) {
    return seed;
  }
  const double center = seed.center();
  double half = 0.5 * (seed.upper() - seed.lower());
  for (int k = 1; k <= 60; ++k) {
    half *= 2.0;
    const Interval candidate = Interval::root(center - half, center + half);
    if (diagonal_weight(kernel, candidate.lower(), candidate.upper(), spec) >=
        1.0 - tail_mass) {
      return candidate;
    }
  }
  throw MeshError("find_support_interval: mass condition unmet after 60 doublings");
}

namespace {

void check_refinement_config(const RefinementConfig& config) {
  if (!(config.epsilon_weight > 0.0 && config.epsilon_weight <= 1.0)) {
    throw std::invalid_argument("RefinementConfig: epsilon_weight must be in (0, 1]");
  }
  if (!(config.tail_mass > 0.0 && config.tail_mass < 0.1)) {
    throw std::invalid_argument("RefinementConfig: tail_mass must be in (0, 0.1)");
  }
  if (config.max_depth < 1) {
    throw std::invalid_argument("RefinementConfig: max_depth must be >= 1");
  }
  if (config.mode == Mode::sampled && config.condition_shots < 1) {
    throw std::invalid_argument(
        "RefinementConfig: sampled mode needs condition_shots >= 1");
  }
}

/// Weight value used for refinement decisions. Sampled mode measures the
/// interval as the experiment would: Bernoulli clicks at p = weight / 2
/// (the branch-0 click probability for a window matched to the interval,
/// independent of delta by the change of variables u = e^{-r} y + x).
double measured_weight(const DensityKernel& kernel, const Interval& iv,
                       const RefinementConfig& config, RandomStream* stream) {
  const double exact = diagonal_weight(kernel, iv.lower(), iv.upper(),
                                       config.quadrature);
  if (config.mode == Mode::exact) return exact;
  if (stream == nullptr) {
    throw std::invalid_argument("refine_partition: sampled mode needs a stream");
  }
  const double p_click = std::clamp(0.5 * exact, 0.0, 1.0);
  const double probs[2] = {1.0 - p_click, p_click};
  std::uint64_t clicks = 0;
  for (std::uint64_t i = 0; i < config.condition_shots; ++i) {
    clicks += sample_index(probs, *stream);
  }
  return 2.0 * static_cast<double>(clicks) /
         static_cast<double>(config.condition_shots);
}

}  // namespace

Partition refine_partition(const DensityKernel& kernel,
                           const RefinementConfig& config,
                           RandomStream* stream) {
  check_refinement_config(config);
  const Interval seed = Interval::root(config.seed_lower, config.seed_upper);
  const Interval support =
      find_support_interval(kernel, config.tail_mass, seed, config.quadrature);

  std::vector<WeightedInterval> cells;
  const std::function<void(const Interval&)> visit = [&](const Interval& iv) {
    const double w = measured_weight(kernel, iv, config, stream);
    if (w <= config.epsilon_weight) {
      cells.push_back({iv, w, false});
      return;
    }
    if (iv.depth() >= config.max_depth) {
      cells.push_back({iv, w, true});
      return;
    }
    visit(iv.left_child());
    visit(iv.right_child());
  };
  visit(support);
  return Partition(support, config.epsilon_weight, std::move(cells));
}

double squeezing_for_width(double width, double delta) {
  if (!(width > 0.0)) throw std::invalid_argument("squeezing_for_width: width must be > 0");
  if (!(delta > 0.0)) throw std::invalid_argument("squeezing_for_width: delta must be > 0");
  return std::log(delta / width);
}

RegionSelection select_region(const DensityKernel& kernel, double x, double xp,
                              double delta, double epsilon,
                              const RefinementConfig& config,
                              RandomStream* stream) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("select_region: epsilon must be in (0, 1)");
  }
  if (!(delta > 0.0)) {
    throw std::invalid_argument("select_region: delta must be > 0");
  }
  if (config.mode == Mode::sampled &&
      (stream == nullptr || config.condition_shots < 1)) {
    throw std::invalid_argument(
        "select_region: sampled mode needs a stream and condition_shots >= 1");
  }

  RegionSelection selection;
  const auto probe = [&](Branch branch, int halvings) {
    CircuitSettings s;
    s.x = x;
    s.xp = xp;
    s.delta = delta;
    const double r = static_cast<double>(halvings) * std::numbers::ln2;
    if (branch == Branch::control0) s.r = r; else s.rp = r;
    const double p = branch_probability(kernel, s, branch, config.quadrature);
    double value = p;
    if (config.mode == Mode::sampled) {
      const double p_click = std::clamp(p, 0.0, 1.0);
      const double probs[2] = {1.0 - p_click, p_click};
      std::uint64_t clicks = 0;
      for (std::uint64_t i = 0; i < config.condition_shots; ++i) {
        clicks += sample_index(probs, *stream);
      }
      value = static_cast<double>(clicks) /
              static_cast<double>(config.condition_shots);
    }
    selection.probes.push_back({branch, halvings, r, value});
    return value;
  };

  const auto settle = [&](Branch branch) {
    for (int k = 0; k <= config.max_depth; ++k) {
      if (probe(branch, k) <= 0.5 * epsilon) {
        return static_cast<double>(k) * std::numbers::ln2;
      }
    }
    throw MeshError(std::string("select_region: branch ") +
                    (branch == Branch::control0 ? "0" : "1") +
                    " still violates the weight condition at max_depth");
  };

  selection.r = settle(Branch::control0);
  selection.rp = settle(Branch::control1);
  return selection;
}

Complex integrate_rect(const std::function<Complex(double, double)>& f,
                       const Region& rect, const QuadratureSpec& spec) {
  return integrate_rect(f, rect.row.lower(), rect.row.upper(),
                        rect.col.lower(), rect.col.upper(), spec);
}

}  // namespace cvtomo
