#include "cvtomo/serialize.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace cvtomo {

std::string format_shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

nlohmann::json to_json(const Partition& partition) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : partition.cells()) {
    cells.push_back({{"center", c.interval.center()},
                     {"width", c.interval.width()},
                     {"weight", c.weight}});
  }
  const Interval& root = partition.initial_interval();
  return {{"initial", {{"center", root.center()}, {"width", root.width()}}},
          {"epsilon", partition.epsilon_weight()},
          {"cells", std::move(cells)}};
}

Partition partition_from_json(const nlohmann::json& j) {
  const double root_center = j.at("initial").at("center").get<double>();
  const double root_width = j.at("initial").at("width").get<double>();
  const double root_lower = root_center - 0.5 * root_width;
  std::vector<WeightedInterval> cells;
  for (const auto& c : j.at("cells")) {
    const double width = c.at("width").get<double>();
    const double center = c.at("center").get<double>();
    const int depth =
        static_cast<int>(std::lround(std::log2(root_width / width)));
    const auto index = static_cast<std::uint64_t>(
        std::llround((center - root_lower) / width - 0.5));
    cells.push_back({Interval(root_lower, root_width, depth, index),
                     c.at("weight").get<double>(), false});
  }
  return Partition(Interval::root(root_lower, root_lower + root_width),
                   j.at("epsilon").get<double>(), std::move(cells));
}

nlohmann::json to_json(const ReconstructedState& recon) {
  const Partition& partition = recon.partition();
  nlohmann::json cells = nlohmann::json::array();
  const auto n = static_cast<Eigen::Index>(partition.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Complex v = recon.cells()(i, j);
      cells.push_back({{"i", i},
                       {"j", j},
                       {"x", partition.cell(i).interval.center()},
                       {"xp", partition.cell(j).interval.center()},
                       {"re", v.real()},
                       {"im", v.imag()},
                       {"shots", recon.cell_shots()(i, j)}});
    }
  }
  return {{"partition", to_json(partition)},
          {"delta", recon.delta()},
          {"mode", recon.mode() == Mode::exact ? "exact" : "sampled"},
          {"cells", std::move(cells)}};
}

ReconstructedState reconstruction_from_json(const nlohmann::json& j) {
  Partition partition = partition_from_json(j.at("partition"));
  const auto n = static_cast<Eigen::Index>(partition.size());
  Eigen::MatrixXcd cells = Eigen::MatrixXcd::Zero(n, n);
  ReconstructedState::ShotMatrix shots =
      ReconstructedState::ShotMatrix::Zero(n, n);
  for (const auto& c : j.at("cells")) {
    const auto i = c.at("i").get<Eigen::Index>();
    const auto jj = c.at("j").get<Eigen::Index>();
    if (i < 0 || i >= n || jj < 0 || jj >= n) {
      throw std::invalid_argument("reconstruction_from_json: cell index out of range");
    }
    cells(i, jj) = Complex(c.at("re").get<double>(), c.at("im").get<double>());
    shots(i, jj) = c.at("shots").get<std::uint64_t>();
  }
  const std::string mode = j.at("mode").get<std::string>();
  if (mode != "exact" && mode != "sampled") {
    throw std::invalid_argument("reconstruction_from_json: unknown mode " + mode);
  }
  return ReconstructedState(std::move(partition), j.at("delta").get<double>(),
                            mode == "exact" ? Mode::exact : Mode::sampled,
                            std::move(cells), std::move(shots));
}

nlohmann::json to_json(const ElementEstimate& estimate) {
  nlohmann::json j{{"x", estimate.x},
                   {"xp", estimate.xp},
                   {"re", estimate.value.real()},
                   {"im", estimate.value.imag()},
                   {"r", estimate.r},
                   {"rp", estimate.rp},
                   {"shots", estimate.shots_used},
                   {"epsilon", estimate.epsilon_weight}};
  if (estimate.plan) {
    j["plan"] = {{"epsilon", estimate.plan->epsilon},
                 {"fail_prob", estimate.plan->fail_prob},
                 {"shots_per_axis", estimate.plan->shots}};
  }
  nlohmann::json probes = nlohmann::json::array();
  for (const auto& p : estimate.selection.probes) {
    probes.push_back({{"branch", p.branch == Branch::control0 ? 0 : 1},
                      {"halvings", p.halvings},
                      {"r", p.r},
                      {"value", p.value}});
  }
  j["region_probes"] = std::move(probes);
  return j;
}

void write_csv(const ReconstructedState& recon, std::ostream& out) {
  const Partition& partition = recon.partition();
  out << "x_center,xp_center,width_x,width_xp,re,im\n";
  const auto n = static_cast<Eigen::Index>(partition.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Complex v = recon.cells()(i, j);
      out << format_shortest(partition.cell(i).interval.center()) << ','
          << format_shortest(partition.cell(j).interval.center()) << ','
          << format_shortest(partition.cell(i).interval.width()) << ','
          << format_shortest(partition.cell(j).interval.width()) << ','
          << format_shortest(v.real()) << ',' << format_shortest(v.imag())
          << '\n';
    }
  }
}

}  // namespace cvtomo
