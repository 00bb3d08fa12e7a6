#include "cvtomo/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace cvtomo {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed),
      stream_index_(stream_index),
      engine_(splitmix64(seed ^ splitmix64(stream_index))) {}

RandomStream RandomStream::substream(std::uint64_t index) const {
  return RandomStream(seed_, index);
}

double RandomStream::uniform() {
  // mt19937_64 output is fully specified by the standard, so this is
  // bit-reproducible across platforms; std::uniform_real_distribution is not.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double hermite_eval(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite_eval: n must be >= 0");
  if (n == 0) return 1.0;
  double h_prev = 1.0;  // H_0
  double h = 2.0 * x;   // H_1
  for (int k = 1; k < n; ++k) {
    const double h_next = 2.0 * x * h - 2.0 * static_cast<double>(k) * h_prev;
    h_prev = h;
    h = h_next;
  }
  return h;
}

GaussRule gauss_legendre_rule(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre_rule: n must be >= 1");
  GaussRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return rule;
}

namespace {

constexpr int kPanelOrder = 16;

const GaussRule& panel_rule() {
  static const GaussRule rule = gauss_legendre_rule(kPanelOrder);
  return rule;
}

struct Panel {
  Complex integral;
  double l1;  // same-rule estimate of the integral of |f|
};

Panel eval_panel(const std::function<Complex(double)>& f, double a, double b) {
  const GaussRule& rule = panel_rule();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  Complex acc{0.0, 0.0};
  double l1 = 0.0;
  for (int i = 0; i < kPanelOrder; ++i) {
    const Complex v = f(mid + half * rule.nodes[i]);
    acc += rule.weights[i] * v;
    l1 += rule.weights[i] * std::abs(v);
  }
  return {acc * half, l1 * half};
}

Complex refine(const std::function<Complex(double)>& f, double a, double b,
               const Panel& coarse, double abs_tol, int depth,
               const QuadratureSpec& spec) {
  const double mid = 0.5 * (a + b);
  const Panel left = eval_panel(f, a, mid);
  const Panel right = eval_panel(f, mid, b);
  const Complex fine = left.integral + right.integral;
  const double err = std::abs(coarse.integral - fine);
  const double local_floor =
      32.0 * std::numeric_limits<double>::epsilon() * (left.l1 + right.l1);
  if (err <= std::max(abs_tol, local_floor)) return fine;
  if (depth >= spec.max_subdivisions) {
    throw QuadratureError(
        "integrate_line: subdivision limit reached without convergence");
  }
  return refine(f, a, mid, left, 0.5 * abs_tol, depth + 1, spec) +
         refine(f, mid, b, right, 0.5 * abs_tol, depth + 1, spec);
}

// extra_abs_tol lets a caller that knows the integrand's true scale (the
// rectangle integrator) keep round-off noise from triggering refinement.
Complex integrate_line_impl(const std::function<Complex(double)>& f, double a,
                            double b, const QuadratureSpec& spec,
                            double extra_abs_tol) {
  if (a == b) return {0.0, 0.0};
  const double h = 0.25 * (b - a);
  Panel panels[4];
  double scale = 0.0;
  for (int k = 0; k < 4; ++k) {
    panels[k] = eval_panel(f, a + k * h, a + (k + 1) * h);
    scale += panels[k].l1;
  }
  const double abs_tol = std::max(
      spec.relative_tolerance * std::max(scale, std::numeric_limits<double>::min()),
      extra_abs_tol);

  Complex total{0.0, 0.0};
  for (int k = 0; k < 4; ++k) {
    total += refine(f, a + k * h, a + (k + 1) * h, panels[k], 0.25 * abs_tol,
                    2, spec);
  }
  return total;
}

void check_spec(const QuadratureSpec& spec) {
  if (!(spec.relative_tolerance > 0.0)) {
    throw std::invalid_argument("QuadratureSpec: relative_tolerance must be > 0");
  }
  if (spec.max_subdivisions < 1) {
    throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 1");
  }
}

}  // namespace

Complex integrate_line(const std::function<Complex(double)>& f, double a,
                       double b, const QuadratureSpec& spec) {
  check_spec(spec);
  if (!(a <= b)) throw std::invalid_argument("integrate_line: requires a <= b");
  // The scale pass inside integrate_line_impl fixes the L1 magnitude the
  // relative tolerance refers to; without it the tolerance would be
  // meaningless for integrands that nearly cancel.
  return integrate_line_impl(f, a, b, spec, 0.0);
}

Complex integrate_rect(const std::function<Complex(double, double)>& f,
                       double x_lo, double x_hi, double y_lo, double y_hi,
                       const QuadratureSpec& spec) {
  check_spec(spec);
  if (!(x_lo <= x_hi) || !(y_lo <= y_hi)) {
    throw std::invalid_argument("integrate_rect: requires lo <= hi per axis");
  }
  // Rectangle-wide L1 of |f|: where the inner integral cancels, the outer
  // integrand is round-off noise, and only this scale can tell noise from
  // structure.
  const double l1 =
      integrate_line_impl(
          [&](double x) {
            return integrate_line_impl(
                [&](double y) { return Complex{std::abs(f(x, y)), 0.0}; },
                y_lo, y_hi, spec, 0.0);
          },
          x_lo, x_hi, spec, 0.0)
          .real();
  const double floor = spec.relative_tolerance * l1;
  return integrate_line_impl(
      [&](double x) {
        return integrate_line_impl([&](double y) { return f(x, y); }, y_lo,
                                   y_hi, spec, floor);
      },
      x_lo, x_hi, spec, floor);
}

std::size_t sample_index(std::span<const double> probs, RandomStream& stream) {
  if (probs.empty()) throw std::invalid_argument("sample_index: empty vector");
  double sum = 0.0;
  for (double p : probs) {
    if (p < -1e-12) {
      throw std::invalid_argument("sample_index: negative probability");
    }
    sum += std::max(p, 0.0);
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("sample_index: probabilities do not sum to 1");
  }
  const double u = stream.uniform() * sum;
  double acc = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    acc += std::max(probs[k], 0.0);
    if (u < acc) return k;
  }
  return probs.size() - 1;  // round-off fallthrough
}

}  // namespace cvtomo
