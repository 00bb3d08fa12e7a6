#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cvtomo/numerics.hpp"

using namespace cvtomo;

TEST_CASE("hermite: closed forms") {
  CHECK(hermite_eval(0, 0.7) == 1.0);
  CHECK(hermite_eval(1, 2.0) == 4.0);
  // H_3(x) = 8x^3 - 12x
  CHECK(hermite_eval(3, 1.0) == doctest::Approx(8.0 - 12.0).epsilon(1e-14));
  CHECK(hermite_eval(3, 0.5) == doctest::Approx(8.0 * 0.125 - 6.0).epsilon(1e-14));
  CHECK_THROWS_AS(hermite_eval(-1, 0.0), std::invalid_argument);
}

TEST_CASE("hermite: recurrence identity up to n = 20") {
  for (int n = 1; n <= 20; ++n) {
    for (double x = -5.0; x <= 5.0; x += 0.25) {
      const double lhs = hermite_eval(n + 1, x);
      const double rhs = 2.0 * x * hermite_eval(n, x) - 2.0 * n * hermite_eval(n - 1, x);
      const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
      CHECK(std::abs(lhs - rhs) <= 1e-9 * scale);
    }
  }
}

TEST_CASE("gauss rule: nodes integrate polynomials exactly") {
  const GaussRule rule = gauss_legendre_rule(16);
  REQUIRE(rule.nodes.size() == 16);
  double sum_w = 0.0;
  for (double w : rule.weights) sum_w += w;
  CHECK(sum_w == doctest::Approx(2.0).epsilon(1e-14));
  // degree 31 is the highest the 16-point rule must integrate exactly
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * std::pow(rule.nodes[i], 30);
  }
  CHECK(acc == doctest::Approx(2.0 / 31.0).epsilon(1e-12));
}

TEST_CASE("integrate_line: constants, odd functions, gaussians") {
  const auto one = [](double) { return Complex{1.0, 0.0}; };
  CHECK(integrate_line(one, 0.0, 1.0).real() == doctest::Approx(1.0).epsilon(1e-12));

  const auto odd = [](double y) { return Complex{y, 0.0}; };
  CHECK(std::abs(integrate_line(odd, -1.0, 1.0)) <= 1e-12);

  const auto gauss = [](double y) { return Complex{std::exp(-y * y), 0.0}; };
  const double expected = std::sqrt(std::numbers::pi) * std::erf(3.5);
  CHECK(integrate_line(gauss, -3.5, 3.5).real() ==
        doctest::Approx(expected).epsilon(1e-10));

  CHECK(integrate_line(gauss, 2.0, 2.0) == Complex{0.0, 0.0});
  CHECK_THROWS_AS(integrate_line(gauss, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("integrate_line: complex integrand") {
  // integral of e^{i k y} over [0, L] = (e^{i k L} - 1) / (i k)
  const double k = 3.0, L = 2.0;
  const auto f = [&](double y) { return std::exp(Complex{0.0, k * y}); };
  const Complex expected = (std::exp(Complex{0.0, k * L}) - 1.0) / Complex{0.0, k};
  CHECK(std::abs(integrate_line(f, 0.0, L) - expected) <= 1e-10);
}

TEST_CASE("integrate_line: linearity") {
  const auto f = [](double y) { return Complex{std::exp(-y * y), 0.0}; };
  const auto g = [](double y) { return Complex{std::cos(y), std::sin(0.5 * y)}; };
  const double alpha = 2.5, beta = -0.75;
  const Complex i_f = integrate_line(f, -2.0, 2.0);
  const Complex i_g = integrate_line(g, -2.0, 2.0);
  const Complex i_mix = integrate_line(
      [&](double y) { return alpha * f(y) + beta * g(y); }, -2.0, 2.0);
  const double budget =
      1e-9 * (std::abs(alpha) * std::abs(i_f) + std::abs(beta) * std::abs(i_g));
  CHECK(std::abs(i_mix - (alpha * i_f + beta * i_g)) <= budget);
}

TEST_CASE("integrate_line: split additivity") {
  const auto f = [](double y) { return Complex{std::exp(-y * y) * y * y, 0.0}; };
  const Complex whole = integrate_line(f, -3.0, 3.0);
  const Complex split = integrate_line(f, -3.0, 0.7) + integrate_line(f, 0.7, 3.0);
  CHECK(std::abs(whole - split) <= 2e-10 * std::abs(whole));
}

TEST_CASE("integrate_line: narrow peak inside a wide domain is found") {
  // width-0.01 gaussian off-center in [-8, 8]; the scale pass alone cannot
  // resolve it, the bisection cascade must
  const double mu = 1.2345, s = 0.01;
  const auto f = [&](double y) {
    const double d = (y - mu) / s;
    return Complex{std::exp(-d * d), 0.0};
  };
  const double expected = s * std::sqrt(std::numbers::pi);
  CHECK(integrate_line(f, -8.0, 8.0).real() ==
        doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("integrate_line: signals non-convergence") {
  QuadratureSpec tight;
  tight.relative_tolerance = 1e-14;
  tight.max_subdivisions = 6;
  const double c = 1.0 / std::numbers::sqrt2;
  const auto step = [&](double y) { return Complex{y < c ? 0.0 : 1.0, 0.0}; };
  CHECK_THROWS_AS(integrate_line(step, 0.0, 1.0, tight), QuadratureError);
}

TEST_CASE("integrate_rect: separable and odd cases") {
  const auto one = [](double, double) { return Complex{1.0, 0.0}; };
  CHECK(integrate_rect(one, 0.0, 1.0, 0.0, 1.0).real() ==
        doctest::Approx(1.0).epsilon(1e-12));

  const auto odd = [](double x, double y) { return Complex{x * y, 0.0}; };
  CHECK(std::abs(integrate_rect(odd, -1.0, 1.0, -1.0, 1.0)) <= 1e-10);

  const auto gauss2 = [](double x, double y) {
    return Complex{std::exp(-x * x - y * y), 0.0};
  };
  const double e = std::erf(3.5);
  CHECK(integrate_rect(gauss2, -3.5, 3.5, -3.5, 3.5).real() ==
        doctest::Approx(std::numbers::pi * e * e).epsilon(1e-9));
}

TEST_CASE("sample_index: degenerate and invalid distributions") {
  RandomStream stream(42);
  const double sure[3] = {1.0, 0.0, 0.0};
  for (int i = 0; i < 100; ++i) CHECK(sample_index(sure, stream) == 0);

  const double tiny_negative[2] = {1.0 + 5e-13, -5e-13};
  CHECK(sample_index(tiny_negative, stream) == 0);

  const double bad_sum[2] = {0.5, 0.6};
  CHECK_THROWS_AS(sample_index(bad_sum, stream), std::invalid_argument);
  const double negative[2] = {1.001, -1e-3};
  CHECK_THROWS_AS(sample_index(negative, stream), std::invalid_argument);
  CHECK_THROWS_AS(sample_index(std::span<const double>{}, stream),
                  std::invalid_argument);
}

TEST_CASE("sample_index: seeded determinism") {
  const double p[2] = {0.5, 0.5};
  RandomStream a(7, 3), b(7, 3), c(7, 4);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 1000; ++i) {
    const auto va = sample_index(p, a);
    all_equal &= (va == sample_index(p, b));
    any_diff |= (va != sample_index(p, c));
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("sample_index: law of large numbers") {
  const double p[3] = {0.2, 0.3, 0.5};
  RandomStream stream(123);
  const int draws = 1'000'000;
  int counts[3] = {0, 0, 0};
  for (int i = 0; i < draws; ++i) ++counts[sample_index(p, stream)];
  for (int k = 0; k < 3; ++k) {
    CHECK(std::abs(static_cast<double>(counts[k]) / draws - p[k]) <= 0.005);
  }
}

TEST_CASE("random stream: substreams are independent of parent state") {
  RandomStream parent(99);
  (void)parent.uniform();
  RandomStream sub_after = parent.substream(5);
  RandomStream direct(99, 5);
  for (int i = 0; i < 100; ++i) CHECK(sub_after.uniform() == direct.uniform());
}
