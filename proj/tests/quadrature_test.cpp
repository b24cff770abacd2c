#include <doctest.h>

#include <cmath>

#include "levycox/quadrature.hpp"
#include "levycox/rng.hpp"

using namespace levycox;

TEST_CASE("adaptive integrator on smooth closed forms") {
  CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0,
                  2.0 * 3.14159265358979323846) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, 40.0,
                  QuadOptions{}, {1.0, 2.0, 4.0, 8.0, 16.0}) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("boundary-layer integrand needs the seeded breakpoints") {
  // exp(-S u) mass concentrated at u ~ 1/S inside a long interval.
  const double S = 5000.0;
  std::vector<double> breaks{0.25 / S, 1.0 / S, 4.0 / S, 0.01, 0.1, 1.0};
  const double value = integrate([&](double u) { return std::exp(-S * u); },
                                 0.0, 10.0, QuadOptions{}, breaks);
  CHECK(value == doctest::Approx(1.0 / S).epsilon(1e-10));
}

TEST_CASE("panel output partitions the interval and sums to the value") {
  auto f = [](double x) { return std::cos(3.0 * x) + 1.5; };
  const QuadResult res =
      integrate_adaptive(f, 0.0, 2.0, QuadOptions{}, {}, true);
  REQUIRE(!res.panels.empty());
  double total = 0.0;
  double cursor = 0.0;
  for (const auto& panel : res.panels) {
    CHECK(panel.a == doctest::Approx(cursor).epsilon(1e-14));
    cursor = panel.b;
    total += panel.value;
  }
  CHECK(cursor == doctest::Approx(2.0));
  CHECK(total == doctest::Approx(res.value).epsilon(1e-13));
}

TEST_CASE("non-finite integrand raises a numerical error") {
  CHECK_THROWS_AS(
      integrate([](double x) { return 1.0 / (x - 0.5); }, 0.4999999, 0.5000001),
      NumericalError);
}

TEST_CASE("monotone cubic interpolant inverts its own evaluation") {
  // Tabulate the CDF of Exp(1) coarsely and check eval/solve consistency.
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> slopes;
  for (int k = 0; k <= 20; ++k) {
    const double x = 8.0 * k / 20.0;
    xs.push_back(x);
    ys.push_back(-std::expm1(-x));
    slopes.push_back(std::exp(-x));
  }
  const MonotoneCubic cdf(xs, ys, &slopes);

  double prev = -1.0;
  for (int k = 0; k <= 200; ++k) {
    const double x = 8.0 * k / 200.0;
    const double y = cdf.eval(x);
    CHECK(y >= prev);  // monotone
    prev = y;
    CHECK(y == doctest::Approx(-std::expm1(-x)).epsilon(2e-4));
  }
  for (double pr : {0.01, 0.2, 0.5, 0.9, 0.99}) {
    const double x = cdf.solve(pr);
    CHECK(cdf.eval(x) == doctest::Approx(pr).epsilon(1e-10));
  }
}

TEST_CASE("rng streams are deterministic and seed derivation separates them") {
  Rng a(42), b(42), c(43);
  bool all_equal = true;
  bool any_diff_seed = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    if (x != b.uniform()) all_equal = false;
    if (x != c.uniform()) any_diff_seed = true;
  }
  CHECK(all_equal);
  CHECK(any_diff_seed);
  CHECK(derive_seed(7, 0) != derive_seed(7, 1));
  CHECK(derive_seed(7, 0) != derive_seed(8, 0));
}

TEST_CASE("rng variates match their first two moments") {
  Rng rng(2024);
  const int m = 200000;
  double se = 0.0, see = 0.0, sn = 0.0, snn = 0.0;
  for (int i = 0; i < m; ++i) {
    const double e = rng.exponential();
    const double z = rng.normal();
    se += e;
    see += e * e;
    sn += z;
    snn += z * z;
  }
  CHECK(se / m == doctest::Approx(1.0).epsilon(0.02));
  CHECK(see / m == doctest::Approx(2.0).epsilon(0.05));
  CHECK(sn / m == doctest::Approx(0.0).scale(1.0).epsilon(0.02));
  CHECK(snn / m == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("poisson draws reproduce the mean for small and chunked regimes") {
  for (double mean : {0.5, 7.0, 90.0}) {
    Rng rng(11);
    const int m = 40000;
    double total = 0.0;
    for (int i = 0; i < m; ++i) total += rng.poisson(mean);
    const double se = std::sqrt(mean / m);
    CHECK(std::abs(total / m - mean) < 5.0 * se);
  }
}
