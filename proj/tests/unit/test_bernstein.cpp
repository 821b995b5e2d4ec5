#include <doctest.h>

#include <cmath>
#include <random>

#include "bernaudit/bernstein.hpp"
#include "bernaudit/numerics.hpp"

using namespace bernaudit;

TEST_SUITE("bernstein") {
  TEST_CASE("degree ordering and formatting") {
    CHECK(Degree(3) < Degree(5));
    CHECK(Degree(1000000) < Degree::inf());
    CHECK(Degree::inf() == Degree::inf());
    CHECK(Degree::inf().to_string() == "inf");
    CHECK(Degree(12).to_string() == "12");
    CHECK_THROWS_AS(Degree(0), DomainError);
    CHECK_THROWS_AS(Degree::inf().value(), DomainError);
  }

  TEST_CASE("reference evaluations") {
    const UnivariateMap c = [](double) { return 2.5; };
    const UnivariateMap id = [](double x) { return x; };
    const UnivariateMap sq = [](double x) { return x * x; };
    CHECK(std::abs(bernstein_eval(c, Degree(17), 0.37) - 2.5) < 1e-13);
    CHECK(std::abs(bernstein_eval(id, Degree(7), 0.3) - 0.3) < 1e-13);
    CHECK(std::abs(bernstein_eval(sq, Degree(10), 0.5) - 0.275) < 1e-15);
    CHECK(bernstein_eval(sq, Degree::inf(), 0.3) == sq(0.3));
    CHECK(bernstein_eval(sq, Degree(10), 0.0) == 0.0);
    CHECK(bernstein_eval(sq, Degree(10), 1.0) == 1.0);
    CHECK_THROWS_AS(bernstein_eval(sq, Degree(10), 1.5), DomainError);
  }

  TEST_CASE("error reference values") {
    const ScalarFunction sq("square", [](double x) { return x * x; });
    const ScalarFunction lin("lin", [](double x) { return 3 * x - 1; });
    CHECK(std::abs(error_exact(sq, Degree(10), 0.5) - 0.025) < 1e-15);
    CHECK(error_exact(lin, Degree(40), 0.77) < 1e-13);
    // exact mean absolute deviation of Bin(100, 1/2), divided by 100
    CHECK(std::abs(error_exact(trial_g(0.5), Degree(100), 0.5) - 0.03979461869358938) < 1e-15);
  }

  TEST_CASE("weights form a partition of unity with the right first two moments (property)") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = std::uniform_int_distribution<int>(1, 2000)(rng);
      const double x = u(rng);
      const auto w = bernstein_weights(n, x);
      REQUIRE(w.size() == static_cast<std::size_t>(n + 1));
      CompensatedSum s0, s1, s2;
      for (int m = 0; m <= n; ++m) {
        CHECK(w[m] >= 0.0);
        s0 += w[m];
        s1 += w[m] * m / n;
        s2 += w[m] * (static_cast<double>(m) / n) * (static_cast<double>(m) / n);
      }
      CHECK(std::abs(s0.value() - 1.0) < 1e-12);
      CHECK(std::abs(s1.value() - x) < 1e-12);
      CHECK(std::abs(s2.value() - (x * x + x * (1 - x) / n)) < 1e-12);
    }
  }

  TEST_CASE("weights agree with the saddle-point pmf term by term") {
    for (int n : {1, 37, 1000, 16384}) {
      for (double x : {1e-4, 0.2, 0.5, 0.97}) {
        const auto w = bernstein_weights(n, x);
        double worst_abs = 0.0;
        double worst_rel = 0.0;
        for (int m = 0; m <= n; ++m) {
          const double ref = std::exp(log_binomial_pmf(n, m, x));
          worst_abs = std::max(worst_abs, std::abs(w[m] - ref));
          if (ref >= 1e-6) worst_rel = std::max(worst_rel, std::abs(w[m] - ref) / ref);
        }
        CHECK(worst_abs < 1e-15);
        CHECK(worst_rel < 1e-13);
      }
    }
    const auto e = bernstein_weights(5, 0.0);
    CHECK(e[0] == 1.0);
    CHECK(e[5] == 0.0);
  }

  TEST_CASE("B_n is monotone and positive (property)") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      const double x = u(rng), a = u(rng);
      const int n = std::uniform_int_distribution<int>(1, 300)(rng);
      const UnivariateMap f = [a](double t) { return std::abs(t - a); };
      const UnivariateMap g = [a](double t) { return std::abs(t - a) + t * t; };
      CHECK(bernstein_eval(f, Degree(n), x) >= 0.0);
      CHECK(bernstein_eval(f, Degree(n), x) <= bernstein_eval(g, Degree(n), x) + 1e-15);
    }
  }

  TEST_CASE("derivative") {
    const UnivariateMap c = [](double) { return 4.0; };
    const UnivariateMap id = [](double x) { return x; };
    const UnivariateMap sq = [](double x) { return x * x; };
    for (int i = 0; i <= 20; ++i) {
      const double x = i / 20.0;
      CHECK(std::abs(bernstein_derivative_eval(id, 9, x) - 1.0) < 1e-12);
      CHECK(std::abs(bernstein_derivative_eval(c, 9, x)) < 1e-12);
    }
    CHECK(std::abs(bernstein_derivative_eval(sq, 10, 0.5) - 1.0) < 1e-14);
    CHECK_THROWS_AS(bernstein_derivative_eval(sq, 1, 0.5), DomainError);
  }

  TEST_CASE("derivative agrees with a finite difference of B_n (property)") {
    const UnivariateMap f = [](double x) { return std::sin(3 * x) + std::abs(x - 0.4); };
    for (int n : {2, 5, 30, 200}) {
      for (double x : {0.1, 0.33, 0.5, 0.9}) {
        const double h = 1e-5;
        const double fd = (bernstein_eval(f, Degree(n), x + h) - bernstein_eval(f, Degree(n), x - h)) / (2 * h);
        CHECK(std::abs(bernstein_derivative_eval(f, n, x) - fd) < 1e-6 * std::max(1.0, std::abs(fd)));
      }
    }
  }

  TEST_CASE("bivariate operator") {
    const BivariateFunction xy{"x*y", [](double x, double y) { return x * y; }, std::nullopt};
    const BivariateFunction one{"1", [](double, double) { return 1.0; }, std::nullopt};
    const BivariateFunction sum{"x+y", [](double x, double y) { return x + y; }, std::nullopt};
    const BivariateFunction x2y2{"x^2*y^2", [](double x, double y) { return x * x * y * y; }, std::nullopt};
    for (double x : {0.0, 0.2, 0.7, 1.0}) {
      for (double y : {0.0, 0.45, 1.0}) {
        CHECK(std::abs(bernstein2_eval(xy, Degree(5), Degree(8), x, y) - x * y) < 1e-12);
        CHECK(std::abs(bernstein2_eval(one, Degree(5), Degree(8), x, y) - 1.0) < 1e-12);
        CHECK(error2_exact(sum, Degree(6), Degree(3), x, y) < 1e-12);
      }
    }
    CHECK(std::abs(bernstein2_eval(x2y2, Degree(10), Degree(10), 0.5, 0.5) - 0.075625) < 1e-15);
    CHECK(std::abs(error2_exact(x2y2, Degree(10), Degree(10), 0.5, 0.5) - 0.013125) < 1e-15);
  }

  TEST_CASE("bivariate operator factorizes and handles INF") {
    const auto g = trial_g(0.5);
    const BivariateFunction g1{"g(x)*1", [](double x, double) { return std::abs(0.5 - x); }, std::nullopt};
    for (double y : {0.0, 0.3, 0.9}) {
      CHECK(std::abs(error2_exact(g1, Degree(100), Degree::inf(), 0.5, y) - 0.03979461869358938) < 1e-15);
    }
    const UnivariateMap a = [](double x) { return std::exp(x); };
    const UnivariateMap b = [](double y) { return std::cos(2 * y); };
    const BivariateFunction ab{"ab", [&](double x, double y) { return a(x) * b(y); }, std::nullopt};
    for (int n1 : {3, 17}) {
      for (int n2 : {4, 64}) {
        const double lhs = bernstein2_eval(ab, Degree(n1), Degree(n2), 0.3, 0.8);
        const double rhs = bernstein_eval(a, Degree(n1), 0.3) * bernstein_eval(b, Degree(n2), 0.8);
        CHECK(std::abs(lhs - rhs) < 1e-13);
      }
      const double half = bernstein2_eval(ab, Degree(n1), Degree::inf(), 0.3, 0.8);
      CHECK(std::abs(half - bernstein_eval(a, Degree(n1), 0.3) * b(0.8)) < 1e-13);
    }
    CHECK(bernstein2_eval(ab, Degree::inf(), Degree::inf(), 0.3, 0.8) == ab(0.3, 0.8));
  }
}
