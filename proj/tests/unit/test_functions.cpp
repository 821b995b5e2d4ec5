#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "bernaudit/functions.hpp"

using namespace bernaudit;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path;
}

double brute_modulus(const UnivariateMap& f, double delta, int points) {
  double best = 0.0;
  const double h = 1.0 / (points - 1);
  for (int i = 0; i < points; ++i) {
    for (int j = i; j < points && (j - i) * h <= delta + 1e-15; ++j) best = std::max(best, std::abs(f(i * h) - f(j * h)));
  }
  return best;
}

}  // namespace

TEST_SUITE("functions") {
  TEST_CASE("modulus evaluation") {
    const ModulusSpec h(Hoelder{0.5, 1.0});
    CHECK(h(0.04) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(h(0.0) == 0.0);
    CHECK(ModulusSpec(Lipschitz{3.0})(0.0) == 0.0);
    CHECK(ModulusSpec(Tabulated{{{0.5, 1.0}}})(0.0) == 0.0);
    // clamped to the diameter of [0,1]
    CHECK(ModulusSpec(Lipschitz{2.0})(5.0) == 2.0);
    CHECK_THROWS_AS(modulus_eval(h, -0.1), DomainError);
    CHECK_THROWS_AS(modulus_eval(h, std::nan("")), DomainError);
  }

  TEST_CASE("modulus validation") {
    CHECK_THROWS_AS(ModulusSpec(Hoelder{1.5, 1.0}), ConfigError);
    CHECK_THROWS_AS(ModulusSpec(Hoelder{0.5, -1.0}), ConfigError);
    CHECK_THROWS_AS(ModulusSpec(Lipschitz{-1.0}), ConfigError);
    CHECK_THROWS_AS(ModulusSpec(Tabulated{{{0.5, 1.0}, {0.4, 2.0}}}), ConfigError);
    CHECK_THROWS_AS(ModulusSpec(Tabulated{{{0.2, 1.0}, {0.4, 0.5}}}), ConfigError);
  }

  TEST_CASE("empirical modulus of the identity") {
    const ScalarFunction id("identity", [](double x) { return x; });
    const Empirical e(id, 1e-3);
    CHECK(std::abs(e(0.25) - 0.25) <= 1e-3);
    CHECK(e(0.0) == 0.0);
  }

  TEST_CASE("moduli are nondecreasing, start at 0 and are subadditive (property)") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 0.5);
    const std::vector<ModulusSpec> specs{ModulusSpec(Hoelder{0.3, 2.0}), ModulusSpec(Lipschitz{1.5}),
                                         ModulusSpec(Tabulated{{{0.1, 0.3}, {0.5, 0.6}}}),
                                         ModulusSpec(Empirical(corpus_lookup("sin_pi"), 1e-3))};
    for (const auto& m : specs) {
      CHECK(m(0.0) == 0.0);
      // a lag-table estimate is subadditive only up to one grid step
      const double slack = std::holds_alternative<Empirical>(m.variant()) ? m(2e-3) : 1e-15;
      for (int i = 0; i < 200; ++i) {
        const double a = u(rng), b = u(rng);
        CHECK(m(std::min(a, b)) <= m(std::max(a, b)) + 1e-15);
        CHECK(m(a + b) <= m(a) + m(b) + slack);
      }
    }
  }

  TEST_CASE("trial functions") {
    const auto g = trial_g(0.5);
    CHECK(g(0.5) == 0.0);
    CHECK(g(0.2) == doctest::Approx(0.3).epsilon(1e-15));
    const auto g3 = trial_g(0.3);
    CHECK((*g3.exact_modulus())(0.9) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(brute_modulus(g3.eval(), 0.9, 2001) == doctest::Approx(0.7).epsilon(1e-12));
    const auto G = trial_G(0.5);
    CHECK(G(0.0) == 0.0);
    CHECK(G(0.5) == doctest::Approx(0.125).epsilon(1e-15));
    REQUIRE(G.has_derivative());
    for (int i = 0; i <= 100; ++i) CHECK(G.derivative()(i / 100.0) == g(i / 100.0));
    CHECK_THROWS_AS(trial_g(1.5), DomainError);
  }

  TEST_CASE("trial modulus closed form matches brute force (property)") {
    for (double t : {0.1, 0.25, 0.5, 0.8}) {
      const auto g = trial_g(t);
      for (double d : {0.05, 0.3, 0.55, 0.95}) {
        CHECK((*g.exact_modulus())(d) == doctest::Approx(brute_modulus(g.eval(), d, 401)).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("standard corpus") {
    const auto corpus = corpus_standard();
    CHECK(corpus.size() >= 8);
    for (const auto& f : corpus) {
      REQUIRE(f.exact_modulus());
      CHECK(modulus_excess(f.eval(), *f.exact_modulus()) <= 1e-12);
    }
    const auto s = corpus_lookup("sqrt");
    CHECK(std::abs(s(0.25) - s(0.16)) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK((*s.exact_modulus())(0.09) == doctest::Approx(0.3).epsilon(1e-14));
    CHECK_THROWS_AS(corpus_lookup("nope"), ConfigError);
  }

  TEST_CASE("derivative corpus carries verified derivative moduli") {
    for (const auto& f : corpus_derivative()) {
      REQUIRE(f.has_derivative());
      REQUIRE(f.derivative_modulus());
      CHECK(modulus_excess(f.derivative(), *f.derivative_modulus()) <= 1e-12);
      // derivative agrees with a central difference
      for (double x : {0.2, 0.45, 0.7}) {
        const double h = 1e-6;
        CHECK(std::abs((f(x + h) - f(x - h)) / (2 * h) - f.derivative()(x)) < 1e-6);
      }
    }
  }

  TEST_CASE("a wrong modulus is rejected") {
    CHECK_THROWS_AS(ScalarFunction("bad", [](double x) { return 3 * x; }, Lipschitz{1.0}), ConfigError);
  }

  TEST_CASE("factorable corpus moduli dominate the functions") {
    for (const auto& f : corpus_factorable()) {
      REQUIRE(f.exact_modulus2);
      const auto& m = *f.exact_modulus2;
      double excess = -1.0;
      for (int i = 0; i <= 20; ++i) {
        for (int j = 0; j <= 20; ++j) {
          for (int k = 0; k <= 20; ++k) {
            for (int l = 0; l <= 20; ++l) {
              const double x1 = i / 20.0, y1 = j / 20.0, x2 = k / 20.0, y2 = l / 20.0;
              excess = std::max(excess, std::abs(f(x1, y1) - f(x2, y2)) - m(std::abs(x1 - x2), std::abs(y1 - y2)));
            }
          }
        }
      }
      CHECK_MESSAGE(excess <= 1e-12, f.label);
    }
  }

  TEST_CASE("CSV loading") {
    const auto mod = write_temp("ba_mod.csv", "delta,omega\n0.1,0.2\n0.5,0.6\n");
    const ModulusSpec m = load_tabulated_modulus(mod);
    CHECK(m(0.05) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(m(0.9) == doctest::Approx(0.6).epsilon(1e-15));

    const auto fn = write_temp("ba_fn.csv", "x,f\n0,0\n0.5,1\n1,0\n");
    const ScalarFunction f = load_sampled_function(fn);
    CHECK(f(0.25) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(f(0.75) == doctest::Approx(0.5).epsilon(1e-15));

    CHECK_THROWS_AS(read_two_column_csv("/nonexistent/file.csv"), ConfigError);
    const auto unsorted = write_temp("ba_bad.csv", "0,1\n0.5,2\n0.2,3\n");
    CHECK_THROWS_AS(read_two_column_csv(unsorted), ConfigError);
    const auto partial = write_temp("ba_partial.csv", "0.1,1\n0.5,2\n");
    CHECK_THROWS_AS(load_sampled_function(partial), ConfigError);
    const auto junk = write_temp("ba_junk.csv", "x,y\n0,abc\n");
    CHECK_THROWS_AS(read_two_column_csv(junk), ConfigError);
  }
}
