#include <doctest.h>

#include <cmath>

#include "bernaudit/subgaussian.hpp"

using namespace bernaudit;

TEST_SUITE("subgaussian") {
  TEST_CASE("binomial model moments") {
    const BinomialModel b(10, 0.5);
    CHECK(std::abs(b.central_moment(1)) < 1e-14);
    CHECK(std::abs(b.central_moment(2) - 2.5) < 1e-13);
    // npq(1 + 3(n-2)pq)
    CHECK(std::abs(b.central_moment(4) - 2.5 * (1 + 3 * 8 * 0.25)) < 1e-12);
    const BinomialModel s(10, 0.01);
    const double q = 0.01 * 0.99;
    CHECK(std::abs(s.central_moment(4) / (10 * q * 10 * q) - 12.501010101010101) < 1e-9);
    CHECK_THROWS_AS(BinomialModel(0, 0.5), DomainError);
    CHECK_THROWS_AS(BinomialModel(5, 1.0), DomainError);
  }

  TEST_CASE("tail function") {
    CHECK(tail_function(BinomialModel(10, 0.3), 100.0) == 0.0);
    CHECK(tail_function(BinomialModel(1, 0.5), 0.4) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(tail_function(BinomialModel(4, 0.5), 1.0) == doctest::Approx(0.0625).epsilon(1e-15));
    CHECK(std::abs(tail_function(BinomialModel(100, 0.5), 3.0) - 0.0008949651957434263) < 1e-15);
  }

  TEST_CASE("tail function is nonincreasing in u (property)") {
    for (int n : {1, 7, 64}) {
      for (double p : {0.05, 0.5, 0.8}) {
        const BinomialModel b(n, p);
        double prev = 1.0;
        for (int i = 0; i <= 60; ++i) {
          const double t = tail_function(b, i * 0.1);
          CHECK(t <= prev + 1e-16);
          CHECK(t >= 0.0);
          prev = t;
        }
      }
    }
  }

  TEST_CASE("cosh MGF check") {
    const std::vector<double> zero{0.0};
    const auto r0 = cosh_mgf_check(BinomialModel(5, 0.3), zero);
    CHECK(std::abs(r0.worst.margin) < 1e-15);
    CHECK(r0.clean());

    const std::vector<double> two{2.0};
    const auto r1 = cosh_mgf_check(BinomialModel(1, 0.5), two);
    CHECK(r1.clean());
    CHECK(std::abs(r1.worst.lhs - std::log(std::cosh(2.0))) < 1e-14);

    const std::vector<double> three{3.0};
    const auto r2 = cosh_mgf_check(BinomialModel(10, 0.01), three);
    CHECK(r2.cells_violating == 1);
    CHECK(std::abs(r2.worst.lhs - std::log(5.2993e20)) < 1e-3);
    CHECK(r2.worst.rhs == doctest::Approx(4.5));
  }

  TEST_CASE("symmetric case p = 1/2 never violates the cosh bound (property)") {
    const auto lambdas = linspace(-10.0, 10.0, 201);
    for (int n = 1; n <= 256; n *= 2) CHECK(cosh_mgf_check(BinomialModel(n, 0.5), lambdas).clean());
  }

  TEST_CASE("moment check") {
    const auto r = moment_check(BinomialModel(10, 0.5), 2);
    CHECK(r.cells_total == 2);
    CHECK(r.clean());
    CHECK(std::abs(r.all_margins.at(0).margin) < 1e-14);
    CHECK(std::abs(r.all_margins.at(1).lhs - 2.8) < 1e-13);

    const auto v = moment_check(BinomialModel(10, 0.01), 2);
    CHECK(v.cells_violating == 1);
    CHECK(std::abs(v.worst.lhs - 12.501010101010101) < 1e-9);
    CHECK_THROWS_AS(moment_check(BinomialModel(10, 0.5), 21), DomainError);
  }

  TEST_CASE("tail bound check") {
    const std::vector<double> us{0.0, 1.0};
    const auto r = tail_bound_check(BinomialModel(4, 0.5), us);
    CHECK(r.clean());
    CHECK(r.all_margins.at(0).rhs == 2.0);
    CHECK(std::abs(r.all_margins.at(1).lhs - 0.0625) < 1e-15);
    const std::vector<double> u3{3.0};
    const auto r3 = tail_bound_check(BinomialModel(100, 0.5), u3);
    CHECK(r3.clean());
    CHECK(std::abs(r3.worst.rhs - 0.022217993076484613) < 1e-15);
  }

  TEST_CASE("Berend-Kontorovich check") {
    const std::vector<double> l0{0.0};
    CHECK(std::abs(bk_check(0.7, l0).worst.margin) < 1e-16);
    const std::vector<double> l2{2.0};
    const auto r = bk_check(0.5, l2);
    CHECK(std::abs(r.worst.lhs - 0.4337808304830272) < 1e-14);
    CHECK(r.clean());
    const std::vector<double> l1{1.0};
    const auto r9 = bk_check(0.9, l1);
    CHECK(std::abs(r9.worst.lhs - 0.034701664001166335) < 1e-14);
    CHECK(r9.worst.rhs == doctest::Approx(0.045));
    CHECK(r9.clean());
    CHECK_THROWS_AS(bk_check(0.3, l1), DomainError);
  }

  TEST_CASE("BK holds on its stated range (property)") {
    const auto lambdas = linspace(0.0, 20.0, 401);
    for (double p : linspace(0.5, 0.95, 46)) CHECK(bk_check(p, lambdas).clean());
  }

  TEST_CASE("subgaussian norm estimate") {
    const auto grid = linspace(-50.0, 50.0, 201);  // step 0.5, skips λ = 0 only at the centre
    std::vector<double> nz;
    for (double l : grid) {
      if (l != 0.0) nz.push_back(l);
    }
    CHECK(sub_norm_estimate([](double) { return 1.0; }, nz) == 0.0);
    const double c = sub_norm_estimate([](double l) { return std::cosh(l); }, nz);
    CHECK(c >= 0.97);
    CHECK(c <= 1.0);
    CHECK(sub_norm_estimate([](double l) { return std::exp(2 * l * l); }, std::vector<double>{0.3, 1.7}) ==
          doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(sub_norm_estimate([](double) { return 1.0; }, std::vector<double>{0.0}), DomainError);
  }

  TEST_CASE("audits merge cells") {
    const std::vector<int> ns{1, 10};
    const std::vector<double> ps{0.01, 0.5};
    const std::vector<double> ls{-3.0, 0.0, 3.0};
    const auto r = cosh_mgf_audit(ns, ps, ls);
    CHECK(r.cells_total == 12);
    CHECK(r.cells_violating > 0);
    CHECK(r.worst.margin > 0);
  }

  TEST_CASE("polynomial density") {
    const PolyDensity d1(1.0);
    CHECK(d1.variance_closed_form() == doctest::Approx(1.0 / 6).epsilon(1e-15));
    for (double a : {0.1, 0.5, 1.0, 2.0, 5.0}) {
      const auto s = poly_density_stats(PolyDensity(a));
      CHECK(std::abs(s.normalization - 1.0) < 1e-10);
      CHECK(std::abs(s.variance - s.variance_closed_form) < 1e-10);
      CHECK(s.max_abs_odd_moment < 1e-12);
      CHECK(std::abs(s.excess_kurtosis - PolyDensity(a).excess_kurtosis_closed_form()) < 1e-8);
    }
    CHECK(std::abs(excess_kurtosis_root() - (std::sqrt(10.0) - 3.0)) < 1e-6);
    CHECK_THROWS_AS(PolyDensity(0.0), DomainError);
  }
}
