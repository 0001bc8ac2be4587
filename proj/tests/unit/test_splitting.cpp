#include <doctest.h>

#include <cmath>
#include <numbers>

#include "extremesim/core/splitting.hpp"
#include "support/oracles.hpp"

using namespace extremesim;

TEST_CASE("splitting at lambda = 1 is one half") {
  for (double n : {1.0, 10.0, 1e3, 1e7}) {
    CHECK(splitting_boundary_layer(1.0, n) == 0.5);
    CHECK(splitting_asymptotic(1.0, n) == 0.5);
    CHECK(std::abs(splitting_integral(1.0, n) - 0.5) < 1e-10);
  }
}

TEST_CASE("splitting integral matches an independent Simpson evaluation") {
  for (double lambda : {0.5, 0.8, 0.95, 1.05, 1.3, 2.0}) {
    for (double n : {10.0, 1e3, 1e5}) {
      CHECK(splitting_integral(lambda, n) == doctest::Approx(oracle::splitting(lambda, n)).epsilon(1e-7));
    }
  }
}

TEST_CASE("splitting tends to a Heaviside step") {
  CHECK(splitting_integral(0.05, 1e6) > 1.0 - 1e-9);
  CHECK(splitting_integral(0.7, 1e7) > 0.99);
  CHECK(splitting_integral(1.3, 1e7) < 0.01);
}

TEST_CASE("splitting lambda = 1.2, n = 1e4 is near its large-n expansion") {
  const double lambda = 1.2, n = 1e4;
  const double expansion = lambda * std::tgamma(lambda * lambda) *
                           std::pow(std::sqrt(std::numbers::pi) / (n * lambda), lambda * lambda - 1.0);
  CHECK(std::abs(splitting_integral(lambda, n) - expansion) < 0.1 * expansion);
}

TEST_CASE("splitting asymptotic lambda = 0.5, n = 1e6 is the plug-in value") {
  const double expected = 1.0 - 0.5 * std::tgamma(5.0) * std::pow(std::sqrt(std::numbers::pi) / 1e6, 3.0);
  CHECK(splitting_asymptotic(0.5, 1e6) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("splitting asymptotics agree with the integral for n >= 1e4") {
  for (double lambda : {0.7, 0.95, 1.05, 1.3}) {
    for (double n : {1e4, 1e5, 1e6, 1e7}) {
      const double exact = splitting_integral(lambda, n);
      const double approx = splitting_asymptotic(lambda, n);
      INFO("lambda=" << lambda << " n=" << n << " integral=" << exact << " asymptotic=" << approx);
      CHECK(std::abs(approx - exact) <= 0.05 * exact);
    }
  }
}

TEST_CASE("n = 1e6, lambda = 0.8: integral within 5% of the lambda < 1 expansion") {
  const double lambda = 0.8, n = 1e6;
  const double expansion = 1.0 - lambda * std::tgamma(1.0 + 1.0 / (lambda * lambda)) *
                                     std::pow(std::sqrt(std::numbers::pi) / n, 1.0 / (lambda * lambda) - 1.0);
  CHECK(std::abs(splitting_integral(lambda, n) - expansion) <= 0.05 * expansion);
}

TEST_CASE("splitting exhaustiveness under swapped targets") {
  for (double lambda : {0.3, 0.7, 0.9, 1.1, 1.6, 3.0}) {
    for (double n : {2.0, 50.0, 1e3, 1e6}) {
      if (lambda * n < 1.0) continue;
      CHECK(splitting_integral(lambda, n) + splitting_integral(1.0 / lambda, lambda * n) ==
            doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("splitting regimes switch at |lambda - 1| log n = 1") {
  const double n = 1e4;
  const double edge = 1.0 / std::log(n);
  CHECK(splitting_regime(1.0 + 0.99 * edge, n) == SplittingRegime::near);
  CHECK(splitting_regime(1.0 - 0.99 * edge, n) == SplittingRegime::near);
  CHECK(splitting_regime(1.0 + 1.01 * edge, n) == SplittingRegime::above);
  CHECK(splitting_regime(1.0 - 1.01 * edge, n) == SplittingRegime::below);
}

TEST_CASE("splitting is decreasing in lambda") {
  for (double n : {1e2, 1e5}) {
    double prev = 1.0;
    for (double lambda = 0.4; lambda < 2.5; lambda += 0.05) {
      const double v = splitting_integral(lambda, n);
      CHECK(v <= prev + 1e-12);
      prev = v;
    }
  }
}
