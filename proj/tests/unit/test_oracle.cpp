#include <doctest.h>

#include <cmath>
#include <vector>

#include "extremesim/oracle/oracle.hpp"
#include "extremesim/oracle/stats.hpp"
#include "support/oracles.hpp"

using namespace extremesim;

namespace {

std::vector<double> first_times(const OracleSpec& spec, std::uint64_t seed, std::uint32_t replicas) {
  std::vector<double> t;
  for (std::uint32_t r = 0; r < replicas; ++r) {
    const SampleResult res = run_oracle(spec, RngStream(seed, r));
    REQUIRE(!res.records.empty());
    t.push_back(res.records.front().time);
  }
  return t;
}

// Exact law of the fastest of n free particles on the half-line.
double fastest_exact_cdf(double n, double d, double delta, double t) {
  return 1.0 - std::pow(1.0 - oracle::half_line_exact_cdf(d, delta, t), n);
}

double fastest_exact_mean(double n, double d, double delta) {
  return oracle::simpson_pieces([&](double t) { return 1.0 - fastest_exact_cdf(n, d, delta, t); },
                                oracle::geometric_knots(1e-4, 50.0, 60), 400);
}

}  // namespace

TEST_CASE("oracle spec validation") {
  OracleSpec s;
  CHECK_NOTHROW(validate(s));
  s.source = -1.0;
  CHECK_THROWS_AS(validate(s), std::invalid_argument);
  s = OracleSpec{};
  s.right = 0.5;
  CHECK_THROWS_AS(validate(s), std::invalid_argument);
  s = OracleSpec{};
  s.dt = 0.0;
  CHECK_THROWS_AS(validate(s), std::invalid_argument);
  s = OracleSpec{};
  s.k = s.n + 1;
  CHECK_THROWS_AS(validate(s), std::invalid_argument);
  s = OracleSpec{};
  s.source = 0.3;
  s.diffusion = 2.0;
  CHECK(recommended_dt(s) == doctest::Approx(0.09 / 200.0));
}

TEST_CASE("oracle with D = 0 never absorbs") {
  OracleSpec s;
  s.diffusion = 0.0;
  s.n = 10;
  const SampleResult r = run_oracle(s, RngStream(1));
  CHECK(r.records.empty());
  CHECK(r.status == RunStatus::exhausted);
}

TEST_CASE("oracle is deterministic per seed and ranks are ordered") {
  OracleSpec s;
  s.source = 0.3;
  s.n = 200;
  s.k = 5;
  const SampleResult a = run_oracle(s, RngStream(42, 7));
  const SampleResult b = run_oracle(s, RngStream(42, 7));
  const SampleResult c = run_oracle(s, RngStream(42, 8));
  REQUIRE(a.status == RunStatus::complete);
  CHECK(a.records == b.records);
  CHECK(a.records != c.records);
  REQUIRE(a.records.size() == 5);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].rank == i + 1);
    if (i > 0) CHECK(a.records[i].time >= a.records[i - 1].time);
  }
}

TEST_CASE("oracle two-sided symmetric interval splits evenly") {
  OracleSpec s;
  s.source = 0.5;
  s.right = 1.0;
  s.n = 100;
  s.k = 100;
  s.dt = 1e-4;
  std::size_t left = 0, total = 0;
  for (std::uint32_t r = 0; r < 100; ++r) {
    const SampleResult res = run_oracle(s, RngStream(3, r));
    REQUIRE(res.status == RunStatus::complete);
    for (const auto& rec : res.records) {
      left += rec.target == 0;
      ++total;
    }
  }
  REQUIRE(total == 10000);
  CHECK(std::abs(static_cast<double>(left) / total - 0.5) < 0.01);
}

TEST_CASE("oracle fastest arrival follows the exact half-line law") {
  OracleSpec s;
  s.source = 1.0;
  s.n = 20;
  s.dt = 1e-4;
  const std::vector<double> t = first_times(s, 11, 3000);
  CHECK(ks_one_sample(t, [](double x) { return fastest_exact_cdf(20, 1.0, 1.0, x); }) < 0.03);
  const double exact = fastest_exact_mean(20, 1.0, 1.0);
  const double se = std::sqrt(variance(t) / t.size());
  CHECK(std::abs(mean(t) - exact) < 3.0 * se + 0.002 * exact);
}

TEST_CASE("oracle mean t1 is stable under dt halving") {
  OracleSpec s;
  s.source = 1.0;
  s.n = 100;
  s.dt = 1e-3;
  const double coarse = mean(first_times(s, 5, 2000));
  s.dt = 5e-4;
  const double fine = mean(first_times(s, 5, 2000));
  CHECK(std::abs(coarse - fine) < 0.02 * fine);
}

TEST_CASE("bridge correction removes most of the discretization bias") {
  OracleSpec s;
  s.source = 1.0;
  s.n = 100;
  s.dt = 2e-3;
  const double exact = fastest_exact_mean(100, 1.0, 1.0);
  const double with_bridge = mean(first_times(s, 8, 2000));
  s.bridge_correction = false;
  const double without = mean(first_times(s, 8, 2000));
  CHECK(without > with_bridge);
  CHECK(std::abs(with_bridge - exact) < std::abs(without - exact));
}

TEST_CASE("oracle killing and emission") {
  OracleSpec s;
  s.source = 1.0;
  s.n = 50;
  s.gamma = 1e6;
  const SampleResult dead = run_oracle(s, RngStream(2));
  CHECK(dead.status == RunStatus::exhausted);
  CHECK(dead.records.size() < s.k + 1);

  s.gamma = 0.0;
  const double plain = mean(first_times(s, 4, 300));
  s.alpha = 2.0;
  const double emitted = mean(first_times(s, 4, 300));
  CHECK(emitted > plain);
}

TEST_CASE("two-sample statistics") {
  const std::vector<double> a{1, 2, 3, 4, 5};
  const std::vector<double> b{6, 7, 8};
  CHECK(ks_two_sample(a, a) == 0.0);
  CHECK(ks_two_sample(a, b) == 1.0);
  CHECK(mean(a) == 3.0);
  CHECK(variance(a) == 2.5);
  CHECK(variance(std::vector<double>{4.0}) == 0.0);
  const ComparisonReport r = compare_distributions(a, a);
  CHECK(r.mean_gap == 0.0);
  CHECK(r.var_gap == 0.0);
  CHECK(r.ks == 0.0);
  CHECK(r.mean_gap_ci.lo <= 0.0);
  CHECK(r.mean_gap_ci.hi >= 0.0);
  CHECK_THROWS_AS(compare_distributions(a, std::vector<double>{}), std::invalid_argument);
  CHECK(ks_one_sample(std::vector<double>{0.5}, [](double x) { return x; }) == doctest::Approx(0.5));
}

TEST_CASE("Kolmogorov tail and chi-square p-values") {
  CHECK(kolmogorov_pvalue(0.0, 100) == doctest::Approx(1.0));
  // Q(1.358) ~ 0.05 in the large-sample limit.
  CHECK(kolmogorov_pvalue(1.358 / std::sqrt(1e8), 1e8) == doctest::Approx(0.05).epsilon(0.01));
  CHECK(kolmogorov_pvalue(0.5, 1000) < 1e-10);
  const std::vector<double> obs{10, 10, 10}, exp{10, 10, 10};
  const ChiSquareResult z = chi_square(obs, exp);
  CHECK(z.statistic == 0.0);
  CHECK(z.dof == 2);
  CHECK(z.pvalue == doctest::Approx(1.0));
  // two dof: p = e^{-statistic / 2}
  const std::vector<double> o2{12, 8, 10};
  const ChiSquareResult c = chi_square(o2, exp);
  CHECK(c.statistic == doctest::Approx(0.8));
  CHECK(c.pvalue == doctest::Approx(std::exp(-0.4)));
  CHECK(chi_square(o2, exp, 1).dof == 1);
}
