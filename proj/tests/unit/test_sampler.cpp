#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <vector>

#include "extremesim/core/first_passage.hpp"
#include "extremesim/core/splitting.hpp"
#include "extremesim/oracle/stats.hpp"
#include "extremesim/sampler/rng.hpp"
#include "extremesim/sampler/sampler.hpp"
#include "support/oracles.hpp"

using namespace extremesim;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using A4 = std::array<std::uint32_t, 4>;
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("RngStream is deterministic and lanes are distinct") {
  RngStream a(42, 3), b(42, 3), c(42, 4), d(42, 3, 1);
  std::vector<std::uint64_t> va, vb, vc, vd;
  for (int i = 0; i < 100; ++i) {
    va.push_back(a());
    vb.push_back(b());
    vc.push_back(c());
    vd.push_back(d());
  }
  CHECK(va == vb);
  CHECK(va != vc);
  CHECK(va != vd);
  CHECK(a.draws() == 100);
  CHECK(a.fork(1).lane() == 1);
}

TEST_CASE("RngStream uniforms lie in (0, 1] and look uniform") {
  RngStream rng(7);
  std::vector<double> u(20000);
  for (double& x : u) {
    x = rng.uniform();
    REQUIRE(x > 0.0);
    REQUIRE(x <= 1.0);
  }
  CHECK(ks_one_sample(u, [](double x) { return x; }) < 0.015);
  RngStream r2(7);
  std::vector<double> z(20000);
  for (double& x : z) x = r2.normal();
  CHECK(ks_one_sample(z, [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }) < 0.015);
  CHECK(std::isinf(RngStream(1).exponential(0.0)));
}

TEST_CASE("next_arrival with u = 1 keeps the previous time") {
  const Geometry g = half_line(1.0, 1.0);
  const ValidityWindow w = validity_window(g);
  SamplerState s{100, 3, 0.01, 0.02};
  auto [t, next] = next_arrival(s, g, 1.0, w);
  CHECK(t == 0.02);
  CHECK(next.k_done == 4);
  CHECK(next.f_cum == 0.01);
}

TEST_CASE("next_arrival first draw inverts the exit probability") {
  const Geometry g = half_line(1.0, 1.0);
  const ValidityWindow w = validity_window(g);
  const double n = 1000, x = 0.002;
  auto [t, next] = next_arrival({1000, 0, 0.0, 0.0}, g, std::exp(-n * x), w);
  CHECK(t == doctest::Approx(invert_exit_cdf(g, x)).epsilon(1e-12));
  CHECK(next.f_cum == doctest::Approx(x).epsilon(1e-12));
}

TEST_CASE("next_arrival preconditions and breach") {
  const Geometry g = half_line(1.0, 1.0);
  const ValidityWindow w = validity_window(g);
  CHECK_THROWS_AS(next_arrival({5, 5, 0.1, 0.1}, g, 0.5, w), std::invalid_argument);
  CHECK_THROWS_AS(next_arrival({5, 0, 0.0, 0.0}, g, 0.0, w), std::invalid_argument);
  CHECK_THROWS_AS(next_arrival({5, 0, 0.0, 0.0}, g, 1e-3, w), ValidityError);
}

TEST_CASE("t1 follows 1 - exp(-n F(t)) (KS over 1e5 draws)") {
  const Geometry g = half_line(1.0, 1.0);
  const ValidityWindow w = validity_window(g);
  std::vector<double> t1;
  for (std::uint32_t r = 0; r < 100000; ++r) {
    RngStream rng(11, r);
    t1.push_back(sample_first_k(g, w, 1000, 1, rng).records.at(0).time);
  }
  const double d = ks_one_sample(t1, [](double t) { return 1.0 - std::exp(-1000.0 * oracle::half_line_F(1, 1, t)); });
  CHECK(d < 0.01);
}

TEST_CASE("sampler output properties over 1e3 seeds") {
  const Geometry g(1, 1.0, {{1.0, 0}, {1.2, 0}});
  const ValidityWindow w = validity_window(g);
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    RngStream rng(seed);
    RngStream replay(seed);
    const SampleResult r = sample_first_k(g, w, 500, 20, rng);
    REQUIRE(r.status == RunStatus::complete);
    REQUIRE(r.records.size() == 20);
    double f = 0.0;
    for (std::size_t i = 0; i < r.records.size(); ++i) {
      CHECK(r.records[i].rank == i + 1);
      if (i) CHECK(r.records[i].time > r.records[i - 1].time);
      // Replay: the cumulative probability is the running sum of log(1/u)/(n - i).
      f += -std::log(replay.uniform()) / static_cast<double>(500 - i);
      replay.uniform();
      CHECK(exit_cdf(g, r.records[i].time, w).value == doctest::Approx(f).epsilon(1e-9));
    }
  }
}

TEST_CASE("sampler is bit-reproducible") {
  const Geometry g = half_line(1.0, 1.0);
  RngStream a(99, 5), b(99, 5);
  CHECK(sample_first_k(g, 1000, 10, a).records == sample_first_k(g, 1000, 10, b).records);
}

TEST_CASE("sampler reports a validity breach with the valid prefix") {
  const Geometry g = half_line(1.0, 1.0);
  RngStream rng(1);
  const SampleResult r = sample_first_k(g, 10, 10, rng);
  CHECK(r.status == RunStatus::validity_breach);
  CHECK(r.records.size() < 10);
  CHECK_FALSE(r.warning.empty());
  CHECK_THROWS_AS(sample_first_k(g, 10, 11, rng), std::invalid_argument);
}

TEST_CASE("rank-3 mean matches quadrature of the order-statistic density") {
  const Geometry g = half_line(1.0, 1.0);
  const ValidityWindow w = validity_window(g);
  const double n = 1000;
  std::vector<double> t3;
  for (std::uint32_t r = 0; r < 5000; ++r) {
    RngStream rng(3, r);
    t3.push_back(sample_first_k(g, w, 1000, 3, rng).records.at(2).time);
  }
  auto density = [&](double t) {
    return oracle::order_density(n, 3, oracle::half_line_F(1, 1, t), oracle::half_line_f(1, 1, t));
  };
  const auto knots = oracle::geometric_knots(5e-3, 0.3, 60);
  const double expected = oracle::simpson_pieces([&](double t) { return t * density(t); }, knots);
  const double se = std::sqrt(variance(t3) / t3.size());
  CHECK(std::abs(mean(t3) - expected) < 3.0 * se);
}

TEST_CASE("select_target basics") {
  CHECK(select_target(half_line(1, 1), 0.1, 0.99, 10) == 0);
  const Geometry sym(1, 1.0, {{1.0, 0}, {1.0, 0}});
  RngStream rng(5);
  int first = 0;
  for (int i = 0; i < 10000; ++i) first += select_target(sym, 0.05, rng.uniform(), 1000) == 0;
  CHECK(std::abs(first / 10000.0 - 0.5) < 0.01);
}

TEST_CASE("select_target in 1D uses the splitting asymptotics of the remaining count") {
  const Geometry g(1, 1.0, {{1.0, 0}, {1.3, 0}});
  const auto p = target_probabilities(g, 0.05, 1e4);
  CHECK(p[0] == doctest::Approx(splitting_asymptotic(1.0 / 1.3, 1e4)));
  CHECK(p[0] + p[1] == doctest::Approx(1.0));
}

TEST_CASE("select_target in 3D follows the hazard ratio") {
  const Geometry g(3, 1.0, {{1.0, 0.2}, {1.1, 0.35}});
  const double t = 0.08;
  const double f1 = exit_term_density(g, 0, t);
  const double f2 = exit_term_density(g, 1, t);
  const double p = f1 / (f1 + f2);
  RngStream rng(8);
  const int trials = 40000;
  int hits = 0;
  for (int i = 0; i < trials; ++i) hits += select_target(g, t, rng.uniform(), 100) == 0;
  const double se = std::sqrt(p * (1 - p) / trials);
  CHECK(std::abs(hits / double(trials) - p) < 4 * se);
}

namespace {

// Chi-square of sampled (t1, t2) pairs for n = 2 against a joint density on
// s < t <= t_max, over a 5 x 5 grid (upper triangle only).
ChiSquareResult joint_chi_square(const std::function<double(double, double)>& density) {
  const Geometry g = half_line(1.0, 1.0);
  const ValidityWindow w = validity_window(g, 0.9);
  const std::vector<double> edges{0.0, 0.15, 0.25, 0.35, 0.5, w.t_max};
  const std::size_t m = edges.size() - 1;
  std::vector<double> observed(m * m, 0.0);
  int kept = 0;
  for (std::uint32_t r = 0; r < 40000; ++r) {
    RngStream rng(21, r);
    SamplerOptions o;
    o.f_max = 0.9;
    const SampleResult s = sample_first_k(g, w, 2, 2, rng, o);
    if (s.status != RunStatus::complete) continue;
    const auto ia = std::upper_bound(edges.begin(), edges.end(), s.records[0].time) - edges.begin() - 1;
    const auto ib = std::upper_bound(edges.begin(), edges.end(), s.records[1].time) - edges.begin() - 1;
    observed[ia * m + ib] += 1;
    ++kept;
  }
  std::vector<double> mass(m * m, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      mass[i * m + j] = oracle::simpson(
          [&](double s) {
            const double lo = std::max(s, edges[j]);
            if (lo >= edges[j + 1]) return 0.0;
            return oracle::simpson([&](double t) { return density(s, t); }, lo, edges[j + 1], 200);
          },
          std::max(edges[i], 1e-4), edges[i + 1], 200);
      total += mass[i * m + j];
    }
  }
  std::vector<double> obs, expected;
  for (std::size_t c = 0; c < m * m; ++c) {
    if (mass[c] <= 0.0) continue;
    obs.push_back(observed[c]);
    expected.push_back(mass[c] / total * kept);
  }
  return chi_square(obs, expected);
}

}  // namespace

TEST_CASE("n = 2, k = 2 joint arrivals follow the recursion's product-exponential law") {
  // The recursion treats F as a cumulative hazard: joint density 2 f(s) f(t) e^{-F(s) - F(t)}.
  const Geometry g = half_line(1.0, 1.0);
  const ChiSquareResult chi = joint_chi_square([&](double s, double t) {
    return 2.0 * exit_density(g, s) * exit_density(g, t) * std::exp(-exit_cdf_raw(g, s) - exit_cdf_raw(g, t));
  });
  INFO("chi2=" << chi.statistic << " dof=" << chi.dof);
  CHECK(chi.pvalue > 0.01);
}

TEST_CASE("n = 2, k = 2 joint arrivals versus the binomial joint density"
          * doctest::should_fail(true)) {
  // joint_density_consecutive carries (1 - F) survival factors where the
  // recursion carries e^{-F}; at n = 2 the sampled window reaches F ~ 0.9
  // and the two laws separate far beyond sampling noise.
  const Geometry g = half_line(1.0, 1.0);
  const ChiSquareResult chi =
      joint_chi_square([&](double s, double t) { return joint_density_consecutive(g, 2, 1, s, t); });
  INFO("chi2=" << chi.statistic << " dof=" << chi.dof);
  CHECK(chi.pvalue > 0.01);
}

TEST_CASE("killing with gamma = 0 is bitwise identical to the plain sampler") {
  const Geometry g = half_line(1.0, 1.0);
  for (std::uint32_t r = 0; r < 200; ++r) {
    RngStream a(4, r), b(4, r);
    const SampleResult plain = sample_first_k(g, 1000, 5, a);
    const SampleResult killed = sample_first_k_with_killing(g, 1000, 5, KillingSpec{0.0}, b);
    CHECK(plain.records == killed.records);
  }
}

TEST_CASE("killing: ranks, ordering and exhaustion") {
  const Geometry g = half_line(1.0, 0.3);
  for (std::uint32_t r = 0; r < 200; ++r) {
    RngStream rng(6, r);
    const SampleResult s = sample_first_k_with_killing(g, 1000, 5, KillingSpec{500.0}, rng);
    std::uint64_t accepted = 0;
    double last = 0.0;
    for (const ArrivalRecord& a : s.records) {
      CHECK(a.time >= last);
      last = a.time;
      if (!a.killed) CHECK(a.rank == ++accepted);
    }
    if (s.status == RunStatus::complete) CHECK(accepted == 5);
  }
  RngStream rng(1);
  const SampleResult few = sample_first_k_with_killing(half_line(1, 1), 3, 3, KillingSpec{1e6}, rng, {0.99, 1.0});
  CHECK(few.status != RunStatus::complete);
  CHECK_FALSE(few.warning.empty());
}

TEST_CASE("killing shifts the first accepted arrival") {
  const Geometry g = half_line(1.0, 0.3);
  std::vector<double> means;
  for (double gamma : {0.0, 200.0, 500.0}) {
    std::vector<double> t;
    for (std::uint32_t r = 0; r < 4000; ++r) {
      RngStream rng(12, r);
      const SampleResult s = sample_first_k_with_killing(g, 1000, 1, KillingSpec{gamma}, rng);
      if (s.status == RunStatus::complete) t.push_back(s.records.back().time);
    }
    means.push_back(mean(t));
  }
  CHECK(means[1] != means[0]);
  CHECK(means[2] != means[1]);
}
