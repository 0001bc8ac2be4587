#include "extremesim/cli/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "extremesim/core/mfat.hpp"
#include "extremesim/core/splitting.hpp"
#include "extremesim/emission/emission.hpp"
#include "extremesim/oracle/oracle.hpp"

namespace extremesim::cli {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt_short(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

bool worse(RunStatus candidate, RunStatus current) {
  return current == RunStatus::complete && candidate != RunStatus::complete;
}

// Per-replica outcomes merged in replica order, independent of scheduling.
RunResult merge(std::vector<SampleResult>& per_replica) {
  RunResult out;
  std::map<std::string, std::size_t> counts;
  std::vector<std::string> order;
  for (std::size_t r = 0; r < per_replica.size(); ++r) {
    SampleResult& s = per_replica[r];
    for (const ArrivalRecord& a : s.records) {
      out.records.push_back({r, a.rank, a.time, a.target, a.killed});
    }
    if (worse(s.status, out.status)) out.status = s.status;
    if (!s.warning.empty()) {
      if (counts[s.warning]++ == 0) order.push_back(s.warning);
    }
  }
  for (const std::string& w : order) {
    out.warnings.push_back(w + " [" + std::to_string(counts[w]) + " of " +
                           std::to_string(per_replica.size()) + " replicas]");
  }
  return out;
}

std::vector<RankSummary> summarize_groups(const std::map<std::uint64_t, std::vector<double>>& groups) {
  std::vector<RankSummary> out;
  for (const auto& [rank, times] : groups) {
    out.push_back({rank, times.size(), mean(times), variance(times)});
  }
  return out;
}

std::vector<double> grid_or(const std::vector<double>& grid, std::vector<double> fallback) {
  return grid.empty() ? fallback : grid;
}

double relative_error(double estimate, double reference) {
  return (estimate - reference) / reference;
}

}  // namespace

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

RunResult run_sample_campaign(const RunSpec& spec) {
  validate_spec(spec);
  const auto start = Clock::now();
  const Geometry g = make_geometry(spec);
  const ValidityWindow window = validity_window(g, spec.f_max);
  SamplerOptions options;
  options.f_max = spec.f_max;
  options.time_distortion = spec.time_distortion;
  const bool killing = spec.gamma > 0.0;
  const bool emission = spec.alpha > 0.0;

  std::vector<SampleResult> per_replica(spec.replicas);
  parallel_for(spec.replicas, effective_threads(spec), [&](std::size_t r) {
    RngStream rng(spec.seed, static_cast<std::uint32_t>(r));
    if (emission) {
      per_replica[r] =
          sample_first_k_emission(g, window, EmissionProfile(spec.alpha), spec.n, spec.k, rng, options);
    } else if (killing) {
      per_replica[r] =
          sample_first_k_with_killing(g, window, spec.n, spec.k, KillingSpec{spec.gamma}, rng, options);
    } else {
      per_replica[r] = sample_first_k(g, window, spec.n, spec.k, rng, options);
    }
  });

  RunResult out = merge(per_replica);
  if (emission && spec.n >= 2) {
    out.regime = to_string(emission_regime(g, spec.alpha, static_cast<double>(spec.n)));
  }
  summarize(out, killing);
  out.seconds = seconds_since(start);
  return out;
}

RunResult run_oracle_campaign(const RunSpec& spec) {
  RunSpec oracle_spec = spec;
  oracle_spec.command = Command::oracle;
  validate_spec(oracle_spec);
  const auto start = Clock::now();
  const OracleSpec o = make_oracle_spec(spec);
  std::vector<SampleResult> per_replica(spec.replicas);
  parallel_for(spec.replicas, effective_threads(spec), [&](std::size_t r) {
    per_replica[r] = run_oracle(o, RngStream(spec.seed, static_cast<std::uint32_t>(r)));
  });
  RunResult out = merge(per_replica);
  if (o.dt > recommended_dt(o)) {
    out.warnings.push_back("oracle: dt = " + fmt_short(o.dt) + " exceeds the recommended " +
                           fmt_short(recommended_dt(o)));
  }
  summarize(out, false);
  out.seconds = seconds_since(start);
  return out;
}

void summarize(RunResult& result, bool killing) {
  std::map<std::uint64_t, std::vector<double>> accepted;
  std::map<std::uint64_t, std::vector<double>> candidates;
  std::uint64_t current = ~std::uint64_t{0};
  std::uint64_t position = 0;
  for (const Row& row : result.records) {
    if (row.replica != current) {
      current = row.replica;
      position = 0;
    }
    ++position;
    if (!row.killed) accepted[row.rank].push_back(row.time);
    if (killing) candidates[position].push_back(row.time);
  }
  result.ranks = summarize_groups(accepted);
  result.unconditional = killing ? summarize_groups(candidates) : std::vector<RankSummary>{};
}

std::vector<double> rank_times(const RunResult& result, std::uint64_t rank) {
  std::vector<double> out;
  for (const Row& row : result.records) {
    if (!row.killed && row.rank == rank) out.push_back(row.time);
  }
  return out;
}

RunResult mfat_table(const RunSpec& spec) {
  validate_spec(spec);
  const auto start = Clock::now();
  const Geometry g = make_geometry(spec);
  const ValidityWindow window = validity_window(g, spec.f_max);
  const bool half_line = g.dim() == 1 && g.target_count() == 1;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  RunResult out;
  out.table.header = {"n",    "alpha",        "regime", "numerical",       "slow",       "intermediate",
                      "fast", "leading_order", "err_slow", "err_intermediate", "err_fast", "err_leading"};
  std::map<std::string, std::size_t> seen;
  auto note = [&](const std::vector<std::string>& ws) {
    for (const std::string& w : ws) {
      if (seen[w]++ == 0) out.warnings.push_back(w);
    }
  };
  for (double n : grid_or(spec.n_grid, {static_cast<double>(spec.n)})) {
    for (double alpha : grid_or(spec.alpha_grid, {spec.alpha})) {
      double numerical;
      double slow = nan, intermediate = nan, fast = nan, leading = g.diffusive_time() / std::log(n);
      std::string regime;
      if (alpha == 0.0) {
        const MfatEstimate m = mfat_instantaneous(g, n, window);
        numerical = m.value;
        regime = "instantaneous";
        note(m.warnings);
      } else {
        const RegimeEstimate est = classify_regime(g, alpha, n);
        numerical = est.numerical;
        regime = to_string(est.regime);
        note(est.warnings);
        if (half_line) {
          const MfatValue s = mfat_slow_asymptotic(g, alpha, n);
          const MfatValue i = mfat_intermediate_asymptotic(g, alpha, n);
          slow = s.value;
          intermediate = i.value;
          note(s.warnings);
          note(i.warnings);
        }
        const MfatValue f = mfat_fast_asymptotic(g, alpha, n);
        fast = f.value;
        note(f.warnings);
        leading = nan;
      }
      out.table.rows.push_back({format_double(n), format_double(alpha), regime, format_double(numerical),
                                format_double(slow), format_double(intermediate), format_double(fast),
                                format_double(leading), format_double(relative_error(slow, numerical)),
                                format_double(relative_error(intermediate, numerical)),
                                format_double(relative_error(fast, numerical)),
                                format_double(relative_error(leading, numerical))});
    }
  }
  out.seconds = seconds_since(start);
  return out;
}

RunResult split_table(const RunSpec& spec) {
  validate_spec(spec);
  const auto start = Clock::now();
  RunResult out;
  out.table.header = {"lambda",         "n",          "regime",        "integral", "asymptotic",
                      "boundary_layer", "gap_asymptotic", "gap_boundary_layer"};
  for (double lambda : grid_or(spec.lambda_grid, {0.7, 0.95, 1.0, 1.05, 1.3})) {
    for (double n : grid_or(spec.n_grid, {static_cast<double>(spec.n)})) {
      const double integral = splitting_integral(lambda, n);
      const double asymptotic = splitting_asymptotic(lambda, n);
      const double layer = splitting_boundary_layer(lambda, n);
      const SplittingRegime regime = splitting_regime(lambda, n);
      const char* label = regime == SplittingRegime::near ? "near"
                          : regime == SplittingRegime::below ? "below"
                                                             : "above";
      out.table.rows.push_back({format_double(lambda), format_double(n), label, format_double(integral),
                                format_double(asymptotic), format_double(layer),
                                format_double(std::abs(asymptotic - integral)),
                                format_double(std::abs(layer - integral))});
    }
  }
  out.seconds = seconds_since(start);
  return out;
}

ValidationReport run_validation(const RunSpec& spec) {
  RunSpec s = spec;
  s.command = Command::validate;
  validate_spec(s);
  ValidationReport report;
  report.sampler = run_sample_campaign(s);
  report.oracle = run_oracle_campaign(s);

  for (std::uint64_t r : {std::uint64_t{1}, std::uint64_t{3}, std::uint64_t{10}, s.k}) {
    if (r <= s.k && std::find(report.ranks.begin(), report.ranks.end(), r) == report.ranks.end()) {
      report.ranks.push_back(r);
    }
  }
  for (std::uint64_t r : report.ranks) {
    const std::vector<double> a = rank_times(report.sampler, r);
    const std::vector<double> b = rank_times(report.oracle, r);
    const std::string tag = " (rank " + std::to_string(r) + ")";
    if (a.empty() || b.empty()) {
      report.checks.push_back({"arrivals present" + tag, 0.0, 1.0, false});
      report.per_rank.push_back({});
      continue;
    }
    const ComparisonReport c = compare_distributions(a, b);
    report.per_rank.push_back(c);
    report.checks.push_back({"relative mean gap" + tag, std::abs(c.mean_gap), kMeanGapLimit,
                             std::abs(c.mean_gap) < kMeanGapLimit});
    report.checks.push_back({"relative variance gap" + tag, std::abs(c.var_gap), kVarianceGapLimit,
                             std::abs(c.var_gap) < kVarianceGapLimit});
    if (r == 1) report.checks.push_back({"KS statistic" + tag, c.ks, kKsLimit, c.ks < kKsLimit});
  }

  if (s.gamma == 0.0 && s.alpha == 0.0) {
    const Geometry g = make_geometry(s);
    const ValidityWindow window = validity_window(g, s.f_max);
    SamplerOptions options;
    options.f_max = s.f_max;
    options.time_distortion = s.time_distortion;
    std::vector<double> killed_t1;
    for (std::uint64_t r = 0; r < s.replicas; ++r) {
      RngStream rng(s.seed, static_cast<std::uint32_t>(r));
      const SampleResult res = sample_first_k_with_killing(g, window, s.n, 1, KillingSpec{0.0}, rng, options);
      if (!res.records.empty()) killed_t1.push_back(res.records.front().time);
    }
    const std::vector<double> plain_t1 = rank_times(report.sampler, 1);
    const double d = killed_t1.empty() || plain_t1.empty() ? 1.0 : ks_two_sample(killed_t1, plain_t1);
    report.checks.push_back({"killing gamma=0 vs plain KS", d, kKillingEquivalenceKs, d < kKillingEquivalenceKs});
  }

  report.passed = std::all_of(report.checks.begin(), report.checks.end(), [](const Check& c) { return c.passed; });
  return report;
}

BenchReport run_bench(const RunSpec& spec, int repeats) {
  RunSpec s = spec;
  s.threads = 1;
  const std::vector<double> ns = grid_or(spec.n_grid, {1e3, 1e5, 1e8});
  const std::vector<double> ks = grid_or(spec.k_grid, {1, 10, 100});
  BenchReport report;
  for (double k : ks) {
    for (double n : ns) {
      s.n = static_cast<std::uint64_t>(n);
      s.k = static_cast<std::uint64_t>(k);
      s.command = Command::sample;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < std::max(repeats, 1); ++i) {
        const auto start = Clock::now();
        run_sample_campaign(s);
        best = std::min(best, seconds_since(start));
      }
      report.points.push_back({n, s.k, best});
    }
  }
  for (double k : ks) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const BenchPoint& p : report.points) {
      if (p.k == static_cast<std::uint64_t>(k)) {
        lo = std::min(lo, p.seconds);
        hi = std::max(hi, p.seconds);
      }
    }
    report.worst_spread = std::max(report.worst_spread, hi / lo);
  }
  const double mid_n = ns[ns.size() / 2];
  std::vector<double> xs;
  std::vector<double> ys;
  for (const BenchPoint& p : report.points) {
    if (p.n == mid_n) {
      xs.push_back(static_cast<double>(p.k));
      ys.push_back(p.seconds);
    }
  }
  if (xs.size() >= 2) {
    const double mx = mean(xs);
    const double my = mean(ys);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
      syy += (ys[i] - my) * (ys[i] - my);
    }
    report.linear_r2 = sxx > 0.0 && syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  }
  report.spread_ok = report.worst_spread <= 2.0;
  report.linear_ok = report.linear_r2 > 0.95;
  return report;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(std::ostream& os, const RunResult& result, bool emit_killed) {
  if (!result.table.header.empty()) {
    for (std::size_t i = 0; i < result.table.header.size(); ++i) {
      os << (i ? "," : "") << result.table.header[i];
    }
    os << '\n';
    for (const auto& row : result.table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
      os << '\n';
    }
    return;
  }
  os << "replica,rank,time,target,killed\n";
  for (const Row& r : result.records) {
    if (r.killed && !emit_killed) continue;
    os << r.replica << ',' << r.rank << ',' << format_double(r.time) << ',' << r.target << ','
       << (r.killed ? 1 : 0) << '\n';
  }
}

std::string to_json(const RunSpec& spec, const RunResult& result) {
  using nlohmann::json;
  json j;
  j["spec"] = json::parse(spec_to_json(spec));
  json records = json::array();
  for (const Row& r : result.records) {
    if (r.killed && !spec.emit_killed) continue;
    records.push_back({{"replica", r.replica}, {"rank", r.rank}, {"time", r.time}, {"target", r.target},
                       {"killed", r.killed}});
  }
  j["records"] = std::move(records);
  auto ranks = [](const std::vector<RankSummary>& v) {
    json a = json::array();
    for (const RankSummary& s : v) {
      a.push_back({{"rank", s.rank}, {"count", s.count}, {"mean", s.mean}, {"variance", s.variance}});
    }
    return a;
  };
  j["summary"] = {{"status", to_string(result.status)},
                  {"ranks", ranks(result.ranks)},
                  {"unconditional", ranks(result.unconditional)},
                  {"regime", result.regime},
                  {"warnings", result.warnings},
                  {"seconds", result.seconds}};
  if (!result.table.header.empty()) {
    j["table"] = {{"header", result.table.header}, {"rows", result.table.rows}};
  }
  return j.dump(2);
}

std::string format_summary(const RunResult& result) {
  std::ostringstream os;
  os << "# status: " << to_string(result.status) << "\n";
  if (!result.regime.empty()) os << "# emission regime: " << result.regime << "\n";
  for (const RankSummary& s : result.ranks) {
    os << "# rank " << s.rank << ": count=" << s.count << " mean=" << fmt_short(s.mean)
       << " variance=" << fmt_short(s.variance) << "\n";
  }
  for (const RankSummary& s : result.unconditional) {
    os << "# candidate " << s.rank << " (unconditional): count=" << s.count << " mean=" << fmt_short(s.mean)
       << " variance=" << fmt_short(s.variance) << "\n";
  }
  for (const std::string& w : result.warnings) os << "# warning: " << w << "\n";
  os << "# elapsed: " << fmt_short(result.seconds) << " s\n";
  return os.str();
}

}  // namespace extremesim::cli
