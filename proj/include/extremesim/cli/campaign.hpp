#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "extremesim/cli/run_spec.hpp"
#include "extremesim/oracle/stats.hpp"
#include "extremesim/sampler/sampler.hpp"

namespace extremesim::cli {

struct Row {
  std::uint64_t replica = 0;
  std::uint64_t rank = 0;
  double time = 0.0;
  std::size_t target = 0;
  bool killed = false;

  friend bool operator==(const Row&, const Row&) = default;
};

struct RankSummary {
  std::uint64_t rank = 0;
  std::uint64_t count = 0;
  double mean = 0.0;
  double variance = 0.0;
};

/// Preformatted table for grid commands (mfat, split, bench, validate).
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct RunResult {
  std::vector<Row> records;  // per replica, in arrival order; killed rows included
  std::vector<RankSummary> ranks;          // accepted arrivals by rank
  std::vector<RankSummary> unconditional;  // killing runs: j-th candidate regardless of fate
  std::string regime;                      // emission regime when alpha > 0
  std::vector<std::string> warnings;       // distinct messages with replica counts
  RunStatus status = RunStatus::complete;  // first non-complete status seen
  Table table;
  double seconds = 0.0;
};

/// Runs body(i) for i in [0, count) on `threads` workers. Every index runs
/// exactly once; the first exception is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

/// Sampler campaign: replica r draws from RngStream(seed, r). Dispatches to
/// the emission sampler when alpha > 0, the killing sampler when gamma > 0.
RunResult run_sample_campaign(const RunSpec& spec);

/// Oracle campaign: replica r runs run_oracle on RngStream(seed, r).
RunResult run_oracle_campaign(const RunSpec& spec);

/// Recomputes `ranks` (and `unconditional` when `killing`) from `records`.
void summarize(RunResult& result, bool killing);

/// Accepted arrival times of the given rank across replicas.
std::vector<double> rank_times(const RunResult& result, std::uint64_t rank);

RunResult mfat_table(const RunSpec& spec);
RunResult split_table(const RunSpec& spec);

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct ValidationReport {
  std::vector<Check> checks;
  std::vector<ComparisonReport> per_rank;
  std::vector<std::uint64_t> ranks;
  RunResult sampler;
  RunResult oracle;
  bool passed = false;
};

inline constexpr double kMeanGapLimit = 0.05;
inline constexpr double kVarianceGapLimit = 0.15;
inline constexpr double kKsLimit = 0.03;
inline constexpr double kKillingEquivalenceKs = 0.01;

/// Paired sampler and oracle campaigns on the same spec, compared at ranks
/// {1, 3, 10} that do not exceed k (plus k itself), and the gamma = 0
/// killing sampler compared with the plain one.
ValidationReport run_validation(const RunSpec& spec);

struct BenchPoint {
  double n = 0.0;
  std::uint64_t k = 0;
  double seconds = 0.0;
};

struct BenchReport {
  std::vector<BenchPoint> points;
  double worst_spread = 0.0;      // max over k of (slowest / fastest across n)
  double linear_r2 = 0.0;         // fit of seconds against k, at the middle n
  bool spread_ok = false;         // worst_spread <= 2
  bool linear_ok = false;         // linear_r2 > 0.95
};

/// Times sampler campaigns of spec.replicas replicas on one thread, best of
/// `repeats`, over the n grid (default {1e3, 1e5, 1e8}) and k grid (default
/// {1, 10, 100}).
BenchReport run_bench(const RunSpec& spec, int repeats = 3);

std::string format_double(double x);

/// Header `replica,rank,time,target,killed`; killed rows only with emit_killed.
/// Grid commands write their table instead.
void write_csv(std::ostream& os, const RunResult& result, bool emit_killed);
std::string to_json(const RunSpec& spec, const RunResult& result);
/// Human-readable summary block (per-rank statistics and every warning).
std::string format_summary(const RunResult& result);

}  // namespace extremesim::cli
