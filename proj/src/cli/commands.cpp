#include "extremesim/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "extremesim/cli/campaign.hpp"
#include "extremesim/core/geometry.hpp"

namespace extremesim::cli {
namespace {

struct Flags {
  RunSpec spec;
  double n = 1000;
  std::string command_name;
  std::string format = "csv";
  std::vector<double> eps;
  std::vector<double> radius;
  bool no_bridge = false;
  int repeats = 3;
};

std::uint64_t to_count(double value, const char* flag) {
  if (!(value >= 1.0) || value != std::floor(value) || value > 9.0e18) {
    throw SpecError(std::string(flag) + " must be a positive integer");
  }
  return static_cast<std::uint64_t>(value);
}

void add_common_options(CLI::App& app, Flags& f) {
  RunSpec& s = f.spec;
  app.add_option("--dim", s.dim, "Spatial dimension (1, 2 or 3)");
  app.add_option("--diffusion", s.diffusion, "Diffusion coefficient D");
  app.add_option("--delta", s.delta, "Source-to-target distances, comma separated")->delimiter(',');
  auto* eps = app.add_option("--eps", f.eps, "2D target sizes (one per delta)")->delimiter(',');
  auto* radius = app.add_option("--radius", f.radius, "3D target radii (one per delta)")->delimiter(',');
  eps->excludes(radius);
  app.add_option("--n", f.n, "Particle count (accepts 1e5 style)");
  app.add_option("--k", s.k, "Number of ordered arrivals per replica");
  app.add_option("--replicas", s.replicas, "Independent replicas");
  app.add_option("--gamma", s.gamma, "Killing rate (0 disables killing)");
  app.add_option("--alpha", s.alpha, "Emission rate (0 = instantaneous release)");
  app.add_option("--seed", s.seed, "Top-level seed");
  app.add_option("--threads", s.threads, "Worker threads (0 = available parallelism)");
  app.add_option("--f-max", s.f_max, "Upper end of the short-time validity window");
  app.add_option("--out", s.out, "Output file (default stdout)");
  app.add_option("--format", f.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--emit-killed", s.emit_killed, "Also write rejected (killed) candidates");
  app.add_option("--n-grid", s.n_grid, "Particle counts for mfat / split / bench grids")->delimiter(',');
  app.add_option("--alpha-grid", s.alpha_grid, "Emission rates for the mfat grid")->delimiter(',');
  app.add_option("--lambda-grid", s.lambda_grid, "Distance ratios for the split grid")->delimiter(',');
  app.add_option("--k-grid", s.k_grid, "Arrival counts for the bench grid")->delimiter(',');
  app.add_option("--repeats", f.repeats, "Bench: timing repeats per point (best is kept)");
  app.add_option("--dt", s.dt, "Oracle time step");
  app.add_option("--max-steps", s.max_steps, "Oracle step cap per particle");
  app.add_flag("--no-bridge", f.no_bridge, "Oracle: post-step crossing detection only");
  app.add_option("--corrupt-inversion", s.time_distortion,
                 "Multiply every sampled time by this factor (negative control)")
      ->group("");
}

void finish_spec(Flags& f) {
  f.spec.n = to_count(f.n, "--n");
  f.spec.format = parse_format(f.format);
  f.spec.bridge_correction = !f.no_bridge;
  if (!f.eps.empty()) f.spec.size = f.eps;
  if (!f.radius.empty()) f.spec.size = f.radius;
  if (f.spec.dim == 2 && !f.radius.empty()) throw SpecError("--radius applies to --dim 3; use --eps in 2D");
  if (f.spec.dim == 3 && !f.eps.empty()) throw SpecError("--eps applies to --dim 2; use --radius in 3D");
  f.spec.command = parse_command(f.command_name);
}

void write_result(const RunSpec& spec, const RunResult& result, std::ostream& out) {
  std::ofstream file;
  std::ostream* os = &out;
  if (!spec.out.empty()) {
    file.open(spec.out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file " + spec.out);
    os = &file;
  }
  if (spec.format == OutputFormat::json) {
    *os << to_json(spec, result) << '\n';
  } else {
    write_csv(*os, result, spec.emit_killed);
  }
}

int exit_for(const RunResult& result) {
  return result.status == RunStatus::validity_breach || result.status == RunStatus::root_failure
             ? kExitValidityBreach
             : kExitOk;
}

int cmd_validate(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  const ValidationReport report = run_validation(spec);
  RunResult table;
  table.table.header = {"check", "value", "threshold", "result"};
  for (const Check& c : report.checks) {
    table.table.rows.push_back(
        {c.name, format_double(c.value), format_double(c.threshold), c.passed ? "PASS" : "FAIL"});
  }
  table.warnings = report.sampler.warnings;
  for (const std::string& w : report.oracle.warnings) table.warnings.push_back(w);
  write_result(spec, table, out);
  for (std::size_t i = 0; i < report.ranks.size(); ++i) {
    const ComparisonReport& c = report.per_rank[i];
    err << "# rank " << report.ranks[i] << ": sampler mean=" << c.mean_a << " var=" << c.var_a
        << " | oracle mean=" << c.mean_b << " var=" << c.var_b << " | KS=" << c.ks
        << " mean gap 95% CI [" << c.mean_gap_ci.lo << ", " << c.mean_gap_ci.hi << "]\n";
  }
  for (const std::string& w : table.warnings) err << "# warning: " << w << "\n";
  err << "# sampler " << report.sampler.seconds << " s, oracle " << report.oracle.seconds << " s\n";
  err << (report.passed ? "# validate: PASS\n" : "# validate: FAIL\n");
  return report.passed ? kExitOk : kExitValidationFail;
}

int cmd_bench(const RunSpec& spec, int repeats, std::ostream& out, std::ostream& err) {
  validate_spec(spec);
  const BenchReport report = run_bench(spec, repeats);
  RunResult table;
  table.table.header = {"n", "k", "replicas", "seconds"};
  for (const BenchPoint& p : report.points) {
    table.table.rows.push_back(
        {format_double(p.n), std::to_string(p.k), std::to_string(spec.replicas), format_double(p.seconds)});
  }
  write_result(spec, table, out);
  err << "# n-independence: worst spread " << report.worst_spread << "x across n ("
      << (report.spread_ok ? "PASS" : "FAIL") << ", limit 2x)\n";
  err << "# k-linearity: R^2 = " << report.linear_r2 << " (" << (report.linear_ok ? "PASS" : "FAIL")
      << ", limit 0.95)\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Extreme first-passage statistics: samplers, asymptotics and a Brownian reference"};
  app.set_config("--config", "", "Config file (key = value or TOML); command-line flags win");
  app.require_subcommand(1);
  Flags flags;
  add_common_options(app, flags);
  const std::pair<const char*, const char*> commands[] = {
      {"sample", "Sample the first k arrival times among n particles"},
      {"mfat", "Mean fastest arrival time over n and alpha grids"},
      {"split", "Splitting probability table over lambda and n grids"},
      {"oracle", "Brute-force Brownian reference (1D)"},
      {"validate", "Compare sampler against the oracle"},
      {"bench", "Wall-clock scaling in n and k"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    sub->callback([&flags, name = std::string(name)] { flags.command_name = name; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kExitOk : kExitSpecError;
  }

  try {
    finish_spec(flags);
    const RunSpec& spec = flags.spec;
    switch (spec.command) {
      case Command::sample: {
        const RunResult r = run_sample_campaign(spec);
        write_result(spec, r, out);
        err << format_summary(r);
        return exit_for(r);
      }
      case Command::oracle: {
        const RunResult r = run_oracle_campaign(spec);
        write_result(spec, r, out);
        err << format_summary(r);
        return exit_for(r);
      }
      case Command::mfat:
      case Command::split: {
        const RunResult r = spec.command == Command::mfat ? mfat_table(spec) : split_table(spec);
        write_result(spec, r, out);
        err << format_summary(r);
        return kExitOk;
      }
      case Command::validate: return cmd_validate(spec, out, err);
      case Command::bench: return cmd_bench(spec, flags.repeats, out, err);
    }
  } catch (const SpecError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSpecError;
  } catch (const ValidityError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidityBreach;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitSpecError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace extremesim::cli
