#include "qclose/cli.hpp"

#include "qclose/closeness.hpp"
#include "qclose/experiments.hpp"
#include "qclose/random.hpp"
#include "qclose/state_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace qclose {

namespace {

std::string format_fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

RunConfig::Format parse_format(const std::string& name) {
  if (name == "text") return RunConfig::Format::text;
  if (name == "csv") return RunConfig::Format::csv;
  if (name == "json") return RunConfig::Format::json;
  throw UsageError("unknown output format '" + name + "'");
}

struct ResolvedState {
  UnitaryOp oracle;
  std::string source;
  bool renormalized = false;
  double norm_deviation = 0.0;
};

// A state argument is either a family spec or a path to a JSON state file.
ResolvedState resolve_state_arg(const std::string& arg,
                                std::uint64_t fallback_seed,
                                std::ostream& err) {
  if (is_family_spec(arg)) {
    try {
      const FamilySpec spec = parse_family_spec(arg);
      return {family_oracle(spec, fallback_seed), arg, false, 0.0};
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }
  LoadedState loaded = read_state_json(arg);
  if (loaded.renormalized) {
    err << "warning: " << arg << " had norm deviation "
        << format_full(loaded.norm_deviation) << "; renormalized\n";
  }
  return {state_preparation_oracle(loaded.state), arg, loaded.renormalized,
          loaded.norm_deviation};
}

PreparedPair resolve_pair(const RunConfig& config, std::ostream& err,
                          ResolvedState* out_a = nullptr,
                          ResolvedState* out_b = nullptr) {
  ResolvedState a = resolve_state_arg(config.state_a,
                                      derive_seed(config.seed, 0xA), err);
  ResolvedState b = resolve_state_arg(config.state_b,
                                      derive_seed(config.seed, 0xB), err);
  if (a.oracle.num_qubits() != b.oracle.num_qubits()) {
    throw InputError("states act on different qubit counts: " +
                     std::to_string(a.oracle.num_qubits()) + " vs " +
                     std::to_string(b.oracle.num_qubits()));
  }
  if (out_a) *out_a = a;
  if (out_b) *out_b = b;
  return PreparedPair(a.oracle, b.oracle);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw InputError("cannot write output file '" + path + "'");
  }
  return out;
}

// --- subcommand runners -----------------------------------------------------

int run_exact(const RunConfig& config, std::ostream& out, std::ostream& err) {
  ResolvedState a{UnitaryOp::identity(1), "", false, 0.0};
  ResolvedState b = a;
  const PreparedPair pair = resolve_pair(config, err, &a, &b);
  const ClosenessReport report = exact_closeness(pair);

  if (!config.dump_state_a.empty()) {
    write_state_json(pair.state_phi(), config.dump_state_a);
  }
  if (!config.dump_state_b.empty()) {
    write_state_json(pair.state_psi(), config.dump_state_b);
  }

  std::ostringstream body;
  if (config.format == RunConfig::Format::json) {
    nlohmann::json doc{{"command", "exact"},
                       {"trace_distance", report.trace_distance},
                       {"sqrt_fidelity", report.sqrt_fidelity},
                       {"squared_fidelity", report.squared_fidelity},
                       {"helstrom_error", report.helstrom_error},
                       {"method", to_string(report.method)},
                       {"queries_or_samples", report.queries_or_samples}};
    body << doc.dump(2) << '\n';
  } else {
    body << "T=" << format_fixed(report.trace_distance)
         << " F=" << format_fixed(report.sqrt_fidelity)
         << " F2=" << format_fixed(report.squared_fidelity)
         << " p_err=" << format_fixed(report.helstrom_error) << '\n';
  }
  if (config.output.empty()) {
    out << body.str();
  } else {
    open_output(config.output) << body.str();
  }
  return kExitOk;
}

int run_estimate(const RunConfig& config, std::ostream& out,
                 std::ostream& err) {
  const PreparedPair pair = resolve_pair(config, err);
  const ClosenessReport exact = exact_closeness(pair);

  const auto single = [&](std::uint64_t seed) {
    if (config.method == "td") {
      return estimate_trace_distance(pair, config.eps, seed);
    }
    if (config.method == "sf") {
      return estimate_sqrt_fidelity(pair, config.eps, seed);
    }
    return estimate_squared_fidelity(pair, config.eps, seed);
  };
  const int rounds = config.rounds > 0 ? config.rounds : 1;
  const EstimationResult result =
      rounds > 1 ? amplify(single, rounds, config.seed) : single(config.seed);

  const double exact_value = config.method == "td"   ? exact.trace_distance
                             : config.method == "sf" ? exact.sqrt_fidelity
                                                     : exact.squared_fidelity;
  const double abs_error = std::fabs(result.estimate - exact_value);

  std::ostringstream body;
  if (config.format == RunConfig::Format::json) {
    nlohmann::json doc{{"command", "estimate"}, {"method", config.method},
                       {"eps", config.eps},     {"estimate", result.estimate},
                       {"exact", exact_value},  {"abs_error", abs_error},
                       {"queries", result.queries_used},
                       {"repetitions", result.repetitions},
                       {"seed", config.seed}};
    if (config.method == "td") {
      doc["helstrom_error"] = 0.5 - result.estimate / 2.0;
      doc["exact_helstrom_error"] = exact.helstrom_error;
    }
    body << doc.dump(2) << '\n';
  } else if (config.format == RunConfig::Format::csv) {
    body << "method,eps,estimate,exact,abs_error,queries,seed\n"
         << config.method << ',' << format_full(config.eps) << ','
         << format_full(result.estimate) << ',' << format_full(exact_value)
         << ',' << format_full(abs_error) << ',' << result.queries_used << ','
         << config.seed << '\n';
  } else {
    body << "method=" << config.method << " eps=" << format_fixed(config.eps)
         << " estimate=" << format_fixed(result.estimate)
         << " exact=" << format_fixed(exact_value)
         << " abs_error=" << format_fixed(abs_error)
         << " queries=" << result.queries_used << '\n';
    if (config.method == "td") {
      body << "helstrom_error=" << format_fixed(0.5 - result.estimate / 2.0)
           << " exact_helstrom_error=" << format_fixed(exact.helstrom_error)
           << '\n';
    }
  }
  if (config.output.empty()) {
    out << body.str();
  } else {
    open_output(config.output) << body.str();
  }
  return kExitOk;
}

int run_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  (void)err;
  const SweepMethod method = sweep_method_from_string(config.method);
  std::vector<double> grid = config.eps_grid;
  if (grid.empty()) grid = {0.1, 0.05, 0.025, 0.0125};

  const std::vector<ExperimentRecord> records =
      sweep(config.state_a, config.state_b, method, grid, config.trials,
            config.seed, config.jobs);
  const double exponent = grid.size() >= 3 ? fit_scaling(records) : 0.0;

  std::ostringstream body;
  if (config.format == RunConfig::Format::json) {
    nlohmann::json doc;
    doc["schema"] = 1;
    doc["records"] = nlohmann::json::parse(records_to_json(records));
    if (grid.size() >= 3) doc["exponent"] = exponent;
    body << doc.dump(2) << '\n';
  } else if (config.format == RunConfig::Format::csv) {
    write_records_csv(records, body);
    if (grid.size() >= 3) body << "# exponent," << format_full(exponent) << '\n';
  } else {
    body << "method=" << to_string(method) << " trials=" << config.trials
         << " seed=" << config.seed << '\n';
    for (const auto& r : records) {
      body << "  eps=" << format_fixed(r.eps)
           << " success_rate=" << format_fixed(r.success_rate)
           << " mean_queries=" << format_fixed(r.mean_queries)
           << " exact=" << format_fixed(r.exact_value) << '\n';
    }
    if (grid.size() >= 3) {
      body << "exponent=" << format_fixed(exponent) << '\n';
    }
  }
  if (config.output.empty()) {
    out << body.str();
  } else {
    open_output(config.output) << body.str();
  }
  return kExitOk;
}

int run_distinguish(const RunConfig& config, std::ostream& out,
                    std::ostream& err) {
  (void)err;
  const int rounds =
      config.rounds > 0 ? config.rounds : kF2DistinguishRounds;
  const DistinguishSummary summary =
      run_distinguish_trials(config.which, config.eps, config.n, config.trials,
                             config.seed, config.jobs, rounds);

  std::ostringstream body;
  if (config.format == RunConfig::Format::json) {
    nlohmann::json doc{{"command", "distinguish"},
                       {"which", config.which},
                       {"eps", config.eps},
                       {"n", config.n},
                       {"trials", summary.trials},
                       {"correct", summary.correct},
                       {"success_rate", summary.success_rate},
                       {"mean_queries", summary.mean_queries},
                       {"seed", config.seed}};
    body << doc.dump(2) << '\n';
  } else {
    body << "which=" << config.which << " eps=" << format_fixed(config.eps)
         << " n=" << config.n << " trials=" << summary.trials
         << " correct=" << summary.correct
         << " success_rate=" << format_fixed(summary.success_rate)
         << " mean_queries=" << format_fixed(summary.mean_queries) << '\n';
  }
  if (config.output.empty()) {
    out << body.str();
  } else {
    open_output(config.output) << body.str();
  }
  return kExitOk;
}

int run_swap_test(const RunConfig& config, std::ostream& out,
                  std::ostream& err) {
  const PreparedPair pair = resolve_pair(config, err);
  const MeasurementDistribution dist = swap_test_ancilla_distribution(pair);
  const double exact_p0 = dist.probability(0);

  auto gen = seeded_engine(config.seed);
  std::uint64_t zeros = 0;
  for (int i = 0; i < config.shots; ++i) {
    if (uniform01(gen) < exact_p0) ++zeros;
  }
  const double freq = static_cast<double>(zeros) / config.shots;
  const double f2_estimate = std::max(0.0, 2.0 * freq - 1.0);

  std::ostringstream body;
  if (config.format == RunConfig::Format::json) {
    nlohmann::json doc{{"command", "swap-test"},
                       {"shots", config.shots},
                       {"zero_frequency", freq},
                       {"exact_zero_probability", exact_p0},
                       {"squared_fidelity_estimate", f2_estimate},
                       {"samples", config.shots},
                       {"seed", config.seed}};
    body << doc.dump(2) << '\n';
  } else {
    body << "shots=" << config.shots
         << " zero_frequency=" << format_fixed(freq)
         << " exact_zero_probability=" << format_fixed(exact_p0)
         << " F2_estimate=" << format_fixed(f2_estimate) << '\n';
  }
  if (config.output.empty()) {
    out << body.str();
  } else {
    open_output(config.output) << body.str();
  }
  return kExitOk;
}

void build_app(CLI::App& app, RunConfig& config, std::string& format_name) {
  app.require_subcommand(1);
  app.fallthrough(false);

  const auto check_eps = CLI::Range(0.0, 1.0).description("in (0,1)");

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", config.seed, "base RNG seed")
        ->envname("QCLOSE_SEED");
    cmd->add_option("--jobs", config.jobs, "parallel trial workers")
        ->envname("QCLOSE_JOBS")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--output", config.output, "write the report here");
    cmd->add_option("--format", format_name, "text, csv, or json");
  };

  auto* estimate = app.add_subcommand("estimate", "run one estimator");
  estimate->add_option("--method", config.method, "td, sf, or f2")
      ->required()
      ->check(CLI::IsMember({"td", "sf", "f2"}));
  estimate->add_option("--eps", config.eps, "additive error")->check(check_eps);
  estimate->add_option("--state-a", config.state_a, "file or family spec")
      ->required();
  estimate->add_option("--state-b", config.state_b, "file or family spec")
      ->required();
  estimate->add_option("--rounds", config.rounds,
                       "odd median-amplification rounds (1 = single shot)");
  add_common(estimate);

  auto* exact = app.add_subcommand("exact", "classical reference values");
  exact->add_option("--state-a", config.state_a)->required();
  exact->add_option("--state-b", config.state_b)->required();
  exact->add_option("--dump-state-a", config.dump_state_a,
                    "write the resolved state A to this JSON file");
  exact->add_option("--dump-state-b", config.dump_state_b);
  add_common(exact);

  auto* sweep_cmd = app.add_subcommand("sweep", "epsilon sweep with records");
  sweep_cmd->add_option("--method", config.method, "sweep method name")
      ->required();
  sweep_cmd->add_option("--eps-grid", config.eps_grid,
                        "epsilon values (default 0.1 0.05 0.025 0.0125)");
  sweep_cmd->add_option("--trials", config.trials, "trials per record")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--state-a", config.state_a)->required();
  sweep_cmd->add_option("--state-b", config.state_b)->required();
  add_common(sweep_cmd);

  auto* distinguish = app.add_subcommand("distinguish",
                                         "p+/p- discrimination experiment");
  distinguish->add_option("--which", config.which, "td or f2")
      ->required()
      ->check(CLI::IsMember({"td", "f2"}));
  distinguish->add_option("--eps", config.eps, "bias and estimator error")
      ->check(check_eps);
  distinguish->add_option("--n", config.n, "distribution support size (even)");
  distinguish->add_option("--trials", config.trials, "trials per ground truth")
      ->check(CLI::PositiveNumber);
  distinguish->add_option("--rounds", config.rounds,
                          "f2 amplification rounds (default 13)");
  add_common(distinguish);

  auto* swap = app.add_subcommand("swap-test", "sampled SWAP-test frequency");
  swap->add_option("--state-a", config.state_a)->required();
  swap->add_option("--state-b", config.state_b)->required();
  swap->add_option("--shots", config.shots, "number of shots")
      ->check(CLI::PositiveNumber);
  add_common(swap);
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args) {
  RunConfig config;
  std::string format_name = "text";
  CLI::App app{"pure-state closeness estimation workbench"};
  build_app(app, config, format_name);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    std::ostringstream help;
    help << app.help();
    throw UsageError("help:" + help.str());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  config.format = parse_format(format_name);
  if (app.got_subcommand("estimate")) {
    config.command = RunConfig::Command::estimate;
  } else if (app.got_subcommand("exact")) {
    config.command = RunConfig::Command::exact;
  } else if (app.got_subcommand("sweep")) {
    config.command = RunConfig::Command::sweep;
  } else if (app.got_subcommand("distinguish")) {
    config.command = RunConfig::Command::distinguish;
  } else {
    config.command = RunConfig::Command::swap_test;
  }

  if (!(config.eps > 0.0) || !(config.eps < 1.0)) {
    throw UsageError("--eps must lie strictly inside (0,1)");
  }
  for (double eps : config.eps_grid) {
    if (!(eps > 0.0) || !(eps < 1.0)) {
      throw UsageError("--eps-grid values must lie strictly inside (0,1)");
    }
  }
  if (config.command == RunConfig::Command::distinguish &&
      (config.n < 2 || config.n % 2 != 0)) {
    throw UsageError("--n must be even and >= 2");
  }
  if (config.rounds < 0 || (config.rounds > 0 && config.rounds % 2 == 0)) {
    throw UsageError("--rounds must be odd");
  }
  if (config.trials < 1) {
    throw UsageError("--trials must be >= 1");
  }
  return config;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case RunConfig::Command::estimate: return run_estimate(config, out, err);
      case RunConfig::Command::exact: return run_exact(config, out, err);
      case RunConfig::Command::sweep: return run_sweep(config, out, err);
      case RunConfig::Command::distinguish:
        return run_distinguish(config, out, err);
      case RunConfig::Command::swap_test:
        return run_swap_test(config, out, err);
    }
    return kExitOk;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args;
  args.reserve(static_cast<std::size_t>(argc > 1 ? argc - 1 : 0));
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);

  RunConfig config;
  try {
    config = parse_args(args);
  } catch (const UsageError& e) {
    const std::string what = e.what();
    if (what.rfind("help:", 0) == 0) {
      std::cout << what.substr(5);
      return kExitOk;
    }
    std::cerr << "usage error: " << what << '\n'
              << "run with --help for usage\n";
    return kExitUsage;
  }
  return run(config, std::cout, std::cerr);
}

}  // namespace qclose
