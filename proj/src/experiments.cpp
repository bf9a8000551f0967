#include "qclose/experiments.hpp"

#include "qclose/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>

namespace qclose {

// ---------------------------------------------------------------------------
// State families
// ---------------------------------------------------------------------------

bool is_family_spec(const std::string& text) {
  return text.rfind("family:", 0) == 0;
}

FamilySpec parse_family_spec(const std::string& text) {
  if (!is_family_spec(text)) {
    throw std::invalid_argument("family spec must start with 'family:'");
  }
  std::string body = text.substr(7);
  FamilySpec spec;
  const auto open = body.find('(');
  if (open == std::string::npos) {
    spec.name = body;
    if (spec.name.empty()) {
      throw std::invalid_argument("empty family name in '" + text + "'");
    }
    return spec;
  }
  if (body.back() != ')') {
    throw std::invalid_argument("unbalanced parentheses in '" + text + "'");
  }
  spec.name = body.substr(0, open);
  std::string args = body.substr(open + 1, body.size() - open - 2);
  std::size_t pos = 0;
  while (pos < args.size()) {
    auto comma = args.find(',', pos);
    if (comma == std::string::npos) comma = args.size();
    const std::string item = args.substr(pos, comma - pos);
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("expected key=value, got '" + item + "'");
    }
    const std::string key = item.substr(0, eq);
    try {
      std::size_t used = 0;
      const double value = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) {
        throw std::invalid_argument("trailing characters");
      }
      spec.params[key] = value;
    } catch (const std::exception&) {
      throw std::invalid_argument("bad numeric value in '" + item + "'");
    }
    pos = comma + 1;
  }
  return spec;
}

namespace {

double require_param(const FamilySpec& spec, const std::string& key) {
  const auto it = spec.params.find(key);
  if (it == spec.params.end()) {
    throw std::invalid_argument("family '" + spec.name + "' needs parameter '" +
                                key + "'");
  }
  return it->second;
}

int int_param(const FamilySpec& spec, const std::string& key) {
  const double v = require_param(spec, key);
  const int i = static_cast<int>(std::llround(v));
  if (std::fabs(v - i) > 1e-9) {
    throw std::invalid_argument("parameter '" + key + "' must be an integer");
  }
  return i;
}

std::vector<double> comb_probabilities(int n) {
  if (n < 2 || n % 2 != 0) {
    throw std::invalid_argument("comb support size must be even and >= 2");
  }
  std::vector<double> p(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; j += 2) {
    p[static_cast<std::size_t>(j)] = 2.0 / n;
  }
  return p;
}

}  // namespace

UnitaryOp family_oracle(const FamilySpec& spec, std::uint64_t fallback_seed) {
  if (spec.name == "basis") {
    return UnitaryOp::identity(int_param(spec, "k"));
  }
  if (spec.name == "hadamard") {
    const int k = int_param(spec, "k");
    UnitaryOp h = gates::hadamard();
    UnitaryOp out = h;
    for (int i = 1; i < k; ++i) out = tensor(out, h);
    return out;
  }
  if (spec.name == "haar") {
    const int k = int_param(spec, "k");
    const std::uint64_t s = spec.params.count("seed")
                                ? static_cast<std::uint64_t>(
                                      std::llround(spec.params.at("seed")))
                                : fallback_seed;
    return haar_unitary(k, s);
  }
  if (spec.name == "pplus") {
    return build_distribution_oracle(
        p_plus_distribution(require_param(spec, "eps"), int_param(spec, "n")));
  }
  if (spec.name == "pminus") {
    return build_distribution_oracle(
        p_minus_distribution(require_param(spec, "eps"), int_param(spec, "n")));
  }
  if (spec.name == "comb") {
    return build_distribution_oracle(comb_probabilities(int_param(spec, "n")));
  }
  throw std::invalid_argument("unknown state family '" + spec.name + "'");
}

namespace {

std::vector<double> pm_distribution(double eps, int n, int sign) {
  if (!(eps > 0.0) || eps > 0.5) {
    throw std::invalid_argument("distribution bias must lie in (0, 1/2]");
  }
  if (n < 2 || n % 2 != 0) {
    throw std::invalid_argument("support size must be even and >= 2");
  }
  std::vector<double> p(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const int parity = (j % 2 == 0) ? 1 : -1;
    p[static_cast<std::size_t>(j)] = (1.0 + sign * parity * 2.0 * eps) / n;
  }
  return p;
}

}  // namespace

std::vector<double> p_plus_distribution(double eps, int n) {
  return pm_distribution(eps, n, +1);
}

std::vector<double> p_minus_distribution(double eps, int n) {
  return pm_distribution(eps, n, -1);
}

StateVector comb_state(int n) {
  const std::vector<double> p = comb_probabilities(n);
  std::size_t d = 1;
  while (d < p.size()) d <<= 1;
  int k = 0;
  while ((std::size_t{1} << k) < d) ++k;
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < p.size(); ++j) {
    amps(static_cast<Eigen::Index>(j)) = std::sqrt(p[j]);
  }
  return StateVector(k, std::move(amps), 1e-9);
}

double hellinger(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("Hellinger distance needs equal support sizes");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double d = std::sqrt(p[j]) - std::sqrt(q[j]);
    sum += d * d;
  }
  return std::sqrt(std::clamp(sum / 2.0, 0.0, 1.0));
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

const char* to_string(SweepMethod m) {
  switch (m) {
    case SweepMethod::optimal_td: return "optimal_td";
    case SweepMethod::optimal_sf: return "optimal_sf";
    case SweepMethod::optimal_f2: return "optimal_f2";
    case SweepMethod::folklore_query_td: return "folklore_query_td";
    case SweepMethod::folklore_query_sf: return "folklore_query_sf";
    case SweepMethod::folklore_query_f2: return "folklore_query_f2";
    case SweepMethod::folklore_sample_td: return "folklore_sample_td";
    case SweepMethod::folklore_sample_sf: return "folklore_sample_sf";
    case SweepMethod::folklore_sample_f2: return "folklore_sample_f2";
  }
  return "?";
}

SweepMethod sweep_method_from_string(const std::string& name) {
  for (const SweepMethod m :
       {SweepMethod::optimal_td, SweepMethod::optimal_sf, SweepMethod::optimal_f2,
        SweepMethod::folklore_query_td, SweepMethod::folklore_query_sf,
        SweepMethod::folklore_query_f2, SweepMethod::folklore_sample_td,
        SweepMethod::folklore_sample_sf, SweepMethod::folklore_sample_f2}) {
    if (name == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown sweep method '" + name + "'");
}

namespace {

double method_exact_value(SweepMethod m, const ClosenessReport& exact) {
  switch (m) {
    case SweepMethod::optimal_td:
    case SweepMethod::folklore_query_td:
    case SweepMethod::folklore_sample_td:
      return exact.trace_distance;
    case SweepMethod::optimal_sf:
    case SweepMethod::folklore_query_sf:
    case SweepMethod::folklore_sample_sf:
      return exact.sqrt_fidelity;
    default:
      return exact.squared_fidelity;
  }
}

struct TrialResult {
  double estimate = 0.0;
  double cost = 0.0;
};

TrialResult run_method_trial(SweepMethod m, const UnitaryOp& oracle_a,
                             const UnitaryOp& oracle_b, double eps,
                             std::uint64_t seed) {
  PreparedPair pair(oracle_a, oracle_b);  // fresh counters per trial
  switch (m) {
    case SweepMethod::optimal_td: {
      const auto r = estimate_trace_distance(pair, eps, seed);
      return {r.estimate, static_cast<double>(r.queries_used)};
    }
    case SweepMethod::optimal_sf: {
      const auto r = estimate_sqrt_fidelity(pair, eps, seed);
      return {r.estimate, static_cast<double>(r.queries_used)};
    }
    case SweepMethod::optimal_f2: {
      const auto r = estimate_squared_fidelity(pair, eps, seed);
      return {r.estimate, static_cast<double>(r.queries_used)};
    }
    case SweepMethod::folklore_query_td: {
      const auto r = folklore_query_trace_distance(pair, eps, seed);
      return {r.estimate, static_cast<double>(r.queries_used)};
    }
    case SweepMethod::folklore_query_sf: {
      const auto r = folklore_query_sqrt_fidelity(pair, eps, seed);
      return {r.estimate, static_cast<double>(r.queries_used)};
    }
    case SweepMethod::folklore_query_f2: {
      const auto r = folklore_query_squared_fidelity(pair, eps, seed);
      return {r.estimate, static_cast<double>(r.queries_used)};
    }
    case SweepMethod::folklore_sample_td: {
      const auto r = folklore_sample_trace_distance(pair, eps, seed);
      return {r.estimate, static_cast<double>(r.samples)};
    }
    case SweepMethod::folklore_sample_sf: {
      const auto r = folklore_sample_sqrt_fidelity(pair, eps, seed);
      return {r.estimate, static_cast<double>(r.samples)};
    }
    default: {
      const auto r = folklore_sample_squared_fidelity(pair, eps, seed);
      return {r.estimate, static_cast<double>(r.samples)};
    }
  }
}

// Static partition; results land in a per-trial slot so any job count gives
// byte-identical output.
void parallel_for(int count, int jobs, const std::function<void(int)>& body) {
  if (jobs <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  const int workers = std::min(jobs, count);
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      for (int i = w; i < count; i += workers) body(i);
    });
  }
  for (auto& t : threads) t.join();
}

}  // namespace

std::vector<ExperimentRecord> sweep(const std::string& family_a,
                                    const std::string& family_b,
                                    SweepMethod method,
                                    const std::vector<double>& eps_grid,
                                    int trials, std::uint64_t seed, int jobs) {
  if (eps_grid.empty()) {
    throw std::invalid_argument("empty epsilon grid");
  }
  for (double eps : eps_grid) {
    if (!(eps > 0.0) || !(eps < 1.0)) {
      throw std::invalid_argument("epsilon values must lie in (0,1)");
    }
  }
  if (trials < 100) {
    throw std::invalid_argument("sweeps need at least 100 trials per record");
  }
  const FamilySpec spec_a = parse_family_spec(family_a);
  const FamilySpec spec_b = parse_family_spec(family_b);

  std::vector<ExperimentRecord> records;
  records.reserve(eps_grid.size());
  for (std::size_t ei = 0; ei < eps_grid.size(); ++ei) {
    const double eps = eps_grid[ei];
    const std::uint64_t record_seed = derive_seed(seed, ei);
    const UnitaryOp oracle_a =
        family_oracle(spec_a, derive_seed(record_seed, 0xA));
    const UnitaryOp oracle_b =
        family_oracle(spec_b, derive_seed(record_seed, 0xB));
    const ClosenessReport exact =
        exact_closeness(PreparedPair(oracle_a, oracle_b));
    const double exact_value = method_exact_value(method, exact);

    std::vector<TrialResult> results(static_cast<std::size_t>(trials));
    parallel_for(trials, jobs, [&](int i) {
      results[static_cast<std::size_t>(i)] =
          run_method_trial(method, oracle_a, oracle_b, eps,
                           derive_seed(record_seed, 1000 + static_cast<std::uint64_t>(i)));
    });

    int successes = 0;
    double cost_sum = 0.0;
    for (const TrialResult& r : results) {
      if (std::fabs(r.estimate - exact_value) < eps) ++successes;
      cost_sum += r.cost;
    }

    ExperimentRecord record;
    record.method = method;
    record.eps = eps;
    record.trials = trials;
    record.success_rate = static_cast<double>(successes) / trials;
    record.mean_queries = cost_sum / trials;
    record.exact_value = exact_value;
    record.seed = seed;
    records.push_back(record);
  }
  return records;
}

double fit_scaling(const std::vector<ExperimentRecord>& records) {
  std::set<double> distinct;
  for (const auto& r : records) distinct.insert(r.eps);
  if (distinct.size() < 3) {
    throw std::invalid_argument(
        "scaling fit needs at least three distinct epsilon values");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const auto n = static_cast<double>(records.size());
  for (const auto& r : records) {
    if (!(r.mean_queries > 0.0)) {
      throw std::invalid_argument("scaling fit needs positive query counts");
    }
    const double x = std::log(1.0 / r.eps);
    const double y = std::log(r.mean_queries);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void write_records_csv(const std::vector<ExperimentRecord>& records,
                       std::ostream& out) {
  out << "schema,method,eps,trials,success_rate,mean_queries,exact_value,seed\n";
  char buf[64];
  const auto fmt = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (const auto& r : records) {
    out << r.schema << ',' << to_string(r.method) << ',' << fmt(r.eps) << ','
        << r.trials << ',' << fmt(r.success_rate) << ','
        << fmt(r.mean_queries) << ',' << fmt(r.exact_value) << ',' << r.seed
        << '\n';
  }
}

std::string records_to_json(const std::vector<ExperimentRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    arr.push_back({{"schema", r.schema},
                   {"method", to_string(r.method)},
                   {"eps", r.eps},
                   {"trials", r.trials},
                   {"success_rate", r.success_rate},
                   {"mean_queries", r.mean_queries},
                   {"exact_value", r.exact_value},
                   {"seed", r.seed}});
  }
  return arr.dump(2);
}

// ---------------------------------------------------------------------------
// Distinguishing reductions
// ---------------------------------------------------------------------------

const char* to_string(PmTruth t) {
  return t == PmTruth::p_plus ? "p_plus" : "p_minus";
}

DistinguishOutcome distinguish_td(const CountingOracle& u_unknown,
                                  PmTruth truth_label, double eps, int n,
                                  std::uint64_t rng_seed) {
  const CountingOracle reference(
      build_distribution_oracle(p_plus_distribution(eps, n)));
  PreparedPair pair(reference, u_unknown);
  const EstimationResult r = estimate_trace_distance(pair, eps, rng_seed);

  DistinguishOutcome outcome;
  outcome.truth = truth_label;
  outcome.statistic_d = r.estimate;
  outcome.verdict = r.estimate < eps ? PmTruth::p_plus : PmTruth::p_minus;
  outcome.queries = r.queries_used;
  return outcome;
}

DistinguishOutcome distinguish_f2(const CountingOracle& u_unknown,
                                  PmTruth truth_label, double eps, int n,
                                  std::uint64_t rng_seed, int rounds) {
  const CountingOracle comb(
      build_distribution_oracle(comb_probabilities(n)));
  PreparedPair pair(comb, u_unknown);
  const EstimationResult r = amplify(
      [&](std::uint64_t shot_seed) {
        return estimate_squared_fidelity(pair, eps, shot_seed);
      },
      rounds, rng_seed);

  DistinguishOutcome outcome;
  outcome.truth = truth_label;
  outcome.statistic_d = r.estimate;
  outcome.verdict = r.estimate > 0.5 ? PmTruth::p_plus : PmTruth::p_minus;
  outcome.queries = r.queries_used;
  return outcome;
}

DistinguishSummary run_distinguish_trials(const std::string& which, double eps,
                                          int n, int trials_per_truth,
                                          std::uint64_t seed, int jobs,
                                          int f2_rounds) {
  if (which != "td" && which != "f2") {
    throw std::invalid_argument("distinguish selector must be 'td' or 'f2'");
  }
  if (trials_per_truth < 1) {
    throw std::invalid_argument("need at least one trial per ground truth");
  }
  const UnitaryOp oracle_plus =
      build_distribution_oracle(p_plus_distribution(eps, n));
  const UnitaryOp oracle_minus =
      build_distribution_oracle(p_minus_distribution(eps, n));

  const int total = 2 * trials_per_truth;
  std::vector<int> correct(static_cast<std::size_t>(total), 0);
  std::vector<double> queries(static_cast<std::size_t>(total), 0.0);
  parallel_for(total, jobs, [&](int i) {
    const PmTruth truth = (i < trials_per_truth) ? PmTruth::p_plus : PmTruth::p_minus;
    const CountingOracle u_unknown(truth == PmTruth::p_plus ? oracle_plus
                                                            : oracle_minus);
    const std::uint64_t trial_seed = derive_seed(seed, static_cast<std::uint64_t>(i));
    const DistinguishOutcome outcome =
        which == "td"
            ? distinguish_td(u_unknown, truth, eps, n, trial_seed)
            : distinguish_f2(u_unknown, truth, eps, n, trial_seed, f2_rounds);
    correct[static_cast<std::size_t>(i)] = outcome.verdict == truth ? 1 : 0;
    queries[static_cast<std::size_t>(i)] = static_cast<double>(outcome.queries);
  });

  DistinguishSummary summary;
  summary.trials = total;
  for (int c : correct) summary.correct += c;
  summary.success_rate = static_cast<double>(summary.correct) / total;
  double qsum = 0.0;
  for (double q : queries) qsum += q;
  summary.mean_queries = qsum / total;
  return summary;
}

}  // namespace qclose
