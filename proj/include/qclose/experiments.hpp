// Reproducible experiment harness: epsilon sweeps with query/sample scaling
// fits, success-rate calibration records, the distribution-distinguishing
// reductions run end to end, and the named state families that cover every
// construction the estimators are exercised on.

#pragma once

#include "qclose/closeness.hpp"
#include "qclose/oracles.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace qclose {

// ---------------------------------------------------------------------------
// State families
// ---------------------------------------------------------------------------

/// Parsed `family:NAME(key=value,...)` spec. Families: basis(k), hadamard(k),
/// haar(k[,seed]), pplus(eps,n), pminus(eps,n), comb(n).
struct FamilySpec {
  std::string name;
  std::map<std::string, double> params;
};

bool is_family_spec(const std::string& text);
FamilySpec parse_family_spec(const std::string& text);

/// Preparation oracle for a family instance. `fallback_seed` feeds haar
/// families without an explicit seed parameter; other families ignore it.
UnitaryOp family_oracle(const FamilySpec& spec, std::uint64_t fallback_seed);

/// p+-(j) = (1 +- (-1)^j 2 eps) / n on [n], n even.
std::vector<double> p_plus_distribution(double eps, int n);
std::vector<double> p_minus_distribution(double eps, int n);

/// sqrt(2/n) sum_j |2j> over j in [n/2].
StateVector comb_state(int n);

/// Hellinger distance sqrt(1/2 sum_j (sqrt(p_j) - sqrt(q_j))^2).
double hellinger(const std::vector<double>& p, const std::vector<double>& q);

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

enum class SweepMethod {
  optimal_td,
  optimal_sf,
  optimal_f2,
  folklore_query_td,
  folklore_query_sf,
  folklore_query_f2,
  folklore_sample_td,
  folklore_sample_sf,
  folklore_sample_f2,
};

const char* to_string(SweepMethod m);
SweepMethod sweep_method_from_string(const std::string& name);

struct ExperimentRecord {
  int schema = 1;
  SweepMethod method = SweepMethod::optimal_td;
  double eps = 0.0;
  int trials = 0;
  double success_rate = 0.0;  // fraction of trials with |estimate - exact| < eps
  double mean_queries = 0.0;  // queries for query methods, shots for sample methods
  double exact_value = 0.0;
  std::uint64_t seed = 0;
};

/// One record per epsilon. Each record draws a fresh pair from the two
/// family specs (seeded deterministically), runs `trials` independent
/// estimations, and scores them against the exact value. trials >= 100.
std::vector<ExperimentRecord> sweep(const std::string& family_a,
                                    const std::string& family_b,
                                    SweepMethod method,
                                    const std::vector<double>& eps_grid,
                                    int trials, std::uint64_t seed,
                                    int jobs = 1);

/// Least-squares slope of log(mean_queries) against log(1/eps).
/// Requires at least three distinct eps values.
double fit_scaling(const std::vector<ExperimentRecord>& records);

/// CSV with header schema,method,eps,trials,success_rate,mean_queries,
/// exact_value,seed; full double precision.
void write_records_csv(const std::vector<ExperimentRecord>& records,
                       std::ostream& out);
std::string records_to_json(const std::vector<ExperimentRecord>& records);

// ---------------------------------------------------------------------------
// Distinguishing reductions
// ---------------------------------------------------------------------------

enum class PmTruth { p_plus, p_minus };

const char* to_string(PmTruth t);

struct DistinguishOutcome {
  PmTruth truth = PmTruth::p_plus;    // harness label, never read by the rule
  PmTruth verdict = PmTruth::p_plus;
  double statistic_d = 0.0;
  std::uint64_t queries = 0;
};

/// Minimum odd round count whose exact binomial median tail reaches success
/// >= 8/9 from a 2/3-success single shot.
inline constexpr int kF2DistinguishRounds = 13;

/// Estimates the trace distance between u_unknown|0> and the p+ reference
/// state at error eps and thresholds at eps: d < eps means p+.
DistinguishOutcome distinguish_td(const CountingOracle& u_unknown,
                                  PmTruth truth_label, double eps, int n,
                                  std::uint64_t rng_seed);

/// Estimates the squared fidelity between u_unknown|0> and the comb state at
/// error eps (median-amplified over `rounds` shots) and thresholds at 1/2:
/// d > 1/2 means p+.
DistinguishOutcome distinguish_f2(const CountingOracle& u_unknown,
                                  PmTruth truth_label, double eps, int n,
                                  std::uint64_t rng_seed,
                                  int rounds = kF2DistinguishRounds);

struct DistinguishSummary {
  int trials = 0;
  int correct = 0;
  double success_rate = 0.0;
  double mean_queries = 0.0;
};

/// Runs `trials_per_truth` trials for each ground truth with fresh oracles
/// and summarizes. which: "td" or "f2".
DistinguishSummary run_distinguish_trials(const std::string& which, double eps,
                                          int n, int trials_per_truth,
                                          std::uint64_t seed, int jobs = 1,
                                          int f2_rounds = kF2DistinguishRounds);

}  // namespace qclose
