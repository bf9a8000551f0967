#include "qclose/experiments.hpp"

#include "qclose/amplitude_estimation.hpp"
#include "qclose/random.hpp"

#include "test_util.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <sstream>

using namespace qclose;

TEST_CASE("family spec grammar") {
  CHECK(is_family_spec("family:haar(k=3)"));
  CHECK_FALSE(is_family_spec("states/a.json"));

  const FamilySpec haar = parse_family_spec("family:haar(k=3,seed=7)");
  CHECK(haar.name == "haar");
  CHECK(haar.params.at("k") == 3.0);
  CHECK(haar.params.at("seed") == 7.0);

  const FamilySpec pp = parse_family_spec("family:pplus(eps=0.1,n=8)");
  CHECK(pp.params.at("eps") == doctest::Approx(0.1));

  CHECK_THROWS_AS(parse_family_spec("basis(k=1)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_family_spec("family:haar(k=3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_family_spec("family:haar(k=abc)"),
                  std::invalid_argument);
  CHECK_THROWS_AS(family_oracle(parse_family_spec("family:nope(k=1)"), 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(family_oracle(parse_family_spec("family:haar"), 0),
                  std::invalid_argument);
}

TEST_CASE("family oracles prepare the advertised states") {
  const StateVector basis =
      apply(family_oracle(parse_family_spec("family:basis(k=2)"), 0),
            StateVector(2));
  CHECK(basis.probability(0) == doctest::Approx(1.0));

  const StateVector had =
      apply(family_oracle(parse_family_spec("family:hadamard(k=2)"), 0),
            StateVector(2));
  for (std::uint64_t i = 0; i < 4; ++i) {
    CHECK(had.probability(i) == doctest::Approx(0.25).epsilon(1e-12));
  }

  // haar without an explicit seed falls back to the provided one.
  const UnitaryOp h1 = family_oracle(parse_family_spec("family:haar(k=2)"), 42);
  const UnitaryOp h2 = family_oracle(parse_family_spec("family:haar(k=2)"), 42);
  CHECK((h1.matrix() - h2.matrix()).cwiseAbs().maxCoeff() == 0.0);

  const StateVector comb =
      apply(family_oracle(parse_family_spec("family:comb(n=8)"), 0),
            StateVector(3));
  for (std::uint64_t i = 0; i < 8; ++i) {
    const double expect = (i % 2 == 0) ? 0.25 : 0.0;
    CHECK(comb.probability(i) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("p+- distributions and the comb state") {
  const std::vector<double> pp = p_plus_distribution(0.1, 4);
  CHECK(pp[0] == doctest::Approx(0.3));
  CHECK(pp[1] == doctest::Approx(0.2));
  CHECK(pp[2] == doctest::Approx(0.3));
  CHECK(pp[3] == doctest::Approx(0.2));
  CHECK_THROWS_AS(p_plus_distribution(0.1, 5), std::invalid_argument);
  CHECK_THROWS_AS(p_plus_distribution(0.7, 4), std::invalid_argument);

  const StateVector comb = comb_state(8);
  CHECK(comb.num_qubits() == 3);
  CHECK(comb.amplitude(0).real() == doctest::Approx(0.5));
  CHECK(comb.amplitude(1).real() == doctest::Approx(0.0));
}

TEST_CASE("squared fidelity against the comb state splits at 1/2 +- eps") {
  const double eps = 0.1;
  const int n = 8;
  const UnitaryOp comb = build_distribution_oracle(
      [&] {
        std::vector<double> p(n, 0.0);
        for (int j = 0; j < n; j += 2) p[static_cast<std::size_t>(j)] = 2.0 / n;
        return p;
      }());
  const UnitaryOp plus = build_distribution_oracle(p_plus_distribution(eps, n));
  const UnitaryOp minus =
      build_distribution_oracle(p_minus_distribution(eps, n));

  CHECK(exact_closeness(PreparedPair(comb, plus)).squared_fidelity ==
        doctest::Approx(0.5 + eps).epsilon(1e-10));
  CHECK(exact_closeness(PreparedPair(comb, minus)).squared_fidelity ==
        doctest::Approx(0.5 - eps).epsilon(1e-10));
}

TEST_CASE("hellinger distance") {
  const std::vector<double> u{0.25, 0.25, 0.25, 0.25};
  CHECK(hellinger(u, u) == doctest::Approx(0.0));

  const std::vector<double> a{0.5, 0.5, 0.0, 0.0};
  const std::vector<double> b{0.0, 0.0, 0.5, 0.5};
  CHECK(hellinger(a, b) == doctest::Approx(1.0));

  // Evaluated independently: sqrt(1 - sqrt(1 - 4 eps^2)) at eps = 0.1.
  CHECK(hellinger(p_plus_distribution(0.1, 8), p_minus_distribution(0.1, 8)) ==
        doctest::Approx(0.14214113720780766).epsilon(1e-9));

  const std::vector<double> short_q{1.0};
  CHECK_THROWS_AS(hellinger(u, short_q), std::invalid_argument);
}

TEST_CASE("hellinger bound d_H <= 2 eps across the bias range") {
  for (int i = 1; i < 50; ++i) {
    const double eps = i / 100.0;  // (0, 1/2)
    const double dh =
        hellinger(p_plus_distribution(eps, 8), p_minus_distribution(eps, 8));
    CHECK(dh <= 2.0 * eps + 1e-12);
    CHECK(dh == doctest::Approx(std::sqrt(1.0 - std::sqrt(1.0 - 4.0 * eps * eps)))
                    .epsilon(1e-9));
  }
}

TEST_CASE("fit_scaling on synthetic power laws") {
  auto make = [](double eps, double queries) {
    ExperimentRecord r;
    r.eps = eps;
    r.mean_queries = queries;
    return r;
  };
  std::vector<ExperimentRecord> linear;
  std::vector<ExperimentRecord> quadratic;
  for (double eps : {0.1, 0.05, 0.025, 0.0125}) {
    linear.push_back(make(eps, 100.0 / eps));
    quadratic.push_back(make(eps, 100.0 / (eps * eps)));
  }
  CHECK(fit_scaling(linear) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(fit_scaling(quadratic) == doctest::Approx(2.0).epsilon(1e-6));

  std::vector<ExperimentRecord> degenerate{make(0.1, 10), make(0.1, 10),
                                           make(0.05, 20)};
  CHECK_THROWS_AS(fit_scaling(degenerate), std::invalid_argument);
}

TEST_CASE("sweep records and determinism") {
  const std::vector<double> grid{0.1, 0.05};
  const auto records =
      sweep("family:haar(k=2)", "family:haar(k=2)", SweepMethod::optimal_td,
            grid, 100, 31337, 1);
  REQUIRE(records.size() == 2);
  for (const auto& r : records) {
    CHECK(r.schema == 1);
    CHECK(r.trials == 100);
    CHECK(r.seed == 31337);
    const double sigma =
        std::sqrt(r.success_rate * (1.0 - r.success_rate) / r.trials);
    CHECK(r.success_rate >= 2.0 / 3.0 - 3.0 * sigma);
  }
  // Halving eps doubles the mean queries (deterministic sizing).
  const double ratio = records[1].mean_queries / records[0].mean_queries;
  CHECK(ratio >= 1.8);
  CHECK(ratio <= 2.2);

  // Identical seeds give byte-identical serialized records, independent of
  // the job count.
  const auto again =
      sweep("family:haar(k=2)", "family:haar(k=2)", SweepMethod::optimal_td,
            grid, 100, 31337, 4);
  std::ostringstream csv_a;
  std::ostringstream csv_b;
  write_records_csv(records, csv_a);
  write_records_csv(again, csv_b);
  CHECK(csv_a.str() == csv_b.str());

  CHECK_THROWS_AS(sweep("family:haar(k=2)", "family:haar(k=2)",
                        SweepMethod::optimal_td, grid, 50, 1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(sweep("family:haar(k=2)", "family:haar(k=2)",
                        SweepMethod::optimal_td, {0.1, 1.5}, 100, 1, 1),
                  std::invalid_argument);
}

TEST_CASE("folklore query sweep shows the quadratic cost law") {
  const auto records =
      sweep("family:haar(k=1)", "family:haar(k=1)",
            SweepMethod::folklore_query_td, {0.2, 0.1, 0.05}, 100, 5, 2);
  for (std::size_t i = 0; i + 1 < records.size(); ++i) {
    const double ratio = records[i + 1].mean_queries / records[i].mean_queries;
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
  }
  CHECK(fit_scaling(records) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("record serialization") {
  ExperimentRecord r;
  r.method = SweepMethod::optimal_td;
  r.eps = 0.1;
  r.trials = 100;
  r.success_rate = 0.99;
  r.mean_queries = 510.0;
  r.exact_value = 0.25;
  r.seed = 7;

  std::ostringstream csv;
  write_records_csv({r}, csv);
  const std::string text = csv.str();
  CHECK(text.rfind(
            "schema,method,eps,trials,success_rate,mean_queries,exact_value,"
            "seed\n",
            0) == 0);
  CHECK(text.find("optimal_td") != std::string::npos);

  const nlohmann::json doc = nlohmann::json::parse(records_to_json({r}));
  REQUIRE(doc.is_array());
  CHECK(doc[0]["schema"] == 1);
  CHECK(doc[0]["method"] == "optimal_td");
  CHECK(doc[0]["mean_queries"] == doctest::Approx(510.0));

  CHECK(sweep_method_from_string("folklore_sample_f2") ==
        SweepMethod::folklore_sample_f2);
  CHECK_THROWS_AS(sweep_method_from_string("bogus"), std::invalid_argument);
}

TEST_CASE("distinguish_td: exact separations and thresholding") {
  const double eps = 0.1;
  const int n = 8;

  // Ground truths sit at trace distance 0 and 2 eps from the reference.
  const UnitaryOp plus = build_distribution_oracle(p_plus_distribution(eps, n));
  const UnitaryOp minus =
      build_distribution_oracle(p_minus_distribution(eps, n));
  CHECK(exact_closeness(PreparedPair(plus, plus)).trace_distance ==
        doctest::Approx(0.0).epsilon(1e-10));
  CHECK(exact_closeness(PreparedPair(plus, minus)).trace_distance ==
        doctest::Approx(2.0 * eps).epsilon(1e-10));

  int correct = 0;
  const int per_truth = 60;
  for (int i = 0; i < per_truth; ++i) {
    const DistinguishOutcome a =
        distinguish_td(CountingOracle(plus), PmTruth::p_plus, eps, n,
                       derive_seed(21, static_cast<std::uint64_t>(i)));
    if (a.verdict == PmTruth::p_plus) ++correct;
    const DistinguishOutcome b =
        distinguish_td(CountingOracle(minus), PmTruth::p_minus, eps, n,
                       derive_seed(22, static_cast<std::uint64_t>(i)));
    if (b.verdict == PmTruth::p_minus) ++correct;
    // Budget: exactly one trace-distance estimation at eps.
    CHECK(a.queries == 2 * sqrt_amp_est_cost(eps));
    CHECK(b.queries == 2 * sqrt_amp_est_cost(eps));
  }
  const double rate = static_cast<double>(correct) / (2 * per_truth);
  CHECK(rate >= 2.0 / 3.0 - 3.0 * std::sqrt(rate * (1.0 - rate) / (2 * per_truth)));
}

TEST_CASE("distinguish_f2 amplification rounds come from the exact tail") {
  // Minimum odd rounds whose exact binomial median tail clears 8/9 from a
  // 2/3-success single shot.
  using qclose::testing::binomial_tail_geq;
  CHECK(binomial_tail_geq(13, 7, 2.0 / 3.0) >= 8.0 / 9.0);
  CHECK(binomial_tail_geq(11, 6, 2.0 / 3.0) < 8.0 / 9.0);
  CHECK(binomial_tail_geq(5, 3, 2.0 / 3.0) < 8.0 / 9.0);
  CHECK(kF2DistinguishRounds == 13);
}

TEST_CASE("distinguish_f2 verdicts") {
  const double eps = 0.1;
  const int n = 8;
  const UnitaryOp plus = build_distribution_oracle(p_plus_distribution(eps, n));
  const UnitaryOp minus =
      build_distribution_oracle(p_minus_distribution(eps, n));

  int correct = 0;
  const int per_truth = 25;
  for (int i = 0; i < per_truth; ++i) {
    const DistinguishOutcome a =
        distinguish_f2(CountingOracle(plus), PmTruth::p_plus, eps, n,
                       derive_seed(23, static_cast<std::uint64_t>(i)));
    if (a.verdict == PmTruth::p_plus) ++correct;
    const DistinguishOutcome b =
        distinguish_f2(CountingOracle(minus), PmTruth::p_minus, eps, n,
                       derive_seed(24, static_cast<std::uint64_t>(i)));
    if (b.verdict == PmTruth::p_minus) ++correct;
    // Budget: rounds amplified squared-fidelity estimations at eps.
    CHECK(a.queries ==
          static_cast<std::uint64_t>(kF2DistinguishRounds) * 2 *
              sqrt_amp_est_cost(eps / 2.0));
  }
  const double rate = static_cast<double>(correct) / (2 * per_truth);
  CHECK(rate >= 2.0 / 3.0 - 3.0 * std::sqrt(rate * (1.0 - rate) / (2 * per_truth)));
}

TEST_CASE("run_distinguish_trials summarizes and stays deterministic") {
  const DistinguishSummary a = run_distinguish_trials("td", 0.1, 8, 40, 99, 1);
  const DistinguishSummary b = run_distinguish_trials("td", 0.1, 8, 40, 99, 4);
  CHECK(a.trials == 80);
  CHECK(a.correct == b.correct);
  CHECK(a.mean_queries == b.mean_queries);
  CHECK(a.success_rate >= 2.0 / 3.0 - 3.0 * std::sqrt(a.success_rate *
                                                      (1.0 - a.success_rate) /
                                                      a.trials));
  CHECK_THROWS_AS(run_distinguish_trials("nope", 0.1, 8, 10, 1, 1),
                  std::invalid_argument);
}
