#include "qclose/cli.hpp"

#include "qclose/linalg.hpp"
#include "qclose/random.hpp"
#include "qclose/state_io.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

using namespace qclose;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name)
      : path("/tmp/qclose_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

int run_cli(const std::vector<std::string>& args, std::string* out_text,
            std::string* err_text = nullptr) {
  std::ostringstream out;
  std::ostringstream err;
  int code;
  try {
    code = run(parse_args(args), out, err);
  } catch (const UsageError&) {
    code = kExitUsage;
  }
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

}  // namespace

TEST_CASE("parse_args accepts a full estimate command") {
  const RunConfig c = parse_args({"estimate", "--method", "td", "--eps",
                                  "0.05", "--state-a", "a.json", "--state-b",
                                  "b.json", "--seed", "7"});
  CHECK(c.command == RunConfig::Command::estimate);
  CHECK(c.method == "td");
  CHECK(c.eps == doctest::Approx(0.05));
  CHECK(c.state_a == "a.json");
  CHECK(c.seed == 7);
}

TEST_CASE("parse_args rejects bad input") {
  // eps out of range.
  CHECK_THROWS_AS(parse_args({"estimate", "--method", "td", "--eps", "1.5",
                              "--state-a", "a", "--state-b", "b"}),
                  UsageError);
  // Unknown flag.
  CHECK_THROWS_AS(parse_args({"exact", "--state-a", "a", "--state-b", "b",
                              "--bogus"}),
                  UsageError);
  // Unknown method.
  CHECK_THROWS_AS(parse_args({"estimate", "--method", "zz", "--state-a", "a",
                              "--state-b", "b"}),
                  UsageError);
  // Odd n.
  CHECK_THROWS_AS(parse_args({"distinguish", "--which", "td", "--n", "7"}),
                  UsageError);
  // No subcommand.
  CHECK_THROWS_AS(parse_args({}), UsageError);
}

TEST_CASE("parse_args reads family specs through") {
  const RunConfig c =
      parse_args({"estimate", "--method", "f2", "--state-a",
                  "family:pplus(eps=0.1,n=8)", "--state-b", "family:comb(n=8)"});
  CHECK(c.state_a == "family:pplus(eps=0.1,n=8)");
}

TEST_CASE("exact command emits the reference report") {
  std::string out;
  const int code =
      run_cli({"exact", "--state-a", "family:basis(k=1)", "--state-b",
               "family:hadamard(k=1)"},
              &out);
  CHECK(code == kExitOk);
  CHECK(out == "T=0.707107 F=0.707107 F2=0.500000 p_err=0.146447\n");
}

TEST_CASE("estimate command reports estimate, exact value, and queries") {
  std::string out;
  const int code = run_cli(
      {"estimate", "--method", "td", "--eps", "0.05", "--state-a",
       "family:basis(k=1)", "--state-b", "family:hadamard(k=1)", "--seed", "7"},
      &out);
  CHECK(code == kExitOk);
  CHECK(out.find("estimate=0.707107") != std::string::npos);
  CHECK(out.find("exact=0.707107") != std::string::npos);
  CHECK(out.find("queries=1022") != std::string::npos);
  CHECK(out.find("helstrom_error=") != std::string::npos);
}

TEST_CASE("missing state file exits 3 and prints no estimate") {
  std::string out;
  std::string err;
  const int code = run_cli({"estimate", "--method", "td", "--state-a",
                            "/nonexistent/state.json", "--state-b",
                            "family:basis(k=1)"},
                           &out, &err);
  CHECK(code == kExitInput);
  CHECK(out.empty());
  CHECK(err.find("input error") != std::string::npos);
}

TEST_CASE("malformed family spec exits 3") {
  std::string out;
  const int code = run_cli({"exact", "--state-a", "family:wat(k=1)",
                            "--state-b", "family:basis(k=1)"},
                           &out);
  CHECK(code == kExitInput);
  CHECK(out.empty());
}

TEST_CASE("state file round trip is exact to 1e-12") {
  TempFile file("roundtrip.json");
  const StateVector original = haar_state(3, 2024);
  write_state_json(original, file.path);
  const LoadedState loaded = read_state_json(file.path);
  CHECK_FALSE(loaded.renormalized);
  REQUIRE(loaded.state.dim() == original.dim());
  for (std::uint64_t i = 0; i < original.dim(); ++i) {
    CHECK(std::abs(loaded.state.amplitude(i) - original.amplitude(i)) < 1e-12);
  }
}

TEST_CASE("CLI dump and re-read round trip") {
  TempFile file("dump.json");
  std::string out;
  const int code =
      run_cli({"exact", "--state-a", "family:haar(k=2,seed=5)", "--state-b",
               "family:basis(k=2)", "--dump-state-a", file.path},
              &out);
  REQUIRE(code == kExitOk);
  const LoadedState loaded = read_state_json(file.path);
  const StateVector expect =
      apply(haar_unitary(2, 5), StateVector(2));
  for (std::uint64_t i = 0; i < expect.dim(); ++i) {
    CHECK(std::abs(loaded.state.amplitude(i) - expect.amplitude(i)) < 1e-12);
  }
}

TEST_CASE("off-norm states load with a warning flag") {
  TempFile file("offnorm.json");
  {
    std::ofstream f(file.path);
    f << "[[0.8, 0.0], [0.7, 0.0]]";  // norm ~ 1.063
  }
  const LoadedState loaded = read_state_json(file.path);
  CHECK(loaded.renormalized);
  CHECK(loaded.norm_deviation > 1e-6);
  CHECK(std::fabs(loaded.state.norm() - 1.0) < 1e-12);

  // The CLI surfaces it on stderr and proceeds.
  std::string out;
  std::string err;
  const int code = run_cli(
      {"exact", "--state-a", file.path, "--state-b", "family:basis(k=1)"},
      &out, &err);
  CHECK(code == kExitOk);
  CHECK(err.find("renormalized") != std::string::npos);
}

TEST_CASE("numerically invalid states exit 4") {
  TempFile file("zeronorm.json");
  {
    std::ofstream f(file.path);
    f << "[[0.0, 0.0], [0.0, 0.0]]";
  }
  std::string out;
  const int code = run_cli(
      {"exact", "--state-a", file.path, "--state-b", "family:basis(k=1)"},
      &out);
  CHECK(code == kExitNumeric);
  CHECK(out.empty());
}

TEST_CASE("garbage JSON exits 3") {
  TempFile file("garbage.json");
  {
    std::ofstream f(file.path);
    f << "not json at all";
  }
  std::string out;
  const int code = run_cli(
      {"exact", "--state-a", file.path, "--state-b", "family:basis(k=1)"},
      &out);
  CHECK(code == kExitInput);

  TempFile bad_shape("badshape.json");
  {
    std::ofstream f(bad_shape.path);
    f << "[[0.5], [0.5, 0.0]]";
  }
  CHECK(run_cli({"exact", "--state-a", bad_shape.path, "--state-b",
                 "family:basis(k=1)"},
                &out) == kExitInput);

  TempFile bad_len("badlen.json");
  {
    std::ofstream f(bad_len.path);
    f << "[[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]";
  }
  CHECK(run_cli({"exact", "--state-a", bad_len.path, "--state-b",
                 "family:basis(k=1)"},
                &out) == kExitInput);
}

TEST_CASE("mismatched state sizes exit 3") {
  std::string out;
  const int code = run_cli({"exact", "--state-a", "family:basis(k=1)",
                            "--state-b", "family:basis(k=2)"},
                           &out);
  CHECK(code == kExitInput);
}

TEST_CASE("sweep command emits CSV with the documented header") {
  std::string out;
  const int code = run_cli(
      {"sweep", "--method", "optimal_td", "--state-a", "family:hadamard(k=1)",
       "--state-b", "family:basis(k=1)", "--trials", "100", "--eps-grid",
       "0.1", "0.05", "0.025", "--format", "csv", "--seed", "3"},
      &out);
  CHECK(code == kExitOk);
  CHECK(out.rfind("schema,method,eps,trials,success_rate,mean_queries,"
                  "exact_value,seed\n",
                  0) == 0);
  CHECK(out.find("optimal_td") != std::string::npos);
  CHECK(out.find("# exponent,") != std::string::npos);
}

TEST_CASE("sweep default grid yields four rows and a linear exponent") {
  std::string out;
  const int code = run_cli(
      {"sweep", "--method", "optimal_td", "--state-a", "family:hadamard(k=1)",
       "--state-b", "family:basis(k=1)", "--trials", "100", "--format", "csv",
       "--seed", "9"},
      &out);
  REQUIRE(code == kExitOk);
  int data_rows = 0;
  std::istringstream lines(out);
  std::string line;
  std::string exponent_line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    if (line.rfind("# exponent,", 0) == 0) {
      exponent_line = line;
    } else if (!line.empty()) {
      ++data_rows;
    }
  }
  CHECK(data_rows == 4);
  REQUIRE_FALSE(exponent_line.empty());
  const double exponent = std::stod(exponent_line.substr(11));
  CHECK(exponent > 0.8);
  CHECK(exponent < 1.2);
}

TEST_CASE("sweep output lands in --output") {
  TempFile file("sweep.csv");
  std::string out;
  const int code = run_cli(
      {"sweep", "--method", "optimal_td", "--state-a", "family:hadamard(k=1)",
       "--state-b", "family:basis(k=1)", "--trials", "100", "--eps-grid",
       "0.1", "0.05", "--format", "csv", "--output", file.path},
      &out);
  CHECK(code == kExitOk);
  CHECK(out.empty());
  std::ifstream f(file.path);
  std::string header;
  std::getline(f, header);
  CHECK(header ==
        "schema,method,eps,trials,success_rate,mean_queries,exact_value,seed");
}

TEST_CASE("swap-test command") {
  std::string out;
  const int code = run_cli(
      {"swap-test", "--state-a", "family:basis(k=1)", "--state-b",
       "family:hadamard(k=1)", "--shots", "20000", "--seed", "5"},
      &out);
  CHECK(code == kExitOk);
  CHECK(out.find("exact_zero_probability=0.750000") != std::string::npos);
}

TEST_CASE("distinguish command prints a success rate") {
  std::string out;
  const int code =
      run_cli({"distinguish", "--which", "td", "--eps", "0.1", "--n", "8",
               "--trials", "30", "--seed", "2", "--jobs", "2"},
              &out);
  CHECK(code == kExitOk);
  CHECK(out.find("success_rate=") != std::string::npos);
}

TEST_CASE("json format emits parseable output") {
  std::string out;
  const int code = run_cli({"exact", "--state-a", "family:basis(k=1)",
                            "--state-b", "family:hadamard(k=1)", "--format",
                            "json"},
                           &out);
  CHECK(code == kExitOk);
  CHECK(out.find("\"squared_fidelity\"") != std::string::npos);
  const auto pos = out.find("\"squared_fidelity\":");
  const double f2 = std::stod(out.substr(pos + 20));
  CHECK(f2 == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("environment variables feed the default seed") {
  setenv("QCLOSE_SEED", "424242", 1);
  const RunConfig c = parse_args(
      {"exact", "--state-a", "family:basis(k=1)", "--state-b",
       "family:basis(k=1)"});
  unsetenv("QCLOSE_SEED");
  CHECK(c.seed == 424242);

  const RunConfig d = parse_args(
      {"exact", "--state-a", "family:basis(k=1)", "--state-b",
       "family:basis(k=1)"});
  CHECK(d.seed == 12345);
}
