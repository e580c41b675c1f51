// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sstream>

#include "uno/error.hpp"
#include "uno/harness.hpp"

using namespace uno;
using namespace uno::harness;

namespace {

ExperimentConfig small(const std::string& id) {
  ExperimentConfig c = ExperimentConfig::defaults(id);
  c.trials = 2;
  c.ms = {60};
  return c;
}

std::string csv_of(const ExperimentResult& r) {
  std::ostringstream os;
  emit_csv(os, r);
  return os.str();
}

}  // namespace

TEST_CASE("defaults cover every experiment and validate") {
  for (const auto& id : experiment_ids()) {
    const ExperimentConfig c = ExperimentConfig::defaults(id);
    CHECK_NOTHROW(c.validate());
    CHECK(c.trials >= 1);
  }
  CHECK(ExperimentConfig::defaults("table1").lambdas == std::vector<double>{0.2, 0.5, 1.0});
  CHECK(ExperimentConfig::defaults("table2").sups == std::vector<double>{10.0, 15.0, 20.0});
  CHECK(ExperimentConfig::defaults("table1").n == 728);
}

TEST_CASE("config validation errors") {
  ExperimentConfig c = ExperimentConfig::defaults("table1");
  c.experiment = "table9";
  try {
    c.validate();
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unknown_experiment);
  }
  c = ExperimentConfig::defaults("table1");
  c.trials = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = ExperimentConfig::defaults("table1");
  c.lambdas.clear();
  CHECK_THROWS_AS(run_experiment(c), Error);
}

TEST_CASE("config JSON round trip") {
  ExperimentConfig c = ExperimentConfig::defaults("table4_under");
  c.seed = 99;
  c.admm.denoiser = {"moving_average", {5}};
  const ExperimentConfig d = ExperimentConfig::from_json(c.to_json());
  CHECK(d.to_json() == c.to_json());
}

TEST_CASE("run_experiment is deterministic and thread-count independent") {
  ExperimentConfig c = small("table1");
  c.lambdas = {0.5};
  const ExperimentResult a = run_experiment(c);
  const ExperimentResult b = run_experiment(c);
  CHECK(a.same_data(b));
  c.parallel = false;
  const ExperimentResult s = run_experiment(c);
  CHECK(csv_of(a) == csv_of(s));
  REQUIRE(a.cells.size() == 1);
  const Cell& cell = a.cells[0];
  CHECK(cell.nmse_db.size() == 2);
  CHECK(cell.seeds == std::vector<std::uint64_t>{1, 2});
  CHECK(cell.n == 728);
  CHECK(cell.h == 3);
  CHECK(cell.diff_order == 2);
  CHECK(cell.i_max > 0);
}

TEST_CASE("CSV round trip, JSON echo, plot columns") {
  ExperimentConfig c = small("fig_nmse_vs_m");
  c.ms = {30, 60};
  const ExperimentResult r = run_experiment(c);
  std::stringstream ss(csv_of(r));
  const ExperimentResult back = parse_csv(ss);
  CHECK(back.same_data(r));

  std::ostringstream js;
  emit_json(js, r);
  const auto j = nlohmann::json::parse(js.str());
  CHECK(j.at("config") == c.to_json());
  CHECK(j.at("version") == kVersion);
  CHECK(j.at("cells").size() == 2);

  const std::string csv = csv_of(r);
  const std::string header = csv.substr(csv.find('\n') + 1, csv.find('\n', csv.find('\n') + 1) - csv.find('\n') - 1);
  for (const char* col : {",m,", ",mean_db,", ",std_db"}) CHECK(header.find(col) != std::string::npos);
  CHECK(csv.find("summary,1,uno,0.5,20,60,") != std::string::npos);
}

TEST_CASE("every cell records the derivation parameters") {
  for (const char* id : {"sawtooth", "claim1"}) {
    ExperimentConfig c = small(id);
    c.trials = 1;
    const ExperimentResult r = run_experiment(c);
    for (const Cell& cell : r.cells) {
      CHECK(cell.n > 0);
      CHECK(cell.dt > 0.0);
      CHECK(cell.i_max > 0);
      CHECK(cell.nmse_db.size() == 1);
    }
  }
}

TEST_CASE("finalize computes mean and sample std") {
  Cell c;
  c.nmse_db = {-10.0, -20.0, -30.0};
  finalize(c);
  CHECK(c.mean_db == doctest::Approx(-20.0));
  CHECK(c.std_db == doctest::Approx(10.0));
}

TEST_CASE("exact criteria pass") {
  for (int id : exact_criteria()) {
    const CheckResult r = run_criterion(id);
    INFO(format_line(r));
    CHECK(r.passed);
  }
}
