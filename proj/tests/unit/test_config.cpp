#include "doctest.h"

#include "vqcfd/config.hpp"

using namespace vqcfd;

TEST_CASE("defaults") {
  const RunConfig c = parse_run_config("{}");
  CHECK(c.n_qubits == 5);
  CHECK(c.length == 1.0);
  CHECK(c.evolution.nu == 0.01);
  CHECK(c.evolution.tau == 0.01);
  CHECK(c.evolution.optimizer.kind == OptimizerKind::gradient_descent);
  CHECK(c.initial.type == "hump");
  CHECK(c.initial.amplitude == 0.1);
  CHECK(c.discretization == AdjointDiscretization::consistent);
  CHECK(c.resolved["grid"]["n_qubits"] == 5);
  CHECK(c.resolved["initial"]["t0"] == 0.5);
}

TEST_CASE("full config") {
  const RunConfig c = parse_run_config(R"({
    "grid": {"length": 2.0, "n_qubits": 4},
    "physics": {"nu": 0.02, "tau": 0.005, "steps": 7, "nonlinear": false},
    "initial": {"type": "sine", "amplitude": 0.3, "mode": 2},
    "optimizer": {"method": "lbfgs", "restarts": 1},
    "backend": {"type": "circuit", "shots": 1000},
    "seed": 42,
    "adjoint": {"discretization": "literal", "terminal": {"type": "constant", "value": 1.0}},
    "output": {"dir": "runs/a", "fields": false}
  })");
  CHECK(c.n_qubits == 4);
  CHECK(c.evolution.steps == 7);
  CHECK_FALSE(c.evolution.nonlinear);
  CHECK(c.evolution.optimizer.kind == OptimizerKind::lbfgs);
  CHECK(c.evolution.backend == Backend::circuit);
  CHECK(c.evolution.shots.mode == ShotModel::Mode::sampled);
  CHECK(c.evolution.shots.shots == 1000);
  CHECK(c.evolution.seed == 42);
  CHECK(c.discretization == AdjointDiscretization::literal);
  REQUIRE(c.terminal);
  CHECK(c.terminal->value == 1.0);
  CHECK(c.out_dir == "runs/a");
  const GridFunction f = make_field(c.initial, Grid(c.length, c.n_qubits), c.evolution.nu);
  CHECK(f.size() == 16);
}

TEST_CASE("schema violations are all reported") {
  try {
    parse_run_config(R"({"grid": {"n_qubits": 1, "bogus": 2}, "physics": {"tau": -1},
                         "optimizer": {"method": "sgd"}, "extra": true})");
    FAIL("expected ConfigError");
  } catch (const ConfigError &e) {
    CHECK(e.problems().size() >= 5);
  }
  CHECK_THROWS_AS(parse_run_config("not json"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"physics": {"steps": 1.5}})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"initial": {"type": "csv"}})"), ConfigError);
  CHECK_THROWS_AS(load_run_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("schema text lists the keys") {
  const std::string s = config_schema_text();
  CHECK(s.find("grid.n_qubits") != std::string::npos);
  CHECK(s.find("backend.shots") != std::string::npos);
}
