#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rscqt/io.hpp"
#include "rscqt/models.hpp"
#include "rscqt/simulator.hpp"

using namespace rscqt;

TEST_CASE("gate set json round-trip") {
  GateSet s = models::benchmark_noisy_set();
  GateSet back = io::gate_set_from_json(io::gate_set_to_json(s));
  CHECK(back.dim() == s.dim());
  CHECK((back.rho.mat - s.rho.mat).cwiseAbs().maxCoeff() == 0.0);
  for (const auto& [label, effect] : s.povm.effects)
    CHECK((back.povm.effects.at(label) - effect).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(back.gates.size() == s.gates.size());
  for (size_t g = 0; g < s.gates.size(); ++g) {
    CHECK(back.gates[g].name == s.gates[g].name);
    CHECK((back.gates[g].hs - s.gates[g].hs).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("gate set json schema") {
  io::json j = io::gate_set_to_json(models::ideal_qubit_target());
  CHECK(j.at("dim") == 2);
  CHECK(j.at("rho").size() == 4);
  CHECK(j.at("rho")[0].size() == 2);
  CHECK(j.at("povm").size() == 2);
  CHECK(j.at("gates").size() == 3);
  CHECK(j.at("gates")[0].at("hs").size() == 4);

  io::json bad = j;
  bad.erase("rho");
  CHECK_THROWS_AS(io::gate_set_from_json(bad), std::invalid_argument);

  io::json wrong_size = j;
  wrong_size["rho"] = io::json::array({io::json::array({1.0, 0.0})});
  CHECK_THROWS_AS(io::gate_set_from_json(wrong_size), std::invalid_argument);
}

TEST_CASE("sequence set and fiducials json round-trip") {
  SequenceSet id = build_scic(models::default_qubit_fiducials());
  SequenceSet back = io::sequence_set_from_json(io::sequence_set_to_json(id));
  REQUIRE(back.size() == id.size());
  for (int k = 0; k < id.size(); ++k) CHECK(back[k] == id[k]);

  FiducialDesign fd = models::default_qubit_fiducials();
  FiducialDesign fd_back = io::fiducials_from_json(io::fiducials_to_json(fd));
  CHECK(fd_back.num_gates == fd.num_gates);
  CHECK(fd_back.prep_fiducials.sequences() == fd.prep_fiducials.sequences());
  CHECK(fd_back.meas_fiducials.sequences() == fd.meas_fiducials.sequences());
}

TEST_CASE("table json round-trip") {
  GateSet s = models::benchmark_noisy_set();
  SequenceSet id = build_scic(models::default_qubit_fiducials());
  ProbabilityTable table = probabilities(s, id);
  DistributionTable back = io::table_from_json(io::table_to_json(table));
  CHECK(back.outcomes == table.outcomes);
  for (const auto& seq : id.sequences())
    CHECK((back.row(seq) - table.row(seq)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dataset csv round-trip") {
  GateSet s = models::benchmark_noisy_set();
  SequenceSet id = build_scic(models::default_qubit_fiducials());
  Dataset ds = sample(probabilities(s, id), 250, 9);
  std::string csv = io::dataset_to_csv(ds);
  CHECK(csv.rfind("sequence,outcome,count\n", 0) == 0);
  CHECK(csv.find("\"") == std::string::npos);

  Dataset back = io::dataset_from_csv(csv);
  CHECK(back.outcomes == ds.outcomes);
  CHECK(back.sequences == ds.sequences);
  CHECK(back.counts == ds.counts);
  CHECK(back.shots == ds.shots);
}

TEST_CASE("dataset csv uses a dash for the empty sequence") {
  Dataset ds;
  ds.outcomes = {"0", "1"};
  ds.sequences = {{}, {1, 2}};
  ds.counts = {{3, 2}, {1, 4}};
  ds.shots = 5;
  std::string csv = io::dataset_to_csv(ds);
  CHECK(csv.find("-,0,3") != std::string::npos);
  CHECK(csv.find("1-2,1,4") != std::string::npos);
  Dataset back = io::dataset_from_csv(csv);
  CHECK(back.sequences == ds.sequences);
}

TEST_CASE("dataset csv error cases") {
  CHECK_THROWS_AS(io::dataset_from_csv("wrong,header\n"), std::invalid_argument);
  CHECK_THROWS_AS(io::dataset_from_csv("sequence,outcome,count\n-,0,abc\n"),
                  std::invalid_argument);
  // unequal shot totals across sequences
  CHECK_THROWS_AS(io::dataset_from_csv("sequence,outcome,count\n"
                                       "-,0,3\n-,1,2\n1,0,4\n1,1,4\n"),
                  std::invalid_argument);
}

TEST_CASE("estimate json round-trip") {
  EstimateResult result;
  result.estimate = models::benchmark_noisy_set();
  result.loss_value = 1.25e-4;
  result.reg_value = 0.03;
  result.objective_value = result.loss_value + 0.01 * result.reg_value;
  result.r_used = 0.01;
  result.iterations = 212;
  result.converged = true;
  result.initial_point = "linear_inversion";

  EstimateResult back = io::estimate_from_json(io::estimate_to_json(result));
  CHECK(back.loss_value == result.loss_value);
  CHECK(back.reg_value == result.reg_value);
  CHECK(back.objective_value == result.objective_value);
  CHECK(back.r_used == result.r_used);
  CHECK(back.iterations == result.iterations);
  CHECK(back.converged == result.converged);
  CHECK(back.initial_point == result.initial_point);
  CHECK((back.estimate.rho.mat - result.estimate.rho.mat).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("file io maps missing paths to IoError") {
  CHECK_THROWS_AS(io::load_json("/nonexistent/path.json"), io::IoError);
  CHECK_THROWS_AS(io::load_text("/nonexistent/path.csv"), io::IoError);
}

TEST_CASE("format_double round-trips") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    double v = unif(rng) * std::pow(10.0, k % 20 - 10);
    CHECK(std::stod(io::format_double(v)) == v);
  }
  CHECK(io::format_double(0.25) == "0.25");
  CHECK(io::format_double(1.0) == "1");
}
