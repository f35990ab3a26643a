#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rscqt/estimator.hpp"
#include "rscqt/gauge.hpp"
#include "rscqt/harness.hpp"
#include "rscqt/io.hpp"
#include "rscqt/simulator.hpp"

using namespace rscqt;

namespace {

// accepts a bare gate-set JSON or an estimate JSON with an embedded set
GateSet load_gate_set(const std::string& path) {
  io::json j = io::load_json(path);
  if (j.is_object() && j.contains("gate_set")) return io::gate_set_from_json(j["gate_set"]);
  return io::gate_set_from_json(j);
}

int cmd_design(const std::string& gateset_path, const std::string& fiducials_path,
               const std::string& out_path, const std::string& report_path) {
  GateSet s = load_gate_set(gateset_path);
  FiducialDesign fd = io::fiducials_from_json(io::load_json(fiducials_path));
  SequenceSet id = build_scic(fd);
  ScicReport report = is_scic(id, fd, s);

  io::save_json(out_path, io::sequence_set_to_json(id));

  io::json jr;
  jr["scic"] = report.scic;
  jr["subset_ok"] = report.subset_ok;
  jr["prep"] = {{"complete", report.prep.complete},
                {"rank", report.prep.rank},
                {"required_rank", report.prep.required_rank}};
  jr["meas"] = {{"complete", report.meas.complete},
                {"rank", report.meas.rank},
                {"required_rank", report.meas.required_rank}};
  if (report.first_missing)
    jr["first_missing"] = format_sequence(*report.first_missing);
  io::save_json(report_path, jr);

  if (!report.scic)
    std::cerr << "warning: design is not SCIC for this gate set\n";
  return 0;
}

int cmd_simulate(const std::string& gateset_path, const std::string& design_path,
                 long shots, std::uint64_t seed, const std::string& out_path) {
  GateSet s = load_gate_set(gateset_path);
  ValidationReport vr = validate(s);
  if (!vr.all_pass())
    throw std::invalid_argument("gate set fails validation: " + vr.summary());
  SequenceSet id = io::sequence_set_from_json(io::load_json(design_path));
  Dataset ds = sample(probabilities(s, id), shots, seed);
  io::save_text(out_path, io::dataset_to_csv(ds));
  return 0;
}

int cmd_estimate(const std::string& data_path, const std::string& design_path,
                 const std::string& target_path,
                 const std::optional<std::string>& fiducials_path,
                 const std::string& schedule, const std::string& c_arg,
                 double fixed_r, std::uint64_t seed, const std::string& out_path) {
  Dataset ds = io::dataset_from_csv(io::load_text(data_path));
  SequenceSet id = io::sequence_set_from_json(io::load_json(design_path));
  GateSet target = load_gate_set(target_path);
  ValidationReport vr = validate(target);
  if (!vr.all_pass())
    throw std::invalid_argument("target fails validation: " + vr.summary());

  std::optional<FiducialDesign> fd;
  if (fiducials_path)
    fd = io::fiducials_from_json(io::load_json(*fiducials_path));

  RegularizationConfig cfg;
  cfg.cv_seed = seed;
  if (schedule == "fixed") {
    cfg.schedule = RSchedule::kFixed;
    cfg.r = fixed_r;
  } else if (schedule == "c_over_N") {
    if (c_arg == "auto") {
      cfg.schedule = RSchedule::kCrossValidated;
      cfg.grid = {0.01, 0.1, 1.0, 10.0, 100.0};
    } else {
      cfg.schedule = RSchedule::kCOverN;
      cfg.c = std::stod(c_arg);
    }
  } else {
    throw std::invalid_argument("unknown r schedule: " + schedule);
  }

  EstimateResult result = estimate(frequencies(ds), id, target, cfg, {}, fd);
  io::save_json(out_path, io::estimate_to_json(result));
  return 0;
}

int cmd_gauge_distance(const std::string& a_path, const std::string& b_path,
                       const std::optional<std::string>& fiducials_path,
                       const std::string& out_path) {
  GateSet a = load_gate_set(a_path);
  GateSet b = load_gate_set(b_path);
  GaugeDistanceConfig cfg;
  if (fiducials_path)
    cfg.fiducials = io::fiducials_from_json(io::load_json(*fiducials_path));
  GaugeDistanceResult result = gauge_distance(a, b, cfg);

  io::json j;
  j["distance"] = result.distance;
  io::json rows = io::json::array();
  for (int r = 0; r < result.transform.a.rows(); ++r) {
    io::json row = io::json::array();
    for (int c = 0; c < result.transform.a.cols(); ++c)
      row.push_back(result.transform.a(r, c));
    rows.push_back(row);
  }
  j["transform"] = rows;
  j["residual"] = result.distance;
  j["converged"] = result.converged;
  io::save_json(out_path, j);
  return 0;
}

int cmd_study(const std::string& config_path) {
  io::json j = io::load_json(config_path);
  StudyConfig cfg;
  cfg.true_set = io::gate_set_from_json(io::load_json(j.at("true_set").get<std::string>()));
  cfg.target_set =
      io::gate_set_from_json(io::load_json(j.at("target_set").get<std::string>()));
  FiducialDesign fd =
      io::fiducials_from_json(io::load_json(j.at("fiducials").get<std::string>()));
  cfg.fiducials = fd;
  if (j.contains("design"))
    cfg.design = io::sequence_set_from_json(
        io::load_json(j.at("design").get<std::string>()));
  else
    cfg.design = build_scic(fd);
  cfg.n_grid = j.at("n_grid").get<std::vector<long>>();
  cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  cfg.c = j.value("c", 1.0);
  std::string out_csv = j.at("out_csv").get<std::string>();
  std::string out_summary = j.at("out_summary").get<std::string>();

  ValidationReport vr = validate(cfg.true_set);
  if (!vr.all_pass())
    throw std::invalid_argument("true set fails validation: " + vr.summary());

  StudyResult result = run_study(cfg);
  io::save_text(out_csv, study_rows_to_csv(result.rows));

  const StudySummary& sum = result.summary;
  io::json js;
  js["n"] = sum.n_values;
  js["median_sqrt_loss_est_true"] = sum.median_sqrt_loss_est_true;
  js["median_sqrt_loss_true_emp"] = sum.median_sqrt_loss_true_emp;
  js["median_gauge_dist"] = sum.median_gauge_dist;
  js["ratio_emp_to_lil"] = sum.ratio_emp_to_lil;
  js["emp_rate_slope"] = sum.emp_rate.slope;
  js["est_rate_slope"] = sum.est_rate.slope;
  js["design_is_scic"] = sum.design_is_scic;
  js["all_physical"] = sum.all_physical;
  js["all_dominance_ok"] = sum.all_dominance_ok;
  io::save_json(out_summary, js);

  if (!sum.design_is_scic)
    std::cerr << "warning: design is not SCIC; gauge_dist column is only "
                 "meaningful for SCIC designs\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized self-consistent quantum tomography toolkit"};
  app.require_subcommand(1);

  std::string gateset_path, design_path, fiducials_path, out_path, report_path;
  std::string data_path, target_path, a_path, b_path, config_path;
  std::string schedule = "c_over_N", c_arg = "1.0";
  double fixed_r = 1e-3;
  long shots = 1000;
  std::uint64_t seed = 0;

  CLI::App* design = app.add_subcommand("design", "Build a SCIC sequence design");
  design->add_option("--gateset", gateset_path, "Gate set JSON")->required();
  design->add_option("--fiducials", fiducials_path, "Fiducial design JSON")->required();
  design->add_option("--out", out_path, "Output sequence-set JSON")->required();
  design->add_option("--report", report_path, "Completeness report JSON")->required();

  CLI::App* simulate = app.add_subcommand("simulate", "Sample a dataset");
  simulate->add_option("--gateset", gateset_path, "Gate set JSON")->required();
  simulate->add_option("--design", design_path, "Sequence-set JSON")->required();
  simulate->add_option("--shots", shots, "Shots per sequence")->required();
  simulate->add_option("--seed", seed, "RNG seed");
  simulate->add_option("--out", out_path, "Output dataset CSV")->required();

  CLI::App* est = app.add_subcommand("estimate", "Run the RSC estimator");
  est->add_option("--data", data_path, "Dataset CSV")->required();
  est->add_option("--design", design_path, "Sequence-set JSON")->required();
  est->add_option("--target", target_path, "Target gate set JSON")->required();
  est->add_option("--fiducials", fiducials_path, "Fiducial design JSON");
  est->add_option("--r-schedule", schedule, "fixed | c_over_N");
  est->add_option("--c", c_arg, "auto or a float, for c_over_N");
  est->add_option("--r", fixed_r, "Weight for the fixed schedule");
  est->add_option("--seed", seed, "Cross-validation seed");
  est->add_option("--out", out_path, "Output estimate JSON")->required();

  CLI::App* gd = app.add_subcommand("gauge-distance", "Gauge distance between sets");
  gd->add_option("--a", a_path, "First gate set JSON")->required();
  gd->add_option("--b", b_path, "Reference gate set JSON")->required();
  gd->add_option("--fiducials", fiducials_path, "Fiducial design JSON");
  gd->add_option("--out", out_path, "Output JSON")->required();

  CLI::App* study = app.add_subcommand("study", "Run a convergence study");
  study->add_option("--config", config_path, "Study config JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (design->parsed())
      return cmd_design(gateset_path, fiducials_path, out_path, report_path);
    if (simulate->parsed())
      return cmd_simulate(gateset_path, design_path, shots, seed, out_path);
    if (est->parsed()) {
      std::optional<std::string> fd;
      if (!fiducials_path.empty()) fd = fiducials_path;
      return cmd_estimate(data_path, design_path, target_path, fd, schedule, c_arg,
                          fixed_r, seed, out_path);
    }
    if (gd->parsed()) {
      std::optional<std::string> fd;
      if (!fiducials_path.empty()) fd = fiducials_path;
      return cmd_gauge_distance(a_path, b_path, fd, out_path);
    }
    if (study->parsed()) return cmd_study(config_path);
  } catch (const io::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
