#pragma once

#include <optional>

#include "rscqt/estimator.hpp"
#include "rscqt/gauge.hpp"

namespace rscqt {

struct StudyConfig {
  GateSet true_set;
  GateSet target_set;
  SequenceSet design;
  std::optional<FiducialDesign> fiducials;  // initializer + gauge-match starts
  std::vector<long> n_grid;                 // strictly increasing
  std::vector<std::uint64_t> seeds;
  double c = 1.0;  // r_N = c / N
  OptimizerConfig opt;
};

struct StudyRow {
  long n = 0;
  std::uint64_t seed = 0;
  double sqrt_loss_est_true = 0.0;
  double sqrt_loss_true_emp = 0.0;
  double gauge_dist = 0.0;
  double reg_to_target = 0.0;
  double r_used = 0.0;
  bool physical = false;
  double runtime_s = 0.0;
  bool dominance_ok = false;  // F_N(est) <= F_N(true) + slack
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // rms of the log-log fit residuals
};

struct StudySummary {
  std::vector<long> n_values;
  std::vector<double> median_sqrt_loss_est_true;
  std::vector<double> median_sqrt_loss_true_emp;
  std::vector<double> median_gauge_dist;
  std::vector<double> ratio_emp_to_lil;  // median emp / sqrt(ln ln n / n)
  RateFit emp_rate;
  RateFit est_rate;
  bool design_is_scic = false;
  bool all_physical = false;
  bool all_dominance_ok = false;
};

struct StudyResult {
  std::vector<StudyRow> rows;
  StudySummary summary;
};

StudyResult run_study(const StudyConfig& cfg);

/// Least-squares fit of log(y) against log(n); needs >= 3 distinct n.
RateFit fit_rate(const std::vector<double>& n, const std::vector<double>& y);

double median(std::vector<double> values);

std::string study_rows_to_csv(const std::vector<StudyRow>& rows);

}  // namespace rscqt
