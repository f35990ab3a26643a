#include "rscqt/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "rscqt/io.hpp"

namespace rscqt {

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty set");
  std::sort(values.begin(), values.end());
  size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

RateFit fit_rate(const std::vector<double>& n, const std::vector<double>& y) {
  if (n.size() != y.size()) throw std::invalid_argument("fit_rate: size mismatch");
  std::vector<double> distinct = n;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3)
    throw std::invalid_argument("fit_rate needs at least 3 distinct n values");

  const size_t m = n.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx(m), ly(m);
  for (size_t k = 0; k < m; ++k) {
    if (n[k] <= 0 || y[k] <= 0)
      throw std::invalid_argument("fit_rate needs positive values");
    lx[k] = std::log(n[k]);
    ly[k] = std::log(y[k]);
    sx += lx[k];
    sy += ly[k];
    sxx += lx[k] * lx[k];
    sxy += lx[k] * ly[k];
  }
  double denom = m * sxx - sx * sx;
  RateFit fit;
  fit.slope = (m * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / m;
  double ss = 0;
  for (size_t k = 0; k < m; ++k) {
    double r = ly[k] - (fit.intercept + fit.slope * lx[k]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / m);
  return fit;
}

StudyResult run_study(const StudyConfig& cfg) {
  if (cfg.n_grid.empty() || cfg.seeds.empty())
    throw std::invalid_argument("study needs a non-empty n grid and seed list");
  for (size_t k = 1; k < cfg.n_grid.size(); ++k)
    if (cfg.n_grid[k] <= cfg.n_grid[k - 1])
      throw std::invalid_argument("n grid must be strictly increasing");

  StudyResult result;
  if (cfg.fiducials) {
    result.summary.design_is_scic =
        is_scic(cfg.design, *cfg.fiducials, cfg.target_set).scic;
  }

  ProbabilityTable p_true = probabilities(cfg.true_set, cfg.design);
  const double reg_true_target = regularization(cfg.true_set, cfg.target_set);

  result.summary.all_physical = true;
  result.summary.all_dominance_ok = true;
  for (long n : cfg.n_grid) {
    for (std::uint64_t seed : cfg.seeds) {
      auto t0 = std::chrono::steady_clock::now();
      Dataset ds = sample(p_true, n, seed);
      EmpiricalTable f = frequencies(ds);

      RegularizationConfig reg_cfg;
      reg_cfg.schedule = RSchedule::kCOverN;
      reg_cfg.c = cfg.c;
      EstimateResult est = estimate(f, cfg.design, cfg.target_set, reg_cfg, cfg.opt,
                                    cfg.fiducials);

      StudyRow row;
      row.n = n;
      row.seed = seed;
      row.r_used = est.r_used;
      row.sqrt_loss_est_true =
          std::sqrt(loss(probabilities(est.estimate, cfg.design), p_true, cfg.design));
      row.sqrt_loss_true_emp = std::sqrt(loss(p_true, f, cfg.design));
      GaugeDistanceConfig gd_cfg;
      gd_cfg.fiducials = cfg.fiducials;
      row.gauge_dist = gauge_distance(est.estimate, cfg.true_set, gd_cfg).distance;
      row.reg_to_target = est.reg_value;
      row.physical = validate(est.estimate, 1e-8, 1e-8).all_pass();

      double f_true = loss(p_true, f, cfg.design) + est.r_used * reg_true_target;
      row.dominance_ok = est.objective_value <= f_true + 1e-8;

      row.runtime_s = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0).count();
      result.summary.all_physical &= row.physical;
      result.summary.all_dominance_ok &= row.dominance_ok;
      result.rows.push_back(row);
    }
  }

  std::sort(result.rows.begin(), result.rows.end(),
            [](const StudyRow& a, const StudyRow& b) {
              return std::tie(a.n, a.seed) < std::tie(b.n, b.seed);
            });

  StudySummary& sum = result.summary;
  std::vector<double> fit_n, fit_emp, fit_est;
  for (long n : cfg.n_grid) {
    std::vector<double> est_true, true_emp, gd;
    for (const StudyRow& row : result.rows) {
      if (row.n != n) continue;
      est_true.push_back(row.sqrt_loss_est_true);
      true_emp.push_back(row.sqrt_loss_true_emp);
      gd.push_back(row.gauge_dist);
    }
    sum.n_values.push_back(n);
    sum.median_sqrt_loss_est_true.push_back(median(est_true));
    sum.median_sqrt_loss_true_emp.push_back(median(true_emp));
    sum.median_gauge_dist.push_back(median(gd));
    double lil = std::sqrt(std::log(std::log(static_cast<double>(n))) / n);
    sum.ratio_emp_to_lil.push_back(sum.median_sqrt_loss_true_emp.back() / lil);
    fit_n.push_back(static_cast<double>(n));
    fit_emp.push_back(sum.median_sqrt_loss_true_emp.back());
    fit_est.push_back(sum.median_sqrt_loss_est_true.back());
  }
  if (cfg.n_grid.size() >= 3) {
    sum.emp_rate = fit_rate(fit_n, fit_emp);
    sum.est_rate = fit_rate(fit_n, fit_est);
  }
  return result;
}

std::string study_rows_to_csv(const std::vector<StudyRow>& rows) {
  std::ostringstream os;
  os << "n,seed,sqrt_loss_est_true,sqrt_loss_true_emp,gauge_dist,reg_to_target,"
        "r_used,physical,runtime_s\n";
  for (const StudyRow& r : rows) {
    os << r.n << ',' << r.seed << ',' << io::format_double(r.sqrt_loss_est_true) << ','
       << io::format_double(r.sqrt_loss_true_emp) << ','
       << io::format_double(r.gauge_dist) << ',' << io::format_double(r.reg_to_target)
       << ',' << io::format_double(r.r_used) << ',' << (r.physical ? 1 : 0) << ','
       << io::format_double(r.runtime_s) << '\n';
  }
  return os.str();
}

}  // namespace rscqt
