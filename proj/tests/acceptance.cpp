// Acceptance suite: one pass/fail line per criterion, nonzero exit when
// any criterion fails. Shared desk-scale benchmark: the noisy single-qubit
// set against its ideal target over the standard SCIC design.
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "rscqt/estimator.hpp"
#include "rscqt/gauge.hpp"
#include "rscqt/harness.hpp"
#include "rscqt/models.hpp"
#include "rscqt/random.hpp"
#include "rscqt/simulator.hpp"

using namespace rscqt;

namespace {

int g_failures = 0;

void report(int num, const char* name, bool pass, const std::string& detail) {
  if (!pass) ++g_failures;
  std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", num, name,
              detail.c_str());
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

double elapsed_s(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

void criterion_1_gauge_invariance(const SequenceSet& id) {
  auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    GateSet s = random_gen::random_gate_set(2, 3, 2, rng);
    GaugeTransform t = random_gen::random_gauge(4, 0.5, 100, rng);
    GateSet image = apply_gauge(s, t).set;
    worst = std::max(worst, probability_gap(s, image, id));
  }
  double secs = elapsed_s(start);
  report(1, "gauge invariance of design probabilities",
         worst <= 1e-10 && secs < 60.0,
         "max gap " + fmt(worst) + ", " + fmt(secs) + " s");
}

void criterion_2_perturbation_visibility(const GateSet& bench, const SequenceSet& id) {
  // physical, non-gauge perturbation families of the benchmark model
  std::vector<GateSet> perturbed;
  for (int g = 0; g < 3; ++g) {
    for (double eps : {0.01, 0.02}) {
      GateSet p = bench;
      p.gates[g] = models::depolarized(p.gates[g], eps);
      perturbed.push_back(p);
    }
  }
  const double base_over = 2.0 * M_PI / 180.0;
  for (double delta : {0.03, -0.03}) {
    GateSet p = bench;
    p.gates[1] = models::depolarized(
        models::rotation_gate(M_PI / 2 + base_over + delta, 'x', "X90"), 0.05);
    perturbed.push_back(p);
    GateSet q = bench;
    q.gates[2] =
        models::depolarized(models::rotation_gate(M_PI / 2 + delta, 'y', "Y90"), 0.05);
    perturbed.push_back(q);
  }
  for (int g = 0; g < 3; ++g) {
    GateSet p = bench;
    GateChannel tilt = models::rotation_gate(0.03, 'z', "tilt");
    p.gates[g].hs = tilt.hs * p.gates[g].hs;
    perturbed.push_back(p);
  }
  {
    GateSet p = bench;
    p.rho.mat = 0.99 * p.rho.mat + 0.01 * Cmat::Identity(2, 2) / 2.0;
    perturbed.push_back(p);
    GateSet q = bench;
    Cmat one = Cmat::Zero(2, 2);
    one(1, 1) = 1.0;
    q.rho.mat = 0.99 * q.rho.mat + 0.01 * one;
    perturbed.push_back(q);
  }
  for (double eps : {0.005, 0.01}) {
    GateSet p = bench;
    Cmat pi0 = p.povm.effects.at("0");
    Cmat pi1 = p.povm.effects.at("1");
    p.povm.effects.at("0") = (1.0 - eps) * pi0 + eps * pi1;
    p.povm.effects.at("1") = (1.0 - eps) * pi1 + eps * pi0;
    perturbed.push_back(p);
  }
  {
    GateSet p = bench;
    p.gates[2] = models::depolarized(p.gates[2], 0.03);
    perturbed.push_back(p);
    GateSet q = bench;
    GateChannel kick = models::rotation_gate(0.03, 'x', "kick");
    q.gates[0].hs = kick.hs * q.gates[0].hs;
    perturbed.push_back(q);
    GateSet w = bench;
    w.rho.mat = 0.98 * w.rho.mat + 0.02 * Cmat::Identity(2, 2) / 2.0;
    perturbed.push_back(w);
  }

  double min_visible_gap = 1.0;
  int usable = 0;
  for (const GateSet& p : perturbed) {
    if (std::sqrt(regularization(p, bench)) < 1e-3) continue;
    ++usable;
    min_visible_gap = std::min(min_visible_gap, probability_gap(bench, p, id));
  }

  std::mt19937_64 rng2(203);
  double max_gauge_gap = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    GaugeTransform t = random_gen::random_gauge(4, 0.3, 100, rng2);
    max_gauge_gap = std::max(max_gauge_gap,
                             probability_gap(bench, apply_gauge(bench, t).set, id));
  }

  report(2, "non-gauge perturbations visible, gauge perturbations silent",
         usable >= 20 && min_visible_gap >= 1e-5 && max_gauge_gap <= 1e-10,
         "min visible gap " + fmt(min_visible_gap) + ", max gauge gap " +
             fmt(max_gauge_gap));
}

StudyResult shared_study(const GateSet& truth, const GateSet& target,
                         const FiducialDesign& fd, const SequenceSet& id) {
  StudyConfig cfg;
  cfg.true_set = truth;
  cfg.target_set = target;
  cfg.design = id;
  cfg.fiducials = fd;
  cfg.n_grid = {100, 1000, 10000, 100000};
  cfg.seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  cfg.c = 1.0;
  cfg.opt.max_iterations = 2000;
  return run_study(cfg);
}

void criterion_3_physicality(const StudyResult& study) {
  int physical = 0;
  for (const StudyRow& row : study.rows) physical += row.physical ? 1 : 0;
  report(3, "all study estimates are physical",
         physical == static_cast<int>(study.rows.size()),
         std::to_string(physical) + "/" + std::to_string(study.rows.size()));
}

void criterion_4_dominance(const StudyResult& study) {
  int ok = 0;
  for (const StudyRow& row : study.rows) ok += row.dominance_ok ? 1 : 0;
  report(4, "objective dominance over the true set",
         ok == static_cast<int>(study.rows.size()),
         std::to_string(ok) + "/" + std::to_string(study.rows.size()));
}

void criterion_5_empirical_rate(const GateSet& truth, const SequenceSet& id) {
  auto start = std::chrono::steady_clock::now();
  ProbabilityTable p = probabilities(truth, id);
  std::vector<long> n_grid = {100, 1000, 10000, 100000};
  std::vector<double> n_values, medians;
  double worst_ratio = 0.0;
  for (long n : n_grid) {
    std::vector<double> values;
    for (std::uint64_t seed = 0; seed < 20; ++seed)
      values.push_back(std::sqrt(loss(p, frequencies(sample(p, n, seed)), id)));
    double med = median(values);
    n_values.push_back(static_cast<double>(n));
    medians.push_back(med);
    double lil = std::sqrt(std::log(std::log(static_cast<double>(n))) / n);
    worst_ratio = std::max(worst_ratio, med / lil);
  }
  RateFit fit = fit_rate(n_values, medians);
  double secs = elapsed_s(start);
  report(5, "empirical distribution convergence rate",
         fit.slope >= -0.6 && fit.slope <= -0.4 && worst_ratio <= 5.0 &&
             secs < 120.0,
         "slope " + fmt(fit.slope) + ", max LIL ratio " + fmt(worst_ratio) + ", " +
             fmt(secs) + " s");
}

void criterion_6_estimator_convergence(const StudyResult& study, double study_secs) {
  const StudySummary& sum = study.summary;
  bool non_increasing = true;
  for (size_t k = 1; k < sum.median_sqrt_loss_est_true.size(); ++k)
    if (sum.median_sqrt_loss_est_true[k] > sum.median_sqrt_loss_est_true[k - 1])
      non_increasing = false;
  double est_final = sum.median_sqrt_loss_est_true.back();
  double emp_final = sum.median_sqrt_loss_true_emp.back();
  report(6, "estimator convergence with r = 1/N",
         non_increasing && est_final <= 3.0 * emp_final && study_secs < 1800.0,
         "final est " + fmt(est_final) + " vs 3x emp " + fmt(3.0 * emp_final) +
             ", study " + fmt(study_secs) + " s");
}

void criterion_7_gauge_proxy(const StudyResult& study, const GateSet& truth,
                             const GateSet& target, const FiducialDesign& fd) {
  const StudySummary& sum = study.summary;
  double first = sum.median_gauge_dist.front();
  double last = sum.median_gauge_dist.back();
  GaugeDistanceConfig cfg;
  cfg.fiducials = fd;
  double true_to_target = gauge_distance(truth, target, cfg).distance;
  report(7, "gauge distance shrinks toward the true orbit",
         last < 0.2 * first && last < true_to_target,
         "R at 1e5 " + fmt(last) + ", 20% of R at 1e2 " + fmt(0.2 * first) +
             ", R(true,target) " + fmt(true_to_target));
}

void criterion_8_large_r(const GateSet& truth, const GateSet& target,
                         const FiducialDesign& fd, const SequenceSet& id) {
  EmpiricalTable f = frequencies(sample(probabilities(truth, id), 1000, 77));
  RegularizationConfig cfg;
  cfg.schedule = RSchedule::kFixed;
  cfg.r = 1e6;
  EstimateResult result = estimate(f, id, target, cfg, {}, fd);
  report(8, "large r pins the estimate to the target", result.reg_value <= 1e-6,
         "R(est,target) " + fmt(result.reg_value));
}

void criterion_9_gauge_matching(const GateSet& bench, const FiducialDesign& fd) {
  std::mt19937_64 rng(909);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    GaugeTransform t0 = random_gen::random_gauge(4, 0.4, 100, rng);
    GateSet image = apply_gauge(bench, t0).set;
    GaugeMatchResult match = linear_gauge_match(bench, image, fd);
    double rel = (match.transform.a - t0.a).cwiseAbs().maxCoeff() /
                 t0.a.cwiseAbs().maxCoeff();
    worst = std::max(worst, rel);
  }
  report(9, "linear gauge matching round-trip", worst <= 1e-8,
         "max relative error " + fmt(worst));
}

void criterion_10_infinite_data(const GateSet& truth, const GateSet& target,
                                const FiducialDesign& fd, const SequenceSet& id) {
  EmpiricalTable f = probabilities(truth, id);
  RegularizationConfig cfg;
  cfg.schedule = RSchedule::kFixed;
  cfg.r = 1e-6;
  EstimateResult result = estimate(f, id, target, cfg, {}, fd);
  ProbabilityTable p_est = probabilities(result.estimate, id);
  double sqrt_loss = std::sqrt(loss(p_est, f, id));
  GaugeDistanceConfig gd_cfg;
  gd_cfg.fiducials = fd;
  double dist = gauge_distance(result.estimate, truth, gd_cfg).distance;
  report(10, "exact data recovers the truth up to gauge",
         sqrt_loss <= 1e-4 && dist <= 1e-4,
         "sqrt loss " + fmt(sqrt_loss) + ", R(est,[true]) " + fmt(dist));
}

}  // namespace

int main() {
  GateSet truth = models::benchmark_noisy_set();
  GateSet target = models::ideal_qubit_target();
  FiducialDesign fd = models::default_qubit_fiducials();
  SequenceSet id = build_scic(fd);

  criterion_1_gauge_invariance(id);
  criterion_2_perturbation_visibility(truth, id);

  auto study_start = std::chrono::steady_clock::now();
  StudyResult study = shared_study(truth, target, fd, id);
  double study_secs = elapsed_s(study_start);

  criterion_3_physicality(study);
  criterion_4_dominance(study);
  criterion_5_empirical_rate(truth, id);
  criterion_6_estimator_convergence(study, study_secs);
  criterion_7_gauge_proxy(study, truth, target, fd);
  criterion_8_large_r(truth, target, fd, id);
  criterion_9_gauge_matching(truth, fd);
  criterion_10_infinite_data(truth, target, fd, id);

  std::printf("%d of 10 criteria passed\n", 10 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
