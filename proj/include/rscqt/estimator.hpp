#pragma once

#include <optional>

#include "rscqt/design.hpp"
#include "rscqt/minimize.hpp"
#include "rscqt/qops.hpp"
#include "rscqt/simulator.hpp"

namespace rscqt {

/// Squared 2-norm distance split over components:
/// (1/2)||rho-rho'||^2 + (1/|Omega|) sum (1/2)||Pi-Pi'||^2
/// + sum_g (1/2d^2)||HS(G)-HS(G')||^2.
double regularization(const GateSet& s, const GateSet& s_prime);

enum class RSchedule { kFixed, kCOverN, kCrossValidated };

struct RegularizationConfig {
  RSchedule schedule = RSchedule::kCOverN;
  double r = 1e-3;  // used directly when fixed
  double c = 1.0;   // r = c / N otherwise
  std::vector<double> grid;  // cross-validation candidates for c
  int folds = 5;
  std::uint64_t cv_seed = 0;
};

struct EstimateResult {
  GateSet estimate;
  double loss_value = 0.0;
  double reg_value = 0.0;
  double objective_value = 0.0;
  double r_used = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string initial_point;  // which multi-start won
};

/// Interior parameterization of the physical set: Cholesky-style factors
/// for rho and the POVM, Choi factors with a trace-preservation
/// renormalization for gates. decode() is physical for every finite
/// parameter vector.
class Parameterization {
 public:
  Parameterization(int dim, std::vector<std::string> outcome_labels, int num_gates);

  int size() const { return total_; }
  GateSet decode(const Rvec& params) const;
  Rvec encode(const GateSet& s) const;

 private:
  int dim_;
  std::vector<std::string> labels_;
  int num_gates_;
  int total_;
};

double objective(const GateSet& s, const EmpiricalTable& f, const SequenceSet& id,
                 const GateSet& target, double r);

EstimateResult estimate(const EmpiricalTable& f, const SequenceSet& id,
                        const GateSet& target, const RegularizationConfig& cfg,
                        const OptimizerConfig& opt = {},
                        const std::optional<FiducialDesign>& fd = std::nullopt);

/// LGST-style linear inversion in the target's fiducial frame, projected
/// to the physical set. Initializer only.
GateSet linear_inversion_init(const EmpiricalTable& f, const FiducialDesign& fd,
                              const GateSet& target, double rank_tol = kDefaultRankTol);

/// K-fold cross validation over sequences for the c in r = c/N.
/// Ties resolve to the smaller candidate.
double select_r(const EmpiricalTable& f, const SequenceSet& id, const GateSet& target,
                const std::vector<double>& grid, int folds, std::uint64_t seed,
                const OptimizerConfig& opt = {},
                const std::optional<FiducialDesign>& fd = std::nullopt);

}  // namespace rscqt
