#pragma once

#include <optional>

#include "rscqt/design.hpp"
#include "rscqt/minimize.hpp"
#include "rscqt/qops.hpp"
#include "rscqt/simulator.hpp"

namespace rscqt {

class NoLinearGaugeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invertible linear action on vectorized operators:
/// |rho>> -> A|rho>>, <<Pi| -> <<Pi|A^-1, G -> A G A^-1.
struct GaugeTransform {
  Rmat a;
  double condition_number = 0.0;

  static GaugeTransform identity(int dsq);
  static GaugeTransform from_matrix(Rmat a);  // computes condition number, rejects singular
};

struct GaugedSet {
  GateSet set;                  // may be unphysical
  ValidationReport validation;  // reported, never required
};

GaugedSet apply_gauge(const GateSet& s, const GaugeTransform& t);

// Composition t2 o t1 (t1 applied first).
GaugeTransform compose(const GaugeTransform& t2, const GaugeTransform& t1);

struct GaugeMatchResult {
  GaugeTransform transform;
  double max_residual = 0.0;  // relative, over all fiducial state/effect vectors
};

/// Constructive gauge matching: solves the basis change on d^2 independent
/// prepared-state vectors and verifies the remaining state and effect
/// vectors. Throws NoLinearGaugeError when the residual shows the two sets
/// are not gauge-equivalent.
GaugeMatchResult linear_gauge_match(const GateSet& s, const GateSet& s_tilde,
                                    const FiducialDesign& fd,
                                    double rank_tol = kDefaultRankTol,
                                    double residual_tol = 1e-7);

struct GaugeDistanceConfig {
  OptimizerConfig opt;
  std::optional<FiducialDesign> fiducials;  // enables the gauge-match start
};

struct GaugeDistanceResult {
  double distance = 0.0;
  GaugeTransform transform;
  bool converged = false;
};

/// min over invertible A of R(s, T_A(s_ref)); A parameterized as exp(M)
/// over unconstrained real M, multi-started from the identity and from
/// linear_gauge_match when fiducials are supplied.
GaugeDistanceResult gauge_distance(const GateSet& s, const GateSet& s_ref,
                                   const GaugeDistanceConfig& cfg = {});

/// max_i ||p^i(s) - p^i(s_tilde)||_inf <= tol over the design.
bool indistinguishable(const GateSet& s, const GateSet& s_tilde, const SequenceSet& id,
                       double tol);

// Largest per-outcome probability gap over the design.
double probability_gap(const GateSet& s, const GateSet& s_tilde, const SequenceSet& id);

}  // namespace rscqt
