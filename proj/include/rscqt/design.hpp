#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rscqt/qops.hpp"

namespace rscqt {

class DegenerateDesignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered, duplicate-free collection of gate index sequences.
/// Insertion order is the canonical order so data files align across runs.
class SequenceSet {
 public:
  SequenceSet() = default;
  explicit SequenceSet(const std::vector<GateIndexSequence>& sequences);

  // Appends unless already present; returns true when inserted.
  bool insert(const GateIndexSequence& seq);
  bool contains(const GateIndexSequence& seq) const;

  const std::vector<GateIndexSequence>& sequences() const { return seqs_; }
  int size() const { return static_cast<int>(seqs_.size()); }
  bool empty() const { return seqs_.empty(); }
  const GateIndexSequence& operator[](int k) const { return seqs_[k]; }

 private:
  std::vector<GateIndexSequence> seqs_;
  std::set<GateIndexSequence> seen_;
};

/// Prep fiducials Id_s and measurement fiducials Id_p over n_g gates.
struct FiducialDesign {
  SequenceSet prep_fiducials;
  SequenceSet meas_fiducials;
  int num_gates = 0;
};

struct CompletenessReport {
  bool complete = false;
  int rank = 0;
  int required_rank = 0;
  Rvec singular_values;
  double rank_tol = 0.0;
};

inline constexpr double kDefaultRankTol = 1e-8;

// Vectorized G_iL o ... o G_i1 (rho), one vector per fiducial.
std::vector<Rvec> prepared_state_vectors(const GateSet& s, const SequenceSet& fids);

// Vectorized G*_i1 o ... o G*_iL (Pi_w), |fids| * |Omega| vectors; for a
// fixed fiducial, outcomes appear in label order.
std::vector<Rvec> measured_effect_vectors(const GateSet& s, const SequenceSet& fids);

CompletenessReport is_tomographically_complete(const GateSet& s, const SequenceSet& fids,
                                               double rank_tol = kDefaultRankTol);
CompletenessReport is_informationally_complete(const GateSet& s, const SequenceSet& fids,
                                               double rank_tol = kDefaultRankTol);

// All concatenations i_s + i_p and i_s + (g) + i_p, deduplicated,
// first occurrence kept.
SequenceSet build_scic(const FiducialDesign& fd);

struct ScicReport {
  bool scic = false;
  bool subset_ok = false;
  CompletenessReport prep;
  CompletenessReport meas;
  std::optional<GateIndexSequence> first_missing;
};

ScicReport is_scic(const SequenceSet& id, const FiducialDesign& fd, const GateSet& s,
                   double rank_tol = kDefaultRankTol);

}  // namespace rscqt
