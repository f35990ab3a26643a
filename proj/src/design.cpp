#include "rscqt/design.hpp"

#include <Eigen/SVD>

namespace rscqt {

SequenceSet::SequenceSet(const std::vector<GateIndexSequence>& sequences) {
  for (const auto& seq : sequences) {
    if (!insert(seq))
      throw std::invalid_argument("duplicate sequence " + format_sequence(seq) +
                                  " in SequenceSet");
  }
}

bool SequenceSet::insert(const GateIndexSequence& seq) {
  if (!seen_.insert(seq).second) return false;
  seqs_.push_back(seq);
  return true;
}

bool SequenceSet::contains(const GateIndexSequence& seq) const {
  return seen_.count(seq) != 0;
}

std::vector<Rvec> prepared_state_vectors(const GateSet& s, const SequenceSet& fids) {
  const MatrixBasis& basis = s.basis();
  Rvec rho_vec = vectorize(s.rho.mat, basis);
  std::vector<Rvec> out;
  out.reserve(fids.size());
  for (const auto& seq : fids.sequences()) {
    Rvec v = rho_vec;
    for (int idx : seq) {
      if (idx < 1 || idx > s.num_gates())
        throw std::invalid_argument("fiducial gate index out of range");
      v = s.gates[idx - 1].hs * v;
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Rvec> measured_effect_vectors(const GateSet& s, const SequenceSet& fids) {
  const MatrixBasis& basis = s.basis();
  std::vector<Rvec> effect_vecs;
  for (const auto& [label, effect] : s.povm.effects)
    effect_vecs.push_back(vectorize(effect, basis));

  // <<G*(Pi)| = <<Pi| HS(G): propagate the row vector through the sequence
  // in forward order.
  std::vector<Rvec> out;
  out.reserve(static_cast<size_t>(fids.size()) * effect_vecs.size());
  for (const auto& seq : fids.sequences()) {
    for (const Rvec& e : effect_vecs) {
      Eigen::RowVectorXd row = e.transpose();
      for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
        int idx = *it;
        if (idx < 1 || idx > s.num_gates())
          throw std::invalid_argument("fiducial gate index out of range");
        row = row * s.gates[idx - 1].hs;
      }
      out.push_back(row.transpose());
    }
  }
  return out;
}

namespace {

CompletenessReport rank_report(const std::vector<Rvec>& vectors, int required_rank,
                               double rank_tol) {
  Rmat stacked(required_rank, static_cast<int>(vectors.size()));
  for (size_t k = 0; k < vectors.size(); ++k) stacked.col(static_cast<int>(k)) = vectors[k];
  Eigen::JacobiSVD<Rmat> svd(stacked);
  Rvec sv = svd.singularValues();
  double cutoff = rank_tol * (sv.size() ? sv(0) : 0.0);
  int rank = 0;
  for (int k = 0; k < sv.size(); ++k)
    if (sv(k) > cutoff) ++rank;
  CompletenessReport report;
  report.rank = rank;
  report.required_rank = required_rank;
  report.complete = rank == required_rank;
  report.singular_values = sv;
  report.rank_tol = rank_tol;
  return report;
}

}  // namespace

CompletenessReport is_tomographically_complete(const GateSet& s, const SequenceSet& fids,
                                               double rank_tol) {
  return rank_report(prepared_state_vectors(s, fids), s.basis().size(), rank_tol);
}

CompletenessReport is_informationally_complete(const GateSet& s, const SequenceSet& fids,
                                               double rank_tol) {
  return rank_report(measured_effect_vectors(s, fids), s.basis().size(), rank_tol);
}

SequenceSet build_scic(const FiducialDesign& fd) {
  if (fd.prep_fiducials.empty() || fd.meas_fiducials.empty())
    throw std::invalid_argument("fiducial sets must be non-empty");
  SequenceSet out;
  auto concat = [](const GateIndexSequence& a, const GateIndexSequence& b) {
    GateIndexSequence r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
  };
  for (const auto& is : fd.prep_fiducials.sequences())
    for (const auto& ip : fd.meas_fiducials.sequences())
      out.insert(concat(is, ip));
  for (const auto& is : fd.prep_fiducials.sequences())
    for (int g = 1; g <= fd.num_gates; ++g)
      for (const auto& ip : fd.meas_fiducials.sequences())
        out.insert(concat(concat(is, {g}), ip));
  return out;
}

ScicReport is_scic(const SequenceSet& id, const FiducialDesign& fd, const GateSet& s,
                   double rank_tol) {
  ScicReport report;
  report.subset_ok = true;
  SequenceSet required = build_scic(fd);
  for (const auto& seq : required.sequences()) {
    if (!id.contains(seq)) {
      report.subset_ok = false;
      report.first_missing = seq;
      break;
    }
  }
  report.prep = is_tomographically_complete(s, fd.prep_fiducials, rank_tol);
  report.meas = is_informationally_complete(s, fd.meas_fiducials, rank_tol);
  report.scic = report.subset_ok && report.prep.complete && report.meas.complete;
  return report;
}

}  // namespace rscqt
