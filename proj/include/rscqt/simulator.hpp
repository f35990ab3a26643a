#pragma once

#include <cstdint>
#include <map>

#include "rscqt/design.hpp"
#include "rscqt/qops.hpp"

namespace rscqt {

/// One outcome distribution per sequence; rows aligned to `outcomes`.
struct DistributionTable {
  std::vector<std::string> outcomes;       // lexicographic label order
  std::vector<GateIndexSequence> sequences;
  std::vector<Rvec> rows;

  // Shots behind each row; 0 means exact probabilities.
  long shots = 0;

  const Rvec& row(const GateIndexSequence& seq) const;
  bool has_row(const GateIndexSequence& seq) const;
  void add_row(const GateIndexSequence& seq, Rvec p);

 private:
  std::map<GateIndexSequence, int> index_;
};

using ProbabilityTable = DistributionTable;
using EmpiricalTable = DistributionTable;

struct Dataset {
  std::vector<std::string> outcomes;
  std::vector<GateIndexSequence> sequences;
  std::vector<std::vector<long>> counts;  // aligned to outcomes
  long shots = 0;
  std::uint64_t seed = 0;
};

ProbabilityTable probabilities(const GateSet& s, const SequenceSet& id);

/// Multinomial sampling, one independent substream per row keyed by
/// (seed, row index), so results do not depend on evaluation order.
Dataset sample(const ProbabilityTable& table, long shots, std::uint64_t seed);

EmpiricalTable frequencies(const Dataset& ds);

/// L = (1/|Id|) sum_i (1/2) ||p_a^i - p_b^i||_2^2
double loss(const DistributionTable& a, const DistributionTable& b,
            const SequenceSet& id);

}  // namespace rscqt
