#include "rscqt/simulator.hpp"

#include <random>
#include <stdexcept>

namespace rscqt {

const Rvec& DistributionTable::row(const GateIndexSequence& seq) const {
  auto it = index_.find(seq);
  if (it == index_.end())
    throw std::invalid_argument("table has no row for sequence " + format_sequence(seq));
  return rows[it->second];
}

bool DistributionTable::has_row(const GateIndexSequence& seq) const {
  return index_.count(seq) != 0;
}

void DistributionTable::add_row(const GateIndexSequence& seq, Rvec p) {
  if (index_.count(seq))
    throw std::invalid_argument("duplicate row for sequence " + format_sequence(seq));
  index_[seq] = static_cast<int>(rows.size());
  sequences.push_back(seq);
  rows.push_back(std::move(p));
}

ProbabilityTable probabilities(const GateSet& s, const SequenceSet& id) {
  ProbabilityTable table;
  table.outcomes = s.povm.labels();
  table.shots = 0;
  const MatrixBasis& basis = s.basis();
  Rvec rho_vec = vectorize(s.rho.mat, basis);
  std::vector<Rvec> effect_vecs;
  for (const auto& [label, effect] : s.povm.effects)
    effect_vecs.push_back(vectorize(effect, basis));

  for (const auto& seq : id.sequences()) {
    Rvec v = rho_vec;
    for (int idx : seq) {
      if (idx < 1 || idx > s.num_gates())
        throw std::invalid_argument("gate index out of range in sequence " +
                                    format_sequence(seq));
      v = s.gates[idx - 1].hs * v;
    }
    Rvec p(static_cast<int>(effect_vecs.size()));
    for (size_t w = 0; w < effect_vecs.size(); ++w)
      p(static_cast<int>(w)) = effect_vecs[w].dot(v);
    for (int k = 0; k < p.size(); ++k) {
      if (p(k) < -1e-10 || p(k) > 1.0 + 1e-10)
        throw std::domain_error("probability outside [0,1] for sequence " +
                                format_sequence(seq));
      p(k) = std::min(std::max(p(k), 0.0), 1.0);
    }
    double sum = p.sum();
    if (std::abs(sum - 1.0) > 1e-10)
      throw std::domain_error("probabilities sum to " + std::to_string(sum) +
                              " for sequence " + format_sequence(seq));
    table.add_row(seq, p / sum);
  }
  return table;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Sequential conditional-binomial multinomial draw.
std::vector<long> draw_multinomial(const Rvec& p, long n, std::mt19937_64& rng) {
  std::vector<long> counts(p.size(), 0);
  long remaining = n;
  double mass = 1.0;
  for (int k = 0; k < p.size() && remaining > 0; ++k) {
    if (k == p.size() - 1) {
      counts[k] = remaining;
      remaining = 0;
      break;
    }
    double q = mass > 0.0 ? std::min(1.0, std::max(0.0, p(k) / mass)) : 0.0;
    std::binomial_distribution<long> bin(remaining, q);
    long c = bin(rng);
    counts[k] = c;
    remaining -= c;
    mass -= p(k);
  }
  return counts;
}

}  // namespace

Dataset sample(const ProbabilityTable& table, long shots, std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("shots must be positive");
  Dataset ds;
  ds.outcomes = table.outcomes;
  ds.sequences = table.sequences;
  ds.shots = shots;
  ds.seed = seed;
  ds.counts.reserve(table.rows.size());
  for (size_t r = 0; r < table.rows.size(); ++r) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(r))));
    ds.counts.push_back(draw_multinomial(table.rows[r], shots, rng));
  }
  return ds;
}

EmpiricalTable frequencies(const Dataset& ds) {
  EmpiricalTable table;
  table.outcomes = ds.outcomes;
  table.shots = ds.shots;
  for (size_t r = 0; r < ds.sequences.size(); ++r) {
    Rvec f(static_cast<int>(ds.counts[r].size()));
    long total = 0;
    for (size_t k = 0; k < ds.counts[r].size(); ++k) {
      if (ds.counts[r][k] < 0) throw std::invalid_argument("negative count");
      f(static_cast<int>(k)) =
          static_cast<double>(ds.counts[r][k]) / static_cast<double>(ds.shots);
      total += ds.counts[r][k];
    }
    if (total != ds.shots)
      throw std::invalid_argument("row counts do not sum to the repetition number");
    table.add_row(ds.sequences[r], std::move(f));
  }
  return table;
}

double loss(const DistributionTable& a, const DistributionTable& b,
            const SequenceSet& id) {
  if (id.empty()) throw std::invalid_argument("loss over empty sequence set");
  if (a.outcomes != b.outcomes)
    throw std::invalid_argument("loss: tables have different outcome sets");
  double total = 0.0;
  for (const auto& seq : id.sequences()) {
    const Rvec& pa = a.row(seq);
    const Rvec& pb = b.row(seq);
    total += 0.5 * (pa - pb).squaredNorm();
  }
  return total / static_cast<double>(id.size());
}

}  // namespace rscqt
