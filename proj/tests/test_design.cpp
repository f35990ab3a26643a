#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rscqt/design.hpp"
#include "rscqt/gauge.hpp"
#include "rscqt/models.hpp"
#include "rscqt/random.hpp"

using namespace rscqt;

namespace {

SequenceSet default_fids() {
  return SequenceSet({{}, {2}, {3}, {2, 2}});
}

}  // namespace

TEST_CASE("sequence set rejects duplicates") {
  CHECK_THROWS_AS(SequenceSet({{}, {}}), std::invalid_argument);
  SequenceSet set({{1}, {1, 2}});
  CHECK(set.size() == 2);
  CHECK_FALSE(set.insert({1}));
  CHECK(set.size() == 2);
}

TEST_CASE("prepared state vectors") {
  GateSet s = models::ideal_qubit_target();
  auto single =
      prepared_state_vectors(s, SequenceSet(std::vector<GateIndexSequence>{{}}));
  REQUIRE(single.size() == 1);
  CHECK((single[0] - vectorize(s.rho.mat, s.basis())).cwiseAbs().maxCoeff() <= 1e-14);

  auto vecs = prepared_state_vectors(s, default_fids());
  CHECK(oracle::rank_of(vecs) == 4);
}

TEST_CASE("measured effect vectors and adjoint consistency") {
  GateSet s = models::ideal_qubit_target();
  auto z_only =
      measured_effect_vectors(s, SequenceSet(std::vector<GateIndexSequence>{{}}));
  REQUIRE(z_only.size() == 2);
  CHECK((devectorize(z_only[0], s.basis()) - s.povm.effects.at("0"))
            .cwiseAbs()
            .maxCoeff() <= 1e-12);
  CHECK((devectorize(z_only[1], s.basis()) - s.povm.effects.at("1"))
            .cwiseAbs()
            .maxCoeff() <= 1e-12);

  SequenceSet meas_fids({{}, {2}, {3}});
  auto vecs = measured_effect_vectors(s, meas_fids);
  CHECK(vecs.size() == 6);
  CHECK(oracle::rank_of(vecs) == 4);

  // <effect vector, state vector> reproduces the Born probability of the
  // concatenated sequence
  GateSet noisy = models::benchmark_noisy_set();
  SequenceSet prep_fids = default_fids();
  auto states = prepared_state_vectors(noisy, prep_fids);
  auto effects = measured_effect_vectors(noisy, meas_fids);
  const int n_out = noisy.povm.num_outcomes();
  for (int k = 0; k < prep_fids.size(); ++k) {
    for (int j = 0; j < meas_fids.size(); ++j) {
      GateIndexSequence joined = prep_fids[k];
      joined.insert(joined.end(), meas_fids[j].begin(), meas_fids[j].end());
      Rvec p = born_probability(noisy, joined);
      for (int w = 0; w < n_out; ++w)
        CHECK(std::abs(effects[j * n_out + w].dot(states[k]) - p(w)) <= 1e-12);
    }
  }
}

TEST_CASE("completeness checks") {
  GateSet s = models::ideal_qubit_target();
  CHECK(is_tomographically_complete(s, default_fids()).complete);

  CompletenessReport single =       is_tomographically_complete(s, SequenceSet(std::vector<GateIndexSequence>{{}}));
  CHECK_FALSE(single.complete);
  CHECK(single.rank == 1);

  // a pi rotation only reaches the poles: rank 2
  GateSet with_xpi = s;
  with_xpi.gates.push_back(models::rotation_gate(M_PI, 'x', "Xpi"));
  CompletenessReport poles =
      is_tomographically_complete(with_xpi, SequenceSet({{}, {4}}));
  CHECK_FALSE(poles.complete);
  CHECK(poles.rank == 2);

  CHECK(is_informationally_complete(s, SequenceSet({{}, {2}, {3}})).complete);
  CHECK_FALSE(
      is_informationally_complete(s, SequenceSet(std::vector<GateIndexSequence>{{}}))
          .complete);
  CHECK_FALSE(is_informationally_complete(with_xpi, SequenceSet({{}, {4}})).complete);
}

TEST_CASE("build_scic enumerates every concatenation") {
  FiducialDesign tiny;
  tiny.prep_fiducials.insert({});
  tiny.meas_fiducials.insert({});
  tiny.num_gates = 1;
  SequenceSet scic = build_scic(tiny);
  CHECK(scic.size() == 2);
  CHECK(scic.contains({}));
  CHECK(scic.contains({1}));

  FiducialDesign fd;
  fd.num_gates = 3;
  for (const GateIndexSequence& seq :
       std::vector<GateIndexSequence>{{}, {2}, {3}, {2, 2}})
    fd.prep_fiducials.insert(seq);
  for (const GateIndexSequence& seq : std::vector<GateIndexSequence>{{}, {2}, {3}})
    fd.meas_fiducials.insert(seq);
  SequenceSet big = build_scic(fd);
  CHECK(big.size() <= 4 * 3 * (1 + 3));
  // exhaustive membership
  for (const auto& is : fd.prep_fiducials.sequences()) {
    for (const auto& ip : fd.meas_fiducials.sequences()) {
      GateIndexSequence pair = is;
      pair.insert(pair.end(), ip.begin(), ip.end());
      CHECK(big.contains(pair));
      for (int g = 1; g <= 3; ++g) {
        GateIndexSequence triple = is;
        triple.push_back(g);
        triple.insert(triple.end(), ip.begin(), ip.end());
        CHECK(big.contains(triple));
      }
    }
  }

  // concatenation order
  FiducialDesign order;
  order.prep_fiducials.insert({1});
  order.meas_fiducials.insert({3});
  order.num_gates = 3;
  CHECK(build_scic(order).contains({1, 2, 3}));
}

TEST_CASE("is_scic verdicts") {
  GateSet s = models::ideal_qubit_target();
  FiducialDesign fd = models::default_qubit_fiducials();
  SequenceSet id = build_scic(fd);
  CHECK(is_scic(id, fd, s).scic);

  // remove one required sequence
  SequenceSet pruned;
  for (int k = 1; k < id.size(); ++k) pruned.insert(id[k]);
  ScicReport missing = is_scic(pruned, fd, s);
  CHECK_FALSE(missing.scic);
  CHECK_FALSE(missing.subset_ok);
  REQUIRE(missing.first_missing.has_value());
  CHECK(*missing.first_missing == id[0]);

  // rank-deficient prep fiducials
  FiducialDesign weak;
  weak.prep_fiducials.insert({});
  weak.meas_fiducials = fd.meas_fiducials;
  weak.num_gates = 3;
  ScicReport deficient = is_scic(build_scic(weak), weak, s);
  CHECK_FALSE(deficient.scic);
  CHECK(deficient.subset_ok);
  CHECK_FALSE(deficient.prep.complete);
}

TEST_CASE("completeness verdict is gauge robust") {
  GateSet s = models::benchmark_noisy_set();
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    GaugeTransform t = random_gen::random_gauge(4, 0.5, 1e3, rng);
    GateSet image = apply_gauge(s, t).set;
    CHECK(is_tomographically_complete(image, default_fids()).complete ==
          is_tomographically_complete(s, default_fids()).complete);
    SequenceSet meas({{}, {2}, {3}});
    CHECK(is_informationally_complete(image, meas).complete ==
          is_informationally_complete(s, meas).complete);
  }
}
