#pragma once

#include <cstdint>
#include <random>

#include "rscqt/gauge.hpp"
#include "rscqt/qops.hpp"

namespace rscqt {
namespace random_gen {

Cmat ginibre(int rows, int cols, std::mt19937_64& rng);
Cmat random_unitary(int dim, std::mt19937_64& rng);
Cmat random_density(int dim, std::mt19937_64& rng);

// Random CPTP channel from a Stinespring dilation with the given number
// of Kraus operators.
GateChannel random_channel(int dim, int num_kraus, std::mt19937_64& rng);

// Random POVM: positive pre-effects completed symmetrically to identity.
Povm random_povm(int dim, int num_outcomes, std::mt19937_64& rng);

GateSet random_gate_set(int dim, int num_gates, int num_outcomes, std::mt19937_64& rng);

/// A = exp(strength * M) with M Gaussian; rescaled until the condition
/// number falls inside [1, max_condition].
GaugeTransform random_gauge(int dsq, double strength, double max_condition,
                            std::mt19937_64& rng);

}  // namespace random_gen
}  // namespace rscqt
