#pragma once

#include "rscqt/design.hpp"
#include "rscqt/qops.hpp"

namespace rscqt {
namespace models {

// Single-qubit rotation exp(-i angle/2 * axis.sigma) as a channel.
GateChannel rotation_gate(double angle, char axis, const std::string& name);
GateChannel identity_gate(int dim, const std::string& name = "I");
GateChannel depolarized(const GateChannel& g, double p);

/// {|0><0|, Z measurement, gates {I, X_pi/2, Y_pi/2}}.
GateSet ideal_qubit_target();

/// Target with 5% depolarization on every gate, 2 degree over-rotation on
/// X_pi/2, 1% state preparation and readout error. The desk-scale
/// benchmark noise model.
GateSet benchmark_noisy_set();

/// Id_s = Id_p = { empty, (2), (3), (2,2) } over the three target gates;
/// the standard fiducials, complete for near-ideal sets.
FiducialDesign default_qubit_fiducials();

}  // namespace models
}  // namespace rscqt
