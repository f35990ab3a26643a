#include "rscqt/models.hpp"

#include <cmath>

namespace rscqt {
namespace models {

namespace {

Cmat pauli_of(char axis) {
  const Complex i1(0.0, 1.0);
  Cmat m(2, 2);
  switch (axis) {
    case 'x':
    case 'X':
      m << 0, 1, 1, 0;
      return m;
    case 'y':
    case 'Y':
      m << 0, -i1, i1, 0;
      return m;
    case 'z':
    case 'Z':
      m << 1, 0, 0, -1;
      return m;
  }
  throw std::invalid_argument("axis must be one of x, y, z");
}

}  // namespace

GateChannel rotation_gate(double angle, char axis, const std::string& name) {
  const Complex i1(0.0, 1.0);
  Cmat u = std::cos(angle / 2) * Cmat::Identity(2, 2) -
           i1 * std::sin(angle / 2) * pauli_of(axis);
  return hs_from_kraus({u}, standard_basis(2), name);
}

GateChannel identity_gate(int dim, const std::string& name) {
  const MatrixBasis& basis = standard_basis(dim);
  return GateChannel{name, Rmat::Identity(basis.size(), basis.size())};
}

GateChannel depolarized(const GateChannel& g, double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("depolarization strength in [0,1]");
  const int dsq = static_cast<int>(g.hs.rows());
  // fully depolarizing channel fixes B_0 = I/sqrt(d) and kills the rest
  Rmat depol = Rmat::Zero(dsq, dsq);
  depol(0, 0) = 1.0;
  GateChannel out = g;
  out.hs = (1.0 - p) * g.hs + p * depol;
  return out;
}

GateSet ideal_qubit_target() {
  GateSet s;
  s.rho.mat = Cmat::Zero(2, 2);
  s.rho.mat(0, 0) = 1.0;
  Cmat p0 = Cmat::Zero(2, 2), p1 = Cmat::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  s.povm.effects["0"] = p0;
  s.povm.effects["1"] = p1;
  s.gates.push_back(identity_gate(2, "I"));
  s.gates.push_back(rotation_gate(M_PI / 2, 'x', "X90"));
  s.gates.push_back(rotation_gate(M_PI / 2, 'y', "Y90"));
  return s;
}

GateSet benchmark_noisy_set() {
  const double depol_p = 0.05;
  const double over_rotation = 2.0 * M_PI / 180.0;
  const double spam_error = 0.01;

  GateSet s = ideal_qubit_target();
  s.gates[1] = rotation_gate(M_PI / 2 + over_rotation, 'x', "X90");
  for (auto& g : s.gates) g = depolarized(g, depol_p);

  Cmat mixed = Cmat::Identity(2, 2) / 2.0;
  s.rho.mat = (1.0 - spam_error) * s.rho.mat + spam_error * mixed;

  Cmat p0 = s.povm.effects["0"], p1 = s.povm.effects["1"];
  s.povm.effects["0"] = (1.0 - spam_error) * p0 + spam_error * p1;
  s.povm.effects["1"] = (1.0 - spam_error) * p1 + spam_error * p0;
  return s;
}

FiducialDesign default_qubit_fiducials() {
  FiducialDesign fd;
  fd.num_gates = 3;
  for (const GateIndexSequence& seq :
       std::vector<GateIndexSequence>{{}, {2}, {3}, {2, 2}}) {
    fd.prep_fiducials.insert(seq);
    fd.meas_fiducials.insert(seq);
  }
  return fd;
}

}  // namespace models
}  // namespace rscqt
