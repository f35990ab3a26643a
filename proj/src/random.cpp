#include "rscqt/random.hpp"

#include <Eigen/QR>
#include <unsupported/Eigen/MatrixFunctions>

namespace rscqt {
namespace random_gen {

Cmat ginibre(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Cmat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = Complex(gauss(rng), gauss(rng));
  return m;
}

Cmat random_unitary(int dim, std::mt19937_64& rng) {
  Cmat g = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Cmat> qr(g);
  Cmat q = qr.householderQ();
  Cmat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // fix the phase ambiguity so the distribution is Haar
  for (int k = 0; k < dim; ++k) {
    Complex d = r(k, k);
    q.col(k) *= d / std::abs(d);
  }
  return q;
}

Cmat random_density(int dim, std::mt19937_64& rng) {
  Cmat g = ginibre(dim, dim, rng);
  Cmat h = g * g.adjoint();
  return h / h.trace().real();
}

GateChannel random_channel(int dim, int num_kraus, std::mt19937_64& rng) {
  Cmat u = random_unitary(dim * num_kraus, rng);
  std::vector<Cmat> kraus;
  for (int k = 0; k < num_kraus; ++k)
    kraus.push_back(u.block(k * dim, 0, dim, dim));
  return hs_from_kraus(kraus, standard_basis(dim));
}

Povm random_povm(int dim, int num_outcomes, std::mt19937_64& rng) {
  std::vector<Cmat> pre(num_outcomes);
  Cmat sum = Cmat::Zero(dim, dim);
  for (int w = 0; w < num_outcomes; ++w) {
    Cmat g = ginibre(dim, dim, rng);
    pre[w] = g * g.adjoint();
    sum += pre[w];
  }
  Eigen::SelfAdjointEigenSolver<Cmat> es(sum);
  Cmat inv_sqrt = es.operatorInverseSqrt();
  Povm povm;
  for (int w = 0; w < num_outcomes; ++w)
    povm.effects[std::to_string(w)] = inv_sqrt * pre[w] * inv_sqrt;
  return povm;
}

GateSet random_gate_set(int dim, int num_gates, int num_outcomes, std::mt19937_64& rng) {
  GateSet s;
  s.rho.mat = random_density(dim, rng);
  s.povm = random_povm(dim, num_outcomes, rng);
  for (int g = 0; g < num_gates; ++g)
    s.gates.push_back(random_channel(dim, 2, rng));
  return s;
}

GaugeTransform random_gauge(int dsq, double strength, double max_condition,
                            std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Rmat m(dsq, dsq);
  for (int r = 0; r < dsq; ++r)
    for (int c = 0; c < dsq; ++c) m(r, c) = gauss(rng);
  m *= strength / std::sqrt(static_cast<double>(dsq));
  for (int attempt = 0; attempt < 60; ++attempt) {
    GaugeTransform t = GaugeTransform::from_matrix(m.exp());
    if (t.condition_number <= max_condition) return t;
    m *= 0.7;
  }
  return GaugeTransform::identity(dsq);
}

}  // namespace random_gen
}  // namespace rscqt
