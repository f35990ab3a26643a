#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rscqt {

using Cmat = Eigen::MatrixXcd;
using Cvec = Eigen::VectorXcd;
using Rmat = Eigen::MatrixXd;
using Rvec = Eigen::VectorXd;
using Complex = std::complex<double>;

inline constexpr double kDefaultPsdTol = 1e-9;
inline constexpr double kDefaultTraceTol = 1e-9;

/// Orthonormal Hermitian operator basis of a d-dimensional system.
/// Element 0 is always I/sqrt(d), which pins the trace-preservation
/// condition of a superoperator to its first row.
class MatrixBasis {
 public:
  MatrixBasis(int dim, std::vector<Cmat> elements);

  // Normalized Pauli tensor basis for d = 2^n, ordered base-4 (I,X,Y,Z).
  static MatrixBasis pauli(int num_qubits);
  // Generalized Gell-Mann basis for arbitrary d.
  static MatrixBasis gell_mann(int dim);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(elements_.size()); }
  const Cmat& element(int k) const { return elements_[k]; }

 private:
  int dim_;
  std::vector<Cmat> elements_;
};

// Shared per-dimension basis: Pauli tensor basis when d is a power of two,
// generalized Gell-Mann otherwise.
const MatrixBasis& standard_basis(int dim);

struct DensityMatrix {
  Cmat mat;
};

/// Effects keyed by outcome label; std::map gives the lexicographic
/// outcome order used everywhere distributions are vectorized.
struct Povm {
  std::map<std::string, Cmat> effects;

  std::vector<std::string> labels() const;
  int num_outcomes() const { return static_cast<int>(effects.size()); }
};

/// A gate as its d^2 x d^2 real superoperator (Pauli-transfer style) in
/// the standard Hermitian basis.
struct GateChannel {
  std::string name;
  Rmat hs;
};

/// s = {rho, Pi, G_1..G_ng}. Physicality is not enforced at construction;
/// validate() reports it. Gauge images flow through the same type.
struct GateSet {
  DensityMatrix rho;
  Povm povm;
  std::vector<GateChannel> gates;

  int dim() const { return static_cast<int>(rho.mat.rows()); }
  int num_gates() const { return static_cast<int>(gates.size()); }
  const MatrixBasis& basis() const { return standard_basis(dim()); }
};

using GateIndexSequence = std::vector<int>;  // 1-based gate indices; empty = no gates

std::string format_sequence(const GateIndexSequence& seq);  // "1-2-3", empty -> "-"
GateIndexSequence parse_sequence(const std::string& text);

// v_k = Tr[B_k m] for Hermitian m (real by Hermiticity of the basis).
Rvec vectorize(const Cmat& m, const MatrixBasis& basis);
Cmat devectorize(const Rvec& v, const MatrixBasis& basis);
// Complex-coefficient expansion; used for Choi construction where the
// argument is not Hermitian.
Cvec vectorize_complex(const Cmat& m, const MatrixBasis& basis);

GateChannel hs_from_kraus(const std::vector<Cmat>& kraus, const MatrixBasis& basis,
                          const std::string& name = "");

// Choi matrix J = sum_ab |a><b| (x) G(|a><b|); input factor first, so
// trace preservation reads Tr_out J = I and Tr J = d.
Cmat choi_from_hs(const GateChannel& g, const MatrixBasis& basis);
GateChannel hs_from_choi(const Cmat& choi, const MatrixBasis& basis,
                         const std::string& name = "");

struct ConstraintCheck {
  std::string name;
  bool pass = false;
  double violation = 0.0;  // worst magnitude, 0 when clean
};

struct ValidationReport {
  std::vector<ConstraintCheck> checks;

  bool all_pass() const;
  double worst_violation() const;
  std::string summary() const;
};

ValidationReport validate(const GateSet& s, double tol_psd = kDefaultPsdTol,
                          double tol_trace = kDefaultTraceTol);

/// p(w) = <<Pi_w| G_iL ... G_i1 |rho>>, aligned to povm.labels().
/// Negativity in (-1e-10, 0) is clamped and the vector renormalized;
/// anything worse throws.
Rvec born_probability(const GateSet& s, const GateIndexSequence& seq);

}  // namespace rscqt
