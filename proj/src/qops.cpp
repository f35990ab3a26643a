#include "rscqt/qops.hpp"

#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace rscqt {

namespace {

constexpr double kHermTol = 1e-10;
constexpr double kImagResidueTol = 1e-10;
constexpr double kProbClampTol = 1e-10;

void check_hermitian(const Cmat& m, const char* what) {
  double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (dev > kHermTol) {
    std::ostringstream os;
    os << what << " is not Hermitian (deviation " << dev << ")";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

MatrixBasis::MatrixBasis(int dim, std::vector<Cmat> elements)
    : dim_(dim), elements_(std::move(elements)) {
  if (dim < 1) throw std::invalid_argument("basis dimension must be positive");
  const size_t n = static_cast<size_t>(dim) * dim;
  if (elements_.size() != n)
    throw std::invalid_argument("basis must have d^2 elements");
  for (size_t j = 0; j < n; ++j) {
    const Cmat& bj = elements_[j];
    if (bj.rows() != dim || bj.cols() != dim)
      throw std::invalid_argument("basis element has wrong shape");
    if ((bj - bj.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
      throw std::invalid_argument("basis element is not Hermitian");
    for (size_t k = 0; k <= j; ++k) {
      Complex ip = (elements_[j].adjoint() * elements_[k]).trace();
      double expect = (j == k) ? 1.0 : 0.0;
      if (std::abs(ip - expect) > 1e-12)
        throw std::invalid_argument("basis is not orthonormal");
    }
  }
}

MatrixBasis MatrixBasis::pauli(int num_qubits) {
  if (num_qubits < 1) throw std::invalid_argument("need at least one qubit");
  const Complex i1(0.0, 1.0);
  std::vector<Cmat> single(4, Cmat(2, 2));
  single[0] << 1, 0, 0, 1;
  single[1] << 0, 1, 1, 0;
  single[2] << 0, -i1, i1, 0;
  single[3] << 1, 0, 0, -1;

  const int d = 1 << num_qubits;
  std::vector<Cmat> elements;
  elements.reserve(static_cast<size_t>(d) * d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  int total = 1;
  for (int q = 0; q < num_qubits; ++q) total *= 4;
  for (int idx = 0; idx < total; ++idx) {
    // base-4 digits, most significant first, so idx 0 is I...I
    Cmat m = Cmat::Identity(1, 1);
    int rem = idx;
    int divisor = total / 4;
    for (int q = 0; q < num_qubits; ++q) {
      int digit = (rem / divisor) % 4;
      rem %= divisor;
      divisor = std::max(divisor / 4, 1);
      Cmat next(m.rows() * 2, m.cols() * 2);
      for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
          next.block(2 * r, 2 * c, 2, 2) = m(r, c) * single[digit];
      m = std::move(next);
    }
    elements.push_back(norm * m);
  }
  return MatrixBasis(d, std::move(elements));
}

MatrixBasis MatrixBasis::gell_mann(int dim) {
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  std::vector<Cmat> elements;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  elements.push_back(Cmat::Identity(dim, dim) / std::sqrt(static_cast<double>(dim)));
  // diagonal elements
  for (int l = 1; l < dim; ++l) {
    Cmat m = Cmat::Zero(dim, dim);
    double scale = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int j = 0; j < l; ++j) m(j, j) = scale;
    m(l, l) = -static_cast<double>(l) * scale;
    elements.push_back(m);
  }
  // symmetric and antisymmetric off-diagonal pairs
  for (int j = 0; j < dim; ++j) {
    for (int k = j + 1; k < dim; ++k) {
      Cmat sym = Cmat::Zero(dim, dim);
      sym(j, k) = inv_sqrt2;
      sym(k, j) = inv_sqrt2;
      elements.push_back(sym);
      Cmat asym = Cmat::Zero(dim, dim);
      asym(j, k) = Complex(0, -inv_sqrt2);
      asym(k, j) = Complex(0, inv_sqrt2);
      elements.push_back(asym);
    }
  }
  return MatrixBasis(dim, std::move(elements));
}

const MatrixBasis& standard_basis(int dim) {
  static std::mutex mu;
  static std::unordered_map<int, MatrixBasis> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(dim);
  if (it != cache.end()) return it->second;
  bool pow2 = dim >= 2 && (dim & (dim - 1)) == 0;
  MatrixBasis basis = pow2 ? MatrixBasis::pauli(static_cast<int>(std::round(std::log2(dim))))
                           : MatrixBasis::gell_mann(dim);
  return cache.emplace(dim, std::move(basis)).first->second;
}

std::vector<std::string> Povm::labels() const {
  std::vector<std::string> out;
  out.reserve(effects.size());
  for (const auto& [label, mat] : effects) out.push_back(label);
  return out;
}

std::string format_sequence(const GateIndexSequence& seq) {
  if (seq.empty()) return "-";
  std::ostringstream os;
  for (size_t k = 0; k < seq.size(); ++k) {
    if (k) os << '-';
    os << seq[k];
  }
  return os.str();
}

GateIndexSequence parse_sequence(const std::string& text) {
  if (text.empty() || text == "-") return {};
  GateIndexSequence seq;
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, '-')) {
    if (tok.empty()) throw std::invalid_argument("malformed sequence string: " + text);
    seq.push_back(std::stoi(tok));
  }
  return seq;
}

Rvec vectorize(const Cmat& m, const MatrixBasis& basis) {
  if (m.rows() != basis.dim() || m.cols() != basis.dim())
    throw std::invalid_argument("vectorize: matrix does not match basis dimension");
  check_hermitian(m, "vectorize argument");
  Rvec v(basis.size());
  for (int k = 0; k < basis.size(); ++k) {
    Complex c = (basis.element(k).adjoint() * m).trace();
    v(k) = c.real();
  }
  return v;
}

Cmat devectorize(const Rvec& v, const MatrixBasis& basis) {
  if (v.size() != basis.size())
    throw std::invalid_argument("devectorize: vector length is not d^2");
  Cmat m = Cmat::Zero(basis.dim(), basis.dim());
  for (int k = 0; k < basis.size(); ++k) m += v(k) * basis.element(k);
  return m;
}

Cvec vectorize_complex(const Cmat& m, const MatrixBasis& basis) {
  if (m.rows() != basis.dim() || m.cols() != basis.dim())
    throw std::invalid_argument("vectorize_complex: dimension mismatch");
  Cvec v(basis.size());
  for (int k = 0; k < basis.size(); ++k)
    v(k) = (basis.element(k).adjoint() * m).trace();
  return v;
}

GateChannel hs_from_kraus(const std::vector<Cmat>& kraus, const MatrixBasis& basis,
                          const std::string& name) {
  if (kraus.empty()) throw std::invalid_argument("empty Kraus set");
  const int d = basis.dim();
  Cmat sum = Cmat::Zero(d, d);
  for (const Cmat& k : kraus) {
    if (k.rows() != d || k.cols() != d)
      throw std::invalid_argument("Kraus operator has wrong shape");
    sum += k.adjoint() * k;
  }
  if ((sum - Cmat::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("Kraus set is not trace preserving");

  Rmat hs(basis.size(), basis.size());
  for (int k = 0; k < basis.size(); ++k) {
    Cmat image = Cmat::Zero(d, d);
    for (const Cmat& op : kraus) image += op * basis.element(k) * op.adjoint();
    for (int j = 0; j < basis.size(); ++j) {
      Complex e = (basis.element(j).adjoint() * image).trace();
      if (std::abs(e.imag()) > kImagResidueTol)
        throw std::invalid_argument("superoperator entry has imaginary residue");
      hs(j, k) = e.real();
    }
  }
  return GateChannel{name, std::move(hs)};
}

Cmat choi_from_hs(const GateChannel& g, const MatrixBasis& basis) {
  const int d = basis.dim();
  const int dsq = basis.size();
  if (g.hs.rows() != dsq || g.hs.cols() != dsq)
    throw std::invalid_argument("choi_from_hs: superoperator shape mismatch");
  Cmat choi = Cmat::Zero(dsq, dsq);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      Cmat unit = Cmat::Zero(d, d);
      unit(a, b) = 1.0;
      Cvec coeff = g.hs.cast<Complex>() * vectorize_complex(unit, basis);
      Cmat image = Cmat::Zero(d, d);
      for (int j = 0; j < dsq; ++j) image += coeff(j) * basis.element(j);
      choi.block(a * d, b * d, d, d) += image;
    }
  }
  return choi;
}

GateChannel hs_from_choi(const Cmat& choi, const MatrixBasis& basis,
                         const std::string& name) {
  const int d = basis.dim();
  const int dsq = basis.size();
  if (choi.rows() != dsq || choi.cols() != dsq)
    throw std::invalid_argument("hs_from_choi: Choi matrix shape mismatch");
  Rmat hs(dsq, dsq);
  for (int j = 0; j < dsq; ++j) {
    for (int k = 0; k < dsq; ++k) {
      // hs[j,k] = Tr[(B_k^T (x) B_j) J]
      Complex e = 0.0;
      const Cmat bkt = basis.element(k).transpose();
      const Cmat& bj = basis.element(j);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          e += bkt(a, b) * (bj * choi.block(b * d, a * d, d, d)).trace();
      if (std::abs(e.imag()) > kImagResidueTol)
        throw std::invalid_argument("hs_from_choi: imaginary residue in entry");
      hs(j, k) = e.real();
    }
  }
  return GateChannel{name, std::move(hs)};
}

bool ValidationReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

double ValidationReport::worst_violation() const {
  double worst = 0.0;
  for (const auto& c : checks) worst = std::max(worst, c.violation);
  return worst;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.pass ? "pass" : "FAIL") << "  " << c.name;
    if (!c.pass) os << "  (violation " << c.violation << ")";
    os << '\n';
  }
  return os.str();
}

namespace {

double min_eigenvalue(const Cmat& herm) {
  Eigen::SelfAdjointEigenSolver<Cmat> es(0.5 * (herm + herm.adjoint()),
                                         Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

ValidationReport validate(const GateSet& s, double tol_psd, double tol_trace) {
  ValidationReport report;
  auto add = [&report](std::string name, double violation, double tol) {
    report.checks.push_back({std::move(name), violation <= tol, violation});
  };
  const int d = s.dim();
  const MatrixBasis& basis = s.basis();

  add("rho.hermitian", (s.rho.mat - s.rho.mat.adjoint()).cwiseAbs().maxCoeff(), tol_psd);
  add("rho.psd", std::max(0.0, -min_eigenvalue(s.rho.mat)), tol_psd);
  add("rho.trace", std::abs(s.rho.mat.trace().real() - 1.0) +
                       std::abs(s.rho.mat.trace().imag()),
      tol_trace);

  Cmat effect_sum = Cmat::Zero(d, d);
  for (const auto& [label, effect] : s.povm.effects) {
    add("povm[" + label + "].hermitian",
        (effect - effect.adjoint()).cwiseAbs().maxCoeff(), tol_psd);
    add("povm[" + label + "].psd", std::max(0.0, -min_eigenvalue(effect)), tol_psd);
    effect_sum += effect;
  }
  add("povm.completeness",
      (effect_sum - Cmat::Identity(d, d)).cwiseAbs().maxCoeff(), tol_trace);

  for (int g = 0; g < s.num_gates(); ++g) {
    const std::string tag = "gate[" + std::to_string(g) + "]";
    const Rmat& hs = s.gates[g].hs;
    if (hs.rows() != basis.size() || hs.cols() != basis.size()) {
      report.checks.push_back({tag + ".shape", false, 1.0});
      continue;
    }
    Cmat choi = choi_from_hs(s.gates[g], basis);
    add(tag + ".choi_hermitian", (choi - choi.adjoint()).cwiseAbs().maxCoeff(), tol_psd);
    add(tag + ".cp", std::max(0.0, -min_eigenvalue(choi)), tol_psd);
    Rvec tp_row = hs.row(0);
    tp_row(0) -= 1.0;
    add(tag + ".tp", tp_row.cwiseAbs().maxCoeff(), tol_trace);
  }
  return report;
}

Rvec born_probability(const GateSet& s, const GateIndexSequence& seq) {
  const MatrixBasis& basis = s.basis();
  Rvec v = vectorize(s.rho.mat, basis);
  for (int idx : seq) {
    if (idx < 1 || idx > s.num_gates())
      throw std::invalid_argument("gate index " + std::to_string(idx) +
                                  " out of range 1.." + std::to_string(s.num_gates()));
    v = s.gates[idx - 1].hs * v;
  }
  Rvec p(s.povm.num_outcomes());
  int w = 0;
  for (const auto& [label, effect] : s.povm.effects)
    p(w++) = vectorize(effect, basis).dot(v);

  for (int k = 0; k < p.size(); ++k) {
    if (p(k) < -kProbClampTol || p(k) > 1.0 + kProbClampTol)
      throw std::domain_error("probability outside [0,1] beyond tolerance: " +
                              std::to_string(p(k)));
    p(k) = std::min(std::max(p(k), 0.0), 1.0);
  }
  double sum = p.sum();
  if (std::abs(sum - 1.0) > 1e-10)
    throw std::domain_error("outcome probabilities sum to " + std::to_string(sum));
  p /= sum;
  return p;
}

}  // namespace rscqt
