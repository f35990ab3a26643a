#include "rscqt/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace rscqt {

double regularization(const GateSet& s, const GateSet& s_prime) {
  const int d = s.dim();
  if (s_prime.dim() != d || s_prime.num_gates() != s.num_gates() ||
      s_prime.povm.labels() != s.povm.labels())
    throw std::invalid_argument("regularization: gate sets have mismatched shapes");

  double total = 0.5 * (s.rho.mat - s_prime.rho.mat).squaredNorm();
  double povm_term = 0.0;
  for (const auto& [label, effect] : s.povm.effects)
    povm_term += 0.5 * (effect - s_prime.povm.effects.at(label)).squaredNorm();
  total += povm_term / static_cast<double>(s.povm.num_outcomes());
  const double gate_weight = 1.0 / (2.0 * d * d);
  for (int g = 0; g < s.num_gates(); ++g)
    total += gate_weight * (s.gates[g].hs - s_prime.gates[g].hs).squaredNorm();
  return total;
}

double objective(const GateSet& s, const EmpiricalTable& f, const SequenceSet& id,
                 const GateSet& target, double r) {
  if (r <= 0.0) throw std::invalid_argument("regularization parameter must be positive");
  return loss(probabilities(s, id), f, id) + r * regularization(s, target);
}

namespace {

// --- triangular factor packing ------------------------------------------

int tri_params(int n) { return n * n; }

Cmat unpack_tri(const double* p, int n) {
  Cmat t = Cmat::Zero(n, n);
  int k = 0;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < r; ++c) {
      t(r, c) = Complex(p[k], p[k + 1]);
      k += 2;
    }
    t(r, r) = p[k++];
  }
  return t;
}

void pack_tri(const Cmat& t, double* p) {
  const int n = static_cast<int>(t.rows());
  int k = 0;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < r; ++c) {
      p[k] = t(r, c).real();
      p[k + 1] = t(r, c).imag();
      k += 2;
    }
    p[k++] = t(r, r).real();
  }
}

// Lower-triangular factor of a (nearly) PSD Hermitian matrix: eigenvalues
// are clipped at zero and a small diagonal shift keeps the Cholesky stable.
Cmat tri_factor(const Cmat& h) {
  Cmat sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Cmat> es(sym);
  Rvec lam = es.eigenvalues().cwiseMax(0.0);
  double shift = 1e-12 * std::max(1.0, lam.maxCoeff());
  Cmat psd = es.eigenvectors() * (lam.array() + shift).matrix().asDiagonal() *
             es.eigenvectors().adjoint();
  Eigen::LLT<Cmat> llt(psd);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("Cholesky factorization failed in encode");
  return llt.matrixL();
}

Cmat inverse_sqrt(const Cmat& pd) {
  Eigen::SelfAdjointEigenSolver<Cmat> es(pd);
  Rvec lam = es.eigenvalues();
  Rvec inv(lam.size());
  for (int k = 0; k < lam.size(); ++k) inv(k) = 1.0 / std::sqrt(lam(k));
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
}

Cmat partial_trace_output(const Cmat& choi, int d) {
  // input-first convention: Q_ab = sum_c J[(a d + c), (b d + c)]
  Cmat q = Cmat::Zero(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) q(a, b) += choi(a * d + c, b * d + c);
  return q;
}

Cmat kron_with_identity(const Cmat& x, int d) {
  // x (x) I_d under the input-first index layout
  const int n = static_cast<int>(x.rows());
  Cmat out = Cmat::Zero(n * d, n * d);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < d; ++c) out(a * d + c, b * d + c) = x(a, b);
  return out;
}

// --- physical projections (used by the linear-inversion initializer) ----

Cmat project_state(const Cmat& raw, int d) {
  Cmat sym = 0.5 * (raw + raw.adjoint());
  Eigen::SelfAdjointEigenSolver<Cmat> es(sym);
  Rvec lam = es.eigenvalues().cwiseMax(0.0);
  double tr = lam.sum();
  if (tr < 1e-12) return Cmat::Identity(d, d) / static_cast<double>(d);
  return es.eigenvectors() * (lam / tr).asDiagonal() * es.eigenvectors().adjoint();
}

std::map<std::string, Cmat> project_povm(const std::map<std::string, Cmat>& raw, int d) {
  std::map<std::string, Cmat> clipped;
  Cmat sum = Cmat::Zero(d, d);
  double shift = 1e-12;
  for (const auto& [label, effect] : raw) {
    Cmat sym = 0.5 * (effect + effect.adjoint());
    Eigen::SelfAdjointEigenSolver<Cmat> es(sym);
    Rvec lam = es.eigenvalues().cwiseMax(0.0);
    Cmat e = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint() +
             shift * Cmat::Identity(d, d);
    sum += e;
    clipped[label] = std::move(e);
  }
  Cmat norm = inverse_sqrt(sum);
  std::map<std::string, Cmat> out;
  for (const auto& [label, e] : clipped) out[label] = norm * e * norm;
  return out;
}

Cmat project_choi(const Cmat& raw, int d) {
  Cmat sym = 0.5 * (raw + raw.adjoint());
  Eigen::SelfAdjointEigenSolver<Cmat> es(sym);
  Rvec lam = es.eigenvalues().cwiseMax(0.0);
  Cmat j = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
  j += (1e-12 / d) * Cmat::Identity(d * d, d * d);
  Cmat q = partial_trace_output(j, d);
  Cmat qn = kron_with_identity(inverse_sqrt(q), d);
  return qn * j * qn;
}

}  // namespace

// --- Parameterization ---------------------------------------------------

Parameterization::Parameterization(int dim, std::vector<std::string> outcome_labels,
                                   int num_gates)
    : dim_(dim), labels_(std::move(outcome_labels)), num_gates_(num_gates) {
  if (dim_ < 2) throw std::invalid_argument("dimension must be at least 2");
  if (labels_.size() < 2) throw std::invalid_argument("need at least two outcomes");
  if (num_gates_ < 1) throw std::invalid_argument("need at least one gate");
  const int dsq = dim_ * dim_;
  total_ = tri_params(dim_) + static_cast<int>(labels_.size()) * tri_params(dim_) +
           num_gates_ * tri_params(dsq);
}

GateSet Parameterization::decode(const Rvec& params) const {
  if (params.size() != total_)
    throw std::invalid_argument("parameter vector has wrong length");
  if (!params.allFinite())
    throw std::invalid_argument("parameter vector has non-finite entries");
  const int dsq = dim_ * dim_;
  const MatrixBasis& basis = standard_basis(dim_);
  GateSet s;
  int offset = 0;

  {
    Cmat t = unpack_tri(params.data() + offset, dim_);
    offset += tri_params(dim_);
    Cmat h = t * t.adjoint();
    double tr = h.trace().real();
    s.rho.mat = tr < 1e-12 ? Cmat::Identity(dim_, dim_) / static_cast<double>(dim_)
                           : Cmat(h / tr);
  }

  {
    const int n_w = static_cast<int>(labels_.size());
    std::vector<Cmat> pre(n_w);
    Cmat sum = Cmat::Zero(dim_, dim_);
    for (int w = 0; w < n_w; ++w) {
      Cmat t = unpack_tri(params.data() + offset, dim_);
      offset += tri_params(dim_);
      pre[w] = t * t.adjoint();
      sum += pre[w];
    }
    // diagonal shift keeps the completion well defined for any parameters
    double shift = 1e-12 * std::max(1.0, sum.trace().real());
    for (int w = 0; w < n_w; ++w)
      pre[w] += (shift / n_w) * Cmat::Identity(dim_, dim_);
    sum += shift * Cmat::Identity(dim_, dim_);
    Cmat norm = inverse_sqrt(sum);
    for (int w = 0; w < n_w; ++w)
      s.povm.effects[labels_[w]] = norm * pre[w] * norm;
  }

  for (int g = 0; g < num_gates_; ++g) {
    Cmat w = unpack_tri(params.data() + offset, dsq);
    offset += tri_params(dsq);
    Cmat j = w * w.adjoint();
    double shift = 1e-12 * std::max(1.0, j.trace().real() / dim_);
    j += (shift / dim_) * Cmat::Identity(dsq, dsq);
    Cmat q = partial_trace_output(j, dim_);
    Cmat qn = kron_with_identity(inverse_sqrt(q), dim_);
    s.gates.push_back(hs_from_choi(qn * j * qn, basis, "g" + std::to_string(g + 1)));
  }
  return s;
}

Rvec Parameterization::encode(const GateSet& s) const {
  if (s.dim() != dim_ || s.num_gates() != num_gates_ || s.povm.labels() != labels_)
    throw std::invalid_argument("encode: gate set does not match parameterization shape");
  const MatrixBasis& basis = standard_basis(dim_);
  Rvec params(total_);
  int offset = 0;
  pack_tri(tri_factor(s.rho.mat), params.data() + offset);
  offset += tri_params(dim_);
  for (const auto& [label, effect] : s.povm.effects) {
    pack_tri(tri_factor(effect), params.data() + offset);
    offset += tri_params(dim_);
  }
  for (const auto& gate : s.gates) {
    pack_tri(tri_factor(choi_from_hs(gate, basis)), params.data() + offset);
    offset += tri_params(dim_ * dim_);
  }
  return params;
}

// --- estimation ---------------------------------------------------------

namespace {

double resolve_r(const RegularizationConfig& cfg, const EmpiricalTable& f,
                 const SequenceSet& id, const GateSet& target,
                 const OptimizerConfig& opt, const std::optional<FiducialDesign>& fd) {
  const double shots = static_cast<double>(std::max<long>(1, f.shots));
  switch (cfg.schedule) {
    case RSchedule::kFixed:
      if (cfg.r <= 0.0) throw std::invalid_argument("fixed r must be positive");
      return cfg.r;
    case RSchedule::kCOverN:
      if (cfg.c <= 0.0) throw std::invalid_argument("c must be positive");
      return cfg.c / shots;
    case RSchedule::kCrossValidated: {
      double c = select_r(f, id, target, cfg.grid, cfg.folds, cfg.cv_seed, opt, fd);
      return c / shots;
    }
  }
  throw std::logic_error("unknown regularization schedule");
}

}  // namespace

EstimateResult estimate(const EmpiricalTable& f, const SequenceSet& id,
                        const GateSet& target, const RegularizationConfig& cfg,
                        const OptimizerConfig& opt,
                        const std::optional<FiducialDesign>& fd) {
  for (const auto& seq : id.sequences())
    if (!f.has_row(seq))
      throw std::invalid_argument("data table missing sequence " + format_sequence(seq));

  const double r = resolve_r(cfg, f, id, target, opt, fd);
  Parameterization param(target.dim(), target.povm.labels(), target.num_gates());

  auto obj = [&](const Rvec& x) {
    GateSet s = param.decode(x);
    return loss(probabilities(s, id), f, id) + r * regularization(s, target);
  };

  std::vector<std::pair<std::string, Rvec>> starts;
  starts.emplace_back("target", param.encode(target));
  if (fd) {
    try {
      starts.emplace_back("linear_inversion",
                          param.encode(linear_inversion_init(f, *fd, target)));
    } catch (const std::exception&) {
      // fall back to the target start alone
    }
  }

  struct Candidate {
    MinimizeResult min;
    double reg;
    std::string tag;
  };
  std::optional<Candidate> best;
  for (auto& [tag, x0] : starts) {
    MinimizeResult m = lbfgs_minimize(obj, x0, opt);
    double reg = regularization(param.decode(m.x), target);
    if (!best || m.value < best->min.value ||
        (m.value == best->min.value && reg < best->reg)) {
      best = Candidate{std::move(m), reg, tag};
    }
  }

  EstimateResult result;
  result.estimate = param.decode(best->min.x);
  result.loss_value = loss(probabilities(result.estimate, id), f, id);
  result.reg_value = regularization(result.estimate, target);
  result.objective_value = result.loss_value + r * result.reg_value;
  result.r_used = r;
  result.iterations = best->min.iterations;
  result.converged = best->min.converged;
  result.initial_point = best->tag;
  return result;
}

GateSet linear_inversion_init(const EmpiricalTable& f, const FiducialDesign& fd,
                              const GateSet& target, double rank_tol) {
  const int dsq = target.basis().size();
  const int n_prep = fd.prep_fiducials.size();
  const int n_meas = fd.meas_fiducials.size();
  const int n_out = target.povm.num_outcomes();
  const std::vector<std::string> labels = target.povm.labels();

  // target-frame matrices
  Rmat s_hat(dsq, n_prep);
  {
    auto vecs = prepared_state_vectors(target, fd.prep_fiducials);
    for (int k = 0; k < n_prep; ++k) s_hat.col(k) = vecs[k];
  }
  auto concat = [](const GateIndexSequence& a, const GateIndexSequence& b) {
    GateIndexSequence r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
  };

  // data blocks
  Rmat gram(n_meas * n_out, n_prep);
  for (int k = 0; k < n_prep; ++k) {
    for (int j = 0; j < n_meas; ++j) {
      const Rvec& row =
          f.row(concat(fd.prep_fiducials[k], fd.meas_fiducials[j]));
      for (int w = 0; w < n_out; ++w) gram(j * n_out + w, k) = row(w);
    }
  }

  auto pinv = [rank_tol](const Rmat& m) {
    Eigen::JacobiSVD<Rmat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Rvec& sv = svd.singularValues();
    double cutoff = rank_tol * (sv.size() ? sv(0) : 0.0);
    Rvec inv = Rvec::Zero(sv.size());
    for (int k = 0; k < sv.size(); ++k)
      if (sv(k) > cutoff) inv(k) = 1.0 / sv(k);
    return Rmat(svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose());
  };

  {
    Eigen::JacobiSVD<Rmat> svd(gram);
    const Rvec& sv = svd.singularValues();
    int rank = 0;
    for (int k = 0; k < sv.size(); ++k)
      if (sv(k) > rank_tol * sv(0)) ++rank;
    if (rank < dsq)
      throw DegenerateDesignError("fiducial Gram matrix has rank " +
                                  std::to_string(rank) + " < " + std::to_string(dsq));
  }

  Rmat gram_pinv = pinv(gram);
  Rmat s_hat_pinv = pinv(s_hat);
  Rmat frame = s_hat * gram_pinv;  // d^2 x (n_meas * n_out)

  const MatrixBasis& basis = target.basis();
  GateSet init;

  {
    Rvec m_rho(n_meas * n_out);
    for (int j = 0; j < n_meas; ++j) {
      const Rvec& row = f.row(fd.meas_fiducials[j]);
      for (int w = 0; w < n_out; ++w) m_rho(j * n_out + w) = row(w);
    }
    init.rho.mat = project_state(devectorize(frame * m_rho, basis), target.dim());
  }

  {
    std::map<std::string, Cmat> raw;
    for (int w = 0; w < n_out; ++w) {
      Eigen::RowVectorXd counts_row(n_prep);
      for (int k = 0; k < n_prep; ++k)
        counts_row(k) = f.row(fd.prep_fiducials[k])(w);
      // <<Pi| S * pinv(S_hat): the right-frame partner of frame = S_hat * pinv(g)
      Eigen::RowVectorXd effect_row = counts_row * s_hat_pinv;
      raw[labels[w]] = devectorize(effect_row.transpose(), basis);
    }
    init.povm.effects = project_povm(raw, target.dim());
  }

  for (int g = 1; g <= fd.num_gates; ++g) {
    Rmat block(n_meas * n_out, n_prep);
    for (int k = 0; k < n_prep; ++k) {
      GateIndexSequence mid = concat(concat(fd.prep_fiducials[k], {g}), GateIndexSequence{});
      for (int j = 0; j < n_meas; ++j) {
        const Rvec& row = f.row(concat(mid, fd.meas_fiducials[j]));
        for (int w = 0; w < n_out; ++w) block(j * n_out + w, k) = row(w);
      }
    }
    Rmat hs_raw = frame * block * s_hat_pinv;
    GateChannel raw{"g" + std::to_string(g), std::move(hs_raw)};
    Cmat choi = project_choi(choi_from_hs(raw, basis), target.dim());
    init.gates.push_back(hs_from_choi(choi, basis, raw.name));
  }
  return init;
}

double select_r(const EmpiricalTable& f, const SequenceSet& id, const GateSet& target,
                const std::vector<double>& grid, int folds, std::uint64_t seed,
                const OptimizerConfig& opt, const std::optional<FiducialDesign>& fd) {
  if (grid.empty()) throw std::invalid_argument("candidate grid is empty");
  for (double c : grid)
    if (c <= 0.0) throw std::invalid_argument("candidates must be positive");
  if (folds < 2) throw std::invalid_argument("need at least two folds");
  if (id.size() < folds)
    throw std::invalid_argument("fewer sequences than folds");

  std::vector<int> order(id.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<double> candidates = grid;
  std::sort(candidates.begin(), candidates.end());

  double best_c = candidates.front();
  double best_loss = std::numeric_limits<double>::infinity();
  for (double c : candidates) {
    double held_out_total = 0.0;
    for (int fold = 0; fold < folds; ++fold) {
      SequenceSet train, test;
      for (size_t k = 0; k < order.size(); ++k) {
        if (static_cast<int>(k) % folds == fold)
          test.insert(id[order[k]]);
        else
          train.insert(id[order[k]]);
      }
      RegularizationConfig cfg;
      cfg.schedule = RSchedule::kCOverN;
      cfg.c = c;
      EstimateResult est = estimate(f, train, target, cfg, opt, fd);
      held_out_total += loss(probabilities(est.estimate, test), f, test);
    }
    double cv_loss = held_out_total / folds;
    if (cv_loss < best_loss) {
      best_loss = cv_loss;
      best_c = c;
    }
  }
  return best_c;
}

}  // namespace rscqt
