#include "rscqt/gauge.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include "rscqt/estimator.hpp"

namespace rscqt {

namespace {

double condition_number_of(const Rmat& a) {
  Eigen::JacobiSVD<Rmat> svd(a);
  const Rvec& sv = svd.singularValues();
  double smin = sv(sv.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

}  // namespace

GaugeTransform GaugeTransform::identity(int dsq) {
  return GaugeTransform{Rmat::Identity(dsq, dsq), 1.0};
}

GaugeTransform GaugeTransform::from_matrix(Rmat a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("gauge matrix must be square");
  double cond = condition_number_of(a);
  if (!std::isfinite(cond))
    throw std::invalid_argument("gauge matrix is singular");
  return GaugeTransform{std::move(a), cond};
}

GaugedSet apply_gauge(const GateSet& s, const GaugeTransform& t) {
  const MatrixBasis& basis = s.basis();
  const int dsq = basis.size();
  if (t.a.rows() != dsq || t.a.cols() != dsq)
    throw std::invalid_argument("gauge transform dimension mismatch");
  Eigen::PartialPivLU<Rmat> lu(t.a);
  if (std::abs(lu.determinant()) < 1e-300)
    throw std::invalid_argument("gauge transform is singular");
  Rmat a_inv = lu.inverse();

  GateSet out;
  out.rho.mat = devectorize(t.a * vectorize(s.rho.mat, basis), basis);
  for (const auto& [label, effect] : s.povm.effects) {
    Eigen::RowVectorXd row = vectorize(effect, basis).transpose() * a_inv;
    out.povm.effects[label] = devectorize(row.transpose(), basis);
  }
  for (const auto& gate : s.gates)
    out.gates.push_back({gate.name, t.a * gate.hs * a_inv});

  GaugedSet result{std::move(out), {}};
  result.validation = validate(result.set);
  return result;
}

GaugeTransform compose(const GaugeTransform& t2, const GaugeTransform& t1) {
  return GaugeTransform::from_matrix(t2.a * t1.a);
}

namespace {

struct Frames {
  Rmat prep;    // d^2 x |Id_s|, prepared state columns
  Rmat effect;  // (|Id_p| * |Omega|) x d^2, measured effect rows
};

Frames frames_of(const GateSet& s, const FiducialDesign& fd) {
  Frames fr;
  auto prep = prepared_state_vectors(s, fd.prep_fiducials);
  fr.prep.resize(s.basis().size(), static_cast<int>(prep.size()));
  for (size_t k = 0; k < prep.size(); ++k) fr.prep.col(static_cast<int>(k)) = prep[k];
  auto eff = measured_effect_vectors(s, fd.meas_fiducials);
  fr.effect.resize(static_cast<int>(eff.size()), s.basis().size());
  for (size_t k = 0; k < eff.size(); ++k)
    fr.effect.row(static_cast<int>(k)) = eff[k].transpose();
  return fr;
}

struct MatchOutcome {
  Rmat a;
  double max_residual;
  bool rank_ok;
};

MatchOutcome match_frames(const GateSet& s, const GateSet& s_tilde,
                          const FiducialDesign& fd, double rank_tol) {
  const int dsq = s.basis().size();
  Frames fr = frames_of(s, fd);
  Frames fr_t = frames_of(s_tilde, fd);

  Eigen::ColPivHouseholderQR<Rmat> qr(fr.prep);
  qr.setThreshold(rank_tol);
  MatchOutcome out{Rmat(), 0.0, false};
  if (qr.rank() < dsq) return out;

  Rmat sel(dsq, dsq), sel_t(dsq, dsq);
  const auto& perm = qr.colsPermutation().indices();
  for (int k = 0; k < dsq; ++k) {
    sel.col(k) = fr.prep.col(perm(k));
    sel_t.col(k) = fr_t.prep.col(perm(k));
  }
  Eigen::PartialPivLU<Rmat> lu(sel);
  if (std::abs(lu.determinant()) < 1e-300) return out;
  out.a = sel_t * lu.inverse();
  out.rank_ok = true;

  Eigen::PartialPivLU<Rmat> lu_a(out.a);
  if (std::abs(lu_a.determinant()) < 1e-300) {
    out.rank_ok = false;
    return out;
  }
  Rmat a_inv = lu_a.inverse();

  double scale = std::max({1.0, fr.prep.cwiseAbs().maxCoeff(),
                           fr.effect.cwiseAbs().maxCoeff()});
  double res_state = (fr_t.prep - out.a * fr.prep).cwiseAbs().maxCoeff();
  double res_effect = (fr_t.effect - fr.effect * a_inv).cwiseAbs().maxCoeff();
  out.max_residual = std::max(res_state, res_effect) / scale;
  return out;
}

}  // namespace

GaugeMatchResult linear_gauge_match(const GateSet& s, const GateSet& s_tilde,
                                    const FiducialDesign& fd, double rank_tol,
                                    double residual_tol) {
  MatchOutcome m = match_frames(s, s_tilde, fd, rank_tol);
  if (!m.rank_ok)
    throw DegenerateDesignError("prepared-state fiducial frame is rank deficient");
  if (m.max_residual > residual_tol)
    throw NoLinearGaugeError("no linear gauge transform connects the two sets "
                             "(residual " + std::to_string(m.max_residual) + ")");
  return GaugeMatchResult{GaugeTransform::from_matrix(std::move(m.a)), m.max_residual};
}

GaugeDistanceResult gauge_distance(const GateSet& s, const GateSet& s_ref,
                                   const GaugeDistanceConfig& cfg) {
  const int dsq = s.basis().size();
  auto objective = [&](const Rvec& params) {
    Rmat m = Eigen::Map<const Rmat>(params.data(), dsq, dsq);
    Rmat a = m.exp();
    GateSet image = apply_gauge(s_ref, GaugeTransform{a, 0.0}).set;
    return regularization(s, image);
  };

  std::vector<Rvec> starts;
  starts.push_back(Rvec::Zero(dsq * dsq));
  if (cfg.fiducials) {
    MatchOutcome m = match_frames(s_ref, s, *cfg.fiducials, kDefaultRankTol);
    if (m.rank_ok) {
      // A maps ref-frame to s-frame; usable start if it has a real log
      Eigen::EigenSolver<Rmat> es(m.a);
      bool real_log_ok = true;
      for (int k = 0; k < es.eigenvalues().size(); ++k) {
        Complex ev = es.eigenvalues()(k);
        if (ev.real() <= 0.0 && std::abs(ev.imag()) < 1e-12) real_log_ok = false;
      }
      if (real_log_ok) {
        Rmat log_a = m.a.log();
        if (log_a.allFinite()) {
          Rvec x0(dsq * dsq);
          Eigen::Map<Rmat>(x0.data(), dsq, dsq) = log_a;
          starts.push_back(std::move(x0));
        }
      }
    }
  }

  GaugeDistanceResult best;
  best.distance = std::numeric_limits<double>::infinity();
  for (const Rvec& x0 : starts) {
    OptimizerConfig opt = cfg.opt;
    MinimizeResult r = lbfgs_minimize(objective, x0, opt);
    if (r.value < best.distance) {
      Rmat m = Eigen::Map<const Rmat>(r.x.data(), dsq, dsq);
      best.distance = r.value;
      best.transform = GaugeTransform::from_matrix(m.exp());
      best.converged = r.converged;
    }
  }
  return best;
}

double probability_gap(const GateSet& s, const GateSet& s_tilde, const SequenceSet& id) {
  double gap = 0.0;
  for (const auto& seq : id.sequences()) {
    Rvec pa = born_probability(s, seq);
    Rvec pb = born_probability(s_tilde, seq);
    gap = std::max(gap, (pa - pb).cwiseAbs().maxCoeff());
  }
  return gap;
}

bool indistinguishable(const GateSet& s, const GateSet& s_tilde, const SequenceSet& id,
                       double tol) {
  return probability_gap(s, s_tilde, id) <= tol;
}

}  // namespace rscqt
