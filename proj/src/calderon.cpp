#include "regop/calderon.hpp"

#include "detail/lbfgs.hpp"

#include <algorithm>
#include <array>

namespace regop {

namespace {

struct SupportEntry {
  Eigen::Index row;
  Eigen::Index col;
  double log_a;
};

double log_sum_exp(const double* v, std::size_t n, double scale) {
  double top = -kInfinity;
  for (std::size_t i = 0; i < n; ++i) top = std::max(top, v[i] / scale);
  if (!std::isfinite(top)) return top;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::exp(v[i] / scale - top);
  return scale * (top + std::log(s));
}

// The reduced objective g(u) of calderon_norm and its softmax smoothing,
// over u = log f0 restricted to the support.
class FactorizationObjective {
 public:
  FactorizationObjective(std::vector<SupportEntry> support, Eigen::Index rows, Eigen::Index cols, double theta)
      : support_(std::move(support)), rows_(rows), cols_(cols), theta_(theta) {
    by_row_.resize(static_cast<std::size_t>(rows_));
    by_col_.resize(static_cast<std::size_t>(cols_));
    for (std::size_t e = 0; e < support_.size(); ++e) {
      by_row_[static_cast<std::size_t>(support_[e].row)].push_back(e);
      by_col_[static_cast<std::size_t>(support_[e].col)].push_back(e);
    }
    by_row_.erase(std::remove_if(by_row_.begin(), by_row_.end(), [](const auto& r) { return r.empty(); }),
                  by_row_.end());
    by_col_.erase(std::remove_if(by_col_.begin(), by_col_.end(), [](const auto& c) { return c.empty(); }),
                  by_col_.end());
  }

  std::size_t size() const { return support_.size(); }
  const std::vector<SupportEntry>& support() const { return support_; }

  // log f1 on the support, from the equality |a| = f0^(1-t) f1^t.
  double log_f1(const Eigen::VectorXd& u, std::size_t e) const {
    return (support_[e].log_a - (1.0 - theta_) * u(static_cast<Eigen::Index>(e))) / theta_;
  }

  // Smoothed objective with temperature tau > 0, or the exact g when
  // tau == 0. Writes the gradient when grad is non-null.
  double evaluate(const Eigen::VectorXd& u, double tau, Eigen::VectorXd* grad) const {
    std::vector<double> rho(by_row_.size()), kappa(by_col_.size());
    std::vector<double> buf;
    for (std::size_t r = 0; r < by_row_.size(); ++r) {
      buf.clear();
      for (std::size_t e : by_row_[r]) buf.push_back(u(static_cast<Eigen::Index>(e)));
      rho[r] = log_sum_exp(buf.data(), buf.size(), 1.0);
    }
    for (std::size_t c = 0; c < by_col_.size(); ++c) {
      buf.clear();
      for (std::size_t e : by_col_[c]) buf.push_back(log_f1(u, e));
      kappa[c] = log_sum_exp(buf.data(), buf.size(), 1.0);
    }
    double row_term, col_term;
    if (tau == 0.0) {
      row_term = *std::max_element(rho.begin(), rho.end());
      col_term = *std::max_element(kappa.begin(), kappa.end());
    } else {
      row_term = log_sum_exp(rho.data(), rho.size(), tau);
      col_term = log_sum_exp(kappa.data(), kappa.size(), tau);
    }
    const double value = (1.0 - theta_) * row_term + theta_ * col_term;
    if (!std::isfinite(value)) return kInfinity;
    if (grad) {
      grad->setZero(static_cast<Eigen::Index>(support_.size()));
      for (std::size_t r = 0; r < by_row_.size(); ++r) {
        const double pi = std::exp((rho[r] - row_term) / tau);
        for (std::size_t e : by_row_[r]) {
          (*grad)(static_cast<Eigen::Index>(e)) += (1.0 - theta_) * pi * std::exp(u(static_cast<Eigen::Index>(e)) - rho[r]);
        }
      }
      for (std::size_t c = 0; c < by_col_.size(); ++c) {
        const double sigma = std::exp((kappa[c] - col_term) / tau);
        for (std::size_t e : by_col_[c]) {
          (*grad)(static_cast<Eigen::Index>(e)) -= (1.0 - theta_) * sigma * std::exp(log_f1(u, e) - kappa[c]);
        }
      }
    }
    return value;
  }

 private:
  std::vector<SupportEntry> support_;
  Eigen::Index rows_, cols_;
  double theta_;
  std::vector<std::vector<std::size_t>> by_row_, by_col_;
};

Factorization make_certificate(const FactorizationObjective& obj, const Eigen::VectorXd& u, Eigen::Index rows,
                               Eigen::Index cols, double theta) {
  Factorization cert;
  cert.theta = theta;
  cert.f0 = RealMatrix::Zero(rows, cols);
  cert.f1 = RealMatrix::Zero(rows, cols);
  for (std::size_t e = 0; e < obj.size(); ++e) {
    const auto& s = obj.support()[e];
    cert.f0(s.row, s.col) = std::exp(u(static_cast<Eigen::Index>(e)));
    cert.f1(s.row, s.col) = std::exp(obj.log_f1(u, e));
  }
  // f0 -> l f0, f1 -> l^(-(1-t)/t) f1 leaves every product f0^(1-t) f1^t
  // unchanged; pick l so the two endpoint norms agree.
  const double n0 = detail::max_row_sum(cert.f0);
  const double n1 = detail::max_col_sum(cert.f1);
  const double log_l = theta * (std::log(n1) - std::log(n0));
  cert.f0 *= std::exp(log_l);
  cert.f1 *= std::exp(-log_l * (1.0 - theta) / theta);
  cert.bound = std::pow(detail::max_row_sum(cert.f0), 1.0 - theta) * std::pow(detail::max_col_sum(cert.f1), theta);
  return cert;
}

}  // namespace

namespace detail {

CalderonResult calderon_norm_abs(const RealMatrix& abs_a, double theta, const CalderonOptions& opts) {
  const Eigen::Index rows = abs_a.rows(), cols = abs_a.cols();
  std::vector<SupportEntry> support;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      if (abs_a(i, j) > 0.0) support.push_back({i, j, std::log(abs_a(i, j))});

  CalderonResult res;
  if (support.empty()) {
    res.cert.theta = theta;
    res.cert.f0 = RealMatrix::Zero(rows, cols);
    res.cert.f1 = RealMatrix::Zero(rows, cols);
    return res;
  }

  const FactorizationObjective obj(std::move(support), rows, cols, theta);
  Eigen::VectorXd u(static_cast<Eigen::Index>(obj.size()));
  std::vector<double> schedule;
  if (opts.warm_start) {
    // Schur weights of the p-norm maximizer x: f0_ij = |a_ij| x_j / (|A| x)_i.
    const NormWitness w = nonneg_operator_p_norm(abs_a, ExponentSpec::from_theta(theta), opts.norm);
    RealVector x = w.maximizer.cwiseMax(1e-300);
    const RealVector z = abs_a * x;
    for (std::size_t e = 0; e < obj.size(); ++e) {
      const auto& s = obj.support()[e];
      u(static_cast<Eigen::Index>(e)) = s.log_a + std::log(x(s.col)) - std::log(z(s.row));
    }
    schedule = {1e-4, 1e-6, 1e-8};
  } else {
    for (std::size_t e = 0; e < obj.size(); ++e) u(static_cast<Eigen::Index>(e)) = obj.support()[e].log_a;
    schedule = {1e-1, 1e-2, 1e-3, 1e-4, 1e-6, 1e-8};
  }

  Eigen::VectorXd best_u = u;
  double best = obj.evaluate(u, 0.0, nullptr);
  bool converged = true;
  for (double tau : schedule) {
    auto fg = [&](const Eigen::VectorXd& v, Eigen::VectorXd& g) {
      const double exact = obj.evaluate(v, 0.0, nullptr);
      if (exact < best) {
        best = exact;
        best_u = v;
      }
      return obj.evaluate(v, tau, &g);
    };
    LbfgsOptions lo;
    lo.max_iterations = opts.max_iterations;
    const LbfgsResult r = lbfgs_minimize(fg, u, lo);
    res.iterations += r.iterations;
    converged = r.converged;
  }

  res.cert = make_certificate(obj, best_u, rows, cols, theta);
  // f0 = f1 = |A| is already balanced when its two endpoint norms agree, as
  // for diagonal and scalar matrices, and is then exact without any rounding
  // from exp and log.
  const double n0 = max_row_sum(abs_a), n1 = max_col_sum(abs_a);
  if (n0 == n1 && n0 <= res.cert.bound * (1.0 + 1e-12)) {
    res.cert.f0 = abs_a;
    res.cert.f1 = abs_a;
    res.cert.bound = n0;
  }
  res.value = res.cert.bound;
  if (!converged) throw CalderonBudgetError("Calderon solver exhausted its iterations", res.cert);
  return res;
}

}  // namespace detail

FactorizationCheck verify_factorization_abs(const RealMatrix& abs_a, const Factorization& cert) {
  if (cert.f0.rows() != abs_a.rows() || cert.f0.cols() != abs_a.cols() || cert.f1.rows() != abs_a.rows() ||
      cert.f1.cols() != abs_a.cols()) {
    throw StructuralError("certificate shape does not match matrix");
  }
  const double t = cert.theta;
  FactorizationCheck chk;
  const bool sane = cert.f0.allFinite() && cert.f1.allFinite() && (cert.f0.array() >= 0.0).all() &&
                    (cert.f1.array() >= 0.0).all() && t > 0.0 && t < 1.0;
  if (!sane) {
    chk.residual = kInfinity;
    chk.recomputed_bound = kInfinity;
    return chk;
  }
  for (Eigen::Index i = 0; i < abs_a.rows(); ++i) {
    for (Eigen::Index j = 0; j < abs_a.cols(); ++j) {
      if (abs_a(i, j) == 0.0) continue;
      const double r = std::log(abs_a(i, j)) - (1.0 - t) * std::log(cert.f0(i, j)) - t * std::log(cert.f1(i, j));
      chk.residual = std::max(chk.residual, std::isnan(r) ? kInfinity : r);
    }
  }
  chk.recomputed_bound = std::pow(detail::max_row_sum(cert.f0), 1.0 - t) * std::pow(detail::max_col_sum(cert.f1), t);
  chk.accepted = chk.residual <= 1e-9 && chk.recomputed_bound <= cert.bound * (1.0 + 1e-9);
  return chk;
}

DualWitness dual_witness_from_norm_witness(const Matrix& a, const NormWitness& w, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0, 1)");
  const ExponentSpec p = ExponentSpec::from_theta(theta);
  if (w.maximizer.size() != a.cols() || w.dual.size() != a.rows()) {
    throw StructuralError("norm witness does not match matrix shape");
  }
  if ((w.maximizer.array() < 0.0).any() || (w.dual.array() < 0.0).any() ||
      std::abs(vector_p_norm(w.maximizer, p) - 1.0) > 1e-9 || std::abs(vector_p_norm(w.dual, p.dual()) - 1.0) > 1e-9) {
    throw DomainError("norm witness is not normalized");
  }
  DualWitness dw;
  dw.theta = theta;
  dw.b0 = w.dual * RealVector::Ones(a.cols()).transpose();
  dw.b1 = RealVector::Ones(a.rows()) * w.maximizer.transpose();
  dw.b.resize(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const Complex phase = a(i, j) == 0.0 ? Complex(1.0) : std::conj(a(i, j)) / std::abs(a(i, j));
      dw.b(i, j) = dw.b0(i, j) * dw.b1(i, j) * phase;
    }
  }
  dw.pairing = (a.cwiseAbs().array() * dw.b.cwiseAbs().array()).sum();
  return dw;
}

void check_dual_witness(const DualWitness& dw) {
  const double t = dw.theta;
  if (!(t > 0.0 && t < 1.0)) throw DomainError("dual witness theta must lie in (0, 1)");
  if (dw.b0.rows() != dw.b.rows() || dw.b0.cols() != dw.b.cols() || dw.b1.rows() != dw.b.rows() ||
      dw.b1.cols() != dw.b.cols()) {
    throw StructuralError("dual witness blocks differ in shape");
  }
  if (!dw.b.allFinite() || !dw.b0.allFinite() || !dw.b1.allFinite() || (dw.b0.array() < 0.0).any() ||
      (dw.b1.array() < 0.0).any()) {
    throw DomainError("dual witness blocks must be finite and b0, b1 nonnegative");
  }
  for (Eigen::Index i = 0; i < dw.b.rows(); ++i) {
    for (Eigen::Index j = 0; j < dw.b.cols(); ++j) {
      const double prod = dw.b0(i, j) * dw.b1(i, j);
      if (std::abs(std::abs(dw.b(i, j)) - prod) > 1e-12 * std::max(1.0, prod)) {
        throw DomainError("dual witness violates |b_ij| = b0_ij * b1_ij");
      }
    }
  }
  const double p = 1.0 / t, pc = 1.0 / (1.0 - t);
  double s0 = 0.0, s1 = 0.0;
  for (Eigen::Index i = 0; i < dw.b0.rows(); ++i) s0 += std::pow(dw.b0.row(i).maxCoeff(), pc);
  for (Eigen::Index j = 0; j < dw.b1.cols(); ++j) s1 += std::pow(dw.b1.col(j).maxCoeff(), p);
  if (s0 > 1.0 + 1e-12) throw DomainError("dual witness: sum_i (max_j b0_ij)^p' exceeds 1");
  if (s1 > 1.0 + 1e-12) throw DomainError("dual witness: sum_j (max_i b1_ij)^p exceeds 1");
}

double dual_pairing(const Matrix& a, const DualWitness& dw) {
  check_dual_witness(dw);
  if (dw.b.rows() != a.rows() || dw.b.cols() != a.cols()) throw StructuralError("dual witness shape mismatch");
  return (a.cwiseAbs().array() * dw.b.cwiseAbs().array()).sum();
}

InterpolationReport verify_interpolation_identity(const Matrix& a, double theta, double tol,
                                                  const CalderonOptions& opts) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0, 1)");
  InterpolationReport rep;
  rep.theta = theta;
  rep.tol = tol;
  const NormWitness w = regular_norm(a, ExponentSpec::from_theta(theta), opts.norm);
  rep.regular = w.value;
  rep.calderon = calderon_norm(a, theta, opts).value;
  rep.pairing = dual_pairing(a, dual_witness_from_norm_witness(a, w, theta));
  rep.endpoint_product = std::pow(a0_norm(a), 1.0 - theta) * std::pow(a1_norm(a), theta);
  const double r = rep.regular, c = rep.calderon;
  rep.passed = rep.pairing <= r * (1.0 + tol) && c >= r * (1.0 - tol) && c <= rep.endpoint_product * (1.0 + tol) &&
               std::abs(c - r) <= tol * r;
  return rep;
}

}  // namespace regop
