#include "regop/extension.hpp"

#include "regop/random.hpp"

#include "detail/lbfgs.hpp"

#include <algorithm>
#include <numeric>

namespace regop {

namespace {

constexpr double kStages[] = {4.0, 16.0, 64.0, 256.0, 2048.0};

double exact_sup_norm(const Matrix& v, ExponentSpec p) {
  return vector_p_norm(RealVector(v.cwiseAbs().rowwise().maxCoeff()), p);
}

// log || (sum_i |v_ji|^q)^(1/q) ||_P and its gradient in v, written as
// d/dRe + i d/dIm. Returns -inf when v vanishes.
double smooth_log_norm(const Matrix& v, double q, double pexp, Matrix& grad) {
  grad.setZero(v.rows(), v.cols());
  RealVector s(v.rows());
  for (Eigen::Index j = 0; j < v.rows(); ++j) {
    const double top = v.row(j).cwiseAbs().maxCoeff();
    double acc = 0.0;
    if (top > 0.0)
      for (Eigen::Index i = 0; i < v.cols(); ++i) acc += std::pow(std::abs(v(j, i)) / top, q);
    s(j) = top > 0.0 ? top * std::pow(acc, 1.0 / q) : 0.0;
  }
  const double smax = s.maxCoeff();
  if (!(smax > 0.0)) return -kInfinity;
  double acc = 0.0;
  for (double x : s) acc += std::pow(x / smax, pexp);
  const double value = std::log(smax) + std::log(acc) / pexp;
  for (Eigen::Index j = 0; j < v.rows(); ++j) {
    if (s(j) == 0.0) continue;
    const double wj = std::exp(pexp * (std::log(s(j)) - value)) / s(j);
    for (Eigen::Index i = 0; i < v.cols(); ++i) {
      const double a = std::abs(v(j, i));
      if (a == 0.0) continue;
      grad(j, i) = wj * std::pow(a / s(j), q - 1.0) * (v(j, i) / a);
    }
  }
  return value;
}

class FamilyObjective {
 public:
  FamilyObjective(const ExtensionProblem& prob, Eigen::Index members)
      : basis_(prob.basis), images_(prob.images), p_(prob.p), k_(prob.dimension()), t_(members) {}

  Eigen::Index size() const { return 2 * k_ * t_; }

  Matrix unpack(const RealVector& x) const {
    Matrix c(k_, t_);
    for (Eigen::Index col = 0; col < t_; ++col)
      for (Eigen::Index r = 0; r < k_; ++r) c(r, col) = Complex(x(2 * (col * k_ + r)), x(2 * (col * k_ + r) + 1));
    return c;
  }

  RealVector pack(const Matrix& c) const {
    RealVector x(size());
    for (Eigen::Index col = 0; col < t_; ++col) {
      for (Eigen::Index r = 0; r < k_; ++r) {
        x(2 * (col * k_ + r)) = c(r, col).real();
        x(2 * (col * k_ + r) + 1) = c(r, col).imag();
      }
    }
    return x;
  }

  double exact_ratio(const Matrix& c) const {
    const double den = exact_sup_norm(basis_ * c, p_);
    if (!(den > 0.0)) return 0.0;
    return exact_sup_norm(images_ * c, p_) / den;
  }

  // Negative smoothed log ratio.
  double smooth(const RealVector& x, double q, RealVector& grad) const {
    const Matrix c = unpack(x);
    const double pexp = p_.is_infinity() ? q : p_.p();
    Matrix gu, gv;
    const double num = smooth_log_norm(images_ * c, q, pexp, gu);
    const double den = smooth_log_norm(basis_ * c, q, pexp, gv);
    if (!std::isfinite(den) || !std::isfinite(num)) return kInfinity;
    grad = -pack(images_.adjoint() * gu - basis_.adjoint() * gv);
    return -(num - den);
  }

 private:
  const Matrix& basis_;
  const Matrix& images_;
  ExponentSpec p_;
  Eigen::Index k_, t_;
};

struct Best {
  double value = -1.0;
  Matrix coeffs;

  void offer(double v, const Matrix& c) {
    if (v > value) {
      value = v;
      coeffs = c;
    }
  }
};

void ascend(const ExtensionProblem& prob, Matrix start, int iterations, Best& best) {
  const FamilyObjective obj(prob, start.cols());
  best.offer(obj.exact_ratio(start), start);
  RealVector x = obj.pack(start);
  RealVector g0;
  if (!std::isfinite(obj.smooth(x, kStages[0], g0))) return;
  for (double q : kStages) {
    auto fg = [&](const RealVector& v, RealVector& g) {
      const double f = obj.smooth(v, q, g);
      if (std::isfinite(f)) {
        const Matrix c = obj.unpack(v);
        best.offer(obj.exact_ratio(c), c);
      }
      return f;
    };
    detail::LbfgsOptions lo;
    lo.max_iterations = iterations;
    detail::lbfgs_minimize(fg, x, lo);
  }
}

// Coefficients of the family read off a dual matrix: member r is
// conj(dual row r) projected onto S and scaled so that its modulus stays
// below the maximizer x of the extension.
Matrix dual_family(const ExtensionProblem& prob, const Matrix& dual, const Matrix& minimizer, Eigen::Index cap,
                   const PowerOptions& popts) {
  const NormWitness w = regular_norm(minimizer, prob.p, popts);
  const Eigen::ColPivHouseholderQR<Matrix> qr(prob.basis);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(dual.rows()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return dual.row(a).norm() > dual.row(b).norm(); });
  std::vector<Vector> cols;
  for (Eigen::Index r : order) {
    if (static_cast<Eigen::Index>(cols.size()) >= cap) break;
    const Vector c = qr.solve(Vector(dual.row(r).adjoint()));
    const Vector member = prob.basis * c;
    double alpha = 0.0;
    for (Eigen::Index j = 0; j < member.size(); ++j)
      alpha = std::max(alpha, std::abs(member(j)) / std::max(w.maximizer(j), 1e-300));
    if (alpha > 0.0 && std::isfinite(alpha)) cols.push_back(c / alpha);
  }
  Matrix out(prob.dimension(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = cols[i];
  return out;
}

}  // namespace

LowerBound subspace_regular_lowerbound(const ExtensionProblem& prob, const FamilySearchOptions& opts,
                                       const ExtensionSolution* hint) {
  prob.validate();
  const Eigen::Index k = prob.dimension();
  const Eigen::Index cap = opts.cap > 0 ? opts.cap : 2 * prob.target_m();
  Best best;

  if (prob.images.cwiseAbs().maxCoeff() > 0.0) {
    Matrix family;
    if (hint && hint->dual.size() > 0) {
      family = dual_family(prob, hint->dual, hint->minimizer, cap, PowerOptions{});
    } else {
      const Matrix m = prob.images * prob.basis.completeOrthogonalDecomposition().pseudoInverse();
      const NormWitness w = regular_norm(m, prob.p);
      Matrix d(m.rows(), m.cols());
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
          const double a = std::abs(m(i, j));
          d(i, j) = w.dual(i) * w.maximizer(j) * (a > 0.0 ? m(i, j) / a : Complex(1.0));
        }
      }
      family = dual_family(prob, d, m, cap, PowerOptions{});
    }
    if (family.cols() > 0) ascend(prob, family, opts.iterations, best);
  }

  ascend(prob, Matrix::Identity(k, std::min<Eigen::Index>(k, cap)), opts.iterations, best);

  for (int r = 0; r < opts.budget; ++r) {
    Rng rng(opts.seed, static_cast<std::uint64_t>(r));
    Matrix c(k, cap);
    for (Eigen::Index j = 0; j < cap; ++j)
      for (Eigen::Index i = 0; i < k; ++i) c(i, j) = rng.complex_normal();
    ascend(prob, c, opts.iterations, best);
  }

  LowerBound lb;
  lb.value = std::max(best.value, 0.0);
  lb.family = FamilyWitness(prob.basis * best.coeffs);
  return lb;
}

}  // namespace regop
