#include "detail/barrier.hpp"

#include <algorithm>

namespace regop::detail {

namespace {

enum class Kind { Interior, RowSums, ColSums };

class ConicProblem {
 public:
  ConicProblem(const Matrix& m0, const Matrix& nperp, ExponentSpec p)
      : m0_(m0), np_(nperp), rows_(m0.rows()), cols_(m0.cols()), free_(nperp.cols()) {
    if (p.is_infinity()) {
      kind_ = Kind::RowSums;
    } else if (p.is_one()) {
      kind_ = Kind::ColSums;
    } else {
      kind_ = Kind::Interior;
      theta_ = p.theta();
    }
    const Eigen::Index cells = rows_ * cols_;
    off_f0_ = 2 * rows_ * free_;
    off_f1_ = off_f0_ + cells;
    if (kind_ == Kind::Interior) {
      off_t0_ = off_f1_ + cells;
      off_t1_ = off_t0_ + 1;
      size_ = off_t1_ + 1;
      nu_ = 3.0 * static_cast<double>(cells) + static_cast<double>(rows_ + cols_);
    } else {
      off_t0_ = off_t1_ = off_f1_;
      size_ = off_t0_ + 1;
      nu_ = 2.0 * static_cast<double>(cells) + static_cast<double>(kind_ == Kind::RowSums ? rows_ : cols_);
    }
    cost_ = RealVector::Zero(size_);
    if (kind_ == Kind::Interior) {
      cost_(off_t0_) = 1.0 - theta_;
      cost_(off_t1_) = theta_;
    } else {
      cost_(off_t0_) = 1.0;
    }
  }

  Eigen::Index size() const { return size_; }
  double nu() const { return nu_; }
  const RealVector& cost() const { return cost_; }

  Complex entry(const RealVector& z, Eigen::Index i, Eigen::Index j) const {
    Complex v = m0_(i, j);
    for (Eigen::Index l = 0; l < free_; ++l) {
      const Complex w(z(windex(i, l)), z(windex(i, l) + 1));
      v += w * std::conj(np_(j, l));
    }
    return v;
  }

  Matrix matrix(const RealVector& z) const {
    Matrix m(rows_, cols_);
    for (Eigen::Index i = 0; i < rows_; ++i)
      for (Eigen::Index j = 0; j < cols_; ++j) m(i, j) = entry(z, i, j);
    return m;
  }

  // Strictly feasible start at W = 0.
  RealVector initial_point() const {
    RealVector z = RealVector::Zero(size_);
    RealVector rsum = RealVector::Zero(rows_), csum = RealVector::Zero(cols_);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      for (Eigen::Index j = 0; j < cols_; ++j) {
        const double s = std::abs(m0_(i, j)) + 1.0;
        z(f0(i, j)) = s;
        if (kind_ == Kind::Interior) z(f1(i, j)) = s;
        rsum(i) += s;
        csum(j) += s;
      }
    }
    if (kind_ == Kind::Interior) {
      z(off_t0_) = rsum.maxCoeff() + 1.0;
      z(off_t1_) = csum.maxCoeff() + 1.0;
    } else {
      z(off_t0_) = (kind_ == Kind::RowSums ? rsum.maxCoeff() : csum.maxCoeff()) + 1.0;
    }
    return z;
  }

  // Barrier value F(z), +inf outside the cone. Gradient and Hessian are
  // written when requested.
  double barrier(const RealVector& z, RealVector* grad, RealMatrix* hess, Matrix* psi = nullptr) const {
    if (grad) grad->setZero(size_);
    if (hess) hess->setZero(size_, size_);
    if (psi) psi->resize(rows_, cols_);
    double value = 0.0;
    const Eigen::Index nloc = (kind_ == Kind::Interior ? 2 : 1) + 2 * free_;
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(nloc));
    const Eigen::Index dim = kind_ == Kind::Interior ? 4 : 3;
    RealMatrix jac(dim, nloc);
    RealVector gl(dim);
    RealMatrix hl(dim, dim);

    for (Eigen::Index i = 0; i < rows_; ++i) {
      for (Eigen::Index j = 0; j < cols_; ++j) {
        const Complex mij = entry(z, i, j);
        const double re = mij.real(), im = mij.imag(), mm = re * re + im * im;
        double phi;
        if (kind_ == Kind::Interior) {
          const double x = z(f0(i, j)), y = z(f1(i, j));
          if (!(x > 0.0 && y > 0.0)) return kInfinity;
          const double a = 1.0 - theta_, b = theta_;
          const double pw = std::exp(2.0 * a * std::log(x) + 2.0 * b * std::log(y));
          phi = pw - mm;
          if (!(phi > 0.0)) return kInfinity;
          value += -std::log(phi) - b * std::log(x) - a * std::log(y);
          if (grad || hess) {
            RealVector gp(4);
            gp << 2.0 * a * pw / x, 2.0 * b * pw / y, -2.0 * re, -2.0 * im;
            gl = -gp / phi;
            gl(0) -= b / x;
            gl(1) -= a / y;
            RealMatrix hp = RealMatrix::Zero(4, 4);
            hp(0, 0) = 2.0 * a * (2.0 * a - 1.0) * pw / (x * x);
            hp(1, 1) = 2.0 * b * (2.0 * b - 1.0) * pw / (y * y);
            hp(0, 1) = hp(1, 0) = 4.0 * a * b * pw / (x * y);
            hp(2, 2) = hp(3, 3) = -2.0;
            hl = gp * gp.transpose() / (phi * phi) - hp / phi;
            hl(0, 0) += b / (x * x);
            hl(1, 1) += a / (y * y);
          }
        } else {
          const double s = z(f0(i, j));
          phi = s * s - mm;
          if (!(s > 0.0 && phi > 0.0)) return kInfinity;
          value += -std::log(phi);
          if (grad || hess) {
            RealVector gp(3);
            gp << 2.0 * s, -2.0 * re, -2.0 * im;
            gl = -gp / phi;
            hl = gp * gp.transpose() / (phi * phi);
            hl(0, 0) -= 2.0 / phi;
            hl(1, 1) += 2.0 / phi;
            hl(2, 2) += 2.0 / phi;
          }
        }
        if (psi) (*psi)(i, j) = 2.0 * mij / phi;
        if (!(grad || hess)) continue;

        // Local coordinates (f0, [f1], re m, im m) as a linear image of the
        // variables they touch.
        jac.setZero();
        Eigen::Index c = 0, r = 0;
        idx[static_cast<std::size_t>(c)] = f0(i, j);
        jac(r++, c++) = 1.0;
        if (kind_ == Kind::Interior) {
          idx[static_cast<std::size_t>(c)] = f1(i, j);
          jac(r++, c++) = 1.0;
        }
        for (Eigen::Index l = 0; l < free_; ++l) {
          const double nr = np_(j, l).real(), ni = np_(j, l).imag();
          idx[static_cast<std::size_t>(c)] = windex(i, l);
          idx[static_cast<std::size_t>(c + 1)] = windex(i, l) + 1;
          jac(r, c) = nr;
          jac(r, c + 1) = ni;
          jac(r + 1, c) = -ni;
          jac(r + 1, c + 1) = nr;
          c += 2;
        }
        const RealVector g = jac.transpose() * gl;
        const RealMatrix h = jac.transpose() * hl * jac;
        for (Eigen::Index u = 0; u < nloc; ++u) {
          const Eigen::Index gu = idx[static_cast<std::size_t>(u)];
          if (grad) (*grad)(gu) += g(u);
          if (hess)
            for (Eigen::Index v = 0; v < nloc; ++v) (*hess)(gu, idx[static_cast<std::size_t>(v)]) += h(u, v);
        }
      }
    }

    // Linear constraints: slack = bound - sum of a row (or column) block.
    auto linear = [&](Eigen::Index bound, auto&& members, Eigen::Index count) {
      double slack = z(bound);
      for (Eigen::Index q = 0; q < count; ++q) slack -= z(members(q));
      if (!(slack > 0.0)) return false;
      value -= std::log(slack);
      if (grad) {
        (*grad)(bound) -= 1.0 / slack;
        for (Eigen::Index q = 0; q < count; ++q) (*grad)(members(q)) += 1.0 / slack;
      }
      if (hess) {
        const double w = 1.0 / (slack * slack);
        std::vector<std::pair<Eigen::Index, double>> coef{{bound, 1.0}};
        for (Eigen::Index q = 0; q < count; ++q) coef.push_back({members(q), -1.0});
        for (const auto& [a, ca] : coef)
          for (const auto& [b, cb] : coef) (*hess)(a, b) += w * ca * cb;
      }
      return true;
    };
    if (kind_ != Kind::ColSums) {
      for (Eigen::Index i = 0; i < rows_; ++i) {
        if (!linear(off_t0_, [&](Eigen::Index j) { return f0(i, j); }, cols_)) return kInfinity;
      }
    }
    if (kind_ != Kind::RowSums) {
      const Eigen::Index bound = kind_ == Kind::Interior ? off_t1_ : off_t0_;
      for (Eigen::Index j = 0; j < cols_; ++j) {
        if (!linear(bound, [&](Eigen::Index i) { return kind_ == Kind::Interior ? f1(i, j) : f0(i, j); }, rows_))
          return kInfinity;
      }
    }
    return value;
  }

 private:
  Eigen::Index windex(Eigen::Index i, Eigen::Index l) const { return 2 * (i * free_ + l); }
  Eigen::Index f0(Eigen::Index i, Eigen::Index j) const { return off_f0_ + i * cols_ + j; }
  Eigen::Index f1(Eigen::Index i, Eigen::Index j) const { return off_f1_ + i * cols_ + j; }

  Matrix m0_, np_;
  Eigen::Index rows_, cols_, free_;
  Kind kind_ = Kind::Interior;
  double theta_ = 0.5;
  Eigen::Index off_f0_ = 0, off_f1_ = 0, off_t0_ = 0, off_t1_ = 0, size_ = 0;
  double nu_ = 0.0;
  RealVector cost_;
};

// Solves hess dz = -g after symmetric diagonal scaling. Far along the path
// the Hessian spans many orders of magnitude and may lose numerical
// definiteness; a small shift on the scaled diagonal then restores it.
bool newton_direction(const RealMatrix& hess, const RealVector& g, RealVector& dz) {
  const RealVector s = hess.diagonal().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  RealMatrix hs = s.asDiagonal() * hess * s.asDiagonal();
  const RealVector gs = s.cwiseProduct(g);
  for (double shift = 0.0; shift < 1e-4; shift = shift == 0.0 ? 1e-14 : shift * 100.0) {
    if (shift > 0.0) hs.diagonal().array() += shift;
    const Eigen::LDLT<RealMatrix> ldlt(hs);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) continue;
    dz = -s.cwiseProduct(ldlt.solve(gs));
    if (dz.allFinite()) return true;
  }
  return false;
}

}  // namespace

ConicSolution solve_extension_conic(const Matrix& m0, const Matrix& nperp, ExponentSpec p, double rel_gap,
                                    int max_steps) {
  const ConicProblem prob(m0, nperp, p);
  RealVector z = prob.initial_point();
  const RealVector& c = prob.cost();
  double t = prob.nu() / c.dot(z);
  constexpr double kGrowth = 10.0;

  ConicSolution sol;
  RealVector grad;
  RealMatrix hess;
  bool stuck = false;
  while (sol.steps < max_steps) {
    // Centering by damped Newton on t c.z + F(z).
    for (int inner = 0; inner < 200 && sol.steps < max_steps; ++inner) {
      const double f = t * c.dot(z) + prob.barrier(z, &grad, &hess);
      const RealVector g = t * c + grad;
      RealVector dz;
      if (!newton_direction(hess, g, dz)) {
        stuck = true;
        break;
      }
      ++sol.steps;
      const double dec = -g.dot(dz);
      if (dec < 2e-10) break;
      // Inside the region of quadratic convergence (decrement below 1/10)
      // a full step is safe for a self-concordant barrier; testing descent
      // there only measures rounding in t c.z.
      const bool quadratic = dec < 1e-2;
      double step = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls) {
        const RealVector zn = z + step * dz;
        const double fn = t * c.dot(zn) + prob.barrier(zn, nullptr, nullptr);
        if (std::isfinite(fn) && (quadratic || fn <= f - 0.25 * step * dec)) {
          z = zn;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) {
        stuck = true;
        break;
      }
    }
    const double obj = c.dot(z);
    sol.gap = prob.nu() / t;
    if (sol.gap <= rel_gap * obj) {
      sol.converged = true;
      break;
    }
    if (stuck) break;
    t *= kGrowth;
  }

  sol.m = prob.matrix(z);
  sol.objective = c.dot(z);
  prob.barrier(z, nullptr, nullptr, &sol.psi);
  return sol;
}

}  // namespace regop::detail
