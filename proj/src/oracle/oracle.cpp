#include "regop/oracle.hpp"

#include <algorithm>
#include <array>
#include <random>

namespace regop::oracle {

namespace {

double lp(const RealVector& v, ExponentSpec p) {
  if (p.is_infinity()) return v.cwiseAbs().maxCoeff();
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x), p.p());
  return std::pow(s, 1.0 / p.p());
}

// Coordinate pattern search for a maximum of f, step halving down to 1e-13.
template <typename F>
double pattern_search(F&& f, RealVector& x, double step, const RealVector& lower) {
  double best = f(x);
  while (step > 1e-13) {
    bool improved = false;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      for (double dir : {1.0, -1.0}) {
        RealVector y = x;
        y(i) = std::max(y(i) + dir * step, lower(i));
        const double v = f(y);
        if (v > best) {
          best = v;
          x = y;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

}  // namespace

void GridSpec::validate() const {
  if (resolution < 2) throw DomainError("grid resolution must be at least 2");
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) throw DomainError("grid bounds must be finite, lo < hi");
}

double operator_p_norm(const RealMatrix& m, ExponentSpec p, const GridSpec& grid) {
  grid.validate();
  const Eigen::Index n = m.cols();
  if (n > 3) throw RefusalError("operator_p_norm oracle handles at most 3 columns");
  if ((m.array() < 0.0).any()) throw DomainError("oracle expects a nonnegative matrix");
  auto ratio = [&](const RealVector& x) {
    const double d = lp(x, p);
    return d > 0.0 ? lp(m * x, p) / d : 0.0;
  };
  const int r = grid.resolution;
  std::array<int, 3> idx{0, 0, 0};
  double best = 0.0;
  RealVector best_x = RealVector::Ones(n);
  long total = 1;
  for (Eigen::Index i = 0; i < n; ++i) total *= r + 1;
  for (long code = 1; code < total; ++code) {
    long c = code;
    for (Eigen::Index i = 0; i < n; ++i) {
      idx[static_cast<std::size_t>(i)] = static_cast<int>(c % (r + 1));
      c /= r + 1;
    }
    RealVector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = idx[static_cast<std::size_t>(i)] / static_cast<double>(r);
    const double v = ratio(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  return std::max(best, pattern_search(ratio, best_x, 1.0 / r, RealVector::Zero(n)));
}

double calderon_norm(const RealMatrix& a, double theta, const GridSpec& grid) {
  grid.validate();
  if (a.rows() != 2 || a.cols() != 2) throw RefusalError("calderon_norm oracle handles 2 x 2 matrices only");
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0, 1)");
  std::vector<std::array<int, 2>> support;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (a(i, j) != 0.0) support.push_back({i, j});
  if (support.empty()) return 0.0;

  // log of the product bound; u(0) = 0 fixes the gauge.
  auto log_bound = [&](const RealVector& free) {
    std::array<double, 2> row{0.0, 0.0}, col{0.0, 0.0};
    for (std::size_t e = 0; e < support.size(); ++e) {
      const auto [i, j] = support[e];
      const double u = e == 0 ? 0.0 : free(static_cast<Eigen::Index>(e - 1));
      const double f0 = std::exp(u);
      const double f1 = std::exp((std::log(a(i, j)) - (1.0 - theta) * u) / theta);
      row[static_cast<std::size_t>(i)] += f0;
      col[static_cast<std::size_t>(j)] += f1;
    }
    return (1.0 - theta) * std::log(std::max(row[0], row[1])) + theta * std::log(std::max(col[0], col[1]));
  };
  const auto dims = static_cast<Eigen::Index>(support.size()) - 1;
  if (dims == 0) return std::exp(log_bound(RealVector()));

  const int r = grid.resolution;
  const double h = (grid.hi - grid.lo) / (r - 1);
  long total = 1;
  for (Eigen::Index i = 0; i < dims; ++i) total *= r;
  double best = kInfinity;
  for (long code = 0; code < total; ++code) {
    long c = code;
    RealVector u(dims);
    for (Eigen::Index i = 0; i < dims; ++i) {
      u(i) = grid.lo + h * static_cast<double>(c % r);
      c /= r;
    }
    best = std::min(best, log_bound(u));
  }
  // The log bound is jointly convex in u, so minimizing out the trailing
  // coordinates leaves a convex function of the leading ones: nested golden
  // section search over the box is exact up to its bracket width.
  RealVector u(dims);
  auto nested = [&](auto&& self, Eigen::Index d) -> double {
    if (d == dims) return log_bound(u);
    constexpr double kInvPhi = 0.6180339887498949;
    double a = grid.lo, b = grid.hi;
    auto at = [&](double x) {
      u(d) = x;
      return self(self, d + 1);
    };
    double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
    double f1 = at(x1), f2 = at(x2);
    for (int it = 0; it < 60; ++it) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - kInvPhi * (b - a);
        f1 = at(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + kInvPhi * (b - a);
        f2 = at(x2);
      }
    }
    return std::min(f1, f2);
  };
  return std::exp(std::min(best, nested(nested, 0)));
}

double family_search(const ExtensionProblem& prob, int cap) {
  prob.validate();
  if (prob.ambient_n() > 3 || prob.dimension() > 2) {
    throw RefusalError("family_search oracle handles ambient_n <= 3 and k <= 2");
  }
  if (cap < 1) throw DomainError("family cap must be at least 1");
  const ExponentSpec p = prob.p;

  std::vector<double> moduli;
  for (int l = 1; l <= 8; ++l) moduli.push_back(l / 8.0);
  std::vector<Complex> phases;
  for (int l = 0; l < 8; ++l) phases.push_back(std::polar(1.0, 2.0 * 3.14159265358979323846 * l / 8.0));

  // A member's overall phase is irrelevant, so its first nonzero
  // coefficient is taken real and positive.
  std::vector<Vector> net;
  if (prob.dimension() == 1) {
    for (double r : moduli) net.push_back(Vector::Constant(1, r));
  } else {
    for (double r1 : moduli) {
      Vector c(2);
      c << r1, 0.0;
      net.push_back(c);
      for (double r2 : moduli)
        for (Complex w : phases) {
          c << r1, r2 * w;
          net.push_back(c);
        }
    }
    for (double r2 : moduli) {
      Vector c(2);
      c << 0.0, r2;
      net.push_back(c);
    }
  }
  const std::size_t size = net.size();
  double combos = 0.0, choose = 1.0;
  for (int t = 1; t <= cap; ++t) {
    choose *= static_cast<double>(size + static_cast<std::size_t>(t) - 1) / t;
    combos += choose;
  }
  if (combos > 5e6) throw RefusalError("family_search oracle: too many families for this cap");

  std::vector<RealVector> dom, img;
  for (const Vector& c : net) {
    dom.push_back((prob.basis * c).cwiseAbs());
    img.push_back((prob.images * c).cwiseAbs());
  }
  double best = 0.0;
  std::vector<std::size_t> pick;
  // Depth-first enumeration of multisets (nondecreasing indices).
  auto walk = [&](auto&& self, std::size_t from, const RealVector& sd, const RealVector& si) -> void {
    for (std::size_t i = from; i < size; ++i) {
      const RealVector nd = pick.empty() ? dom[i] : RealVector(sd.cwiseMax(dom[i]));
      const RealVector ni = pick.empty() ? img[i] : RealVector(si.cwiseMax(img[i]));
      const double den = lp(nd, p);
      if (den > 0.0) best = std::max(best, lp(ni, p) / den);
      if (static_cast<int>(pick.size()) + 1 < cap) {
        pick.push_back(i);
        self(self, i, nd, ni);
        pick.pop_back();
      }
    }
  };
  walk(walk, 0, RealVector(), RealVector());
  return best;
}

double extension_min_norm_p2(const ExtensionProblem& prob, int iterations, int starts) {
  prob.validate();
  if (!(prob.p.p() == 2.0)) throw RefusalError("extension oracle handles p = 2 only");
  const Eigen::Index n = prob.ambient_n(), m = prob.target_m();
  const Eigen::JacobiSVD<Matrix> svd(prob.basis, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Matrix pinv =
      svd.matrixV() * svd.singularValues().cwiseInverse().cast<Complex>().asDiagonal() * svd.matrixU().adjoint();
  const Matrix m0 = prob.images * pinv;
  const Matrix proj = Matrix::Identity(n, n) - prob.basis * pinv;
  const double scale = m0.norm();
  if (scale == 0.0) return 0.0;

  auto spectral = [](const Matrix& x, RealVector* u, RealVector* v) {
    const RealMatrix a = x.cwiseAbs();
    const Eigen::JacobiSVD<RealMatrix> s(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (u) *u = s.matrixU().col(0).cwiseAbs();
    if (v) *v = s.matrixV().col(0).cwiseAbs();
    return s.singularValues()(0);
  };

  // Each start runs in phases restarted from the best point seen, with the
  // step scale halved per phase.
  constexpr int kPhases = 20;
  std::mt19937_64 engine(20240611);
  std::normal_distribution<double> normal;
  double best = kInfinity;
  for (int s = 0; s < starts; ++s) {
    Matrix w = Matrix::Zero(m, n);
    if (s > 0)
      for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < n; ++j) w(i, j) = Complex(normal(engine), normal(engine)) * scale;
    Matrix x = m0 + w * proj;
    Matrix best_x = x;
    double best_run = spectral(x, nullptr, nullptr);
    for (int phase = 0; phase < kPhases; ++phase) {
      x = best_x;
      const double step = 0.5 * scale * std::pow(0.5, phase);
      for (int it = 0; it < iterations / kPhases; ++it) {
        RealVector u, v;
        const double value = spectral(x, &u, &v);
        if (value < best_run) {
          best_run = value;
          best_x = x;
        }
        Matrix g(m, n);
        for (Eigen::Index i = 0; i < m; ++i) {
          for (Eigen::Index j = 0; j < n; ++j) {
            const double a = std::abs(x(i, j));
            g(i, j) = a > 0.0 ? u(i) * v(j) * x(i, j) / a : Complex(0.0);
          }
        }
        g = g * proj;
        const double gn = g.norm();
        if (gn == 0.0) break;
        x -= (step / std::sqrt(it + 1.0)) * g / gn;
      }
    }
    best = std::min({best, best_run, spectral(x, nullptr, nullptr)});
  }
  return best;
}

}  // namespace regop::oracle
