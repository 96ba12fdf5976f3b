#include "regop/norms.hpp"

#include "regop/random.hpp"

namespace regop {

namespace detail {

double max_row_sum(const RealMatrix& a, Eigen::Index* argmax) {
  double best = 0.0;
  Eigen::Index at = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) s += a(i, j);
    if (s > best) {
      best = s;
      at = i;
    }
  }
  if (argmax) *argmax = at;
  return best;
}

double max_col_sum(const RealMatrix& a, Eigen::Index* argmax) {
  double best = 0.0;
  Eigen::Index at = 0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) s += a(i, j);
    if (s > best) {
      best = s;
      at = j;
    }
  }
  if (argmax) *argmax = at;
  return best;
}

double sum_row_max(const RealMatrix& a) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) s += a.cols() ? a.row(i).maxCoeff() : 0.0;
  return s;
}

double sum_col_max(const RealMatrix& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) s += a.rows() ? a.col(j).maxCoeff() : 0.0;
  return s;
}

}  // namespace detail

namespace {

RealVector unit(Eigen::Index n, Eigen::Index at) {
  RealVector e = RealVector::Zero(n);
  e(at) = 1.0;
  return e;
}

NormWitness zero_witness(const RealMatrix& m) {
  NormWitness w;
  w.maximizer = unit(m.cols(), 0);
  w.dual = unit(m.rows(), 0);
  return w;
}

// Dual vector y = z^(p-1) / ||z^(p-1)||_{p'}, so that <y, z> = ||z||_p.
RealVector dual_of(const RealVector& z, ExponentSpec p) {
  const double top = z.maxCoeff();
  RealVector y(z.size());
  if (top == 0.0) return unit(z.size(), 0);
  for (Eigen::Index i = 0; i < z.size(); ++i) y(i) = std::pow(z(i) / top, p.p() - 1.0);
  return y / vector_p_norm(y, p.dual());
}

// Relative lower bound on iterate coordinates. Keeps every power z^(q-1)
// representable, so the Schur bound below never divides by an underflowed
// coordinate.
double coordinate_floor(double q) { return std::pow(1e-250, 1.0 / std::max(q - 1.0, 1.0)); }

struct Iterate {
  double lower = 0.0;
  double upper = kInfinity;
  RealVector next;
};

// One step of the fixed-point map on a matrix with no zero rows or columns,
// with ||x||_p = 1 and x > 0.
Iterate power_step(const RealMatrix& k, const RealVector& x, double q) {
  Iterate it;
  const RealVector z = k * x;
  it.lower = vector_p_norm(z, ExponentSpec::from_p(q));
  const double ztop = z.maxCoeff();
  RealVector zs(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) zs(i) = std::pow(z(i) / ztop, q - 1.0);
  const RealVector w = k.transpose() * zs;

  // Schur test with weights (x, Mx): ||M||^q <= max_j (M^T (Mx)^(q-1))_j / x_j^(q-1).
  double log_ratio = -kInfinity;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (w(j) == 0.0) continue;
    const double r = x(j) > 0.0 ? std::log(w(j)) + (q - 1.0) * (std::log(ztop) - std::log(x(j))) : kInfinity;
    log_ratio = std::max(log_ratio, r);
  }
  it.upper = std::exp(log_ratio / q);

  it.next.resize(x.size());
  const double wtop = w.maxCoeff();
  const double floor = coordinate_floor(q);
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    it.next(j) = std::max(std::pow(w(j) / wtop, 1.0 / (q - 1.0)), floor);
  }
  it.next /= vector_p_norm(it.next, ExponentSpec::from_p(q));
  return it;
}

double bracket_width(const Iterate& it) { return it.upper - it.lower; }

// Sends one coordinate of x to the floor. Maximizers in the limit of the
// boundary of the positive cone are approached very slowly by the fixed-point
// map; this jumps there directly.
RealVector prune(const RealVector& x, Eigen::Index j, double q) {
  RealVector y = x;
  y(j) = coordinate_floor(q) * x.maxCoeff();
  return y / vector_p_norm(y, ExponentSpec::from_p(q));
}

constexpr int kAndersonDepth = 5;

// Type-II Anderson mixing for a fixed-point map g: given v_k and g(v_k),
// returns the extrapolated next iterate.
class Anderson {
 public:
  explicit Anderson(int depth) : depth_(depth) {}

  RealVector extrapolate(const RealVector& v, const RealVector& gv) {
    const RealVector f = gv - v;
    if (has_prev_) {
      df_.push_back(f - prev_f_);
      dg_.push_back(gv - prev_g_);
      if (static_cast<int>(df_.size()) > depth_) {
        df_.erase(df_.begin());
        dg_.erase(dg_.begin());
      }
    }
    prev_f_ = f;
    prev_g_ = gv;
    has_prev_ = true;
    if (df_.empty()) return gv;
    RealMatrix dfm(f.size(), static_cast<Eigen::Index>(df_.size()));
    RealMatrix dgm(f.size(), dfm.cols());
    for (std::size_t c = 0; c < df_.size(); ++c) {
      dfm.col(static_cast<Eigen::Index>(c)) = df_[c];
      dgm.col(static_cast<Eigen::Index>(c)) = dg_[c];
    }
    const RealVector gamma = dfm.completeOrthogonalDecomposition().solve(f);
    return gv - dgm * gamma;
  }

  void reset() {
    df_.clear();
    dg_.clear();
    has_prev_ = false;
  }

 private:
  int depth_;
  bool has_prev_ = false;
  RealVector prev_f_, prev_g_;
  std::vector<RealVector> df_, dg_;
};

}  // namespace

NormWitness nonneg_operator_p_norm(const RealMatrix& m, ExponentSpec p, const PowerOptions& opts) {
  if (m.rows() == 0 || m.cols() == 0) throw StructuralError("empty matrix");
  require_finite(m, "matrix");
  if ((m.array() < 0.0).any()) throw DomainError("nonneg_operator_p_norm requires nonnegative entries");

  if (p.is_one() || p.is_infinity()) {
    NormWitness w;
    Eigen::Index at = 0;
    if (p.is_one()) {
      w.value = detail::max_col_sum(m, &at);
      if (w.value == 0.0) return zero_witness(m);
      w.maximizer = unit(m.cols(), at);
      w.dual = RealVector::Ones(m.rows());
    } else {
      w.value = detail::max_row_sum(m, &at);
      if (w.value == 0.0) return zero_witness(m);
      w.maximizer = RealVector::Ones(m.cols());
      w.dual = unit(m.rows(), at);
    }
    w.upper = w.value;
    return w;
  }

  std::vector<Eigen::Index> rows, cols;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    if (m.row(i).maxCoeff() > 0.0) rows.push_back(i);
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    if (m.col(j).maxCoeff() > 0.0) cols.push_back(j);
  if (rows.empty()) return zero_witness(m);

  const double scale = m.maxCoeff();
  const RealMatrix k = m(rows, cols) / scale;
  const double q = p.p();

  double best_lower = -1.0;
  double best_upper = kInfinity;
  RealVector best_x;
  int total = 0;
  bool certified = false;

  for (int start = 0; start <= opts.random_starts && !certified; ++start) {
    RealVector x(static_cast<Eigen::Index>(cols.size()));
    if (start == 0) {
      x.setOnes();
    } else {
      Rng rng(opts.seed, static_cast<std::uint64_t>(start));
      for (Eigen::Index j = 0; j < x.size(); ++j) x(j) = rng.uniform(0.05, 1.0);
    }
    x /= vector_p_norm(x, p);

    double own_lower = -1.0;
    double own_upper = kInfinity;
    int stalled = 0;
    double checkpoint = kInfinity;
    Anderson accel(kAndersonDepth);
    bool accelerate = true;
    Eigen::Index prunes = 0;
    Iterate step = power_step(k, x, q);
    for (int it = 0; it < opts.max_iterations; ++it) {
      ++total;
      if (step.lower > best_lower) {
        best_lower = step.lower;
        best_x = x;
      }
      best_upper = std::min(best_upper, step.upper);
      if (best_upper - best_lower <= opts.tol * best_lower) {
        certified = true;
        break;
      }
      // Progress means halving this start's own bracket within a window.
      own_lower = std::max(own_lower, step.lower);
      own_upper = std::min(own_upper, step.upper);
      if (own_upper - own_lower <= 0.5 * checkpoint) {
        checkpoint = own_upper - own_lower;
        stalled = 0;
      } else {
        ++stalled;
      }
      if (stalled > 30 && accelerate) {
        Iterate best_prune;
        RealVector pruned;
        for (Eigen::Index j = 0; j < x.size() && prunes < x.size(); ++j) {
          RealVector cand = prune(x, j, q);
          Iterate trial = power_step(k, cand, q);
          if (bracket_width(trial) < bracket_width(best_prune.next.size() ? best_prune : step)) {
            best_prune = std::move(trial);
            pruned = std::move(cand);
          }
        }
        stalled = 0;
        checkpoint = kInfinity;
        accel.reset();
        if (pruned.size()) {
          ++prunes;
          x = std::move(pruned);
          step = std::move(best_prune);
          continue;
        }
        // Nothing to prune: fall back to the plain map.
        accelerate = false;
      } else if (stalled > 200) {
        break;
      }

      Iterate plain_step = power_step(k, step.next, q);
      if (!accelerate) {
        x = std::move(step.next);
        step = std::move(plain_step);
        continue;
      }
      // Anderson extrapolation in log coordinates keeps iterates positive.
      // The plain step is kept whenever the extrapolated point is worse.
      const RealVector v = x.array().log().matrix();
      const RealVector plain = step.next;
      x = accel.extrapolate(v, RealVector(plain.array().log().matrix())).array().exp().matrix();
      x /= vector_p_norm(x, p);
      Iterate trial = x.allFinite() ? power_step(k, x, q) : plain_step;
      if (!x.allFinite() || !(trial.lower >= plain_step.lower || trial.upper - trial.lower < plain_step.upper - plain_step.lower)) {
        accel.reset();
        x = plain;
        trial = std::move(plain_step);
      }
      step = std::move(trial);
    }
  }

  if (!certified) {
    throw BudgetError("p-norm iteration did not close its bracket", best_lower * scale, best_upper * scale);
  }

  NormWitness w;
  w.maximizer = RealVector::Zero(m.cols());
  for (std::size_t j = 0; j < cols.size(); ++j) w.maximizer(cols[j]) = best_x(static_cast<Eigen::Index>(j));
  const RealVector z = m * w.maximizer;
  w.value = vector_p_norm(z, p);
  w.dual = dual_of(z, p);
  w.upper = std::max(best_upper * scale, w.value);
  w.iterations = total;
  return w;
}

}  // namespace regop
