#pragma once

// Shared domain types for regular operators on finite l_p lattices.
//
// A matrix is identified with an operator between sequence spaces in the
// usual way: column j is the image of the j-th unit vector. Every norm in the
// library depends only on entry moduli, so most entry points accept real or
// complex dense Eigen expressions and call cwiseAbs() first.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace regop {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;      // MatrixOperator
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;  // NonnegVector when all coords >= 0

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

// Input outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "domain"; }
};

// Malformed instance file.
class ParseError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "parse"; }
};

// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "io"; }
};

// Well-formed file whose shapes do not agree.
class StructuralError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "structural"; }
};

// An iterative method ran out of iterations. [lower, upper] is the best
// bracket known at that point.
class BudgetError : public Error {
 public:
  BudgetError(const std::string& what, double lower, double upper)
      : Error(what), lower_(lower), upper_(upper) {}
  const char* kind() const noexcept override { return "budget"; }
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }

 private:
  double lower_;
  double upper_;
};

/// Exponent of an l_p space together with its interpolation parameter
/// theta = 1/p and conjugate exponent. p = 1 and p = inf are exact states,
/// not limits.
class ExponentSpec {
 public:
  static ExponentSpec from_p(double p) {
    if (std::isnan(p) || p < 1.0) {
      throw DomainError("exponent p must lie in [1, inf], got " + std::to_string(p));
    }
    ExponentSpec e;
    e.p_ = p;
    if (std::isinf(p)) {
      e.theta_ = 0.0;
      e.conj_ = 1.0;
    } else if (p == 1.0) {
      e.theta_ = 1.0;
      e.conj_ = kInfinity;
    } else {
      e.theta_ = 1.0 / p;
      e.conj_ = p / (p - 1.0);
    }
    return e;
  }

  static ExponentSpec from_theta(double theta) {
    if (std::isnan(theta) || theta < 0.0 || theta > 1.0) {
      throw DomainError("theta must lie in [0, 1], got " + std::to_string(theta));
    }
    if (theta == 0.0) return from_p(kInfinity);
    ExponentSpec e = from_p(1.0 / theta);
    e.theta_ = theta;
    if (theta < 1.0) e.conj_ = 1.0 / (1.0 - theta);
    return e;
  }

  static ExponentSpec one() { return from_p(1.0); }
  static ExponentSpec infinity() { return from_p(kInfinity); }

  double p() const noexcept { return p_; }
  double theta() const noexcept { return theta_; }
  double conjugate() const noexcept { return conj_; }
  ExponentSpec dual() const { return theta_ == 0.0 ? one() : from_theta(1.0 - theta_); }

  bool is_one() const noexcept { return p_ == 1.0; }
  bool is_infinity() const noexcept { return std::isinf(p_); }
  bool is_interior() const noexcept { return !is_one() && !is_infinity(); }

 private:
  ExponentSpec() = default;
  double p_ = 1.0;
  double theta_ = 1.0;
  double conj_ = kInfinity;
};

/// Finite family (x_1, ..., x_t) of vectors of a common length, stored as the
/// columns of a matrix.
struct FamilyWitness {
  Matrix members;  // n x t

  FamilyWitness() = default;
  explicit FamilyWitness(Matrix m) : members(std::move(m)) {
    if (members.cols() == 0) throw DomainError("family must be nonempty");
  }
  Eigen::Index size() const noexcept { return members.cols(); }
  Eigen::Index dimension() const noexcept { return members.rows(); }
};

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& a) {
  return a.derived().allFinite();
}

template <typename Derived>
void require_finite(const Eigen::DenseBase<Derived>& a, const char* what) {
  if (!all_finite(a)) throw DomainError(std::string(what) + " has non-finite entries");
}

/// |A| with entries |a_ij|.
template <typename Derived>
Eigen::Matrix<typename Eigen::NumTraits<typename Derived::Scalar>::Real, Eigen::Dynamic,
              Eigen::Dynamic>
entrywise_abs(const Eigen::MatrixBase<Derived>& a) {
  return a.cwiseAbs();
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> transpose(
    const Eigen::MatrixBase<Derived>& a) {
  return a.transpose();
}

/// Subspace S of l_p^n spanned by the columns of `basis`, and the operator
/// u : S -> l_p^m fixed by u(basis_j) = images_j.
struct ExtensionProblem {
  ExponentSpec p = ExponentSpec::from_p(2.0);
  Matrix basis;   // n x k
  Matrix images;  // m x k

  Eigen::Index ambient_n() const noexcept { return basis.rows(); }
  Eigen::Index target_m() const noexcept { return images.rows(); }
  Eigen::Index dimension() const noexcept { return basis.cols(); }

  /// Throws DomainError unless the basis has full column rank at relative
  /// tolerance 1e-10 and the images match the basis.
  void validate() const {
    if (basis.cols() != images.cols()) {
      throw StructuralError("basis has " + std::to_string(basis.cols()) + " vectors but images has " +
                            std::to_string(images.cols()));
    }
    if (basis.cols() == 0 || basis.rows() == 0 || images.rows() == 0) {
      throw StructuralError("extension problem has an empty dimension");
    }
    if (basis.cols() > basis.rows()) throw DomainError("more basis vectors than ambient dimension");
    require_finite(basis, "basis");
    require_finite(images, "images");
    Eigen::JacobiSVD<Matrix> svd(basis);
    const RealVector& s = svd.singularValues();
    if (s(0) == 0.0 || s(s.size() - 1) <= 1e-10 * s(0)) {
      throw DomainError("basis vectors are linearly dependent");
    }
  }

  /// u applied to sum_j c_j basis_j.
  Vector apply(const Vector& coeffs) const { return images * coeffs; }
};

}  // namespace regop
