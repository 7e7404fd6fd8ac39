#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bcurv {

inline constexpr int kMaxJetOrder = 3;
inline constexpr int kMaxJetVars = 8;

// Truncated Taylor jet. Coefficients are raw partial derivatives,
// stored densely: value, grad[n], hess[n*n], third[n*n*n].
// A jet with nvars == 0 is a bare constant and broadcasts against any jet.
class Jet {
 public:
  Jet() : n_(0), order_(0), c_(1, 0.0) {}
  Jet(double value) : n_(0), order_(0), c_(1, value) {}  // NOLINT
  Jet(int nvars, int order, double value = 0.0);

  static Jet variable(double value, int index, int nvars, int order);

  int nvars() const { return n_; }
  int order() const { return order_; }
  double value() const { return c_[0]; }

  double d1(int i) const { return c_[1 + i]; }
  double d2(int i, int j) const { return c_[1 + n_ + i * n_ + j]; }
  double d3(int i, int j, int k) const {
    return c_[1 + n_ + n_ * n_ + (i * n_ + j) * n_ + k];
  }
  // Partial along a multi-index of length 0..3.
  double partial_value(const std::vector<int>& idx) const;

  double& value_ref() { return c_[0]; }
  void set_d1(int i, double v) { c_[1 + i] = v; }
  void set_d2(int i, int j, double v);
  void set_d3(int i, int j, int k, double v);

  const std::vector<double>& coeffs() const { return c_; }

  // d/dx_i; the result has order one less.
  Jet partial(int i) const;
  Jet truncated(int order) const;

  Jet& operator+=(const Jet& b);
  Jet& operator-=(const Jet& b);
  Jet& operator*=(double s);
  Jet operator-() const;

  // this += a * b, truncated to this->order().
  void add_product(const Jet& a, const Jet& b);
  void add_scaled(const Jet& a, double s);

  static std::size_t storage_size(int nvars, int order);

 private:
  friend Jet compose(const Jet& a, double f0, double f1, double f2, double f3);
  int n_;
  int order_;
  std::vector<double> c_;
};

Jet operator+(const Jet& a, const Jet& b);
Jet operator-(const Jet& a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator*(double s, const Jet& a);
Jet operator*(const Jet& a, double s);

// Univariate composition given f and its first three derivatives at value(a).
Jet compose(const Jet& a, double f0, double f1, double f2, double f3);

Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet pow(const Jet& a, double p);
Jet reciprocal(const Jet& a);

enum class ArithKind { add, sub, mul, div };
enum class ElementaryFn { exp, ln, sqrt, pow };

Jet jet_arithmetic(const Jet& a, const Jet& b, ArithKind kind);
Jet jet_elementary(const Jet& a, ElementaryFn fn, double exponent = 1.0);

// One jet per coordinate, unit gradient in its own slot.
std::vector<Jet> jet_seed(const std::vector<double>& point, int order);

class SingularJetMatrix : public std::runtime_error {
 public:
  SingularJetMatrix(const std::string& what, double cond)
      : std::runtime_error(what), condition(cond) {}
  double condition;
};

class JetMatrix {
 public:
  JetMatrix() : r_(0), c_(0) {}
  JetMatrix(int rows, int cols, int nvars, int order);

  static JetMatrix identity(int n, int nvars, int order);
  static JetMatrix constant(const Eigen::MatrixXd& m, int nvars, int order);

  int rows() const { return r_; }
  int cols() const { return c_; }
  int nvars() const;
  int order() const;

  Jet& operator()(int i, int j) { return e_[i * c_ + j]; }
  const Jet& operator()(int i, int j) const { return e_[i * c_ + j]; }

  Eigen::MatrixXd values() const;
  JetMatrix partial(int var) const;
  JetMatrix truncated(int order) const;
  JetMatrix transpose() const;
  JetMatrix block(int r0, int c0, int nr, int nc) const;
  void set_block(int r0, int c0, const JetMatrix& b);

  JetMatrix& operator+=(const JetMatrix& b);
  JetMatrix& operator-=(const JetMatrix& b);

 private:
  int r_, c_;
  std::vector<Jet> e_;
};

JetMatrix operator*(const JetMatrix& a, const JetMatrix& b);
JetMatrix operator+(const JetMatrix& a, const JetMatrix& b);
JetMatrix operator-(const JetMatrix& a, const JetMatrix& b);
JetMatrix operator*(double s, const JetMatrix& a);

// 1-norm condition number of the value part (inf if singular).
double value_condition(const JetMatrix& m);

// Gauss-Jordan with partial pivoting chosen on value parts.
JetMatrix jet_matrix_inverse(const JetMatrix& m);
Jet jet_matrix_det(const JetMatrix& m);

// Largest |coefficient| over all entries; used for residual reporting.
double max_abs_coeff(const JetMatrix& m);
double max_abs_value(const JetMatrix& m);

using ScalarField = std::function<double(const std::vector<double>&)>;

// Central difference along 1..3 directions with one Richardson step.
// h <= 0 picks a default step for the derivative order.
double fd_derivative(const ScalarField& f, const std::vector<double>& point,
                     const std::vector<int>& dirs, double h = 0.0);

}  // namespace bcurv
