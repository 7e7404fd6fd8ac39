#include "bcurv/jet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bcurv {

namespace {

void check_nvars(int n, int order) {
  if (order < 0 || order > kMaxJetOrder)
    throw std::invalid_argument("jet order out of range: " + std::to_string(order));
  if (n < 0 || n > kMaxJetVars)
    throw std::invalid_argument("jet nvars out of range: " + std::to_string(n));
}

// Shape of a binary result; constants (nvars 0) broadcast.
void result_shape(const Jet& a, const Jet& b, int& n, int& order) {
  if (a.nvars() == 0) {
    n = b.nvars();
    order = b.nvars() == 0 ? 0 : b.order();
    return;
  }
  if (b.nvars() == 0) {
    n = a.nvars();
    order = a.order();
    return;
  }
  if (a.nvars() != b.nvars())
    throw std::invalid_argument("jet shape mismatch: nvars " +
                                std::to_string(a.nvars()) + " vs " +
                                std::to_string(b.nvars()));
  n = a.nvars();
  order = std::min(a.order(), b.order());
}

}  // namespace

std::size_t Jet::storage_size(int n, int order) {
  std::size_t s = 1;
  if (order >= 1) s += n;
  if (order >= 2) s += static_cast<std::size_t>(n) * n;
  if (order >= 3) s += static_cast<std::size_t>(n) * n * n;
  return s;
}

Jet::Jet(int nvars, int order, double value) : n_(nvars), order_(order) {
  check_nvars(nvars, order);
  if (n_ == 0) order_ = 0;
  c_.assign(storage_size(n_, order_), 0.0);
  c_[0] = value;
}

Jet Jet::variable(double value, int index, int nvars, int order) {
  if (index < 0 || index >= nvars) throw std::invalid_argument("seed index out of range");
  Jet j(nvars, order, value);
  if (order >= 1) j.c_[1 + index] = 1.0;
  return j;
}

double Jet::partial_value(const std::vector<int>& idx) const {
  if (static_cast<int>(idx.size()) > order_) {
    if (n_ == 0) return idx.empty() ? c_[0] : 0.0;
    throw std::out_of_range("partial above jet order");
  }
  switch (idx.size()) {
    case 0: return c_[0];
    case 1: return d1(idx[0]);
    case 2: return d2(idx[0], idx[1]);
    default: return d3(idx[0], idx[1], idx[2]);
  }
}

void Jet::set_d2(int i, int j, double v) {
  c_[1 + n_ + i * n_ + j] = v;
  c_[1 + n_ + j * n_ + i] = v;
}

void Jet::set_d3(int i, int j, int k, double v) {
  const int o = 1 + n_ + n_ * n_;
  auto at = [&](int a, int b, int c) -> double& { return c_[o + (a * n_ + b) * n_ + c]; };
  at(i, j, k) = v;
  at(i, k, j) = v;
  at(j, i, k) = v;
  at(j, k, i) = v;
  at(k, i, j) = v;
  at(k, j, i) = v;
}

Jet Jet::partial(int i) const {
  if (n_ == 0) return Jet(0.0);
  if (order_ < 1) throw std::domain_error("partial of an order-0 jet");
  Jet r(n_, order_ - 1, d1(i));
  if (order_ >= 2)
    for (int j = 0; j < n_; ++j) r.c_[1 + j] = d2(i, j);
  if (order_ >= 3)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) r.c_[1 + n_ + j * n_ + k] = d3(i, j, k);
  return r;
}

Jet Jet::truncated(int order) const {
  if (order >= order_ || n_ == 0) return *this;
  Jet r(n_, order);
  std::copy(c_.begin(), c_.begin() + r.c_.size(), r.c_.begin());
  return r;
}

Jet& Jet::operator+=(const Jet& b) {
  add_scaled(b, 1.0);
  return *this;
}

Jet& Jet::operator-=(const Jet& b) {
  add_scaled(b, -1.0);
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& x : c_) x *= s;
  return *this;
}

Jet Jet::operator-() const {
  Jet r = *this;
  r *= -1.0;
  return r;
}

void Jet::add_scaled(const Jet& a, double s) {
  if (a.n_ == 0) {
    c_[0] += s * a.c_[0];
    return;
  }
  if (n_ == 0) {
    double v = c_[0];
    *this = Jet(a.n_, a.order_, v);
  }
  if (n_ != a.n_) throw std::invalid_argument("jet shape mismatch in add");
  if (a.order_ < order_) *this = truncated(a.order_);
  const std::size_t m = c_.size();
  for (std::size_t k = 0; k < m; ++k) c_[k] += s * a.c_[k];
}

void Jet::add_product(const Jet& a, const Jet& b) {
  int n, ord;
  result_shape(a, b, n, ord);
  if (n_ == 0 && n > 0) *this = Jet(n, ord, c_[0]);
  if (n != 0 && n_ != n) throw std::invalid_argument("jet shape mismatch in product");
  if (n > 0 && ord < order_) *this = truncated(ord);
  ord = order_;
  if (a.n_ == 0 || b.n_ == 0) {
    const Jet& v = a.n_ == 0 ? b : a;
    const double s = a.n_ == 0 ? a.c_[0] : b.c_[0];
    if (v.n_ == 0) {
      c_[0] += s * v.c_[0];
      return;
    }
    const std::size_t m = c_.size();
    for (std::size_t k = 0; k < m; ++k) c_[k] += s * v.c_[k];
    return;
  }
  const double* A = a.c_.data();
  const double* B = b.c_.data();
  double* R = c_.data();
  const double a0 = A[0], b0 = B[0];
  R[0] += a0 * b0;
  if (ord < 1) return;
  const double* a1 = A + 1;
  const double* b1 = B + 1;
  for (int i = 0; i < n; ++i) R[1 + i] += a1[i] * b0 + a0 * b1[i];
  if (ord < 2) return;
  const double* a2 = A + 1 + n;
  const double* b2 = B + 1 + n;
  double* r2 = R + 1 + n;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = a2[i * n + j] * b0 + a1[i] * b1[j] + a1[j] * b1[i] + a0 * b2[i * n + j];
      r2[i * n + j] += v;
      if (i != j) r2[j * n + i] += v;
    }
  if (ord < 3) return;
  const double* a3 = A + 1 + n + n * n;
  const double* b3 = B + 1 + n + n * n;
  double* r3 = R + 1 + n + n * n;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k) {
        const int ijk = (i * n + j) * n + k;
        const double v = a3[ijk] * b0 + a0 * b3[ijk] +
                         a2[i * n + j] * b1[k] + a2[i * n + k] * b1[j] + a2[j * n + k] * b1[i] +
                         a1[i] * b2[j * n + k] + a1[j] * b2[i * n + k] + a1[k] * b2[i * n + j];
        r3[ijk] += v;
        if (i == j && j == k) continue;
        if (i == j || j == k) {
          // two distinct permutations besides ijk
          if (i == j) {
            r3[(i * n + k) * n + j] += v;
            r3[(k * n + i) * n + j] += v;
          } else {
            r3[(j * n + i) * n + k] += v;
            r3[(j * n + k) * n + i] += v;
          }
          continue;
        }
        r3[(i * n + k) * n + j] += v;
        r3[(j * n + i) * n + k] += v;
        r3[(j * n + k) * n + i] += v;
        r3[(k * n + i) * n + j] += v;
        r3[(k * n + j) * n + i] += v;
      }
}

Jet operator+(const Jet& a, const Jet& b) {
  if (a.nvars() == 0 && b.nvars() != 0) {
    Jet r = b;
    r += a;
    return r;
  }
  Jet r = a;
  r += b;
  return r;
}

Jet operator-(const Jet& a, const Jet& b) {
  if (a.nvars() == 0 && b.nvars() != 0) {
    Jet r = -b;
    r += a;
    return r;
  }
  Jet r = a;
  r -= b;
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  int n, ord;
  result_shape(a, b, n, ord);
  Jet r = n == 0 ? Jet(0.0) : Jet(n, ord);
  r.add_product(a, b);
  return r;
}

Jet operator*(double s, const Jet& a) {
  Jet r = a;
  r *= s;
  return r;
}

Jet operator*(const Jet& a, double s) { return s * a; }

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet compose(const Jet& a, double f0, double f1, double f2, double f3) {
  if (a.n_ == 0) return Jet(f0);
  const int n = a.n_, ord = a.order_;
  Jet r(n, ord, f0);
  if (ord < 1) return r;
  const double* a1 = a.c_.data() + 1;
  for (int i = 0; i < n; ++i) r.c_[1 + i] = f1 * a1[i];
  if (ord < 2) return r;
  const double* a2 = a1 + n;
  double* r2 = r.c_.data() + 1 + n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r2[i * n + j] = f1 * a2[i * n + j] + f2 * a1[i] * a1[j];
  if (ord < 3) return r;
  const double* a3 = a2 + n * n;
  double* r3 = r2 + n * n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const int ijk = (i * n + j) * n + k;
        r3[ijk] = f1 * a3[ijk] +
                  f2 * (a1[i] * a2[j * n + k] + a1[j] * a2[i * n + k] + a1[k] * a2[i * n + j]) +
                  f3 * a1[i] * a1[j] * a1[k];
      }
  return r;
}

Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  return compose(a, e, e, e, e);
}

Jet log(const Jet& a) {
  const double x = a.value();
  if (!(x > 0.0)) throw std::domain_error("ln of non-positive jet");
  return compose(a, std::log(x), 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x));
}

Jet sqrt(const Jet& a) {
  const double x = a.value();
  if (!(x > 0.0)) throw std::domain_error("sqrt of non-positive jet");
  const double s = std::sqrt(x);
  return compose(a, s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x));
}

Jet pow(const Jet& a, double p) {
  const double x = a.value();
  if (!(x > 0.0) && std::floor(p) != p) throw std::domain_error("pow of non-positive jet");
  if (x == 0.0) throw std::domain_error("pow of zero-valued jet");
  const double f0 = std::pow(x, p);
  return compose(a, f0, p * f0 / x, p * (p - 1) * f0 / (x * x),
                 p * (p - 1) * (p - 2) * f0 / (x * x * x));
}

Jet reciprocal(const Jet& a) {
  const double x = a.value();
  if (x == 0.0) throw std::domain_error("division by zero-valued jet");
  const double r = 1.0 / x;
  return compose(a, r, -r * r, 2 * r * r * r, -6 * r * r * r * r);
}

Jet jet_arithmetic(const Jet& a, const Jet& b, ArithKind kind) {
  if (a.nvars() != 0 && b.nvars() != 0 && a.nvars() != b.nvars())
    throw std::invalid_argument("jet shape mismatch");
  switch (kind) {
    case ArithKind::add: return a + b;
    case ArithKind::sub: return a - b;
    case ArithKind::mul: return a * b;
    case ArithKind::div: return a / b;
  }
  throw std::invalid_argument("unknown arithmetic kind");
}

Jet jet_elementary(const Jet& a, ElementaryFn fn, double exponent) {
  switch (fn) {
    case ElementaryFn::exp: return exp(a);
    case ElementaryFn::ln: return log(a);
    case ElementaryFn::sqrt: return sqrt(a);
    case ElementaryFn::pow: return pow(a, exponent);
  }
  throw std::invalid_argument("unknown elementary function");
}

std::vector<Jet> jet_seed(const std::vector<double>& point, int order) {
  if (order < 0 || order > kMaxJetOrder) throw std::invalid_argument("seed order out of range");
  const int n = static_cast<int>(point.size());
  for (double x : point)
    if (!std::isfinite(x)) throw std::invalid_argument("seed point not finite");
  std::vector<Jet> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(Jet::variable(point[i], i, n, order));
  return out;
}

// ---- matrices ----

JetMatrix::JetMatrix(int rows, int cols, int nvars, int order)
    : r_(rows), c_(cols), e_(static_cast<std::size_t>(rows) * cols, Jet(nvars, order)) {}

JetMatrix JetMatrix::identity(int n, int nvars, int order) {
  JetMatrix m(n, n, nvars, order);
  for (int i = 0; i < n; ++i) m(i, i).value_ref() = 1.0;
  return m;
}

JetMatrix JetMatrix::constant(const Eigen::MatrixXd& v, int nvars, int order) {
  JetMatrix m(static_cast<int>(v.rows()), static_cast<int>(v.cols()), nvars, order);
  for (int i = 0; i < m.r_; ++i)
    for (int j = 0; j < m.c_; ++j) m(i, j).value_ref() = v(i, j);
  return m;
}

int JetMatrix::nvars() const {
  for (const Jet& j : e_)
    if (j.nvars() > 0) return j.nvars();
  return 0;
}

int JetMatrix::order() const {
  int o = kMaxJetOrder;
  bool any = false;
  for (const Jet& j : e_)
    if (j.nvars() > 0) {
      o = std::min(o, j.order());
      any = true;
    }
  return any ? o : 0;
}

Eigen::MatrixXd JetMatrix::values() const {
  Eigen::MatrixXd v(r_, c_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) v(i, j) = (*this)(i, j).value();
  return v;
}

JetMatrix JetMatrix::partial(int var) const {
  JetMatrix m = *this;
  for (Jet& j : m.e_) j = j.partial(var);
  return m;
}

JetMatrix JetMatrix::truncated(int order) const {
  JetMatrix m = *this;
  for (Jet& j : m.e_) j = j.truncated(order);
  return m;
}

JetMatrix JetMatrix::transpose() const {
  JetMatrix t;
  t.r_ = c_;
  t.c_ = r_;
  t.e_.resize(e_.size());
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

JetMatrix JetMatrix::block(int r0, int c0, int nr, int nc) const {
  if (r0 < 0 || c0 < 0 || r0 + nr > r_ || c0 + nc > c_) throw std::out_of_range("jet block");
  JetMatrix b;
  b.r_ = nr;
  b.c_ = nc;
  b.e_.reserve(static_cast<std::size_t>(nr) * nc);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) b.e_.push_back((*this)(r0 + i, c0 + j));
  return b;
}

void JetMatrix::set_block(int r0, int c0, const JetMatrix& b) {
  if (r0 + b.r_ > r_ || c0 + b.c_ > c_) throw std::out_of_range("jet set_block");
  for (int i = 0; i < b.r_; ++i)
    for (int j = 0; j < b.c_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

JetMatrix& JetMatrix::operator+=(const JetMatrix& b) {
  if (r_ != b.r_ || c_ != b.c_) throw std::invalid_argument("jet matrix shape mismatch");
  for (std::size_t k = 0; k < e_.size(); ++k) e_[k] += b.e_[k];
  return *this;
}

JetMatrix& JetMatrix::operator-=(const JetMatrix& b) {
  if (r_ != b.r_ || c_ != b.c_) throw std::invalid_argument("jet matrix shape mismatch");
  for (std::size_t k = 0; k < e_.size(); ++k) e_[k] -= b.e_[k];
  return *this;
}

JetMatrix operator*(const JetMatrix& a, const JetMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("jet matrix product shape mismatch");
  int n = std::max(a.nvars(), b.nvars());
  int ord = kMaxJetOrder;
  if (a.nvars() > 0) ord = std::min(ord, a.order());
  if (b.nvars() > 0) ord = std::min(ord, b.order());
  if (n == 0) ord = 0;
  JetMatrix r(a.rows(), b.cols(), n, ord);
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const Jet& aik = a(i, k);
      for (int j = 0; j < b.cols(); ++j) r(i, j).add_product(aik, b(k, j));
    }
  return r;
}

JetMatrix operator+(const JetMatrix& a, const JetMatrix& b) {
  JetMatrix r = a;
  r += b;
  return r;
}

JetMatrix operator-(const JetMatrix& a, const JetMatrix& b) {
  JetMatrix r = a;
  r -= b;
  return r;
}

JetMatrix operator*(double s, const JetMatrix& a) {
  JetMatrix r = a;
  for (int i = 0; i < r.rows(); ++i)
    for (int j = 0; j < r.cols(); ++j) r(i, j) *= s;
  return r;
}

double value_condition(const JetMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("condition of non-square matrix");
  const Eigen::MatrixXd v = m.values();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(v);
  if (!lu.isInvertible()) return std::numeric_limits<double>::infinity();
  const Eigen::MatrixXd vi = lu.inverse();
  const double n1 = v.cwiseAbs().colwise().sum().maxCoeff();
  const double ni = vi.cwiseAbs().colwise().sum().maxCoeff();
  return n1 * ni;
}

JetMatrix jet_matrix_inverse(const JetMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse of non-square jet matrix");
  const int n = m.rows();
  const double cond = value_condition(m);
  if (!std::isfinite(cond) || cond > 1e15)
    throw SingularJetMatrix("value part singular (condition " + std::to_string(cond) + ")", cond);
  JetMatrix a = m;
  const int nv = m.nvars();
  JetMatrix inv = JetMatrix::identity(n, nv, nv == 0 ? 0 : m.order());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(a(col, col).value());
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col).value()) > best) {
        best = std::abs(a(r, col).value());
        piv = r;
      }
    if (best == 0.0) throw SingularJetMatrix("zero pivot", cond);
    if (piv != col)
      for (int j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    const Jet rp = reciprocal(a(col, col));
    for (int j = 0; j < n; ++j) {
      a(col, j) = a(col, j) * rp;
      inv(col, j) = inv(col, j) * rp;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Jet f = a(r, col);
      if (f.value() == 0.0 && f.nvars() > 0) {
        bool allzero = true;
        for (double c : f.coeffs())
          if (c != 0.0) {
            allzero = false;
            break;
          }
        if (allzero) continue;
      }
      const Jet nf = -f;
      for (int j = 0; j < n; ++j) {
        a(r, j).add_product(nf, a(col, j));
        inv(r, j).add_product(nf, inv(col, j));
      }
    }
  }
  return inv;
}

namespace {

// Laplace expansion; only used when a value pivot is exactly zero.
Jet cofactor_det(const JetMatrix& m) {
  const int k = m.rows();
  if (k == 1) return m(0, 0);
  const int nv = m.nvars();
  Jet acc = nv == 0 ? Jet(0.0) : Jet(nv, m.order());
  for (int r = 0; r < k; ++r) {
    JetMatrix minor(k - 1, k - 1, nv, nv == 0 ? 0 : m.order());
    for (int i = 0, mi = 0; i < k; ++i) {
      if (i == r) continue;
      for (int j = 1; j < k; ++j) minor(mi, j - 1) = m(i, j);
      ++mi;
    }
    Jet term = m(r, 0) * cofactor_det(minor);
    if (r % 2) term = -term;
    acc += term;
  }
  return acc;
}

}  // namespace

Jet jet_matrix_det(const JetMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("det of non-square jet matrix");
  const int n = m.rows();
  const int nv = m.nvars();
  if (n == 0) return Jet(1.0);
  JetMatrix a = m;
  Jet det = nv == 0 ? Jet(1.0) : Jet(nv, m.order(), 1.0);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(a(col, col).value());
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col).value()) > best) {
        best = std::abs(a(r, col).value());
        piv = r;
      }
    if (best == 0.0) return cofactor_det(m);
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      det = -det;
    }
    det = det * a(col, col);
    const Jet rp = reciprocal(a(col, col));
    for (int r = col + 1; r < n; ++r) {
      const Jet f = -(a(r, col) * rp);
      for (int j = col; j < n; ++j) a(r, j).add_product(f, a(col, j));
    }
  }
  return det;
}

double max_abs_coeff(const JetMatrix& m) {
  double mx = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      for (double c : m(i, j).coeffs()) mx = std::max(mx, std::abs(c));
  return mx;
}

double max_abs_value(const JetMatrix& m) {
  double mx = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) mx = std::max(mx, std::abs(m(i, j).value()));
  return mx;
}

namespace {

double central(const ScalarField& f, const std::vector<double>& x, const std::vector<int>& dirs,
               double h) {
  const int k = static_cast<int>(dirs.size());
  double acc = 0.0;
  std::vector<double> y(x);
  for (int mask = 0; mask < (1 << k); ++mask) {
    y = x;
    int neg = 0;
    for (int t = 0; t < k; ++t) {
      if (mask & (1 << t)) {
        y[dirs[t]] -= h;
        ++neg;
      } else {
        y[dirs[t]] += h;
      }
    }
    const double v = f(y);
    if (!std::isfinite(v)) throw std::domain_error("non-finite sample in fd_derivative");
    acc += (neg % 2 ? -v : v);
  }
  return acc / std::pow(2.0 * h, k);
}

}  // namespace

double fd_derivative(const ScalarField& f, const std::vector<double>& point,
                     const std::vector<int>& dirs, double h) {
  if (dirs.empty()) return f(point);
  if (dirs.size() > 3) throw std::invalid_argument("fd_derivative supports up to 3 directions");
  for (int d : dirs)
    if (d < 0 || d >= static_cast<int>(point.size()))
      throw std::invalid_argument("fd_derivative direction out of range");
  auto richardson = [&](double step) {
    const double coarse = central(f, point, dirs, step);
    const double fine = central(f, point, dirs, step / 2);
    return (4.0 * fine - coarse) / 3.0;
  };
  if (h > 0.0) return richardson(h);

  // Default: halving ladder, keep the estimate whose neighbour agrees best.
  // Large steps lose to truncation, small ones to rounding.
  static const double kStart[4] = {0.0, 4e-3, 8e-3, 1.6e-2};
  constexpr int kRungs = 5;
  double est[kRungs];
  double step = kStart[dirs.size()];
  for (int i = 0; i < kRungs; ++i, step /= 2) est[i] = richardson(step);
  int best = 1;
  double gap = std::abs(est[1] - est[0]);
  for (int i = 2; i < kRungs; ++i) {
    const double g = std::abs(est[i] - est[i - 1]);
    if (g < gap) {
      gap = g;
      best = i;
    }
  }
  return est[best];
}

}  // namespace bcurv
