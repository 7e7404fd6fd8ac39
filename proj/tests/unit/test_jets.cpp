#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "../common/random_expr.hpp"
#include "bcurv/jet.hpp"

using namespace bcurv;

TEST_CASE("seed gives unit gradients") {
  auto s = jet_seed({2.0, 0.0}, 1);
  REQUIRE(s.size() == 2);
  CHECK(s[0].value() == 2.0);
  CHECK(s[1].value() == 0.0);
  CHECK(s[0].d1(0) == 1.0);
  CHECK(s[0].d1(1) == 0.0);
  CHECK(s[1].d1(1) == 1.0);
  CHECK_THROWS_AS(jet_seed({1.0}, 4), std::invalid_argument);
}

TEST_CASE("polynomial derivatives") {
  auto x = jet_seed({3.0}, 2)[0];
  Jet f = x * x;
  CHECK(f.value() == 9.0);
  CHECK(f.d1(0) == 6.0);
  CHECK(f.d2(0, 0) == 2.0);

  auto s = jet_seed({1.7, -0.4}, 2);
  Jet g = s[0] * s[1];
  CHECK(g.d2(0, 1) == 1.0);
  CHECK(g.d2(1, 0) == 1.0);
  CHECK(g.d2(0, 0) == 0.0);
}

TEST_CASE("arithmetic kinds") {
  auto x = jet_seed({3.0}, 1)[0];
  CHECK(jet_arithmetic(x, x, ArithKind::mul).d1(0) == 6.0);
  Jet one(1, 1, 1.0);
  auto y = jet_seed({2.0}, 1)[0];
  Jet q = jet_arithmetic(one, y, ArithKind::div);
  CHECK(q.value() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(q.d1(0) == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK_THROWS_AS(jet_arithmetic(one, Jet(1, 1, 0.0), ArithKind::div), std::domain_error);
  CHECK_THROWS_AS(jet_arithmetic(Jet(2, 1), Jet(3, 1), ArithKind::add), std::invalid_argument);
}

TEST_CASE("mul of random cubic matches central differences") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  double c[4][4];
  for (auto& row : c)
    for (double& v : row) v = u(rng);
  auto cubic = [&](auto x, auto y) {
    return (c[0][0] + c[0][1] * x + c[0][2] * x * x) * (c[1][0] + c[1][1] * y + c[1][2] * x * y) +
           c[2][3] * x * x * x;
  };
  std::vector<double> p = {0.3, -0.7};
  auto s = jet_seed(p, 3);
  Jet f = cubic(s[0], s[1]);
  ScalarField fd = [&](const std::vector<double>& q) { return cubic(q[0], q[1]); };
  for (int i = 0; i < 2; ++i) {
    double ref = fd_derivative(fd, p, {i});
    CHECK(std::abs(f.d1(i) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
  }
  // cubic has exact second differences; Richardson leaves only rounding
  double ref = fd_derivative(fd, p, {0, 1});
  CHECK(std::abs(f.d2(0, 1) - ref) <= 1e-9 * std::max(1.0, std::abs(ref)));
}

TEST_CASE("Leibniz convolution") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  const int n = 3;
  Jet a(n, 3), b(n, 3);
  a.value_ref() = u(rng);
  b.value_ref() = u(rng);
  for (int i = 0; i < n; ++i) {
    a.set_d1(i, u(rng));
    b.set_d1(i, u(rng));
    for (int j = i; j < n; ++j) {
      a.set_d2(i, j, u(rng));
      b.set_d2(i, j, u(rng));
      for (int k = j; k < n; ++k) {
        a.set_d3(i, j, k, u(rng));
        b.set_d3(i, j, k, u(rng));
      }
    }
  }
  Jet p = a * b;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double ref = a.d3(i, j, k) * b.value() + a.value() * b.d3(i, j, k) +
                     a.d2(i, j) * b.d1(k) + a.d2(i, k) * b.d1(j) + a.d2(j, k) * b.d1(i) +
                     a.d1(i) * b.d2(j, k) + a.d1(j) * b.d2(i, k) + a.d1(k) * b.d2(i, j);
        CHECK(std::abs(p.d3(i, j, k) - ref) <= 1e-13 * std::max(1.0, std::abs(ref)));
      }
}

TEST_CASE("elementary functions") {
  auto x = jet_seed({0.7}, 3)[0];
  Jet id = log(exp(x));
  CHECK(std::abs(id.value() - 0.7) < 1e-14);
  CHECK(std::abs(id.d1(0) - 1.0) < 1e-14);
  CHECK(std::abs(id.d2(0, 0)) < 1e-14);
  CHECK(std::abs(id.d3(0, 0, 0)) < 1e-14);

  auto z = jet_seed({0.0}, 2)[0];
  Jet e = exp(z);
  CHECK(e.value() == 1.0);
  CHECK(e.d1(0) == 1.0);
  CHECK(e.d2(0, 0) == 1.0);

  CHECK_THROWS_AS(log(Jet(1, 1, -1.0)), std::domain_error);
  CHECK_THROWS_AS(sqrt(Jet(1, 1, 0.0)), std::domain_error);

  auto s = jet_seed({2.0}, 3)[0];
  Jet r = pow(s, 1.5);
  CHECK(r.d1(0) == doctest::Approx(1.5 * std::sqrt(2.0)));
  CHECK(r.d3(0, 0, 0) == doctest::Approx(1.5 * 0.5 * -0.5 / (2.0 * std::sqrt(2.0))));
}

TEST_CASE("ln det of diagonal jet matrix") {
  auto s = jet_seed({1.3, 2.9}, 2);
  JetMatrix m(2, 2, 2, 2);
  m(0, 0) = s[0];
  m(1, 1) = s[1];
  Jet ld = log(jet_matrix_det(m));
  CHECK(ld.d1(0) == doctest::Approx(1 / 1.3).epsilon(1e-14));
  CHECK(ld.d1(1) == doctest::Approx(1 / 2.9).epsilon(1e-14));
}

TEST_CASE("jet matrix inverse") {
  JetMatrix I = JetMatrix::identity(3, 2, 2);
  JetMatrix Ii = jet_matrix_inverse(I);
  CHECK(max_abs_coeff(Ii - I) == 0.0);

  auto s = jet_seed({1.3, 2.9}, 2);
  JetMatrix d(2, 2, 2, 2);
  d(0, 0) = s[0];
  d(1, 1) = s[1];
  JetMatrix di = jet_matrix_inverse(d);
  CHECK(di(0, 0).value() == doctest::Approx(1 / 1.3));
  CHECK(di(0, 0).d1(0) == doctest::Approx(-1 / (1.3 * 1.3)));
  CHECK(di(1, 1).d2(1, 1) == doctest::Approx(2 / (2.9 * 2.9 * 2.9)));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  const int nv = 4;
  auto x = jet_seed({u(rng), u(rng), u(rng), u(rng)}, 3);
  JetMatrix m(3, 3, nv, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Jet e(nv, 3, (i == j ? 3.0 : 0.0) + u(rng));
      for (int k = 0; k < nv; ++k) e = e + u(rng) * x[k] * (k % 2 ? x[(k + i) % nv] : Jet(1.0));
      m(i, j) = exp(0.2 * e) + e;
    }
  JetMatrix mi = jet_matrix_inverse(m);
  CHECK(max_abs_coeff(m * mi - JetMatrix::identity(3, nv, 3)) < 1e-12);
  CHECK(max_abs_coeff(mi * m - JetMatrix::identity(3, nv, 3)) < 1e-11);

  JetMatrix sing(2, 2, 1, 1);
  sing(0, 0) = Jet(1, 1, 1.0);
  sing(0, 1) = Jet(1, 1, 2.0);
  sing(1, 0) = Jet(1, 1, 2.0);
  sing(1, 1) = Jet(1, 1, 4.0);
  CHECK_THROWS_AS(jet_matrix_inverse(sing), SingularJetMatrix);
}

namespace {

Jet cofactor(const JetMatrix& m) {
  const int k = m.rows();
  if (k == 1) return m(0, 0);
  Jet acc(m.nvars(), m.order());
  for (int r = 0; r < k; ++r) {
    JetMatrix minor(k - 1, k - 1, m.nvars(), m.order());
    for (int i = 0, mi = 0; i < k; ++i) {
      if (i == r) continue;
      for (int j = 1; j < k; ++j) minor(mi, j - 1) = m(i, j);
      ++mi;
    }
    Jet t = m(r, 0) * cofactor(minor);
    acc += (r % 2 ? -t : t);
  }
  return acc;
}

}  // namespace

TEST_CASE("jet determinant") {
  JetMatrix I = JetMatrix::identity(3, 2, 2);
  Jet d1 = jet_matrix_det(I);
  CHECK(d1.value() == 1.0);
  CHECK(d1.d1(0) == 0.0);
  CHECK(d1.d2(1, 1) == 0.0);

  auto s = jet_seed({1.3, 2.9}, 1);
  JetMatrix d(2, 2, 2, 1);
  d(0, 0) = s[0];
  d(1, 1) = s[1];
  Jet dd = jet_matrix_det(d);
  CHECK(dd.value() == doctest::Approx(1.3 * 2.9));
  CHECK(dd.d1(0) == doctest::Approx(2.9));
  CHECK(dd.d1(1) == doctest::Approx(1.3));

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  auto x = jet_seed({u(rng), u(rng), u(rng)}, 3);
  JetMatrix m(4, 4, 3, 3);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = u(rng) + u(rng) * x[(i + j) % 3] + u(rng) * x[i % 3] * x[j % 3];
  Jet a = jet_matrix_det(m), b = cofactor(m);
  for (std::size_t k = 0; k < a.coeffs().size(); ++k)
    CHECK(std::abs(a.coeffs()[k] - b.coeffs()[k]) <= 1e-12 * std::max(1.0, std::abs(b.coeffs()[k])));

  // zero value pivot still carries derivatives
  auto y = jet_seed({0.0, 0.0}, 2);
  JetMatrix z(2, 2, 2, 2);
  z(0, 0) = y[0];
  z(0, 1) = Jet(2, 2, 1.0);
  z(1, 0) = Jet(2, 2, 1.0);
  z(1, 1) = y[1];
  Jet dz = jet_matrix_det(z);
  CHECK(dz.value() == -1.0);
  CHECK(dz.d2(0, 1) == 1.0);
}

TEST_CASE("fd_derivative examples") {
  ScalarField sq = [](const std::vector<double>& x) { return x[0] * x[0]; };
  CHECK(std::abs(fd_derivative(sq, {3.0}, {0}) - 6.0) < 1e-9);
  ScalarField p = [](const std::vector<double>& x) { return x[0] * x[0] * x[0] * x[1]; };
  CHECK(std::abs(fd_derivative(p, {1.0, 2.0}, {0, 1}) - 3.0) < 1e-7);
  ScalarField bad = [](const std::vector<double>& x) { return x[0] > 1.0 ? NAN : x[0]; };
  CHECK_THROWS_AS(fd_derivative(bad, {1.0}, {0}), std::domain_error);
}

TEST_CASE("random composites against finite differences") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 3;
    auto e = testing::random_expr(rng, n, 6);
    std::vector<double> p(n);
    for (double& v : p) v = u(rng);
    Jet j = testing::eval_expr(e, jet_seed(p, 3));
    ScalarField f = [&](const std::vector<double>& q) { return testing::eval_expr(e, q); };
    for (int i = 0; i < n; ++i)
      for (int k = i; k < n; ++k)
        for (int l = k; l < n; ++l) {
          const double ref = fd_derivative(f, p, {i, k, l});
          worst = std::max(worst, std::abs(j.d3(i, k, l) - ref) / std::max(1.0, std::abs(j.d3(i, k, l))));
        }
  }
  CHECK(worst < 1e-6);
}
