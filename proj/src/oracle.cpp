#include "bcurv/oracle.hpp"

#include <cmath>

namespace bcurv {

JetArray3 holonomic_christoffels(const JetMatrix& g) {
  const int n = g.rows();
  if (g.order() < 1) throw std::invalid_argument("metric jet needs order >= 1");
  const int ord = g.order() - 1;
  JetMatrix gi = jet_matrix_inverse(g).truncated(ord);
  std::vector<JetMatrix> dg;
  for (int a = 0; a < n; ++a) dg.push_back(g.partial(a));

  JetArray3 first(n, n, n, Jet(g.nvars(), ord));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) first(a, b, c) = 0.5 * (dg[a](b, c) + dg[b](a, c) - dg[c](a, b));

  JetArray3 gam(n, n, n, Jet(g.nvars(), ord));
  for (int m = 0; m < n; ++m)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) gam(m, a, b).add_product(gi(m, c), first(a, b, c));
  return gam;
}

double holonomic_scalar_curvature(const JetMatrix& g) {
  if (g.order() < 2) throw std::invalid_argument("metric jet needs order >= 2");
  const int n = g.rows();
  JetArray3 G = holonomic_christoffels(g);
  Eigen::MatrixXd gi = g.values().inverse();
  auto Gv = [&](int m, int a, int b) { return G(m, a, b).value(); };
  auto dG = [&](int s, int m, int a, int b) { return G(m, a, b).d1(s); };

  double R = 0.0;
  for (int A = 0; A < n; ++A)
    for (int C = 0; C < n; ++C) {
      double ric = 0.0;
      for (int P = 0; P < n; ++P) {
        ric += dG(A, P, P, C) - dG(P, P, A, C);
        for (int D = 0; D < n; ++D) ric += Gv(D, P, C) * Gv(P, A, D) - Gv(D, A, C) * Gv(P, P, D);
      }
      R += gi(A, C) * ric;
    }
  return R;
}

double base_scalar_curvature(const ModelSpec& spec, const Eigen::VectorXd& Q) {
  std::vector<double> x(Q.data(), Q.data() + Q.size());
  return holonomic_scalar_curvature(spec.metric_P(jet_seed(x, 2)));
}

double product_scalar_curvature(const ModelSpec& spec, const EvalPoint& point) {
  const int nP = spec.nP, n = spec.nP + spec.nV;
  std::vector<double> x(point.Q.data(), point.Q.data() + nP);
  x.insert(x.end(), point.f.data(), point.f.data() + spec.nV);
  JetVec xs = jet_seed(x, 2);
  JetMatrix g(n, n, n, 2);
  g.set_block(0, 0, spec.metric_P(JetVec(xs.begin(), xs.begin() + nP)));
  g.set_block(nP, nP, JetMatrix::constant(spec.metric_V, n, 2));
  return holonomic_scalar_curvature(g);
}

double conformal_scalar_curvature(int dim, double alpha, double r2) {
  const double m = dim;
  return std::exp(-2.0 * alpha * r2) * (4.0 * alpha * m * (m - 1) + 4.0 * alpha * alpha * r2 * (m - 1) * (m - 2));
}

}  // namespace bcurv
