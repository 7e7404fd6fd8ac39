#include "bcurv/curvature.hpp"

#include <cmath>

#include "bcurv/oracle.hpp"

namespace bcurv {

namespace {

std::vector<Eigen::MatrixXd> partial_values(const JetMatrix& m, int n) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(m.partial(i).values());
  return out;
}

std::vector<Eigen::MatrixXd> F_values(const FrameState& fs) {
  std::vector<Eigen::MatrixXd> out;
  for (const JetMatrix& F : fs.F) out.push_back(F.values());
  return out;
}

}  // namespace

NonholonomicStructure nonholonomic_structure(const FrameState& fs) {
  const int nP = fs.nP, nG = fs.nG, n = fs.n;
  NonholonomicStructure C;
  C.nP = nP;
  C.nV = fs.nV;
  C.nG = nG;
  C.frame = Tensor3(n, n, n);
  C.group = Tensor3(nG, n, n);

  Eigen::MatrixXd K = fs.K.values(), L = fs.lambda.values(), N = fs.N.values();
  auto dK = partial_values(fs.K, n);       // dK[R](X, g) = d_R K^X_g
  auto dL = partial_values(fs.lambda, n);  // dL[D](a, R) = d_D Lambda^a_R
  auto F = F_values(fs);

  for (int A = 0; A < nP; ++A)
    for (int B = 0; B < nP; ++B) {
      // C^T_AB = (Lambda^g_A N^R_B - Lambda^g_B N^R_A) K^T_{g,R}
      for (int T = 0; T < nP; ++T) {
        double v = 0.0;
        for (int g = 0; g < nG; ++g)
          for (int R = 0; R < nP; ++R) v += (L(g, A) * N(R, B) - L(g, B) * N(R, A)) * dK[R](T, g);
        C.frame(T, A, B) = v;
      }
      // C^p_AB = -N^D_A N^R_B (Lambda^a_{R,D} - Lambda^a_{D,R}) K^p_a - c^s_{ab} Lambda^b_A Lambda^a_B K^p_s
      for (int p = nP; p < n; ++p) {
        double v = 0.0;
        for (int a = 0; a < nG; ++a)
          for (int D = 0; D < nP; ++D)
            for (int R = 0; R < nP; ++R) v -= N(D, A) * N(R, B) * (dL[D](a, R) - dL[R](a, D)) * K(p, a);
        for (int s = 0; s < nG; ++s)
          for (int a = 0; a < nG; ++a)
            for (int b = 0; b < nG; ++b) v -= fs.c(s, a, b) * L(b, A) * L(a, B) * K(p, s);
        C.frame(p, A, B) = v;
      }
    }
  // C^q_Ap = (J_a)^q_p Lambda^a_A = -C^q_pA
  for (int A = 0; A < nP; ++A)
    for (int p = nP; p < n; ++p)
      for (int q = nP; q < n; ++q) {
        double v = 0.0;
        for (int a = 0; a < nG; ++a) v += dK[p](q, a) * L(a, A);
        C.frame(q, A, p) = v;
        C.frame(q, p, A) = -v;
      }
  // C^a_XY = -N^S_X N^T_Y F^a_ST
  for (int a = 0; a < nG; ++a) {
    Eigen::MatrixXd G = -N.transpose() * F[a] * N;
    for (int X = 0; X < n; ++X)
      for (int Y = 0; Y < n; ++Y) C.group(a, X, Y) = G(X, Y);
  }
  return C;
}

ChristoffelTable horizontal_christoffels(const FrameState& fs) {
  if (fs.order < 2) throw std::invalid_argument("Christoffel symbols need a frame of order >= 2");
  const int n = fs.n;
  const int ord = fs.order - 1;
  ChristoffelTable t;
  t.n = n;
  t.nG = fs.nG;

  std::vector<JetMatrix> dg;
  for (int a = 0; a < n; ++a) dg.push_back(fs.GH.partial(a));
  t.lowered = JetArray3(n, n, n, Jet(n, ord));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) t.lowered(a, b, c) = 0.5 * (dg[a](b, c) + dg[b](a, c) - dg[c](a, b));

  // h and the lowered symbols are cut to order 1 before the product.
  JetMatrix h1 = fs.h.truncated(1);
  t.raised = JetArray3(n, n, n, Jet(n, 1));
  for (int m = 0; m < n; ++m)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) t.raised(m, a, b).add_product(h1(m, c), t.lowered(a, b, c).truncated(1));
  return t;
}

Tensor3 group_christoffels(const Eigen::MatrixXd& d, const std::vector<double>& structure, int nG) {
  auto c = [&](int g, int a, int b) { return structure[(g * nG + a) * nG + b]; };
  Eigen::MatrixXd di = d.inverse();
  // Gamma^a_{bg} = 1/2 d^{am} (c^e_{bg} d_em + c^e_{mg} d_eb + c^e_{mb} d_eg)
  Tensor3 G(nG, nG, nG);
  for (int a = 0; a < nG; ++a)
    for (int b = 0; b < nG; ++b)
      for (int g = 0; g < nG; ++g) {
        double v = 0.0;
        for (int m = 0; m < nG; ++m)
          for (int e = 0; e < nG; ++e)
            v += di(a, m) * (c(e, b, g) * d(e, m) + c(e, m, g) * d(e, b) + c(e, m, b) * d(e, g));
        G(a, b, g) = 0.5 * v;
      }
  return G;
}

Tensor3 covariant_D_d(const FrameState& fs) {
  const int n = fs.n, nG = fs.nG;
  Eigen::MatrixXd d = fs.d.values(), A = fs.conn.values();
  auto dd = partial_values(fs.d, n);
  Tensor3 D(nG, nG, n);
  for (int E = 0; E < n; ++E)
    for (int a = 0; a < nG; ++a)
      for (int b = 0; b < nG; ++b) {
        double v = dd[E](a, b);
        for (int s = 0; s < nG; ++s)
          for (int m = 0; m < nG; ++m) v -= A(m, E) * (fs.c(s, m, a) * d(s, b) + fs.c(s, m, b) * d(s, a));
        D(a, b, E) = v;
      }
  return D;
}

Tensor3 horizontal_D_d(const FrameState& fs, const Tensor3& Dd) {
  const int n = fs.n, nG = fs.nG;
  Eigen::MatrixXd N = fs.N.values();
  Tensor3 H(nG, nG, n);
  for (int a = 0; a < nG; ++a)
    for (int b = 0; b < nG; ++b)
      for (int C = 0; C < n; ++C) {
        double v = 0.0;
        for (int E = 0; E < n; ++E) v += N(E, C) * Dd(a, b, E);
        H(a, b, C) = v;
      }
  return H;
}

void group_sector_christoffels(const FrameState& fs, const NonholonomicStructure& C, const Tensor3& Dd,
                               ChristoffelTable& t) {
  const int n = fs.n, nG = fs.nG;
  Eigen::MatrixXd N = fs.N.values(), h = fs.h.values(), d = fs.d.values(), di = fs.d_inv.values();
  auto F = F_values(fs);
  Tensor3 H = horizontal_D_d(fs, Dd);

  t.hh_h = Tensor3(n, n, n);
  for (int D = 0; D < n; ++D)
    for (int A = 0; A < n; ++A)
      for (int B = 0; B < n; ++B) {
        double v = 0.0;
        for (int E = 0; E < n; ++E) v += N(E, A) * t.raised(D, B, E).value();
        t.hh_h(D, A, B) = v;
      }

  // (h F^s N)^D_A contracted with d_{mu s}
  t.hg_h = Tensor3(n, n, nG);
  for (int s = 0; s < nG; ++s) {
    Eigen::MatrixXd hFN = h * F[s].transpose() * N;  // [D][A] = h^{DR} F^s_{SR} N^S_A
    for (int D = 0; D < n; ++D)
      for (int A = 0; A < n; ++A)
        for (int mu = 0; mu < nG; ++mu) t.hg_h(D, A, mu) += 0.5 * hFN(D, A) * d(mu, s);
  }

  t.hh_g = Tensor3(nG, n, n);
  for (std::size_t i = 0; i < C.group.v.size(); ++i) t.hh_g.v[i] = 0.5 * C.group.v[i];

  t.hg_g = Tensor3(nG, n, nG);
  t.gg_h = Tensor3(n, nG, nG);
  for (int A = 0; A < n; ++A)
    for (int mu = 0; mu < nG; ++mu)
      for (int e = 0; e < nG; ++e) {
        double v = 0.0;
        for (int nu = 0; nu < nG; ++nu) v += di(e, nu) * H(mu, nu, A);
        t.hg_g(e, A, mu) = 0.5 * v;
      }
  for (int D = 0; D < n; ++D)
    for (int mu = 0; mu < nG; ++mu)
      for (int nu = 0; nu < nG; ++nu) {
        double v = 0.0;
        for (int Cc = 0; Cc < n; ++Cc) v += h(D, Cc) * H(mu, nu, Cc);
        t.gg_h(D, mu, nu) = -0.5 * v;
      }
  t.group = group_christoffels(d, fs.structure, nG);
}

Tensor3 gg_h_first_representation(const FrameState& fs, const Tensor3& Dd) {
  const int nP = fs.nP, n = fs.n, nG = fs.nG;
  Eigen::MatrixXd Gi = fs.G_inv.values(), N = fs.N.values();
  Tensor3 H = horizontal_D_d(fs, Dd);
  Tensor3 out(nP, nG, nG);
  for (int D = 0; D < nP; ++D)
    for (int mu = 0; mu < nG; ++mu)
      for (int nu = 0; nu < nG; ++nu) {
        double v = 0.0;
        for (int F = 0; F < nP; ++F)
          for (int Cc = 0; Cc < n; ++Cc) v += Gi(D, F) * N(Cc, F) * H(mu, nu, Cc);
        out(D, mu, nu) = -0.5 * v;
      }
  return out;
}

double horizontal_scalar_curvature(const FrameState& fs, const ChristoffelTable& t) {
  const int n = fs.n;
  Eigen::MatrixXd N = fs.N.values(), h = fs.h.values();
  Tensor3 G = values(t.raised);
  // R_{SEC}^M = d_S G^M_CE - d_E G^M_CS + G^K_CE G^M_KS - G^P_CS G^M_PE;  Ric_SC = N^E_M R_{SEC}^M
  double hR = 0.0;
  for (int S = 0; S < n; ++S)
    for (int Cc = 0; Cc < n; ++Cc) {
      if (h(S, Cc) == 0.0) continue;
      double ric = 0.0;
      for (int E = 0; E < n; ++E)
        for (int M = 0; M < n; ++M) {
          if (N(E, M) == 0.0) continue;
          double r = t.raised(M, Cc, E).d1(S) - t.raised(M, Cc, S).d1(E);
          for (int K = 0; K < n; ++K) r += G(K, Cc, E) * G(M, K, S) - G(K, Cc, S) * G(M, K, E);
          ric += N(E, M) * r;
        }
      hR += h(S, Cc) * ric;
    }
  return hR;
}

GroupCurvature group_curvature(const Eigen::MatrixXd& d, const std::vector<double>& structure, int nG) {
  auto c = [&](int g, int a, int b) { return structure[(g * nG + a) * nG + b]; };
  Eigen::MatrixXd di = d.inverse();
  GroupCurvature gc;
  for (int m = 0; m < nG; ++m)
    for (int nu = 0; nu < nG; ++nu)
      for (int s = 0; s < nG; ++s)
        for (int a = 0; a < nG; ++a) gc.closed_form += 0.5 * di(m, nu) * c(s, m, a) * c(a, nu, s);
  for (int m = 0; m < nG; ++m)
    for (int s = 0; s < nG; ++s)
      for (int a = 0; a < nG; ++a)
        for (int b = 0; b < nG; ++b)
          for (int e = 0; e < nG; ++e)
            for (int nu = 0; nu < nG; ++nu)
              gc.closed_form += 0.25 * d(m, s) * di(a, b) * di(e, nu) * c(m, e, a) * c(s, nu, b);

  // R_ab = G^m_{nb} G^n_{am} - G^m_{ab} G^n_{nm} - c^m_{an} G^n_{mb}
  Tensor3 G = group_christoffels(d, structure, nG);
  gc.ricci = Eigen::MatrixXd::Zero(nG, nG);
  for (int a = 0; a < nG; ++a)
    for (int b = 0; b < nG; ++b) {
      double v = 0.0;
      for (int m = 0; m < nG; ++m)
        for (int nu = 0; nu < nG; ++nu)
          v += G(m, nu, b) * G(nu, a, m) - G(m, a, b) * G(nu, nu, m) - c(m, a, nu) * G(nu, m, b);
      gc.ricci(a, b) = v;
    }
  gc.contracted = (di.array() * gc.ricci.array()).sum();
  return gc;
}

GroupCurvature group_curvature(const FrameState& fs) { return group_curvature(fs.d.values(), fs.structure, fs.nG); }

double f_squared(const FrameState& fs) {
  Eigen::MatrixXd h = fs.h.values(), d = fs.d.values();
  auto F = F_values(fs);
  double s = 0.0;
  for (int m = 0; m < fs.nG; ++m) {
    Eigen::MatrixXd hFh = h.transpose() * F[m] * h;
    for (int nu = 0; nu < fs.nG; ++nu) s += d(m, nu) * (hFh.array() * F[nu].array()).sum();
  }
  return s;
}

double j_norm_squared(const FrameState& fs, const Tensor3& Dd) {
  const int n = fs.n, nG = fs.nG;
  Eigen::MatrixXd h = fs.h.values(), di = fs.d_inv.values();
  std::vector<Eigen::MatrixXd> M(n, Eigen::MatrixXd(nG, nG));
  for (int E = 0; E < n; ++E)
    for (int a = 0; a < nG; ++a)
      for (int b = 0; b < nG; ++b) M[E](a, b) = Dd(a, b, E);
  double s = 0.0;
  for (int A = 0; A < n; ++A)
    for (int B = 0; B < n; ++B)
      if (h(A, B) != 0.0) s += h(A, B) * (di * M[A] * di * M[B].transpose()).trace();
  return 0.25 * s;
}

double laplacian_sigma(const FrameState& fs, const ChristoffelTable& t) {
  const int n = fs.n;
  Eigen::MatrixXd h = fs.h.values();
  double s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      s += h(a, b) * fs.sigma.d2(a, b);
      for (int m = 0; m < n; ++m) s -= h(b, m) * t.raised(a, b, m).value() * fs.sigma.d1(a);
    }
  return s;
}

double quad_form_sigma(const FrameState& fs) {
  const int n = fs.n;
  Eigen::VectorXd g(n);
  for (int i = 0; i < n; ++i) g(i) = fs.sigma.d1(i);
  return g.dot(fs.h.values() * g);
}

double CurvatureReport::term_scale() const {
  return 1.0 + std::abs(hR) + std::abs(RG) + 0.25 * std::abs(F2) + std::abs(j2) +
         std::abs(lap_sigma) + 0.25 * std::abs(quad_sigma);
}

PointEvaluation evaluate_point(const ModelSpec& spec, const EvalPoint& point, int order) {
  if (order < 2) throw std::invalid_argument("curvature needs order >= 2");
  PointEvaluation ev;
  ev.frame = build_frame(spec, point, order);
  const FrameState& fs = ev.frame;
  ev.C = nonholonomic_structure(fs);
  ev.Dd = covariant_D_d(fs);
  ev.table = horizontal_christoffels(fs);
  group_sector_christoffels(fs, ev.C, ev.Dd, ev.table);

  CurvatureReport& r = ev.report;
  r.hR = horizontal_scalar_curvature(fs, ev.table);
  r.RG = group_curvature(fs).closed_form;
  r.F2 = f_squared(fs);
  r.j2 = j_norm_squared(fs, ev.Dd);
  r.lap_sigma = laplacian_sigma(fs, ev.table);
  r.quad_sigma = quad_form_sigma(fs);
  r.rhs_sum = r.hR + r.RG + 0.25 * r.F2 + r.j2 + r.lap_sigma + 0.25 * r.quad_sigma;
  r.oracle_R = product_scalar_curvature(spec, point);
  r.product_gap = std::abs(r.oracle_R - base_scalar_curvature(spec, point.Q));
  r.residual = std::abs(r.oracle_R - r.rhs_sum);
  return ev;
}

CurvatureReport decompose_scalar_curvature(const ModelSpec& spec, const EvalPoint& point, int order) {
  return evaluate_point(spec, point, order).report;
}

}  // namespace bcurv
