#include "bcurv/frame.hpp"

#include <cmath>

namespace bcurv {

JetMatrix FrameState::Pperp_composite() const {
  JetMatrix P = JetMatrix::identity(n, n, Pperp.order());
  P.set_block(0, 0, Pperp);
  return P;
}

FrameState build_frame(const ModelSpec& spec, const EvalPoint& point, int order) {
  if (order < 1 || order > kMaxJetOrder) throw std::invalid_argument("frame order must be in 1..3");
  if (!spec.gauge_domain(point.Q)) throw PointRejected("point outside the gauge domain");

  FrameState fs;
  fs.nP = spec.nP;
  fs.nV = spec.nV;
  fs.nG = spec.nG;
  fs.n = spec.nP + spec.nV;
  fs.order = order;
  fs.Q = point.Q;
  fs.f = point.f;
  fs.structure = spec.structure;
  const int nP = fs.nP, nV = fs.nV, nG = fs.nG, n = fs.n;

  std::vector<double> x(n);
  for (int i = 0; i < nP; ++i) x[i] = point.Q(i);
  for (int i = 0; i < nV; ++i) x[nP + i] = point.f(i);
  JetVec xs = jet_seed(x, order);
  JetVec Qj(xs.begin(), xs.begin() + nP), fj(xs.begin() + nP, xs.end());

  JetMatrix GP = spec.metric_P(Qj);
  JetMatrix GP_inv = jet_matrix_inverse(GP);
  JetMatrix KP = spec.killing_P(Qj);
  JetMatrix KV = killing_V(spec, fj);
  JetVec chi = spec.gauge(Qj);
  if (static_cast<int>(chi.size()) != nG) throw std::invalid_argument("gauge returns wrong number of components");

  fs.G = JetMatrix(n, n, n, order);
  fs.G.set_block(0, 0, GP);
  fs.G.set_block(nP, nP, JetMatrix::constant(spec.metric_V, n, order));
  fs.G_inv = JetMatrix(n, n, n, order);
  fs.G_inv.set_block(0, 0, GP_inv);
  fs.G_inv.set_block(nP, nP, JetMatrix::constant(spec.metric_V.inverse(), n, order));

  fs.K = JetMatrix(n, nG, n, order);
  fs.K.set_block(0, 0, KP);
  fs.K.set_block(nP, 0, KV);

  fs.chi_x = JetMatrix(nG, n, n, order - 1);
  for (int a = 0; a < nG; ++a)
    for (int A = 0; A < nP; ++A) fs.chi_x(a, A) = chi[a].partial(A);

  fs.phi = fs.chi_x * fs.K;
  const double phi_cond = value_condition(fs.phi);
  if (!(phi_cond < kMaxPhiCondition)) throw PointRejected("Faddeev-Popov matrix singular (off chart)");
  fs.phi_inv = jet_matrix_inverse(fs.phi);
  fs.lambda = fs.phi_inv * fs.chi_x;
  fs.N = JetMatrix::identity(n, n, order) - fs.K * fs.lambda;

  fs.gamma = KP.transpose() * GP * KP;
  fs.gamma_prime = KV.transpose() * JetMatrix::constant(spec.metric_V, n, order) * KV;
  fs.d = fs.gamma + fs.gamma_prime;
  const double d_cond = value_condition(fs.d);
  if (!(d_cond < kMaxOrbitCondition)) throw PointRejected("orbit metric singular (action not free)");
  fs.d_inv = jet_matrix_inverse(fs.d);
  fs.sigma = log(jet_matrix_det(fs.d));

  JetMatrix GK = fs.G * fs.K;
  fs.conn = fs.d_inv * GK.transpose();
  fs.Pi = JetMatrix::identity(n, n, order) - fs.K * fs.conn;
  fs.GH = fs.G - GK * fs.d_inv * GK.transpose();
  fs.h = fs.N * fs.G_inv * fs.N.transpose();

  // F^a_{ST} = d_S A^a_T - d_T A^a_S + c^a_{nu sig} A^nu_S A^sig_T
  fs.F.assign(nG, JetMatrix(n, n, n, order - 1));
  std::vector<JetMatrix> dA;
  dA.reserve(n);
  for (int S = 0; S < n; ++S) dA.push_back(fs.conn.partial(S));
  for (int al = 0; al < nG; ++al)
    for (int S = 0; S < n; ++S)
      for (int T = S + 1; T < n; ++T) {
        Jet v = dA[S](al, T) - dA[T](al, S);
        for (int nu = 0; nu < nG; ++nu)
          for (int sg = 0; sg < nG; ++sg) {
            const double cc = fs.c(al, nu, sg);
            if (cc == 0.0) continue;
            Jet t = fs.conn(nu, S) * fs.conn(sg, T) - fs.conn(nu, T) * fs.conn(sg, S);
            v.add_scaled(t, 0.5 * cc);
          }
        fs.F[al](S, T) = v;
        fs.F[al](T, S) = -v;
      }

  // (P_perp)^A_B = delta - T (C T)^-1 C with C = chi_A and T = G^-1 C^T gamma.
  JetMatrix C = fs.chi_x.block(0, 0, nG, nP);
  JetMatrix T = GP_inv * C.transpose() * fs.gamma;
  fs.Pperp = JetMatrix::identity(nP, n, order) - T * jet_matrix_inverse(C * T) * C;
  return fs;
}

FaddeevPopov faddeev_popov(const ModelSpec& spec, const EvalPoint& point, int order) {
  FrameState fs = build_frame(spec, point, order);
  return {fs.phi, fs.phi_inv};
}

Projectors projectors(const ModelSpec& spec, const EvalPoint& point, int order) {
  FrameState fs = build_frame(spec, point, order);
  return {fs.N_P(), fs.N_V(), fs.Pperp, fs.Pi};
}

OrbitMetric orbit_metric(const ModelSpec& spec, const EvalPoint& point, int order) {
  FrameState fs = build_frame(spec, point, order);
  return {fs.gamma, fs.gamma_prime, fs.d, fs.d_inv, fs.sigma};
}

MechanicalConnection mechanical_connection(const ModelSpec& spec, const EvalPoint& point, int order) {
  FrameState fs = build_frame(spec, point, order);
  return {fs.conn_P(), fs.conn_V()};
}

ConnectionCurvature connection_curvature(const ModelSpec& spec, const EvalPoint& point, int order) {
  FrameState fs = build_frame(spec, point, order);
  ConnectionCurvature cc;
  for (const JetMatrix& F : fs.F) {
    cc.F_PP.push_back(F.block(0, 0, fs.nP, fs.nP));
    cc.F_PV.push_back(F.block(0, fs.nP, fs.nP, fs.nV));
    cc.F_VV.push_back(F.block(fs.nP, fs.nP, fs.nV, fs.nV));
  }
  return cc;
}

HorizontalMetric horizontal_metric(const ModelSpec& spec, const EvalPoint& point, int order) {
  FrameState fs = build_frame(spec, point, order);
  return {fs.GH_PP(), fs.GH_PV(), fs.GH_VV(), fs.h_PP(), fs.h_PV(), fs.h_VV()};
}

Eigen::MatrixXd adapted_metric(const FrameState& fs) {
  const int nP = fs.nP, nV = fs.nV, nG = fs.nG, n = fs.n;
  Eigen::MatrixXd G = fs.G.values(), K = fs.K.values(), P = fs.Pperp.values();
  Eigen::MatrixXd GP = G.topLeftCorner(nP, nP), GV = G.bottomRightCorner(nV, nV);
  Eigen::MatrixXd KP = K.topRows(nP), KV = K.bottomRows(nV);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n + nG, n + nG);
  M.block(0, 0, nP, nP) = P.transpose() * GP * P;
  M.block(0, n, nP, nG) = P.transpose() * GP * KP;
  M.block(n, 0, nG, nP) = M.block(0, n, nP, nG).transpose();
  M.block(nP, nP, nV, nV) = GV;
  M.block(nP, n, nV, nG) = GV * KV;
  M.block(n, nP, nG, nV) = M.block(nP, n, nV, nG).transpose();
  M.block(n, n, nG, nG) = fs.d.values();
  return M;
}

Eigen::MatrixXd adapted_pseudoinverse(const FrameState& fs) {
  const int nP = fs.nP, nV = fs.nV, nG = fs.nG, n = fs.n;
  Eigen::MatrixXd Gi = fs.G_inv.values().topLeftCorner(nP, nP);
  Eigen::MatrixXd GVi = fs.G_inv.values().bottomRightCorner(nV, nV);
  Eigen::MatrixXd NP = fs.N.values().topLeftCorner(nP, nP);
  Eigen::MatrixXd L = fs.lambda.values().leftCols(nP);
  Eigen::MatrixXd KV = fs.K.values().bottomRows(nV);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n + nG, n + nG);
  M.block(0, 0, nP, nP) = NP * Gi * NP.transpose();
  M.block(0, nP, nP, nV) = -NP * Gi * L.transpose() * KV.transpose();
  M.block(nP, 0, nV, nP) = M.block(0, nP, nP, nV).transpose();
  M.block(nP, nP, nV, nV) = GVi + KV * L * Gi * L.transpose() * KV.transpose();
  M.block(0, n, nP, nG) = NP * Gi * L.transpose();
  M.block(n, 0, nG, nP) = M.block(0, n, nP, nG).transpose();
  M.block(nP, n, nV, nG) = -KV * L * Gi * L.transpose();
  M.block(n, nP, nG, nV) = M.block(nP, n, nV, nG).transpose();
  M.block(n, n, nG, nG) = L * Gi * L.transpose();
  return M;
}

DetFactorization det_factorization(const FrameState& fs) {
  const int nP = fs.nP, nV = fs.nV, nG = fs.nG, n = fs.n;
  Eigen::MatrixXd C = fs.chi_x.values().leftCols(nP);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullV);
  const int m = nP - nG;
  Eigen::MatrixXd E = svd.matrixV().rightCols(m);

  Eigen::MatrixXd Tm = Eigen::MatrixXd::Zero(n + nG, m + nV + nG);
  Tm.block(0, 0, nP, m) = E;
  Tm.block(nP, m, nV + nG, nV + nG) = Eigen::MatrixXd::Identity(nV + nG, nV + nG);

  Eigen::MatrixXd P = fs.Pperp.values(), GH = fs.GH.values();
  Eigen::MatrixXd Hb(n, n);
  Hb.block(0, 0, nP, nP) = P.transpose() * GH.topLeftCorner(nP, nP) * P;
  Hb.block(0, nP, nP, nV) = P.transpose() * GH.topRightCorner(nP, nV);
  Hb.block(nP, 0, nV, nP) = GH.bottomLeftCorner(nV, nP) * P;
  Hb.block(nP, nP, nV, nV) = GH.bottomRightCorner(nV, nV);
  Eigen::MatrixXd Th = Tm.topLeftCorner(n, m + nV);

  DetFactorization r;
  r.det_G = (Tm.transpose() * adapted_metric(fs) * Tm).determinant();
  r.det_d = fs.d.values().determinant();
  r.H = (Th.transpose() * Hb * Th).determinant();
  r.det_Pperp = m > 0 ? (E.transpose() * P * E).determinant() : 1.0;
  r.residual = std::abs(r.det_G - r.det_d * r.H) / (1.0 + std::abs(r.det_G));
  return r;
}

DetFactorization det_factorization(const ModelSpec& spec, const EvalPoint& point) {
  EvalPoint p = make_eval_point(spec, point.Q, point.f);
  if (!p.on_gauge) throw PointRejected("determinant factorization needs an on-gauge point");
  return det_factorization(build_frame(spec, p, 1));
}

}  // namespace bcurv
