#include "bcurv/reduction.hpp"

#include <cmath>

namespace bcurv {

JacobianTerms jacobian_integrand(const CurvatureReport& r, double mu, double kappa) {
  JacobianTerms t;
  t.J_tilde = r.lap_sigma + 0.25 * r.quad_sigma;
  t.J = -0.125 * mu * mu * kappa * t.J_tilde;
  return t;
}

JacobianTerms jacobian_integrand(const ModelSpec& spec, const EvalPoint& point, double mu, double kappa) {
  return jacobian_integrand(decompose_scalar_curvature(spec, point), mu, kappa);
}

Eigen::VectorXd contracted_christoffel(const FrameState& fs, const ChristoffelTable& t) {
  const int n = fs.n;
  Eigen::MatrixXd h = fs.h.values();
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  for (int X = 0; X < n; ++X)
    for (int B = 0; B < n; ++B)
      for (int M = 0; M < n; ++M) g(X) += h(B, M) * t.raised(X, B, M).value();
  return g;
}

MeanCurvatureDrifts mean_curvature_drifts(const FrameState& fs, const ChristoffelTable& t) {
  const int nP = fs.nP, nV = fs.nV;
  Eigen::MatrixXd h = fs.h.values(), N = fs.N.values();
  Eigen::VectorXd hG = contracted_christoffel(fs, t);

  // divN^C = h^{BM} N^C_{B,M}, B and M over P; C over the composite index
  Eigen::VectorXd divN = Eigen::VectorXd::Zero(fs.n);
  for (int M = 0; M < nP; ++M) {
    Eigen::MatrixXd dN = fs.N.partial(M).values();
    for (int B = 0; B < nP; ++B) divN += h(B, M) * dN.col(B);
  }

  Eigen::MatrixXd NP = N.topLeftCorner(nP, nP), NV = N.bottomLeftCorner(nV, nP);
  Eigen::VectorXd hGP = hG.head(nP);
  MeanCurvatureDrifts j;
  j.jP = 0.5 * divN.head(nP) + 0.5 * hGP - 0.5 * NP * hGP;
  j.jV = -0.5 * NV * divN.head(nP) - 0.5 * NV * hGP;
  return j;
}

MeanCurvatureDrifts mean_curvature_drifts(const ModelSpec& spec, const EvalPoint& point) {
  PointEvaluation ev = evaluate_point(spec, point);
  return mean_curvature_drifts(ev.frame, ev.table);
}

SdeDrift sde_drift(const FrameState& fs, const ChristoffelTable& t, double mu, double kappa) {
  MeanCurvatureDrifts j = mean_curvature_drifts(fs, t);
  Eigen::VectorXd hG = contracted_christoffel(fs, t);
  const double s = mu * mu * kappa;
  SdeDrift d;
  d.drift_P = s * (-0.5 * hG.head(fs.nP) + j.jP);
  d.drift_V = s * (-0.5 * hG.tail(fs.nV) + j.jV);
  return d;
}

SdeDrift sde_drift(const ModelSpec& spec, const EvalPoint& point, double mu, double kappa) {
  PointEvaluation ev = evaluate_point(spec, point);
  return sde_drift(ev.frame, ev.table, mu, kappa);
}

double hamiltonian_identity_residual(const CurvatureReport& r) {
  const double J_tilde = jacobian_integrand(r, 1.0, 1.0).J_tilde;
  return std::abs(J_tilde - (r.oracle_R - r.hR - r.RG - 0.25 * r.F2 - r.j2));
}

double hamiltonian_identity_residual(const ModelSpec& spec, const EvalPoint& point) {
  return hamiltonian_identity_residual(decompose_scalar_curvature(spec, point));
}

ReductionReport reduction_report(const PointEvaluation& ev, double mu, double kappa, double mass) {
  ReductionReport r;
  r.mu = mu;
  r.kappa = kappa;
  r.mass = mass;
  JacobianTerms jt = jacobian_integrand(ev.report, mu, kappa);
  r.J_tilde = jt.J_tilde;
  r.J = jt.J;
  MeanCurvatureDrifts j = mean_curvature_drifts(ev.frame, ev.table);
  r.jI_P = j.jP;
  r.jI_V = j.jV;
  SdeDrift d = sde_drift(ev.frame, ev.table, mu, kappa);
  r.drift_P = d.drift_P;
  r.drift_V = d.drift_V;
  r.hamiltonian_residual = hamiltonian_identity_residual(ev.report);
  const int nP = ev.frame.nP;
  Eigen::MatrixXd NP = ev.frame.N.values().topLeftCorner(nP, nP);
  r.tangency = ((Eigen::MatrixXd::Identity(nP, nP) - NP) * d.drift_P).cwiseAbs().maxCoeff();
  return r;
}

}  // namespace bcurv
