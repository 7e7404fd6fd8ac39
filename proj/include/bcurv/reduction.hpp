#pragma once

#include <Eigen/Dense>

#include "bcurv/curvature.hpp"

namespace bcurv {

struct JacobianTerms {
  double J_tilde = 0;  // Laplacian of sigma + 1/4 <d sigma, d sigma>
  double J = 0;        // -1/8 mu^2 kappa J_tilde
};

struct MeanCurvatureDrifts {
  Eigen::VectorXd jP, jV;
};

struct SdeDrift {
  Eigen::VectorXd drift_P, drift_V;
};

struct ReductionReport {
  double J_tilde = 0, J = 0;
  Eigen::VectorXd jI_P, jI_V, drift_P, drift_V;
  double hamiltonian_residual = 0;
  double tangency = 0;  // |(1 - N_P) drift_P|_inf
  double mu = 1, kappa = 1, mass = 1;
};

JacobianTerms jacobian_integrand(const CurvatureReport& report, double mu, double kappa);
JacobianTerms jacobian_integrand(const ModelSpec& spec, const EvalPoint& point, double mu, double kappa);

// h^{BM} Gamma^X_{BM} over the composite index.
Eigen::VectorXd contracted_christoffel(const FrameState& fs, const ChristoffelTable& table);

MeanCurvatureDrifts mean_curvature_drifts(const FrameState& fs, const ChristoffelTable& table);
MeanCurvatureDrifts mean_curvature_drifts(const ModelSpec& spec, const EvalPoint& point);

SdeDrift sde_drift(const FrameState& fs, const ChristoffelTable& table, double mu, double kappa);
SdeDrift sde_drift(const ModelSpec& spec, const EvalPoint& point, double mu, double kappa);

// |J_tilde - (oracle_R - hR - RG - F2/4 - j2)|
double hamiltonian_identity_residual(const CurvatureReport& report);
double hamiltonian_identity_residual(const ModelSpec& spec, const EvalPoint& point);

// mass is carried through untouched; only the geometric bracket is computed.
ReductionReport reduction_report(const PointEvaluation& ev, double mu, double kappa, double mass = 1.0);

}  // namespace bcurv
