#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bcurv/jet.hpp"
#include "bcurv/model.hpp"

namespace bcurv {

class PointRejected : public std::runtime_error {
 public:
  explicit PointRejected(const std::string& why) : std::runtime_error(why) {}
};

inline constexpr double kMaxPhiCondition = 1e12;
inline constexpr double kMaxOrbitCondition = 1e10;
inline constexpr int kDefaultOrder = 3;

// Adapted-frame quantities at a point, pinned to the group identity.
// Composite index X = (Q^A, f^a); variables 0..nP-1 are Q, nP..n-1 are f.
// Matrices with one upper and one lower index store the upper index as the row.
// Orders below assume primitives seeded at order k.
struct FrameState {
  int nP = 0, nV = 0, nG = 0, n = 0, order = 0;
  Eigen::VectorXd Q, f;
  std::vector<double> structure;

  JetMatrix G, G_inv;           // blockdiag(G_AB, G_ab), order k
  JetMatrix K;                  // n x nG, K^X_mu, order k
  JetMatrix chi_x;              // nG x n, chi^a_X (zero on V), order k-1
  JetMatrix phi, phi_inv;       // Phi^b_mu = chi^b_A K^A_mu, order k-1
  JetMatrix lambda;             // Lambda^mu_X = (Phi^-1 chi)^mu_X, order k-1
  JetMatrix N;                  // N^X_Y = delta - K Lambda, order k-1
  JetMatrix Pi;                 // Pi^X_Y = delta - K A, order k
  JetMatrix Pperp;              // (P_perp)^A_B, nP x nP, order k-1
  JetMatrix gamma, gamma_prime; // order k
  JetMatrix d, d_inv;           // order k
  Jet sigma;                    // ln det d, order k
  JetMatrix conn;               // nG x n, A^mu_X = d^{mu nu} K^Y_nu G_YX, order k
  std::vector<JetMatrix> F;     // F[alpha] n x n, F^alpha_{XY}, order k-1
  JetMatrix GH;                 // horizontal metric, order k
  JetMatrix h;                  // N G^-1 N^T, order k-1

  double c(int g, int a, int b) const { return structure[(g * nG + a) * nG + b]; }

  JetMatrix N_P() const { return N.block(0, 0, nP, nP); }    // N^A_C
  JetMatrix N_V() const { return N.block(nP, 0, nV, nP); }   // N^a_B
  JetMatrix conn_P() const { return conn.block(0, 0, nG, nP); }
  JetMatrix conn_V() const { return conn.block(0, nP, nG, nV); }
  JetMatrix GH_PP() const { return GH.block(0, 0, nP, nP); }
  JetMatrix GH_PV() const { return GH.block(0, nP, nP, nV); }
  JetMatrix GH_VV() const { return GH.block(nP, nP, nV, nV); }
  JetMatrix h_PP() const { return h.block(0, 0, nP, nP); }
  JetMatrix h_PV() const { return h.block(0, nP, nP, nV); }
  JetMatrix h_VV() const { return h.block(nP, nP, nV, nV); }
  // blockdiag(P_perp, 1) over the composite index
  JetMatrix Pperp_composite() const;
};

// order in 1..3; curvature needs >= 2.
FrameState build_frame(const ModelSpec& spec, const EvalPoint& point, int order = kDefaultOrder);

struct FaddeevPopov {
  JetMatrix phi, phi_inv;
};
FaddeevPopov faddeev_popov(const ModelSpec& spec, const EvalPoint& point, int order = kDefaultOrder);

struct Projectors {
  JetMatrix N_P, N_V, Pperp, Pi;
};
Projectors projectors(const ModelSpec& spec, const EvalPoint& point, int order = kDefaultOrder);

struct OrbitMetric {
  JetMatrix gamma, gamma_prime, d, d_inv;
  Jet sigma;
};
OrbitMetric orbit_metric(const ModelSpec& spec, const EvalPoint& point, int order = kDefaultOrder);

struct MechanicalConnection {
  JetMatrix conn_P, conn_V;
};
MechanicalConnection mechanical_connection(const ModelSpec& spec, const EvalPoint& point,
                                           int order = kDefaultOrder);

// F_PP[alpha] = F^alpha_{SP}, F_PV[alpha] = F^alpha_{Ep}, F_VV[alpha] = F^alpha_{pa}
struct ConnectionCurvature {
  std::vector<JetMatrix> F_PP, F_PV, F_VV;
};
ConnectionCurvature connection_curvature(const ModelSpec& spec, const EvalPoint& point,
                                         int order = kDefaultOrder);

struct HorizontalMetric {
  JetMatrix GH_PP, GH_PV, GH_VV, h_PP, h_PV, h_VV;
};
HorizontalMetric horizontal_metric(const ModelSpec& spec, const EvalPoint& point, int order = kDefaultOrder);

// Adapted-coordinate metric at a = e and its pseudoinverse, (nP+nV+nG) square.
Eigen::MatrixXd adapted_metric(const FrameState& fs);
Eigen::MatrixXd adapted_pseudoinverse(const FrameState& fs);

// Determinants are taken on T(Sigma) x V x G: the Q block is restricted to an
// orthonormal basis of ker chi_A, where the adapted metric is nondegenerate.
struct DetFactorization {
  double det_G = 0, det_d = 0, H = 0, det_Pperp = 0, residual = 0;
};
DetFactorization det_factorization(const ModelSpec& spec, const EvalPoint& point);
DetFactorization det_factorization(const FrameState& fs);

}  // namespace bcurv
