#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bcurv/frame.hpp"
#include "bcurv/model.hpp"
#include "bcurv/tensor.hpp"

namespace bcurv {

// Commutator coefficients of the frame (H_A, H_p, L_alpha) at a = e, over the
// composite index X = (A, p):
//   [H_X, H_Y] = frame(T, X, Y) H_T + group(alpha, X, Y) L_alpha
// Defined modulo Killing directions; the group part pairs with K.
struct NonholonomicStructure {
  int nP = 0, nV = 0, nG = 0;
  Tensor3 frame;  // n x n x n
  Tensor3 group;  // nG x n x n

  Tensor3 T_AB() const { return frame.slice(0, 0, 0, nP, nP, nP); }
  Tensor3 p_AB() const { return frame.slice(nP, 0, 0, nV, nP, nP); }
  Tensor3 q_Ap() const { return frame.slice(nP, 0, nP, nV, nP, nV); }
  Tensor3 alpha_AB() const { return group.slice(0, 0, 0, nG, nP, nP); }
  Tensor3 alpha_Ap() const { return group.slice(0, 0, nP, nG, nP, nV); }
  Tensor3 alpha_pq() const { return group.slice(0, nP, nP, nG, nV, nV); }
};

NonholonomicStructure nonholonomic_structure(const FrameState& fs);

// Christoffel symbols; all horizontal indices composite.
struct ChristoffelTable {
  int n = 0, nG = 0;
  JetArray3 lowered;  // Gamma_{ABC} = 1/2 (d_A GH_BC + d_B GH_AC - d_C GH_AB), order k-1
  JetArray3 raised;   // Gamma^M_{AB} = h^{MC} Gamma_{ABC}, order 1
  Tensor3 group;      // Gamma^a_{bc} of the orbit metric

  // Frame-basis symbols with group indices; only values are kept.
  Tensor3 hh_h;  // [D][A][B]   = N^E_A Gamma^D_{BE}
  Tensor3 hg_h;  // [D][A][mu]  = [D][mu][A] = 1/2 N^S_A h^{DR} F^s_{SR} d_{mu s}
  Tensor3 hh_g;  // [e][A][B]   = 1/2 C^e_{AB}
  Tensor3 hg_g;  // [e][A][mu]  = [e][mu][A] = 1/2 d^{en} H_A d_{mu n}
  Tensor3 gg_h;  // [D][mu][nu] = -1/2 h^{DC} H_C d_{mu nu}
};

// Lowered and raised symbols. Needs a frame of order >= 2.
ChristoffelTable horizontal_christoffels(const FrameState& fs);

// Koszul form for a left-invariant metric d on a group with structure constants c.
Tensor3 group_christoffels(const Eigen::MatrixXd& d, const std::vector<double>& structure, int nG);

// D_E d_{ab} at [a][b][E], E composite.
Tensor3 covariant_D_d(const FrameState& fs);

// H_C d_{ab} = N^E_C D_E d_{ab}, at [a][b][C].
Tensor3 horizontal_D_d(const FrameState& fs, const Tensor3& Dd);

// Fills the group-index entries of an existing table.
void group_sector_christoffels(const FrameState& fs, const NonholonomicStructure& C, const Tensor3& Dd,
                               ChristoffelTable& table);

// Gamma^D_{mu nu} = -1/2 G^{DF} N^C_F H_C d_{mu nu}, D and F over P.
Tensor3 gg_h_first_representation(const FrameState& fs, const Tensor3& Dd);

double horizontal_scalar_curvature(const FrameState& fs, const ChristoffelTable& table);

struct GroupCurvature {
  Eigen::MatrixXd ricci;  // R_ab from Gamma^a_{bc}
  double closed_form = 0; // 1/2 d^{mn} c^s_{ma} c^a_{ns} + 1/4 d_{ms} d^{ab} d^{en} c^m_{ea} c^s_{nb}
  double contracted = 0;  // d^{ab} R_ab
};
GroupCurvature group_curvature(const Eigen::MatrixXd& d, const std::vector<double>& structure, int nG);
GroupCurvature group_curvature(const FrameState& fs);

double f_squared(const FrameState& fs);
double j_norm_squared(const FrameState& fs, const Tensor3& Dd);
double laplacian_sigma(const FrameState& fs, const ChristoffelTable& table);
double quad_form_sigma(const FrameState& fs);

struct CurvatureReport {
  double hR = 0, RG = 0, F2 = 0, j2 = 0, lap_sigma = 0, quad_sigma = 0;
  double rhs_sum = 0, oracle_R = 0, residual = 0;
  double product_gap = 0;  // |R(P x V) - R(P)|

  double term_scale() const;  // 1 + sum of |terms| on the right side
  double normalized_residual() const { return residual / term_scale(); }
};

// Everything computed at one point, reused by reduction and the CLI.
struct PointEvaluation {
  FrameState frame;
  NonholonomicStructure C;
  Tensor3 Dd;
  ChristoffelTable table;
  CurvatureReport report;
};

PointEvaluation evaluate_point(const ModelSpec& spec, const EvalPoint& point, int order = kDefaultOrder);
CurvatureReport decompose_scalar_curvature(const ModelSpec& spec, const EvalPoint& point,
                                           int order = kDefaultOrder);

}  // namespace bcurv
