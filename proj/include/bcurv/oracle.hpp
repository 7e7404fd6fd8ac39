#pragma once

#include "bcurv/jet.hpp"
#include "bcurv/model.hpp"
#include "bcurv/tensor.hpp"

namespace bcurv {

// Holonomic Riemannian geometry from a metric jet. Shares only the jet layer
// with the frame and curvature code.
//
// Sign convention throughout: Ric_AC = d_A G^P_PC - d_P G^P_AC + G^D_PC G^P_AD - G^E_AC G^P_PE,
// the negative of the usual one, so the round sphere has R < 0.

// G^C_AB at [C][A][B]; metric order >= 1, result order one less.
JetArray3 holonomic_christoffels(const JetMatrix& g);

// metric order >= 2.
double holonomic_scalar_curvature(const JetMatrix& g);

// Curvature of P alone at Q, and of the product P x V at (Q, f).
double base_scalar_curvature(const ModelSpec& spec, const Eigen::VectorXd& Q);
double product_scalar_curvature(const ModelSpec& spec, const EvalPoint& point);

// e^{2 alpha |Q|^2} delta on R^dim, in the convention above.
double conformal_scalar_curvature(int dim, double alpha, double r2);

}  // namespace bcurv
