#pragma once

#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bcurv/jet.hpp"
#include "bcurv/residuals.hpp"

namespace bcurv {

using JetVec = std::vector<Jet>;

// Geometry inputs. Callbacks take Q as jets (any nvars/order) and must return
// jets of the same nvars; derivatives are whatever the seeding provides.
struct ModelSpec {
  std::string name;
  int nP = 0, nV = 0, nG = 0;
  double alpha = 0.0;

  std::function<JetMatrix(const JetVec& Q)> metric_P;   // nP x nP
  Eigen::MatrixXd metric_V;                             // nV x nV, constant
  std::function<JetMatrix(const JetVec& Q)> killing_P;  // nP x nG, column mu = K_mu
  std::vector<Eigen::MatrixXd> rep_generators;          // nG matrices, nV x nV
  std::vector<double> structure;                        // c^g_{ab} at [(g*nG + a)*nG + b]
  std::function<JetVec(const JetVec& Q)> gauge;         // nG components
  std::function<bool(const Eigen::VectorXd& Q)> gauge_domain;

  // Parametrization of the gauge slice used for sampling.
  int slice_dim = 0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd& u)> slice_chart;
  std::function<Eigen::VectorXd(const Eigen::VectorXd& Q)> project_to_slice;

  double c(int g, int a, int b) const { return structure[(g * nG + a) * nG + b]; }
  double& c(int g, int a, int b) { return structure[(g * nG + a) * nG + b]; }
};

struct EvalPoint {
  Eigen::VectorXd Q;
  Eigen::VectorXd f;
  bool on_gauge = false;
};

inline constexpr double kOnGaugeTol = 1e-10;

EvalPoint make_eval_point(const ModelSpec& spec, const Eigen::VectorXd& Q, const Eigen::VectorXd& f);

// Random on-gauge point: slice coordinates in [0.5, 2], f components in [-1, 1].
EvalPoint sample_eval_point(const ModelSpec& spec, std::mt19937_64& rng);

// K^a_mu(f) = (J_mu)^a_b f^b, nV x nG.
JetMatrix killing_V(const ModelSpec& spec, const JetVec& f);

class ModelRejected : public std::runtime_error {
 public:
  ModelRejected(const std::string& check, double value);
  std::string check;
  double value;
};

struct ValidationOptions {
  double tol = 1e-10;
  double min_abs_det_phi = 1e-12;
};

IdentityResiduals validate_model(const ModelSpec& spec, const std::vector<EvalPoint>& samples,
                                 const ValidationOptions& opt = {});

ModelSpec make_planar_u1(double conformal_alpha);
ModelSpec make_quaternionic_hopf(double conformal_alpha);

// Same model with chi replaced by s * chi.
ModelSpec scale_gauge(const ModelSpec& spec, double s);

// "planar-u1" / "quaternionic-hopf"; throws std::invalid_argument otherwise.
ModelSpec make_model(const std::string& name, double alpha);

}  // namespace bcurv
