#include "bcurv/model.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace bcurv {

namespace {

Jet zero_like(const Jet& x) { return Jet(x.nvars(), x.order(), 0.0); }

JetMatrix conformal_metric(const JetVec& Q, double alpha) {
  Jet s = zero_like(Q[0]);
  for (const Jet& q : Q) s.add_product(q, q);
  const Jet e = exp(2.0 * alpha * s);
  const int n = static_cast<int>(Q.size());
  JetMatrix G(n, n, Q[0].nvars(), Q[0].order());
  for (int i = 0; i < n; ++i) G(i, i) = e;
  return G;
}

// Hamilton product a*b, components (1, i, j, k).
template <class A, class B>
auto qmul(const A& a, const B& b) {
  using T = decltype(a[0] * b[0]);
  return std::array<T, 4>{
      a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
      a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
      a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
      a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

JetMatrix hopf_killing(const JetVec& Q) {
  JetMatrix K(4, 3, Q[0].nvars(), Q[0].order());
  for (int m = 0; m < 3; ++m) {
    std::array<double, 4> e{0, 0, 0, 0};
    e[m + 1] = 1.0;
    auto col = qmul(Q, e);
    for (int A = 0; A < 4; ++A) K(A, m) = col[A];
  }
  return K;
}

// Commutator [K_mu, K_g]^T = K^R_mu d_R K^T_g - K^R_g d_R K^T_mu, from an order-1 jet of K.
Eigen::MatrixXd commutator(const JetMatrix& K, int mu, int g) {
  const int n = K.rows();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int T = 0; T < n; ++T)
    for (int R = 0; R < n; ++R)
      out(T) += K(R, mu).value() * K(T, g).d1(R) - K(R, g).value() * K(T, mu).d1(R);
  return out;
}

// Least-squares fit of c^s_{mu g} from commutators of the P Killing fields.
std::vector<double> measure_structure(const ModelSpec& spec, const Eigen::VectorXd& Qp) {
  std::vector<double> q(Qp.data(), Qp.data() + Qp.size());
  JetMatrix K = spec.killing_P(jet_seed(q, 1));
  const int nG = spec.nG;
  Eigen::MatrixXd Kv = K.values();
  std::vector<double> c(nG * nG * nG, 0.0);
  for (int mu = 0; mu < nG; ++mu)
    for (int g = 0; g < nG; ++g) {
      Eigen::VectorXd coef = Kv.colPivHouseholderQr().solve(commutator(K, mu, g));
      for (int s = 0; s < nG; ++s) c[(s * nG + mu) * nG + g] = coef(s);
    }
  return c;
}

double rel(double r, double scale) { return r / (1.0 + scale); }

}  // namespace

ModelRejected::ModelRejected(const std::string& chk, double v)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "model rejected: " << chk << " = " << v;
        return os.str();
      }()),
      check(chk),
      value(v) {}

EvalPoint make_eval_point(const ModelSpec& spec, const Eigen::VectorXd& Q, const Eigen::VectorXd& f) {
  if (Q.size() != spec.nP || f.size() != spec.nV)
    throw std::invalid_argument("point dimensions do not match model");
  EvalPoint p{Q, f, false};
  JetVec q = jet_seed(std::vector<double>(Q.data(), Q.data() + Q.size()), 0);
  double worst = 0.0;
  for (const Jet& x : spec.gauge(q)) worst = std::max(worst, std::abs(x.value()));
  p.on_gauge = worst < kOnGaugeTol;
  return p;
}

EvalPoint sample_eval_point(const ModelSpec& spec, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ur(0.5, 2.0), uf(-1.0, 1.0);
  Eigen::VectorXd u(spec.slice_dim), f(spec.nV);
  for (int i = 0; i < spec.slice_dim; ++i) u(i) = ur(rng);
  for (int i = 0; i < spec.nV; ++i) f(i) = uf(rng);
  return make_eval_point(spec, spec.slice_chart(u), f);
}

JetMatrix killing_V(const ModelSpec& spec, const JetVec& f) {
  const int nv = f.empty() ? 0 : f[0].nvars();
  const int ord = f.empty() ? 0 : f[0].order();
  JetMatrix K(spec.nV, spec.nG, nv, ord);
  for (int mu = 0; mu < spec.nG; ++mu)
    for (int a = 0; a < spec.nV; ++a)
      for (int b = 0; b < spec.nV; ++b) {
        const double J = spec.rep_generators[mu](a, b);
        if (J != 0.0) K(a, mu).add_scaled(f[b], J);
      }
  return K;
}

IdentityResiduals validate_model(const ModelSpec& spec, const std::vector<EvalPoint>& samples,
                                 const ValidationOptions& opt) {
  IdentityResiduals out;
  const int nP = spec.nP, nV = spec.nV, nG = spec.nG;

  // Structure constants: antisymmetry, Jacobi, vanishing trace.
  double cmax = 0.0;
  for (double v : spec.structure) cmax = std::max(cmax, std::abs(v));
  double anti = 0.0, jac = 0.0, tr = 0.0;
  for (int g = 0; g < nG; ++g)
    for (int a = 0; a < nG; ++a)
      for (int b = 0; b < nG; ++b) anti = std::max(anti, std::abs(spec.c(g, a, b) + spec.c(g, b, a)));
  for (int a = 0; a < nG; ++a)
    for (int b = 0; b < nG; ++b)
      for (int e = 0; e < nG; ++e)
        for (int m = 0; m < nG; ++m) {
          double s = 0.0;
          for (int k = 0; k < nG; ++k)
            s += spec.c(k, a, b) * spec.c(m, k, e) + spec.c(k, b, e) * spec.c(m, k, a) +
                 spec.c(k, e, a) * spec.c(m, k, b);
          jac = std::max(jac, std::abs(s));
        }
  for (int s = 0; s < nG; ++s) {
    double t = 0.0;
    for (int a = 0; a < nG; ++a) t += spec.c(a, s, a);
    tr = std::max(tr, std::abs(t));
  }
  out.record("structure_antisymmetry", rel(anti, cmax));
  out.record("structure_jacobi", rel(jac, cmax * cmax));
  out.record("structure_trace", rel(tr, cmax));

  // V: generator closure [J_mu, J_g] = -c^s_{mu g} J_s (from K^a = J f) and G_V invariance.
  double vclose = 0.0, vinv = 0.0, jmax = 0.0;
  for (const auto& J : spec.rep_generators) jmax = std::max(jmax, J.cwiseAbs().maxCoeff());
  for (int mu = 0; mu < nG; ++mu) {
    const Eigen::MatrixXd& Jm = spec.rep_generators[mu];
    vinv = std::max(vinv, (Jm.transpose() * spec.metric_V + spec.metric_V * Jm).cwiseAbs().maxCoeff());
    for (int g = 0; g < nG; ++g) {
      Eigen::MatrixXd r = spec.rep_generators[g] * Jm - Jm * spec.rep_generators[g];
      for (int s = 0; s < nG; ++s) r -= spec.c(s, mu, g) * spec.rep_generators[s];
      vclose = std::max(vclose, r.cwiseAbs().maxCoeff());
    }
  }
  out.record("closure_V", rel(vclose, jmax * jmax));
  out.record("killing_G_V", rel(vinv, jmax * spec.metric_V.cwiseAbs().maxCoeff()));

  for (const EvalPoint& p : samples) {
    if (!spec.gauge_domain(p.Q)) throw std::invalid_argument("validation sample outside gauge domain");
    JetVec q = jet_seed(std::vector<double>(p.Q.data(), p.Q.data() + nP), 1);
    JetMatrix G = spec.metric_P(q);
    JetMatrix K = spec.killing_P(q);
    JetVec chi = spec.gauge(q);

    Eigen::LLT<Eigen::MatrixXd> llt(G.values());
    Eigen::MatrixXd Gv = G.values();
    if (llt.info() != Eigen::Success || (Gv - Gv.transpose()).cwiseAbs().maxCoeff() > opt.tol)
      throw ModelRejected("metric_P_positive_definite", 0.0);

    // Killing equation for G_AB.
    double kill = 0.0, scale = 0.0;
    for (int al = 0; al < nG; ++al)
      for (int A = 0; A < nP; ++A)
        for (int B = 0; B < nP; ++B) {
          double s = 0.0;
          for (int D = 0; D < nP; ++D) {
            s += K(D, al).value() * G(A, B).d1(D);
            s += G(D, B).value() * K(D, al).d1(A) + G(A, D).value() * K(D, al).d1(B);
            scale = std::max(scale, std::abs(K(D, al).value() * G(A, B).d1(D)));
          }
          kill = std::max(kill, std::abs(s));
        }
    out.record("killing_G_P", rel(kill, scale));

    // Closure on P.
    double close = 0.0, kscale = K.values().cwiseAbs().maxCoeff();
    for (int mu = 0; mu < nG; ++mu)
      for (int g = 0; g < nG; ++g) {
        Eigen::VectorXd r = commutator(K, mu, g);
        for (int s = 0; s < nG; ++s) r -= spec.c(s, mu, g) * K.values().col(s);
        close = std::max(close, r.cwiseAbs().maxCoeff());
      }
    out.record("closure_P", rel(close, kscale * (1.0 + cmax)));

    // Faddeev-Popov matrix Phi^b_mu = K^A_mu chi^b_A.
    Eigen::MatrixXd phi(nG, nG);
    for (int b = 0; b < nG; ++b)
      for (int mu = 0; mu < nG; ++mu) {
        double s = 0.0;
        for (int A = 0; A < nP; ++A) s += K(A, mu).value() * chi[b].d1(A);
        phi(b, mu) = s;
      }
    out.record_min("phi_min_abs_det", std::abs(phi.determinant()));
    ++out.point_count;
  }
  (void)nV;

  for (const auto& [label, r] : out.residuals)
    if (!(r <= opt.tol)) throw ModelRejected(label, r);
  if (!samples.empty() && out.diagnostics.at("phi_min_abs_det") < opt.min_abs_det_phi)
    throw ModelRejected("phi_min_abs_det", out.diagnostics.at("phi_min_abs_det"));
  return out;
}

ModelSpec make_planar_u1(double alpha) {
  ModelSpec m;
  m.name = "planar-u1";
  m.nP = 2;
  m.nV = 2;
  m.nG = 1;
  m.alpha = alpha;
  m.metric_P = [alpha](const JetVec& Q) { return conformal_metric(Q, alpha); };
  m.metric_V = Eigen::MatrixXd::Identity(2, 2);
  m.killing_P = [](const JetVec& Q) {
    JetMatrix K(2, 1, Q[0].nvars(), Q[0].order());
    K(0, 0) = -Q[1];
    K(1, 0) = Q[0];
    return K;
  };
  Eigen::MatrixXd J(2, 2);
  J << 0, -1, 1, 0;
  m.rep_generators = {J};
  m.structure = {0.0};
  m.gauge = [](const JetVec& Q) { return JetVec{Q[1]}; };
  m.gauge_domain = [](const Eigen::VectorXd& Q) { return Q(0) > 0.0; };
  m.slice_dim = 1;
  m.slice_chart = [](const Eigen::VectorXd& u) {
    Eigen::VectorXd Q(2);
    Q << u(0), 0.0;
    return Q;
  };
  m.project_to_slice = [](const Eigen::VectorXd& Q) {
    Eigen::VectorXd P = Q;
    P(1) = 0.0;
    return P;
  };
  return m;
}

ModelSpec make_quaternionic_hopf(double alpha) {
  ModelSpec m;
  m.name = "quaternionic-hopf";
  m.nP = 4;
  m.nV = 3;
  m.nG = 3;
  m.alpha = alpha;
  m.metric_P = [alpha](const JetVec& Q) { return conformal_metric(Q, alpha); };
  m.metric_V = Eigen::MatrixXd::Identity(3, 3);
  m.killing_P = hopf_killing;
  Eigen::VectorXd probe(4);
  probe << 0.7, -0.3, 0.45, 0.2;
  m.structure = measure_structure(m, probe);
  // V carries minus the adjoint action, which closes with the same constants.
  for (int mu = 0; mu < 3; ++mu) {
    Eigen::MatrixXd J(3, 3);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) J(a, b) = -m.c(a, mu, b);
    m.rep_generators.push_back(J);
  }
  m.gauge = [](const JetVec& Q) { return JetVec{Q[1], Q[2], Q[3]}; };
  m.gauge_domain = [](const Eigen::VectorXd& Q) { return Q(0) > 0.0; };
  m.slice_dim = 1;
  m.slice_chart = [](const Eigen::VectorXd& u) {
    Eigen::VectorXd Q = Eigen::VectorXd::Zero(4);
    Q(0) = u(0);
    return Q;
  };
  m.project_to_slice = [](const Eigen::VectorXd& Q) {
    Eigen::VectorXd P = Eigen::VectorXd::Zero(4);
    P(0) = Q(0);
    return P;
  };
  return m;
}

ModelSpec scale_gauge(const ModelSpec& spec, double s) {
  ModelSpec m = spec;
  auto base = spec.gauge;
  m.gauge = [base, s](const JetVec& Q) {
    JetVec chi = base(Q);
    for (Jet& x : chi) x *= s;
    return chi;
  };
  return m;
}

ModelSpec make_model(const std::string& name, double alpha) {
  if (name == "planar-u1") return make_planar_u1(alpha);
  if (name == "quaternionic-hopf") return make_quaternionic_hopf(alpha);
  throw std::invalid_argument("unknown model '" + name + "'");
}

}  // namespace bcurv
