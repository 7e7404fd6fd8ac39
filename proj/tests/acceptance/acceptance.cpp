// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "bcurv/curvature.hpp"
#include "bcurv/identities.hpp"
#include "bcurv/oracle.hpp"
#include "bcurv/reduction.hpp"
#include "common/random_expr.hpp"

using namespace bcurv;

namespace {

int failures = 0;

void report(int id, const char* what, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, what, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string sci(const char* name, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s %.3g", name, v);
  return buf;
}

struct Case {
  const char* model;
  double alpha;
};
const Case kCases[] = {{"planar-u1", 0.0}, {"planar-u1", 0.1}, {"quaternionic-hopf", 0.0}, {"quaternionic-hopf", 0.1}};

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Criteria 1 and 6 share the same points.
void decomposition_and_hamiltonian() {
  using clock = std::chrono::steady_clock;
  auto t0 = clock::now();
  double worst = 0.0, gap = 0.0, ham = 0.0;
  for (const Case& c : kCases) {
    ModelSpec m = make_model(c.model, c.alpha);
    for (const EvalPoint& p : sample_valid_points(m, 100, 1000).points) {
      CurvatureReport r = decompose_scalar_curvature(m, p);
      const double h = hamiltonian_identity_residual(r);
      worst = std::max(worst, r.normalized_residual());
      ham = std::max(ham, h / r.term_scale());
      gap = std::max(gap, std::abs(h - r.residual));
    }
  }
  const double secs = std::chrono::duration<double>(clock::now() - t0).count();
  report(1, "decomposition identity, 4 x 100 points", worst < 1e-7 && secs < 60.0,
         sci("max normalized residual", worst) + ", " + sci("seconds", secs));
  report(6, "Hamiltonian route", gap < 1e-12 && ham < 1e-7 && worst < 1e-7,
         sci("route gap", gap) + ", " + sci("max normalized residual", ham));
}

JetMatrix conformal(const JetVec& x, double alpha) {
  const int n = static_cast<int>(x.size());
  Jet r2(x[0].nvars(), x[0].order());
  for (const Jet& xi : x) r2 += xi * xi;
  Jet e = exp(2.0 * alpha * r2);
  JetMatrix g(n, n, x[0].nvars(), x[0].order());
  for (int i = 0; i < n; ++i) g(i, i) = e;
  return g;
}

void oracle_soundness() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  double worst = 0.0, flat = 0.0;
  for (double alpha : {0.1, 0.05, -0.1, 0.3})
    for (int t = 0; t < 50; ++t) {
      std::vector<double> x(4);
      double r2 = 0.0;
      for (double& xi : x) r2 += (xi = u(rng)) * xi;
      const double R = holonomic_scalar_curvature(conformal(jet_seed(x, 2), alpha));
      const double ref = conformal_scalar_curvature(4, alpha, r2);
      worst = std::max(worst, std::abs(R - ref) / std::abs(ref));
    }
  for (int t = 0; t < 50; ++t) {
    std::vector<double> x(4);
    for (double& xi : x) xi = u(rng);
    flat = std::max(flat, std::abs(holonomic_scalar_curvature(conformal(jet_seed(x, 2), 0.0))));
  }
  for (const char* name : {"planar-u1", "quaternionic-hopf"}) {
    ModelSpec m = make_model(name, 0.0);
    for (const EvalPoint& p : sample_valid_points(m, 20, 3).points)
      flat = std::max(flat, std::abs(product_scalar_curvature(m, p)));
  }
  report(2, "oracle against the conformal closed form", worst < 1e-9 && flat < 1e-12,
         sci("max relative error", worst) + ", " + sci("flat max", flat));
}

void identity_suites() {
  double worst = 0.0;
  std::string label;
  for (const Case& c : kCases) {
    ModelSpec m = make_model(c.model, c.alpha);
    std::vector<EvalPoint> pts = sample_valid_points(m, 1000, 4000).points;
    for (const IdentityResiduals& r :
         {appendix_a_suite(m, pts), appendix_c_suite(m, pts), pseudoinverse_orthogonality(m, pts)})
      if (r.worst() >= worst) {
        worst = r.worst();
        label = std::string(c.model) + " " + r.worst_label();
      }
  }
  report(3, "projector, Killing and group identity suites, 1000 points per model", worst < 1e-10,
         sci("max residual", worst) + " at " + label);
}

void det_factorization_check() {
  double worst = 0.0, pdet = 0.0;
  for (const Case& c : kCases) {
    ModelSpec m = make_model(c.model, c.alpha);
    for (const EvalPoint& p : sample_valid_points(m, 100, 5000).points) {
      DetFactorization d = det_factorization(m, p);
      worst = std::max(worst, d.residual);
      pdet = std::max(pdet, std::abs(d.det_Pperp - 1.0));
    }
  }
  report(4, "determinant factorization", worst < 1e-10 && pdet < 1e-10,
         sci("max residual", worst) + ", " + sci("|det P_perp - 1|", pdet));
}

void group_curvature_check() {
  std::vector<double> c = make_quaternionic_hopf(0.0).structure;
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    Eigen::Matrix3d A;
    for (int i = 0; i < 9; ++i) A(i) = g(rng);
    Eigen::Matrix3d d = A * A.transpose() + 0.1 * Eigen::Matrix3d::Identity();
    GroupCurvature gc = group_curvature(d, c, 3);
    worst = std::max(worst, std::abs(gc.closed_form - gc.contracted));
  }

  GroupCurvature ab = group_curvature(Eigen::MatrixXd::Constant(1, 1, 2.7), {0.0}, 1);
  const bool abelian = ab.closed_form == 0.0 && ab.contracted == 0.0;

  // Levi-Civita constants, d = lambda * 1, brute-force sum of both terms
  std::vector<double> eps(27);
  for (int i = 0; i < 27; ++i) eps[i] = c[i] / 2;
  auto e = [&](int a, int b, int k) { return eps[(a * 3 + b) * 3 + k]; };
  double bi = 0.0;
  for (double lam : {0.5, 1.0, 2.0, 3.5}) {
    double brute = 0.0;
    for (int m = 0; m < 3; ++m)
      for (int nu = 0; nu < 3; ++nu)
        for (int s = 0; s < 3; ++s)
          for (int a = 0; a < 3; ++a) {
            if (m == nu) brute += 0.5 / lam * e(s, m, a) * e(a, nu, s);
            for (int b = 0; b < 3; ++b)
              for (int ee = 0; ee < 3; ++ee)
                if (m == s && a == b && ee == nu) brute += 0.25 * lam / (lam * lam) * e(m, ee, a) * e(s, nu, b);
          }
    GroupCurvature gc = group_curvature(lam * Eigen::Matrix3d::Identity(), eps, 3);
    bi = std::max({bi, std::abs(gc.closed_form - brute), std::abs(gc.closed_form + 1.5 / lam)});
  }
  report(5, "group curvature", worst < 1e-11 && abelian && bi < 1e-13,
         sci("two-route max", worst) + ", abelian " + (abelian ? "0" : "nonzero") + ", " +
             sci("SU(2) max deviation", bi));
}

void jet_correctness() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst[4] = {0, 0, 0, 0};
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + trial % 3;
    testing::Expr ex = testing::random_expr(rng, n, 6);
    std::vector<double> p(n);
    for (double& v : p) v = u(rng);
    Jet j = testing::eval_expr(ex, jet_seed(p, 3));
    ScalarField f = [&](const std::vector<double>& q) { return testing::eval_expr(ex, q); };
    auto check = [&](int ord, double jv, std::vector<int> dirs) {
      worst[ord] = std::max(worst[ord], std::abs(jv - fd_derivative(f, p, dirs)) / std::max(1.0, std::abs(jv)));
    };
    for (int i = 0; i < n; ++i) {
      check(1, j.d1(i), {i});
      for (int k = i; k < n; ++k) {
        check(2, j.d2(i, k), {i, k});
        for (int l = k; l < n; ++l) check(3, j.d3(i, k, l), {i, k, l});
      }
    }
  }
  const double w = std::max({worst[1], worst[2], worst[3]});
  report(7, "jet partials against finite differences, 1000 composites", w < 1e-6,
         sci("order 1", worst[1]) + ", " + sci("order 2", worst[2]) + ", " + sci("order 3", worst[3]));
}

void gauge_scaling() {
  double worst = 0.0;
  for (const Case& c : kCases) {
    ModelSpec m = make_model(c.model, c.alpha);
    for (const EvalPoint& p : sample_valid_points(m, 10, 8000).points) {
      PointEvaluation base = evaluate_point(m, p);
      ReductionReport rb = reduction_report(base, 1.0, 1.0);
      for (double s : {0.5, 2.0, 10.0}) {
        PointEvaluation ev = evaluate_point(scale_gauge(m, s), p);
        ReductionReport rr = reduction_report(ev, 1.0, 1.0);
        const CurvatureReport &a = base.report, &b = ev.report;
        for (auto [x, y] : {std::pair{b.hR, a.hR}, {b.RG, a.RG}, {b.F2, a.F2}, {b.j2, a.j2},
                            {b.lap_sigma, a.lap_sigma}, {b.quad_sigma, a.quad_sigma}, {b.rhs_sum, a.rhs_sum},
                            {b.oracle_R, a.oracle_R}, {rr.J_tilde, rb.J_tilde}})
          worst = std::max(worst, rel(x, y));
        for (int i = 0; i < rb.drift_P.size(); ++i) worst = std::max(worst, rel(rr.drift_P(i), rb.drift_P(i)));
        for (int i = 0; i < rb.drift_V.size(); ++i) worst = std::max(worst, rel(rr.drift_V(i), rb.drift_V(i)));
      }
    }
  }
  report(8, "invariance under chi -> c chi, c in {0.5, 2, 10}", worst < 1e-9, sci("max relative change", worst));
}

}  // namespace

int main() {
  decomposition_and_hamiltonian();
  oracle_soundness();
  identity_suites();
  det_factorization_check();
  group_curvature_check();
  jet_correctness();
  gauge_scaling();
  return failures;
}
