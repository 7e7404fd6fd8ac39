#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "bcurv/model.hpp"

using namespace bcurv;

namespace {

std::vector<EvalPoint> random_domain_points(const ModelSpec& m, int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.5, 1.5), r(0.3, 2.0), uf(-1, 1);
  std::vector<EvalPoint> pts;
  while (static_cast<int>(pts.size()) < count) {
    Eigen::VectorXd Q(m.nP), f(m.nV);
    for (int i = 0; i < m.nP; ++i) Q(i) = u(rng);
    Q(0) = r(rng);
    for (int i = 0; i < m.nV; ++i) f(i) = uf(rng);
    if (m.gauge_domain(Q)) pts.push_back(make_eval_point(m, Q, f));
  }
  return pts;
}

double eps3(int a, int b, int c) { return 0.5 * (a - b) * (b - c) * (c - a); }

}  // namespace

TEST_CASE("killing_V is the linear generator action") {
  ModelSpec m = make_planar_u1(0.0);
  JetMatrix K0 = killing_V(m, jet_seed({0.0, 0.0}, 1));
  CHECK(max_abs_value(K0) == 0.0);

  JetMatrix K = killing_V(m, jet_seed({1.0, 0.0}, 1));
  CHECK(K(0, 0).value() == 0.0);
  CHECK(K(1, 0).value() == 1.0);
  for (int q = 0; q < 2; ++q)
    for (int p = 0; p < 2; ++p) CHECK(K(q, 0).d1(p) == m.rep_generators[0](q, p));
}

TEST_CASE("planar-u1 validates") {
  ModelSpec m = make_planar_u1(0.0);
  auto res = validate_model(m, random_domain_points(m, 100, 1));
  CHECK(res.worst() < 1e-12);
  CHECK(res.point_count == 100);

  ModelSpec m1 = make_planar_u1(0.1);
  CHECK(validate_model(m1, random_domain_points(m1, 100, 2)).worst() < 1e-12);
}

TEST_CASE("quaternionic-hopf structure") {
  ModelSpec m = make_quaternionic_hopf(0.1);
  // measured constants: c^g_{ab} = 2 eps_{abg}
  for (int g = 0; g < 3; ++g)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) CHECK(std::abs(m.c(g, a, b) - 2 * eps3(a, b, g)) < 1e-14);

  // at Q = 1 the Killing vectors are orthogonal with squared norm e^{2 alpha}
  JetVec q = jet_seed({1.0, 0.0, 0.0, 0.0}, 0);
  Eigen::MatrixXd K = m.killing_P(q).values();
  Eigen::MatrixXd G = m.metric_P(q).values();
  Eigen::MatrixXd gram = K.transpose() * G * K;
  CHECK((gram - std::exp(0.2) * Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);

  auto res = validate_model(m, random_domain_points(m, 100, 3));
  CHECK(res.worst() < 1e-10);
  CHECK(res.diagnostics.at("phi_min_abs_det") > 0.0);
}

TEST_CASE("killing_V commutators reproduce the structure constants") {
  ModelSpec m = make_quaternionic_hopf(0.0);
  JetMatrix K = killing_V(m, jet_seed({0.3, -0.8, 0.5}, 1));
  double worst = 0.0;
  for (int mu = 0; mu < 3; ++mu)
    for (int g = 0; g < 3; ++g)
      for (int t = 0; t < 3; ++t) {
        double br = 0.0;
        for (int r = 0; r < 3; ++r) br += K(r, mu).value() * K(t, g).d1(r) - K(r, g).value() * K(t, mu).d1(r);
        for (int s = 0; s < 3; ++s) br -= m.c(s, mu, g) * K(t, s).value();
        worst = std::max(worst, std::abs(br));
      }
  CHECK(worst < 1e-13);
}

TEST_CASE("wrong structure constant sign is rejected") {
  ModelSpec m = make_quaternionic_hopf(0.0);
  auto pts = random_domain_points(m, 5, 4);

  ModelSpec flipped = m;
  for (double& v : flipped.structure) v = -v;
  flipped.rep_generators = m.rep_generators;
  try {
    validate_model(flipped, pts);
    FAIL("flipped constants accepted");
  } catch (const ModelRejected& e) {
    CHECK(e.value > 0.1);
  }

  ModelSpec one = m;
  one.c(2, 0, 1) = -one.c(2, 0, 1);
  CHECK_THROWS_AS(validate_model(one, pts), ModelRejected);
}

TEST_CASE("non-invariant V metric is rejected") {
  ModelSpec m = make_planar_u1(0.0);
  m.metric_V(0, 0) = 2.0;
  try {
    validate_model(m, {});
    FAIL("accepted");
  } catch (const ModelRejected& e) {
    CHECK(e.check == "killing_G_V");
  }
}

TEST_CASE("on-gauge flag and sampling") {
  ModelSpec m = make_quaternionic_hopf(0.0);
  Eigen::VectorXd Q(4), f = Eigen::VectorXd::Zero(3);
  Q << 1.3, 0, 0, 0;
  CHECK(make_eval_point(m, Q, f).on_gauge);
  Q(2) = 1e-3;
  CHECK_FALSE(make_eval_point(m, Q, f).on_gauge);

  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    EvalPoint p = sample_eval_point(m, rng);
    CHECK(p.on_gauge);
    CHECK(p.Q(0) >= 0.5);
    CHECK(p.Q(0) <= 2.0);
    CHECK(p.f.cwiseAbs().maxCoeff() <= 1.0);
  }
  CHECK_THROWS_AS(make_model("torus", 0.0), std::invalid_argument);
}

TEST_CASE("scale_gauge multiplies chi") {
  ModelSpec m = scale_gauge(make_planar_u1(0.0), 10.0);
  JetVec q = jet_seed({1.0, 0.5}, 1);
  CHECK(m.gauge(q)[0].value() == doctest::Approx(5.0));
  CHECK(m.gauge(q)[0].d1(1) == doctest::Approx(10.0));
}
