#include "bcurv/identities.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace bcurv {

namespace {

// Each term is a matrix of the same shape; returns |sum| / (1 + max |term|).
double rel_sum(std::initializer_list<Eigen::MatrixXd> terms) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(terms.begin()->rows(), terms.begin()->cols());
  double scale = 0.0;
  for (const Eigen::MatrixXd& t : terms) {
    s += t;
    if (t.size() > 0) scale = std::max(scale, t.cwiseAbs().maxCoeff());
  }
  return s.size() == 0 ? 0.0 : s.cwiseAbs().maxCoeff() / (1.0 + scale);
}

double rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return rel_sum({a, -b}); }

constexpr int kIdentityOrder = 2;

}  // namespace

IdentityResiduals appendix_a_suite(const ModelSpec& spec, const std::vector<EvalPoint>& points) {
  IdentityResiduals res;
  const int nP = spec.nP, nV = spec.nV, nG = spec.nG, n = nP + nV;
  for (const EvalPoint& p : points) {
    FrameState fs = build_frame(spec, p, kIdentityOrder);
    Eigen::MatrixXd N = fs.N.values(), Pi = fs.Pi.values(), K = fs.K.values(), GH = fs.GH.values();
    Eigen::MatrixXd Pp = fs.Pperp_composite().values();
    res.record("proj.Pi_Pi", rel_diff(Pi * Pi, Pi));
    res.record("proj.N_N", rel_diff(N * N, N));
    res.record("proj.N_Pi", rel_diff(N * Pi, N));
    res.record("proj.Pi_N", rel_diff(Pi * N, Pi));
    res.record("proj.Pi_K", rel_sum({Pi * K}));
    res.record("proj.N_K", rel_sum({N * K}));
    res.record("proj.N_Pperp", rel_diff(N * Pp, Pp));
    res.record("proj.Pperp_N", rel_diff(Pp * N, N));
    res.record("proj.Pperp_Pperp", rel_diff(Pp * Pp, Pp));
    res.record("proj.K_GH", rel_sum({K.transpose() * GH}));

    std::vector<Eigen::MatrixXd> dGH, dK;
    for (int X = 0; X < n; ++X) {
      dGH.push_back(fs.GH.partial(X).values());
      dK.push_back(fs.K.partial(X).values());
    }
    Eigen::MatrixXd KP = K.topRows(nP), KV = K.bottomRows(nV);
    auto blk = [&](const Eigen::MatrixXd& m, int r0, int nr, int c0, int nc) {
      return Eigen::MatrixXd(m.block(r0, c0, nr, nc));
    };
    for (int g = 0; g < nG; ++g) {
      // (A) d/dQ^D of K^R G^H_RA + K^p G^H_pA, rows A
      for (int D = 0; D < nP; ++D)
        res.record("A", rel_sum({blk(GH, 0, nP, 0, nP).transpose() * dK[D].block(0, g, nP, 1),
                                 blk(dGH[D], 0, nP, 0, nP).transpose() * KP.col(g),
                                 blk(dGH[D], nP, nV, 0, nP).transpose() * KV.col(g)}));
      // (D) d/df^q of G^H_AR K^R + G^H_Ap K^p, rows A
      for (int q = nP; q < n; ++q)
        res.record("D", rel_sum({blk(dGH[q], 0, nP, 0, nP) * KP.col(g), blk(dGH[q], 0, nP, nP, nV) * KV.col(g),
                                 blk(GH, 0, nP, nP, nV) * dK[q].block(nP, g, nV, 1)}));
      // (B) d/df^n of G^H_pR K^R + G^H_pr K^r, rows p
      for (int m = nP; m < n; ++m)
        res.record("B", rel_sum({blk(dGH[m], nP, nV, 0, nP) * KP.col(g), blk(dGH[m], nP, nV, nP, nV) * KV.col(g),
                                 blk(GH, nP, nV, nP, nV) * dK[m].block(nP, g, nV, 1)}));
      // (C) d/dQ^D of the same, rows p
      for (int D = 0; D < nP; ++D)
        res.record("C", rel_sum({blk(dGH[D], nP, nV, 0, nP) * KP.col(g), blk(dGH[D], nP, nV, nP, nV) * KV.col(g),
                                 blk(GH, nP, nV, 0, nP) * dK[D].block(0, g, nP, 1)}));

      // Killing: G^H_{XY,D} K^D + G^H_{RY} K^R_{,X} + G^H_{XR} K^R_{,Y}
      Eigen::MatrixXd lie = Eigen::MatrixXd::Zero(n, n), t2(n, n), t3(n, n);
      for (int D = 0; D < n; ++D) lie += dGH[D] * K(D, g);
      for (int X = 0; X < n; ++X)
        for (int Y = 0; Y < n; ++Y) {
          double a = 0.0, b = 0.0;
          for (int R = 0; R < n; ++R) {
            a += GH(R, Y) * dK[X](R, g);
            b += GH(X, R) * dK[Y](R, g);
          }
          t2(X, Y) = a;
          t3(X, Y) = b;
        }
      auto kill = [&](int r0, int nr, int c0, int nc) {
        return rel_sum({blk(lie, r0, nr, c0, nc), blk(t2, r0, nr, c0, nc), blk(t3, r0, nr, c0, nc)});
      };
      res.record("killing.I", kill(0, nP, 0, nP));
      res.record("killing.II", kill(nP, nV, nP, nV));
      res.record("killing.III", kill(nP, nV, 0, nP));
      res.record("killing.IV", kill(0, nP, nP, nV));
      Eigen::MatrixXd L = lie + t2 + t3;
      res.record("killing.IV_eq_III", rel_diff(blk(L, 0, nP, nP, nV), blk(L, nP, nV, 0, nP).transpose()));
    }
    res.point_count += 1;
  }
  return res;
}

IdentityResiduals appendix_c_suite(const ModelSpec& spec, const std::vector<EvalPoint>& points) {
  IdentityResiduals res;
  const int nP = spec.nP, nG = spec.nG, n = nP + spec.nV;
  for (const EvalPoint& p : points) {
    FrameState fs = build_frame(spec, p, kIdentityOrder);
    Eigen::MatrixXd K = fs.K.values(), d = fs.d.values(), di = fs.d_inv.values(), N = fs.N.values(),
                    h = fs.h.values();
    std::vector<Eigen::MatrixXd> dd;
    for (int E = 0; E < n; ++E) dd.push_back(fs.d.partial(E).values());

    for (int a = 0; a < nG; ++a) {
      Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(nG, nG), rhs(nG, nG);
      for (int E = 0; E < n; ++E) lhs += K(E, a) * dd[E];
      for (int mu = 0; mu < nG; ++mu)
        for (int nu = 0; nu < nG; ++nu) {
          double v = 0.0;
          for (int s = 0; s < nG; ++s) v += d(nu, s) * fs.c(s, a, mu) + d(mu, s) * fs.c(s, a, nu);
          rhs(mu, nu) = v;
        }
      res.record("i", rel_diff(lhs, rhs));
      Eigen::MatrixXd tr(1, 1);
      tr(0, 0) = (di.array() * lhs.array()).sum();
      res.record("ii", rel_sum({tr}));
    }

    Eigen::VectorXd sg(n);
    for (int i = 0; i < n; ++i) sg(i) = fs.sigma.d1(i);
    res.record("iii", rel_diff(N.transpose() * sg, sg));

    // h^{BM} N^X_{B,M} sigma_X, B and M over P, split into the P and V parts of X
    double sP = 0.0, sV = 0.0;
    for (int M = 0; M < nP; ++M) {
      Eigen::MatrixXd dN = fs.N.partial(M).values();
      for (int B = 0; B < nP; ++B) {
        sP += h(B, M) * dN.col(B).head(nP).dot(sg.head(nP));
        sV += h(B, M) * dN.col(B).tail(spec.nV).dot(sg.tail(spec.nV));
      }
    }
    res.record("iv", std::abs(sP + sV) / (1.0 + std::max(std::abs(sP), std::abs(sV))));
    res.point_count += 1;
  }
  return res;
}

IdentityResiduals pseudoinverse_orthogonality(const ModelSpec& spec, const std::vector<EvalPoint>& points) {
  IdentityResiduals res;
  const int nP = spec.nP, nG = spec.nG, n = nP + spec.nV;
  for (const EvalPoint& p : points) {
    FrameState fs = build_frame(spec, p, 1);
    res.record("orth.frame", rel_diff(fs.h.values() * fs.GH.values(), fs.N.values()));
    Eigen::MatrixXd target = Eigen::MatrixXd::Identity(n + nG, n + nG);
    target.topLeftCorner(nP, nP) = fs.Pperp.values();
    Eigen::MatrixXd prod = adapted_pseudoinverse(fs) * adapted_metric(fs);
    res.record("orth.adapted", rel_diff(prod, target));
    res.record("orth.group_block",
               rel_diff(prod.bottomRightCorner(nG, nG), Eigen::MatrixXd::Identity(nG, nG)));
    res.point_count += 1;
  }
  return res;
}

PointSample sample_valid_points(const ModelSpec& spec, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PointSample s;
  while (static_cast<int>(s.points.size()) < count) {
    EvalPoint p = sample_eval_point(spec, rng);
    try {
      build_frame(spec, p, 1);
      s.points.push_back(p);
    } catch (const PointRejected&) {
      ++s.rejected;
    }
  }
  return s;
}

}  // namespace bcurv
