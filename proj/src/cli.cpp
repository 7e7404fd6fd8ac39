#include "bcurv/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bcurv/curvature.hpp"
#include "bcurv/identities.hpp"
#include "bcurv/model.hpp"
#include "bcurv/reduction.hpp"

namespace bcurv::cli {

using nlohmann::json;

namespace {

json to_json(const Eigen::MatrixXd& m) {
  if (m.rows() == 1 && m.cols() == 1) return m(0, 0);
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (int j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

json to_json_vec(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

void write_json(const json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write report " + path);
  f << j.dump(2) << "\n";
}

ModelSpec model_for(const Config& c) { return make_model(c.model, c.alpha); }

template <class T>
T take(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

Config load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a flat JSON object");
  Config c;
  for (const auto& [key, value] : j.items()) {
    if (key == "model") c.model = take<std::string>(j, "model");
    else if (key == "alpha") c.alpha = take<double>(j, "alpha");
    else if (key == "seed") c.seed = take<std::uint64_t>(j, "seed");
    else if (key == "points") c.points = take<int>(j, "points");
    else if (key == "tol") c.tol = take<double>(j, "tol");
    else if (key == "order") c.order = take<int>(j, "order");
    else throw ConfigError("unknown config key '" + key + "'");
    (void)value;
  }
  return c;
}

Config resolve_config(const std::optional<std::string>& path, const Overrides& o) {
  Config c = path ? load_config(*path) : Config{};
  if (o.model) c.model = *o.model;
  if (o.alpha) c.alpha = *o.alpha;
  if (o.seed) c.seed = *o.seed;
  if (o.points) c.points = *o.points;
  if (o.tol) c.tol = *o.tol;
  if (o.order) c.order = *o.order;
  check_config(c);
  return c;
}

void check_config(const Config& c) {
  if (c.model != "planar-u1" && c.model != "quaternionic-hopf") throw ConfigError("unknown model '" + c.model + "'");
  if (!std::isfinite(c.alpha)) throw ConfigError("alpha must be finite");
  if (c.points < 1) throw ConfigError("points must be >= 1");
  if (!(c.tol > 0)) throw ConfigError("tol must be positive");
  if (c.order < 2 || c.order > 3) throw ConfigError("order must be 2 or 3");
}

int cmd_verify(const Config& c, const std::string& report_path, std::ostream& out, std::ostream& err) {
  ModelSpec spec = model_for(c);
  PointSample sample = sample_valid_points(spec, c.points, c.seed);
  if (sample.rejected > 0) err << "resampled " << sample.rejected << " rejected points\n";

  json residuals = json::object(), thresholds = json::object(), pass = json::object();
  bool ok = true;
  auto put = [&](const std::string& label, double value, double tol) {
    residuals[label] = value;
    thresholds[label] = tol;
    const bool good = std::isfinite(value) && value < tol;
    pass[label] = good;
    ok = ok && good;
  };

  try {
    IdentityResiduals v = validate_model(spec, sample.points);
    for (const auto& [k, r] : v.residuals) put("model." + k, r, kIdentityTol);
  } catch (const ModelRejected& e) {
    put("model." + e.check, e.value, kIdentityTol);
  }
  for (const auto& [k, r] : appendix_a_suite(spec, sample.points).residuals) put("appendix_a." + k, r, kIdentityTol);
  for (const auto& [k, r] : appendix_c_suite(spec, sample.points).residuals) put("appendix_c." + k, r, kIdentityTol);
  for (const auto& [k, r] : pseudoinverse_orthogonality(spec, sample.points).residuals) put(k, r, kIdentityTol);

  double det = 0.0, decomp = 0.0, ham = 0.0;
  for (const EvalPoint& p : sample.points) {
    det = std::max(det, det_factorization(spec, p).residual);
    CurvatureReport r = decompose_scalar_curvature(spec, p, c.order);
    decomp = std::max(decomp, r.normalized_residual());
    ham = std::max(ham, std::abs(hamiltonian_identity_residual(r) - r.residual));
  }
  put("det_factorization", det, kDetTol);
  put("decomposition", decomp, c.tol);
  put("hamiltonian_route_gap", ham, 1e-12);

  json report = {{"schema", 1},
                 {"command", "verify"},
                 {"model", c.model},
                 {"alpha", c.alpha},
                 {"seed", c.seed},
                 {"points", c.points},
                 {"order", c.order},
                 {"tol", c.tol},
                 {"rejected_points", sample.rejected},
                 {"residuals", residuals},
                 {"thresholds", thresholds},
                 {"pass", pass},
                 {"max_decomposition_residual", decomp},
                 {"passed", ok}};
  write_json(report, report_path, out);
  if (!ok) err << "verify failed\n";
  return ok ? kPass : kIdentityFailure;
}

int cmd_evaluate(const Config& c, const std::vector<double>& Qv, const std::vector<double>& fv, bool project,
                 std::ostream& out, std::ostream& err) {
  ModelSpec spec = model_for(c);
  if (static_cast<int>(Qv.size()) != spec.nP || static_cast<int>(fv.size()) != spec.nV)
    throw ConfigError("point needs " + std::to_string(spec.nP) + " Q and " + std::to_string(spec.nV) +
                      " f components");
  Eigen::VectorXd Q = Eigen::Map<const Eigen::VectorXd>(Qv.data(), spec.nP);
  Eigen::VectorXd f = Eigen::Map<const Eigen::VectorXd>(fv.data(), spec.nV);
  if (project) Q = spec.project_to_slice(Q);
  EvalPoint p = make_eval_point(spec, Q, f);
  if (!p.on_gauge) {
    err << "point is off the gauge surface (use --project)\n";
    return kPointRejected;
  }

  PointEvaluation ev;
  try {
    ev = evaluate_point(spec, p, c.order);
  } catch (const PointRejected& e) {
    err << "point rejected: " << e.what() << "\n";
    return kPointRejected;
  }
  const FrameState& fs = ev.frame;
  DetFactorization df = det_factorization(fs);
  ReductionReport rr = reduction_report(ev, 1.0, 1.0);
  const CurvatureReport& r = ev.report;
  const ChristoffelTable& t = ev.table;

  json F = json::array();
  for (const JetMatrix& m : fs.F) F.push_back(to_json(m.values()));
  Eigen::VectorXd grad(fs.n);
  for (int i = 0; i < fs.n; ++i) grad(i) = fs.sigma.d1(i);

  json frame = {{"phi", to_json(fs.phi.values())},
                {"lambda", to_json(fs.lambda.values())},
                {"N", to_json(fs.N.values())},
                {"Pperp", to_json(fs.Pperp.values())},
                {"gamma", to_json(fs.gamma.values())},
                {"gamma_prime", to_json(fs.gamma_prime.values())},
                {"d", to_json(fs.d.values())},
                {"sigma", fs.sigma.value()},
                {"sigma_grad", to_json_vec(grad)},
                {"conn", to_json(fs.conn.values())},
                {"F", F},
                {"GH", to_json(fs.GH.values())},
                {"h", to_json(fs.h.values())},
                {"det_factorization",
                 {{"det_G", df.det_G}, {"det_d", df.det_d}, {"H", df.H}, {"det_Pperp", df.det_Pperp},
                  {"residual", df.residual}}}};
  json christoffel = {{"lowered_max_abs", max_abs(values(t.lowered))},
                      {"raised_max_abs", max_abs(values(t.raised))},
                      {"group_max_abs", max_abs(t.group)},
                      {"hh_h_max_abs", max_abs(t.hh_h)},
                      {"hg_h_max_abs", max_abs(t.hg_h)},
                      {"hh_g_max_abs", max_abs(t.hh_g)},
                      {"hg_g_max_abs", max_abs(t.hg_g)},
                      {"gg_h_max_abs", max_abs(t.gg_h)}};
  json curvature = {{"hR", r.hR},
                    {"RG", r.RG},
                    {"F2", r.F2},
                    {"j2", r.j2},
                    {"lap_sigma", r.lap_sigma},
                    {"quad_sigma", r.quad_sigma},
                    {"rhs_sum", r.rhs_sum},
                    {"oracle_R", r.oracle_R},
                    {"residual", r.residual},
                    {"normalized_residual", r.normalized_residual()}};
  json reduction = {{"mu", rr.mu},
                    {"kappa", rr.kappa},
                    {"J_tilde", rr.J_tilde},
                    {"J", rr.J},
                    {"jI_P", to_json_vec(rr.jI_P)},
                    {"jI_V", to_json_vec(rr.jI_V)},
                    {"drift_P", to_json_vec(rr.drift_P)},
                    {"drift_V", to_json_vec(rr.drift_V)},
                    {"hamiltonian_residual", rr.hamiltonian_residual},
                    {"tangency", rr.tangency}};
  json doc = {{"schema", 1},
              {"command", "evaluate"},
              {"model", c.model},
              {"alpha", c.alpha},
              {"order", c.order},
              {"point", {{"Q", to_json_vec(Q)}, {"f", to_json_vec(f)}, {"projected", project}}},
              {"frame", frame},
              {"christoffel", christoffel},
              {"curvature", curvature},
              {"reduction", reduction}};
  out << doc.dump(2) << "\n";
  return kPass;
}

int cmd_sweep(const Config& c, const std::string& parameter, double from, double to, int samples, std::ostream& out,
              std::ostream& err) {
  if (parameter != "alpha" && parameter != "radius" && parameter != "f-norm")
    throw ConfigError("sweep parameter must be alpha, radius or f-norm");
  if (samples < 1 || !std::isfinite(from) || !std::isfinite(to)) throw ConfigError("empty sweep range");

  out << kSweepHeader << "\n";
  int status = kPass;
  for (int i = 0; i < samples; ++i) {
    const double v = samples == 1 ? from : from + (to - from) * i / (samples - 1);
    ModelSpec spec = make_model(c.model, parameter == "alpha" ? v : c.alpha);
    Eigen::VectorXd u(spec.slice_dim);
    u.setConstant(parameter == "radius" ? v : 1.2);
    const double fn = parameter == "f-norm" ? v : 0.7;
    Eigen::VectorXd f = Eigen::VectorXd::Constant(spec.nV, fn / std::sqrt(double(spec.nV)));
    EvalPoint p = make_eval_point(spec, spec.slice_chart(u), f);
    CurvatureReport r;
    try {
      r = decompose_scalar_curvature(spec, p, c.order);
    } catch (const PointRejected& e) {
      err << "sample " << i << " rejected: " << e.what() << "\n";
      status = kPointRejected;
      continue;
    }
    out << fmt(v) << ',' << fmt(r.hR) << ',' << fmt(r.RG) << ',' << fmt(r.F2) << ',' << fmt(r.j2) << ','
        << fmt(r.lap_sigma) << ',' << fmt(r.quad_sigma) << ',' << fmt(r.rhs_sum) << ',' << fmt(r.oracle_R) << ','
        << fmt(r.residual) << "\n";
  }
  return status;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curvature decomposition checks on gauge-fixed bundle models"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  Overrides o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "flat JSON config");
    sub->add_option("--model", o.model, "planar-u1 or quaternionic-hopf");
    sub->add_option("--alpha", o.alpha, "conformal factor exponent");
    sub->add_option("--seed", o.seed, "sampling seed");
    sub->add_option("--points", o.points, "number of sample points");
    sub->add_option("--tol", o.tol, "decomposition tolerance");
    sub->add_option("--order", o.order, "jet order (2 or 3)");
  };

  std::string report;
  CLI::App* verify = app.add_subcommand("verify", "run every identity suite over seeded points");
  common(verify);
  verify->add_option("--report", report, "write the JSON report here instead of stdout");

  std::vector<double> Q, f;
  bool project = false;
  CLI::App* evaluate = app.add_subcommand("evaluate", "all quantities at one point as JSON");
  common(evaluate);
  evaluate->add_option("--Q", Q, "Q components, comma separated")->delimiter(',')->required();
  evaluate->add_option("--f", f, "f components, comma separated")->delimiter(',')->required();
  evaluate->add_flag("--project", project, "project Q onto the gauge slice first");

  std::string parameter;
  double from = 0, to = 0;
  int samples = 11;
  CLI::App* sweep = app.add_subcommand("sweep", "decomposition terms along a parameter, as CSV");
  common(sweep);
  sweep->add_option("--param", parameter, "alpha, radius or f-norm")->required();
  sweep->add_option("--from", from, "first value")->required();
  sweep->add_option("--to", to, "last value")->required();
  sweep->add_option("--samples", samples, "number of samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kConfigError;
  }

  try {
    Config c = resolve_config(config_path, o);
    if (verify->parsed()) return cmd_verify(c, report, out, err);
    if (evaluate->parsed()) return cmd_evaluate(c, Q, f, project, out, err);
    return cmd_sweep(c, parameter, from, to, samples, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace bcurv::cli
