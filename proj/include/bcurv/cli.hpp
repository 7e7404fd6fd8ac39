#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bcurv::cli {

enum ExitCode : int { kPass = 0, kIdentityFailure = 1, kConfigError = 2, kPointRejected = 3 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string model = "planar-u1";
  double alpha = 0.0;
  std::uint64_t seed = 42;
  int points = 100;
  double tol = 1e-7;
  int order = 3;
};

// Flag values; unset fields fall back to the config file, then to defaults.
struct Overrides {
  std::optional<std::string> model;
  std::optional<double> alpha, tol;
  std::optional<std::uint64_t> seed;
  std::optional<int> points, order;
};

// Flat JSON object with keys model, alpha, seed, points, tol, order.
Config load_config(const std::string& path);
Config resolve_config(const std::optional<std::string>& path, const Overrides& o);
void check_config(const Config& c);

// Identity thresholds applied by verify, besides the decomposition tolerance from the config.
inline constexpr double kIdentityTol = 1e-10;
inline constexpr double kDetTol = 1e-10;

int cmd_verify(const Config& c, const std::string& report_path, std::ostream& out, std::ostream& err);

int cmd_evaluate(const Config& c, const std::vector<double>& Q, const std::vector<double>& f, bool project,
                 std::ostream& out, std::ostream& err);

inline constexpr const char* kSweepHeader = "param,hR,RG,F2,j2,lap_sigma,quad_sigma,rhs_sum,oracle_R,residual";

// parameter: alpha, radius or f-norm; samples evenly spaced over [from, to].
int cmd_sweep(const Config& c, const std::string& parameter, double from, double to, int samples, std::ostream& out,
              std::ostream& err);

int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace bcurv::cli
