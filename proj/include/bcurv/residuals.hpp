#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace bcurv {

// Named residuals, each the max over tensor components and points.
// Diagnostics hold values that are not residuals (e.g. min |det Phi|).
struct IdentityResiduals {
  std::map<std::string, double> residuals;
  std::map<std::string, double> diagnostics;
  int point_count = 0;
  std::uint64_t seed = 0;

  void record(const std::string& label, double r);
  void record_min(const std::string& label, double v);
  void merge(const IdentityResiduals& other);
  double worst() const;
  std::string worst_label() const;
};

}  // namespace bcurv
