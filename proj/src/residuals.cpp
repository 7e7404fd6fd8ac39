#include "bcurv/residuals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bcurv {

void IdentityResiduals::record(const std::string& label, double r) {
  if (!std::isfinite(r)) r = std::numeric_limits<double>::infinity();
  auto [it, fresh] = residuals.emplace(label, r);
  if (!fresh) it->second = std::max(it->second, r);
}

void IdentityResiduals::record_min(const std::string& label, double v) {
  auto [it, fresh] = diagnostics.emplace(label, v);
  if (!fresh) it->second = std::min(it->second, v);
}

void IdentityResiduals::merge(const IdentityResiduals& other) {
  for (const auto& [k, v] : other.residuals) record(k, v);
  for (const auto& [k, v] : other.diagnostics) record_min(k, v);
  point_count += other.point_count;
}

double IdentityResiduals::worst() const {
  double w = 0.0;
  for (const auto& kv : residuals) w = std::max(w, kv.second);
  return w;
}

std::string IdentityResiduals::worst_label() const {
  std::string label;
  double w = -1.0;
  for (const auto& [k, v] : residuals)
    if (v > w) {
      w = v;
      label = k;
    }
  return label;
}

}  // namespace bcurv
