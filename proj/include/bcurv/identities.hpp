#pragma once

#include <cstdint>
#include <vector>

#include "bcurv/frame.hpp"
#include "bcurv/model.hpp"
#include "bcurv/residuals.hpp"

namespace bcurv {

// Residuals are max-norm over components, each divided by 1 + max |operand|,
// then maximized over points.

// Projector laws, derivatives of K G^H = 0 (labels A..D) and Killing relations I..IV.
IdentityResiduals appendix_a_suite(const ModelSpec& spec, const std::vector<EvalPoint>& points);

// (i) K d-derivative against dc + dc, (ii) its d-trace, (iii) N sigma = sigma, (iv) h dN sigma = 0.
IdentityResiduals appendix_c_suite(const ModelSpec& spec, const std::vector<EvalPoint>& points);

// h G^H = N in the frame basis, and the adapted pseudoinverse times the adapted metric.
IdentityResiduals pseudoinverse_orthogonality(const ModelSpec& spec, const std::vector<EvalPoint>& points);

// Seeded on-gauge sample; points where the frame is rejected are redrawn and counted.
struct PointSample {
  std::vector<EvalPoint> points;
  int rejected = 0;
};
PointSample sample_valid_points(const ModelSpec& spec, int count, std::uint64_t seed);

}  // namespace bcurv
