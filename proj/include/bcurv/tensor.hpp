#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "bcurv/jet.hpp"

namespace bcurv {

// Dense rank-3 array, row-major in (i, j, k).
template <class T>
struct Array3 {
  int n0 = 0, n1 = 0, n2 = 0;
  std::vector<T> v;

  Array3() = default;
  Array3(int a, int b, int c, const T& fill = T()) : n0(a), n1(b), n2(c), v(std::size_t(a) * b * c, fill) {}

  T& operator()(int i, int j, int k) { return v[(std::size_t(i) * n1 + j) * n2 + k]; }
  const T& operator()(int i, int j, int k) const { return v[(std::size_t(i) * n1 + j) * n2 + k]; }

  Array3 slice(int i0, int j0, int k0, int a, int b, int c) const {
    Array3 out(a, b, c, T());
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < b; ++j)
        for (int k = 0; k < c; ++k) out(i, j, k) = (*this)(i0 + i, j0 + j, k0 + k);
    return out;
  }
};

using Tensor3 = Array3<double>;
using JetArray3 = Array3<Jet>;

inline double max_abs(const Tensor3& t) {
  double m = 0.0;
  for (double x : t.v) m = std::max(m, std::abs(x));
  return m;
}

inline Tensor3 values(const JetArray3& t) {
  Tensor3 out(t.n0, t.n1, t.n2);
  for (std::size_t i = 0; i < t.v.size(); ++i) out.v[i] = t.v[i].value();
  return out;
}

}  // namespace bcurv
