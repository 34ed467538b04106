#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "gazekit/errors.hpp"

namespace gazekit::nn {

template <typename S>
using Vec = Eigen::Array<S, Eigen::Dynamic, 1>;

template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;  // column-major

// Dense NCHW tensor over a flat buffer. Within one (sample, channel) plane,
// values are row-major: index = ((n*C + c)*H + y)*W + x.
template <typename S>
struct Tensor {
  int n = 0, c = 0, h = 0, w = 0;
  Vec<S> data;

  Tensor() = default;
  Tensor(int n_, int c_, int h_, int w_) : n(n_), c(c_), h(h_), w(w_) {
    data = Vec<S>::Zero(size());
  }

  Eigen::Index size() const {
    return static_cast<Eigen::Index>(n) * c * h * w;
  }

  S* plane(int ni, int ci) {
    return data.data() + (static_cast<Eigen::Index>(ni) * c + ci) * h * w;
  }
  const S* plane(int ni, int ci) const {
    return data.data() + (static_cast<Eigen::Index>(ni) * c + ci) * h * w;
  }

  S& at(int ni, int ci, int y, int x) { return plane(ni, ci)[y * w + x]; }
  S at(int ni, int ci, int y, int x) const { return plane(ni, ci)[y * w + x]; }

  bool same_shape(const Tensor& o) const {
    return n == o.n && c == o.c && h == o.h && w == o.w;
  }

  std::string shape_str() const {
    return "(" + std::to_string(n) + "," + std::to_string(c) + "," + std::to_string(h) + "," +
           std::to_string(w) + ")";
  }
};

template <typename S>
Tensor<S> concat_channels(const Tensor<S>& a, const Tensor<S>& b) {
  if (a.n != b.n || a.h != b.h || a.w != b.w)
    throw ContractError("concat_channels: shape mismatch " + a.shape_str() + " vs " +
                        b.shape_str());
  Tensor<S> out(a.n, a.c + b.c, a.h, a.w);
  const Eigen::Index plane = static_cast<Eigen::Index>(a.h) * a.w;
  for (int ni = 0; ni < a.n; ++ni) {
    for (int ci = 0; ci < a.c; ++ci)
      Eigen::Map<Vec<S>>(out.plane(ni, ci), plane) =
          Eigen::Map<const Vec<S>>(a.plane(ni, ci), plane);
    for (int ci = 0; ci < b.c; ++ci)
      Eigen::Map<Vec<S>>(out.plane(ni, a.c + ci), plane) =
          Eigen::Map<const Vec<S>>(b.plane(ni, ci), plane);
  }
  return out;
}

// Splits a gradient over concat_channels(a, b) back into the two parts.
template <typename S>
void split_channels(const Tensor<S>& g, int c_first, Tensor<S>& ga, Tensor<S>& gb) {
  ga = Tensor<S>(g.n, c_first, g.h, g.w);
  gb = Tensor<S>(g.n, g.c - c_first, g.h, g.w);
  const Eigen::Index plane = static_cast<Eigen::Index>(g.h) * g.w;
  for (int ni = 0; ni < g.n; ++ni) {
    for (int ci = 0; ci < c_first; ++ci)
      Eigen::Map<Vec<S>>(ga.plane(ni, ci), plane) =
          Eigen::Map<const Vec<S>>(g.plane(ni, ci), plane);
    for (int ci = c_first; ci < g.c; ++ci)
      Eigen::Map<Vec<S>>(gb.plane(ni, ci - c_first), plane) =
          Eigen::Map<const Vec<S>>(g.plane(ni, ci), plane);
  }
}

}  // namespace gazekit::nn
