#pragma once

#include "gazekit/nn/tensor.hpp"

namespace gazekit::nn {

// Patch gather: cols is (Hr*Wr) x (C*k*k), column-major. Row r = hr*Wr + wr
// holds the k*k*C patch anchored at (hr*stride - pad, wr*stride - pad);
// out-of-bounds taps read as zero. Column index is (ci*k + kh)*k + kw.
//
// The (Hr, Wr) grid is passed separately from the image size so the same
// routine serves both convolution (grid = output size) and the transposed
// convolution's gradient gather (grid = input size).
template <typename S>
void im2col(const S* img, int C, int H, int W, int k, int stride, int pad, int Hr, int Wr,
            Mat<S>& cols) {
  cols.resize(static_cast<Eigen::Index>(Hr) * Wr, static_cast<Eigen::Index>(C) * k * k);
  for (int ci = 0; ci < C; ++ci) {
    const S* src = img + static_cast<Eigen::Index>(ci) * H * W;
    for (int kh = 0; kh < k; ++kh)
      for (int kw = 0; kw < k; ++kw) {
        S* dst = cols.data() + ((static_cast<Eigen::Index>(ci) * k + kh) * k + kw) * Hr * Wr;
        for (int hr = 0; hr < Hr; ++hr) {
          const int y = hr * stride - pad + kh;
          S* row_dst = dst + static_cast<Eigen::Index>(hr) * Wr;
          if (y < 0 || y >= H) {
            for (int wr = 0; wr < Wr; ++wr) row_dst[wr] = S(0);
            continue;
          }
          const S* row_src = src + static_cast<Eigen::Index>(y) * W;
          for (int wr = 0; wr < Wr; ++wr) {
            const int x = wr * stride - pad + kw;
            row_dst[wr] = (x < 0 || x >= W) ? S(0) : row_src[x];
          }
        }
      }
  }
}

// Adjoint of im2col: scatter-adds the columns back into the image.
template <typename S>
void col2im_add(const Mat<S>& cols, S* img, int C, int H, int W, int k, int stride, int pad,
                int Hr, int Wr) {
  for (int ci = 0; ci < C; ++ci) {
    S* dst_plane = img + static_cast<Eigen::Index>(ci) * H * W;
    for (int kh = 0; kh < k; ++kh)
      for (int kw = 0; kw < k; ++kw) {
        const S* src =
            cols.data() + ((static_cast<Eigen::Index>(ci) * k + kh) * k + kw) * Hr * Wr;
        for (int hr = 0; hr < Hr; ++hr) {
          const int y = hr * stride - pad + kh;
          if (y < 0 || y >= H) continue;
          const S* row_src = src + static_cast<Eigen::Index>(hr) * Wr;
          S* row_dst = dst_plane + static_cast<Eigen::Index>(y) * W;
          for (int wr = 0; wr < Wr; ++wr) {
            const int x = wr * stride - pad + kw;
            if (x >= 0 && x < W) row_dst[x] += row_src[wr];
          }
        }
      }
  }
}

}  // namespace gazekit::nn
