/* Copyright 2026 The rgbd-inpaint Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef RGBDINPAINT_CONV_HPP_
#define RGBDINPAINT_CONV_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "rgbdinpaint/common.hpp"
#include "rgbdinpaint/ops.hpp"
#include "rgbdinpaint/tensor.hpp"

namespace rgbdinpaint {

struct Conv2dAttrs {
  int64_t stride_h = 1, stride_w = 1;
  int64_t pad_h = 0, pad_w = 0;
  int64_t dil_h = 1, dil_w = 1;
};

inline int64_t conv_out_extent(int64_t in, int64_t k, int64_t stride, int64_t pad, int64_t dil) {
  int64_t span = in + 2 * pad - dil * (k - 1) - 1;
  if (span < 0 || stride < 1)
    throw ShapeError("conv2d: non-positive output extent (input " + std::to_string(in) +
                     ", kernel " + std::to_string(k) + ", stride " + std::to_string(stride) +
                     ", pad " + std::to_string(pad) + ", dilation " + std::to_string(dil) + ")");
  return span / stride + 1;
}

template <typename T>
Tensor<T> conv2d(const Tensor<T>& input, const Tensor<T>& weight, const Tensor<T>& bias,
                 const Conv2dAttrs& attrs);
template <typename T>
Tensor<T> conv2d_grad_input(const Tensor<T>& gout, const Tensor<T>& weight,
                            const Shape& input_shape, const Conv2dAttrs& attrs);
template <typename T>
Tensor<T> conv2d_grad_weight(const Tensor<T>& gout, const Tensor<T>& input,
                             const Shape& weight_shape, const Conv2dAttrs& attrs);

namespace detail {

// input plane (C,H,W) -> cols (C*kh*kw, OH*OW), zero outside the image.
// Cross-correlation convention: no kernel flip anywhere.
template <typename T>
void im2col(const T* in, int64_t c_ch, int64_t h, int64_t w, int64_t kh, int64_t kw,
            const Conv2dAttrs& a, int64_t oh, int64_t ow, T* cols) {
  for (int64_t c = 0; c < c_ch; ++c) {
    for (int64_t ki = 0; ki < kh; ++ki) {
      for (int64_t kj = 0; kj < kw; ++kj) {
        T* dst = cols + ((c * kh + ki) * kw + kj) * oh * ow;
        for (int64_t oy = 0; oy < oh; ++oy) {
          int64_t iy = oy * a.stride_h - a.pad_h + ki * a.dil_h;
          if (iy < 0 || iy >= h) {
            for (int64_t ox = 0; ox < ow; ++ox) dst[oy * ow + ox] = T(0);
            continue;
          }
          const T* src_row = in + (c * h + iy) * w;
          for (int64_t ox = 0; ox < ow; ++ox) {
            int64_t ix = ox * a.stride_w - a.pad_w + kj * a.dil_w;
            dst[oy * ow + ox] = (ix >= 0 && ix < w) ? src_row[ix] : T(0);
          }
        }
      }
    }
  }
}

// Adjoint of im2col: scatter-adds cols back into the image plane.
template <typename T>
void col2im(const T* cols, int64_t c_ch, int64_t h, int64_t w, int64_t kh, int64_t kw,
            const Conv2dAttrs& a, int64_t oh, int64_t ow, T* out) {
  for (int64_t c = 0; c < c_ch; ++c) {
    for (int64_t ki = 0; ki < kh; ++ki) {
      for (int64_t kj = 0; kj < kw; ++kj) {
        const T* src = cols + ((c * kh + ki) * kw + kj) * oh * ow;
        for (int64_t oy = 0; oy < oh; ++oy) {
          int64_t iy = oy * a.stride_h - a.pad_h + ki * a.dil_h;
          if (iy < 0 || iy >= h) continue;
          T* dst_row = out + (c * h + iy) * w;
          for (int64_t ox = 0; ox < ow; ++ox) {
            int64_t ix = ox * a.stride_w - a.pad_w + kj * a.dil_w;
            if (ix >= 0 && ix < w) dst_row[ix] += src[oy * ow + ox];
          }
        }
      }
    }
  }
}

template <typename T>
std::vector<T> transpose_copy(const T* src, int64_t rows, int64_t cols_n) {
  std::vector<T> out(static_cast<size_t>(rows * cols_n));
  for (int64_t i = 0; i < rows; ++i)
    for (int64_t j = 0; j < cols_n; ++j) out[static_cast<size_t>(j * rows + i)] = src[i * cols_n + j];
  return out;
}

struct ConvDims {
  int64_t batch, in_ch, in_h, in_w;
  int64_t out_ch, kh, kw;
  int64_t out_h, out_w;
};

inline ConvDims conv_dims(const Shape& input, const Shape& weight, const Conv2dAttrs& a) {
  if (input.size() != 4) throw ShapeError("conv2d: input must be (B,C,H,W), got " + shape_str(input));
  if (weight.size() != 4)
    throw ShapeError("conv2d: weight must be (F,C,kh,kw), got " + shape_str(weight));
  if (input[1] != weight[1])
    throw ShapeError("conv2d: input channels " + std::to_string(input[1]) +
                     " != weight channels " + std::to_string(weight[1]));
  if (a.dil_h < 1 || a.dil_w < 1) throw ShapeError("conv2d: dilation must be >= 1");
  ConvDims d;
  d.batch = input[0];
  d.in_ch = input[1];
  d.in_h = input[2];
  d.in_w = input[3];
  d.out_ch = weight[0];
  d.kh = weight[2];
  d.kw = weight[3];
  d.out_h = conv_out_extent(d.in_h, d.kh, a.stride_h, a.pad_h, a.dil_h);
  d.out_w = conv_out_extent(d.in_w, d.kw, a.stride_w, a.pad_w, a.dil_w);
  return d;
}

}  // namespace detail

// 2-D cross-correlation over NCHW with zero padding, stride, and dilation.
// Pass an undefined Tensor as `bias` for no bias.
template <typename T>
Tensor<T> conv2d(const Tensor<T>& input, const Tensor<T>& weight, const Tensor<T>& bias,
                 const Conv2dAttrs& attrs) {
  detail::ConvDims d = detail::conv_dims(input.shape(), weight.shape(), attrs);
  bool has_bias = bias.defined();
  if (has_bias && (bias.rank() != 1 || bias.extent(0) != d.out_ch))
    throw ShapeError("conv2d: bias must be (F)");

  int64_t ckk = d.in_ch * d.kh * d.kw;
  int64_t npix = d.out_h * d.out_w;
  std::vector<T> out(static_cast<size_t>(d.batch * d.out_ch * npix));
  const T* pin = input.data().data();
  const T* pw = weight.data().data();
  const T* pb = has_bias ? bias.data().data() : nullptr;

  auto run_batch = [&](int64_t b) {
    std::vector<T> cols(static_cast<size_t>(ckk * npix));
    detail::im2col(pin + b * d.in_ch * d.in_h * d.in_w, d.in_ch, d.in_h, d.in_w, d.kh, d.kw,
                   attrs, d.out_h, d.out_w, cols.data());
    T* dst = out.data() + b * d.out_ch * npix;
    for (int64_t f = 0; f < d.out_ch; ++f) {
      T init = pb ? pb[f] : T(0);
      for (int64_t p = 0; p < npix; ++p) dst[f * npix + p] = init;
    }
    detail::gemm_accumulate(pw, cols.data(), dst, d.out_ch, ckk, npix);
  };
  if (d.batch > 1 && d.batch * d.out_ch * ckk * npix > (int64_t(1) << 21)) {
    parallel_for(d.batch, run_batch);
  } else {
    for (int64_t b = 0; b < d.batch; ++b) run_batch(b);
  }

  Conv2dAttrs a = attrs;
  Shape in_shape = input.shape();
  Shape w_shape = weight.shape();
  std::vector<Tensor<T>> inputs = {input, weight};
  if (has_bias) inputs.push_back(bias);
  return Tensor<T>::op_result(
      Shape{d.batch, d.out_ch, d.out_h, d.out_w}, std::move(out), "conv2d", std::move(inputs),
      [input, weight, a, in_shape, w_shape, has_bias](
          const Tensor<T>&, const Tensor<T>& g) -> std::vector<Tensor<T>> {
        std::vector<Tensor<T>> gs = {conv2d_grad_input(g, weight, in_shape, a),
                                     conv2d_grad_weight(g, input, w_shape, a)};
        if (has_bias) gs.push_back(sum(g, {0, 2, 3}, false));
        return gs;
      });
}

template <typename T>
Tensor<T> conv2d(const Tensor<T>& input, const Tensor<T>& weight, const Conv2dAttrs& attrs) {
  return conv2d(input, weight, Tensor<T>{}, attrs);
}

// Adjoint of conv2d in the input argument. Linear in both gout and weight;
// its own backward is expressed through conv2d and conv2d_grad_weight, which
// is what makes second derivatives of conv stacks exact.
template <typename T>
Tensor<T> conv2d_grad_input(const Tensor<T>& gout, const Tensor<T>& weight,
                            const Shape& input_shape, const Conv2dAttrs& attrs) {
  detail::ConvDims d = detail::conv_dims(input_shape, weight.shape(), attrs);
  if (gout.shape() != Shape{d.batch, d.out_ch, d.out_h, d.out_w})
    throw ShapeError("conv2d_grad_input: gradient shape " + shape_str(gout.shape()) +
                     " does not match conv output");

  int64_t ckk = d.in_ch * d.kh * d.kw;
  int64_t npix = d.out_h * d.out_w;
  int64_t plane = d.in_ch * d.in_h * d.in_w;
  std::vector<T> out(static_cast<size_t>(d.batch * plane), T(0));
  std::vector<T> wt = detail::transpose_copy(weight.data().data(), d.out_ch, ckk);
  const T* pg = gout.data().data();

  auto run_batch = [&](int64_t b) {
    std::vector<T> cols(static_cast<size_t>(ckk * npix), T(0));
    detail::gemm_accumulate(wt.data(), pg + b * d.out_ch * npix, cols.data(), ckk, d.out_ch,
                            npix);
    detail::col2im(cols.data(), d.in_ch, d.in_h, d.in_w, d.kh, d.kw, attrs, d.out_h, d.out_w,
                   out.data() + b * plane);
  };
  if (d.batch > 1 && d.batch * d.out_ch * ckk * npix > (int64_t(1) << 21)) {
    parallel_for(d.batch, run_batch);
  } else {
    for (int64_t b = 0; b < d.batch; ++b) run_batch(b);
  }

  Conv2dAttrs a = attrs;
  Shape in_shape = input_shape;
  Shape w_shape = weight.shape();
  return Tensor<T>::op_result(
      Shape(input_shape), std::move(out), "conv2d_grad_input", {gout, weight},
      [gout, weight, a, in_shape, w_shape](const Tensor<T>&,
                                           const Tensor<T>& u) -> std::vector<Tensor<T>> {
        return {conv2d(u, weight, Tensor<T>{}, a),
                conv2d_grad_weight(gout, u, w_shape, a)};
      });
}

// Adjoint of conv2d in the weight argument.
template <typename T>
Tensor<T> conv2d_grad_weight(const Tensor<T>& gout, const Tensor<T>& input,
                             const Shape& weight_shape, const Conv2dAttrs& attrs) {
  detail::ConvDims d = detail::conv_dims(input.shape(), weight_shape, attrs);
  if (gout.shape() != Shape{d.batch, d.out_ch, d.out_h, d.out_w})
    throw ShapeError("conv2d_grad_weight: gradient shape " + shape_str(gout.shape()) +
                     " does not match conv output");

  int64_t ckk = d.in_ch * d.kh * d.kw;
  int64_t npix = d.out_h * d.out_w;
  std::vector<T> out(static_cast<size_t>(d.out_ch * ckk), T(0));
  const T* pin = input.data().data();
  const T* pg = gout.data().data();

  // Sequential over the batch so the accumulation order is fixed.
  std::vector<T> cols(static_cast<size_t>(ckk * npix));
  for (int64_t b = 0; b < d.batch; ++b) {
    detail::im2col(pin + b * d.in_ch * d.in_h * d.in_w, d.in_ch, d.in_h, d.in_w, d.kh, d.kw,
                   attrs, d.out_h, d.out_w, cols.data());
    std::vector<T> colst = detail::transpose_copy(cols.data(), ckk, npix);
    detail::gemm_accumulate(pg + b * d.out_ch * npix, colst.data(), out.data(), d.out_ch, npix,
                            ckk);
  }

  Conv2dAttrs a = attrs;
  Shape in_shape = input.shape();
  Shape w_shape = weight_shape;
  return Tensor<T>::op_result(
      Shape(weight_shape), std::move(out), "conv2d_grad_weight", {gout, input},
      [gout, input, a, in_shape, w_shape](const Tensor<T>&,
                                          const Tensor<T>& u) -> std::vector<Tensor<T>> {
        return {conv2d(input, u, Tensor<T>{}, a),
                conv2d_grad_input(gout, u, in_shape, a)};
      });
}

// ---------------------------------------------------------------------------
// Nearest-neighbour resampling
// ---------------------------------------------------------------------------

template <typename T>
Tensor<T> nearest_resize(const Tensor<T>& x, int64_t out_h, int64_t out_w);
template <typename T>
Tensor<T> nearest_resize_adjoint(const Tensor<T>& g, int64_t in_h, int64_t in_w);

// Nearest-neighbour resize of (B,C,H,W) to (B,C,out_h,out_w). Source index is
// floor(i * in / out); for integer upscaling this is pixel replication.
template <typename T>
Tensor<T> nearest_resize(const Tensor<T>& x, int64_t out_h, int64_t out_w) {
  if (x.rank() != 4) throw ShapeError("nearest_resize: input must be (B,C,H,W)");
  if (out_h < 1 || out_w < 1) throw ShapeError("nearest_resize: output extents must be >= 1");
  int64_t b = x.extent(0), c = x.extent(1), h = x.extent(2), w = x.extent(3);
  std::vector<T> out(static_cast<size_t>(b * c * out_h * out_w));
  const T* px = x.data().data();
  for (int64_t bc = 0; bc < b * c; ++bc) {
    const T* src = px + bc * h * w;
    T* dst = out.data() + bc * out_h * out_w;
    for (int64_t oy = 0; oy < out_h; ++oy) {
      int64_t sy = oy * h / out_h;
      for (int64_t ox = 0; ox < out_w; ++ox) dst[oy * out_w + ox] = src[sy * w + ox * w / out_w];
    }
  }
  return Tensor<T>::op_result(
      Shape{b, c, out_h, out_w}, std::move(out), "nearest_resize", {x},
      [h, w](const Tensor<T>&, const Tensor<T>& g) -> std::vector<Tensor<T>> {
        return {nearest_resize_adjoint(g, h, w)};
      });
}

// Adjoint of nearest_resize: sums each output-pixel gradient into its source.
template <typename T>
Tensor<T> nearest_resize_adjoint(const Tensor<T>& g, int64_t in_h, int64_t in_w) {
  if (g.rank() != 4) throw ShapeError("nearest_resize_adjoint: input must be (B,C,H,W)");
  int64_t b = g.extent(0), c = g.extent(1), oh = g.extent(2), ow = g.extent(3);
  std::vector<T> out(static_cast<size_t>(b * c * in_h * in_w), T(0));
  const T* pg = g.data().data();
  for (int64_t bc = 0; bc < b * c; ++bc) {
    const T* src = pg + bc * oh * ow;
    T* dst = out.data() + bc * in_h * in_w;
    for (int64_t oy = 0; oy < oh; ++oy) {
      int64_t sy = oy * in_h / oh;
      for (int64_t ox = 0; ox < ow; ++ox) dst[sy * in_w + ox * in_w / ow] += src[oy * ow + ox];
    }
  }
  return Tensor<T>::op_result(
      Shape{b, c, in_h, in_w}, std::move(out), "nearest_resize_adjoint", {g},
      [oh, ow](const Tensor<T>&, const Tensor<T>& u) -> std::vector<Tensor<T>> {
        return {nearest_resize(u, oh, ow)};
      });
}

// Pixel replication by an integer factor.
template <typename T>
Tensor<T> upsample_nearest(const Tensor<T>& x, int64_t factor) {
  if (factor < 1) throw ShapeError("upsample_nearest: factor must be >= 1");
  if (x.rank() != 4) throw ShapeError("upsample_nearest: input must be (B,C,H,W)");
  if (factor == 1) return x;
  return nearest_resize(x, x.extent(2) * factor, x.extent(3) * factor);
}

}  // namespace rgbdinpaint

#endif  // RGBDINPAINT_CONV_HPP_
