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

#ifndef RGBDINPAINT_OPS_HPP_
#define RGBDINPAINT_OPS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "rgbdinpaint/common.hpp"
#include "rgbdinpaint/tensor.hpp"

namespace rgbdinpaint {

template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b);
template <typename T>
Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b);
template <typename T>
Tensor<T> neg(const Tensor<T>& x);
template <typename T>
Tensor<T> sum(const Tensor<T>& x, const std::vector<int64_t>& axes, bool keepdims = false);
template <typename T>
Tensor<T> reshape(const Tensor<T>& x, Shape new_shape);
template <typename T>
Tensor<T> broadcast_to(const Tensor<T>& x, const Shape& target);
template <typename T>
Tensor<T> slice(const Tensor<T>& x, const std::vector<int64_t>& starts,
                const std::vector<int64_t>& sizes);
template <typename T>
Tensor<T> embed(const Tensor<T>& x, const Shape& full_shape, const std::vector<int64_t>& starts);

namespace detail {

// Broadcast shape with trailing-dimension alignment.
inline Shape broadcast_shape(const Shape& a, const Shape& b, const char* op) {
  size_t r = std::max(a.size(), b.size());
  Shape out(r, 1);
  for (size_t i = 0; i < r; ++i) {
    int64_t da = i < r - a.size() ? 1 : a[i - (r - a.size())];
    int64_t db = i < r - b.size() ? 1 : b[i - (r - b.size())];
    if (da != db && da != 1 && db != 1)
      throw ShapeError(std::string(op) + ": shapes " + shape_str(a) + " and " + shape_str(b) +
                       " are not broadcastable");
    out[i] = std::max(da, db);
  }
  return out;
}

// Strides of `shape` aligned to `out` rank, zeroed on broadcast dimensions.
inline std::vector<int64_t> broadcast_strides(const Shape& shape, const Shape& out) {
  std::vector<int64_t> strides = row_major_strides(shape);
  std::vector<int64_t> result(out.size(), 0);
  size_t off = out.size() - shape.size();
  for (size_t i = 0; i < shape.size(); ++i)
    result[off + i] = shape[i] == 1 ? 0 : strides[i];
  return result;
}

// Walks every index of `out_shape` in row-major order, tracking offsets into
// two strided operands. f(linear_out_index, offset_a, offset_b).
template <typename F>
void for_each_broadcast(const Shape& out_shape, const std::vector<int64_t>& sa,
                        const std::vector<int64_t>& sb, const F& f) {
  int64_t n = numel_of(out_shape);
  int r = static_cast<int>(out_shape.size());
  if (r == 0) {
    if (n > 0) f(0, 0, 0);
    return;
  }
  std::vector<int64_t> idx(r, 0);
  int64_t oa = 0, ob = 0;
  for (int64_t i = 0; i < n; ++i) {
    f(i, oa, ob);
    for (int d = r - 1; d >= 0; --d) {
      ++idx[d];
      oa += sa[d];
      ob += sb[d];
      if (idx[d] < out_shape[d]) break;
      oa -= sa[d] * out_shape[d];
      ob -= sb[d] * out_shape[d];
      idx[d] = 0;
    }
  }
}

template <typename T, typename F>
Tensor<T> binary_elementwise(const char* op, const Tensor<T>& a, const Tensor<T>& b, const F& f,
                             std::function<std::vector<Tensor<T>>(const Tensor<T>&,
                                                                  const Tensor<T>&)>
                                 backward) {
  Shape out_shape = broadcast_shape(a.shape(), b.shape(), op);
  int64_t n = numel_of(out_shape);
  std::vector<T> out(static_cast<size_t>(n));
  const T* pa = a.data().data();
  const T* pb = b.data().data();
  if (a.shape() == b.shape()) {
    for (int64_t i = 0; i < n; ++i) out[static_cast<size_t>(i)] = f(pa[i], pb[i]);
  } else {
    auto sa = broadcast_strides(a.shape(), out_shape);
    auto sb = broadcast_strides(b.shape(), out_shape);
    for_each_broadcast(out_shape, sa, sb, [&](int64_t i, int64_t oa, int64_t ob) {
      out[static_cast<size_t>(i)] = f(pa[oa], pb[ob]);
    });
  }
  return Tensor<T>::op_result(std::move(out_shape), std::move(out), op, {a, b},
                              std::move(backward));
}

template <typename T, typename F>
Tensor<T> unary_elementwise(const char* op, const Tensor<T>& x, const F& f,
                            std::function<std::vector<Tensor<T>>(const Tensor<T>&,
                                                                 const Tensor<T>&)>
                                backward) {
  std::vector<T> out(static_cast<size_t>(x.numel()));
  const T* px = x.data().data();
  for (int64_t i = 0; i < x.numel(); ++i) out[static_cast<size_t>(i)] = f(px[i]);
  return Tensor<T>::op_result(x.shape(), std::move(out), op, {x}, std::move(backward));
}

// Sums `g` down to `target` shape; inverse of broadcasting. Built from
// differentiable ops so it composes under create_graph.
template <typename T>
Tensor<T> reduce_to(const Tensor<T>& g, const Shape& target) {
  if (g.shape() == target) return g;
  size_t extra = g.shape().size() - target.size();
  std::vector<int64_t> axes;
  for (size_t i = 0; i < g.shape().size(); ++i) {
    if (i < extra)
      axes.push_back(static_cast<int64_t>(i));
    else if (target[i - extra] == 1 && g.shape()[i] != 1)
      axes.push_back(static_cast<int64_t>(i));
  }
  Tensor<T> reduced = axes.empty() ? g : sum(g, axes, /*keepdims=*/true);
  return reshape(reduced, target);
}

// C += A(m,k) * B(k,n), row-major. The k-loop is sequential per output row,
// so the accumulation order (and hence the bit pattern) is independent of the
// thread count.
template <typename T>
void gemm_accumulate(const T* a, const T* b, T* c, int64_t m, int64_t k, int64_t n) {
  auto row = [&](int64_t i) {
    T* __restrict crow = c + i * n;
    const T* arow = a + i * k;
    for (int64_t kk = 0; kk < k; ++kk) {
      T av = arow[kk];
      if (av == T(0)) continue;
      const T* __restrict brow = b + kk * n;
      for (int64_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  };
  int64_t flops = m * k * n;
  if (flops >= (int64_t(1) << 21) && m > 1) {
    int64_t row_cost = std::max<int64_t>(k * n, 1);
    int64_t grain = std::max<int64_t>(1, (int64_t(1) << 20) / row_cost);
    parallel_for(m, row, grain);
  } else {
    for (int64_t i = 0; i < m; ++i) row(i);
  }
}

template <typename T>
Tensor<T> accumulate(const Tensor<T>& a, const Tensor<T>& b) {
  return add(a, b);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Binary arithmetic (broadcasting, trailing-dimension alignment)
// ---------------------------------------------------------------------------

template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b) {
  return detail::binary_elementwise<T>(
      "add", a, b, [](T x, T y) { return x + y; },
      [a, b](const Tensor<T>&, const Tensor<T>& g) -> std::vector<Tensor<T>> {
        return {detail::reduce_to(g, a.shape()), detail::reduce_to(g, b.shape())};
      });
}

template <typename T>
Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b) {
  return detail::binary_elementwise<T>(
      "sub", a, b, [](T x, T y) { return x - y; },
      [a, b](const Tensor<T>&, const Tensor<T>& g) -> std::vector<Tensor<T>> {
        return {detail::reduce_to(g, a.shape()), detail::reduce_to(neg(g), b.shape())};
      });
}

template <typename T>
Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b) {
  return detail::binary_elementwise<T>(
      "mul", a, b, [](T x, T y) { return x * y; },
      [a, b](const Tensor<T>&, const Tensor<T>& g) -> std::vector<Tensor<T>> {
        return {detail::reduce_to(mul(g, b), a.shape()), detail::reduce_to(mul(g, a), b.shape())};
      });
}

template <typename T>
Tensor<T> div(const Tensor<T>& a, const Tensor<T>& b) {
  for (T v : b.data())
    if (v == T(0)) throw DomainError("div: divisor contains zero");
  return detail::binary_elementwise<T>(
      "div", a, b, [](T x, T y) { return x / y; },
      [a, b](const Tensor<T>&, const Tensor<T>& g) -> std::vector<Tensor<T>> {
        return {detail::reduce_to(div(g, b), a.shape()),
                detail::reduce_to(neg(div(mul(g, a), mul(b, b))), b.shape())};
      });
}

// ---------------------------------------------------------------------------
// Unary ops
// ---------------------------------------------------------------------------

template <typename T>
Tensor<T> neg(const Tensor<T>& x) {
  return detail::unary_elementwise<T>(
      "neg", x, [](T v) { return -v; },
      [](const Tensor<T>&, const Tensor<T>& g) -> std::vector<Tensor<T>> { return {neg(g)}; });
}

// Subgradient at 0 is 0, matching relu's convention.
template <typename T>
Tensor<T> abs(const Tensor<T>& x) {
  Tensor<T> sign = [&] {
    NoGradGuard no_grad;
    std::vector<T> s(static_cast<size_t>(x.numel()));
    const T* px = x.data().data();
    for (int64_t i = 0; i < x.numel(); ++i)
      s[static_cast<size_t>(i)] = px[i] > T(0) ? T(1) : (px[i] < T(0) ? T(-1) : T(0));
    return Tensor<T>::from(x.shape(), std::move(s));
  }();
  return detail::unary_elementwise<T>(
      "abs", x, [](T v) { return v < T(0) ? -v : v; },
      [sign](const Tensor<T>&, const Tensor<T>& g) -> std::vector<Tensor<T>> {
        return {mul(g, sign)};
      });
}

template <typename T>
Tensor<T> exp(const Tensor<T>& x) {
  return detail::unary_elementwise<T>(
      "exp", x, [](T v) { return std::exp(v); },
      [](const Tensor<T>& self, const Tensor<T>& g) -> std::vector<Tensor<T>> {
        return {mul(g, self)};
      });
}

template <typename T>
Tensor<T> log(const Tensor<T>& x) {
  for (T v : x.data())
    if (!(v > T(0))) throw DomainError("log: operand must be strictly positive");
  return detail::unary_elementwise<T>(
      "log", x, [](T v) { return std::log(v); },
      [x](const Tensor<T>&, const Tensor<T>& g) -> std::vector<Tensor<T>> {
        return {div(g, x)};
      });
}

// Scalar exponent only; that is the only form the models and losses need.
template <typename T>
Tensor<T> pow(const Tensor<T>& x, T exponent) {
  bool integral = exponent == std::floor(exponent);
  for (T v : x.data()) {
    if (!integral && !(v > T(0)))
      throw DomainError("pow: non-integer exponent requires strictly positive base");
    if (integral && exponent < T(0) && v == T(0))
      throw DomainError("pow: negative exponent with zero base");
  }
  return detail::unary_elementwise<T>(
      "pow", x, [exponent](T v) { return std::pow(v, exponent); },
      [x, exponent](const Tensor<T>&, const Tensor<T>& g) -> std::vector<Tensor<T>> {
        return {mul(g, mul(pow(x, exponent - T(1)), Tensor<T>::scalar(exponent)))};
      });
}

template <typename T>
Tensor<T> sqrt(const Tensor<T>& x) {
  for (T v : x.data())
    if (v < T(0)) throw DomainError("sqrt: operand must be non-negative");
  return detail::unary_elementwise<T>(
      "sqrt", x, [](T v) { return std::sqrt(v); },
      [](const Tensor<T>& self, const Tensor<T>& g) -> std::vector<Tensor<T>> {
        return {div(mul(g, Tensor<T>::scalar(T(0.5))), self)};
      });
}

// ---------------------------------------------------------------------------
// Activations
// ---------------------------------------------------------------------------

namespace detail {
// Piecewise-constant gate captured as a plain tensor; its zero second
// derivative is exactly the a.e. second derivative of the kink.
template <typename T, typename F>
Tensor<T> gate(const Tensor<T>& x, const F& f) {
  NoGradGuard no_grad;
  std::vector<T> s(static_cast<size_t>(x.numel()));
  const T* px = x.data().data();
  for (int64_t i = 0; i < x.numel(); ++i) s[static_cast<size_t>(i)] = f(px[i]);
  return Tensor<T>::from(x.shape(), std::move(s));
}
}  // namespace detail

// Subgradient at the kink is 0.
template <typename T>
Tensor<T> relu(const Tensor<T>& x) {
  Tensor<T> mask = detail::gate(x, [](T v) { return v > T(0) ? T(1) : T(0); });
  return detail::unary_elementwise<T>(
      "relu", x, [](T v) { return v > T(0) ? v : T(0); },
      [mask](const Tensor<T>&, const Tensor<T>& g) -> std::vector<Tensor<T>> {
        return {mul(g, mask)};
      });
}

template <typename T>
Tensor<T> leaky_relu(const Tensor<T>& x, T slope) {
  Tensor<T> mask = detail::gate(x, [slope](T v) { return v > T(0) ? T(1) : slope; });
  return detail::unary_elementwise<T>(
      "leaky_relu", x, [slope](T v) { return v > T(0) ? v : slope * v; },
      [mask](const Tensor<T>&, const Tensor<T>& g) -> std::vector<Tensor<T>> {
        return {mul(g, mask)};
      });
}

template <typename T>
Tensor<T> elu(const Tensor<T>& x, T alpha = T(1)) {
  Tensor<T> mask = detail::gate(x, [](T v) { return v > T(0) ? T(1) : T(0); });
  return detail::unary_elementwise<T>(
      "elu", x, [alpha](T v) { return v > T(0) ? v : alpha * (std::exp(v) - T(1)); },
      [mask, alpha](const Tensor<T>& self, const Tensor<T>& g) -> std::vector<Tensor<T>> {
        // derivative: 1 on the positive side, elu(x) + alpha on the other
        Tensor<T> one_minus = sub(Tensor<T>::scalar(T(1)), mask);
        Tensor<T> neg_side = mul(one_minus, add(self, Tensor<T>::scalar(alpha)));
        return {mul(g, add(mask, neg_side))};
      });
}

template <typename T>
Tensor<T> tanh(const Tensor<T>& x) {
  return detail::unary_elementwise<T>(
      "tanh", x, [](T v) { return std::tanh(v); },
      [](const Tensor<T>& self, const Tensor<T>& g) -> std::vector<Tensor<T>> {
        return {mul(g, sub(Tensor<T>::scalar(T(1)), mul(self, self)))};
      });
}

template <typename T>
Tensor<T> sigmoid(const Tensor<T>& x) {
  return detail::unary_elementwise<T>(
      "sigmoid", x, [](T v) { return T(1) / (T(1) + std::exp(-v)); },
      [](const Tensor<T>& self, const Tensor<T>& g) -> std::vector<Tensor<T>> {
        return {mul(g, mul(self, sub(Tensor<T>::scalar(T(1)), self)))};
      });
}

// ---------------------------------------------------------------------------
// Reductions and shape ops
// ---------------------------------------------------------------------------

namespace detail {
inline std::vector<int64_t> normalize_axes(const std::vector<int64_t>& axes, int64_t rank,
                                           const char* op) {
  std::set<int64_t> seen;
  for (int64_t a : axes) {
    if (a < 0 || a >= rank)
      throw ShapeError(std::string(op) + ": axis " + std::to_string(a) +
                       " invalid for rank " + std::to_string(rank));
    if (!seen.insert(a).second)
      throw ShapeError(std::string(op) + ": duplicate axis " + std::to_string(a));
  }
  return {seen.begin(), seen.end()};
}
}  // namespace detail

// Sum over `axes`. An empty axis set is the identity and returns x unchanged.
template <typename T>
Tensor<T> sum(const Tensor<T>& x, const std::vector<int64_t>& axes, bool keepdims) {
  auto ax = detail::normalize_axes(axes, x.rank(), "sum");
  if (ax.empty()) return x;
  std::vector<bool> reduced(static_cast<size_t>(x.rank()), false);
  for (int64_t a : ax) reduced[static_cast<size_t>(a)] = true;

  Shape out_shape;
  Shape keep_shape;  // like x.shape but with reduced dims set to 1
  for (int64_t d = 0; d < x.rank(); ++d) {
    keep_shape.push_back(reduced[static_cast<size_t>(d)] ? 1 : x.extent(d));
    if (!reduced[static_cast<size_t>(d)])
      out_shape.push_back(x.extent(d));
    else if (keepdims)
      out_shape.push_back(1);
  }

  std::vector<T> out(static_cast<size_t>(numel_of(keep_shape)), T(0));
  auto dst_strides = detail::broadcast_strides(keep_shape, x.shape());
  const T* px = x.data().data();
  detail::for_each_broadcast(x.shape(), dst_strides,
                             std::vector<int64_t>(static_cast<size_t>(x.rank()), 0),
                             [&](int64_t i, int64_t odst, int64_t) {
                               out[static_cast<size_t>(odst)] += px[i];
                             });

  Shape x_shape = x.shape();
  return Tensor<T>::op_result(
      std::move(out_shape), std::move(out), "sum", {x},
      [x_shape, keep_shape](const Tensor<T>&, const Tensor<T>& g) -> std::vector<Tensor<T>> {
        return {broadcast_to(reshape(g, keep_shape), x_shape)};
      });
}

template <typename T>
Tensor<T> sum_all(const Tensor<T>& x) {
  std::vector<int64_t> axes(static_cast<size_t>(x.rank()));
  for (int64_t d = 0; d < x.rank(); ++d) axes[static_cast<size_t>(d)] = d;
  if (axes.empty()) return reshape(x, Shape{});
  return sum(x, axes, false);
}

template <typename T>
Tensor<T> mean(const Tensor<T>& x, const std::vector<int64_t>& axes, bool keepdims = false) {
  auto ax = detail::normalize_axes(axes, x.rank(), "mean");
  if (ax.empty()) return x;
  int64_t count = 1;
  for (int64_t a : ax) count *= x.extent(a);
  return mul(sum(x, ax, keepdims), Tensor<T>::scalar(T(1) / static_cast<T>(count)));
}

template <typename T>
Tensor<T> mean_all(const Tensor<T>& x) {
  Tensor<T> s = sum_all(x);
  return mul(s, Tensor<T>::scalar(T(1) / static_cast<T>(x.numel())));
}

template <typename T>
Tensor<T> broadcast_to(const Tensor<T>& x, const Shape& target) {
  if (x.shape() == target) return x;
  Shape check = detail::broadcast_shape(x.shape(), target, "broadcast_to");
  if (check != target)
    throw ShapeError("broadcast_to: cannot broadcast " + shape_str(x.shape()) + " to " +
                     shape_str(target));
  std::vector<T> out(static_cast<size_t>(numel_of(target)));
  auto sx = detail::broadcast_strides(x.shape(), target);
  const T* px = x.data().data();
  detail::for_each_broadcast(target, sx, std::vector<int64_t>(target.size(), 0),
                             [&](int64_t i, int64_t ox, int64_t) {
                               out[static_cast<size_t>(i)] = px[ox];
                             });
  Shape x_shape = x.shape();
  return Tensor<T>::op_result(
      Shape(target), std::move(out), "broadcast_to", {x},
      [x_shape](const Tensor<T>&, const Tensor<T>& g) -> std::vector<Tensor<T>> {
        return {detail::reduce_to(g, x_shape)};
      });
}

template <typename T>
Tensor<T> reshape(const Tensor<T>& x, Shape new_shape) {
  if (numel_of(new_shape) != x.numel())
    throw ShapeError("reshape: cannot reshape " + shape_str(x.shape()) + " to " +
                     shape_str(new_shape));
  std::vector<T> out(x.data().begin(), x.data().end());
  Shape x_shape = x.shape();
  return Tensor<T>::op_result(
      std::move(new_shape), std::move(out), "reshape", {x},
      [x_shape](const Tensor<T>&, const Tensor<T>& g) -> std::vector<Tensor<T>> {
        return {reshape(g, x_shape)};
      });
}

template <typename T>
Tensor<T> transpose(const Tensor<T>& x) {
  if (x.rank() != 2) throw ShapeError("transpose expects rank 2, got " + shape_str(x.shape()));
  int64_t r = x.extent(0), c = x.extent(1);
  std::vector<T> out(static_cast<size_t>(r * c));
  const T* px = x.data().data();
  for (int64_t i = 0; i < r; ++i)
    for (int64_t j = 0; j < c; ++j) out[static_cast<size_t>(j * r + i)] = px[i * c + j];
  return Tensor<T>::op_result(
      Shape{c, r}, std::move(out), "transpose", {x},
      [](const Tensor<T>&, const Tensor<T>& g) -> std::vector<Tensor<T>> {
        return {transpose(g)};
      });
}

template <typename T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b) {
  if (a.rank() != 2 || b.rank() != 2)
    throw ShapeError("matmul expects rank-2 operands, got " + shape_str(a.shape()) + " and " +
                     shape_str(b.shape()));
  if (a.extent(1) != b.extent(0))
    throw ShapeError("matmul: inner extents differ, " + shape_str(a.shape()) + " vs " +
                     shape_str(b.shape()));
  int64_t m = a.extent(0), k = a.extent(1), n = b.extent(1);
  std::vector<T> out(static_cast<size_t>(m * n), T(0));
  detail::gemm_accumulate(a.data().data(), b.data().data(), out.data(), m, k, n);
  return Tensor<T>::op_result(
      Shape{m, n}, std::move(out), "matmul", {a, b},
      [a, b](const Tensor<T>&, const Tensor<T>& g) -> std::vector<Tensor<T>> {
        return {matmul(g, transpose(b)), matmul(transpose(a), g)};
      });
}

template <typename T>
Tensor<T> concat(const std::vector<Tensor<T>>& parts, int64_t axis) {
  if (parts.empty()) throw ShapeError("concat: no inputs");
  const Shape& base = parts[0].shape();
  if (axis < 0 || axis >= static_cast<int64_t>(base.size()))
    throw ShapeError("concat: axis " + std::to_string(axis) + " invalid");
  Shape out_shape = base;
  int64_t total = 0;
  for (const auto& p : parts) {
    if (p.rank() != static_cast<int64_t>(base.size()))
      throw ShapeError("concat: rank mismatch");
    for (int64_t d = 0; d < p.rank(); ++d)
      if (d != axis && p.extent(d) != base[static_cast<size_t>(d)])
        throw ShapeError("concat: shape mismatch at axis " + std::to_string(d));
    total += p.extent(axis);
  }
  out_shape[static_cast<size_t>(axis)] = total;

  int64_t outer = 1, inner = 1;
  for (int64_t d = 0; d < axis; ++d) outer *= base[static_cast<size_t>(d)];
  for (size_t d = static_cast<size_t>(axis) + 1; d < base.size(); ++d) inner *= base[d];

  std::vector<T> out(static_cast<size_t>(numel_of(out_shape)));
  int64_t offset = 0;
  for (const auto& p : parts) {
    int64_t block = p.extent(axis) * inner;
    const T* src = p.data().data();
    for (int64_t o = 0; o < outer; ++o)
      std::copy(src + o * block, src + (o + 1) * block,
                out.begin() + o * total * inner + offset * inner);
    offset += p.extent(axis);
  }

  std::vector<Shape> part_shapes;
  for (const auto& p : parts) part_shapes.push_back(p.shape());
  return Tensor<T>::op_result(
      std::move(out_shape), std::move(out), "concat", parts,
      [part_shapes, axis](const Tensor<T>&, const Tensor<T>& g) -> std::vector<Tensor<T>> {
        std::vector<Tensor<T>> gs;
        std::vector<int64_t> starts(part_shapes[0].size(), 0);
        int64_t off = 0;
        for (const auto& ps : part_shapes) {
          starts[static_cast<size_t>(axis)] = off;
          gs.push_back(slice(g, starts, std::vector<int64_t>(ps.begin(), ps.end())));
          off += ps[static_cast<size_t>(axis)];
        }
        return gs;
      });
}

template <typename T>
Tensor<T> slice(const Tensor<T>& x, const std::vector<int64_t>& starts,
                const std::vector<int64_t>& sizes) {
  if (static_cast<int64_t>(starts.size()) != x.rank() ||
      static_cast<int64_t>(sizes.size()) != x.rank())
    throw ShapeError("slice: starts/sizes rank mismatch");
  for (int64_t d = 0; d < x.rank(); ++d) {
    if (starts[static_cast<size_t>(d)] < 0 || sizes[static_cast<size_t>(d)] < 1 ||
        starts[static_cast<size_t>(d)] + sizes[static_cast<size_t>(d)] > x.extent(d))
      throw ShapeError("slice: window out of bounds at axis " + std::to_string(d));
  }
  Shape out_shape(sizes.begin(), sizes.end());
  std::vector<T> out(static_cast<size_t>(numel_of(out_shape)));
  auto xs = row_major_strides(x.shape());
  int64_t base = 0;
  for (int64_t d = 0; d < x.rank(); ++d) base += starts[static_cast<size_t>(d)] * xs[static_cast<size_t>(d)];
  const T* px = x.data().data();
  detail::for_each_broadcast(out_shape, xs, std::vector<int64_t>(out_shape.size(), 0),
                             [&](int64_t i, int64_t ox, int64_t) {
                               out[static_cast<size_t>(i)] = px[base + ox];
                             });
  Shape x_shape = x.shape();
  std::vector<int64_t> starts_copy = starts;
  return Tensor<T>::op_result(
      std::move(out_shape), std::move(out), "slice", {x},
      [x_shape, starts_copy](const Tensor<T>&, const Tensor<T>& g) -> std::vector<Tensor<T>> {
        return {embed(g, x_shape, starts_copy)};
      });
}

// Places x into a zero tensor of `full_shape` at offset `starts`; the adjoint
// of slice.
template <typename T>
Tensor<T> embed(const Tensor<T>& x, const Shape& full_shape, const std::vector<int64_t>& starts) {
  if (static_cast<int64_t>(starts.size()) != x.rank() ||
      static_cast<int64_t>(full_shape.size()) != x.rank())
    throw ShapeError("embed: rank mismatch");
  for (int64_t d = 0; d < x.rank(); ++d) {
    if (starts[static_cast<size_t>(d)] < 0 ||
        starts[static_cast<size_t>(d)] + x.extent(d) > full_shape[static_cast<size_t>(d)])
      throw ShapeError("embed: block out of bounds at axis " + std::to_string(d));
  }
  std::vector<T> out(static_cast<size_t>(numel_of(full_shape)), T(0));
  auto fs = row_major_strides(full_shape);
  int64_t base = 0;
  for (int64_t d = 0; d < x.rank(); ++d) base += starts[static_cast<size_t>(d)] * fs[static_cast<size_t>(d)];
  const T* px = x.data().data();
  detail::for_each_broadcast(x.shape(), fs, std::vector<int64_t>(x.shape().size(), 0),
                             [&](int64_t i, int64_t odst, int64_t) {
                               out[static_cast<size_t>(base + odst)] = px[i];
                             });
  std::vector<int64_t> starts_copy = starts;
  std::vector<int64_t> sizes(x.shape().begin(), x.shape().end());
  return Tensor<T>::op_result(
      Shape(full_shape), std::move(out), "embed", {x},
      [starts_copy, sizes](const Tensor<T>&, const Tensor<T>& g) -> std::vector<Tensor<T>> {
        return {slice(g, starts_copy, sizes)};
      });
}

// ---------------------------------------------------------------------------
// Operators and scalar conveniences
// ---------------------------------------------------------------------------

template <typename T>
Tensor<T> operator+(const Tensor<T>& a, const Tensor<T>& b) { return add(a, b); }
template <typename T>
Tensor<T> operator-(const Tensor<T>& a, const Tensor<T>& b) { return sub(a, b); }
template <typename T>
Tensor<T> operator*(const Tensor<T>& a, const Tensor<T>& b) { return mul(a, b); }
template <typename T>
Tensor<T> operator/(const Tensor<T>& a, const Tensor<T>& b) { return div(a, b); }
template <typename T>
Tensor<T> operator-(const Tensor<T>& x) { return neg(x); }

template <typename T>
Tensor<T> operator+(const Tensor<T>& a, T s) { return add(a, Tensor<T>::scalar(s)); }
template <typename T>
Tensor<T> operator+(T s, const Tensor<T>& a) { return add(Tensor<T>::scalar(s), a); }
template <typename T>
Tensor<T> operator-(const Tensor<T>& a, T s) { return sub(a, Tensor<T>::scalar(s)); }
template <typename T>
Tensor<T> operator-(T s, const Tensor<T>& a) { return sub(Tensor<T>::scalar(s), a); }
template <typename T>
Tensor<T> operator*(const Tensor<T>& a, T s) { return mul(a, Tensor<T>::scalar(s)); }
template <typename T>
Tensor<T> operator*(T s, const Tensor<T>& a) { return mul(Tensor<T>::scalar(s), a); }
template <typename T>
Tensor<T> operator/(const Tensor<T>& a, T s) { return div(a, Tensor<T>::scalar(s)); }
template <typename T>
Tensor<T> operator/(T s, const Tensor<T>& a) { return div(Tensor<T>::scalar(s), a); }

// ---------------------------------------------------------------------------
// Kind dispatchers
// ---------------------------------------------------------------------------

enum class ElemKind { kAdd, kSub, kMul, kDiv, kNeg, kAbs, kExp, kLog, kPow };
enum class ActKind { kRelu, kLeakyRelu, kElu, kTanh, kSigmoid };
enum class ReduceKind { kSum, kMean };

template <typename T>
Tensor<T> elementwise(ElemKind kind, const Tensor<T>& a, const Tensor<T>& b = {}) {
  switch (kind) {
    case ElemKind::kAdd: return add(a, b);
    case ElemKind::kSub: return sub(a, b);
    case ElemKind::kMul: return mul(a, b);
    case ElemKind::kDiv: return div(a, b);
    case ElemKind::kNeg: return neg(a);
    case ElemKind::kAbs: return abs(a);
    case ElemKind::kExp: return exp(a);
    case ElemKind::kLog: return log(a);
    case ElemKind::kPow:
      if (!b.defined() || b.numel() != 1)
        throw ShapeError("pow requires a scalar exponent");
      return pow(a, b.item());
  }
  throw Error("unknown elementwise kind");
}

template <typename T>
Tensor<T> activation(ActKind kind, const Tensor<T>& x, T param = T(0)) {
  switch (kind) {
    case ActKind::kRelu: return relu(x);
    case ActKind::kLeakyRelu: return leaky_relu(x, param);
    case ActKind::kElu: return elu(x, param == T(0) ? T(1) : param);
    case ActKind::kTanh: return tanh(x);
    case ActKind::kSigmoid: return sigmoid(x);
  }
  throw Error("unknown activation kind");
}

template <typename T>
Tensor<T> reduce(ReduceKind kind, const Tensor<T>& x, const std::vector<int64_t>& axes,
                 bool keepdims = false) {
  switch (kind) {
    case ReduceKind::kSum: return sum(x, axes, keepdims);
    case ReduceKind::kMean: return mean(x, axes, keepdims);
  }
  throw Error("unknown reduce kind");
}

}  // namespace rgbdinpaint

#endif  // RGBDINPAINT_OPS_HPP_
