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

#ifndef RGBDINPAINT_TENSOR_HPP_
#define RGBDINPAINT_TENSOR_HPP_

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rgbdinpaint/common.hpp"

namespace rgbdinpaint {

template <typename T>
class Tensor;

// One reverse-mode op record. `backward` maps the upstream gradient to the
// gradients of each input, in input order. Backward functions are themselves
// written in terms of differentiable tensor ops, which is what makes
// higher-order differentiation (grad-of-grad) work without any extra
// machinery: when grads are requested with create_graph=true, the ops run by
// `backward` record nodes like any forward op.
template <typename T>
struct GradFn {
  const char* op;
  std::vector<Tensor<T>> inputs;
  std::function<std::vector<Tensor<T>>(const Tensor<T>& self, const Tensor<T>& grad_out)>
      backward;
};

template <typename T>
struct TensorImpl {
  Shape shape;
  std::vector<T> data;
  bool requires_grad = false;
  std::unique_ptr<GradFn<T>> grad_fn;  // null for leaves
};

namespace detail {
inline thread_local bool grad_recording_enabled = true;
}  // namespace detail

// Disables graph recording for its scope. Used by the trainer to run the
// generator as a frozen sampler during critic updates, and by grad() when
// create_graph=false.
class NoGradGuard {
 public:
  NoGradGuard() : saved_(detail::grad_recording_enabled) {
    detail::grad_recording_enabled = false;
  }
  ~NoGradGuard() { detail::grad_recording_enabled = saved_; }
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool saved_;
};

inline bool grad_recording() { return detail::grad_recording_enabled; }

// N-dimensional row-major tensor of T, optionally attached to a reverse-mode
// differentiation graph. Handles share the underlying storage; values are
// immutable once created except through mutable_data(), which is reserved for
// optimizer parameter updates between graph evaluations.
template <typename T>
class Tensor {
 public:
  using value_type = T;

  Tensor() = default;

  static Tensor from(Shape shape, std::vector<T> values, bool requires_grad = false) {
    if (numel_of(shape) != static_cast<int64_t>(values.size()))
      throw ShapeError("tensor data size " + std::to_string(values.size()) +
                       " does not match shape " + shape_str(shape));
    auto impl = std::make_shared<TensorImpl<T>>();
    impl->shape = std::move(shape);
    impl->data = std::move(values);
    impl->requires_grad = requires_grad;
    return Tensor(std::move(impl));
  }

  static Tensor full(Shape shape, T value, bool requires_grad = false) {
    std::vector<T> d(static_cast<size_t>(numel_of(shape)), value);
    return from(std::move(shape), std::move(d), requires_grad);
  }

  static Tensor zeros(Shape shape, bool requires_grad = false) {
    return full(std::move(shape), T(0), requires_grad);
  }

  static Tensor ones(Shape shape, bool requires_grad = false) {
    return full(std::move(shape), T(1), requires_grad);
  }

  static Tensor scalar(T value, bool requires_grad = false) {
    return from(Shape{}, std::vector<T>{value}, requires_grad);
  }

  bool defined() const { return impl_ != nullptr; }
  const Shape& shape() const { return impl_->shape; }
  int64_t rank() const { return static_cast<int64_t>(impl_->shape.size()); }
  int64_t numel() const { return static_cast<int64_t>(impl_->data.size()); }
  int64_t extent(int64_t axis) const { return impl_->shape[static_cast<size_t>(axis)]; }
  bool requires_grad() const { return impl_->requires_grad; }
  bool is_leaf() const { return impl_->grad_fn == nullptr; }

  std::span<const T> data() const { return impl_->data; }

  // Writable view of leaf storage. Only the optimizer may use this, and only
  // between graph evaluations; writing to an interior node would desynchronize
  // saved activations from the graph that produced them.
  std::span<T> mutable_data() {
    if (!is_leaf()) throw Error("mutable_data() is restricted to leaf tensors");
    return impl_->data;
  }

  T item() const {
    if (numel() != 1)
      throw ShapeError("item() requires a single-element tensor, got " + shape_str(shape()));
    return impl_->data[0];
  }

  // Same values, detached from the graph. Shares storage.
  Tensor detach() const {
    auto impl = std::make_shared<TensorImpl<T>>();
    impl->shape = impl_->shape;
    impl->data = impl_->data;
    impl->requires_grad = false;
    return Tensor(std::move(impl));
  }

  void set_requires_grad(bool v) {
    if (!is_leaf()) throw Error("requires_grad can only be toggled on leaf tensors");
    impl_->requires_grad = v;
  }

  TensorImpl<T>* impl() const { return impl_.get(); }

  const GradFn<T>* grad_fn() const { return impl_->grad_fn.get(); }

  // Internal: wraps the result of an op and records the graph node when
  // recording is enabled and any input participates in differentiation.
  static Tensor op_result(
      Shape shape, std::vector<T> values, const char* op, std::vector<Tensor<T>> inputs,
      std::function<std::vector<Tensor<T>>(const Tensor<T>&, const Tensor<T>&)> backward) {
    Tensor out = from(std::move(shape), std::move(values), false);
    bool any_grad = false;
    for (const auto& in : inputs)
      if (in.requires_grad()) any_grad = true;
    if (any_grad && grad_recording()) {
      out.impl_->requires_grad = true;
      out.impl_->grad_fn = std::make_unique<GradFn<T>>(
          GradFn<T>{op, std::move(inputs), std::move(backward)});
    }
    return out;
  }

 private:
  explicit Tensor(std::shared_ptr<TensorImpl<T>> impl) : impl_(std::move(impl)) {}

  std::shared_ptr<TensorImpl<T>> impl_;
};

namespace detail {

// Topological order over the recorded graph, restricted to nodes that
// participate in differentiation. Iterative DFS; reverse postorder puts every
// node before its inputs, so backward visits each node exactly once with its
// accumulated gradient complete.
template <typename T>
std::vector<Tensor<T>> topo_order(const Tensor<T>& root) {
  std::vector<Tensor<T>> order;
  std::unordered_set<const TensorImpl<T>*> visited;
  struct Frame {
    Tensor<T> node;
    size_t next_input;
  };
  std::vector<Frame> stack;
  if (root.requires_grad()) stack.push_back({root, 0});
  while (!stack.empty()) {
    Frame& top = stack.back();
    const TensorImpl<T>* impl = top.node.impl();
    if (visited.count(impl)) {
      stack.pop_back();
      continue;
    }
    const GradFn<T>* fn = top.node.grad_fn();
    size_t n_inputs = fn ? fn->inputs.size() : 0;
    bool descended = false;
    while (top.next_input < n_inputs) {
      const Tensor<T>& in = fn->inputs[top.next_input++];
      if (in.requires_grad() && !visited.count(in.impl())) {
        stack.push_back({in, 0});
        descended = true;
        break;
      }
    }
    if (descended) continue;
    visited.insert(impl);
    order.push_back(top.node);
    stack.pop_back();
  }
  return order;  // postorder: inputs precede consumers
}

template <typename T>
Tensor<T> accumulate(const Tensor<T>& a, const Tensor<T>& b);  // defined in ops.hpp

}  // namespace detail

// Reverse-mode gradient of a scalar `output` with respect to each tensor in
// `wrt`. With create_graph=true the returned tensors carry graph nodes, so the
// result can be differentiated again (needed for gradient-norm penalties).
// A `wrt` entry the output does not depend on is an error, never a silent
// zero: a missing connection in a model is a wiring bug, not a zero gradient.
template <typename T>
std::vector<Tensor<T>> grad(const Tensor<T>& output, const std::vector<Tensor<T>>& wrt,
                            bool create_graph = false) {
  if (output.numel() != 1)
    throw ShapeError("grad() expects a scalar output, got shape " + shape_str(output.shape()));
  for (const auto& w : wrt)
    if (!w.requires_grad())
      throw DisconnectedGradientError(
          "grad() target does not require grad; it cannot be a differentiation target");
  if (!output.requires_grad())
    throw DisconnectedGradientError("grad() output is not connected to any differentiable input");

  std::vector<Tensor<T>> order = detail::topo_order(output);
  std::unordered_map<const TensorImpl<T>*, Tensor<T>> grads;
  grads.emplace(output.impl(), Tensor<T>::ones(output.shape()));

  std::unique_ptr<NoGradGuard> guard;
  if (!create_graph) guard = std::make_unique<NoGradGuard>();

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Tensor<T>& node = *it;
    const GradFn<T>* fn = node.grad_fn();
    if (!fn) continue;
    auto found = grads.find(node.impl());
    if (found == grads.end()) continue;  // unreachable from output
    Tensor<T> gout = found->second;
    std::vector<Tensor<T>> gins = fn->backward(node, gout);
    if (gins.size() != fn->inputs.size())
      throw Error(std::string("backward of ") + fn->op + " returned wrong arity");
    for (size_t i = 0; i < gins.size(); ++i) {
      const Tensor<T>& in = fn->inputs[i];
      if (!in.requires_grad() || !gins[i].defined()) continue;
      if (gins[i].shape() != in.shape())
        throw ShapeError(std::string("backward of ") + fn->op + " produced gradient shape " +
                         shape_str(gins[i].shape()) + " for input of shape " +
                         shape_str(in.shape()));
      auto slot = grads.find(in.impl());
      if (slot == grads.end())
        grads.emplace(in.impl(), gins[i]);
      else
        slot->second = detail::accumulate(slot->second, gins[i]);
    }
  }

  std::vector<Tensor<T>> result;
  result.reserve(wrt.size());
  for (const auto& w : wrt) {
    auto found = grads.find(w.impl());
    if (found == grads.end())
      throw DisconnectedGradientError(
          "grad(): output is not connected to a requested tensor of shape " +
          shape_str(w.shape()));
    result.push_back(found->second);
  }
  return result;
}

// Central-difference gradient of a tensor-to-scalar function. Test oracle for
// every analytic gradient in the project; deliberately simple and slow.
template <typename T, typename Fn>
Tensor<T> finite_difference_gradient(const Fn& f, const Tensor<T>& x, T eps) {
  if (eps <= T(0)) throw DomainError("finite_difference_gradient requires eps > 0");
  std::vector<T> base(x.data().begin(), x.data().end());
  std::vector<T> out(base.size());
  // f is evaluated as-is (no grad suppression): probed functions may contain
  // their own inner grad() calls.
  for (size_t i = 0; i < base.size(); ++i) {
    std::vector<T> plus = base;
    std::vector<T> minus = base;
    plus[i] += eps;
    minus[i] -= eps;
    T fp = f(Tensor<T>::from(x.shape(), plus)).item();
    T fm = f(Tensor<T>::from(x.shape(), minus)).item();
    out[i] = (fp - fm) / (T(2) * eps);
  }
  return Tensor<T>::from(x.shape(), std::move(out));
}

}  // namespace rgbdinpaint

#endif  // RGBDINPAINT_TENSOR_HPP_
