/* Copyright 2026 The AdaAct Authors. All Rights Reserved.

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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "adaact/errors.hpp"

namespace adaact::num {

using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape& shape);
std::string shape_string(const Shape& shape);

struct Node;
using NodePtr = std::shared_ptr<Node>;

// One recorded value on the tape. Leaves have no backward function;
// interior nodes propagate their grad into their parents' grads.
struct Node {
  Shape shape;
  std::vector<double> values;
  std::vector<double> grad;  // empty until first needed
  bool requires_grad = false;
  std::uint64_t seq = 0;
  std::vector<NodePtr> parents;
  std::function<void(Node&)> backward;

  std::vector<double>& ensure_grad();
};

// Handle to a tape node. Copies share the node; use detach() for a value copy.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(NodePtr node) : node_(std::move(node)) {}

  static Tensor constant(Shape shape, std::vector<double> values);
  static Tensor parameter(Shape shape, std::vector<double> values);
  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor filled(Shape shape, double value, bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  std::size_t rank() const { return node_->shape.size(); }
  std::size_t size() const { return node_->values.size(); }
  // Rank-1 tensors read as a single row.
  std::size_t rows() const;
  std::size_t cols() const;

  std::span<const double> values() const { return node_->values; }
  // Direct write access; intended for leaves (initialization, optimizer).
  std::span<double> mutable_values() { return node_->values; }
  double at(std::size_t i) const { return node_->values.at(i); }
  double at(std::size_t r, std::size_t c) const { return node_->values.at(r * cols() + c); }
  double item() const;

  bool requires_grad() const { return node_->requires_grad; }
  bool has_grad() const { return !node_->grad.empty(); }
  std::span<const double> grad() const { return node_->grad; }
  // Sets the gradient to zeros, allocating it if absent.
  void zero_grad();
  void clear_grad() { node_->grad.clear(); }

  Tensor detach() const;
  Node* node() const { return node_.get(); }
  const NodePtr& node_ptr() const { return node_; }

 private:
  NodePtr node_;
};

// Records a new node. When no parent requires a gradient the parents and the
// backward function are dropped.
Tensor record(Shape shape, std::vector<double> values, std::vector<Tensor> parents,
              std::function<void(Node&)> backward);

// While alive, ops on this thread record no parents (inference mode).
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

// Finite-value checking on every recorded op. Defaults on in debug builds.
void set_finite_checks(bool enabled);
bool finite_checks_enabled();

// Reverse pass from a scalar. Leaf gradients accumulate across calls;
// interior gradients are recomputed each call.
void backward(const Tensor& loss);

// p <- p - lr * grad, then grad <- 0. Throws StateError if a grad is absent.
void sgd_step(std::span<Tensor> params, double lr);

// ---- operations ----------------------------------------------------------

Tensor matmul(const Tensor& a, const Tensor& b);

enum class Elementwise { kAdd, kMul, kRelu, kTanh, kSigmoid };
Tensor elementwise(Elementwise op, const Tensor& a, const Tensor* b = nullptr);

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor relu(const Tensor& a);
Tensor tanh(const Tensor& a);
Tensor sigmoid(const Tensor& a);
Tensor log(const Tensor& a);
Tensor scale(const Tensor& a, double factor);

// a[M×N] + bias[N] added to every row.
Tensor add_row(const Tensor& a, const Tensor& bias);

Tensor softmax_rows(const Tensor& a);
Tensor log_softmax_rows(const Tensor& a);
Tensor layernorm(const Tensor& a, const Tensor& gain, const Tensor& shift, double eps = 1e-5);

Tensor sum(const Tensor& a);
Tensor mean(const Tensor& a);
Tensor mean_rows(const Tensor& a);  // [M×N] -> [N]
Tensor reshape(const Tensor& a, Shape shape);
Tensor transpose(const Tensor& a);
Tensor slice_rows(const Tensor& a, std::size_t begin, std::size_t count);
Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t count);
Tensor concat_rows(const std::vector<Tensor>& parts);
Tensor concat_cols(const std::vector<Tensor>& parts);
// Output row i is a[index[i]], or zeros when index[i] < 0.
Tensor gather_rows(const Tensor& a, std::span<const long> index);
// Output[i] = a[i][column[i]].
Tensor pick(const Tensor& a, std::span<const std::size_t> column);

// Plain-vector log-sum-exp with max shift. Empty input is a DomainError.
double logsumexp(std::span<const double> values);

// ---- initialization ------------------------------------------------------

Tensor normal_parameter(Shape shape, double stddev, std::mt19937_64& rng);
Tensor uniform_parameter(Shape shape, double bound, std::mt19937_64& rng);

}  // namespace adaact::num

namespace adaact {
using NamedTensor = std::pair<std::string, num::Tensor>;
}  // namespace adaact
