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

#include "adaact/numcore/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_set>

#include <Eigen/Core>

namespace adaact::num {
namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMajor>;
using MutMap = Eigen::Map<RowMajor>;

thread_local std::uint64_t g_next_seq = 1;
thread_local bool g_no_grad = false;
#ifdef NDEBUG
thread_local bool g_check_finite = false;
#else
thread_local bool g_check_finite = true;
#endif

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shape " + shape_string(a.shape()) + " vs " +
                         shape_string(b.shape()));
  }
}

void require_rank2(const Tensor& a, const char* op) {
  if (a.rank() != 2) throw DimensionError(std::string(op) + ": expected a matrix, got " + shape_string(a.shape()));
}

// Gradient buffer of parent i, or nullptr when it does not take gradients.
std::vector<double>* parent_grad(Node& self, std::size_t i) {
  Node& p = *self.parents[i];
  return p.requires_grad ? &p.ensure_grad() : nullptr;
}

NodePtr make_leaf(Shape shape, std::vector<double> values, bool requires_grad) {
  if (values.size() != shape_size(shape)) {
    throw DimensionError("tensor: " + std::to_string(values.size()) + " values for shape " + shape_string(shape));
  }
  auto node = std::make_shared<Node>();
  node->shape = std::move(shape);
  node->values = std::move(values);
  node->requires_grad = requires_grad;
  node->seq = g_next_seq++;
  return node;
}

template <typename Fwd, typename Deriv>
Tensor unary(const Tensor& a, Fwd fwd, Deriv deriv) {
  std::vector<double> out(a.size());
  auto in = a.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fwd(in[i]);
  return record(a.shape(), std::move(out), {a}, [deriv](Node& self) {
    auto* ga = parent_grad(self, 0);
    if (!ga) return;
    const auto& x = self.parents[0]->values;
    for (std::size_t i = 0; i < self.grad.size(); ++i) (*ga)[i] += self.grad[i] * deriv(x[i], self.values[i]);
  });
}

}  // namespace

std::size_t shape_size(const Shape& shape) {
  std::size_t n = 1;
  for (auto e : shape) n *= e;
  return n;
}

std::string shape_string(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "x" : "") << shape[i];
  os << ']';
  return os.str();
}

std::vector<double>& Node::ensure_grad() {
  if (grad.empty()) grad.assign(values.size(), 0.0);
  return grad;
}

Tensor Tensor::constant(Shape shape, std::vector<double> values) {
  return Tensor(make_leaf(std::move(shape), std::move(values), false));
}

Tensor Tensor::parameter(Shape shape, std::vector<double> values) {
  return Tensor(make_leaf(std::move(shape), std::move(values), true));
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) { return filled(std::move(shape), 0.0, requires_grad); }

Tensor Tensor::filled(Shape shape, double value, bool requires_grad) {
  std::vector<double> v(shape_size(shape), value);
  return Tensor(make_leaf(std::move(shape), std::move(v), requires_grad));
}

Tensor Tensor::scalar(double value, bool requires_grad) {
  return Tensor(make_leaf({1}, {value}, requires_grad));
}

std::size_t Tensor::rows() const { return rank() == 2 ? shape()[0] : 1; }
std::size_t Tensor::cols() const { return rank() == 0 ? 1 : shape().back(); }

double Tensor::item() const {
  if (size() != 1) throw DomainError("item: tensor of shape " + shape_string(shape()) + " is not a scalar");
  return node_->values[0];
}

void Tensor::zero_grad() { node_->grad.assign(node_->values.size(), 0.0); }

NoGradGuard::NoGradGuard() : previous_(g_no_grad) { g_no_grad = true; }
NoGradGuard::~NoGradGuard() { g_no_grad = previous_; }

Tensor Tensor::detach() const { return constant(shape(), node_->values); }

void set_finite_checks(bool enabled) { g_check_finite = enabled; }
bool finite_checks_enabled() { return g_check_finite; }

Tensor record(Shape shape, std::vector<double> values, std::vector<Tensor> parents,
              std::function<void(Node&)> backward) {
  if (g_check_finite) {
    for (double v : values) {
      if (!std::isfinite(v)) throw DomainError("non-finite value produced by tensor op");
    }
  }
  bool needs_grad = !g_no_grad && std::any_of(parents.begin(), parents.end(), [](const Tensor& p) { return p.requires_grad(); });
  auto node = make_leaf(std::move(shape), std::move(values), needs_grad);
  if (needs_grad) {
    node->parents.reserve(parents.size());
    for (auto& p : parents) node->parents.push_back(p.node_ptr());
    node->backward = std::move(backward);
  }
  return Tensor(std::move(node));
}

void backward(const Tensor& loss) {
  if (loss.size() != 1) throw DomainError("backward: loss must be a scalar, got " + shape_string(loss.shape()));
  if (!loss.requires_grad()) return;

  std::vector<Node*> order;
  std::unordered_set<Node*> seen;
  std::vector<Node*> stack{loss.node()};
  seen.insert(loss.node());
  while (!stack.empty()) {
    Node* n = stack.back();
    stack.pop_back();
    order.push_back(n);
    for (auto& p : n->parents) {
      if (p->requires_grad && seen.insert(p.get()).second) stack.push_back(p.get());
    }
  }
  std::sort(order.begin(), order.end(), [](const Node* a, const Node* b) { return a->seq > b->seq; });

  for (Node* n : order) {
    if (n->backward) n->grad.assign(n->values.size(), 0.0);
  }
  loss.node()->ensure_grad()[0] += 1.0;
  for (Node* n : order) {
    if (n->backward) n->backward(*n);
  }
}

void sgd_step(std::span<Tensor> params, double lr) {
  for (auto& p : params) {
    if (!p.has_grad()) throw StateError("sgd_step: parameter of shape " + shape_string(p.shape()) + " has no gradient");
  }
  for (auto& p : params) {
    auto vals = p.mutable_values();
    auto& g = p.node()->grad;
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] -= lr * g[i];
    std::fill(g.begin(), g.end(), 0.0);
  }
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_rank2(a, "matmul");
  require_rank2(b, "matmul");
  const std::size_t m = a.shape()[0], k = a.shape()[1], n = b.shape()[1];
  if (b.shape()[0] != k) {
    throw DimensionError("matmul: inner dimensions " + shape_string(a.shape()) + " x " + shape_string(b.shape()));
  }
  std::vector<double> out(m * n);
  MutMap(out.data(), m, n).noalias() = ConstMap(a.values().data(), m, k) * ConstMap(b.values().data(), k, n);
  return record({m, n}, std::move(out), {a, b}, [m, k, n](Node& self) {
    ConstMap dc(self.grad.data(), m, n);
    if (auto* ga = parent_grad(self, 0)) {
      MutMap(ga->data(), m, k).noalias() += dc * ConstMap(self.parents[1]->values.data(), k, n).transpose();
    }
    if (auto* gb = parent_grad(self, 1)) {
      MutMap(gb->data(), k, n).noalias() += ConstMap(self.parents[0]->values.data(), m, k).transpose() * dc;
    }
  });
}

Tensor elementwise(Elementwise op, const Tensor& a, const Tensor* b) {
  switch (op) {
    case Elementwise::kAdd:
    case Elementwise::kMul:
      if (!b) throw DimensionError("elementwise: binary op needs two operands");
      return op == Elementwise::kAdd ? add(a, *b) : mul(a, *b);
    case Elementwise::kRelu:
      return relu(a);
    case Elementwise::kTanh:
      return tanh(a);
    case Elementwise::kSigmoid:
      return sigmoid(a);
  }
  throw DomainError("elementwise: unknown op");
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values()[i] + b.values()[i];
  return record(a.shape(), std::move(out), {a, b}, [](Node& self) {
    for (std::size_t p = 0; p < 2; ++p) {
      if (auto* g = parent_grad(self, p)) {
        for (std::size_t i = 0; i < self.grad.size(); ++i) (*g)[i] += self.grad[i];
      }
    }
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "sub");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values()[i] - b.values()[i];
  return record(a.shape(), std::move(out), {a, b}, [](Node& self) {
    if (auto* g = parent_grad(self, 0)) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) (*g)[i] += self.grad[i];
    }
    if (auto* g = parent_grad(self, 1)) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) (*g)[i] -= self.grad[i];
    }
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mul");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values()[i] * b.values()[i];
  return record(a.shape(), std::move(out), {a, b}, [](Node& self) {
    const auto& x = self.parents[0]->values;
    const auto& y = self.parents[1]->values;
    if (auto* g = parent_grad(self, 0)) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) (*g)[i] += self.grad[i] * y[i];
    }
    if (auto* g = parent_grad(self, 1)) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) (*g)[i] += self.grad[i] * x[i];
    }
  });
}

Tensor relu(const Tensor& a) {
  return unary(a, [](double x) { return x > 0.0 ? x : 0.0; }, [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor tanh(const Tensor& a) {
  return unary(a, [](double x) { return std::tanh(x); }, [](double, double y) { return 1.0 - y * y; });
}

Tensor sigmoid(const Tensor& a) {
  return unary(
      a, [](double x) { return 1.0 / (1.0 + std::exp(-x)); }, [](double, double y) { return y * (1.0 - y); });
}

Tensor log(const Tensor& a) {
  return unary(a, [](double x) { return std::log(x); }, [](double x, double) { return 1.0 / x; });
}

Tensor scale(const Tensor& a, double factor) {
  return unary(a, [factor](double x) { return factor * x; }, [factor](double, double) { return factor; });
}

Tensor add_row(const Tensor& a, const Tensor& bias) {
  const std::size_t m = a.rows(), n = a.cols();
  if (bias.size() != n) {
    throw DimensionError("add_row: bias " + shape_string(bias.shape()) + " for rows of " + shape_string(a.shape()));
  }
  std::vector<double> out(a.values().begin(), a.values().end());
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < n; ++c) out[r * n + c] += bias.values()[c];
  return record(a.shape(), std::move(out), {a, bias}, [m, n](Node& self) {
    if (auto* g = parent_grad(self, 0)) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) (*g)[i] += self.grad[i];
    }
    if (auto* g = parent_grad(self, 1)) {
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < n; ++c) (*g)[c] += self.grad[r * n + c];
    }
  });
}

Tensor softmax_rows(const Tensor& a) {
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<double> out(a.size());
  for (std::size_t r = 0; r < m; ++r) {
    auto in = a.values().subspan(r * n, n);
    double mx = *std::max_element(in.begin(), in.end());
    double total = 0.0;
    for (std::size_t c = 0; c < n; ++c) total += out[r * n + c] = std::exp(in[c] - mx);
    for (std::size_t c = 0; c < n; ++c) out[r * n + c] /= total;
  }
  return record(a.shape(), std::move(out), {a}, [m, n](Node& self) {
    auto* g = parent_grad(self, 0);
    if (!g) return;
    for (std::size_t r = 0; r < m; ++r) {
      double dot = 0.0;
      for (std::size_t c = 0; c < n; ++c) dot += self.grad[r * n + c] * self.values[r * n + c];
      for (std::size_t c = 0; c < n; ++c) (*g)[r * n + c] += self.values[r * n + c] * (self.grad[r * n + c] - dot);
    }
  });
}

Tensor log_softmax_rows(const Tensor& a) {
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<double> out(a.size());
  for (std::size_t r = 0; r < m; ++r) {
    auto in = a.values().subspan(r * n, n);
    double lse = logsumexp(in);
    for (std::size_t c = 0; c < n; ++c) out[r * n + c] = in[c] - lse;
  }
  return record(a.shape(), std::move(out), {a}, [m, n](Node& self) {
    auto* g = parent_grad(self, 0);
    if (!g) return;
    for (std::size_t r = 0; r < m; ++r) {
      double total = 0.0;
      for (std::size_t c = 0; c < n; ++c) total += self.grad[r * n + c];
      for (std::size_t c = 0; c < n; ++c) {
        (*g)[r * n + c] += self.grad[r * n + c] - std::exp(self.values[r * n + c]) * total;
      }
    }
  });
}

Tensor layernorm(const Tensor& a, const Tensor& gain, const Tensor& shift, double eps) {
  const std::size_t m = a.rows(), n = a.cols();
  if (n < 2) throw DimensionError("layernorm: need at least two features per row");
  if (gain.size() != n || shift.size() != n) throw DimensionError("layernorm: affine parameters do not match row width");
  std::vector<double> xhat(a.size()), inv_std(m), out(a.size());
  for (std::size_t r = 0; r < m; ++r) {
    auto in = a.values().subspan(r * n, n);
    double mu = 0.0;
    for (double v : in) mu += v;
    mu /= static_cast<double>(n);
    double var = 0.0;
    for (double v : in) var += (v - mu) * (v - mu);
    var /= static_cast<double>(n);
    inv_std[r] = 1.0 / std::sqrt(var + eps);
    for (std::size_t c = 0; c < n; ++c) {
      xhat[r * n + c] = (in[c] - mu) * inv_std[r];
      out[r * n + c] = xhat[r * n + c] * gain.values()[c] + shift.values()[c];
    }
  }
  return record(a.shape(), std::move(out), {a, gain, shift},
                [m, n, xhat = std::move(xhat), inv_std = std::move(inv_std)](Node& self) {
                  const auto& g = self.parents[1]->values;
                  if (auto* ga = parent_grad(self, 0)) {
                    const double nn = static_cast<double>(n);
                    for (std::size_t r = 0; r < m; ++r) {
                      double s1 = 0.0, s2 = 0.0;
                      for (std::size_t c = 0; c < n; ++c) {
                        double dxh = self.grad[r * n + c] * g[c];
                        s1 += dxh;
                        s2 += dxh * xhat[r * n + c];
                      }
                      for (std::size_t c = 0; c < n; ++c) {
                        double dxh = self.grad[r * n + c] * g[c];
                        (*ga)[r * n + c] += inv_std[r] / nn * (nn * dxh - s1 - xhat[r * n + c] * s2);
                      }
                    }
                  }
                  if (auto* gg = parent_grad(self, 1)) {
                    for (std::size_t i = 0; i < self.grad.size(); ++i) (*gg)[i % n] += self.grad[i] * xhat[i];
                  }
                  if (auto* gs = parent_grad(self, 2)) {
                    for (std::size_t i = 0; i < self.grad.size(); ++i) (*gs)[i % n] += self.grad[i];
                  }
                });
}

Tensor sum(const Tensor& a) {
  double total = 0.0;
  for (double v : a.values()) total += v;
  return record({1}, {total}, {a}, [](Node& self) {
    if (auto* g = parent_grad(self, 0)) {
      for (auto& v : *g) v += self.grad[0];
    }
  });
}

Tensor mean(const Tensor& a) { return scale(sum(a), 1.0 / static_cast<double>(a.size())); }

Tensor mean_rows(const Tensor& a) {
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<double> out(n, 0.0);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < n; ++c) out[c] += a.values()[r * n + c];
  for (auto& v : out) v /= static_cast<double>(m);
  return record({n}, std::move(out), {a}, [m, n](Node& self) {
    if (auto* g = parent_grad(self, 0)) {
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < n; ++c) (*g)[r * n + c] += self.grad[c] / static_cast<double>(m);
    }
  });
}

Tensor reshape(const Tensor& a, Shape shape) {
  if (shape_size(shape) != a.size()) {
    throw DimensionError("reshape: " + shape_string(a.shape()) + " to " + shape_string(shape));
  }
  std::vector<double> out(a.values().begin(), a.values().end());
  return record(std::move(shape), std::move(out), {a}, [](Node& self) {
    if (auto* g = parent_grad(self, 0)) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) (*g)[i] += self.grad[i];
    }
  });
}

Tensor transpose(const Tensor& a) {
  require_rank2(a, "transpose");
  const std::size_t m = a.shape()[0], n = a.shape()[1];
  std::vector<double> out(a.size());
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < n; ++c) out[c * m + r] = a.values()[r * n + c];
  return record({n, m}, std::move(out), {a}, [m, n](Node& self) {
    if (auto* g = parent_grad(self, 0)) {
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < n; ++c) (*g)[r * n + c] += self.grad[c * m + r];
    }
  });
}

Tensor slice_rows(const Tensor& a, std::size_t begin, std::size_t count) {
  require_rank2(a, "slice_rows");
  const std::size_t n = a.cols();
  if (begin + count > a.rows() || count == 0) throw IndexError("slice_rows: range outside " + shape_string(a.shape()));
  std::vector<double> out(a.values().begin() + static_cast<long>(begin * n),
                          a.values().begin() + static_cast<long>((begin + count) * n));
  return record({count, n}, std::move(out), {a}, [begin, n](Node& self) {
    if (auto* g = parent_grad(self, 0)) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) (*g)[begin * n + i] += self.grad[i];
    }
  });
}

Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t count) {
  require_rank2(a, "slice_cols");
  const std::size_t m = a.rows(), n = a.cols();
  if (begin + count > n || count == 0) throw IndexError("slice_cols: range outside " + shape_string(a.shape()));
  std::vector<double> out(m * count);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < count; ++c) out[r * count + c] = a.values()[r * n + begin + c];
  return record({m, count}, std::move(out), {a}, [m, n, begin, count](Node& self) {
    if (auto* g = parent_grad(self, 0)) {
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < count; ++c) (*g)[r * n + begin + c] += self.grad[r * count + c];
    }
  });
}

Tensor concat_rows(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw DimensionError("concat_rows: no operands");
  const std::size_t n = parts.front().cols();
  std::size_t m = 0;
  std::vector<double> out;
  for (const auto& p : parts) {
    if (p.cols() != n) throw DimensionError("concat_rows: column counts differ");
    m += p.rows();
    out.insert(out.end(), p.values().begin(), p.values().end());
  }
  return record({m, n}, std::move(out), parts, [](Node& self) {
    std::size_t offset = 0;
    for (std::size_t p = 0; p < self.parents.size(); ++p) {
      const std::size_t len = self.parents[p]->values.size();
      if (auto* g = parent_grad(self, p)) {
        for (std::size_t i = 0; i < len; ++i) (*g)[i] += self.grad[offset + i];
      }
      offset += len;
    }
  });
}

Tensor concat_cols(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw DimensionError("concat_cols: no operands");
  const std::size_t m = parts.front().rows();
  std::size_t n = 0;
  for (const auto& p : parts) {
    if (p.rows() != m) throw DimensionError("concat_cols: row counts differ");
    n += p.cols();
  }
  std::vector<double> out(m * n);
  std::vector<std::size_t> widths;
  std::size_t offset = 0;
  for (const auto& p : parts) {
    const std::size_t w = p.cols();
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < w; ++c) out[r * n + offset + c] = p.values()[r * w + c];
    widths.push_back(w);
    offset += w;
  }
  return record({m, n}, std::move(out), parts, [m, n, widths](Node& self) {
    std::size_t off = 0;
    for (std::size_t p = 0; p < self.parents.size(); ++p) {
      const std::size_t w = widths[p];
      if (auto* g = parent_grad(self, p)) {
        for (std::size_t r = 0; r < m; ++r)
          for (std::size_t c = 0; c < w; ++c) (*g)[r * w + c] += self.grad[r * n + off + c];
      }
      off += w;
    }
  });
}

Tensor gather_rows(const Tensor& a, std::span<const long> index) {
  require_rank2(a, "gather_rows");
  const std::size_t n = a.cols();
  const long rows = static_cast<long>(a.rows());
  std::vector<double> out(index.size() * n, 0.0);
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] >= rows) throw IndexError("gather_rows: row index out of range");
    if (index[i] < 0) continue;
    std::copy_n(a.values().begin() + index[i] * static_cast<long>(n), n, out.begin() + static_cast<long>(i * n));
  }
  std::vector<long> idx(index.begin(), index.end());
  return record({index.size(), n}, std::move(out), {a}, [n, idx = std::move(idx)](Node& self) {
    if (auto* g = parent_grad(self, 0)) {
      for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] < 0) continue;
        for (std::size_t c = 0; c < n; ++c) (*g)[static_cast<std::size_t>(idx[i]) * n + c] += self.grad[i * n + c];
      }
    }
  });
}

Tensor pick(const Tensor& a, std::span<const std::size_t> column) {
  const std::size_t m = a.rows(), n = a.cols();
  if (column.size() != m) throw DimensionError("pick: one column index per row required");
  std::vector<double> out(m);
  for (std::size_t r = 0; r < m; ++r) {
    if (column[r] >= n) throw IndexError("pick: column index out of range");
    out[r] = a.values()[r * n + column[r]];
  }
  std::vector<std::size_t> cols(column.begin(), column.end());
  return record({m}, std::move(out), {a}, [n, cols = std::move(cols)](Node& self) {
    if (auto* g = parent_grad(self, 0)) {
      for (std::size_t r = 0; r < cols.size(); ++r) (*g)[r * n + cols[r]] += self.grad[r];
    }
  });
}

double logsumexp(std::span<const double> values) {
  if (values.empty()) throw DomainError("logsumexp: empty input");
  if (values.size() == 1) return values[0];
  double mx = *std::max_element(values.begin(), values.end());
  if (mx == -std::numeric_limits<double>::infinity()) return mx;
  double total = 0.0;
  for (double v : values) total += std::exp(v - mx);
  return mx + std::log(total);
}

Tensor normal_parameter(Shape shape, double stddev, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  std::vector<double> v(shape_size(shape));
  for (auto& x : v) x = dist(rng);
  return Tensor::parameter(std::move(shape), std::move(v));
}

Tensor uniform_parameter(Shape shape, double bound, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  std::vector<double> v(shape_size(shape));
  for (auto& x : v) x = dist(rng);
  return Tensor::parameter(std::move(shape), std::move(v));
}

}  // namespace adaact::num
