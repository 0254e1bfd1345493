// Copyright 2026 The efpgraph Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "efp/tensor.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <unordered_set>
#include <utility>

#include "efp/errors.h"

namespace efp {
namespace detail {

struct Node {
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;
  bool requires_grad = false;
  bool leaf = true;
  std::uint64_t seq = 0;
  std::vector<std::shared_ptr<Node>> inputs;
  // Reads this node's grad and accumulates into inputs that require grad.
  std::function<void(Node&)> backward;

  std::size_t rows() const { return shape[0]; }
  std::size_t cols() const { return shape[1]; }
};

namespace {

std::atomic<std::uint64_t> g_sequence{0};
std::atomic<bool> g_tanh_fault{false};

}  // namespace
}  // namespace detail

using detail::Node;
using NodePtr = std::shared_ptr<Node>;

struct TensorAccess {
  static const NodePtr& node(const Tensor& t) { return t.node_; }
  static Tensor wrap(NodePtr n) { return Tensor(std::move(n)); }
};

namespace {

NodePtr new_node(Shape shape, std::vector<double> value, bool requires_grad) {
  auto n = std::make_shared<Node>();
  n->shape = std::move(shape);
  n->value = std::move(value);
  n->requires_grad = requires_grad;
  n->seq = detail::g_sequence.fetch_add(1, std::memory_order_relaxed);
  if (requires_grad) n->grad.assign(n->value.size(), 0.0);
  return n;
}

const Node& node_of(const Tensor& t) {
  if (!t.defined()) throw ContractError("operation on an undefined tensor");
  return *TensorAccess::node(t);
}

// Builds an interior node. The backward closure is attached only when some
// input needs a gradient.
Tensor make_result(Shape shape, std::vector<double> value,
                   std::vector<Tensor> inputs,
                   std::function<void(Node&)> backward) {
  bool needs = false;
  for (const auto& in : inputs) needs = needs || in.requires_grad();
  auto n = new_node(std::move(shape), std::move(value), needs);
  if (needs) {
    n->leaf = false;
    n->inputs.reserve(inputs.size());
    for (const auto& in : inputs) n->inputs.push_back(TensorAccess::node(in));
    n->backward = std::move(backward);
  }
  return TensorAccess::wrap(std::move(n));
}

void require_matrix(const Tensor& t, const char* op) {
  if (node_of(t).shape.size() != 2) {
    throw DimensionError(std::string(op) + ": expected a matrix, got shape " +
                         shape_to_string(t.shape()));
  }
}

// Equal shapes, or exactly one side (or both) with a single element.
Shape broadcast_shape(const Tensor& a, const Tensor& b, const char* op) {
  const auto& sa = a.shape();
  const auto& sb = b.shape();
  if (sa == sb) return sa;
  if (b.numel() == 1) return sa;
  if (a.numel() == 1) return sb;
  throw DimensionError(std::string(op) + ": incompatible shapes " +
                       shape_to_string(sa) + " and " + shape_to_string(sb));
}

template <typename Fwd, typename DA, typename DB>
Tensor binary(const Tensor& a, const Tensor& b, const char* op, Fwd fwd,
              DA dfa, DB dfb) {
  Shape shape = broadcast_shape(a, b, op);
  const std::size_t n = shape_numel(shape);
  const auto& av = node_of(a).value;
  const auto& bv = node_of(b).value;
  const bool a_scalar = av.size() == 1 && n != 1;
  const bool b_scalar = bv.size() == 1 && n != 1;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = fwd(av[a_scalar ? 0 : i], bv[b_scalar ? 0 : i]);
  }
  return make_result(
      std::move(shape), std::move(out), {a, b},
      [a_scalar, b_scalar, dfa, dfb](Node& self) {
        Node& na = *self.inputs[0];
        Node& nb = *self.inputs[1];
        for (std::size_t i = 0; i < self.grad.size(); ++i) {
          const double x = na.value[a_scalar ? 0 : i];
          const double y = nb.value[b_scalar ? 0 : i];
          const double g = self.grad[i];
          if (na.requires_grad) na.grad[a_scalar ? 0 : i] += g * dfa(x, y);
          if (nb.requires_grad) nb.grad[b_scalar ? 0 : i] += g * dfb(x, y);
        }
      });
}

// `deriv` receives (input, output) so saturating functions can reuse output.
template <typename Fwd, typename Deriv>
Tensor unary(const Tensor& x, Fwd fwd, Deriv deriv) {
  const auto& xv = node_of(x).value;
  std::vector<double> out(xv.size());
  for (std::size_t i = 0; i < xv.size(); ++i) out[i] = fwd(xv[i]);
  return make_result(x.shape(), std::move(out), {x}, [deriv](Node& self) {
    Node& in = *self.inputs[0];
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      in.grad[i] += self.grad[i] * deriv(in.value[i], self.value[i]);
    }
  });
}

// c[m,n] += a[m,k] * b[k,n], all row-major.
void gemm_nn(const double* a, const double* b, double* c, std::size_t m,
             std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a[i * k + p];
      const double* bp = b + p * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += aip * bp[j];
    }
  }
}

// c[m,n] += a[m,k] * b[n,k]^T.
void gemm_nt(const double* a, const double* b, double* c, std::size_t m,
             std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = a + i * k;
    for (std::size_t j = 0; j < n; ++j) {
      const double* bj = b + j * k;
      double s = 0.0;
      for (std::size_t p = 0; p < k; ++p) s += ai[p] * bj[p];
      c[i * n + j] += s;
    }
  }
}

// c[k,n] += a[m,k]^T * b[m,n].
void gemm_tn(const double* a, const double* b, double* c, std::size_t m,
             std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = a + i * k;
    const double* bi = b + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = ai[p];
      double* cp = c + p * n;
      for (std::size_t j = 0; j < n; ++j) cp[j] += aip * bi[j];
    }
  }
}

double sigmoid_value(double x) {
  // Branches keep exp() from overflowing for large |x|.
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

std::string shape_to_string(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

std::size_t shape_numel(const Shape& shape) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

Tensor::Tensor(Shape shape, bool requires_grad) {
  for (auto d : shape) {
    if (d == 0) throw DimensionError("tensor dimensions must be positive");
  }
  const std::size_t n = shape_numel(shape);
  node_ = new_node(std::move(shape), std::vector<double>(n, 0.0), requires_grad);
}

Tensor::Tensor(Shape shape, std::vector<double> values, bool requires_grad) {
  for (auto d : shape) {
    if (d == 0) throw DimensionError("tensor dimensions must be positive");
  }
  if (shape_numel(shape) != values.size()) {
    throw DimensionError("shape " + shape_to_string(shape) + " needs " +
                         std::to_string(shape_numel(shape)) + " values, got " +
                         std::to_string(values.size()));
  }
  node_ = new_node(std::move(shape), std::move(values), requires_grad);
}

Tensor Tensor::scalar(double value, bool requires_grad) {
  return Tensor(Shape{1}, {value}, requires_grad);
}

Tensor Tensor::vector(std::vector<double> values, bool requires_grad) {
  const std::size_t n = values.size();
  return Tensor(Shape{n}, std::move(values), requires_grad);
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols,
                      std::vector<double> values, bool requires_grad) {
  return Tensor(Shape{rows, cols}, std::move(values), requires_grad);
}

Tensor Tensor::ones(Shape shape) {
  const std::size_t n = shape_numel(shape);
  return Tensor(std::move(shape), std::vector<double>(n, 1.0));
}

const Shape& Tensor::shape() const { return node_of(*this).shape; }

std::size_t Tensor::dim(std::size_t axis) const {
  const auto& s = shape();
  if (axis >= s.size()) {
    throw ContractError("axis " + std::to_string(axis) + " out of range for " +
                        shape_to_string(s));
  }
  return s[axis];
}

std::size_t Tensor::numel() const { return node_of(*this).value.size(); }

std::span<const double> Tensor::values() const { return node_of(*this).value; }

std::span<double> Tensor::mutable_values() {
  node_of(*this);
  return node_->value;
}

double Tensor::item() const {
  if (numel() != 1) {
    throw ContractError("item() on tensor of shape " + shape_to_string(shape()));
  }
  return node_->value[0];
}

double Tensor::at(std::size_t r, std::size_t c) const {
  require_matrix(*this, "at");
  if (r >= node_->rows() || c >= node_->cols()) {
    throw ContractError("index out of range");
  }
  return node_->value[r * node_->cols() + c];
}

bool Tensor::requires_grad() const { return node_of(*this).requires_grad; }

bool Tensor::is_leaf() const { return node_of(*this).leaf; }

std::span<const double> Tensor::grad() const { return node_of(*this).grad; }

std::span<double> Tensor::mutable_grad() {
  node_of(*this);
  return node_->grad;
}

void Tensor::zero_grad() {
  node_of(*this);
  std::fill(node_->grad.begin(), node_->grad.end(), 0.0);
}

void Tensor::backward() const {
  const Node& root = node_of(*this);
  if (root.value.size() != 1) {
    throw ContractError("backward() needs a scalar loss, got shape " +
                        shape_to_string(root.shape));
  }
  if (!root.requires_grad) return;

  std::vector<Node*> order;
  std::unordered_set<Node*> seen;
  std::vector<Node*> stack{node_.get()};
  seen.insert(node_.get());
  while (!stack.empty()) {
    Node* n = stack.back();
    stack.pop_back();
    order.push_back(n);
    for (const auto& in : n->inputs) {
      if (in->requires_grad && seen.insert(in.get()).second) {
        stack.push_back(in.get());
      }
    }
  }
  std::sort(order.begin(), order.end(),
            [](const Node* x, const Node* y) { return x->seq > y->seq; });

  for (Node* n : order) {
    if (!n->leaf) n->grad.assign(n->value.size(), 0.0);
  }
  node_->grad[0] += 1.0;
  for (Node* n : order) {
    if (!n->leaf && n->backward) n->backward(*n);
  }
}

Tensor Tensor::detach() const {
  const Node& n = node_of(*this);
  return Tensor(n.shape, n.value, false);
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_matrix(a, "matmul");
  require_matrix(b, "matmul");
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  if (b.dim(0) != k) {
    throw DimensionError("matmul: inner dimensions differ: " +
                         shape_to_string(a.shape()) + " x " +
                         shape_to_string(b.shape()));
  }
  std::vector<double> out(m * n, 0.0);
  gemm_nn(node_of(a).value.data(), node_of(b).value.data(), out.data(), m, k, n);
  return make_result({m, n}, std::move(out), {a, b}, [m, k, n](Node& self) {
    Node& na = *self.inputs[0];
    Node& nb = *self.inputs[1];
    // dA = G * B^T ; dB = A^T * G
    if (na.requires_grad) {
      gemm_nt(self.grad.data(), nb.value.data(), na.grad.data(), m, n, k);
    }
    if (nb.requires_grad) {
      gemm_tn(na.value.data(), self.grad.data(), nb.grad.data(), m, k, n);
    }
  });
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
  require_matrix(a, "matmul_nt");
  require_matrix(b, "matmul_nt");
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(0);
  if (b.dim(1) != k) {
    throw DimensionError("matmul_nt: inner dimensions differ: " +
                         shape_to_string(a.shape()) + " x " +
                         shape_to_string(b.shape()) + "^T");
  }
  std::vector<double> out(m * n, 0.0);
  gemm_nt(node_of(a).value.data(), node_of(b).value.data(), out.data(), m, k, n);
  return make_result({m, n}, std::move(out), {a, b}, [m, k, n](Node& self) {
    Node& na = *self.inputs[0];
    Node& nb = *self.inputs[1];
    // C = A B^T: dA = G * B ; dB = G^T * A
    if (na.requires_grad) {
      gemm_nn(self.grad.data(), nb.value.data(), na.grad.data(), m, n, k);
    }
    if (nb.requires_grad) {
      gemm_tn(self.grad.data(), na.value.data(), nb.grad.data(), m, n, k);
    }
  });
}

Tensor transpose(const Tensor& a) {
  require_matrix(a, "transpose");
  const std::size_t r = a.dim(0), c = a.dim(1);
  const auto& v = node_of(a).value;
  std::vector<double> out(r * c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) out[j * r + i] = v[i * c + j];
  }
  return make_result({c, r}, std::move(out), {a}, [r, c](Node& self) {
    Node& in = *self.inputs[0];
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < c; ++j) {
        in.grad[i * c + j] += self.grad[j * r + i];
      }
    }
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  return binary(
      a, b, "add", [](double x, double y) { return x + y; },
      [](double, double) { return 1.0; }, [](double, double) { return 1.0; });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  return binary(
      a, b, "sub", [](double x, double y) { return x - y; },
      [](double, double) { return 1.0; }, [](double, double) { return -1.0; });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  return binary(
      a, b, "mul", [](double x, double y) { return x * y; },
      [](double, double y) { return y; }, [](double x, double) { return x; });
}

Tensor scale(const Tensor& a, double factor) {
  return unary(
      a, [factor](double x) { return factor * x; },
      [factor](double, double) { return factor; });
}

Tensor add_bias(const Tensor& m, const Tensor& bias) {
  require_matrix(m, "add_bias");
  const std::size_t r = m.dim(0), c = m.dim(1);
  if (bias.numel() != c) {
    throw DimensionError("add_bias: bias " + shape_to_string(bias.shape()) +
                         " does not match columns of " +
                         shape_to_string(m.shape()));
  }
  const auto& mv = node_of(m).value;
  const auto& bv = node_of(bias).value;
  std::vector<double> out(r * c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) out[i * c + j] = mv[i * c + j] + bv[j];
  }
  return make_result({r, c}, std::move(out), {m, bias}, [r, c](Node& self) {
    Node& nm = *self.inputs[0];
    Node& nb = *self.inputs[1];
    if (nm.requires_grad) {
      for (std::size_t i = 0; i < r * c; ++i) nm.grad[i] += self.grad[i];
    }
    if (nb.requires_grad) {
      for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) nb.grad[j] += self.grad[i * c + j];
      }
    }
  });
}

Tensor tanh(const Tensor& x) {
  return unary(
      x, [](double v) { return std::tanh(v); },
      [](double, double y) {
        const double d = 1.0 - y * y;
        return detail::g_tanh_fault.load(std::memory_order_relaxed) ? 1.1 * d : d;
      });
}

Tensor sigmoid(const Tensor& x) {
  return unary(
      x, [](double v) { return sigmoid_value(v); },
      [](double, double y) { return y * (1.0 - y); });
}

Tensor relu(const Tensor& x) {
  return unary(
      x, [](double v) { return v > 0.0 ? v : 0.0; },
      [](double v, double) { return v > 0.0 ? 1.0 : 0.0; });
}

Tensor activate(const Tensor& x, Activation act) {
  switch (act) {
    case Activation::kIdentity:
      return x;
    case Activation::kRelu:
      return relu(x);
    case Activation::kTanh:
      return tanh(x);
    case Activation::kSigmoid:
      return sigmoid(x);
  }
  throw ContractError("unknown activation");
}

std::string activation_name(Activation act) {
  switch (act) {
    case Activation::kIdentity:
      return "identity";
    case Activation::kRelu:
      return "relu";
    case Activation::kTanh:
      return "tanh";
    case Activation::kSigmoid:
      return "sigmoid";
  }
  return "?";
}

Activation parse_activation(const std::string& name) {
  if (name == "identity") return Activation::kIdentity;
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  if (name == "sigmoid") return Activation::kSigmoid;
  throw ConfigError("unknown activation '" + name + "'");
}

Tensor map(const Tensor& x, std::function<double(double)> f,
           std::function<double(double)> df) {
  return unary(
      x, [f](double v) { return f(v); },
      [df](double v, double) { return df(v); });
}

Tensor softmax(const Tensor& x) {
  const auto& v = node_of(x).value;
  if (v.empty()) throw DomainError("softmax of an empty vector");
  const double mx = *std::max_element(v.begin(), v.end());
  std::vector<double> out(v.size());
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::exp(v[i] - mx);
    total += out[i];
  }
  for (auto& o : out) o /= total;
  return make_result(x.shape(), std::move(out), {x}, [](Node& self) {
    Node& in = *self.inputs[0];
    // dx_i = y_i * (g_i - sum_j g_j y_j)
    double dot = 0.0;
    for (std::size_t j = 0; j < self.value.size(); ++j) {
      dot += self.grad[j] * self.value[j];
    }
    for (std::size_t i = 0; i < self.value.size(); ++i) {
      in.grad[i] += self.value[i] * (self.grad[i] - dot);
    }
  });
}

Tensor concat(const Tensor& a, const Tensor& b) {
  const auto& sa = a.shape();
  const auto& sb = b.shape();
  if (sa.size() != sb.size() ||
      !std::equal(sa.begin(), sa.end() - 1, sb.begin())) {
    throw DimensionError("concat: leading shapes differ: " +
                         shape_to_string(sa) + " and " + shape_to_string(sb));
  }
  const std::size_t p = sa.back(), q = sb.back();
  const std::size_t outer = a.numel() / p;
  Shape shape = sa;
  shape.back() = p + q;
  const auto& av = node_of(a).value;
  const auto& bv = node_of(b).value;
  std::vector<double> out;
  out.reserve(outer * (p + q));
  for (std::size_t r = 0; r < outer; ++r) {
    out.insert(out.end(), av.begin() + r * p, av.begin() + (r + 1) * p);
    out.insert(out.end(), bv.begin() + r * q, bv.begin() + (r + 1) * q);
  }
  return make_result(std::move(shape), std::move(out), {a, b},
                     [outer, p, q](Node& self) {
                       Node& na = *self.inputs[0];
                       Node& nb = *self.inputs[1];
                       for (std::size_t r = 0; r < outer; ++r) {
                         const double* g = self.grad.data() + r * (p + q);
                         if (na.requires_grad) {
                           for (std::size_t j = 0; j < p; ++j) {
                             na.grad[r * p + j] += g[j];
                           }
                         }
                         if (nb.requires_grad) {
                           for (std::size_t j = 0; j < q; ++j) {
                             nb.grad[r * q + j] += g[p + j];
                           }
                         }
                       }
                     });
}

Tensor row(const Tensor& m, std::size_t index) {
  require_matrix(m, "row");
  const std::size_t r = m.dim(0), c = m.dim(1);
  if (index >= r) {
    throw ContractError("row " + std::to_string(index) + " out of range for " +
                        shape_to_string(m.shape()));
  }
  const auto& v = node_of(m).value;
  std::vector<double> out(v.begin() + index * c, v.begin() + (index + 1) * c);
  return make_result({1, c}, std::move(out), {m}, [index, c](Node& self) {
    Node& in = *self.inputs[0];
    for (std::size_t j = 0; j < c; ++j) in.grad[index * c + j] += self.grad[j];
  });
}

Tensor slice_cols(const Tensor& m, std::size_t begin, std::size_t end) {
  require_matrix(m, "slice_cols");
  const std::size_t r = m.dim(0), c = m.dim(1);
  if (begin >= end || end > c) {
    throw ContractError("slice_cols: bad range [" + std::to_string(begin) +
                        ", " + std::to_string(end) + ") for " +
                        shape_to_string(m.shape()));
  }
  const std::size_t w = end - begin;
  const auto& v = node_of(m).value;
  std::vector<double> out(r * w);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < w; ++j) out[i * w + j] = v[i * c + begin + j];
  }
  return make_result({r, w}, std::move(out), {m}, [r, c, w, begin](Node& self) {
    Node& in = *self.inputs[0];
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < w; ++j) {
        in.grad[i * c + begin + j] += self.grad[i * w + j];
      }
    }
  });
}

Tensor stack_rows(std::span<const Tensor> rows) {
  if (rows.empty()) throw DomainError("stack_rows of an empty list");
  const std::size_t d = rows[0].numel();
  std::vector<double> out;
  out.reserve(rows.size() * d);
  for (const auto& r : rows) {
    if (r.numel() != d || r.rank() > 2 || (r.rank() == 2 && r.dim(0) != 1)) {
      throw DimensionError("stack_rows: row of shape " +
                           shape_to_string(r.shape()) + " where [1x" +
                           std::to_string(d) + "] expected");
    }
    const auto v = r.values();
    out.insert(out.end(), v.begin(), v.end());
  }
  std::vector<Tensor> inputs(rows.begin(), rows.end());
  return make_result({rows.size(), d}, std::move(out), std::move(inputs),
                     [d](Node& self) {
                       for (std::size_t i = 0; i < self.inputs.size(); ++i) {
                         Node& in = *self.inputs[i];
                         if (!in.requires_grad) continue;
                         for (std::size_t j = 0; j < d; ++j) {
                           in.grad[j] += self.grad[i * d + j];
                         }
                       }
                     });
}

Tensor reshape(const Tensor& x, Shape shape) {
  if (shape_numel(shape) != x.numel()) {
    throw DimensionError("reshape: " + shape_to_string(x.shape()) + " to " +
                         shape_to_string(shape));
  }
  std::vector<double> out(node_of(x).value);
  return make_result(std::move(shape), std::move(out), {x}, [](Node& self) {
    Node& in = *self.inputs[0];
    for (std::size_t i = 0; i < self.grad.size(); ++i) in.grad[i] += self.grad[i];
  });
}

Tensor sum(const Tensor& x) {
  double s = 0.0;
  for (double v : node_of(x).value) s += v;
  return make_result({1}, {s}, {x}, [](Node& self) {
    Node& in = *self.inputs[0];
    for (auto& g : in.grad) g += self.grad[0];
  });
}

Tensor normalize_rows(const Tensor& m) {
  require_matrix(m, "normalize_rows");
  const std::size_t r = m.dim(0), c = m.dim(1);
  const auto& v = node_of(m).value;
  std::vector<double> sums(r, 0.0);
  std::vector<double> out(r * c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) sums[i] += v[i * c + j];
    if (!(sums[i] > 0.0)) {
      throw DomainError("normalize_rows: row " + std::to_string(i) +
                        " has non-positive sum");
    }
    for (std::size_t j = 0; j < c; ++j) out[i * c + j] = v[i * c + j] / sums[i];
  }
  return make_result({r, c}, std::move(out), {m},
                     [r, c, sums = std::move(sums)](Node& self) {
                       Node& in = *self.inputs[0];
                       // y_ij = x_ij / s_i: dx_ij = (g_ij - sum_l g_il y_il) / s_i
                       for (std::size_t i = 0; i < r; ++i) {
                         double dot = 0.0;
                         for (std::size_t j = 0; j < c; ++j) {
                           dot += self.grad[i * c + j] * self.value[i * c + j];
                         }
                         for (std::size_t j = 0; j < c; ++j) {
                           in.grad[i * c + j] +=
                               (self.grad[i * c + j] - dot) / sums[i];
                         }
                       }
                     });
}

namespace testing {

void set_tanh_gradient_fault(bool enabled) {
  detail::g_tanh_fault.store(enabled, std::memory_order_relaxed);
}

bool tanh_gradient_fault() {
  return detail::g_tanh_fault.load(std::memory_order_relaxed);
}

}  // namespace testing
}  // namespace efp
