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

// Dense double-precision tensors with tape-free reverse-mode differentiation.
//
// Every operation returns a new Tensor that remembers its inputs and how to
// push gradients back to them, so the graph is rebuilt on every forward pass
// and released when the last handle to its output goes away. Nodes carry a
// global creation sequence number; inputs always precede their consumers,
// which gives backward() a topological order without an explicit tape.
//
// Broadcasting is limited to "scalar with tensor" and "equal shapes". Row-wise
// bias addition has its own operation (add_bias).
//
// A graph must not be used from more than one thread at a time. Distinct
// graphs that only share leaf parameters can be built concurrently as long as
// backward() calls on them are serialized.

#ifndef EFP_TENSOR_H_
#define EFP_TENSOR_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace efp {

using Shape = std::vector<std::size_t>;

std::string shape_to_string(const Shape& shape);
std::size_t shape_numel(const Shape& shape);

namespace detail {
struct Node;
}  // namespace detail

class Tensor {
 public:
  // Null handle; most accessors require defined().
  Tensor() = default;

  // Zero-filled tensor.
  explicit Tensor(Shape shape, bool requires_grad = false);
  Tensor(Shape shape, std::vector<double> values, bool requires_grad = false);

  static Tensor scalar(double value, bool requires_grad = false);
  static Tensor vector(std::vector<double> values, bool requires_grad = false);
  static Tensor matrix(std::size_t rows, std::size_t cols,
                       std::vector<double> values, bool requires_grad = false);
  static Tensor ones(Shape shape);

  bool defined() const { return node_ != nullptr; }

  const Shape& shape() const;
  std::size_t rank() const { return shape().size(); }
  std::size_t dim(std::size_t axis) const;
  std::size_t numel() const;
  bool is_scalar() const { return numel() == 1; }

  std::span<const double> values() const;
  // Writable storage. Only meaningful on leaves (parameters, inputs).
  std::span<double> mutable_values();
  double item() const;
  double at(std::size_t row, std::size_t col) const;

  bool requires_grad() const;
  bool is_leaf() const;
  // Empty span when requires_grad() is false.
  std::span<const double> grad() const;
  std::span<double> mutable_grad();
  void zero_grad();

  // Reverse sweep from this scalar. Leaf gradients accumulate across calls;
  // interior gradients are recomputed on each call.
  void backward() const;

  // Value copy with no history.
  Tensor detach() const;

  // Identity of the underlying node, for tests.
  const void* node_id() const { return node_.get(); }

 private:
  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}
  friend struct TensorAccess;

  std::shared_ptr<detail::Node> node_;
};

// Linear algebra.
Tensor matmul(const Tensor& a, const Tensor& b);     // [m,k]x[k,n]
Tensor matmul_nt(const Tensor& a, const Tensor& b);  // [m,k]x[n,k]^T
Tensor transpose(const Tensor& a);

// Elementwise arithmetic. Operands must have equal shapes, or one of them
// must hold a single element.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);

// m[r, :] + bias for every row r; bias has m.dim(1) elements.
Tensor add_bias(const Tensor& m, const Tensor& bias);

enum class Activation { kIdentity, kRelu, kTanh, kSigmoid };

Tensor tanh(const Tensor& x);
Tensor sigmoid(const Tensor& x);
Tensor relu(const Tensor& x);
Tensor activate(const Tensor& x, Activation act);
std::string activation_name(Activation act);
Activation parse_activation(const std::string& name);

// Elementwise map with caller-supplied derivative.
Tensor map(const Tensor& x, std::function<double(double)> f,
           std::function<double(double)> df);

// Softmax over all elements, treated as one vector.
Tensor softmax(const Tensor& x);

// Concatenation along the last axis; leading dimensions must agree.
Tensor concat(const Tensor& a, const Tensor& b);

// Row `index` of a matrix, shape [1, cols].
Tensor row(const Tensor& m, std::size_t index);
// Columns [begin, end) of a matrix.
Tensor slice_cols(const Tensor& m, std::size_t begin, std::size_t end);
// Stacks [1, d] (or [d]) tensors into [n, d].
Tensor stack_rows(std::span<const Tensor> rows);
Tensor reshape(const Tensor& x, Shape shape);
Tensor sum(const Tensor& x);

// Divides each row by its sum. Rows must have positive sums.
Tensor normalize_rows(const Tensor& m);

namespace testing {
// Negative-control hook: while enabled, tanh backpropagates a gradient that
// is off by 10%. Used to prove that gradient checking detects broken ops.
void set_tanh_gradient_fault(bool enabled);
bool tanh_gradient_fault();
}  // namespace testing

}  // namespace efp

#endif  // EFP_TENSOR_H_
