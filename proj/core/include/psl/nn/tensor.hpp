#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "psl/error.hpp"

namespace psl::nn {

// Dense row-major tensor, rank <= 4. Production paths use S = float with
// float64 accumulation inside kernels; the gradient-check harness
// instantiates S = double end to end.
template <typename S>
struct TensorT {
  std::vector<std::size_t> shape;
  std::vector<S> data;

  TensorT() = default;

  explicit TensorT(std::vector<std::size_t> shape_in)
      : shape(std::move(shape_in)) {
    if (shape.size() > 4)
      raise(ErrorCode::ShapeMismatch, "tensor rank > 4");
    data.assign(numel_of(shape), S(0));
  }

  TensorT(std::initializer_list<std::size_t> shape_in, std::vector<S> values)
      : shape(shape_in), data(std::move(values)) {
    if (shape.size() > 4)
      raise(ErrorCode::ShapeMismatch, "tensor rank > 4");
    if (data.size() != numel_of(shape))
      raise(ErrorCode::ShapeMismatch, "data length does not match shape");
  }

  static std::size_t numel_of(const std::vector<std::size_t>& s) {
    return std::accumulate(s.begin(), s.end(), std::size_t{1},
                           std::multiplies<>());
  }

  std::size_t numel() const { return data.size(); }
  std::size_t rank() const { return shape.size(); }
  std::size_t dim(std::size_t i) const { return shape[i]; }

  S* ptr() { return data.data(); }
  const S* ptr() const { return data.data(); }

  bool same_shape(const TensorT& other) const { return shape == other.shape; }
};

using Tensor = TensorT<float>;
using Tensor64 = TensorT<double>;

template <typename S>
void ensure_finite(const TensorT<S>& t, const char* op) {
  for (S v : t.data)
    if (!std::isfinite(static_cast<double>(v)))
      raise(ErrorCode::NonFiniteValue,
            std::string(op) + " produced a non-finite value");
}

template <typename S>
TensorT<S> zeros_like(const TensorT<S>& t) {
  return TensorT<S>(t.shape);
}

// Elementwise a += b, serial order.
template <typename S>
void add_inplace(TensorT<S>& a, const TensorT<S>& b) {
  if (!a.same_shape(b))
    raise(ErrorCode::ShapeMismatch, "add_inplace shape mismatch");
  for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] += b.data[i];
}

template <typename To, typename From>
TensorT<To> cast_tensor(const TensorT<From>& t) {
  TensorT<To> out(t.shape);
  for (std::size_t i = 0; i < t.data.size(); ++i)
    out.data[i] = static_cast<To>(t.data[i]);
  return out;
}

}  // namespace psl::nn
