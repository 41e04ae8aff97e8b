#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "psl/nn/tensor.hpp"
#include "psl/rng.hpp"

namespace psl::nn {

template <typename S>
struct ParamT {
  std::string name;  // matches [a-z0-9_./]+
  TensorT<S> value;
  TensorT<S> grad;
};

using Param = ParamT<float>;

template <typename S>
void zero_grads(std::vector<ParamT<S>>& params) {
  for (auto& p : params)
    std::fill(p.grad.data.begin(), p.grad.data.end(), S(0));
}

// Adam with bias correction; moments stored at parameter precision,
// per-element update math in float64.
struct AdamState {
  std::size_t step = 0;
  std::vector<Tensor> m;
  std::vector<Tensor> v;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  static AdamState init(const std::vector<Param>& params) {
    AdamState s;
    s.m.reserve(params.size());
    s.v.reserve(params.size());
    for (const auto& p : params) {
      s.m.push_back(zeros_like(p.value));
      s.v.push_back(zeros_like(p.value));
    }
    return s;
  }
};

inline void adam_step(std::vector<Param>& params, AdamState& state, double lr) {
  if (state.m.size() != params.size() || state.v.size() != params.size())
    raise(ErrorCode::ShapeMismatch, "adam state/parameter count mismatch");
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(state.beta1, t);
  const double bc2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = params[i];
    if (!p.grad.same_shape(p.value) || !state.m[i].same_shape(p.value))
      raise(ErrorCode::ShapeMismatch,
            "adam_step shape mismatch for " + p.name);
    for (std::size_t j = 0; j < p.value.data.size(); ++j) {
      const double g = static_cast<double>(p.grad.data[j]);
      const double m =
          state.beta1 * static_cast<double>(state.m[i].data[j]) +
          (1.0 - state.beta1) * g;
      const double v =
          state.beta2 * static_cast<double>(state.v[i].data[j]) +
          (1.0 - state.beta2) * g * g;
      state.m[i].data[j] = static_cast<float>(m);
      state.v[i].data[j] = static_cast<float>(v);
      const double mhat = m / bc1;
      const double vhat = v / bc2;
      p.value.data[j] = static_cast<float>(
          static_cast<double>(p.value.data[j]) -
          lr * mhat / (std::sqrt(vhat) + state.eps));
    }
    ensure_finite(p.value, "adam_step");
  }
}

// Scales all gradients so their global L2 norm is at most max_norm.
// Returns the pre-clip norm.
template <typename S>
double clip_global_norm(std::vector<ParamT<S>>& params, double max_norm) {
  double sq = 0.0;
  for (const auto& p : params)
    for (S g : p.grad.data) {
      double gd = static_cast<double>(g);
      sq += gd * gd;
    }
  double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0) {
    double scale = max_norm / norm;
    for (auto& p : params)
      for (S& g : p.grad.data)
        g = static_cast<S>(static_cast<double>(g) * scale);
  }
  return norm;
}

// Glorot-uniform fill with bound sqrt(6 / (fan_in + fan_out)); the RNG is
// SplitMix64 seeded with model_seed + FNV-1a64(parameter name), so any
// implementation reproduces identical weights from (seed, name, shape).
template <typename S>
void glorot_fill(TensorT<S>& t, std::size_t fan_in, std::size_t fan_out,
                 std::uint64_t model_seed, const std::string& name) {
  SplitMix64 rng(model_seed + fnv1a64(name.data(), name.size()));
  const double bound =
      std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (auto& v : t.data)
    v = static_cast<S>((2.0 * rng.next_real() - 1.0) * bound);
}

}  // namespace psl::nn
