#pragma once

// Central-difference gradient checker. Runs entirely in float64: callers
// clone their model to double precision, provide a loss closure over the
// live parameter tensors, and the analytic gradients to compare against.

#include <cmath>
#include <functional>
#include <vector>

#include "psl/nn/tensor.hpp"

namespace psl::nn {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t worst_param = 0;
  std::size_t worst_index = 0;
};

// relative error per coordinate: |analytic - numeric| /
// max(|analytic|, |numeric|, 1e-8)
inline GradCheckResult grad_check(const std::function<double()>& loss_fn,
                                  std::vector<Tensor64*> params,
                                  std::vector<const Tensor64*> analytic_grads,
                                  double eps = 1e-3) {
  if (params.size() != analytic_grads.size())
    raise(ErrorCode::ShapeMismatch, "grad_check param/grad count mismatch");
  GradCheckResult res;
  for (std::size_t p = 0; p < params.size(); ++p) {
    Tensor64& theta = *params[p];
    const Tensor64& analytic = *analytic_grads[p];
    if (!theta.same_shape(analytic))
      raise(ErrorCode::ShapeMismatch, "grad_check grad shape mismatch");
    for (std::size_t i = 0; i < theta.data.size(); ++i) {
      const double orig = theta.data[i];
      theta.data[i] = orig + eps;
      const double f_plus = loss_fn();
      theta.data[i] = orig - eps;
      const double f_minus = loss_fn();
      theta.data[i] = orig;
      if (!std::isfinite(f_plus) || !std::isfinite(f_minus))
        raise(ErrorCode::NonFiniteValue, "grad_check loss is non-finite");
      const double numeric = (f_plus - f_minus) / (2.0 * eps);
      const double a = analytic.data[i];
      const double denom =
          std::max({std::fabs(a), std::fabs(numeric), 1e-8});
      const double rel = std::fabs(a - numeric) / denom;
      if (rel > res.max_rel_error) {
        res.max_rel_error = rel;
        res.worst_param = p;
        res.worst_index = i;
      }
    }
  }
  return res;
}

}  // namespace psl::nn
