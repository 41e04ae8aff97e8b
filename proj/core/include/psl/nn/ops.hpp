#pragma once

// Forward/backward kernel pairs for the sequence-to-sequence predictor.
// Numerics contract shared by all kernels:
//   - accumulation is float64 regardless of storage type S,
//   - per output element the summation order is fixed (ascending inner
//     index), so results are bit-identical across runs and thread counts,
//   - every kernel output is checked finite.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "psl/nn/tensor.hpp"

namespace psl::nn {

inline constexpr double kRmsNormEps = 1e-6;
inline constexpr double kMaskedLogit = -1e9;

// ---------------------------------------------------------------------------
// matmul family. Three kernels, each with a summation order pinned at the
// source level (so results do not depend on how a compiler vectorizes):
//   matmul     c = a * b     per element: ascending k
//   matmul_nt  c = a * b^T   per element: four interleaved partial sums over
//                            k (lanes k%4), combined ((s0+s1)+(s2+s3))+tail
//   matmul_tn  c = a^T * b   per element: ascending k

// c[m x n] = a[m x k] * b[k x n]
template <typename S>
void matmul_span(const S* a, std::size_t m, std::size_t k, const S* b,
                 std::size_t n, S* c) {
  std::vector<double> acc(n);
  for (std::size_t i = 0; i < m; ++i) {
    std::fill(acc.begin(), acc.end(), 0.0);
    const S* arow = a + i * k;
    for (std::size_t kk = 0; kk < k; ++kk) {
      const double av = static_cast<double>(arow[kk]);
      const S* brow = b + kk * n;
      for (std::size_t j = 0; j < n; ++j)
        acc[j] += av * static_cast<double>(brow[j]);
    }
    S* crow = c + i * n;
    for (std::size_t j = 0; j < n; ++j) crow[j] = static_cast<S>(acc[j]);
  }
}

// dot of two contiguous rows, four-lane split sum
template <typename S>
double dot_rows(const S* a, const S* b, std::size_t k) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t kk = 0;
  for (; kk + 4 <= k; kk += 4) {
    lane[0] += static_cast<double>(a[kk]) * static_cast<double>(b[kk]);
    lane[1] += static_cast<double>(a[kk + 1]) * static_cast<double>(b[kk + 1]);
    lane[2] += static_cast<double>(a[kk + 2]) * static_cast<double>(b[kk + 2]);
    lane[3] += static_cast<double>(a[kk + 3]) * static_cast<double>(b[kk + 3]);
  }
  double tail = 0.0;
  for (; kk < k; ++kk)
    tail += static_cast<double>(a[kk]) * static_cast<double>(b[kk]);
  return ((lane[0] + lane[1]) + (lane[2] + lane[3])) + tail;
}

// c[m x n] = a[m x k] * b[n x k]^T
template <typename S>
void matmul_nt_span(const S* a, std::size_t m, std::size_t k, const S* b,
                    std::size_t n, S* c) {
  for (std::size_t i = 0; i < m; ++i) {
    const S* arow = a + i * k;
    S* crow = c + i * n;
    for (std::size_t j = 0; j < n; ++j)
      crow[j] = static_cast<S>(dot_rows(arow, b + j * k, k));
  }
}

// c[m x n] = a[k x m]^T * b[k x n]; transposes a (activation-sized in every
// caller, so cheap) and reuses the ascending-k kernel.
template <typename S>
void matmul_tn_span(const S* a, std::size_t k, std::size_t m, const S* b,
                    std::size_t n, S* c) {
  std::vector<S> at(m * k);
  for (std::size_t kk = 0; kk < k; ++kk)
    for (std::size_t i = 0; i < m; ++i) at[i * k + kk] = a[kk * m + i];
  matmul_span(at.data(), m, k, b, n, c);
}

template <typename S>
TensorT<S> matmul(const TensorT<S>& a, const TensorT<S>& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(0))
    raise(ErrorCode::ShapeMismatch, "matmul expects [m x k] * [k x n]");
  TensorT<S> c({a.dim(0), b.dim(1)});
  matmul_span(a.ptr(), a.dim(0), a.dim(1), b.ptr(), b.dim(1), c.ptr());
  ensure_finite(c, "matmul");
  return c;
}

template <typename S>
TensorT<S> matmul_nt(const TensorT<S>& a, const TensorT<S>& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(1))
    raise(ErrorCode::ShapeMismatch, "matmul_nt expects [m x k] * [n x k]");
  TensorT<S> c({a.dim(0), b.dim(0)});
  matmul_nt_span(a.ptr(), a.dim(0), a.dim(1), b.ptr(), b.dim(0), c.ptr());
  ensure_finite(c, "matmul_nt");
  return c;
}

template <typename S>
TensorT<S> matmul_tn(const TensorT<S>& a, const TensorT<S>& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.dim(0) != b.dim(0))
    raise(ErrorCode::ShapeMismatch, "matmul_tn expects [k x m] * [k x n]");
  TensorT<S> c({a.dim(1), b.dim(1)});
  matmul_tn_span(a.ptr(), a.dim(0), a.dim(1), b.ptr(), b.dim(1), c.ptr());
  ensure_finite(c, "matmul_tn");
  return c;
}

// ---------------------------------------------------------------------------
// relu

template <typename S>
TensorT<S> relu(const TensorT<S>& x) {
  TensorT<S> y(x.shape);
  for (std::size_t i = 0; i < x.data.size(); ++i)
    y.data[i] = x.data[i] > S(0) ? x.data[i] : S(0);
  return y;
}

template <typename S>
TensorT<S> relu_backward(const TensorT<S>& pre_activation,
                         const TensorT<S>& dy) {
  if (!pre_activation.same_shape(dy))
    raise(ErrorCode::ShapeMismatch, "relu_backward shape mismatch");
  TensorT<S> dx(dy.shape);
  for (std::size_t i = 0; i < dy.data.size(); ++i)
    dx.data[i] = pre_activation.data[i] > S(0) ? dy.data[i] : S(0);
  return dx;
}

// ---------------------------------------------------------------------------
// softmax over the last dimension

template <typename S>
TensorT<S> softmax_lastdim(const TensorT<S>& x) {
  if (x.rank() == 0 || x.shape.back() == 0)
    raise(ErrorCode::ShapeMismatch, "softmax needs a non-empty last dim");
  ensure_finite(x, "softmax input");
  const std::size_t width = x.shape.back();
  const std::size_t rows = x.numel() / width;
  TensorT<S> y(x.shape);
  std::vector<double> e(width);
  for (std::size_t r = 0; r < rows; ++r) {
    const S* xr = x.ptr() + r * width;
    double m = static_cast<double>(xr[0]);
    for (std::size_t j = 1; j < width; ++j)
      m = std::max(m, static_cast<double>(xr[j]));
    double sum = 0.0;
    for (std::size_t j = 0; j < width; ++j) {
      e[j] = std::exp(static_cast<double>(xr[j]) - m);
      sum += e[j];
    }
    S* yr = y.ptr() + r * width;
    for (std::size_t j = 0; j < width; ++j)
      yr[j] = static_cast<S>(e[j] / sum);
  }
  ensure_finite(y, "softmax");
  return y;
}

// dx_j = y_j * (dy_j - sum_i dy_i * y_i), per row.
template <typename S>
TensorT<S> softmax_lastdim_backward(const TensorT<S>& y, const TensorT<S>& dy) {
  if (!y.same_shape(dy))
    raise(ErrorCode::ShapeMismatch, "softmax_backward shape mismatch");
  const std::size_t width = y.shape.back();
  const std::size_t rows = y.numel() / width;
  TensorT<S> dx(y.shape);
  for (std::size_t r = 0; r < rows; ++r) {
    const S* yr = y.ptr() + r * width;
    const S* dyr = dy.ptr() + r * width;
    double dot = 0.0;
    for (std::size_t j = 0; j < width; ++j)
      dot += static_cast<double>(dyr[j]) * static_cast<double>(yr[j]);
    S* dxr = dx.ptr() + r * width;
    for (std::size_t j = 0; j < width; ++j)
      dxr[j] = static_cast<S>(static_cast<double>(yr[j]) *
                              (static_cast<double>(dyr[j]) - dot));
  }
  return dx;
}

// ---------------------------------------------------------------------------
// RMS normalization: y = x / sqrt(mean(x^2) + eps) * gain

template <typename S>
struct RmsNormTrace {
  TensorT<S> x;                 // sublayer input (the residual stream value)
  std::vector<double> inv_rms;  // per row
};

template <typename S>
TensorT<S> rmsnorm(const TensorT<S>& x, const TensorT<S>& gain,
                   RmsNormTrace<S>* trace = nullptr) {
  if (gain.rank() != 1 || x.rank() == 0 || x.shape.back() != gain.dim(0))
    raise(ErrorCode::ShapeMismatch, "rmsnorm gain must match last dim");
  const std::size_t width = x.shape.back();
  const std::size_t rows = x.numel() / width;
  TensorT<S> y(x.shape);
  if (trace) {
    trace->x = x;
    trace->inv_rms.resize(rows);
  }
  for (std::size_t r = 0; r < rows; ++r) {
    const S* xr = x.ptr() + r * width;
    double ms = 0.0;
    for (std::size_t j = 0; j < width; ++j) {
      double v = static_cast<double>(xr[j]);
      ms += v * v;
    }
    ms /= static_cast<double>(width);
    double inv = 1.0 / std::sqrt(ms + kRmsNormEps);
    if (trace) trace->inv_rms[r] = inv;
    S* yr = y.ptr() + r * width;
    for (std::size_t j = 0; j < width; ++j)
      yr[j] = static_cast<S>(static_cast<double>(xr[j]) * inv *
                             static_cast<double>(gain.data[j]));
  }
  ensure_finite(y, "rmsnorm");
  return y;
}

// Returns dx; accumulates the gain gradient into dgain (float64 internally).
template <typename S>
TensorT<S> rmsnorm_backward(const RmsNormTrace<S>& trace,
                            const TensorT<S>& gain, const TensorT<S>& dy,
                            TensorT<S>& dgain) {
  const std::size_t width = trace.x.shape.back();
  const std::size_t rows = trace.x.numel() / width;
  if (!trace.x.same_shape(dy))
    raise(ErrorCode::ShapeMismatch, "rmsnorm_backward shape mismatch");
  TensorT<S> dx(trace.x.shape);
  std::vector<double> dgain_acc(width, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    const S* xr = trace.x.ptr() + r * width;
    const S* dyr = dy.ptr() + r * width;
    const double inv = trace.inv_rms[r];
    double proj = 0.0;  // sum_i dy_i * gain_i * x_i
    for (std::size_t j = 0; j < width; ++j)
      proj += static_cast<double>(dyr[j]) *
              static_cast<double>(gain.data[j]) * static_cast<double>(xr[j]);
    const double scale = inv * inv * inv * proj / static_cast<double>(width);
    S* dxr = dx.ptr() + r * width;
    for (std::size_t j = 0; j < width; ++j) {
      dxr[j] = static_cast<S>(inv * static_cast<double>(gain.data[j]) *
                                  static_cast<double>(dyr[j]) -
                              scale * static_cast<double>(xr[j]));
      dgain_acc[j] += static_cast<double>(dyr[j]) *
                      static_cast<double>(xr[j]) * inv;
    }
  }
  for (std::size_t j = 0; j < width; ++j)
    dgain.data[j] += static_cast<S>(dgain_acc[j]);
  return dx;
}

// ---------------------------------------------------------------------------
// scaled dot-product attention over per-head tensors [h, L, dh]

struct AttnMask {
  std::size_t lq = 0, lk = 0;
  std::vector<std::uint8_t> allowed;  // row-major lq x lk, 1 = attend

  static AttnMask full(std::size_t lq, std::size_t lk) {
    return {lq, lk, std::vector<std::uint8_t>(lq * lk, 1)};
  }
  static AttnMask causal(std::size_t l) {
    AttnMask m{l, l, std::vector<std::uint8_t>(l * l, 0)};
    for (std::size_t i = 0; i < l; ++i)
      for (std::size_t j = 0; j <= i; ++j) m.allowed[i * l + j] = 1;
    return m;
  }
  // All queries may attend exactly the keys flagged valid.
  static AttnMask keys(std::size_t lq, const std::vector<std::uint8_t>& valid) {
    AttnMask m{lq, valid.size(), std::vector<std::uint8_t>(lq * valid.size())};
    for (std::size_t i = 0; i < lq; ++i)
      for (std::size_t j = 0; j < valid.size(); ++j)
        m.allowed[i * valid.size() + j] = valid[j];
    return m;
  }
};

template <typename S>
struct AttentionTrace {
  TensorT<S> q, k, v;   // [h, Lq, dh] / [h, Lk, dh]
  TensorT<S> probs;     // [h, Lq, Lk]
  double scale = 1.0;
};

template <typename S>
TensorT<S> attention(const TensorT<S>& q, const TensorT<S>& k,
                     const TensorT<S>& v, const AttnMask& mask,
                     AttentionTrace<S>* trace = nullptr) {
  if (q.rank() != 3 || k.rank() != 3 || v.rank() != 3)
    raise(ErrorCode::ShapeMismatch, "attention expects rank-3 [h, L, dh]");
  const std::size_t h = q.dim(0), lq = q.dim(1), dh = q.dim(2);
  const std::size_t lk = k.dim(1);
  if (k.dim(0) != h || v.dim(0) != h || v.dim(1) != lk || k.dim(2) != dh ||
      v.dim(2) != dh)
    raise(ErrorCode::ShapeMismatch, "attention head dims disagree");
  if (mask.lq != lq || mask.lk != lk)
    raise(ErrorCode::ShapeMismatch, "attention mask dims disagree");
  for (std::size_t i = 0; i < lq; ++i) {
    bool any = false;
    for (std::size_t j = 0; j < lk; ++j)
      if (mask.allowed[i * lk + j]) { any = true; break; }
    if (!any)
      raise(ErrorCode::AllMaskedRow,
            "attention mask leaves query row " + std::to_string(i) +
                " with no keys");
  }

  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  TensorT<S> probs({h, lq, lk});
  TensorT<S> out({h, lq, dh});
  TensorT<S> scores({lq, lk});

  for (std::size_t head = 0; head < h; ++head) {
    const S* qh = q.ptr() + head * lq * dh;
    const S* kh = k.ptr() + head * lk * dh;
    const S* vh = v.ptr() + head * lk * dh;

    // scores = q k^T * scale, additive -1e9 on masked entries
    matmul_nt_span(qh, lq, dh, kh, lk, scores.ptr());
    for (std::size_t i = 0; i < lq; ++i)
      for (std::size_t j = 0; j < lk; ++j) {
        double s = static_cast<double>(scores.data[i * lk + j]) * scale;
        if (!mask.allowed[i * lk + j]) s += kMaskedLogit;
        scores.data[i * lk + j] = static_cast<S>(s);
      }

    TensorT<S> p = softmax_lastdim(scores);
    std::copy(p.data.begin(), p.data.end(),
              probs.data.begin() + head * lq * lk);
    matmul_span(p.ptr(), lq, lk, vh, dh, out.ptr() + head * lq * dh);
  }
  ensure_finite(out, "attention");

  if (trace) {
    trace->q = q;
    trace->k = k;
    trace->v = v;
    trace->probs = std::move(probs);
    trace->scale = scale;
  }
  return out;
}

template <typename S>
struct AttentionGrads {
  TensorT<S> dq, dk, dv;
};

template <typename S>
AttentionGrads<S> attention_backward(const AttentionTrace<S>& trace,
                                     const TensorT<S>& d_out) {
  const std::size_t h = trace.q.dim(0), lq = trace.q.dim(1),
                    dh = trace.q.dim(2), lk = trace.k.dim(1);
  if (d_out.rank() != 3 || d_out.dim(0) != h || d_out.dim(1) != lq ||
      d_out.dim(2) != dh)
    raise(ErrorCode::ShapeMismatch, "attention_backward d_out shape");

  AttentionGrads<S> g{TensorT<S>({h, lq, dh}), TensorT<S>({h, lk, dh}),
                      TensorT<S>({h, lk, dh})};

  for (std::size_t head = 0; head < h; ++head) {
    const S* qh = trace.q.ptr() + head * lq * dh;
    const S* kh = trace.k.ptr() + head * lk * dh;
    const S* vh = trace.v.ptr() + head * lk * dh;
    const S* ph = trace.probs.ptr() + head * lq * lk;
    const S* doh = d_out.ptr() + head * lq * dh;

    // dp = d_out v^T
    TensorT<S> dp({lq, lk});
    matmul_nt_span(doh, lq, dh, vh, lk, dp.ptr());

    // dv = p^T d_out
    matmul_tn_span(ph, lq, lk, doh, dh, g.dv.ptr() + head * lk * dh);

    // ds = softmax' then fold in the 1/sqrt(dh) scale
    TensorT<S> ds({lq, lk});
    for (std::size_t i = 0; i < lq; ++i) {
      double dot = 0.0;
      for (std::size_t j = 0; j < lk; ++j)
        dot += static_cast<double>(dp.data[i * lk + j]) *
               static_cast<double>(ph[i * lk + j]);
      for (std::size_t j = 0; j < lk; ++j)
        ds.data[i * lk + j] = static_cast<S>(
            static_cast<double>(ph[i * lk + j]) *
            (static_cast<double>(dp.data[i * lk + j]) - dot) * trace.scale);
    }

    // dq = ds k ; dk = ds^T q
    matmul_span(ds.ptr(), lq, lk, kh, dh, g.dq.ptr() + head * lq * dh);
    matmul_tn_span(ds.ptr(), lq, lk, qh, dh, g.dk.ptr() + head * lk * dh);
  }
  return g;
}

// ---------------------------------------------------------------------------
// cross entropy over [L x V] logits

template <typename S>
struct CrossEntropyResult {
  double loss = 0.0;
  TensorT<S> dlogits;
};

template <typename S>
CrossEntropyResult<S> cross_entropy(const TensorT<S>& logits,
                                    const std::vector<std::uint32_t>& targets,
                                    std::uint32_t pad_id) {
  if (logits.rank() != 2)
    raise(ErrorCode::ShapeMismatch, "cross_entropy expects [L x V] logits");
  const std::size_t rows = logits.dim(0), vocab = logits.dim(1);
  if (targets.size() != rows)
    raise(ErrorCode::ShapeMismatch, "targets length != logit rows");

  std::size_t n_nonpad = 0;
  for (std::uint32_t t : targets) {
    if (t == pad_id) continue;
    if (t >= vocab)
      raise(ErrorCode::TargetOutOfRange,
            "target id " + std::to_string(t) + " >= vocab " +
                std::to_string(vocab));
    ++n_nonpad;
  }
  if (n_nonpad == 0)
    raise(ErrorCode::AllPad, "cross_entropy saw only pad targets");

  CrossEntropyResult<S> res;
  res.dlogits = TensorT<S>(logits.shape);
  const double inv_n = 1.0 / static_cast<double>(n_nonpad);
  double loss_sum = 0.0;
  std::vector<double> e(vocab);

  for (std::size_t r = 0; r < rows; ++r) {
    if (targets[r] == pad_id) continue;  // zero loss, zero gradient
    const S* zr = logits.ptr() + r * vocab;
    double m = static_cast<double>(zr[0]);
    for (std::size_t j = 1; j < vocab; ++j)
      m = std::max(m, static_cast<double>(zr[j]));
    double sum = 0.0;
    for (std::size_t j = 0; j < vocab; ++j) {
      e[j] = std::exp(static_cast<double>(zr[j]) - m);
      sum += e[j];
    }
    loss_sum += std::log(sum) + m - static_cast<double>(zr[targets[r]]);
    S* dr = res.dlogits.ptr() + r * vocab;
    for (std::size_t j = 0; j < vocab; ++j) {
      double p = e[j] / sum;
      double onehot = (j == targets[r]) ? 1.0 : 0.0;
      dr[j] = static_cast<S>((p - onehot) * inv_n);
    }
  }
  res.loss = loss_sum * inv_n;
  if (!std::isfinite(res.loss))
    raise(ErrorCode::NonFiniteValue, "cross_entropy loss is non-finite");
  return res;
}

}  // namespace psl::nn
