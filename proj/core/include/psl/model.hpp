#pragma once

// Byte-level text -> unit-sequence encoder-decoder (T5-style): pre-norm
// residual blocks with RMSNorm, multi-head attention, ReLU feed-forward,
// learned absolute positional embeddings, no biases. Forward, traced
// forward, and manual backward live here, templated on the scalar type:
// float for training/inference, double for the gradient-check harness.

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "psl/nn/ops.hpp"
#include "psl/nn/optim.hpp"
#include "psl/tokenizer.hpp"

namespace psl {

struct ModelConfig {
  std::size_t d_model = 128;
  std::size_t n_heads = 4;
  std::size_t n_layers_enc = 2;
  std::size_t n_layers_dec = 2;
  std::size_t d_ff = 512;  // 4 * d_model
  std::size_t unit_vocab = 503;  // k + 3 specials
  std::size_t max_src_len = 512;
  std::size_t max_tgt_len = 1024;
  std::uint64_t seed = 0;

  void validate() const {
    if (d_model == 0 || n_heads == 0 || d_model % n_heads != 0)
      raise(ErrorCode::ConfigError, "d_model must be a positive multiple of n_heads");
    if (n_layers_enc < 1 || n_layers_dec < 1)
      raise(ErrorCode::ConfigError, "need at least one encoder and decoder layer");
    if (d_ff == 0) raise(ErrorCode::ConfigError, "d_ff must be >= 1");
    if (unit_vocab < 4)
      raise(ErrorCode::ConfigError, "unit_vocab must be >= 4 (3 specials + units)");
    if (max_src_len < 1 || max_tgt_len < 1)
      raise(ErrorCode::ConfigError, "length caps must be >= 1");
  }

  bool operator==(const ModelConfig&) const = default;
};

template <typename S>
struct Seq2SeqModelT {
  ModelConfig config;
  std::vector<nn::ParamT<S>> params;
  std::unordered_map<std::string, std::size_t> index;

  const nn::TensorT<S>& value(const std::string& name) const {
    return params[at(name)].value;
  }
  nn::TensorT<S>& grad(const std::string& name) {
    return params[at(name)].grad;
  }
  std::size_t at(const std::string& name) const {
    auto it = index.find(name);
    if (it == index.end())
      raise(ErrorCode::ShapeMismatch, "unknown parameter " + name);
    return it->second;
  }
};

using Seq2SeqModel = Seq2SeqModelT<float>;

namespace detail_model {

template <typename S>
void push_param(Seq2SeqModelT<S>& m, const std::string& name,
                std::vector<std::size_t> shape) {
  nn::ParamT<S> p;
  p.name = name;
  p.value = nn::TensorT<S>(shape);
  p.grad = nn::TensorT<S>(std::move(shape));
  m.index.emplace(name, m.params.size());
  m.params.push_back(std::move(p));
}

inline std::string enc_layer(std::size_t i, const char* leaf) {
  return "encoder/layer" + std::to_string(i) + "/" + leaf;
}
inline std::string dec_layer(std::size_t i, const char* leaf) {
  return "decoder/layer" + std::to_string(i) + "/" + leaf;
}

}  // namespace detail_model

// Builds the parameter set implied by the config, in canonical order.
// Values are zero; call init_weights (or load a checkpoint) afterwards.
template <typename S>
Seq2SeqModelT<S> make_model_skeleton(const ModelConfig& cfg) {
  cfg.validate();
  using detail_model::push_param;
  using detail_model::enc_layer;
  using detail_model::dec_layer;

  Seq2SeqModelT<S> m;
  m.config = cfg;
  const std::size_t d = cfg.d_model;

  push_param(m, "encoder/embed/tokens", {TokenizerSpec::text_vocab, d});
  push_param(m, "encoder/embed/pos", {cfg.max_src_len, d});
  for (std::size_t i = 0; i < cfg.n_layers_enc; ++i) {
    push_param(m, enc_layer(i, "attn/norm/gain"), {d});
    push_param(m, enc_layer(i, "attn/wq"), {d, d});
    push_param(m, enc_layer(i, "attn/wk"), {d, d});
    push_param(m, enc_layer(i, "attn/wv"), {d, d});
    push_param(m, enc_layer(i, "attn/wo"), {d, d});
    push_param(m, enc_layer(i, "ffn/norm/gain"), {d});
    push_param(m, enc_layer(i, "ffn/w1"), {d, cfg.d_ff});
    push_param(m, enc_layer(i, "ffn/w2"), {cfg.d_ff, d});
  }
  push_param(m, "encoder/final_norm/gain", {d});

  push_param(m, "decoder/embed/units", {cfg.unit_vocab, d});
  push_param(m, "decoder/embed/pos", {cfg.max_tgt_len, d});
  for (std::size_t i = 0; i < cfg.n_layers_dec; ++i) {
    push_param(m, dec_layer(i, "self_attn/norm/gain"), {d});
    push_param(m, dec_layer(i, "self_attn/wq"), {d, d});
    push_param(m, dec_layer(i, "self_attn/wk"), {d, d});
    push_param(m, dec_layer(i, "self_attn/wv"), {d, d});
    push_param(m, dec_layer(i, "self_attn/wo"), {d, d});
    push_param(m, dec_layer(i, "cross_attn/norm/gain"), {d});
    push_param(m, dec_layer(i, "cross_attn/wq"), {d, d});
    push_param(m, dec_layer(i, "cross_attn/wk"), {d, d});
    push_param(m, dec_layer(i, "cross_attn/wv"), {d, d});
    push_param(m, dec_layer(i, "cross_attn/wo"), {d, d});
    push_param(m, dec_layer(i, "ffn/norm/gain"), {d});
    push_param(m, dec_layer(i, "ffn/w1"), {d, cfg.d_ff});
    push_param(m, dec_layer(i, "ffn/w2"), {cfg.d_ff, d});
  }
  push_param(m, "decoder/final_norm/gain", {d});
  push_param(m, "decoder/output/proj", {d, cfg.unit_vocab});
  return m;
}

// Glorot-uniform for matrices (fan_in = rows, fan_out = cols), ones for
// norm gains. Deterministic per (model seed, parameter name).
template <typename S>
void init_weights(Seq2SeqModelT<S>& m) {
  for (auto& p : m.params) {
    if (p.value.rank() == 1) {
      std::fill(p.value.data.begin(), p.value.data.end(), S(1));
    } else {
      nn::glorot_fill(p.value, p.value.dim(0), p.value.dim(1), m.config.seed,
                      p.name);
    }
  }
}

template <typename S>
Seq2SeqModelT<S> make_model(const ModelConfig& cfg) {
  auto m = make_model_skeleton<S>(cfg);
  init_weights(m);
  return m;
}

template <typename To, typename From>
Seq2SeqModelT<To> cast_model(const Seq2SeqModelT<From>& src) {
  auto m = make_model_skeleton<To>(src.config);
  for (std::size_t i = 0; i < src.params.size(); ++i)
    for (std::size_t j = 0; j < src.params[i].value.data.size(); ++j)
      m.params[i].value.data[j] =
          static_cast<To>(src.params[i].value.data[j]);
  return m;
}

// ---------------------------------------------------------------------------
// forward / backward

template <typename S>
struct AttnSublayerTrace {
  nn::RmsNormTrace<S> ln;
  nn::TensorT<S> normed;       // rmsnorm output, input to q/k/v projections
  nn::AttentionTrace<S> attn;  // per-head q, k, v, probs
  nn::TensorT<S> merged;       // merged head outputs, input to wo
};

template <typename S>
struct FfnSublayerTrace {
  nn::RmsNormTrace<S> ln;
  nn::TensorT<S> normed;
  nn::TensorT<S> pre;  // normed * w1, before relu
  nn::TensorT<S> act;  // relu(pre), input to w2
};

template <typename S>
struct EncLayerTrace {
  AttnSublayerTrace<S> attn;
  FfnSublayerTrace<S> ffn;
};

template <typename S>
struct DecLayerTrace {
  AttnSublayerTrace<S> self_attn;
  AttnSublayerTrace<S> cross_attn;
  FfnSublayerTrace<S> ffn;
};

template <typename S>
struct ForwardTrace {
  TokenIds src_ids, tgt_in_ids;
  std::vector<EncLayerTrace<S>> enc_layers;
  nn::RmsNormTrace<S> enc_final;
  nn::TensorT<S> enc_out;  // input to every cross-attention k/v projection
  std::vector<DecLayerTrace<S>> dec_layers;
  nn::RmsNormTrace<S> dec_final;
  nn::TensorT<S> dec_out;  // input to the output projection
};

namespace detail_model {

template <typename S>
nn::TensorT<S> split_heads(const nn::TensorT<S>& x, std::size_t h) {
  const std::size_t l = x.dim(0), d = x.dim(1), dh = d / h;
  nn::TensorT<S> out({h, l, dh});
  for (std::size_t head = 0; head < h; ++head)
    for (std::size_t i = 0; i < l; ++i)
      for (std::size_t t = 0; t < dh; ++t)
        out.data[(head * l + i) * dh + t] = x.data[i * d + head * dh + t];
  return out;
}

template <typename S>
nn::TensorT<S> merge_heads(const nn::TensorT<S>& x) {
  const std::size_t h = x.dim(0), l = x.dim(1), dh = x.dim(2);
  nn::TensorT<S> out({l, h * dh});
  for (std::size_t head = 0; head < h; ++head)
    for (std::size_t i = 0; i < l; ++i)
      for (std::size_t t = 0; t < dh; ++t)
        out.data[i * h * dh + head * dh + t] = x.data[(head * l + i) * dh + t];
  return out;
}

template <typename S>
nn::TensorT<S> embed(const nn::TensorT<S>& table, const nn::TensorT<S>& pos,
                     const TokenIds& ids) {
  const std::size_t d = table.dim(1);
  nn::TensorT<S> x({ids.size(), d});
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const S* trow = table.ptr() + ids[i] * d;
    const S* prow = pos.ptr() + i * d;
    S* xrow = x.ptr() + i * d;
    for (std::size_t j = 0; j < d; ++j) xrow[j] = trow[j] + prow[j];
  }
  return x;
}

// x -> x + wo(attention(split(q), split(k), split(v))); q comes from the
// normalized stream, k/v from cross_kv when given (cross-attention) or from
// the same normalized stream (self-attention).
template <typename S>
void attn_sublayer(const Seq2SeqModelT<S>& m, const std::string& prefix,
                   nn::TensorT<S>& x, const nn::AttnMask& mask,
                   AttnSublayerTrace<S>* tr,
                   const nn::TensorT<S>* cross_kv = nullptr) {
  const std::size_t h = m.config.n_heads;
  AttnSublayerTrace<S> local;
  AttnSublayerTrace<S>* t = tr ? tr : &local;

  t->normed = nn::rmsnorm(x, m.value(prefix + "/norm/gain"), tr ? &t->ln : nullptr);
  const nn::TensorT<S>& kv = cross_kv ? *cross_kv : t->normed;
  auto q = split_heads(nn::matmul(t->normed, m.value(prefix + "/wq")), h);
  auto k = split_heads(nn::matmul(kv, m.value(prefix + "/wk")), h);
  auto v = split_heads(nn::matmul(kv, m.value(prefix + "/wv")), h);
  auto heads = nn::attention(q, k, v, mask, tr ? &t->attn : nullptr);
  t->merged = merge_heads(heads);
  auto proj = nn::matmul(t->merged, m.value(prefix + "/wo"));
  nn::add_inplace(x, proj);
}

template <typename S>
void ffn_sublayer(const Seq2SeqModelT<S>& m, const std::string& prefix,
                  nn::TensorT<S>& x, FfnSublayerTrace<S>* tr) {
  FfnSublayerTrace<S> local;
  FfnSublayerTrace<S>* t = tr ? tr : &local;
  t->normed = nn::rmsnorm(x, m.value(prefix + "/norm/gain"), tr ? &t->ln : nullptr);
  t->pre = nn::matmul(t->normed, m.value(prefix + "/w1"));
  t->act = nn::relu(t->pre);
  auto out = nn::matmul(t->act, m.value(prefix + "/w2"));
  nn::add_inplace(x, out);
}

inline std::vector<std::uint8_t> valid_keys(const TokenIds& src_ids) {
  std::vector<std::uint8_t> v(src_ids.size());
  for (std::size_t i = 0; i < src_ids.size(); ++i)
    v[i] = src_ids[i] != TokenizerSpec::pad_id;
  return v;
}

}  // namespace detail_model

// Teacher-forced forward pass for one example. Encoder self-attention spans
// the non-pad source, decoder self-attention is causal, cross-attention
// covers non-pad encoder output. Returns [len(tgt_in) x unit_vocab] logits.
template <typename S>
nn::TensorT<S> seq2seq_forward(const Seq2SeqModelT<S>& m, const TokenIds& src_ids,
                               const TokenIds& tgt_in_ids,
                               ForwardTrace<S>* trace = nullptr) {
  using namespace detail_model;
  const ModelConfig& cfg = m.config;
  if (src_ids.empty() || tgt_in_ids.empty())
    raise(ErrorCode::ShapeMismatch, "source and target must be non-empty");
  if (src_ids.size() > cfg.max_src_len)
    raise(ErrorCode::SourceTooLong, "source exceeds max_src_len");
  if (tgt_in_ids.size() > cfg.max_tgt_len)
    raise(ErrorCode::TargetTooLong, "target exceeds max_tgt_len");
  for (auto id : src_ids)
    if (id >= TokenizerSpec::text_vocab)
      raise(ErrorCode::TargetOutOfRange, "source token id out of range");
  for (auto id : tgt_in_ids)
    if (id >= cfg.unit_vocab)
      raise(ErrorCode::TargetOutOfRange, "target token id out of range");

  if (trace) {
    trace->src_ids = src_ids;
    trace->tgt_in_ids = tgt_in_ids;
    trace->enc_layers.resize(cfg.n_layers_enc);
    trace->dec_layers.resize(cfg.n_layers_dec);
  }

  const auto key_mask = valid_keys(src_ids);
  const auto enc_mask = nn::AttnMask::keys(src_ids.size(), key_mask);

  auto x = embed(m.value("encoder/embed/tokens"), m.value("encoder/embed/pos"),
                 src_ids);
  for (std::size_t i = 0; i < cfg.n_layers_enc; ++i) {
    auto* lt = trace ? &trace->enc_layers[i] : nullptr;
    attn_sublayer(m, enc_layer(i, "attn"), x, enc_mask,
                  lt ? &lt->attn : nullptr);
    ffn_sublayer(m, enc_layer(i, "ffn"), x, lt ? &lt->ffn : nullptr);
  }
  auto enc_out = nn::rmsnorm(x, m.value("encoder/final_norm/gain"),
                             trace ? &trace->enc_final : nullptr);
  if (trace) trace->enc_out = enc_out;

  const auto causal = nn::AttnMask::causal(tgt_in_ids.size());
  const auto cross_mask = nn::AttnMask::keys(tgt_in_ids.size(), key_mask);

  auto y = embed(m.value("decoder/embed/units"), m.value("decoder/embed/pos"),
                 tgt_in_ids);
  for (std::size_t i = 0; i < cfg.n_layers_dec; ++i) {
    auto* lt = trace ? &trace->dec_layers[i] : nullptr;
    attn_sublayer(m, dec_layer(i, "self_attn"), y, causal,
                  lt ? &lt->self_attn : nullptr);
    attn_sublayer(m, dec_layer(i, "cross_attn"), y, cross_mask,
                  lt ? &lt->cross_attn : nullptr, &enc_out);
    ffn_sublayer(m, dec_layer(i, "ffn"), y, lt ? &lt->ffn : nullptr);
  }
  auto dec_out = nn::rmsnorm(y, m.value("decoder/final_norm/gain"),
                             trace ? &trace->dec_final : nullptr);
  if (trace) trace->dec_out = dec_out;

  return nn::matmul(dec_out, m.value("decoder/output/proj"));
}

namespace detail_model {

// Backward through one attention sublayer. d_stream is the gradient at the
// sublayer output; returns the gradient at the sublayer input. For
// cross-attention, d_kv_src accumulates the gradient flowing into the
// encoder output; for self-attention pass nullptr and the k/v path is
// folded into the returned input gradient.
template <typename S>
nn::TensorT<S> attn_sublayer_backward(Seq2SeqModelT<S>& m,
                                      const std::string& prefix,
                                      const AttnSublayerTrace<S>& t,
                                      const nn::TensorT<S>& d_stream,
                                      const nn::TensorT<S>* kv_src = nullptr,
                                      nn::TensorT<S>* d_kv_src = nullptr) {
  const std::size_t h = m.config.n_heads;

  // projection out: proj = merged * wo
  auto d_merged = nn::matmul_nt(d_stream, m.value(prefix + "/wo"));
  nn::add_inplace(m.grad(prefix + "/wo"), nn::matmul_tn(t.merged, d_stream));

  auto d_heads = split_heads(d_merged, h);
  auto ag = nn::attention_backward(t.attn, d_heads);
  auto dq2 = merge_heads(ag.dq);
  auto dk2 = merge_heads(ag.dk);
  auto dv2 = merge_heads(ag.dv);

  const nn::TensorT<S>& kv = kv_src ? *kv_src : t.normed;
  nn::add_inplace(m.grad(prefix + "/wq"), nn::matmul_tn(t.normed, dq2));
  nn::add_inplace(m.grad(prefix + "/wk"), nn::matmul_tn(kv, dk2));
  nn::add_inplace(m.grad(prefix + "/wv"), nn::matmul_tn(kv, dv2));

  auto d_normed = nn::matmul_nt(dq2, m.value(prefix + "/wq"));
  if (d_kv_src) {
    nn::add_inplace(*d_kv_src, nn::matmul_nt(dk2, m.value(prefix + "/wk")));
    nn::add_inplace(*d_kv_src, nn::matmul_nt(dv2, m.value(prefix + "/wv")));
  } else {
    nn::add_inplace(d_normed, nn::matmul_nt(dk2, m.value(prefix + "/wk")));
    nn::add_inplace(d_normed, nn::matmul_nt(dv2, m.value(prefix + "/wv")));
  }

  auto d_in = nn::rmsnorm_backward(t.ln, m.value(prefix + "/norm/gain"),
                                   d_normed, m.grad(prefix + "/norm/gain"));
  nn::add_inplace(d_in, d_stream);  // residual path
  return d_in;
}

template <typename S>
nn::TensorT<S> ffn_sublayer_backward(Seq2SeqModelT<S>& m,
                                     const std::string& prefix,
                                     const FfnSublayerTrace<S>& t,
                                     const nn::TensorT<S>& d_stream) {
  auto d_act = nn::matmul_nt(d_stream, m.value(prefix + "/w2"));
  nn::add_inplace(m.grad(prefix + "/w2"), nn::matmul_tn(t.act, d_stream));
  auto d_pre = nn::relu_backward(t.pre, d_act);
  nn::add_inplace(m.grad(prefix + "/w1"), nn::matmul_tn(t.normed, d_pre));
  auto d_normed = nn::matmul_nt(d_pre, m.value(prefix + "/w1"));
  auto d_in = nn::rmsnorm_backward(t.ln, m.value(prefix + "/norm/gain"),
                                   d_normed, m.grad(prefix + "/norm/gain"));
  nn::add_inplace(d_in, d_stream);
  return d_in;
}

template <typename S>
void embed_backward(nn::TensorT<S>& d_table, nn::TensorT<S>& d_pos,
                    const TokenIds& ids, const nn::TensorT<S>& d_x) {
  const std::size_t d = d_table.dim(1);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    S* trow = d_table.ptr() + ids[i] * d;
    S* prow = d_pos.ptr() + i * d;
    const S* g = d_x.ptr() + i * d;
    for (std::size_t j = 0; j < d; ++j) {
      trow[j] += g[j];
      prow[j] += g[j];
    }
  }
}

}  // namespace detail_model

// Accumulates parameter gradients for one traced forward pass.
template <typename S>
void seq2seq_backward(Seq2SeqModelT<S>& m, const ForwardTrace<S>& trace,
                      const nn::TensorT<S>& dlogits) {
  using namespace detail_model;
  const ModelConfig& cfg = m.config;

  // logits = dec_out * proj
  nn::add_inplace(m.grad("decoder/output/proj"),
                  nn::matmul_tn(trace.dec_out, dlogits));
  auto d_dec = nn::matmul_nt(dlogits, m.value("decoder/output/proj"));

  auto d_y = nn::rmsnorm_backward(trace.dec_final,
                                  m.value("decoder/final_norm/gain"), d_dec,
                                  m.grad("decoder/final_norm/gain"));

  nn::TensorT<S> d_enc_out(trace.enc_out.shape);
  for (std::size_t i = cfg.n_layers_dec; i-- > 0;) {
    const auto& lt = trace.dec_layers[i];
    d_y = ffn_sublayer_backward(m, dec_layer(i, "ffn"), lt.ffn, d_y);
    d_y = attn_sublayer_backward(m, dec_layer(i, "cross_attn"), lt.cross_attn,
                                 d_y, &trace.enc_out, &d_enc_out);
    d_y = attn_sublayer_backward(m, dec_layer(i, "self_attn"), lt.self_attn,
                                 d_y);
  }
  embed_backward(m.grad("decoder/embed/units"), m.grad("decoder/embed/pos"),
                 trace.tgt_in_ids, d_y);

  auto d_x = nn::rmsnorm_backward(trace.enc_final,
                                  m.value("encoder/final_norm/gain"),
                                  d_enc_out, m.grad("encoder/final_norm/gain"));
  for (std::size_t i = cfg.n_layers_enc; i-- > 0;) {
    const auto& lt = trace.enc_layers[i];
    d_x = ffn_sublayer_backward(m, enc_layer(i, "ffn"), lt.ffn, d_x);
    d_x = attn_sublayer_backward(m, enc_layer(i, "attn"), lt.attn, d_x);
  }
  embed_backward(m.grad("encoder/embed/tokens"), m.grad("encoder/embed/pos"),
                 trace.src_ids, d_x);
}

}  // namespace psl
