#include "psl/train.hpp"

#include <chrono>

#include "psl/units.hpp"

namespace psl {

namespace {

struct EncodedPair {
  TokenIds src;
  TokenIds tgt;     // unit tokens + EOS (the loss targets)
  TokenIds dec_in;  // BOS + shifted targets
};

}  // namespace

LossCurve train(Seq2SeqModel& m, const std::vector<TrainPair>& dataset,
                const TrainConfig& cfg, std::ostream* log_stream) {
  if (dataset.empty()) raise(ErrorCode::EmptyDataset, "training set is empty");
  if (cfg.lr <= 0.0) raise(ErrorCode::ConfigError, "lr must be > 0");
  if (cfg.batch_size < 1) raise(ErrorCode::ConfigError, "batch_size must be >= 1");

  std::vector<EncodedPair> encoded;
  encoded.reserve(dataset.size());
  for (const auto& pair : dataset) {
    try {
      EncodedPair e;
      e.src = byte_tokenize(pair.text, m.config.max_src_len);
      e.tgt = encode_units_target(dedup(pair.units), m.config.unit_vocab,
                                  m.config.max_tgt_len);
      e.dec_in = shift_right_bos(e.tgt);
      encoded.push_back(std::move(e));
    } catch (const Error& err) {
      throw Error(err.code(), "utterance \"" + pair.id + "\": " + err.what());
    }
  }

  auto state = nn::AdamState::init(m.params);
  SplitMix64 shuffle_rng(cfg.shuffle_seed);
  std::vector<std::size_t> order(encoded.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::size_t cursor = order.size();  // forces a shuffle before the first batch

  LossCurve curve;
  curve.reserve(cfg.max_steps);

  for (std::size_t step = 1; step <= cfg.max_steps; ++step) {
    const auto t0 = std::chrono::steady_clock::now();

    if (cursor >= order.size()) {
      for (std::size_t i = order.size(); i-- > 1;) {
        std::size_t j =
            static_cast<std::size_t>(shuffle_rng.next_below(i + 1));
        std::swap(order[i], order[j]);
      }
      cursor = 0;
    }
    const std::size_t batch =
        std::min(cfg.batch_size, order.size() - cursor);

    nn::zero_grads(m.params);
    double batch_loss = 0.0;
    const float inv_batch = 1.0f / static_cast<float>(batch);
    for (std::size_t b = 0; b < batch; ++b) {
      const EncodedPair& e = encoded[order[cursor + b]];
      ForwardTrace<float> trace;
      auto logits = seq2seq_forward(m, e.src, e.dec_in, &trace);
      auto ce = nn::cross_entropy(logits, e.tgt, TokenizerSpec::pad_id);
      batch_loss += ce.loss;
      for (auto& g : ce.dlogits.data) g *= inv_batch;
      seq2seq_backward(m, trace, ce.dlogits);
    }
    cursor += batch;
    batch_loss /= static_cast<double>(batch);

    if (cfg.clip_norm > 0.0) nn::clip_global_norm(m.params, cfg.clip_norm);
    nn::adam_step(m.params, state, cfg.lr);

    const auto t1 = std::chrono::steady_clock::now();
    const double wall_ms =
        std::chrono::duration<double, std::milli>(t1 - t0).count();
    curve.push_back({step, batch_loss, wall_ms});
    if (log_stream) {
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "{\"step\":%zu,\"loss\":%.9g,\"wall_ms\":%.3f}\n", step,
                    batch_loss, wall_ms);
      (*log_stream) << buf;
    }
  }
  return curve;
}

}  // namespace psl
