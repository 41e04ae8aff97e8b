#include "psl/decode.hpp"

#include "psl/units.hpp"

namespace psl {

UnitSequence greedy_decode(const Seq2SeqModel& m, const TokenIds& src_ids,
                           std::size_t max_len) {
  TokenIds ctx{TokenizerSpec::bos_id};
  const std::size_t vocab = m.config.unit_vocab;

  for (std::size_t n = 0; n < max_len; ++n) {
    if (ctx.size() >= m.config.max_tgt_len) break;
    auto logits = seq2seq_forward(m, src_ids, ctx);
    const float* last = logits.ptr() + (ctx.size() - 1) * vocab;
    std::uint32_t best = 0;
    for (std::uint32_t j = 1; j < vocab; ++j)
      if (last[j] > last[best]) best = j;
    if (best == TokenizerSpec::eos_id) break;
    ctx.push_back(best);
  }

  UnitSequence units;
  units.reserve(ctx.size());
  for (std::size_t i = 1; i < ctx.size(); ++i)
    if (ctx[i] >= TokenizerSpec::byte_offset)
      units.push_back(ctx[i] - TokenizerSpec::byte_offset);
  return dedup(units);
}

}  // namespace psl
