#pragma once

// Checkpoint format, version 1:
//   magic "SQ2S" | u32 version | config block (d_model, n_heads,
//   n_layers_enc, n_layers_dec, d_ff, unit_vocab, max_src_len, max_tgt_len
//   as u32; seed as u64) | u32 tensor count | per tensor: u16 name length,
//   UTF-8 name, u8 rank, u32 dims, float32 data little-endian.
// Tensors appear in canonical parameter order; round trips are bit-exact.

#include <optional>
#include <string>

#include "psl/model.hpp"

namespace psl {

void save_checkpoint(const Seq2SeqModel& m, const std::string& path);

// When expected is given, every config field except the seed must match the
// file or the load fails with ShapeMismatchOnLoad.
Seq2SeqModel load_checkpoint(const std::string& path,
                             const std::optional<ModelConfig>& expected =
                                 std::nullopt);

}  // namespace psl
