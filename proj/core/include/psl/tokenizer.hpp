#pragma once

// Byte-level text tokenizer and unit-target encoding for the predictor.
// Text token of byte b is exactly 3 + b; no language-specific preprocessing.
// IDs 0..2 are reserved: pad, eos, bos.

#include <cstdint>
#include <string_view>
#include <vector>

#include "psl/types.hpp"

namespace psl {

struct TokenizerSpec {
  static constexpr std::uint32_t pad_id = 0;
  static constexpr std::uint32_t eos_id = 1;
  static constexpr std::uint32_t bos_id = 2;
  static constexpr std::uint32_t byte_offset = 3;
  static constexpr std::uint32_t text_vocab = 259;  // 3 + 256
};

using TokenIds = std::vector<std::uint32_t>;

// True iff text is structurally valid UTF-8 (no overlongs, surrogates,
// or out-of-range code points).
bool is_valid_utf8(std::string_view text);

// bytes mapped b -> 3+b, EOS appended; length is byte_count + 1 and
// must not exceed max_src_len.
TokenIds byte_tokenize(std::string_view text, std::size_t max_src_len = 512);

// Inverse of byte_tokenize for round-trip checks: strips the trailing EOS
// and the byte offset.
std::string byte_detokenize(const TokenIds& ids);

// units mapped u -> 3+u, EOS appended; all ids must fit the unit vocabulary
// (unit_vocab - 3 real units) and the result must not exceed max_tgt_len.
TokenIds encode_units_target(const UnitSequence& units, std::size_t unit_vocab,
                             std::size_t max_tgt_len = 1024);

// Teacher-forcing decoder input: BOS followed by target[0..n-2].
TokenIds shift_right_bos(const TokenIds& target);

}  // namespace psl
