#include "psl/tokenizer.hpp"

#include <string>

#include "psl/error.hpp"

namespace psl {

bool is_valid_utf8(std::string_view text) {
  const unsigned char* p = reinterpret_cast<const unsigned char*>(text.data());
  std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    unsigned char c = p[i];
    if (c < 0x80) {
      ++i;
    } else if ((c & 0xE0) == 0xC0) {
      if (i + 1 >= n || (p[i + 1] & 0xC0) != 0x80) return false;
      if (c < 0xC2) return false;  // overlong
      i += 2;
    } else if ((c & 0xF0) == 0xE0) {
      if (i + 2 >= n || (p[i + 1] & 0xC0) != 0x80 || (p[i + 2] & 0xC0) != 0x80)
        return false;
      if (c == 0xE0 && p[i + 1] < 0xA0) return false;  // overlong
      if (c == 0xED && p[i + 1] >= 0xA0) return false;  // surrogate
      i += 3;
    } else if ((c & 0xF8) == 0xF0) {
      if (i + 3 >= n || (p[i + 1] & 0xC0) != 0x80 ||
          (p[i + 2] & 0xC0) != 0x80 || (p[i + 3] & 0xC0) != 0x80)
        return false;
      if (c == 0xF0 && p[i + 1] < 0x90) return false;  // overlong
      if (c > 0xF4 || (c == 0xF4 && p[i + 1] >= 0x90)) return false;  // > U+10FFFF
      i += 4;
    } else {
      return false;
    }
  }
  return true;
}

TokenIds byte_tokenize(std::string_view text, std::size_t max_src_len) {
  if (!is_valid_utf8(text))
    raise(ErrorCode::InvalidUtf8, "text is not valid UTF-8");
  if (text.size() + 1 > max_src_len)
    raise(ErrorCode::SourceTooLong,
          std::to_string(text.size() + 1) + " tokens > max_src_len " +
              std::to_string(max_src_len));
  TokenIds ids;
  ids.reserve(text.size() + 1);
  for (unsigned char b : text)
    ids.push_back(TokenizerSpec::byte_offset + b);
  ids.push_back(TokenizerSpec::eos_id);
  return ids;
}

std::string byte_detokenize(const TokenIds& ids) {
  std::string out;
  for (std::uint32_t id : ids) {
    if (id < TokenizerSpec::byte_offset) continue;  // specials
    out.push_back(static_cast<char>(id - TokenizerSpec::byte_offset));
  }
  return out;
}

TokenIds encode_units_target(const UnitSequence& units, std::size_t unit_vocab,
                             std::size_t max_tgt_len) {
  const std::size_t n_units = unit_vocab - TokenizerSpec::byte_offset;
  TokenIds ids;
  ids.reserve(units.size() + 1);
  for (std::uint32_t u : units) {
    if (u >= n_units)
      raise(ErrorCode::UnitOutOfRange,
            "unit " + std::to_string(u) + " >= vocabulary bound " +
                std::to_string(n_units));
    ids.push_back(TokenizerSpec::byte_offset + u);
  }
  ids.push_back(TokenizerSpec::eos_id);
  if (ids.size() > max_tgt_len)
    raise(ErrorCode::TargetTooLong,
          std::to_string(ids.size()) + " tokens > max_tgt_len " +
              std::to_string(max_tgt_len));
  return ids;
}

TokenIds shift_right_bos(const TokenIds& target) {
  TokenIds in;
  in.reserve(target.size());
  in.push_back(TokenizerSpec::bos_id);
  for (std::size_t i = 0; i + 1 < target.size(); ++i)
    in.push_back(target[i]);
  return in;
}

}  // namespace psl
