#pragma once

// Unicode NFC normalization for character-level scoring. The character unit
// of CER is the Unicode scalar value of the NFC-normalized string, which
// keeps combining-mark spellings from counting as errors.

#include <string>
#include <string_view>

namespace psl {

// NFC-normalized code points of a UTF-8 string. Throws InvalidUtf8.
std::u32string nfc_codepoints(std::string_view utf8);

// NFC-normalized UTF-8.
std::string nfc_normalize(std::string_view utf8);

}  // namespace psl
