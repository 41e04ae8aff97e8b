#include "psl/text_norm.hpp"

#include <unicode/unorm2.h>
#include <unicode/ustring.h>

#include <vector>

#include "psl/error.hpp"
#include "psl/tokenizer.hpp"

namespace psl {

namespace {

std::vector<UChar> to_utf16(std::string_view utf8) {
  if (!is_valid_utf8(utf8))
    raise(ErrorCode::InvalidUtf8, "text is not valid UTF-8");
  std::vector<UChar> out(utf8.size() + 1);
  UErrorCode status = U_ZERO_ERROR;
  int32_t len = 0;
  u_strFromUTF8(out.data(), static_cast<int32_t>(out.size()), &len,
                utf8.data(), static_cast<int32_t>(utf8.size()), &status);
  if (U_FAILURE(status))
    raise(ErrorCode::InvalidUtf8, "UTF-8 to UTF-16 conversion failed");
  out.resize(static_cast<std::size_t>(len));
  return out;
}

std::vector<UChar> nfc_utf16(std::string_view utf8) {
  auto u16 = to_utf16(utf8);
  UErrorCode status = U_ZERO_ERROR;
  const UNormalizer2* nfc = unorm2_getNFCInstance(&status);
  if (U_FAILURE(status))
    raise(ErrorCode::IoError, "ICU NFC normalizer unavailable");

  std::vector<UChar> out(u16.size() + 16);
  for (;;) {
    status = U_ZERO_ERROR;
    int32_t len = unorm2_normalize(nfc, u16.data(),
                                   static_cast<int32_t>(u16.size()),
                                   out.data(), static_cast<int32_t>(out.size()),
                                   &status);
    if (status == U_BUFFER_OVERFLOW_ERROR) {
      out.resize(static_cast<std::size_t>(len) + 1);
      continue;
    }
    if (U_FAILURE(status))
      raise(ErrorCode::InvalidUtf8, "NFC normalization failed");
    out.resize(static_cast<std::size_t>(len));
    return out;
  }
}

}  // namespace

std::u32string nfc_codepoints(std::string_view utf8) {
  auto u16 = nfc_utf16(utf8);
  std::u32string cps;
  cps.reserve(u16.size());
  for (std::size_t i = 0; i < u16.size();) {
    UChar32 c;
    U16_NEXT(u16.data(), i, u16.size(), c);
    cps.push_back(static_cast<char32_t>(c));
  }
  return cps;
}

std::string nfc_normalize(std::string_view utf8) {
  auto u16 = nfc_utf16(utf8);
  std::string out(u16.size() * 4 + 4, '\0');
  UErrorCode status = U_ZERO_ERROR;
  int32_t len = 0;
  u_strToUTF8(out.data(), static_cast<int32_t>(out.size()), &len, u16.data(),
              static_cast<int32_t>(u16.size()), &status);
  if (U_FAILURE(status))
    raise(ErrorCode::InvalidUtf8, "UTF-16 to UTF-8 conversion failed");
  out.resize(static_cast<std::size_t>(len));
  return out;
}

}  // namespace psl
