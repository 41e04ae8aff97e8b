#pragma once

// Little-endian primitives shared by the binary file formats
// (feature files, codebooks, checkpoints). Internal to core.

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "psl/error.hpp"

static_assert(std::endian::native == std::endian::little,
              "big-endian hosts would need byte swaps in binary_io");

namespace psl::detail {

inline void write_bytes(std::ostream& os, const void* p, std::size_t n) {
  os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  if (!os) raise(ErrorCode::IoError, "write failed");
}

template <typename T>
void write_pod(std::ostream& os, T value) {
  write_bytes(os, &value, sizeof(T));
}

inline void read_bytes(std::istream& is, void* p, std::size_t n,
                       const std::string& what) {
  is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(is.gcount()) != n)
    raise(ErrorCode::TruncatedFile, "short read while reading " + what);
}

template <typename T>
T read_pod(std::istream& is, const std::string& what) {
  T value;
  read_bytes(is, &value, sizeof(T), what);
  return value;
}

inline void expect_magic(std::istream& is, const char expected[4],
                         const std::string& path) {
  char magic[4];
  is.read(magic, 4);
  if (is.gcount() != 4)
    raise(ErrorCode::TruncatedFile, path + ": shorter than magic header");
  if (std::memcmp(magic, expected, 4) != 0)
    raise(ErrorCode::BadMagic, path + ": expected magic \"" +
                                   std::string(expected, 4) + "\", got \"" +
                                   std::string(magic, 4) + "\"");
}

inline void expect_eof(std::istream& is, const std::string& path) {
  char extra;
  is.read(&extra, 1);
  if (is.gcount() != 0)
    raise(ErrorCode::TrailingBytes, path + ": trailing bytes after payload");
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) raise(ErrorCode::IoError, "cannot open " + path + " for reading");
  return is;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) raise(ErrorCode::IoError, "cannot open " + path + " for writing");
  return os;
}

}  // namespace psl::detail
