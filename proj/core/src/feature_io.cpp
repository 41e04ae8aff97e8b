#include "psl/feature_io.hpp"

#include <cmath>
#include <cstdint>

#include "binary_io.hpp"

namespace psl {

namespace {
constexpr char kMagic[4] = {'F', 'E', 'A', 'T'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

FeatureMatrix read_feature_file(const std::string& path) {
  auto is = detail::open_input(path);
  detail::expect_magic(is, kMagic, path);
  auto version = detail::read_pod<std::uint32_t>(is, path + ": version");
  if (version != kVersion)
    raise(ErrorCode::UnknownVersion,
          path + ": feature file version " + std::to_string(version));
  FeatureMatrix m;
  m.n_frames = detail::read_pod<std::uint32_t>(is, path + ": n_frames");
  m.dim = detail::read_pod<std::uint32_t>(is, path + ": dim");
  if (m.n_frames == 0 || m.dim == 0)
    raise(ErrorCode::DimZero, path + ": n_frames and dim must be >= 1");
  m.data.resize(m.n_frames * m.dim);
  detail::read_bytes(is, m.data.data(), m.data.size() * sizeof(float),
                     path + ": feature data");
  detail::expect_eof(is, path);
  for (float v : m.data)
    if (!std::isfinite(v))
      raise(ErrorCode::NonFiniteValue, path + ": non-finite feature value");
  return m;
}

void write_feature_file(const std::string& path, const FeatureMatrix& m) {
  if (m.n_frames == 0 || m.dim == 0)
    raise(ErrorCode::DimZero, "feature matrix must be at least 1x1");
  if (m.data.size() != m.n_frames * m.dim)
    raise(ErrorCode::DimMismatch, "feature data length does not match dims");
  for (float v : m.data)
    if (!std::isfinite(v))
      raise(ErrorCode::NonFiniteValue, "refusing to write non-finite feature");
  auto os = detail::open_output(path);
  detail::write_bytes(os, kMagic, 4);
  detail::write_pod<std::uint32_t>(os, kVersion);
  detail::write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(m.n_frames));
  detail::write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(m.dim));
  detail::write_bytes(os, m.data.data(), m.data.size() * sizeof(float));
}

}  // namespace psl
