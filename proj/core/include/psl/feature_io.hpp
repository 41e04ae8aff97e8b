#pragma once

// Feature file format, version 1:
//   magic "FEAT" | u32 version=1 | u32 n_frames | u32 dim |
//   n_frames*dim float32, little-endian, row-major (frame-major).
// Round-trips are bit-exact; trailing bytes are rejected.

#include <string>

#include "psl/types.hpp"

namespace psl {

FeatureMatrix read_feature_file(const std::string& path);
void write_feature_file(const std::string& path, const FeatureMatrix& m);

}  // namespace psl
