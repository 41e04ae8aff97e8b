#pragma once

// Corpus manifests are UTF-8 JSON-lines, one utterance object per line:
//   {"id": "...", "text": "...", "feature_path": "...",
//    "audio_path": "...", "units": [5, 5, 2]}
// "id" is required and unique; at least one other field must be present.

#include <string>
#include <vector>

#include "psl/types.hpp"

namespace psl {

std::vector<Utterance> read_manifest(const std::string& path);
void write_manifest(const std::string& path,
                    const std::vector<Utterance>& utterances);

}  // namespace psl
