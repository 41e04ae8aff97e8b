#pragma once

// Algebra on unit sequences: run-length encoding (run counts are the
// frame-level duration cues), adjacent-repeat removal, and edit-distance
// based scoring (UER).

#include <cstdint>

#include "psl/types.hpp"

namespace psl {

RleUnitSequence rle_encode(const UnitSequence& s);

// Inverse of rle_encode; a zero-count run is an error.
UnitSequence rle_expand(const RleUnitSequence& r);

// Removes adjacent repeats; equals the unit column of rle_encode. Idempotent.
UnitSequence dedup(const UnitSequence& s);

// Minimal insertions+deletions+substitutions (unit costs) from a to b.
// Rolling two-row DP, O(min(|a|,|b|)) memory.
std::size_t levenshtein(const UnitSequence& a, const UnitSequence& b);

// 100 * levenshtein(hyp, ref) / |ref|, may exceed 100. |ref| must be > 0.
double uer(const UnitSequence& hyp, const UnitSequence& ref);

}  // namespace psl
