#pragma once

// Units files are UTF-8 TSV, LF line endings, one utterance per line:
//   id<TAB>u1 u2 ... un            plain (frame-level or deduplicated) units
//   id<TAB>u1:c1 u2:c2 ... un:cn   run-length form carrying durations
// Readers accept both token forms and return the expanded frame-level
// sequence; an empty unit list is permitted on read (callers flag it) but
// forbidden on write unless explicitly allowed.

#include <string>
#include <vector>

#include "psl/types.hpp"

namespace psl {

struct UnitsRow {
  std::string id;
  UnitSequence units;
};

std::vector<UnitsRow> read_units_file(const std::string& path);

void write_units_file(const std::string& path,
                      const std::vector<UnitsRow>& rows,
                      bool allow_empty = false);

struct RleUnitsRow {
  std::string id;
  RleUnitSequence runs;
};

void write_units_file_rle(const std::string& path,
                          const std::vector<RleUnitsRow>& rows);

}  // namespace psl
