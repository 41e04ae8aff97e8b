#include "psl/units.hpp"

#include <algorithm>
#include <vector>

#include "edit_distance.hpp"
#include "psl/error.hpp"

namespace psl {

RleUnitSequence rle_encode(const UnitSequence& s) {
  RleUnitSequence runs;
  for (std::uint32_t u : s) {
    if (!runs.empty() && runs.back().unit == u)
      ++runs.back().count;
    else
      runs.push_back({u, 1});
  }
  return runs;
}

UnitSequence rle_expand(const RleUnitSequence& r) {
  UnitSequence out;
  std::size_t total = 0;
  for (const auto& run : r) {
    if (run.count == 0)
      raise(ErrorCode::ZeroCount, "run of unit " + std::to_string(run.unit) +
                                      " has zero count");
    total += run.count;
  }
  out.reserve(total);
  for (const auto& run : r) out.insert(out.end(), run.count, run.unit);
  return out;
}

UnitSequence dedup(const UnitSequence& s) {
  UnitSequence out;
  out.reserve(s.size());
  for (std::uint32_t u : s)
    if (out.empty() || out.back() != u) out.push_back(u);
  return out;
}

std::size_t levenshtein(const UnitSequence& a, const UnitSequence& b) {
  return detail::edit_distance(a, b);
}

double uer(const UnitSequence& hyp, const UnitSequence& ref) {
  if (ref.empty())
    raise(ErrorCode::EmptyReference, "UER reference sequence is empty");
  return 100.0 * static_cast<double>(levenshtein(hyp, ref)) /
         static_cast<double>(ref.size());
}

}  // namespace psl
