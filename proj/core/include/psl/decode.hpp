#pragma once

#include "psl/model.hpp"
#include "psl/types.hpp"

namespace psl {

// Greedy decoding: starting from BOS, repeatedly appends the argmax token
// (ties toward the lowest id) until EOS or max_len generated tokens.
// Specials are stripped and the result is deduplicated before return, so
// outputs always obey the adjacent-distinct label convention.
UnitSequence greedy_decode(const Seq2SeqModel& m, const TokenIds& src_ids,
                           std::size_t max_len);

}  // namespace psl
