#pragma once

// Corpus-level evaluation. Each reference utterance is scored with every
// metric both sides can support: UER over deduplicated unit sequences, CER
// over transcript texts, SDR over aligned audio pairs. Corpus UER/CER are
// micro-averages (sum of distances over sum of reference lengths); corpus
// SDR is the arithmetic mean. Per-utterance numerators and denominators are
// kept in the report so the corpus numbers can be recomputed exactly.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "psl/types.hpp"

namespace psl {

struct UtteranceEval {
  std::optional<double> uer;
  std::optional<std::size_t> uer_dist, uer_ref_len;
  std::optional<double> cer;
  std::optional<std::size_t> cer_dist, cer_ref_len;
  std::optional<double> sdr_db;
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;
};

struct CorpusEval {
  std::optional<double> uer_micro;
  std::optional<double> cer_micro;
  std::optional<double> sdr_mean_db;
};

struct EvalCounts {
  std::size_t total = 0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  // reason -> count over fully skipped utterances
  std::map<std::string, std::size_t> skip_reasons;
  // per-metric failures on otherwise evaluated utterances, "metric:Code"
  std::map<std::string, std::size_t> metric_errors;
};

struct EvalReport {
  std::map<std::string, UtteranceEval> per_utterance;
  std::map<std::string, std::string> skipped;  // id -> reason
  CorpusEval corpus;
  EvalCounts counts;
};

// hyp ids must be a subset of ref ids; ref utterances without a hypothesis
// are skipped with reason "missing_hypothesis". Throws NoOverlappingIds when
// no id matches at all.
EvalReport evaluate(const std::vector<Utterance>& refs,
                    const std::vector<Utterance>& hyps);

// Canonical JSON: sorted keys, floats with 6 fixed decimals, absent
// optionals omitted. Identical reports serialize to identical bytes.
std::string report_to_json(const EvalReport& report);
void write_report(const EvalReport& report, const std::string& path);
EvalReport read_report(const std::string& path);

}  // namespace psl
