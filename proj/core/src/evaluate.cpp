#include "psl/evaluate.hpp"

#include <algorithm>
#include <unordered_map>

#include "psl/error.hpp"
#include "psl/metrics.hpp"
#include "psl/text_norm.hpp"
#include "psl/units.hpp"
#include "psl/wav_io.hpp"

namespace psl {

namespace {

void note_metric_error(EvalCounts& counts, const char* metric,
                       const Error& err) {
  counts.metric_errors[std::string(metric) + ":" +
                       error_code_name(err.code())] += 1;
}

}  // namespace

EvalReport evaluate(const std::vector<Utterance>& refs,
                    const std::vector<Utterance>& hyps) {
  std::unordered_map<std::string, const Utterance*> hyp_by_id;
  for (const auto& h : hyps) hyp_by_id.emplace(h.id, &h);

  bool any_overlap = false;
  for (const auto& r : refs)
    if (hyp_by_id.count(r.id)) {
      any_overlap = true;
      break;
    }
  if (!any_overlap)
    raise(ErrorCode::NoOverlappingIds,
          "no utterance id appears in both reference and hypothesis");

  // Sorted ref order makes the report independent of manifest ordering.
  std::vector<const Utterance*> ordered;
  ordered.reserve(refs.size());
  for (const auto& r : refs) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(),
            [](const Utterance* a, const Utterance* b) { return a->id < b->id; });

  EvalReport report;
  report.counts.total = refs.size();

  std::size_t uer_dist_sum = 0, uer_len_sum = 0;
  std::size_t cer_dist_sum = 0, cer_len_sum = 0;
  double sdr_sum = 0.0;
  std::size_t sdr_n = 0;

  for (const Utterance* ref : ordered) {
    auto it = hyp_by_id.find(ref->id);
    if (it == hyp_by_id.end()) {
      report.skipped[ref->id] = "missing_hypothesis";
      report.counts.skip_reasons["missing_hypothesis"] += 1;
      ++report.counts.skipped;
      continue;
    }
    const Utterance* hyp = it->second;

    UtteranceEval ev;
    bool attempted = false;

    if (ref->units && hyp->units) {
      attempted = true;
      try {
        UnitSequence ref_d = dedup(*ref->units);
        UnitSequence hyp_d = dedup(*hyp->units);
        if (ref_d.empty())
          raise(ErrorCode::EmptyReference, "reference units empty");
        std::size_t dist = levenshtein(hyp_d, ref_d);
        ev.uer = 100.0 * static_cast<double>(dist) /
                 static_cast<double>(ref_d.size());
        ev.uer_dist = dist;
        ev.uer_ref_len = ref_d.size();
        ev.hyp_len = hyp_d.size();
        ev.ref_len = ref_d.size();
        uer_dist_sum += dist;
        uer_len_sum += ref_d.size();
      } catch (const Error& err) {
        note_metric_error(report.counts, "uer", err);
      }
    }

    if (ref->text && hyp->text) {
      attempted = true;
      try {
        CerDetail d = cer_detail(*hyp->text, *ref->text);
        ev.cer = d.percent;
        ev.cer_dist = d.distance;
        ev.cer_ref_len = d.ref_len;
        if (!ev.uer) {
          ev.hyp_len = d.hyp_len;
          ev.ref_len = d.ref_len;
        }
        cer_dist_sum += d.distance;
        cer_len_sum += d.ref_len;
      } catch (const Error& err) {
        note_metric_error(report.counts, "cer", err);
      }
    }

    if (ref->audio_path && hyp->audio_path) {
      attempted = true;
      try {
        Waveform ref_wav = read_wav(*ref->audio_path);
        Waveform hyp_wav = read_wav(*hyp->audio_path);
        ev.sdr_db = sdr(ref_wav, hyp_wav);
        if (!ev.uer && !ev.cer) {
          ev.hyp_len = hyp_wav.samples.size();
          ev.ref_len = ref_wav.samples.size();
        }
        sdr_sum += *ev.sdr_db;
        ++sdr_n;
      } catch (const Error& err) {
        note_metric_error(report.counts, "sdr", err);
      }
    }

    if (ev.uer || ev.cer || ev.sdr_db) {
      report.per_utterance.emplace(ref->id, std::move(ev));
      ++report.counts.evaluated;
    } else {
      const char* reason =
          attempted ? "all_metrics_failed" : "no_evaluable_fields";
      report.skipped[ref->id] = reason;
      report.counts.skip_reasons[reason] += 1;
      ++report.counts.skipped;
    }
  }

  if (uer_len_sum > 0)
    report.corpus.uer_micro = 100.0 * static_cast<double>(uer_dist_sum) /
                              static_cast<double>(uer_len_sum);
  if (cer_len_sum > 0)
    report.corpus.cer_micro = 100.0 * static_cast<double>(cer_dist_sum) /
                              static_cast<double>(cer_len_sum);
  if (sdr_n > 0)
    report.corpus.sdr_mean_db = sdr_sum / static_cast<double>(sdr_n);

  return report;
}

}  // namespace psl
