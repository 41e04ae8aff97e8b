#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "psl/error.hpp"
#include "psl/evaluate.hpp"

// Canonical report serialization. std::map iteration gives sorted keys;
// every float is printed with printf %.6f so identical reports are
// byte-identical and write -> read -> write is a fixed point.

namespace psl {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void append_escaped(std::string& out, const std::string& s) {
  out.push_back('"');
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
}

class JsonBuilder {
 public:
  std::string str;

  void begin_object() { open('{'); }
  void end_object() { close('}'); }

  void key(const std::string& k) {
    comma();
    append_escaped(str, k);
    str.push_back(':');
    just_keyed_ = true;
  }
  void value_num(double v) { raw(fmt_double(v)); }
  void value_int(std::size_t v) { raw(std::to_string(v)); }
  void value_str(const std::string& v) {
    comma();
    append_escaped(str, v);
    just_keyed_ = false;
  }

 private:
  bool need_comma_ = false;
  bool just_keyed_ = false;

  void comma() {
    if (need_comma_ && !just_keyed_) str.push_back(',');
    just_keyed_ = false;
    need_comma_ = true;
  }
  void open(char c) {
    comma();
    str.push_back(c);
    need_comma_ = false;
  }
  void close(char c) {
    str.push_back(c);
    need_comma_ = true;
    just_keyed_ = false;
  }
  void raw(const std::string& v) {
    comma();
    str += v;
  }
};

}  // namespace

std::string report_to_json(const EvalReport& report) {
  JsonBuilder j;
  j.begin_object();

  j.key("corpus");
  j.begin_object();
  if (report.corpus.cer_micro) {
    j.key("cer_micro");
    j.value_num(*report.corpus.cer_micro);
  }
  if (report.corpus.sdr_mean_db) {
    j.key("sdr_mean_db");
    j.value_num(*report.corpus.sdr_mean_db);
  }
  if (report.corpus.uer_micro) {
    j.key("uer_micro");
    j.value_num(*report.corpus.uer_micro);
  }
  j.end_object();

  j.key("counts");
  j.begin_object();
  j.key("evaluated");
  j.value_int(report.counts.evaluated);
  j.key("metric_errors");
  j.begin_object();
  for (const auto& [k, v] : report.counts.metric_errors) {
    j.key(k);
    j.value_int(v);
  }
  j.end_object();
  j.key("skip_reasons");
  j.begin_object();
  for (const auto& [k, v] : report.counts.skip_reasons) {
    j.key(k);
    j.value_int(v);
  }
  j.end_object();
  j.key("skipped");
  j.value_int(report.counts.skipped);
  j.key("total");
  j.value_int(report.counts.total);
  j.end_object();

  j.key("per_utterance");
  j.begin_object();
  for (const auto& [id, ev] : report.per_utterance) {
    j.key(id);
    j.begin_object();
    if (ev.cer) {
      j.key("cer");
      j.value_num(*ev.cer);
      j.key("cer_dist");
      j.value_int(*ev.cer_dist);
      j.key("cer_ref_len");
      j.value_int(*ev.cer_ref_len);
    }
    j.key("hyp_len");
    j.value_int(ev.hyp_len);
    j.key("ref_len");
    j.value_int(ev.ref_len);
    if (ev.sdr_db) {
      j.key("sdr_db");
      j.value_num(*ev.sdr_db);
    }
    if (ev.uer) {
      j.key("uer");
      j.value_num(*ev.uer);
      j.key("uer_dist");
      j.value_int(*ev.uer_dist);
      j.key("uer_ref_len");
      j.value_int(*ev.uer_ref_len);
    }
    j.end_object();
  }
  j.end_object();

  j.key("skipped");
  j.begin_object();
  for (const auto& [id, reason] : report.skipped) {
    j.key(id);
    j.value_str(reason);
  }
  j.end_object();

  j.end_object();
  j.str.push_back('\n');
  return j.str;
}

void write_report(const EvalReport& report, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) raise(ErrorCode::IoError, "cannot open " + path + " for writing");
  os << report_to_json(report);
  if (!os) raise(ErrorCode::IoError, "write failed: " + path);
}

EvalReport read_report(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) raise(ErrorCode::IoError, "cannot open " + path + " for reading");
  nlohmann::json doc;
  try {
    is >> doc;
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::MalformedLine, path + ": " + e.what());
  }

  EvalReport r;
  const auto& corpus = doc.at("corpus");
  if (corpus.contains("uer_micro")) r.corpus.uer_micro = corpus["uer_micro"];
  if (corpus.contains("cer_micro")) r.corpus.cer_micro = corpus["cer_micro"];
  if (corpus.contains("sdr_mean_db"))
    r.corpus.sdr_mean_db = corpus["sdr_mean_db"];

  const auto& counts = doc.at("counts");
  r.counts.total = counts.at("total");
  r.counts.evaluated = counts.at("evaluated");
  r.counts.skipped = counts.at("skipped");
  for (const auto& [k, v] : counts.at("skip_reasons").items())
    r.counts.skip_reasons[k] = v;
  for (const auto& [k, v] : counts.at("metric_errors").items())
    r.counts.metric_errors[k] = v;

  for (const auto& [id, ev] : doc.at("per_utterance").items()) {
    UtteranceEval u;
    if (ev.contains("uer")) {
      u.uer = ev["uer"];
      u.uer_dist = ev.at("uer_dist").get<std::size_t>();
      u.uer_ref_len = ev.at("uer_ref_len").get<std::size_t>();
    }
    if (ev.contains("cer")) {
      u.cer = ev["cer"];
      u.cer_dist = ev.at("cer_dist").get<std::size_t>();
      u.cer_ref_len = ev.at("cer_ref_len").get<std::size_t>();
    }
    if (ev.contains("sdr_db")) u.sdr_db = ev["sdr_db"];
    u.hyp_len = ev.at("hyp_len");
    u.ref_len = ev.at("ref_len");
    r.per_utterance[id] = u;
  }
  for (const auto& [id, reason] : doc.at("skipped").items())
    r.skipped[id] = reason;
  return r;
}

}  // namespace psl
