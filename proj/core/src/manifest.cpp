#include "psl/manifest.hpp"

#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "psl/error.hpp"

namespace psl {

using nlohmann::json;

namespace {

std::string at_line(const std::string& path, std::size_t line_no) {
  return path + ":" + std::to_string(line_no);
}

Utterance parse_line(const std::string& line, const std::string& where) {
  json obj = json::parse(line, nullptr, false);
  if (obj.is_discarded() || !obj.is_object())
    raise(ErrorCode::MalformedLine, where + ": not a JSON object");

  Utterance u;
  for (auto& [key, value] : obj.items()) {
    if (key == "id") {
      if (!value.is_string())
        raise(ErrorCode::MalformedLine, where + ": \"id\" must be a string");
      u.id = value.get<std::string>();
    } else if (key == "text") {
      if (!value.is_string())
        raise(ErrorCode::MalformedLine, where + ": \"text\" must be a string");
      u.text = value.get<std::string>();
    } else if (key == "feature_path") {
      if (!value.is_string())
        raise(ErrorCode::MalformedLine,
              where + ": \"feature_path\" must be a string");
      u.feature_path = value.get<std::string>();
    } else if (key == "audio_path") {
      if (!value.is_string())
        raise(ErrorCode::MalformedLine,
              where + ": \"audio_path\" must be a string");
      u.audio_path = value.get<std::string>();
    } else if (key == "units") {
      if (!value.is_array())
        raise(ErrorCode::MalformedLine, where + ": \"units\" must be an array");
      UnitSequence units;
      units.reserve(value.size());
      for (const auto& v : value) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
          raise(ErrorCode::MalformedLine,
                where + ": units must be non-negative integers");
        units.push_back(static_cast<std::uint32_t>(v.get<std::int64_t>()));
      }
      u.units = std::move(units);
    } else {
      raise(ErrorCode::MalformedLine, where + ": unknown key \"" + key + "\"");
    }
  }

  if (u.id.empty()) raise(ErrorCode::MissingId, where + ": missing \"id\"");
  if (u.id.find('\t') != std::string::npos ||
      u.id.find('\n') != std::string::npos)
    raise(ErrorCode::MalformedLine, where + ": id contains tab or newline");
  if (!u.text && !u.feature_path && !u.audio_path && !u.units)
    raise(ErrorCode::MalformedLine,
          where + ": utterance \"" + u.id + "\" carries no payload field");
  return u;
}

}  // namespace

std::vector<Utterance> read_manifest(const std::string& path) {
  std::ifstream is(path);
  if (!is) raise(ErrorCode::IoError, "cannot open " + path + " for reading");

  std::vector<Utterance> out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Utterance u = parse_line(line, at_line(path, line_no));
    if (!seen.insert(u.id).second)
      raise(ErrorCode::DuplicateId,
            at_line(path, line_no) + ": duplicate id \"" + u.id + "\"");
    out.push_back(std::move(u));
  }
  return out;
}

void write_manifest(const std::string& path,
                    const std::vector<Utterance>& utterances) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) raise(ErrorCode::IoError, "cannot open " + path + " for writing");
  for (const auto& u : utterances) {
    json obj;
    obj["id"] = u.id;
    if (u.text) obj["text"] = *u.text;
    if (u.feature_path) obj["feature_path"] = *u.feature_path;
    if (u.audio_path) obj["audio_path"] = *u.audio_path;
    if (u.units) obj["units"] = *u.units;
    os << obj.dump() << "\n";
  }
  if (!os) raise(ErrorCode::IoError, "write failed: " + path);
}

}  // namespace psl
