#include "psl/units_io.hpp"

#include <charconv>
#include <fstream>
#include <string_view>

#include "psl/error.hpp"

namespace psl {

namespace {

std::uint32_t parse_unit(std::string_view token, const std::string& where) {
  if (!token.empty() && token.front() == '-')
    raise(ErrorCode::NegativeUnit, where + ": negative unit \"" +
                                       std::string(token) + "\"");
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(),
                                   value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    raise(ErrorCode::MalformedLine,
          where + ": bad unit token \"" + std::string(token) + "\"");
  return value;
}

}  // namespace

std::vector<UnitsRow> read_units_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) raise(ErrorCode::IoError, "cannot open " + path + " for reading");

  std::vector<UnitsRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);

    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      raise(ErrorCode::MalformedLine, where + ": expected id<TAB>units");

    UnitsRow row;
    row.id = line.substr(0, tab);

    std::string_view rest(line);
    rest.remove_prefix(tab + 1);
    while (!rest.empty()) {
      auto space = rest.find(' ');
      std::string_view token = rest.substr(0, space);
      rest = (space == std::string_view::npos) ? std::string_view{}
                                               : rest.substr(space + 1);
      if (token.empty()) continue;

      auto colon = token.find(':');
      if (colon == std::string_view::npos) {
        row.units.push_back(parse_unit(token, where));
      } else {
        std::uint32_t unit = parse_unit(token.substr(0, colon), where);
        std::string_view count_str = token.substr(colon + 1);
        std::uint32_t count = 0;
        auto [ptr, ec] = std::from_chars(
            count_str.data(), count_str.data() + count_str.size(), count);
        if (ec != std::errc() || ptr != count_str.data() + count_str.size())
          raise(ErrorCode::MalformedLine,
                where + ": bad run count \"" + std::string(count_str) + "\"");
        if (count == 0)
          raise(ErrorCode::ZeroCount, where + ": run with zero count");
        row.units.insert(row.units.end(), count, unit);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_units_file(const std::string& path, const std::vector<UnitsRow>& rows,
                      bool allow_empty) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) raise(ErrorCode::IoError, "cannot open " + path + " for writing");
  for (const auto& row : rows) {
    if (row.units.empty() && !allow_empty)
      raise(ErrorCode::EmptyUnits,
            "utterance \"" + row.id + "\" has no units to write");
    os << row.id << '\t';
    for (std::size_t i = 0; i < row.units.size(); ++i) {
      if (i) os << ' ';
      os << row.units[i];
    }
    os << '\n';
  }
  if (!os) raise(ErrorCode::IoError, "write failed: " + path);
}

void write_units_file_rle(const std::string& path,
                          const std::vector<RleUnitsRow>& rows) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) raise(ErrorCode::IoError, "cannot open " + path + " for writing");
  for (const auto& row : rows) {
    if (row.runs.empty())
      raise(ErrorCode::EmptyUnits,
            "utterance \"" + row.id + "\" has no runs to write");
    os << row.id << '\t';
    for (std::size_t i = 0; i < row.runs.size(); ++i) {
      if (row.runs[i].count == 0)
        raise(ErrorCode::ZeroCount,
              "utterance \"" + row.id + "\" has a zero-count run");
      if (i) os << ' ';
      os << row.runs[i].unit << ':' << row.runs[i].count;
    }
    os << '\n';
  }
  if (!os) raise(ErrorCode::IoError, "write failed: " + path);
}

}  // namespace psl
