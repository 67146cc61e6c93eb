#include "regioncluster/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <system_error>

#include "regioncluster/error.hpp"

namespace regioncluster::csv {

std::vector<Record> read_records(std::istream& in, const std::string& source) {
  std::vector<Record> records;
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t pos = 0;
  if (content.rfind("\xEF\xBB\xBF", 0) == 0) pos = 3;

  std::size_t line = 1;
  while (pos < content.size()) {
    Record rec;
    rec.line = line;
    std::string field;
    bool in_quotes = false;
    bool any = false;
    bool done = false;
    while (!done && pos < content.size()) {
      char c = content[pos];
      if (in_quotes) {
        if (c == '"') {
          if (pos + 1 < content.size() && content[pos + 1] == '"') {
            field.push_back('"');
            pos += 2;
            continue;
          }
          in_quotes = false;
          ++pos;
          continue;
        }
        if (c == '\n') ++line;
        field.push_back(c);
        ++pos;
        continue;
      }
      switch (c) {
        case '"':
          in_quotes = true;
          any = true;
          ++pos;
          break;
        case ',':
          rec.fields.push_back(std::move(field));
          field.clear();
          any = true;
          ++pos;
          break;
        case '\r':
          ++pos;
          break;
        case '\n':
          ++pos;
          ++line;
          done = true;
          break;
        default:
          field.push_back(c);
          any = true;
          ++pos;
      }
    }
    if (in_quotes) throw ParseError(source, rec.line, "unterminated quoted field");
    if (!any) continue;  // blank line
    rec.fields.push_back(std::move(field));
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<Record> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_records(in, path);
}

void expect_header(const std::vector<Record>& records, std::size_t index,
                   const std::vector<std::string_view>& expected, const std::string& source) {
  std::string want;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) want += ",";
    want += expected[i];
  }
  if (index >= records.size()) throw ParseError(source, 1, "missing header, expected '" + want + "'");
  const Record& rec = records[index];
  bool ok = rec.fields.size() == expected.size();
  for (std::size_t i = 0; ok && i < expected.size(); ++i) ok = rec.fields[i] == expected[i];
  if (!ok) throw ParseError(source, rec.line, "bad header, expected '" + want + "'");
}

std::int64_t parse_int(std::string_view text, const std::string& source, std::size_t line,
                       std::string_view field) {
  std::int64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw ParseError(source, line,
                     "field '" + std::string(field) + "' is not an integer: '" + std::string(text) + "'");
  }
  return value;
}

double parse_double(std::string_view text, const std::string& source, std::size_t line,
                    std::string_view field) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw ParseError(source, line,
                     "field '" + std::string(field) + "' is not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

}  // namespace regioncluster::csv
