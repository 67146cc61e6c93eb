#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace regioncluster::csv {

struct Record {
  std::size_t line = 0;  // 1-based line number in the source
  std::vector<std::string> fields;
};

// Reads every record of an RFC 4180 style file. Blank lines are skipped, a
// leading UTF-8 BOM and CRLF line endings are tolerated. Throws ParseError on
// an unterminated quote. `source` names the input in error messages.
std::vector<Record> read_records(std::istream& in, const std::string& source);
std::vector<Record> read_file(const std::string& path);

// Verifies the first record matches `expected` exactly.
void expect_header(const std::vector<Record>& records, std::size_t index,
                   const std::vector<std::string_view>& expected,
                   const std::string& source);

std::int64_t parse_int(std::string_view text, const std::string& source, std::size_t line,
                       std::string_view field);
double parse_double(std::string_view text, const std::string& source, std::size_t line,
                    std::string_view field);

std::string escape(std::string_view field);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace regioncluster::csv
