#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ontomas::builder {

struct CsvRow {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

// RFC 4180 reader: comma separated, double-quoted fields may contain commas,
// doubled quotes and line breaks; CRLF and LF endings; a trailing newline is
// optional. Blank lines are skipped. Throws Error(CsvSyntaxError) with
// `fileName` and line for an unterminated quote or text after a closing quote.
std::vector<CsvRow> parseCsv(std::string_view text, const std::string& fileName);

// Quotes a field only when it needs it.
std::string csvField(std::string_view value);

std::string renderCsv(const std::vector<std::vector<std::string>>& rows);

}  // namespace ontomas::builder
