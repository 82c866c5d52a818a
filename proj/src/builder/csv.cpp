#include "ontomas/builder/csv.hpp"

#include "ontomas/error.hpp"

namespace ontomas::builder {

std::vector<CsvRow> parseCsv(std::string_view text, const std::string& fileName) {
  std::vector<CsvRow> rows;
  std::size_t pos = 0;
  std::size_t line = 1;
  auto fail = [&](const std::string& message) {
    throw Error(ErrorCode::CsvSyntaxError, message, SourcePosition{fileName, line, 0});
  };

  while (pos < text.size()) {
    CsvRow row;
    row.line = line;
    std::string field;
    bool recordDone = false;
    while (!recordDone) {
      if (pos < text.size() && text[pos] == '"') {
        const std::size_t openLine = line;
        ++pos;
        while (true) {
          if (pos >= text.size()) {
            line = openLine;
            fail("unterminated quoted field");
          }
          const char c = text[pos++];
          if (c == '"') {
            if (pos < text.size() && text[pos] == '"') {
              field.push_back('"');
              ++pos;
              continue;
            }
            break;
          }
          if (c == '\n') ++line;
          field.push_back(c);
        }
        if (pos < text.size() && text[pos] != ',' && text[pos] != '\n' && text[pos] != '\r') {
          fail("unexpected text after closing quote");
        }
      } else {
        while (pos < text.size() && text[pos] != ',' && text[pos] != '\n' && text[pos] != '\r') {
          if (text[pos] == '"') fail("quote inside unquoted field");
          field.push_back(text[pos++]);
        }
      }
      row.fields.push_back(std::move(field));
      field.clear();
      if (pos >= text.size()) {
        recordDone = true;
      } else if (text[pos] == ',') {
        ++pos;
      } else {
        if (text[pos] == '\r') ++pos;
        if (pos < text.size() && text[pos] == '\n') ++pos;
        ++line;
        recordDone = true;
      }
    }
    const bool blank = row.fields.size() == 1 && row.fields[0].empty();
    if (!blank) rows.push_back(std::move(row));
  }
  return rows;
}

std::string csvField(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string renderCsv(const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out.push_back(',');
      out += csvField(row[i]);
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace ontomas::builder
