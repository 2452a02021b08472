#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

namespace engage {

struct CsvRecord {
    std::vector<std::string> fields;
    std::size_t line = 0;  // 1-based line at which the record starts
};

// RFC-4180 reader: comma separated, double-quote quoting with "" escapes,
// LF or CRLF line endings, quoted fields may span lines. Blank lines are
// skipped. Throws CsvFormatError on a quoting violation.
class CsvParser {
  public:
    explicit CsvParser(std::istream& in) : in_(in) {}

    bool next(CsvRecord& out);

  private:
    std::istream& in_;
    std::size_t line_ = 1;
};

// Quotes a value when it contains a comma, quote, or newline.
std::string csv_field(std::string_view value);
std::string csv_line(const std::vector<std::string>& fields);

}  // namespace engage
