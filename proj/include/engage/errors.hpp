#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace engage {

// One rejected input row. `row` is the 1-based line number in the file at
// which the record starts (the header is line 1).
struct RowError {
    std::string file;
    std::size_t row = 0;
    std::string column;
    std::string message;

    std::string format() const;
};

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class CsvFormatError : public Error {
  public:
    CsvFormatError(std::size_t line, const std::string& what)
        : Error(what), line_(line) {}
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

// Aggregate of every rejected row across the corpus files.
class CorpusError : public Error {
  public:
    explicit CorpusError(std::vector<RowError> rows);
    explicit CorpusError(const std::string& what) : Error(what) {}
    const std::vector<RowError>& rows() const { return rows_; }

  private:
    std::vector<RowError> rows_;
};

class FitError : public Error {
  public:
    using Error::Error;
};

}  // namespace engage
