#include "engage/csv.hpp"

#include "engage/errors.hpp"

namespace engage {

bool CsvParser::next(CsvRecord& out) {
    out.fields.clear();

    int c = in_.get();
    // Skip blank lines between records.
    while (c == '\n' || c == '\r') {
        if (c == '\n') ++line_;
        c = in_.get();
    }
    if (c == std::istream::traits_type::eof()) return false;

    out.line = line_;
    std::string field;
    bool quoted = false;
    bool field_started = false;

    while (true) {
        if (c == std::istream::traits_type::eof()) {
            if (quoted) {
                throw CsvFormatError(out.line, "unterminated quoted field");
            }
            out.fields.push_back(std::move(field));
            return true;
        }
        const char ch = static_cast<char>(c);
        if (quoted) {
            if (ch == '"') {
                const int peek = in_.peek();
                if (peek == '"') {
                    in_.get();
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                if (ch == '\n') ++line_;
                field.push_back(ch);
            }
        } else if (ch == '"') {
            if (field_started && !field.empty()) {
                throw CsvFormatError(line_, "quote inside unquoted field");
            }
            quoted = true;
            field_started = true;
        } else if (ch == ',') {
            out.fields.push_back(std::move(field));
            field.clear();
            field_started = false;
        } else if (ch == '\n' || ch == '\r') {
            if (ch == '\r' && in_.peek() == '\n') in_.get();
            ++line_;
            out.fields.push_back(std::move(field));
            return true;
        } else {
            field.push_back(ch);
            field_started = true;
        }
        c = in_.get();
    }
}

std::string csv_field(std::string_view value) {
    const bool needs_quotes =
        value.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) return std::string(value);
    std::string out;
    out.reserve(value.size() + 2);
    out.push_back('"');
    for (char c : value) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string csv_line(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += csv_field(fields[i]);
    }
    out.push_back('\n');
    return out;
}

}  // namespace engage
