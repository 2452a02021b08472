#include "engage/errors.hpp"

#include <sstream>

namespace engage {

std::string RowError::format() const {
    std::ostringstream out;
    out << file << ":" << row;
    if (!column.empty()) {
        out << " column '" << column << "'";
    }
    out << ": " << message;
    return out.str();
}

namespace {

std::string summarize(const std::vector<RowError>& rows) {
    std::ostringstream out;
    out << rows.size() << " invalid row" << (rows.size() == 1 ? "" : "s");
    std::size_t shown = 0;
    for (const auto& r : rows) {
        if (shown++ == 5) {
            out << "; ...";
            break;
        }
        out << (shown == 1 ? ": " : "; ") << r.format();
    }
    return out.str();
}

}  // namespace

CorpusError::CorpusError(std::vector<RowError> rows)
    : Error(summarize(rows)), rows_(std::move(rows)) {}

}  // namespace engage
