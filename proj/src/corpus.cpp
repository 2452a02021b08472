#include "engage/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "engage/csv.hpp"
#include "engage/errors.hpp"

namespace engage {

InteractionKindSet InteractionKindSet::standard() {
    return InteractionKindSet{{"like", "retweet", "reply"}, 0};
}

std::optional<std::size_t> InteractionKindSet::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return i;
    }
    return std::nullopt;
}

void InteractionKindSet::validate() const {
    if (names.empty()) throw Error("interaction kind set is empty");
    std::set<std::string> seen;
    for (const auto& name : names) {
        if (name.empty()) throw Error("interaction kind name is empty");
        if (!seen.insert(name).second) {
            throw Error("duplicate interaction kind '" + name + "'");
        }
    }
    if (reference_index >= names.size()) {
        throw Error("reference kind index out of range");
    }
}

const TopicMeta* RawCorpus::find_topic(const std::string& topic_id) const {
    for (const auto& t : topics) {
        if (t.topic_id == topic_id) return &t;
    }
    return nullptr;
}

namespace {

std::string strip_bom(std::string s) {
    if (s.rfind("\xEF\xBB\xBF", 0) == 0) s.erase(0, 3);
    return s;
}

bool parse_int64(const std::string& text, std::int64_t& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && !text.empty();
}

bool parse_double(const std::string& text, double& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && !text.empty();
}

// Header-driven access to a CSV file's records.
class TableReader {
  public:
    TableReader(const std::filesystem::path& path, std::vector<RowError>& errors)
        : name_(path.filename().string()), errors_(errors), in_(path) {
        if (!in_) {
            throw CorpusError("missing file: " + path.string());
        }
        parser_.emplace(in_);
        CsvRecord header;
        if (!read_record(header) || header.fields.empty()) {
            throw CorpusError(name_ + ": missing header row");
        }
        header_ = std::move(header.fields);
        header_[0] = strip_bom(header_[0]);
    }

    const std::string& name() const { return name_; }
    const std::vector<std::string>& header() const { return header_; }

    std::optional<std::size_t> column(std::string_view col) const {
        for (std::size_t i = 0; i < header_.size(); ++i) {
            if (header_[i] == col) return i;
        }
        return std::nullopt;
    }

    std::size_t require_column(std::string_view col) const {
        if (auto idx = column(col)) return *idx;
        throw CorpusError(name_ + ": missing required column '" + std::string(col) +
                          "'");
    }

    // False at end of file; records with a CSV-level syntax problem are
    // reported and skipped.
    bool next(CsvRecord& rec) {
        while (true) {
            if (!read_record(rec)) return false;
            if (rec.fields.size() != header_.size()) {
                report(rec.line, "",
                       "expected " + std::to_string(header_.size()) +
                           " fields, got " + std::to_string(rec.fields.size()));
                continue;
            }
            return true;
        }
    }

    void report(std::size_t line, const std::string& column,
                const std::string& message) {
        errors_.push_back(RowError{name_, line, column, message});
    }

  private:
    bool read_record(CsvRecord& rec) {
        try {
            return parser_->next(rec);
        } catch (const CsvFormatError& e) {
            errors_.push_back(RowError{name_, e.line(), "", e.what()});
            return false;  // quoting errors desync the stream, stop this file
        }
    }

    std::string name_;
    std::vector<RowError>& errors_;
    std::ifstream in_;
    std::optional<CsvParser> parser_;
    std::vector<std::string> header_;
};

void warn_unknown_columns(const TableReader& table,
                          std::initializer_list<std::string_view> known,
                          RawCorpus& corpus) {
    for (const auto& col : table.header()) {
        bool recognized = false;
        for (const auto k : known) recognized = recognized || col == k;
        if (!recognized) {
            corpus.warnings.push_back(table.name() +
                                      ": ignoring unknown column '" + col + "'");
        }
    }
}

// likes/retweets/replies style headers match their singular kind names.
bool column_matches_kind(const std::string& column, const std::string& kind) {
    if (column == kind) return true;
    if (column == kind + "s") return true;
    if (!kind.empty() && kind.back() == 'y' &&
        column == kind.substr(0, kind.size() - 1) + "ies") {
        return true;
    }
    return false;
}

void load_topics(const std::filesystem::path& path, RawCorpus& corpus,
                 std::vector<RowError>& errors) {
    TableReader table(path, errors);
    const std::size_t id_col = table.require_column("topic_id");
    const std::size_t date_col = table.require_column("creation_date");
    const auto name_col = table.column("display_name");
    warn_unknown_columns(table, {"topic_id", "creation_date", "display_name"},
                         corpus);

    std::set<std::string> seen;
    CsvRecord rec;
    while (table.next(rec)) {
        TopicMeta topic;
        topic.topic_id = rec.fields[id_col];
        if (topic.topic_id.empty()) {
            table.report(rec.line, "topic_id", "empty topic_id");
            continue;
        }
        if (!seen.insert(topic.topic_id).second) {
            table.report(rec.line, "topic_id",
                         "duplicate topic_id '" + topic.topic_id + "'");
            continue;
        }
        const auto date = Date::parse(rec.fields[date_col]);
        if (!date) {
            table.report(rec.line, "creation_date",
                         "invalid date '" + rec.fields[date_col] + "'");
            continue;
        }
        topic.creation_date = *date;
        if (name_col) topic.display_name = rec.fields[*name_col];
        corpus.topics.push_back(std::move(topic));
    }
}

void load_users(const std::filesystem::path& path, RawCorpus& corpus,
                std::vector<RowError>& errors) {
    TableReader table(path, errors);
    const std::size_t id_col = table.require_column("user_id");
    const std::size_t followers_col = table.require_column("follower_count");
    const auto bot_col = table.column("bot_probability");
    warn_unknown_columns(table, {"user_id", "follower_count", "bot_probability"},
                         corpus);

    std::set<std::string> seen;
    CsvRecord rec;
    while (table.next(rec)) {
        UserProfile user;
        user.user_id = rec.fields[id_col];
        if (user.user_id.empty()) {
            table.report(rec.line, "user_id", "empty user_id");
            continue;
        }
        if (!seen.insert(user.user_id).second) {
            table.report(rec.line, "user_id",
                         "duplicate user_id '" + user.user_id + "'");
            continue;
        }
        if (!parse_int64(rec.fields[followers_col], user.follower_count)) {
            table.report(rec.line, "follower_count",
                         "invalid integer '" + rec.fields[followers_col] + "'");
            continue;
        }
        if (user.follower_count < 0) {
            table.report(rec.line, "follower_count", "negative follower_count");
            continue;
        }
        if (bot_col && !rec.fields[*bot_col].empty()) {
            double p = 0.0;
            if (!parse_double(rec.fields[*bot_col], p)) {
                table.report(rec.line, "bot_probability",
                             "invalid number '" + rec.fields[*bot_col] + "'");
                continue;
            }
            if (p < 0.0 || p > 1.0) {
                table.report(rec.line, "bot_probability",
                             "bot_probability outside [0,1]");
                continue;
            }
            user.bot_probability = p;
        }
        corpus.users.push_back(std::move(user));
    }
}

void load_posts(const std::filesystem::path& path, RawCorpus& corpus,
                std::vector<RowError>& errors) {
    TableReader table(path, errors);
    const std::size_t topic_col = table.require_column("topic_id");
    const std::size_t user_col = table.require_column("user_id");
    const std::size_t ts_col = table.require_column("timestamp");

    const auto& kinds = corpus.kinds;
    std::vector<std::optional<std::size_t>> kind_cols(kinds.size());
    std::vector<bool> header_used(table.header().size(), false);
    header_used[topic_col] = header_used[user_col] = header_used[ts_col] = true;
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        for (std::size_t i = 0; i < table.header().size(); ++i) {
            if (column_matches_kind(table.header()[i], kinds.names[k])) {
                kind_cols[k] = i;
                header_used[i] = true;
                break;
            }
        }
        if (!kind_cols[k]) {
            corpus.warnings.push_back(table.name() + ": no column for kind '" +
                                      kinds.names[k] + "', counts default to 0");
        }
    }
    for (std::size_t i = 0; i < table.header().size(); ++i) {
        if (!header_used[i]) {
            corpus.warnings.push_back(table.name() + ": ignoring unknown column '" +
                                      table.header()[i] + "'");
        }
    }

    CsvRecord rec;
    while (table.next(rec)) {
        Post post;
        post.topic_id = rec.fields[topic_col];
        post.user_id = rec.fields[user_col];
        if (post.topic_id.empty()) {
            table.report(rec.line, "topic_id", "empty topic_id");
            continue;
        }
        if (post.user_id.empty()) {
            table.report(rec.line, "user_id", "empty user_id");
            continue;
        }
        const auto ts = Timestamp::parse(rec.fields[ts_col]);
        if (!ts) {
            table.report(rec.line, "timestamp",
                         "invalid timestamp '" + rec.fields[ts_col] + "'");
            continue;
        }
        post.timestamp = *ts;
        post.counts.assign(kinds.size(), 0);
        bool ok = true;
        for (std::size_t k = 0; k < kinds.size(); ++k) {
            if (!kind_cols[k]) continue;
            const std::string& cell = rec.fields[*kind_cols[k]];
            std::int64_t count = 0;
            if (cell.empty()) {
                count = 0;
            } else if (!parse_int64(cell, count)) {
                table.report(rec.line, table.header()[*kind_cols[k]],
                             "invalid count '" + cell + "'");
                ok = false;
                break;
            }
            if (count < 0) {
                table.report(rec.line, table.header()[*kind_cols[k]],
                             "negative count");
                ok = false;
                break;
            }
            post.counts[k] = count;
        }
        if (ok) corpus.posts.push_back(std::move(post));
    }
}

void load_prices(const std::filesystem::path& path, RawCorpus& corpus,
                 std::vector<RowError>& errors) {
    TableReader table(path, errors);
    const std::size_t topic_col = table.require_column("topic_id");
    const std::size_t date_col = table.require_column("date");
    warn_unknown_columns(table, {"topic_id", "date", "price"}, corpus);
    const std::size_t price_col = table.require_column("price");

    std::map<std::string, std::map<Date, double>> rows;
    CsvRecord rec;
    while (table.next(rec)) {
        const std::string& topic = rec.fields[topic_col];
        if (topic.empty()) {
            table.report(rec.line, "topic_id", "empty topic_id");
            continue;
        }
        const auto date = Date::parse(rec.fields[date_col]);
        if (!date) {
            table.report(rec.line, "date",
                         "invalid date '" + rec.fields[date_col] + "'");
            continue;
        }
        double price = 0.0;
        if (!parse_double(rec.fields[price_col], price)) {
            table.report(rec.line, "price",
                         "invalid number '" + rec.fields[price_col] + "'");
            continue;
        }
        if (!(price > 0.0)) {
            table.report(rec.line, "price", "price must be positive");
            continue;
        }
        auto [it, inserted] = rows[topic].try_emplace(*date, price);
        if (!inserted) {
            table.report(rec.line, "date",
                         "duplicate price for topic '" + topic + "' on " +
                             date->str());
        }
    }
    for (auto& [topic, series] : rows) {
        PriceSeries ps;
        ps.topic_id = topic;
        ps.observations.reserve(series.size());
        for (const auto& [date, price] : series) {
            ps.observations.push_back(PricePoint{date, price});
        }
        corpus.prices.emplace(topic, std::move(ps));
    }
}

}  // namespace

RawCorpus load_corpus(const std::filesystem::path& dir,
                      const InteractionKindSet& kinds) {
    kinds.validate();
    RawCorpus corpus;
    corpus.kinds = kinds;

    std::vector<RowError> errors;
    load_topics(dir / "topics.csv", corpus, errors);
    load_users(dir / "users.csv", corpus, errors);
    load_posts(dir / "posts.csv", corpus, errors);
    load_prices(dir / "prices.csv", corpus, errors);

    if (!errors.empty()) throw CorpusError(std::move(errors));
    return corpus;
}

std::int64_t InteractionDataset::n_c(const std::string& topic) const {
    auto it = topic_stats.find(topic);
    return it == topic_stats.end() ? 0 : it->second.interactions;
}

std::int64_t InteractionDataset::n_cu(const std::string& topic,
                                      const std::string& user) const {
    auto it = pair_stats.find({topic, user});
    return it == pair_stats.end() ? 0 : it->second.interactions;
}

std::int64_t InteractionDataset::n_cui(const std::string& topic,
                                       const std::string& user,
                                       std::size_t kind) const {
    auto it = pair_stats.find({topic, user});
    return it == pair_stats.end() ? 0 : it->second.kind_interactions.at(kind);
}

std::int64_t InteractionDataset::exposure(const std::string& topic) const {
    auto it = topic_stats.find(topic);
    return it == topic_stats.end() ? 0 : it->second.exposure;
}

bool InteractionDataset::covered(const std::string& topic) const {
    auto it = topic_stats.find(topic);
    return it != topic_stats.end() && it->second.post_count > 0;
}

std::vector<std::string> InteractionDataset::uncovered_topics() const {
    std::vector<std::string> out;
    for (const auto& [id, meta] : topics) {
        if (!covered(id)) out.push_back(id);
    }
    return out;
}

InteractionDataset assemble_dataset(const InteractionKindSet& kinds,
                                    std::vector<TopicMeta> topics,
                                    std::vector<UserProfile> profiles,
                                    std::vector<Post> posts,
                                    bool strict_users) {
    kinds.validate();
    InteractionDataset ds;
    ds.kinds = kinds;
    ds.kind_totals.assign(kinds.size(), 0);

    for (auto& topic : topics) {
        std::string id = topic.topic_id;
        if (!ds.topics.emplace(id, std::move(topic)).second) {
            throw CorpusError("duplicate topic_id '" + id + "'");
        }
    }
    for (auto& user : profiles) {
        std::string id = user.user_id;
        if (!ds.profiles.emplace(id, std::move(user)).second) {
            throw CorpusError("duplicate user_id '" + id + "'");
        }
    }

    std::set<std::string> missing_users;
    std::vector<Post> retained;
    retained.reserve(posts.size());
    for (auto& post : posts) {
        if (post.counts.size() != kinds.size()) {
            throw Error("post count vector does not match kind set");
        }
        if (!ds.topics.count(post.topic_id)) {
            throw CorpusError("post references unknown topic '" + post.topic_id +
                              "'");
        }
        if (!ds.profiles.count(post.user_id)) {
            if (strict_users) {
                missing_users.insert(post.user_id);
            } else {
                ++ds.dropped_posts;
            }
            continue;
        }
        retained.push_back(std::move(post));
    }
    if (!missing_users.empty()) {
        std::ostringstream msg;
        msg << missing_users.size() << " post user(s) have no profile:";
        std::size_t shown = 0;
        for (const auto& id : missing_users) {
            if (shown++ == 5) {
                msg << " ...";
                break;
            }
            msg << " '" << id << "'";
        }
        throw CorpusError(msg.str());
    }
    if (ds.dropped_posts > 0) {
        ds.warnings.push_back("dropped " + std::to_string(ds.dropped_posts) +
                              " post(s) whose user has no profile");
    }
    ds.posts = std::move(retained);

    for (const auto& [id, meta] : ds.topics) {
        auto& stats = ds.topic_stats[id];
        stats.kind_interactions.assign(kinds.size(), 0);
    }
    for (const auto& post : ds.posts) {
        auto& topic = ds.topic_stats[post.topic_id];
        auto& pair = ds.pair_stats[{post.topic_id, post.user_id}];
        if (pair.kind_interactions.empty()) {
            pair.kind_interactions.assign(kinds.size(), 0);
        }
        ++topic.post_count;
        ++pair.post_count;
        for (std::size_t k = 0; k < kinds.size(); ++k) {
            const std::int64_t count = post.counts[k];
            topic.interactions += count;
            topic.kind_interactions[k] += count;
            pair.interactions += count;
            pair.kind_interactions[k] += count;
            ds.kind_totals[k] += count;
            ds.total_interactions += count;
        }
    }
    for (const auto& [key, pair] : ds.pair_stats) {
        const auto& profile = ds.profiles.at(key.second);
        ds.topic_stats[key.first].exposure +=
            pair.post_count * profile.follower_count;
    }
    return ds;
}

InteractionDataset build_dataset(const RawCorpus& corpus,
                                 std::optional<Timestamp> cutoff,
                                 bool strict_users) {
    std::vector<Post> posts;
    posts.reserve(corpus.posts.size());
    for (const auto& post : corpus.posts) {
        if (!cutoff || post.timestamp <= *cutoff) posts.push_back(post);
    }
    return assemble_dataset(corpus.kinds, corpus.topics, corpus.users,
                            std::move(posts), strict_users);
}

TimeWindow first_month_window(const TopicMeta& topic) {
    const Timestamp start = Timestamp::from_date(topic.creation_date);
    return TimeWindow{start, start.plus_days(kWindowDays)};
}

}  // namespace engage
