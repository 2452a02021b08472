#include "engage/serialize.hpp"

#include <cstdio>

#include <json.hpp>

#include "engage/errors.hpp"

namespace engage {

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

JsonWriter& JsonWriter::begin_object() {
    prepare_value();
    out_ += '{';
    first_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    const bool empty = first_.back();
    first_.pop_back();
    if (!empty) newline();
    out_ += '}';
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    prepare_value();
    out_ += '[';
    first_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    const bool empty = first_.back();
    first_.pop_back();
    if (!empty) newline();
    out_ += ']';
    return *this;
}

namespace {

void append_escaped(std::string& out, std::string_view text) {
    out += '"';
    for (unsigned char c : text) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    out += '"';
}

}  // namespace

JsonWriter& JsonWriter::key(std::string_view name) {
    if (!first_.back()) out_ += ',';
    first_.back() = false;
    newline();
    append_escaped(out_, name);
    out_ += ": ";
    after_key_ = true;
    return *this;
}

void JsonWriter::prepare_value() {
    if (after_key_) {
        after_key_ = false;
        return;
    }
    if (!first_.empty()) {
        if (!first_.back()) out_ += ',';
        first_.back() = false;
        newline();
    }
}

void JsonWriter::newline() {
    out_ += '\n';
    out_.append(2 * first_.size(), ' ');
}

JsonWriter& JsonWriter::value(std::string_view text) {
    prepare_value();
    append_escaped(out_, text);
    return *this;
}

JsonWriter& JsonWriter::value(const char* text) {
    return value(std::string_view(text));
}

JsonWriter& JsonWriter::value(double number) {
    prepare_value();
    out_ += format_double(number);
    return *this;
}

JsonWriter& JsonWriter::value(std::int64_t number) {
    prepare_value();
    out_ += std::to_string(number);
    return *this;
}

JsonWriter& JsonWriter::value(std::uint64_t number) {
    prepare_value();
    out_ += std::to_string(number);
    return *this;
}

JsonWriter& JsonWriter::value(int number) {
    return value(static_cast<std::int64_t>(number));
}

JsonWriter& JsonWriter::value(bool flag) {
    prepare_value();
    out_ += flag ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::null() {
    prepare_value();
    out_ += "null";
    return *this;
}

std::string JsonWriter::take() {
    out_ += '\n';
    return std::move(out_);
}

namespace {

void write_model_fields(JsonWriter& w, const EngagementModel& model) {
    w.key("reference_kind").value(model.reference_kind);
    w.key("beta").begin_object();
    for (const auto& [kind, value] : model.beta) {
        w.key(kind).value(value);
    }
    w.end_object();
    w.key("alpha").begin_object();
    for (const auto& [topic, value] : model.alpha) {
        w.key(topic).value(value);
    }
    w.end_object();
}

}  // namespace

std::string model_to_json(const EngagementModel& model) {
    JsonWriter w;
    w.begin_object();
    write_model_fields(w, model);
    w.end_object();
    return w.take();
}

std::string model_to_json(const FitReport& report) {
    JsonWriter w;
    w.begin_object();
    write_model_fields(w, report.model);
    w.key("diagnostics").begin_object();
    w.key("method").value(report.method);
    w.key("log_likelihood").value(report.log_likelihood_at_fit);
    w.key("likelihood_impossible").value(report.likelihood_impossible);
    w.key("gradient_sup_norm").value(report.gradient_sup_norm_at_fit);
    w.key("converged").value(report.converged);
    w.key("iterations").value(report.iterations);
    w.key("excluded_topics").begin_array();
    for (const auto& excluded : report.excluded_topics) {
        w.begin_object();
        w.key("topic_id").value(excluded.topic_id);
        w.key("reason").value(excluded.reason);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    w.end_object();
    return w.take();
}

EngagementModel model_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("bad model JSON: ") + e.what());
    }
    EngagementModel model;
    try {
        model.reference_kind = doc.at("reference_kind").get<std::string>();
        for (const auto& [kind, value] : doc.at("beta").items()) {
            model.beta[kind] = value.get<double>();
        }
        for (const auto& [topic, value] : doc.at("alpha").items()) {
            model.alpha[topic] = value.get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("bad model JSON: ") + e.what());
    }
    if (!model.beta.count(model.reference_kind)) {
        throw Error("bad model JSON: reference kind '" + model.reference_kind +
                    "' missing from beta");
    }
    return model;
}

}  // namespace engage
