#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "engage/model.hpp"

namespace engage {

// Doubles in every artifact go through this: %.17g, enough digits to
// round-trip exactly, and the same bytes on every run.
std::string format_double(double value);

// Small streaming JSON writer (2-space indented). Output key order is the
// caller's, so serialized artifacts are byte-stable.
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(std::string_view name);
    JsonWriter& value(std::string_view text);
    JsonWriter& value(const char* text);
    JsonWriter& value(double number);
    JsonWriter& value(std::int64_t number);
    JsonWriter& value(std::uint64_t number);
    JsonWriter& value(int number);
    JsonWriter& value(bool flag);
    JsonWriter& null();
    std::string take();

private:
    void prepare_value();
    void newline();

    std::string out_;
    std::vector<bool> first_;  // per nesting level
    bool after_key_ = false;
};

// {"reference_kind": ..., "beta": {...}, "alpha": {...}, "diagnostics": {...}}
std::string model_to_json(const FitReport& report);

// Same without the diagnostics block (e.g. a planted ground-truth model).
std::string model_to_json(const EngagementModel& model);

EngagementModel model_from_json(const std::string& text);

}  // namespace engage
