#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace rqm {

/// Formats a double with 17 significant digits ("null" when not finite).
std::string format_double(double x);

/// Minimal streaming JSON writer with two-space indentation.
class JsonWriter {
public:
    explicit JsonWriter(std::ostream& os) : os_(os) {}

    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(std::string_view k);

    JsonWriter& value(double x);
    JsonWriter& value(int x);
    JsonWriter& value(long long x);
    JsonWriter& value(std::size_t x);
    JsonWriter& value(bool x);
    JsonWriter& value(std::string_view s);
    JsonWriter& value(const char* s) { return value(std::string_view(s)); }
    JsonWriter& null();

    template <class T>
    JsonWriter& field(std::string_view k, const T& v)
    {
        key(k);
        return value(v);
    }

private:
    struct Level {
        bool object;
        bool empty;
    };
    void before_value();
    void newline();
    void write_string(std::string_view s);

    std::ostream& os_;
    std::vector<Level> stack_;
    bool after_key_ = false;
};

}  // namespace rqm
