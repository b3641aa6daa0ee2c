#include "rqm/json.hpp"

#include <cmath>
#include <cstdio>

namespace rqm {

std::string format_double(double x)
{
    if (!std::isfinite(x)) return "null";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void JsonWriter::newline()
{
    os_ << '\n';
    for (std::size_t i = 0; i < stack_.size(); ++i) os_ << "  ";
}

void JsonWriter::before_value()
{
    if (after_key_) {
        after_key_ = false;
        return;
    }
    if (stack_.empty()) return;
    if (!stack_.back().empty) os_ << ',';
    stack_.back().empty = false;
    newline();
}

JsonWriter& JsonWriter::begin_object()
{
    before_value();
    os_ << '{';
    stack_.push_back({true, true});
    return *this;
}

JsonWriter& JsonWriter::end_object()
{
    const bool empty = stack_.back().empty;
    stack_.pop_back();
    if (!empty) newline();
    os_ << '}';
    if (stack_.empty()) os_ << '\n';
    return *this;
}

JsonWriter& JsonWriter::begin_array()
{
    before_value();
    os_ << '[';
    stack_.push_back({false, true});
    return *this;
}

JsonWriter& JsonWriter::end_array()
{
    const bool empty = stack_.back().empty;
    stack_.pop_back();
    if (!empty) newline();
    os_ << ']';
    if (stack_.empty()) os_ << '\n';
    return *this;
}

JsonWriter& JsonWriter::key(std::string_view k)
{
    before_value();
    write_string(k);
    os_ << ": ";
    after_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(double x)
{
    before_value();
    os_ << format_double(x);
    return *this;
}

JsonWriter& JsonWriter::value(int x)
{
    before_value();
    os_ << x;
    return *this;
}

JsonWriter& JsonWriter::value(long long x)
{
    before_value();
    os_ << x;
    return *this;
}

JsonWriter& JsonWriter::value(std::size_t x)
{
    before_value();
    os_ << x;
    return *this;
}

JsonWriter& JsonWriter::value(bool x)
{
    before_value();
    os_ << (x ? "true" : "false");
    return *this;
}

JsonWriter& JsonWriter::value(std::string_view s)
{
    before_value();
    write_string(s);
    return *this;
}

JsonWriter& JsonWriter::null()
{
    before_value();
    os_ << "null";
    return *this;
}

void JsonWriter::write_string(std::string_view s)
{
    os_ << '"';
    for (char c : s) {
        switch (c) {
        case '"': os_ << "\\\""; break;
        case '\\': os_ << "\\\\"; break;
        case '\n': os_ << "\\n"; break;
        case '\t': os_ << "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                os_ << buf;
            } else {
                os_ << c;
            }
        }
    }
    os_ << '"';
}

}  // namespace rqm
