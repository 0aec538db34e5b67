#include "maxbcg/csv.hpp"

#include <charconv>
#include <istream>

#include "maxbcg/catalog.hpp"

namespace maxbcg::csv {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

std::string Reader::header() {
    while (std::getline(in_, buffer_)) {
        ++line_;
        auto h = trim(buffer_);
        if (!h.empty()) return std::string(h);
    }
    return {};
}

void Reader::expect_header(std::string_view expected, std::string_view what) {
    auto h = header();
    if (h.empty()) fail(std::string(what) + ": missing header '" + std::string(expected) + "'");
    if (h != expected) {
        fail(std::string(what) + ": expected header '" + std::string(expected) + "', got '" + h + "'");
    }
}

bool Reader::next(std::vector<std::string_view>& fields) {
    fields.clear();
    while (std::getline(in_, buffer_)) {
        ++line_;
        auto row = trim(buffer_);
        if (row.empty()) continue;
        std::size_t start = 0;
        while (true) {
            auto comma = row.find(',', start);
            if (comma == std::string_view::npos) {
                fields.push_back(trim(row.substr(start)));
                break;
            }
            fields.push_back(trim(row.substr(start, comma - start)));
            start = comma + 1;
        }
        return true;
    }
    return false;
}

double Reader::to_double(std::string_view field, std::string_view name) const {
    double value = 0.0;
    // from_chars rejects a leading '+', which some writers emit.
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        fail("field '" + std::string(name) + "' is not a number: '" + std::string(field) + "'");
    }
    return value;
}

std::int64_t Reader::to_int64(std::string_view field, std::string_view name) const {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        fail("field '" + std::string(name) + "' is not an integer: '" + std::string(field) + "'");
    }
    return value;
}

void Reader::fail(const std::string& message) const {
    throw ValidationError("line " + std::to_string(line_) + ": " + message);
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace maxbcg::csv
