#ifndef MAXBCG_CSV_HPP
#define MAXBCG_CSV_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace maxbcg::csv {

/// Line-oriented reader for the plain comma-separated files the engine
/// exchanges. No quoting; '\r' line endings are tolerated.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    /// First non-empty line, or empty at end of input.
    std::string header();

    /// Reads the header and checks it matches `expected` exactly.
    void expect_header(std::string_view expected, std::string_view what);

    /// Next non-empty row split on ','. Returns false at end of input.
    bool next(std::vector<std::string_view>& fields);

    std::size_t line() const { return line_; }
    std::string_view raw_line() const { return buffer_; }

    /// Field converters; failures throw ValidationError citing the line.
    double to_double(std::string_view field, std::string_view name) const;
    std::int64_t to_int64(std::string_view field, std::string_view name) const;

    [[noreturn]] void fail(const std::string& message) const;

private:
    std::istream& in_;
    std::string buffer_;
    std::size_t line_ = 0;
};

/// Shortest representation that round-trips the double exactly.
std::string format_double(double value);

}  // namespace maxbcg::csv

#endif  // MAXBCG_CSV_HPP
