#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fishtf {

/// Fixed-point text with `decimals` digits, independent of the C++ locale.
/// Ties in the binary value round half to even. Negative zero prints as 0.
inline std::string format_fixed(double v, int decimals)
{
    if (v == 0.0)
        v = 0.0;
    char buf[512];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
    if (ec != std::errc{})
        return "nan";
    std::string s(buf, end);
    // A tiny negative value that rounds to zero must not keep its sign.
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos)
        s.erase(0, 1);
    return s;
}

inline std::string format_scientific(double v, int digits)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, digits);
    return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

inline std::string format_optional(const std::optional<double>& v, int decimals, std::string_view absent = "NA")
{
    return v ? format_fixed(*v, decimals) : std::string(absent);
}

/// Column-aligned plain text. The first column is left-aligned, the rest are
/// right-aligned.
class TextTable {
public:
    explicit TextTable(std::vector<std::string> header) : rows_{std::move(header)} {}

    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    std::string render(std::string_view indent = "") const
    {
        std::vector<std::size_t> width;
        for (const auto& row : rows_) {
            width.resize(std::max(width.size(), row.size()), 0);
            for (std::size_t c = 0; c < row.size(); ++c)
                width[c] = std::max(width[c], row[c].size());
        }
        std::string out;
        for (const auto& row : rows_) {
            std::string line(indent);
            for (std::size_t c = 0; c < row.size(); ++c) {
                const std::string pad(width[c] - row[c].size(), ' ');
                if (c > 0)
                    line += "  ";
                line += c == 0 ? row[c] + pad : pad + row[c];
            }
            while (!line.empty() && line.back() == ' ')
                line.pop_back();
            out += line;
            out += '\n';
        }
        return out;
    }

private:
    std::vector<std::vector<std::string>> rows_;
};

} // namespace fishtf
