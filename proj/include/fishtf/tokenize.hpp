#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <unicode/uchar.h>
#include <unicode/utf8.h>

namespace fishtf {

struct TokenizeOptions {
    bool lowercase = true;
    /// Tokens (after lowercasing) that are dropped.
    std::unordered_set<std::string> stopwords;
};

/// Splits UTF-8 text on maximal runs of non-alphanumeric code points.
/// Lowercasing uses the simple Unicode case mapping. Malformed bytes act as
/// separators.
inline std::vector<std::string> tokenize(std::string_view text, const TokenizeOptions& opts = {})
{
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            if (!opts.stopwords.contains(current))
                tokens.push_back(std::move(current));
            current.clear();
        }
    };

    const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
    const auto length = static_cast<int32_t>(text.size());
    int32_t pos = 0;
    while (pos < length) {
        UChar32 c;
        U8_NEXT(bytes, pos, length, c);
        if (c < 0 || !u_isalnum(c)) {
            flush();
            continue;
        }
        if (opts.lowercase)
            c = u_tolower(c);
        char buf[U8_MAX_LENGTH];
        int32_t n = 0;
        UBool failed = false;
        U8_APPEND(reinterpret_cast<uint8_t*>(buf), n, U8_MAX_LENGTH, c, failed);
        if (!failed)
            current.append(buf, static_cast<std::size_t>(n));
    }
    flush();
    return tokens;
}

} // namespace fishtf
