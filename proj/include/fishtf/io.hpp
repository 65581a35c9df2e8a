#pragma once

// Readers and writers for the on-disk formats:
//   counts CSV   header `term,doc,count`, one cell per line
//   corpus JSONL one {"id": ..., "text": ...} object per line
//   text dir     one document per regular file, id = file name

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "fishtf/corpus.hpp"
#include "fishtf/error.hpp"

namespace fishtf::io {

namespace detail {

inline std::string strip_cr(std::string line)
{
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    return line;
}

// Splits one CSV record. Fields may be double-quoted, with "" for a quote.
inline std::vector<std::string> split_csv(std::string_view line, std::size_t lineno)
{
    std::vector<std::string> fields(1);
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        const char c = line[k];
        if (quoted) {
            if (c == '"') {
                if (k + 1 < line.size() && line[k + 1] == '"') {
                    fields.back() += '"';
                    ++k;
                } else {
                    quoted = false;
                }
            } else {
                fields.back() += c;
            }
        } else if (c == ',') {
            fields.emplace_back();
            was_quoted = false;
        } else if (c == '"' && fields.back().empty() && !was_quoted) {
            quoted = true;
            was_quoted = true;
        } else {
            fields.back() += c;
        }
    }
    if (quoted)
        throw Error(Errc::parse_error, "line " + std::to_string(lineno) + ": unterminated quoted field");
    return fields;
}

inline std::string csv_field(std::string_view s)
{
    if (s.find_first_of(",\"\n") == std::string_view::npos)
        return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + '"';
}

inline std::ifstream open_input(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::io_error, "cannot open '" + path.string() + "'");
    return in;
}

} // namespace detail

inline std::vector<CountRow> read_counts_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || detail::strip_cr(line) != "term,doc,count")
        throw Error(Errc::parse_error, "line 1: expected header 'term,doc,count'");
    std::vector<CountRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = detail::strip_cr(std::move(line));
        if (line.empty())
            continue;
        auto fields = detail::split_csv(line, lineno);
        if (fields.size() != 3)
            throw Error(Errc::parse_error,
                        "line " + std::to_string(lineno) + ": expected 3 fields, got " + std::to_string(fields.size()));
        std::int64_t count = 0;
        const auto& c = fields[2];
        auto [end, ec] = std::from_chars(c.data(), c.data() + c.size(), count);
        if (ec != std::errc{} || end != c.data() + c.size())
            throw Error(Errc::parse_error, "line " + std::to_string(lineno) + ": count '" + c + "' is not an integer");
        if (count < 0)
            throw Error(Errc::negative_count, "line " + std::to_string(lineno) + ": count " + c + " is negative");
        if (fields[0].empty() || fields[1].empty())
            throw Error(Errc::parse_error, "line " + std::to_string(lineno) + ": empty term or doc");
        if ((fields[0] + fields[1]).find_first_of("\t\n") != std::string::npos)
            throw Error(Errc::parse_error, "line " + std::to_string(lineno) + ": tab inside term or doc");
        rows.push_back({std::move(fields[0]), std::move(fields[1]), count});
    }
    return rows;
}

inline std::vector<CountRow> read_counts_csv(const std::filesystem::path& path)
{
    auto in = detail::open_input(path);
    return read_counts_csv(in);
}

inline void write_counts_csv(std::ostream& out, const std::vector<CountRow>& rows)
{
    out << "term,doc,count\n";
    for (const auto& r : rows)
        out << detail::csv_field(r.term) << ',' << detail::csv_field(r.doc) << ',' << r.count << '\n';
}

inline std::vector<Document> read_corpus_jsonl(std::istream& in)
{
    std::vector<Document> docs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = detail::strip_cr(std::move(line));
        if (line.find_first_not_of(" \t") == std::string::npos)
            continue;
        const auto where = "line " + std::to_string(lineno) + ": ";
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(Errc::parse_error, where + "invalid JSON (" + e.what() + ")");
        }
        if (!obj.is_object())
            throw Error(Errc::parse_error, where + "expected a JSON object");
        auto id = obj.find("id");
        auto text = obj.find("text");
        if (id == obj.end() || !id->is_string())
            throw Error(Errc::parse_error, where + "missing string field 'id'");
        if (text == obj.end() || !text->is_string())
            throw Error(Errc::parse_error, where + "missing string field 'text'");
        docs.push_back({id->get<std::string>(), text->get<std::string>()});
    }
    return docs;
}

inline std::vector<Document> read_corpus_jsonl(const std::filesystem::path& path)
{
    auto in = detail::open_input(path);
    return read_corpus_jsonl(in);
}

/// Every regular file in `dir`, sorted by file name.
inline std::vector<Document> read_text_dir(const std::filesystem::path& dir)
{
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec))
        throw Error(Errc::io_error, "'" + dir.string() + "' is not a directory");
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file())
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<Document> docs;
    for (const auto& f : files) {
        auto in = detail::open_input(f);
        std::ostringstream text;
        text << in.rdbuf();
        docs.push_back({f.filename().string(), text.str()});
    }
    return docs;
}

/// One stopword per line; blank lines and lines starting with '#' are skipped.
/// Words are tokenized the same way as documents.
inline std::unordered_set<std::string> read_stopwords(const std::filesystem::path& path)
{
    auto in = detail::open_input(path);
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        line = detail::strip_cr(std::move(line));
        if (line.empty() || line.front() == '#')
            continue;
        for (auto& w : tokenize(line))
            words.insert(std::move(w));
    }
    return words;
}

} // namespace fishtf::io
