#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fishtf/cell_stats.hpp"
#include "fishtf/error.hpp"
#include "fishtf/tokenize.hpp"

namespace fishtf {

struct Document {
    std::string id;
    std::string text;
};

/// One cell of a counts table: `count` occurrences of `term` in `doc`.
struct CountRow {
    std::string term;
    std::string doc;
    std::int64_t count = 0;

    friend bool operator==(const CountRow&, const CountRow&) = default;
};

/// Immutable sparse term-document matrix.
///
/// Documents are indexed in the order they are first seen with a positive
/// count. Terms are indexed in the order they are first met when the
/// documents are read in index order. Terms and documents without any positive
/// count are not part of the matrix.
class TermDocumentMatrix {
public:
    struct Entry {
        std::size_t term;
        Count count;

        friend bool operator==(const Entry&, const Entry&) = default;
    };

    std::size_t num_terms() const { return vocab_.size(); }
    std::size_t num_docs() const { return docs_.size(); }
    Count total() const { return total_; }

    const std::vector<std::string>& vocab() const { return vocab_; }
    const std::vector<std::string>& docs() const { return docs_; }

    const std::string& term(std::size_t i) const
    {
        check_term(i);
        return vocab_[i];
    }
    const std::string& doc(std::size_t j) const
    {
        check_doc(j);
        return docs_[j];
    }

    Count term_total(std::size_t i) const
    {
        check_term(i);
        return row_totals_[i];
    }
    Count doc_total(std::size_t j) const
    {
        check_doc(j);
        return col_totals_[j];
    }
    Count doc_freq(std::size_t i) const
    {
        check_term(i);
        return doc_freq_[i];
    }

    /// Nonzero cells of document j, ascending by term index.
    std::span<const Entry> column(std::size_t j) const
    {
        check_doc(j);
        return columns_[j];
    }

    Count count(std::size_t i, std::size_t j) const
    {
        check_term(i);
        const auto& col = column(j);
        auto it = std::lower_bound(col.begin(), col.end(), i,
                                   [](const Entry& e, std::size_t t) { return e.term < t; });
        return it != col.end() && it->term == i ? it->count : 0;
    }

    std::optional<std::size_t> find_term(std::string_view t) const
    {
        auto it = term_index_.find(std::string(t));
        if (it == term_index_.end())
            return std::nullopt;
        return it->second;
    }
    std::optional<std::size_t> find_doc(std::string_view d) const
    {
        auto it = doc_index_.find(std::string(d));
        if (it == doc_index_.end())
            return std::nullopt;
        return it->second;
    }

    CellStats cell_stats(std::size_t i, std::size_t j) const
    {
        return CellStats::make(count(i, j), row_totals_[i], doc_total(j), total_, doc_freq_[i],
                               docs_.size(), i, j);
    }

    friend bool operator==(const TermDocumentMatrix& a, const TermDocumentMatrix& b)
    {
        return a.vocab_ == b.vocab_ && a.docs_ == b.docs_ && a.columns_ == b.columns_;
    }

    /// Builds a matrix from raw cells. Rows with count 0 are accepted and
    /// contribute nothing.
    static TermDocumentMatrix from_rows(std::span<const CountRow> rows);

private:
    void check_term(std::size_t i) const
    {
        if (i >= vocab_.size())
            throw Error(Errc::index_out_of_range, "term index " + std::to_string(i));
    }
    void check_doc(std::size_t j) const
    {
        if (j >= docs_.size())
            throw Error(Errc::index_out_of_range, "document index " + std::to_string(j));
    }

    std::vector<std::string> vocab_;
    std::vector<std::string> docs_;
    std::unordered_map<std::string, std::size_t> term_index_;
    std::unordered_map<std::string, std::size_t> doc_index_;
    std::vector<std::vector<Entry>> columns_;
    std::vector<Count> row_totals_;
    std::vector<Count> col_totals_;
    std::vector<Count> doc_freq_;
    Count total_ = 0;
};

inline TermDocumentMatrix TermDocumentMatrix::from_rows(std::span<const CountRow> rows)
{
    struct PairHash {
        std::size_t operator()(const std::pair<std::string, std::string>& p) const
        {
            const std::size_t h = std::hash<std::string>{}(p.first);
            return h ^ (std::hash<std::string>{}(p.second) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
        }
    };
    std::unordered_map<std::pair<std::string, std::string>, std::size_t, PairHash> seen;
    seen.reserve(rows.size());

    TermDocumentMatrix m;
    // Pass 1: validate, register documents, and group positive cells by document
    // while keeping their input order.
    std::vector<std::vector<std::pair<std::string_view, Count>>> by_doc;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.count < 0)
            throw Error(Errc::negative_count, "row " + std::to_string(r + 1) + " (" + row.term + ", "
                                                  + row.doc + ") has count " + std::to_string(row.count));
        if (!seen.emplace(std::make_pair(row.term, row.doc), r).second)
            throw Error(Errc::duplicate_cell,
                        "row " + std::to_string(r + 1) + " repeats cell (" + row.term + ", " + row.doc + ")");
        if (row.count == 0)
            continue;
        auto [it, fresh] = m.doc_index_.emplace(row.doc, m.docs_.size());
        if (fresh) {
            m.docs_.push_back(row.doc);
            by_doc.emplace_back();
        }
        by_doc[it->second].emplace_back(row.term, static_cast<Count>(row.count));
    }
    if (m.docs_.empty())
        throw Error(Errc::empty_collection, "no positive counts");

    // Pass 2: assign term indices in document-major first-seen order.
    m.columns_.resize(m.docs_.size());
    m.col_totals_.assign(m.docs_.size(), 0);
    for (std::size_t j = 0; j < by_doc.size(); ++j) {
        auto& col = m.columns_[j];
        col.reserve(by_doc[j].size());
        for (auto [term, count] : by_doc[j]) {
            auto [it, fresh] = m.term_index_.emplace(std::string(term), m.vocab_.size());
            if (fresh) {
                m.vocab_.emplace_back(term);
                m.row_totals_.push_back(0);
                m.doc_freq_.push_back(0);
            }
            const std::size_t i = it->second;
            col.push_back({i, count});
            m.row_totals_[i] += count;
            m.doc_freq_[i] += 1;
            m.col_totals_[j] += count;
            m.total_ += count;
        }
        std::sort(col.begin(), col.end(), [](const Entry& a, const Entry& b) { return a.term < b.term; });
    }
    return m;
}

/// Tokenizes each document and counts its terms.
inline TermDocumentMatrix ingest_text(std::span<const Document> documents, const TokenizeOptions& opts = {})
{
    if (documents.empty())
        throw Error(Errc::empty_collection, "no documents");
    std::unordered_map<std::string, std::size_t> ids;
    std::vector<CountRow> rows;
    for (const auto& doc : documents) {
        if (!ids.emplace(doc.id, ids.size()).second)
            throw Error(Errc::duplicate_doc_id, "document id '" + doc.id + "' appears twice");
        std::unordered_map<std::string, std::size_t> slot;
        for (auto& tok : tokenize(doc.text, opts)) {
            auto [it, fresh] = slot.emplace(tok, rows.size());
            if (fresh)
                rows.push_back({std::move(tok), doc.id, 1});
            else
                rows[it->second].count += 1;
        }
    }
    if (rows.empty())
        throw Error(Errc::empty_collection, "no tokens survived tokenization");
    return TermDocumentMatrix::from_rows(rows);
}

inline TermDocumentMatrix ingest_counts(std::span<const CountRow> rows)
{
    return TermDocumentMatrix::from_rows(rows);
}

/// Positive cells in document-major, term-index order. Feeding the result back
/// into `ingest_counts` rebuilds an identical matrix.
inline std::vector<CountRow> export_counts(const TermDocumentMatrix& m)
{
    std::vector<CountRow> rows;
    for (std::size_t j = 0; j < m.num_docs(); ++j)
        for (const auto& e : m.column(j))
            rows.push_back({m.term(e.term), m.doc(j), static_cast<std::int64_t>(e.count)});
    return rows;
}

} // namespace fishtf
