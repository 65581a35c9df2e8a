#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "fishtf/cell_stats.hpp"
#include "fishtf/corpus.hpp"
#include "fishtf/error.hpp"
#include "fishtf/numerics.hpp"

namespace fishtf {

/// ln(d / b_i).
inline double idf(const CellStats& s)
{
    if (s.b_i == 0 || s.b_i > s.d)
        throw Error(Errc::undefined_weight, "IDF needs 1 <= b_i <= d");
    return std::log(static_cast<double>(s.d) / static_cast<double>(s.b_i));
}

/// ln(n / n_i).
inline double icf(const CellStats& s)
{
    if (s.n_i == 0 || s.n_i > s.n)
        throw Error(Errc::undefined_weight, "ICF needs 1 <= n_i <= n");
    return std::log(static_cast<double>(s.n) / static_cast<double>(s.n_i));
}

inline double tfidf(const CellStats& s) { return static_cast<double>(s.n_ij) * idf(s); }

inline double tficf(const CellStats& s) { return static_cast<double>(s.n_ij) * icf(s); }

/// -ln H(n_ij; n_i, n_j, n), the one-tailed Fisher exact test weight.
inline double fisher_weight(const CellStats& s)
{
    const LogProb tail = log_hypergeom_tail({s.n_ij, s.n_i, s.n_j, s.n});
    return 0.0 - tail.value();
}

/// H(n_ij + 1) / b(n_ij; n_j, p_i). Exactly 0 when n_ij + 1 lies past the
/// support of the tail.
inline double q_ij(const CellStats& s)
{
    if (!(s.p_i > 0.0 && s.p_i < 1.0))
        throw Error(Errc::undefined_quotient, "quotient needs 0 < p_i < 1");
    const LogProb tail = log_hypergeom_tail({s.n_ij + 1, s.n_i, s.n_j, s.n});
    if (tail.is_zero())
        return 0.0;
    const LogProb mass = log_binom_pmf(s.n_ij, s.n_j, s.p_i);
    return std::exp(tail.value() - mass.value());
}

/// Correction that carries TF-ICF to the Fisher weight:
/// n_ij ln p_ij + (n_j - n_ij)(p_i - p_ij) - Q.
inline double phi(const CellStats& s)
{
    if (s.n_ij == 0)
        throw Error(Errc::undefined_phi, "phi needs n_ij >= 1");
    const double nij = static_cast<double>(s.n_ij);
    const double rest = static_cast<double>(s.n_j - s.n_ij);
    return nij * std::log(s.p_ij) + rest * (s.p_i - s.p_ij) - q_ij(s);
}

/// Correction that carries TF-IDF to the Fisher weight on equal-length
/// collections: -n_ij (1 - b_i/d)(1 - p_ij) - Q.
inline double psi(const CellStats& s)
{
    if (s.b_i == 0 || s.b_i > s.d)
        throw Error(Errc::undefined_weight, "psi needs 1 <= b_i <= d");
    const double absent = 1.0 - static_cast<double>(s.b_i) / static_cast<double>(s.d);
    return -static_cast<double>(s.n_ij) * absent * (1.0 - s.p_ij) - q_ij(s);
}

enum class Scheme : unsigned {
    tf = 1u << 0,
    idf = 1u << 1,
    icf = 1u << 2,
    tfidf = 1u << 3,
    tficf = 1u << 4,
    fisher = 1u << 5,
    phi = 1u << 6,
    psi = 1u << 7,
    approximations = 1u << 8,
};

class SchemeSet {
public:
    constexpr SchemeSet() = default;
    constexpr SchemeSet(std::initializer_list<Scheme> list)
    {
        for (Scheme s : list)
            bits_ |= static_cast<unsigned>(s);
    }

    static constexpr SchemeSet all() { return SchemeSet(0x1ffu); }

    /// Comma-separated scheme names, or "all".
    static SchemeSet parse(std::string_view text)
    {
        SchemeSet out;
        std::size_t start = 0;
        while (start <= text.size()) {
            const std::size_t end = std::min(text.find(',', start), text.size());
            const std::string_view name = text.substr(start, end - start);
            if (name == "all")
                out.bits_ = all().bits_;
            else if (auto s = from_name(name))
                out.bits_ |= static_cast<unsigned>(*s);
            else
                throw Error(Errc::parse_error, "unknown scheme '" + std::string(name) + "'");
            start = end + 1;
        }
        return out;
    }

    static std::optional<Scheme> from_name(std::string_view name)
    {
        if (name == "tf") return Scheme::tf;
        if (name == "idf") return Scheme::idf;
        if (name == "icf") return Scheme::icf;
        if (name == "tfidf") return Scheme::tfidf;
        if (name == "tficf") return Scheme::tficf;
        if (name == "fisher") return Scheme::fisher;
        if (name == "phi") return Scheme::phi;
        if (name == "psi") return Scheme::psi;
        if (name == "approximations") return Scheme::approximations;
        return std::nullopt;
    }

    constexpr bool has(Scheme s) const { return (bits_ & static_cast<unsigned>(s)) != 0; }
    constexpr bool empty() const { return bits_ == 0; }

private:
    constexpr explicit SchemeSet(unsigned bits) : bits_(bits) {}
    unsigned bits_ = 0;
};

/// Every weight for one cell. Fields not requested, or undefined for this
/// cell, are empty; `diagnostic` says why for the undefined ones.
struct WeightRecord {
    std::string term;
    std::string doc;
    Count tf = 0;
    std::optional<double> idf;
    std::optional<double> icf;
    std::optional<double> tfidf;
    std::optional<double> tficf;
    std::optional<double> neg_log_p;
    std::optional<double> q;
    std::optional<double> phi;
    std::optional<double> psi;
    std::optional<double> thm1_approx; ///< tficf + phi
    std::optional<double> cor1_approx; ///< tfidf + psi
    std::string diagnostic;
};

namespace detail {

template <class F>
std::optional<double> guarded(F&& f, std::string& diagnostic)
{
    try {
        return f();
    } catch (const Error& e) {
        if (!diagnostic.empty())
            diagnostic += "; ";
        diagnostic += e.what();
        return std::nullopt;
    }
}

} // namespace detail

inline WeightRecord weigh_cell(const CellStats& s, SchemeSet schemes, std::string term = {},
                               std::string doc = {})
{
    WeightRecord r;
    r.term = std::move(term);
    r.doc = std::move(doc);
    r.tf = s.n_ij;
    auto& diag = r.diagnostic;

    const bool approx = schemes.has(Scheme::approximations);
    const bool want_phi = schemes.has(Scheme::phi) || approx;
    const bool want_psi = schemes.has(Scheme::psi) || approx;

    if (schemes.has(Scheme::idf))
        r.idf = detail::guarded([&] { return idf(s); }, diag);
    if (schemes.has(Scheme::icf))
        r.icf = detail::guarded([&] { return icf(s); }, diag);
    std::optional<double> tfidf_v;
    std::optional<double> tficf_v;
    if (schemes.has(Scheme::tfidf) || approx)
        tfidf_v = detail::guarded([&] { return tfidf(s); }, diag);
    if (schemes.has(Scheme::tficf) || approx)
        tficf_v = detail::guarded([&] { return tficf(s); }, diag);
    if (schemes.has(Scheme::tfidf))
        r.tfidf = tfidf_v;
    if (schemes.has(Scheme::tficf))
        r.tficf = tficf_v;
    if (schemes.has(Scheme::fisher))
        r.neg_log_p = detail::guarded([&] { return fisher_weight(s); }, diag);

    if (want_phi || want_psi)
        r.q = detail::guarded([&] { return q_ij(s); }, diag);
    std::optional<double> phi_v;
    std::optional<double> psi_v;
    if (want_phi && r.q)
        phi_v = detail::guarded([&] { return phi(s); }, diag);
    if (want_psi && r.q)
        psi_v = detail::guarded([&] { return psi(s); }, diag);
    if (schemes.has(Scheme::phi))
        r.phi = phi_v;
    if (schemes.has(Scheme::psi))
        r.psi = psi_v;
    if (approx) {
        if (tficf_v && phi_v)
            r.thm1_approx = *tficf_v + *phi_v;
        if (tfidf_v && psi_v)
            r.cor1_approx = *tfidf_v + *psi_v;
    }
    return r;
}

struct WeighOptions {
    SchemeSet schemes = SchemeSet::all();
    /// Also emit cells with n_ij = 0.
    bool include_zero = false;
    /// Worker threads; output order does not depend on it.
    unsigned threads = 1;
};

/// One record per cell, ordered by document index and then term index.
inline std::vector<WeightRecord> weigh_matrix(const TermDocumentMatrix& m, const WeighOptions& opts = {})
{
    std::vector<std::vector<WeightRecord>> per_doc(m.num_docs());
    auto weigh_doc = [&](std::size_t j) {
        auto& out = per_doc[j];
        if (opts.include_zero) {
            out.reserve(m.num_terms());
            for (std::size_t i = 0; i < m.num_terms(); ++i)
                out.push_back(weigh_cell(m.cell_stats(i, j), opts.schemes, m.term(i), m.doc(j)));
        } else {
            const auto col = m.column(j);
            out.reserve(col.size());
            for (const auto& e : col)
                out.push_back(weigh_cell(m.cell_stats(e.term, j), opts.schemes, m.term(e.term), m.doc(j)));
        }
    };

    const std::size_t workers = std::clamp<std::size_t>(opts.threads, 1, std::max<std::size_t>(1, m.num_docs()));
    if (workers == 1) {
        for (std::size_t j = 0; j < m.num_docs(); ++j)
            weigh_doc(j);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t j = w; j < m.num_docs(); j += workers)
                    weigh_doc(j);
            });
    }

    std::vector<WeightRecord> records;
    for (auto& doc : per_doc)
        std::move(doc.begin(), doc.end(), std::back_inserter(records));
    return records;
}

} // namespace fishtf
