#pragma once

// Numerical checks of how the Fisher weight relates to TF-ICF and TF-IDF:
// reproduction of the published reference tables, the quotient sweep, the
// tail-bound dominance sweep and the convergence harnesses on synthetic
// collections.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fishtf/cell_stats.hpp"
#include "fishtf/corpus.hpp"
#include "fishtf/error.hpp"
#include "fishtf/format.hpp"
#include "fishtf/numerics.hpp"
#include "fishtf/oracle.hpp"
#include "fishtf/weights.hpp"

namespace fishtf::verify {

// ---------------------------------------------------------------------------
// Synthetic collections

/// An idealized collection: d documents of length R; the focal term occurs
/// r times in each of the first b_i documents. One shared filler term takes
/// the remaining capacity.
struct SyntheticSpec {
    Count R = 0;
    Count r = 0;
    Count b_i = 0;
    Count d = 0;

    void validate() const
    {
        if (R == 0 || r == 0 || r > R)
            throw Error(Errc::spec_invalid, "synthetic spec needs 0 < r <= R");
        if (b_i == 0 || b_i > d)
            throw Error(Errc::spec_invalid, "synthetic spec needs 1 <= b_i <= d");
    }
};

struct Collection {
    TermDocumentMatrix matrix;
    std::size_t focal_term = 0;
    std::size_t focal_doc = 0;

    CellStats focal_stats() const { return matrix.cell_stats(focal_term, focal_doc); }
};

inline std::string doc_name(Count j)
{
    std::string s = std::to_string(j);
    return "doc" + std::string(s.size() < 6 ? 6 - s.size() : 0, '0') + s;
}

inline Collection build_synthetic(const SyntheticSpec& spec)
{
    spec.validate();
    std::vector<CountRow> rows;
    rows.reserve(2 * spec.d);
    for (Count j = 0; j < spec.d; ++j) {
        const bool has_focal = j < spec.b_i;
        const std::string doc = doc_name(j);
        if (has_focal)
            rows.push_back({"focal", doc, static_cast<std::int64_t>(spec.r)});
        const Count filler = has_focal ? spec.R - spec.r : spec.R;
        if (filler > 0)
            rows.push_back({"filler", doc, static_cast<std::int64_t>(filler)});
    }
    Collection c{ingest_counts(rows), 0, 0};
    c.focal_term = *c.matrix.find_term("focal");
    c.focal_doc = *c.matrix.find_doc(doc_name(0));
    return c;
}

/// Totals of a single cell and its collection, in the order the reference
/// tables list them.
struct TableParams {
    Count n = 0;
    Count n_i = 0;
    Count b_i = 0;
    Count n_j = 0;
    Count n_ij = 0;
    Count d = 0;

    CellStats stats() const { return CellStats::make(n_ij, n_i, n_j, n, b_i, d); }
    friend bool operator==(const TableParams&, const TableParams&) = default;
};

namespace detail {

// Splits `total` into `parts` near-equal positive shares.
inline std::vector<Count> spread(Count total, Count parts)
{
    std::vector<Count> out(parts, parts ? total / parts : 0);
    for (Count k = 0; k < (parts ? total % parts : 0); ++k)
        out[k] += 1;
    return out;
}

} // namespace detail

/// A concrete matrix whose focal cell has exactly the given totals. The
/// focal term's remaining occurrences are spread over b_i - 1 further
/// documents; one filler term pads every document to the required lengths.
inline Collection embed_cell(const TableParams& p)
{
    (void)p.stats();
    if (p.n_ij == 0 || p.b_i == 0)
        throw Error(Errc::spec_invalid, "embedded cell needs n_ij >= 1 and b_i >= 1");
    const Count other_term = p.n_i - p.n_ij;
    const Count other_docs = p.d - 1;
    const Count other_with_term = p.b_i - 1;
    if (other_term < other_with_term || (other_with_term == 0 && other_term > 0))
        throw Error(Errc::spec_invalid, "n_i - n_ij cannot be spread over b_i - 1 documents");
    const Count other_mass = p.n - p.n_j;
    if (other_docs == 0 && other_mass > 0)
        throw Error(Errc::spec_invalid, "a single-document collection needs n = n_j");
    const Count filler = other_mass - other_term;
    if (filler < other_docs - other_with_term)
        throw Error(Errc::spec_invalid, "not enough filler mass for the documents without the term");

    std::vector<CountRow> rows;
    rows.push_back({"focal", "focal_doc", static_cast<std::int64_t>(p.n_ij)});
    if (p.n_j > p.n_ij)
        rows.push_back({"filler", "focal_doc", static_cast<std::int64_t>(p.n_j - p.n_ij)});

    const auto term_share = detail::spread(other_term, other_with_term);
    // Documents without the term get one filler each up front; the rest of
    // the filler is spread over all other documents.
    const auto filler_share = detail::spread(filler - (other_docs - other_with_term), other_docs);
    for (Count k = 0; k < other_docs; ++k) {
        const std::string doc = doc_name(k + 1);
        if (k < other_with_term)
            rows.push_back({"focal", doc, static_cast<std::int64_t>(term_share[k])});
        const Count pad = filler_share[k] + (k < other_with_term ? 0 : 1);
        if (pad > 0)
            rows.push_back({"filler", doc, static_cast<std::int64_t>(pad)});
    }
    Collection c{ingest_counts(rows), 0, 0};
    c.focal_term = *c.matrix.find_term("focal");
    c.focal_doc = *c.matrix.find_doc("focal_doc");
    return c;
}

// ---------------------------------------------------------------------------
// Reference tables

enum class Formula { neg_log_p, tficf_phi, tfidf_psi, tfidf };

inline constexpr std::array<Formula, 4> all_formulas{Formula::neg_log_p, Formula::tficf_phi,
                                                     Formula::tfidf_psi, Formula::tfidf};

inline constexpr std::string_view formula_label(Formula f)
{
    switch (f) {
    case Formula::neg_log_p: return "-log H_ij";
    case Formula::tficf_phi: return "TF-ICF+Phi";
    case Formula::tfidf_psi: return "TF-IDF+Psi";
    case Formula::tfidf: return "TF-IDF";
    }
    return "?";
}

inline constexpr std::string_view formula_key(Formula f)
{
    switch (f) {
    case Formula::neg_log_p: return "neg_log_p";
    case Formula::tficf_phi: return "tficf_phi";
    case Formula::tfidf_psi: return "tfidf_psi";
    case Formula::tfidf: return "tfidf";
    }
    return "?";
}

/// One parameter setting of a reference table: four formula values and the
/// absolute percentage difference of each from -log H, measured relative to
/// the formula value.
struct TableRow {
    std::string table;   ///< "synthetic" or "realistic"
    std::string section; ///< "small n", "large n" or "real data"
    std::string setting; ///< column label
    TableParams params;
    std::array<double, 4> values{};
    std::array<double, 4> deltas{};
    std::array<double, 4> published_values{};
    std::array<double, 4> published_deltas{};
};

inline double abs_pct_delta(double reference, double formula)
{
    return std::abs(reference - formula) / std::abs(formula) * 100.0;
}

inline void evaluate_row(TableRow& row)
{
    const CellStats s = row.params.stats();
    const double h = fisher_weight(s);
    const double tfidf_v = tfidf(s);
    row.values = {h, tficf(s) + phi(s), tfidf_v + psi(s), tfidf_v};
    row.deltas[0] = 0.0;
    for (std::size_t f = 1; f < 4; ++f)
        row.deltas[f] = abs_pct_delta(h, row.values[f]);
}

namespace detail {

inline TableRow make_row(std::string table, std::string section, std::string setting, TableParams p,
                         std::array<double, 4> values, std::array<double, 4> deltas)
{
    TableRow row{std::move(table), std::move(section), std::move(setting), p, {}, {}, values, deltas};
    evaluate_row(row);
    return row;
}

} // namespace detail

/// Three regimes at two collection sizes.
inline std::vector<TableRow> reproduce_synthetic_table()
{
    using detail::make_row;
    return {
        make_row("synthetic", "small n", "general", {1000, 150, 4, 100, 25, 20},
                 {5.5429, 4.7111, 24.6764, 40.2359}, {0, 17.6554, 77.5378, 86.2241}),
        make_row("synthetic", "small n", "equal length", {1000, 100, 10, 25, 10, 40},
                 {9.7407, 9.2446, 9.2446, 13.8629}, {0, 5.3662, 5.3662, 29.7354}),
        make_row("synthetic", "small n", "exclusive", {1000, 160, 8, 20, 20, 50},
                 {37.6993, 36.6516, 36.6516, 36.6516}, {0, 2.8584, 2.8584, 2.8584}),
        make_row("synthetic", "large n", "general", {10000, 200, 20, 75, 15, 75},
                 {24.8971, 23.6898, 10.9773, 19.8263}, {0, 5.0964, 126.8048, 25.5758}),
        make_row("synthetic", "large n", "equal length", {10000, 200, 8, 100, 25, 100},
                 {46.7698, 45.8791, 45.8791, 63.1432}, {0, 1.9414, 1.9414, 25.9306}),
        make_row("synthetic", "large n", "exclusive", {10000, 1200, 15, 80, 80, 125},
                 {171.9977, 169.6211, 169.6211, 169.6211}, {0, 1.4012, 1.4012, 1.4012}),
    };
}

/// Two settings closer to real text, outside the asymptotic regimes.
inline std::vector<TableRow> reproduce_realistic_table()
{
    using detail::make_row;
    return {
        make_row("realistic", "real data", "Case I", {10000, 125, 12, 75, 7, 175},
                 {10.1385, 8.4774, 12.7487, 18.7592}, {0, 19.5938, 20.4740, 45.9544}),
        make_row("realistic", "real data", "Case II", {12500, 6, 3, 80, 2, 200},
                 {7.4240, 5.9860, 6.4716, 8.3994}, {0, 24.0226, 14.7178, 11.6125}),
    };
}

struct Mismatch {
    std::string table;
    std::string setting;
    std::string section;
    Formula formula;
    bool is_delta;
    std::string computed;
    std::string published;

    std::string describe() const
    {
        return table + " [" + section + " / " + setting + "] " + std::string(formula_label(formula))
            + (is_delta ? " |Delta%|" : " value") + ": computed " + computed + ", published " + published;
    }
};

/// Cells whose 4-decimal rendering differs from the published number.
inline std::vector<Mismatch> compare_with_published(const std::vector<TableRow>& rows)
{
    std::vector<Mismatch> out;
    for (const auto& row : rows)
        for (std::size_t f = 0; f < 4; ++f) {
            const auto cv = format_fixed(row.values[f], 4);
            const auto pv = format_fixed(row.published_values[f], 4);
            if (cv != pv)
                out.push_back({row.table, row.setting, row.section, all_formulas[f], false, cv, pv});
            const auto cd = format_fixed(row.deltas[f], 4);
            const auto pd = format_fixed(row.published_deltas[f], 4);
            if (cd != pd)
                out.push_back({row.table, row.setting, row.section, all_formulas[f], true, cd, pd});
        }
    return out;
}

/// Layout mirroring the reference tables: one block per section, two columns
/// (result and |Delta%|) per setting.
inline std::string render_table_text(std::string_view title, const std::vector<TableRow>& rows)
{
    std::string out(title);
    out += '\n';
    std::size_t start = 0;
    while (start < rows.size()) {
        std::size_t end = start;
        while (end < rows.size() && rows[end].section == rows[start].section)
            ++end;
        out += "\n  " + rows[start].section + "\n";

        std::vector<std::string> settings{""}, line1{""}, line2{""}, line3{""}, header{"Formula"};
        for (std::size_t r = start; r < end; ++r) {
            const auto& p = rows[r].params;
            settings.insert(settings.end(), {rows[r].setting, ""});
            line1.insert(line1.end(), {"n=" + std::to_string(p.n), "n_j=" + std::to_string(p.n_j)});
            line2.insert(line2.end(), {"n_i=" + std::to_string(p.n_i), "n_ij=" + std::to_string(p.n_ij)});
            line3.insert(line3.end(), {"b_i=" + std::to_string(p.b_i), "d=" + std::to_string(p.d)});
            header.insert(header.end(), {"Result", "|Delta(%)|"});
        }
        TextTable t(settings);
        t.add(line1);
        t.add(line2);
        t.add(line3);
        t.add(header);
        for (std::size_t f = 0; f < 4; ++f) {
            std::vector<std::string> cells{std::string(formula_label(all_formulas[f]))};
            for (std::size_t r = start; r < end; ++r) {
                cells.push_back(format_fixed(rows[r].values[f], 4));
                cells.push_back(format_fixed(rows[r].deltas[f], 4));
            }
            t.add(cells);
        }
        out += t.render("  ");
        start = end;
    }
    return out;
}

inline std::string table_csv_header() { return "table,section,setting,n,n_i,b_i,n_j,n_ij,d,formula,value,abs_delta_pct\n"; }

inline std::string render_table_csv(const std::vector<TableRow>& rows)
{
    std::string out;
    for (const auto& row : rows) {
        const auto& p = row.params;
        for (std::size_t f = 0; f < 4; ++f) {
            out += row.table + ',' + row.section + ',' + row.setting + ',' + std::to_string(p.n) + ','
                + std::to_string(p.n_i) + ',' + std::to_string(p.b_i) + ',' + std::to_string(p.n_j) + ','
                + std::to_string(p.n_ij) + ',' + std::to_string(p.d) + ','
                + std::string(formula_key(all_formulas[f])) + ',' + format_fixed(row.values[f], 4) + ','
                + format_fixed(row.deltas[f], 4) + '\n';
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Quotient terms

/// (1/n_j) ln b(n_ij; n_j, p_i), evaluated exactly.
inline double w_binomial(const CellStats& s)
{
    if (!(s.p_i > 0.0 && s.p_i < 1.0))
        throw Error(Errc::invalid_probability, "W_b needs 0 < p_i < 1");
    return log_binom_pmf(s.n_ij, s.n_j, s.p_i).value() / static_cast<double>(s.n_j);
}

/// (1/n_j) times the log tail bound on H(n_ij + 1).
inline double w_hypergeom_bound(const CellStats& s)
{
    return chvatal_log_bound(s) / static_cast<double>(s.n_j);
}

/// A (collection, document, term) point for the quotient sweep.
struct GridPoint {
    Count n = 0;
    Count n_i = 0;
    Count n_j = 0;
    Count n_ij = 0;

    friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

/// Concrete bounds standing in for "p_i small; n_j, n_ij and n_j - n_ij
/// large". Returns the violated condition, or nothing when the point is inside.
inline std::optional<std::string> quotient_regime_violation(const GridPoint& g)
{
    if (g.n == 0 || g.n_j == 0 || g.n_j > g.n || g.n_i > g.n || g.n_ij > g.n_j)
        return "not a valid cell";
    const double p_i = static_cast<double>(g.n_i) / static_cast<double>(g.n);
    const double p_ij = static_cast<double>(g.n_ij) / static_cast<double>(g.n_j);
    if (g.n_i == 0) return "n_i = 0";
    if (p_i > 0.01) return "p_i > 0.01";
    if (g.n_j < 200) return "n_j < 200";
    if (g.n_ij < 20) return "n_ij < 20";
    if (g.n_j - g.n_ij < 20) return "n_j - n_ij < 20";
    if (p_i * 10.0 > p_ij) return "p_i > p_ij / 10";
    // The quotient is a ratio of tails; it is zero, not in (0, 1), when the
    // term never occurs outside the document.
    if (g.n_i <= g.n_ij) return "n_i <= n_ij";
    if (g.n_i - g.n_ij > g.n - g.n_j) return "n_i - n_ij > n - n_j";
    return std::nullopt;
}

inline std::vector<GridPoint> default_quotient_grid()
{
    std::vector<GridPoint> grid;
    for (Count n : {100'000ULL, 1'000'000ULL, 10'000'000ULL})
        for (Count n_i : {100ULL, 300ULL, 1'000ULL, 3'000ULL, 10'000ULL})
            for (Count n_j : {200ULL, 400ULL, 800ULL, 1'600ULL})
                for (Count n_ij : {20ULL, 40ULL, 80ULL, 160ULL, 320ULL}) {
                    const GridPoint g{n, n_i, n_j, n_ij};
                    if (!quotient_regime_violation(g))
                        grid.push_back(g);
                }
    return grid;
}

struct QuotientPoint {
    GridPoint point;
    std::optional<double> q;
    std::optional<double> d_ij; ///< -(1/n_j) ln Q
    std::optional<double> w_b;
    std::optional<double> w_h;
    bool passed = false;
    std::string note;
};

struct QuotientReport {
    std::vector<QuotientPoint> points;
    double min_q = std::numeric_limits<double>::infinity();
    double max_q = -std::numeric_limits<double>::infinity();
    std::size_t failures = 0;

    bool passed() const { return failures == 0 && !points.empty(); }
};

/// Evaluates Q and D at every point and checks 0 < Q < 1. Points outside the
/// regime are reported as failures.
inline QuotientReport quotient_sweep(const std::vector<GridPoint>& grid)
{
    QuotientReport report;
    for (const auto& g : grid) {
        QuotientPoint lp{g, {}, {}, {}, {}, false, {}};
        try {
            const auto s = CellStats::make(g.n_ij, g.n_i, g.n_j, g.n, 1, 1);
            const double q = q_ij(s);
            lp.q = q;
            lp.d_ij = -std::log(q) / static_cast<double>(g.n_j);
            lp.w_b = w_binomial(s);
            if (s.p_check < 1.0 && s.p_check >= s.p_i)
                lp.w_h = w_hypergeom_bound(s);
            lp.passed = q > 0.0 && q < 1.0;
            if (!lp.passed)
                lp.note = "Q outside (0, 1)";
            report.min_q = std::min(report.min_q, q);
            report.max_q = std::max(report.max_q, q);
        } catch (const Error& e) {
            lp.note = e.what();
        }
        if (auto why = quotient_regime_violation(g)) {
            lp.passed = false;
            lp.note = lp.note.empty() ? "outside regime: " + *why : lp.note + "; outside regime: " + *why;
        }
        if (!lp.passed)
            ++report.failures;
        report.points.push_back(std::move(lp));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Convergence harnesses

struct ConvergenceRow {
    Count d = 0;
    Count b_i = 0;
    double neg_log_p = 0.0;
    double tfidf = 0.0;
    double error = 0.0;
    std::optional<double> ratio; ///< e_{d/2} / e_d when d/2 precedes this row
};

struct ConvergenceReport {
    Count R = 0;
    double beta = 0.0;
    std::vector<ConvergenceRow> rows;
    std::vector<std::string> failures;

    bool passed() const { return failures.empty(); }
};

/// Exclusive-term collections with b_i/d fixed at `beta`: the term fills each
/// of its b_i documents completely. Checks that |fisher - tfidf| falls
/// strictly with d and halves per doubling once d >= 100.
inline ConvergenceReport exclusive_term_convergence(Count R, double beta, const std::vector<Count>& ds,
                                   double ratio_lo = 1.8, double ratio_hi = 2.2)
{
    if (ds.empty())
        throw Error(Errc::spec_invalid, "no document counts given");
    ConvergenceReport report;
    report.R = R;
    report.beta = beta;
    for (Count d : ds) {
        const double bd = beta * static_cast<double>(d);
        const double rounded = std::round(bd);
        if (std::abs(bd - rounded) > 1e-9 || rounded < 1.0 || rounded > static_cast<double>(d))
            throw Error(Errc::spec_invalid,
                        "beta * d must be an integer in [1, d] (d = " + std::to_string(d) + ")");
        const Collection c = build_synthetic({R, R, static_cast<Count>(rounded), d});
        const CellStats s = c.focal_stats();
        ConvergenceRow row;
        row.d = d;
        row.b_i = s.b_i;
        row.neg_log_p = fisher_weight(s);
        row.tfidf = tfidf(s);
        row.error = std::abs(row.neg_log_p - row.tfidf);

        if (s.p_i < 1.0 && q_ij(s) != 0.0)
            report.failures.push_back("d=" + std::to_string(d) + ": quotient does not vanish");
        if (log_choose(s.n_j, s.n_ij) != 0.0)
            report.failures.push_back("d=" + std::to_string(d) + ": ln C(n_j, n_ij) does not vanish");

        if (!report.rows.empty()) {
            const ConvergenceRow& prev = report.rows.back();
            const bool degenerate = prev.error == 0.0 && row.error == 0.0;
            if (!degenerate && !(row.error < prev.error))
                report.failures.push_back("error does not decrease from d=" + std::to_string(prev.d)
                                          + " to d=" + std::to_string(d));
            if (d == 2 * prev.d && row.error > 0.0) {
                row.ratio = prev.error / row.error;
                if (prev.d >= 100 && !(*row.ratio >= ratio_lo && *row.ratio <= ratio_hi))
                    report.failures.push_back("halving ratio " + format_fixed(*row.ratio, 4) + " at d="
                                              + std::to_string(d) + " outside [" + format_fixed(ratio_lo, 1)
                                              + ", " + format_fixed(ratio_hi, 1) + "]");
            }
        }
        report.rows.push_back(row);
    }
    return report;
}

struct DecayRow {
    Count N = 0;
    Count K = 0;
    double gap = 0.0;
    std::optional<double> ratio; ///< gap at N/2 over gap at N
};

struct DecayReport {
    double p_i = 0.0;
    Count k = 0;
    Count s = 0;
    std::vector<DecayRow> rows;
    std::vector<std::string> failures;

    bool passed() const { return failures.empty(); }
};

/// |h(k; p_i N, s, N) - b(k; s, p_i)| for each N.
inline double pmf_gap(double p_i, Count k, Count s, Count N)
{
    const Count K = static_cast<Count>(std::llround(p_i * static_cast<double>(N)));
    const LogProb h = log_hypergeom_pmf({k, K, s, N});
    const LogProb b = log_binom_pmf(k, s, p_i);
    if (h.is_zero() && b.is_zero())
        return 0.0;
    if (h.is_zero() || b.is_zero())
        return std::abs(h.prob() - b.prob());
    return b.prob() * std::abs(std::expm1(h.value() - b.value()));
}

/// Checks that the hypergeometric-binomial PMF gap halves (ratio within
/// [ratio_lo, ratio_hi]) whenever N doubles.
inline DecayReport binomial_decay_check(double p_i, Count k, Count s, const std::vector<Count>& Ns,
                                        double ratio_lo = 1.6, double ratio_hi = 2.4)
{
    if (!(p_i > 0.0 && p_i < 1.0))
        throw Error(Errc::spec_invalid, "p_i must lie in (0, 1)");
    if (Ns.empty())
        throw Error(Errc::spec_invalid, "no population sizes given");
    DecayReport report;
    report.p_i = p_i;
    report.k = k;
    report.s = s;
    for (Count N : Ns) {
        const double K = p_i * static_cast<double>(N);
        if (std::abs(K - std::round(K)) > 1e-9 || s > N)
            throw Error(Errc::spec_invalid,
                        "p_i * N must be an integer and s <= N (N = " + std::to_string(N) + ")");
        DecayRow row;
        row.N = N;
        row.K = static_cast<Count>(std::llround(K));
        row.gap = pmf_gap(p_i, k, s, N);
        if (!report.rows.empty() && N == 2 * report.rows.back().N && row.gap > 0.0) {
            row.ratio = report.rows.back().gap / row.gap;
            if (!(*row.ratio >= ratio_lo && *row.ratio <= ratio_hi))
                report.failures.push_back("gap ratio " + format_fixed(*row.ratio, 4) + " at N="
                                          + std::to_string(N) + " outside [" + format_fixed(ratio_lo, 1)
                                          + ", " + format_fixed(ratio_hi, 1) + "]");
        }
        report.rows.push_back(row);
    }
    return report;
}

/// tficf + phi minus tfidf + psi on an equal-length collection. The two
/// expansions coincide there, so this is rounding noise.
inline double equal_length_discrepancy(const SyntheticSpec& spec)
{
    const CellStats s = build_synthetic(spec).focal_stats();
    return (tficf(s) + phi(s)) - (tfidf(s) + psi(s));
}

struct DominanceReport {
    std::size_t points = 0;
    std::vector<std::string> failures;
    double min_margin = std::numeric_limits<double>::infinity(); ///< bound minus exact log tail

    bool passed() const { return failures.empty() && points > 0; }
};

/// Checks the log tail bound against the exact log tail at n_ij + 1 for every
/// (n, n_i, n_j, n_ij) with n in `populations` where p_i <= p_check < 1.
/// `step` thins the (n_i, n_j) grid for the larger populations.
inline DominanceReport chvatal_dominance_sweep(const std::vector<Count>& populations, Count step = 1)
{
    DominanceReport report;
    step = std::max<Count>(step, 1);
    for (Count N : populations)
        for (Count K = 1; K < N; K += step)
            for (Count s = 1; s <= N; s += step) {
                const auto tails = oracle::exact_tails(K, s, N);
                for (Count k = 0; k <= std::min(K, s); ++k) {
                    if (K - k > N - s)
                        continue;
                    const CellStats cs = CellStats::make(k, K, s, N, 1, 1);
                    if (!(cs.p_i <= cs.p_check && cs.p_check < 1.0))
                        continue;
                    ++report.points;
                    const double bound = chvatal_log_bound(cs);
                    const double exact = oracle::log_of(tails[k + 1]);
                    const double margin = bound - exact;
                    report.min_margin = std::min(report.min_margin, margin);
                    if (!(bound >= exact))
                        report.failures.push_back("N=" + std::to_string(N) + " K=" + std::to_string(K)
                                                  + " s=" + std::to_string(s) + " k=" + std::to_string(k));
                }
            }
    return report;
}

// ---------------------------------------------------------------------------
// Report rendering

inline std::string render_quotient(const QuotientReport& r)
{
    TextTable t({"n", "n_i", "n_j", "n_ij", "Q", "D", "W_b", "W_H", "status"});
    for (const auto& p : r.points)
        t.add({std::to_string(p.point.n), std::to_string(p.point.n_i), std::to_string(p.point.n_j),
               std::to_string(p.point.n_ij), p.q ? format_scientific(*p.q, 4) : "NA", format_optional(p.d_ij, 6),
               format_optional(p.w_b, 6), format_optional(p.w_h, 6),
               p.passed ? "ok" : "FAIL " + p.note});
    std::string out = "quotient sweep: " + std::to_string(r.points.size()) + " grid points, "
        + std::to_string(r.failures) + " failures";
    if (r.min_q <= r.max_q)
        out += ", Q in [" + format_scientific(r.min_q, 4) + ", " + format_scientific(r.max_q, 4) + "]";
    return out + "\n" + t.render("  ");
}

inline std::string render_convergence(const ConvergenceReport& r)
{
    TextTable t({"d", "b_i", "-log H", "TF-IDF", "error", "halving ratio"});
    for (const auto& row : r.rows)
        t.add({std::to_string(row.d), std::to_string(row.b_i), format_fixed(row.neg_log_p, 6),
               format_fixed(row.tfidf, 6), format_fixed(row.error, 6), format_optional(row.ratio, 4, "-")});
    std::string out = "exclusive-term convergence: R=" + std::to_string(r.R) + ", b_i/d="
        + format_fixed(r.beta, 4) + " held fixed as d grows\n" + t.render("  ");
    for (const auto& f : r.failures)
        out += "  FAIL " + f + "\n";
    return out;
}

inline std::string render_decay(const DecayReport& r)
{
    TextTable t({"N", "K", "pmf gap", "halving ratio"});
    for (const auto& row : r.rows)
        t.add({std::to_string(row.N), std::to_string(row.K), format_scientific(row.gap, 6),
               format_optional(row.ratio, 4, "-")});
    std::string out = "binomial limit: p_i=" + format_fixed(r.p_i, 4) + ", k=" + std::to_string(r.k)
        + ", s=" + std::to_string(r.s) + "\n" + t.render("  ");
    for (const auto& f : r.failures)
        out += "  FAIL " + f + "\n";
    return out;
}

inline std::string quotient_csv(const QuotientReport& r)
{
    std::string out = "n,n_i,n_j,n_ij,q,d_ij,w_b,w_h,passed\n";
    for (const auto& p : r.points)
        out += std::to_string(p.point.n) + ',' + std::to_string(p.point.n_i) + ','
            + std::to_string(p.point.n_j) + ',' + std::to_string(p.point.n_ij) + ','
            + (p.q ? format_scientific(*p.q, 10) : "NA") + ',' + format_optional(p.d_ij, 10) + ','
            + format_optional(p.w_b, 10) + ',' + format_optional(p.w_h, 10) + ',' + (p.passed ? "1" : "0") + '\n';
    return out;
}

inline std::string convergence_csv(const ConvergenceReport& r)
{
    std::string out = "R,beta,d,b_i,neg_log_p,tfidf,error,ratio\n";
    for (const auto& row : r.rows)
        out += std::to_string(r.R) + ',' + format_fixed(r.beta, 6) + ',' + std::to_string(row.d) + ','
            + std::to_string(row.b_i) + ',' + format_fixed(row.neg_log_p, 10) + ',' + format_fixed(row.tfidf, 10)
            + ',' + format_fixed(row.error, 10) + ',' + format_optional(row.ratio, 10) + '\n';
    return out;
}

inline std::string decay_csv(const DecayReport& r)
{
    std::string out = "p_i,k,s,N,K,gap,ratio\n";
    for (const auto& row : r.rows)
        out += format_fixed(r.p_i, 6) + ',' + std::to_string(r.k) + ',' + std::to_string(r.s) + ','
            + std::to_string(row.N) + ',' + std::to_string(row.K) + ',' + format_scientific(row.gap, 10) + ','
            + format_optional(row.ratio, 10) + '\n';
    return out;
}

} // namespace fishtf::verify
