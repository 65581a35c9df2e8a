// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
//
//   acceptance <test data dir>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "fishtf/cli.hpp"
#include "fishtf/oracle.hpp"
#include "fishtf/verify.hpp"

using namespace fishtf;

namespace {

struct Outcome {
    bool passed;
    std::string detail;
};

int failures = 0;

void criterion(const std::string& id, const std::string& name, double time_limit_s,
               const std::function<Outcome()>& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o{false, {}};
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (time_limit_s > 0 && secs > time_limit_s) {
        o.passed = false;
        o.detail += "; took " + format_fixed(secs, 2) + " s, limit " + format_fixed(time_limit_s, 0) + " s";
    }
    std::cout << (o.passed ? "PASS " : "FAIL ") << id << ' ' << name << ": " << o.detail << " ("
              << format_fixed(secs, 2) << " s)" << std::endl;
    if (!o.passed)
        ++failures;
}

std::string rounded(double v) { return format_fixed(v, 4); }

bool same(double computed, double published) { return rounded(computed) == rounded(published); }

Outcome values_match(const std::vector<verify::TableRow>& rows)
{
    std::size_t ok = 0, total = 0;
    std::string first_bad;
    for (const auto& r : rows)
        for (std::size_t f = 0; f < 4; ++f) {
            ++total;
            if (same(r.values[f], r.published_values[f]) && std::abs(r.values[f] - r.published_values[f]) <= 5e-5)
                ++ok;
            else if (first_bad.empty())
                first_bad = r.section + "/" + r.setting + " " + std::string(verify::formula_label(verify::all_formulas[f]))
                    + " = " + rounded(r.values[f]) + " vs " + rounded(r.published_values[f]);
        }
    return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " values match"
                             + (first_bad.empty() ? "" : "; first mismatch " + first_bad)};
}

} // namespace

int main(int argc, char** argv)
{
    if (argc < 2) {
        std::cerr << "usage: acceptance <test data dir>\n";
        return 2;
    }
    const std::filesystem::path data_dir(argv[1]);

    criterion("AC1", "reference table, six settings", 1.0, [] {
        auto o = values_match(verify::reproduce_synthetic_table());
        const auto rows = verify::reproduce_synthetic_table();
        o.detail += "; e.g. " + rounded(rows[0].values[0]) + ", " + rounded(rows[5].values[0]) + ", "
            + rounded(rows[0].values[1]) + ", " + rounded(rows[5].values[1]) + ", " + rounded(rows[0].values[3])
            + ", " + rounded(rows[1].values[3]);
        return o;
    });

    criterion("AC2", "percentage differences, both tables", 1.0, [] {
        auto rows = verify::reproduce_synthetic_table();
        const auto t4 = verify::reproduce_realistic_table();
        rows.insert(rows.end(), t4.begin(), t4.end());
        std::size_t ok = 0, total = 0;
        for (const auto& r : rows)
            for (std::size_t f = 1; f < 4; ++f) {
                ++total;
                ok += r.deltas[f] > 0.0 && same(r.deltas[f], r.published_deltas[f]);
            }
        return Outcome{ok == total && total == 24,
                       std::to_string(ok) + "/" + std::to_string(total) + " nonzero differences match; e.g. "
                           + rounded(rows[0].deltas[3]) + ", " + rounded(rows[1].deltas[3]) + ", "
                           + rounded(rows[3].deltas[2]) + ", " + rounded(rows[7].deltas[1])};
    });

    criterion("AC3", "real-data table, two settings", 1.0, [] {
        auto o = values_match(verify::reproduce_realistic_table());
        const auto rows = verify::reproduce_realistic_table();
        o.detail += "; -log H = " + rounded(rows[0].values[0]) + " and " + rounded(rows[1].values[0]);
        return o;
    });

    criterion("AC4", "log tail against exact rationals, N <= 60", 30.0, [] {
        std::size_t checked = 0, bad = 0;
        double worst_rel = 0.0, worst_norm = 0.0;
        for (Count N = 0; N <= 60; ++N)
            for (Count K = 0; K <= N; ++K)
                for (Count s = 0; s <= N; ++s) {
                    const auto tails = oracle::exact_tails(K, s, N);
                    long double mass = 0.0L;
                    for (Count k = 0; k <= std::min(K, s); ++k) {
                        mass += std::exp(static_cast<long double>(log_hypergeom_pmf({k, K, s, N}).value()));
                        const double want = oracle::to_double(tails[k]);
                        const double got = log_hypergeom_tail({k, K, s, N}).prob();
                        const double rel = want == 0.0 ? std::abs(got) : std::abs(got - want) / want;
                        worst_rel = std::max(worst_rel, rel);
                        bad += !(rel <= 1e-10);
                        ++checked;
                    }
                    const double norm = static_cast<double>(std::abs(mass - 1.0L));
                    worst_norm = std::max(worst_norm, norm);
                    bad += !(norm <= 1e-12);
                }
        return Outcome{bad == 0, std::to_string(checked) + " tails, worst relative error "
                                     + format_scientific(worst_rel, 2) + ", worst normalization error "
                                     + format_scientific(worst_norm, 2)};
    });

    criterion("AC5", "quotient stays inside (0, 1) on the regime grid", 0.0, [] {
        const auto grid = verify::default_quotient_grid();
        const auto r = verify::quotient_sweep(grid);
        std::size_t positive_d = 0;
        for (const auto& p : r.points)
            positive_d += p.d_ij && *p.d_ij > 0.0;
        return Outcome{r.passed() && grid.size() >= 100 && positive_d == grid.size(),
                       std::to_string(r.points.size() - r.failures) + "/" + std::to_string(r.points.size())
                           + " points, Q in [" + format_scientific(r.min_q, 3) + ", "
                           + format_scientific(r.max_q, 3) + "], D > 0 at " + std::to_string(positive_d)};
    });

    criterion("AC6", "exclusive-term error halves per doubling of d", 5.0, [] {
        const auto r = verify::exclusive_term_convergence(20, 0.2, {100, 200, 400, 800});
        std::string ratios;
        for (const auto& row : r.rows)
            if (row.ratio)
                ratios += (ratios.empty() ? "" : ", ") + format_fixed(*row.ratio, 4);
        return Outcome{r.passed() && r.rows.size() == 4, "ratios " + ratios
                                                             + (r.passed() ? "" : "; " + r.failures.front())};
    });

    criterion("AC7", "equal-length expansions agree", 0.0, [] {
        const std::vector<verify::SyntheticSpec> specs{
            {25, 10, 10, 40}, {100, 25, 8, 100}, {50, 5, 3, 60}, {300, 40, 20, 25}, {10, 1, 1, 2}, {80, 79, 7, 9}};
        double worst = 0.0;
        for (const auto& s : specs)
            worst = std::max(worst, std::abs(verify::equal_length_discrepancy(s)));
        const auto a = verify::build_synthetic(specs[0]).focal_stats();
        const auto b = verify::build_synthetic(specs[1]).focal_stats();
        const std::string pa = rounded(tficf(a) + phi(a)) + "/" + rounded(tfidf(a) + psi(a));
        const std::string pb = rounded(tficf(b) + phi(b)) + "/" + rounded(tfidf(b) + psi(b));
        return Outcome{worst <= 1e-9 && pa == "9.2446/9.2446" && pb == "45.8791/45.8791",
                       std::to_string(specs.size()) + " collections, worst gap " + format_scientific(worst, 2)
                           + "; printed " + pa + ", " + pb};
    });

    criterion("AC8", "hypergeometric-binomial gap halves per doubling of N", 0.0, [] {
        const auto r = verify::binomial_decay_check(0.1, 5, 20, {200, 400, 800, 1600, 3200});
        std::string ratios;
        for (const auto& row : r.rows)
            if (row.ratio)
                ratios += (ratios.empty() ? "" : ", ") + format_fixed(*row.ratio, 4);
        return Outcome{r.passed() && r.rows.size() == 5, "ratios " + ratios};
    });

    criterion("AC9", "tail bound dominates the exact tail, N <= 200", 0.0, [] {
        std::vector<Count> all_small;
        for (Count N = 2; N <= 60; ++N)
            all_small.push_back(N);
        const auto exhaustive = verify::chvatal_dominance_sweep(all_small, 1);
        const auto mid = verify::chvatal_dominance_sweep({100}, 2);
        const auto large = verify::chvatal_dominance_sweep({150, 200}, 3);
        const std::size_t points = exhaustive.points + mid.points + large.points;
        const std::size_t bad = exhaustive.failures.size() + mid.failures.size() + large.failures.size();
        const double margin = std::min({exhaustive.min_margin, mid.min_margin, large.min_margin});
        return Outcome{bad == 0 && points > 0,
                       std::to_string(points) + " points (every point for N <= 60, N = 100, 150, 200 thinned), "
                           + std::to_string(bad) + " violations, smallest margin " + format_scientific(margin, 3)};
    });

    criterion("AC10", "command line end to end", 0.0, [&] {
        std::ostringstream out, err;
        const int rc = cli::run({"weigh", "--input", (data_dir / "fixture.jsonl").string()}, out, err);
        std::ifstream golden_in(data_dir / "fixture_weights.tsv", std::ios::binary);
        std::ostringstream golden;
        golden << golden_in.rdbuf();
        const bool weigh_ok = rc == 0 && !golden.str().empty() && out.str() == golden.str();

        std::ostringstream tout, terr;
        const int table_rc = cli::run({"table"}, tout, terr);
        return Outcome{weigh_ok && table_rc == 0,
                       std::string("weigh ") + (weigh_ok ? "matches golden TSV byte for byte" : "differs from golden TSV")
                           + ", table exit " + std::to_string(table_rc)};
    });

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
