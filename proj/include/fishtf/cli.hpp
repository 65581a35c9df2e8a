#pragma once

// Command-line frontend. `run` is the whole program; tools/fishtf.cpp only
// forwards argv to it, which keeps the commands testable in-process.
//
// Exit status: 0 success, 1 I/O failure, 2 invalid input or arguments,
// 3 a verification check failed.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fishtf/corpus.hpp"
#include "fishtf/error.hpp"
#include "fishtf/format.hpp"
#include "fishtf/io.hpp"
#include "fishtf/verify.hpp"
#include "fishtf/weights.hpp"

namespace fishtf::cli {

enum Exit : int { exit_ok = 0, exit_io = 1, exit_invalid = 2, exit_verification = 3 };

inline constexpr int value_decimals = 6;

inline constexpr std::string_view weigh_header =
    "term\tdoc\ttf\tidf\ticf\ttfidf\ttficf\tneg_log_p\tq\tphi\tpsi\tthm1_approx\tcor1_approx";

struct InputConfig {
    std::string path;
    std::string format; // jsonl | counts | textdir; empty means infer
    std::string stopwords;
};

inline TermDocumentMatrix load_matrix(const InputConfig& cfg)
{
    namespace fs = std::filesystem;
    std::string format = cfg.format;
    if (format.empty()) {
        const fs::path p(cfg.path);
        std::error_code ec;
        if (fs::is_directory(p, ec))
            format = "textdir";
        else if (p.extension() == ".csv")
            format = "counts";
        else if (p.extension() == ".jsonl" || p.extension() == ".json")
            format = "jsonl";
        else
            throw Error(Errc::parse_error, "cannot infer input format of '" + cfg.path + "'; pass --format");
    }
    if (format == "counts") {
        if (!cfg.stopwords.empty())
            throw Error(Errc::parse_error, "--stopwords applies to text input only");
        return ingest_counts(io::read_counts_csv(fs::path(cfg.path)));
    }
    TokenizeOptions opts;
    if (!cfg.stopwords.empty())
        opts.stopwords = io::read_stopwords(cfg.stopwords);
    const auto docs = format == "jsonl" ? io::read_corpus_jsonl(fs::path(cfg.path)) : io::read_text_dir(cfg.path);
    return ingest_text(docs, opts);
}

inline std::string render_weights_tsv(const std::vector<WeightRecord>& records)
{
    std::string out(weigh_header);
    out += '\n';
    for (const auto& r : records) {
        out += r.term + '\t' + r.doc + '\t' + std::to_string(r.tf);
        for (const auto* v : {&r.idf, &r.icf, &r.tfidf, &r.tficf, &r.neg_log_p, &r.q, &r.phi, &r.psi,
                              &r.thm1_approx, &r.cor1_approx}) {
            out += '\t';
            out += format_optional(*v, value_decimals);
        }
        out += '\n';
    }
    return out;
}

inline const std::map<std::string, Scheme, std::less<>>& rank_schemes()
{
    static const std::map<std::string, Scheme, std::less<>> names{
        {"tf", Scheme::tf},       {"idf", Scheme::idf},       {"icf", Scheme::icf},
        {"tfidf", Scheme::tfidf}, {"tficf", Scheme::tficf},   {"fisher", Scheme::fisher},
        {"phi", Scheme::phi},     {"psi", Scheme::psi},       {"thm1_approx", Scheme::approximations},
        {"cor1_approx", Scheme::approximations},
    };
    return names;
}

inline std::optional<double> score_of(const WeightRecord& r, std::string_view scheme)
{
    if (scheme == "tf") return static_cast<double>(r.tf);
    if (scheme == "idf") return r.idf;
    if (scheme == "icf") return r.icf;
    if (scheme == "tfidf") return r.tfidf;
    if (scheme == "tficf") return r.tficf;
    if (scheme == "fisher") return r.neg_log_p;
    if (scheme == "phi") return r.phi;
    if (scheme == "psi") return r.psi;
    if (scheme == "thm1_approx") return r.thm1_approx;
    if (scheme == "cor1_approx") return r.cor1_approx;
    return std::nullopt;
}

/// Top `top_k` terms of each document by `scheme`, highest first; ties go to
/// the lexicographically smaller term.
inline std::string render_ranking_tsv(const std::vector<WeightRecord>& records, std::string_view scheme,
                                      std::size_t top_k)
{
    std::string out = "doc\trank\tterm\tscore\n";
    std::size_t start = 0;
    while (start < records.size()) {
        std::size_t end = start;
        while (end < records.size() && records[end].doc == records[start].doc)
            ++end;
        std::vector<std::pair<double, const std::string*>> scored;
        for (std::size_t k = start; k < end; ++k)
            if (auto s = score_of(records[k], scheme))
                scored.emplace_back(*s, &records[k].term);
        std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
            return a.first != b.first ? a.first > b.first : *a.second < *b.second;
        });
        for (std::size_t r = 0; r < std::min(top_k, scored.size()); ++r)
            out += records[start].doc + '\t' + std::to_string(r + 1) + '\t' + *scored[r].second + '\t'
                + format_fixed(scored[r].first, value_decimals) + '\n';
        start = end;
    }
    return out;
}

namespace detail {

inline int emit(const std::string& data, const std::string& path, std::ostream& out, std::ostream& err)
{
    if (path.empty() || path == "-") {
        out << data;
        out.flush();
        return exit_ok;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << data)) {
        err << "fishtf: cannot write '" << path << "'\n";
        return exit_io;
    }
    return exit_ok;
}

inline int report_error(const Error& e, std::ostream& err)
{
    err << "fishtf: " << e.what() << '\n';
    return e.code() == Errc::io_error ? exit_io : exit_invalid;
}

inline std::vector<verify::GridPoint> read_grid(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::io_error, "cannot open grid file '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || io::detail::strip_cr(line) != "n,n_i,n_j,n_ij")
        throw Error(Errc::parse_error, "grid file line 1: expected header 'n,n_i,n_j,n_ij'");
    std::vector<verify::GridPoint> grid;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = io::detail::strip_cr(std::move(line));
        if (line.empty())
            continue;
        const auto fields = io::detail::split_csv(line, lineno);
        std::array<Count, 4> v{};
        if (fields.size() != 4)
            throw Error(Errc::parse_error, "grid file line " + std::to_string(lineno) + ": expected 4 fields");
        for (std::size_t k = 0; k < 4; ++k) {
            auto [end, ec] = std::from_chars(fields[k].data(), fields[k].data() + fields[k].size(), v[k]);
            if (ec != std::errc{} || end != fields[k].data() + fields[k].size())
                throw Error(Errc::parse_error, "grid file line " + std::to_string(lineno) + ": '" + fields[k]
                                                   + "' is not a nonnegative integer");
        }
        grid.push_back({v[0], v[1], v[2], v[3]});
    }
    return grid;
}

} // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Term weighting with TF-IDF, TF-ICF and the Fisher exact test weight"};
    app.name("fishtf");
    app.require_subcommand(1);

    InputConfig input;
    std::string schemes = "all";
    std::string output;
    std::size_t top_k = 0;
    bool include_zero = false;
    unsigned threads = 1;

    auto add_input = [&](CLI::App* cmd) {
        cmd->add_option("-i,--input", input.path, "Input file or directory")->required();
        cmd->add_option("-f,--format", input.format, "Input format (inferred from the path when omitted)")
            ->check(CLI::IsMember({"jsonl", "counts", "textdir"}));
        cmd->add_option("--stopwords", input.stopwords, "File with one stopword per line");
        cmd->add_option("-o,--output", output, "Output file (default: standard output)");
        cmd->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 256u));
    };

    auto* weigh = app.add_subcommand("weigh", "Every weight for every nonzero cell, as TSV");
    add_input(weigh);
    weigh->add_option("-s,--schemes", schemes,
                      "Comma-separated subset of tf,idf,icf,tfidf,tficf,fisher,phi,psi,approximations");
    weigh->add_flag("--include-zero", include_zero, "Also emit cells with zero count");

    auto* rank = app.add_subcommand("rank", "Top terms per document by one scheme, as TSV");
    add_input(rank);
    rank->add_option("-s,--schemes", schemes, "Exactly one scheme")->required();
    rank->add_option("-k,--top-k", top_k, "Terms per document")->required()->check(CLI::PositiveNumber);

    std::string table_format = "text";
    std::string table_csv;
    std::vector<std::string> perturb;
    auto* table = app.add_subcommand("table", "Reproduce the reference tables and compare them");
    table->add_option("--format", table_format, "Output layout")->check(CLI::IsMember({"text", "csv"}));
    table->add_option("-o,--output", output, "Output file (default: standard output)");
    table->add_option("--csv", table_csv, "Also write the machine-readable CSV here");
    table->add_option("--perturb", perturb, "Test hook: ROW:FORMULA adds 1e-3 to one computed value")
        ->group("");

    std::string grid_file;
    Count exclusive_R = 20;
    double exclusive_beta = 0.2;
    std::vector<Count> exclusive_d{50, 100, 200, 400, 800};
    double binom_p = 0.1;
    Count binom_k = 5;
    Count binom_s = 20;
    std::vector<Count> binom_N{200, 400, 800, 1600};
    std::string sweep_format = "text";
    auto* sweep = app.add_subcommand("sweep", "Run the quotient, convergence and binomial-limit checks");
    sweep->add_option("--grid-file", grid_file, "CSV grid (n,n_i,n_j,n_ij) for the quotient sweep");
    sweep->add_option("--exclusive-R", exclusive_R, "Document length for the exclusive-term collections")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--exclusive-beta", exclusive_beta, "Fraction b_i/d of documents holding the term")
        ->check(CLI::Range(0.0, 1.0));
    sweep->add_option("--exclusive-d", exclusive_d, "Document counts")->delimiter(',');
    sweep->add_option("--binom-p", binom_p, "Term proportion p_i")->check(CLI::Range(0.0, 1.0));
    sweep->add_option("--binom-k", binom_k, "Observed count");
    sweep->add_option("--binom-s", binom_s, "Document length");
    sweep->add_option("--binom-N", binom_N, "Collection sizes")->delimiter(',');
    sweep->add_option("--format", sweep_format, "Report layout")->check(CLI::IsMember({"text", "csv"}));
    sweep->add_option("-o,--output", output, "Output file (default: standard output)");

    std::vector<std::string> argv_store{"fishtf"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store)
        argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_invalid;
    }

    try {
        if (weigh->parsed() || rank->parsed()) {
            WeighOptions opts;
            opts.threads = threads;
            std::string rank_scheme;
            if (weigh->parsed()) {
                opts.schemes = SchemeSet::parse(schemes);
                opts.include_zero = include_zero;
            } else {
                auto it = rank_schemes().find(schemes);
                if (it == rank_schemes().end())
                    throw Error(Errc::parse_error, "rank needs exactly one scheme, got '" + schemes + "'");
                rank_scheme = schemes;
                opts.schemes = SchemeSet{it->second};
            }
            const auto matrix = load_matrix(input);
            const auto records = weigh_matrix(matrix, opts);
            std::size_t undefined = 0;
            for (const auto& r : records)
                undefined += r.diagnostic.empty() ? 0 : 1;
            if (undefined > 0)
                err << "fishtf: " << undefined << " cell(s) with undefined weights reported as NA\n";
            const std::string data =
                weigh->parsed() ? render_weights_tsv(records) : render_ranking_tsv(records, rank_scheme, top_k);
            return detail::emit(data, output, out, err);
        }

        if (table->parsed()) {
            auto rows = verify::reproduce_synthetic_table();
            const std::size_t synthetic_rows = rows.size();
            auto t4 = verify::reproduce_realistic_table();
            rows.insert(rows.end(), t4.begin(), t4.end());
            for (const auto& spec : perturb) {
                const auto colon = spec.find(':');
                std::size_t index = 0;
                const auto key = colon == std::string::npos ? std::string() : spec.substr(colon + 1);
                auto [end, ec] = std::from_chars(spec.data(), spec.data() + std::min(colon, spec.size()), index);
                auto f = std::find_if(verify::all_formulas.begin(), verify::all_formulas.end(),
                                      [&](verify::Formula x) { return verify::formula_key(x) == key; });
                if (ec != std::errc{} || index >= rows.size() || f == verify::all_formulas.end())
                    throw Error(Errc::parse_error, "--perturb expects ROW:FORMULA, got '" + spec + "'");
                rows[index].values[static_cast<std::size_t>(f - verify::all_formulas.begin())] += 1e-3;
            }

            const std::vector<verify::TableRow> part3(rows.begin(), rows.begin() + synthetic_rows);
            const std::vector<verify::TableRow> part4(rows.begin() + synthetic_rows, rows.end());
            const std::string csv = verify::table_csv_header() + verify::render_table_csv(rows);
            std::string data;
            if (table_format == "csv") {
                data = csv;
            } else {
                data = verify::render_table_text("Fisher weight against TF-ICF/TF-IDF approximations", part3)
                    + '\n' + verify::render_table_text("Settings closer to real text", part4);
            }
            if (int rc = detail::emit(data, output, out, err); rc != exit_ok)
                return rc;
            if (!table_csv.empty())
                if (int rc = detail::emit(csv, table_csv, out, err); rc != exit_ok)
                    return rc;

            const auto mismatches = verify::compare_with_published(rows);
            if (!mismatches.empty()) {
                for (const auto& m : mismatches)
                    err << "fishtf: mismatch " << m.describe() << '\n';
                return exit_verification;
            }
            err << "fishtf: all " << rows.size() * 4 << " values and " << rows.size() * 3
                << " differences match the published tables\n";
            return exit_ok;
        }

        if (sweep->parsed()) {
            const auto grid = grid_file.empty() ? verify::default_quotient_grid() : detail::read_grid(grid_file);
            const auto quotient = verify::quotient_sweep(grid);
            const auto convergence = verify::exclusive_term_convergence(exclusive_R, exclusive_beta, exclusive_d);
            const auto decay = verify::binomial_decay_check(binom_p, binom_k, binom_s, binom_N);

            std::string data;
            if (sweep_format == "csv")
                data = verify::quotient_csv(quotient) + '\n' + verify::convergence_csv(convergence) + '\n' + verify::decay_csv(decay);
            else
                data = verify::render_quotient(quotient) + '\n' + verify::render_convergence(convergence) + '\n'
                    + verify::render_decay(decay);
            if (int rc = detail::emit(data, output, out, err); rc != exit_ok)
                return rc;

            const bool ok = quotient.passed() && convergence.passed() && decay.passed();
            err << "fishtf: sweep " << (ok ? "passed" : "FAILED") << ": quotient "
                << quotient.points.size() - quotient.failures << "/" << quotient.points.size() << " points ok, convergence "
                << (convergence.passed() ? "ok" : "failed") << ", binomial limit " << (decay.passed() ? "ok" : "failed")
                << '\n';
            if (!ok) {
                for (const auto& p : quotient.points)
                    if (!p.passed)
                        err << "fishtf: quotient point n=" << p.point.n << " n_i=" << p.point.n_i
                            << " n_j=" << p.point.n_j << " n_ij=" << p.point.n_ij << ": " << p.note << '\n';
                for (const auto& f : convergence.failures)
                    err << "fishtf: convergence: " << f << '\n';
                for (const auto& f : decay.failures)
                    err << "fishtf: binomial limit: " << f << '\n';
                return exit_verification;
            }
            return exit_ok;
        }
    } catch (const Error& e) {
        return detail::report_error(e, err);
    } catch (const std::filesystem::filesystem_error& e) {
        err << "fishtf: " << e.what() << '\n';
        return exit_io;
    }
    return exit_invalid;
}

} // namespace fishtf::cli
