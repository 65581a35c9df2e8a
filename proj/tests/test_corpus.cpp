#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "fishtf/corpus.hpp"
#include "fishtf/io.hpp"
#include "fishtf/verify.hpp"

using namespace fishtf;

namespace {

template <class F>
Errc error_code_of(F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no fishtf::Error thrown";
    return Errc::io_error;
}

void expect_invariants(const TermDocumentMatrix& m)
{
    ASSERT_GE(m.num_terms(), 1u);
    ASSERT_GE(m.num_docs(), 1u);
    ASSERT_GE(m.total(), 1u);
    std::vector<Count> row(m.num_terms(), 0), freq(m.num_terms(), 0);
    Count by_docs = 0;
    for (std::size_t j = 0; j < m.num_docs(); ++j) {
        Count col = 0;
        for (const auto& e : m.column(j)) {
            EXPECT_GT(e.count, 0u);
            row[e.term] += e.count;
            freq[e.term] += 1;
            col += e.count;
        }
        EXPECT_EQ(col, m.doc_total(j));
        by_docs += col;
    }
    EXPECT_EQ(by_docs, m.total());
    Count by_terms = 0;
    for (std::size_t i = 0; i < m.num_terms(); ++i) {
        EXPECT_EQ(row[i], m.term_total(i));
        EXPECT_EQ(freq[i], m.doc_freq(i));
        EXPECT_GE(m.doc_freq(i), 1u);
        EXPECT_LE(m.doc_freq(i), m.num_docs());
        by_terms += row[i];
    }
    EXPECT_EQ(by_terms, m.total());
    for (std::size_t i = 0; i < m.num_terms(); ++i)
        for (std::size_t j = 0; j < m.num_docs(); ++j) {
            const auto s = m.cell_stats(i, j);
            EXPECT_LE(s.n_ij, std::min(s.n_i, s.n_j));
            EXPECT_LE(s.b_i, s.d);
            EXPECT_EQ(s.p_check, s.p_ij + 1.0 / static_cast<double>(s.n_j));
        }
}

TermDocumentMatrix fixture()
{
    return ingest_text(io::read_corpus_jsonl(std::filesystem::path(FISHTF_TEST_DATA) / "fixture.jsonl"));
}

} // namespace

TEST(Tokenize, LowercasesAndSplitsOnNonAlphanumerics)
{
    EXPECT_EQ(tokenize("The the THE"), (std::vector<std::string>{"the", "the", "the"}));
    EXPECT_EQ(tokenize("  a--b,,c3 "), (std::vector<std::string>{"a", "b", "c3"}));
    EXPECT_EQ(tokenize("ÉCOLE Straße"), (std::vector<std::string>{"école", "straße"}));
    EXPECT_EQ(tokenize("日本語 text"), (std::vector<std::string>{"日本語", "text"}));
    EXPECT_EQ(tokenize("ab\xff" "cd"), (std::vector<std::string>{"ab", "cd"}));
    EXPECT_TRUE(tokenize("... !!! ---").empty());
}

TEST(Tokenize, StopwordsAndCasePreservation)
{
    TokenizeOptions opts;
    opts.stopwords = {"the"};
    EXPECT_EQ(tokenize("The cat", opts), (std::vector<std::string>{"cat"}));
    opts.lowercase = false;
    EXPECT_EQ(tokenize("The cat the", opts), (std::vector<std::string>{"The", "cat"}));
}

TEST(IngestText, CountsASingleDocument)
{
    const std::vector<Document> docs{{"d1", "a b a"}};
    const auto m = ingest_text(docs);
    EXPECT_EQ(m.num_terms(), 2u);
    EXPECT_EQ(m.num_docs(), 1u);
    EXPECT_EQ(m.total(), 3u);
    EXPECT_EQ(m.count(*m.find_term("a"), 0), 2u);
    EXPECT_EQ(m.count(*m.find_term("b"), 0), 1u);
}

TEST(IngestText, DocumentFrequency)
{
    const std::vector<Document> docs{{"d1", "x"}, {"d2", "x"}};
    const auto m = ingest_text(docs);
    const auto x = *m.find_term("x");
    EXPECT_EQ(m.doc_freq(x), 2u);
    EXPECT_EQ(m.term_total(x), 2u);
    EXPECT_EQ(m.num_docs(), 2u);
}

TEST(IngestText, FoldsCase)
{
    const std::vector<Document> docs{{"d1", "The the THE"}};
    const auto m = ingest_text(docs);
    ASSERT_EQ(m.num_terms(), 1u);
    EXPECT_EQ(m.term(0), "the");
    EXPECT_EQ(m.count(0, 0), 3u);
}

TEST(IngestText, Errors)
{
    EXPECT_EQ(error_code_of([] { ingest_text(std::vector<Document>{}); }), Errc::empty_collection);
    EXPECT_EQ(error_code_of([] { ingest_text(std::vector<Document>{{"a", "..."}, {"b", ""}}); }),
              Errc::empty_collection);
    EXPECT_EQ(error_code_of([] { ingest_text(std::vector<Document>{{"a", "x"}, {"a", "y"}}); }),
              Errc::duplicate_doc_id);
}

TEST(IngestText, DropsDocumentsWithoutTokens)
{
    const auto m = ingest_text(std::vector<Document>{{"a", "x y"}, {"b", "?!"}, {"c", "y"}});
    EXPECT_EQ(m.docs(), (std::vector<std::string>{"a", "c"}));
    EXPECT_FALSE(m.find_doc("b"));
}

TEST(IngestText, DeterministicAndOrderFree)
{
    const auto a = ingest_text(std::vector<Document>{{"d", "b a c a"}});
    const auto b = ingest_text(std::vector<Document>{{"d", "b a c a"}});
    EXPECT_EQ(a, b);
    const auto c = ingest_text(std::vector<Document>{{"d", "a a b c"}});
    EXPECT_EQ(c.term_total(*c.find_term("a")), 2u);
    EXPECT_EQ(c.total(), a.total());
}

TEST(IngestCounts, SingleCell)
{
    const auto m = ingest_counts(std::vector<CountRow>{{"t", "d", 5}});
    EXPECT_EQ(m.total(), 5u);
    EXPECT_EQ(m.num_terms(), 1u);
    EXPECT_EQ(m.num_docs(), 1u);
    EXPECT_EQ(m.doc_freq(0), 1u);
}

TEST(IngestCounts, ZeroRowsContributeNothing)
{
    const auto m = ingest_counts(std::vector<CountRow>{{"t", "d", 0}, {"u", "d", 2}, {"u", "e", 0}});
    EXPECT_FALSE(m.find_term("t"));
    EXPECT_FALSE(m.find_doc("e"));
    EXPECT_EQ(m.doc_freq(*m.find_term("u")), 1u);
    EXPECT_EQ(error_code_of([] { ingest_counts(std::vector<CountRow>{{"t", "d", 0}}); }),
              Errc::empty_collection);
}

TEST(IngestCounts, Errors)
{
    EXPECT_EQ(error_code_of([] { ingest_counts(std::vector<CountRow>{{"t", "d", -1}}); }), Errc::negative_count);
    EXPECT_EQ(error_code_of([] { ingest_counts(std::vector<CountRow>{{"t", "d", 1}, {"t", "d", 2}}); }),
              Errc::duplicate_cell);
    EXPECT_EQ(error_code_of([] { ingest_counts(std::vector<CountRow>{{"t", "d", 0}, {"t", "d", 2}}); }),
              Errc::duplicate_cell);
}

TEST(IngestCounts, MatchesTextIngestion)
{
    const auto text = fixture();
    const auto counts = ingest_counts(export_counts(text));
    EXPECT_EQ(text, counts);
}

TEST(IngestCounts, PaddedReferenceCell)
{
    const auto c = verify::embed_cell({.n = 1000, .n_i = 150, .b_i = 4, .n_j = 100, .n_ij = 25, .d = 20});
    const auto s = c.focal_stats();
    EXPECT_EQ(s.n, 1000u);
    EXPECT_EQ(s.n_i, 150u);
    EXPECT_EQ(s.b_i, 4u);
    EXPECT_EQ(s.n_j, 100u);
    EXPECT_EQ(s.n_ij, 25u);
    EXPECT_EQ(s.d, 20u);
    expect_invariants(c.matrix);

    // Same matrix when the rows pass through the CSV format.
    std::stringstream csv;
    io::write_counts_csv(csv, export_counts(c.matrix));
    EXPECT_EQ(ingest_counts(io::read_counts_csv(csv)), c.matrix);
}

TEST(CellStats, Proportions)
{
    const auto s = CellStats::make(25, 150, 100, 1000, 4, 20);
    EXPECT_EQ(s.p_ij, 0.25);
    EXPECT_EQ(s.p_check, 0.26);
    EXPECT_EQ(s.p_i, 0.15);
    EXPECT_EQ(s.p_tilde, 125.0 / 900.0);
    EXPECT_NEAR(s.p_tilde, 0.138889, 1e-6);
}

TEST(CellStats, WholeCollectionDocument)
{
    const auto s = CellStats::make(3, 3, 5, 5, 1, 1);
    EXPECT_EQ(s.p_tilde, 0.0);
    EXPECT_EQ(s.p_i, 0.6);
}

TEST(CellStats, RejectsInconsistentCounts)
{
    EXPECT_EQ(error_code_of([] { CellStats::make(5, 4, 10, 100, 1, 1); }), Errc::invalid_params);
    EXPECT_EQ(error_code_of([] { CellStats::make(1, 4, 0, 100, 1, 1); }), Errc::invalid_params);
    EXPECT_EQ(error_code_of([] { CellStats::make(1, 4, 10, 100, 3, 2); }), Errc::invalid_params);
    EXPECT_EQ(error_code_of([] { CellStats::make(0, 95, 10, 100, 1, 2); }), Errc::invalid_params);
}

TEST(Matrix, InvariantsOnFixtures)
{
    expect_invariants(fixture());
    expect_invariants(verify::build_synthetic({25, 10, 10, 40}).matrix);
    expect_invariants(verify::embed_cell({.n = 12500, .n_i = 6, .b_i = 3, .n_j = 80, .n_ij = 2, .d = 50}).matrix);
}

TEST(Matrix, CellStatsIsPure)
{
    const auto m = fixture();
    const auto i = *m.find_term("quantum");
    const auto j = *m.find_doc("d3");
    const auto first = m.cell_stats(i, j);
    for (int k = 0; k < 5; ++k)
        EXPECT_EQ(m.cell_stats(i, j), first);
    EXPECT_EQ(first.n_ij, 2u);
    EXPECT_EQ(first.n_i, 2u);
    EXPECT_EQ(first.b_i, 1u);
}

TEST(Matrix, IndexOutOfRange)
{
    const auto m = fixture();
    EXPECT_EQ(error_code_of([&] { m.cell_stats(m.num_terms(), 0); }), Errc::index_out_of_range);
    EXPECT_EQ(error_code_of([&] { m.cell_stats(0, m.num_docs()); }), Errc::index_out_of_range);
    EXPECT_EQ(error_code_of([&] { m.term(1000); }), Errc::index_out_of_range);
}

TEST(Matrix, ExportRoundTripIsIdentity)
{
    for (const auto& m : {fixture(), verify::build_synthetic({100, 25, 8, 100}).matrix}) {
        const auto rows = export_counts(m);
        const auto again = ingest_counts(rows);
        EXPECT_EQ(again, m);
        EXPECT_EQ(export_counts(again), rows);
    }
}

TEST(Matrix, ShuffledRowsGiveSameCounts)
{
    const auto m = fixture();
    auto rows = export_counts(m);
    std::reverse(rows.begin(), rows.end());
    const auto r = ingest_counts(rows);
    EXPECT_EQ(r.total(), m.total());
    for (const auto& row : rows)
        EXPECT_EQ(r.count(*r.find_term(row.term), *r.find_doc(row.doc)), static_cast<Count>(row.count));
}

TEST(CountsCsv, ReadsQuotedFieldsAndCrlf)
{
    std::istringstream in("term,doc,count\r\n\"a,b\",d1,3\r\n\"say \"\"hi\"\"\",d2,1\r\n\r\n");
    const auto rows = io::read_counts_csv(in);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], (CountRow{"a,b", "d1", 3}));
    EXPECT_EQ(rows[1], (CountRow{"say \"hi\"", "d2", 1}));

    std::ostringstream out;
    io::write_counts_csv(out, rows);
    std::istringstream back(out.str());
    EXPECT_EQ(io::read_counts_csv(back), rows);
}

TEST(CountsCsv, ErrorsNameTheLine)
{
    auto fails = [](const std::string& text) {
        std::istringstream in(text);
        try {
            io::read_counts_csv(in);
        } catch (const Error& e) {
            return std::make_pair(e.code(), std::string(e.what()));
        }
        return std::make_pair(Errc::io_error, std::string("no error"));
    };
    EXPECT_EQ(fails("term,count\n").first, Errc::parse_error);
    const auto [code, msg] = fails("term,doc,count\nt,d,1\nt,d\n");
    EXPECT_EQ(code, Errc::parse_error);
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
    EXPECT_EQ(fails("term,doc,count\nt,d,x\n").first, Errc::parse_error);
    EXPECT_EQ(fails("term,doc,count\nt,d,-2\n").first, Errc::negative_count);
    EXPECT_EQ(fails("term,doc,count\n\"t,d,1\n").first, Errc::parse_error);
}

TEST(CorpusJsonl, ReadsAndReportsErrors)
{
    std::istringstream good("{\"id\": \"a\", \"text\": \"x y\"}\n\n{\"text\": \"z\", \"id\": \"b\"}\n");
    const auto docs = io::read_corpus_jsonl(good);
    ASSERT_EQ(docs.size(), 2u);
    EXPECT_EQ(docs[1].id, "b");
    EXPECT_EQ(docs[1].text, "z");

    std::istringstream bad("{\"id\": \"a\", \"text\": \"x\"}\n{\"id\": 3, \"text\": \"x\"}\n");
    try {
        io::read_corpus_jsonl(bad);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::parse_error);
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
    std::istringstream broken("{\"id\": \"a\"\n");
    EXPECT_THROW(io::read_corpus_jsonl(broken), Error);
}

TEST(Files, MissingInputIsAnIoError)
{
    EXPECT_EQ(error_code_of([] { io::read_counts_csv(std::filesystem::path("/nonexistent/x.csv")); }),
              Errc::io_error);
    EXPECT_EQ(error_code_of([] { io::read_text_dir("/nonexistent/dir"); }), Errc::io_error);
}
