// Prints the top Fisher-weighted keywords of each document.
//
//   keywords corpus.jsonl [top_k]

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <map>

#include "fishtf/format.hpp"
#include "fishtf/io.hpp"
#include "fishtf/weights.hpp"

int main(int argc, char** argv)
{
    if (argc < 2) {
        std::cerr << "usage: keywords corpus.jsonl [top_k]\n";
        return 2;
    }
    const std::size_t top_k = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 5;
    try {
        const auto docs = fishtf::io::read_corpus_jsonl(std::filesystem::path(argv[1]));
        const auto matrix = fishtf::ingest_text(docs);
        const auto records =
            fishtf::weigh_matrix(matrix, {.schemes = {fishtf::Scheme::fisher}});

        std::map<std::string, std::vector<const fishtf::WeightRecord*>> by_doc;
        for (const auto& r : records)
            by_doc[r.doc].push_back(&r);
        for (auto& [doc, rs] : by_doc) {
            std::stable_sort(rs.begin(), rs.end(), [](auto* a, auto* b) {
                return a->neg_log_p.value_or(0) > b->neg_log_p.value_or(0);
            });
            std::cout << doc << ':';
            for (std::size_t k = 0; k < std::min(top_k, rs.size()); ++k)
                std::cout << ' ' << rs[k]->term << '(' << fishtf::format_fixed(*rs[k]->neg_log_p, 3) << ')';
            std::cout << '\n';
        }
    } catch (const fishtf::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
