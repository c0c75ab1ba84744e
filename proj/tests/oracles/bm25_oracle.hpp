#pragma once

// From-scratch Okapi BM25 over raw strings. Shares no code with the library:
// tokenization, document frequencies and lengths are recomputed per call.

#include <cctype>
#include <cmath>
#include <string>
#include <vector>

namespace oracle {

inline std::vector<std::string> words(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (c < 128 && std::isalnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

inline std::vector<double> bm25_scores(const std::vector<std::string>& docs, const std::string& query,
                                       double k1 = 1.2, double b = 0.75) {
    std::vector<std::vector<std::string>> toks;
    double total = 0;
    for (const auto& d : docs) {
        toks.push_back(words(d));
        total += static_cast<double>(toks.back().size());
    }
    const double n = static_cast<double>(docs.size());
    const double avgdl = docs.empty() ? 0.0 : total / n;
    std::vector<double> scores(docs.size(), 0.0);
    for (const auto& term : words(query)) {
        double df = 0;
        for (const auto& t : toks) {
            for (const auto& w : t) {
                if (w == term) {
                    df += 1;
                    break;
                }
            }
        }
        const double idf = std::log((n - df + 0.5) / (df + 0.5) + 1.0);
        for (std::size_t i = 0; i < docs.size(); ++i) {
            double tf = 0;
            for (const auto& w : toks[i]) tf += (w == term) ? 1 : 0;
            if (tf == 0) continue;
            const double dl = static_cast<double>(toks[i].size());
            scores[i] += idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * dl / avgdl));
        }
    }
    return scores;
}

}  // namespace oracle
