#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "scilink/records.hpp"

namespace scilink::resolver {

struct ScoreWeights {
    double title = 0.5;
    double author = 0.15;
    double journal = 0.15;
    double year = 0.10;      // matches within +/- 1
    double volume = 0.05;
    double first_page = 0.05;
};

/// Inverted indexes over normalized paper fields; immutable after build.
class PaperIndex {
public:
    explicit PaperIndex(const std::vector<PaperRecord>& papers);

    struct Entry {
        std::string paper_id;
        std::set<std::string> title_tokens;
        std::string journal_folded;
        int pub_year = 0;
        std::string volume;
        std::string first_page;
        std::string lastname_folded;
    };

    const Entry* entry(const std::string& paper_id) const;
    std::vector<const Entry*> candidates(const std::set<std::string>& query_tokens) const;
    size_t size() const { return entries_.size(); }

private:
    std::map<std::string, Entry> entries_;
    std::map<std::string, std::vector<const Entry*>> token_index_;
    std::map<std::string, std::vector<const Entry*>> lastname_index_;
};

struct MatchResult {
    std::optional<std::string> paper_id;
    double confidence = 0.0;
};

/// Score one raw NPR string against the index. Best candidate is accepted
/// iff its score reaches the threshold; ties break to the smallest paper_id.
MatchResult resolve_npr(const std::string& npr_string, const PaperIndex& index,
                        double threshold = 0.7,
                        const ScoreWeights& weights = ScoreWeights{});

std::vector<ResolvedCitation> resolve_corpus(const std::vector<PatentRecord>& patents,
                                             const PaperIndex& index,
                                             double threshold = 0.7,
                                             const ScoreWeights& weights = ScoreWeights{});

void store_links(const std::vector<ResolvedCitation>& links, const std::string& path);
std::vector<ResolvedCitation> load_links(const std::string& path);

// Title normalization used by the index and the scorer: lowercase,
// ASCII-fold, strip punctuation, drop stopwords.
std::set<std::string> title_tokens(const std::string& text);

}  // namespace scilink::resolver
