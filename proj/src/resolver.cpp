#include "scilink/resolver.hpp"

#include <algorithm>
#include <sstream>

#include "scilink/util.hpp"

namespace scilink::resolver {

namespace {

const std::set<std::string>& stopwords() {
    static const std::set<std::string> kStopwords = {
        "a", "an", "the", "of", "and", "or", "in", "on", "for",
        "with", "to", "by", "from", "at", "is", "as", "its",
    };
    return kStopwords;
}

std::set<std::string> fold_tokens(const std::string& text) {
    std::set<std::string> out;
    for (auto& tok : util::tokenize(text)) {
        if (!stopwords().count(tok)) out.insert(std::move(tok));
    }
    return out;
}

}  // namespace

std::set<std::string> title_tokens(const std::string& text) {
    return fold_tokens(text);
}

PaperIndex::PaperIndex(const std::vector<PaperRecord>& papers) {
    for (const auto& paper : papers) {
        Entry e;
        e.paper_id = paper.paper_id;
        e.title_tokens = title_tokens(paper.title);
        e.journal_folded = util::fold_text(paper.journal);
        e.pub_year = paper.pub_year;
        e.volume = paper.volume.value_or("");
        e.first_page = paper.first_page.value_or("");
        if (paper.first_author_lastname)
            e.lastname_folded = util::fold_text(*paper.first_author_lastname);
        entries_[e.paper_id] = std::move(e);
    }
    for (const auto& [id, e] : entries_) {
        for (const auto& tok : e.title_tokens) token_index_[tok].push_back(&e);
        if (!e.lastname_folded.empty()) lastname_index_[e.lastname_folded].push_back(&e);
    }
}

const PaperIndex::Entry* PaperIndex::entry(const std::string& paper_id) const {
    auto it = entries_.find(paper_id);
    return it == entries_.end() ? nullptr : &it->second;
}

std::vector<const PaperIndex::Entry*> PaperIndex::candidates(
    const std::set<std::string>& query_tokens) const {
    std::set<const Entry*> seen;
    for (const auto& tok : query_tokens) {
        if (auto it = token_index_.find(tok); it != token_index_.end())
            for (const Entry* e : it->second) seen.insert(e);
        if (auto it = lastname_index_.find(tok); it != lastname_index_.end())
            for (const Entry* e : it->second) seen.insert(e);
    }
    std::vector<const Entry*> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end(),
              [](const Entry* a, const Entry* b) { return a->paper_id < b->paper_id; });
    return out;
}

namespace {

double score_candidate(const std::set<std::string>& npr_tokens,
                       const std::vector<long>& npr_numbers,
                       const PaperIndex::Entry& e, const ScoreWeights& w) {
    double score = 0.0;

    // fraction of the paper's title tokens covered by the reference string
    if (!e.title_tokens.empty()) {
        size_t hit = 0;
        for (const auto& tok : e.title_tokens)
            if (npr_tokens.count(tok)) ++hit;
        score += w.title * static_cast<double>(hit) / e.title_tokens.size();
    }

    if (!e.lastname_folded.empty() && npr_tokens.count(e.lastname_folded))
        score += w.author;

    if (!e.journal_folded.empty()) {
        auto jtokens = fold_tokens(e.journal_folded);
        if (!jtokens.empty()) {
            bool all = true;
            for (const auto& tok : jtokens)
                if (!npr_tokens.count(tok)) { all = false; break; }
            if (all) score += w.journal;
        }
    }

    for (long n : npr_numbers) {
        if (std::labs(n - e.pub_year) <= 1) {
            score += w.year;
            break;
        }
    }

    if (!e.volume.empty() && npr_tokens.count(util::fold_text(e.volume)))
        score += w.volume;
    if (!e.first_page.empty() && npr_tokens.count(util::fold_text(e.first_page)))
        score += w.first_page;

    return score;
}

}  // namespace

MatchResult resolve_npr(const std::string& npr_string, const PaperIndex& index,
                        double threshold, const ScoreWeights& weights) {
    MatchResult result;
    std::set<std::string> tokens = fold_tokens(npr_string);
    std::vector<long> numbers;  // plausible year tokens
    for (const auto& tok : tokens) {
        if (tok.size() == 4 && std::isdigit(static_cast<unsigned char>(tok[0]))) {
            if (auto n = util::parse_int(tok); n && *n >= 1800 && *n <= 2100)
                numbers.push_back(*n);
        }
    }

    double best = -1.0;
    const PaperIndex::Entry* best_entry = nullptr;
    for (const PaperIndex::Entry* e : index.candidates(tokens)) {
        double s = score_candidate(tokens, numbers, *e, weights);
        if (s > best) {  // candidates are sorted by paper_id, so ties keep the smallest
            best = s;
            best_entry = e;
        }
    }
    if (best_entry && best >= threshold) {
        result.paper_id = best_entry->paper_id;
        result.confidence = best;
    } else if (best_entry) {
        result.confidence = best;
    }
    return result;
}

std::vector<ResolvedCitation> resolve_corpus(const std::vector<PatentRecord>& patents,
                                             const PaperIndex& index, double threshold,
                                             const ScoreWeights& weights) {
    std::vector<ResolvedCitation> links;
    for (const auto& patent : patents) {
        for (size_t i = 0; i < patent.npr_strings.size(); ++i) {
            MatchResult m = resolve_npr(patent.npr_strings[i], index, threshold, weights);
            ResolvedCitation link;
            link.patent_id = patent.patent_id;
            link.npr_index = static_cast<int>(i);
            link.paper_id = m.paper_id;
            link.confidence = m.paper_id ? m.confidence : 0.0;
            links.push_back(std::move(link));
        }
    }
    return links;
}

void store_links(const std::vector<ResolvedCitation>& links, const std::string& path) {
    std::ostringstream out;
    out << "patent_id\tnpr_index\tpaper_id\tconfidence\n";
    for (const auto& link : links) {
        out << link.patent_id << "\t" << link.npr_index << "\t"
            << (link.paper_id ? *link.paper_id : "-") << "\t"
            << util::format_fixed(link.confidence, 6) << "\n";
    }
    util::write_file(path, out.str());
}

std::vector<ResolvedCitation> load_links(const std::string& path) {
    std::vector<ResolvedCitation> links;
    for (const auto& row : util::read_tsv(path)) {
        if (row.size() < 4 || row[0] == "patent_id") continue;
        ResolvedCitation link;
        link.patent_id = row[0];
        link.npr_index = static_cast<int>(util::parse_int(row[1]).value_or(0));
        if (row[2] != "-") link.paper_id = row[2];
        link.confidence = std::stod(row[3]);
        links.push_back(std::move(link));
    }
    return links;
}

}  // namespace scilink::resolver
