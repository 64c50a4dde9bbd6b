#include "doctest.h"

#include <filesystem>
#include <sstream>

#include "scilink/ingest.hpp"
#include "scilink/resolver.hpp"
#include "scilink/util.hpp"

using namespace scilink;

namespace {

std::vector<PaperRecord> fixture_papers() {
    return ingest::parse_paper_records(
               util::read_file(std::string(SCILINK_FIXTURES) + "/papers.txt"))
        .records;
}

// Render a reference string in the usual "Author. Title. Journal. Year;Vol:Page."
// shape from a paper record.
std::string citation_of(const PaperRecord& p, int year_shift = 0,
                        bool truncate_title = false, bool swap_initials = false,
                        bool drop_journal = false) {
    std::ostringstream out;
    std::string last = p.first_author_lastname.value_or("");
    if (swap_initials) out << "X. " << last << ". ";
    else out << last << " X. ";
    if (truncate_title) {
        auto words = util::split(p.title, ' ');
        size_t keep = (words.size() + 1) / 2 + 1;
        for (size_t i = 0; i < std::min(keep, words.size()); ++i) out << words[i] << " ";
        out << ". ";
    } else {
        out << p.title << " ";
    }
    if (!drop_journal) out << p.journal << ". ";
    out << (p.pub_year + year_shift) << ";" << p.volume.value_or("") << ":"
        << p.first_page.value_or("") << ".";
    return out.str();
}

}  // namespace

TEST_CASE("title_tokens folds, strips punctuation, drops stopwords") {
    auto toks = resolver::title_tokens("Cloning of a bacterial protease gene in E. coli");
    CHECK(toks.count("cloning"));
    CHECK(toks.count("bacterial"));
    CHECK_FALSE(toks.count("of"));
    CHECK_FALSE(toks.count("a"));
    CHECK_FALSE(toks.count("in"));
}

TEST_CASE("paper index candidate generation") {
    auto papers = fixture_papers();
    resolver::PaperIndex index(papers);
    CHECK(index.size() == papers.size());

    auto hits = index.candidates(resolver::title_tokens(papers[0].title));
    bool found = false;
    for (const auto* e : hits)
        if (e->paper_id == papers[0].paper_id) found = true;
    CHECK(found);

    CHECK(index.candidates({"xyzzy"}).empty());

    resolver::PaperIndex empty({});
    CHECK(empty.size() == 0);
    CHECK(empty.candidates({"anything"}).empty());
}

TEST_CASE("perfect match resolves with confidence 1.0") {
    auto papers = fixture_papers();
    resolver::PaperIndex index(papers);
    auto m = resolver::resolve_npr(
        "Miller A. Receptor binding kinetics of labeled antibodies. "
        "Journal of Molecular Biology. 1988;201:445-452.",
        index);
    REQUIRE(m.paper_id.has_value());
    CHECK(*m.paper_id == "9000001");
    CHECK(m.confidence == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("garbage string does not match") {
    resolver::PaperIndex index(fixture_papers());
    auto m = resolver::resolve_npr("XYZZY 1234", index);
    CHECK_FALSE(m.paper_id.has_value());
    m = resolver::resolve_npr("Product catalog, laboratory reagents, 5th edition, 1990.",
                              index);
    CHECK_FALSE(m.paper_id.has_value());
}

TEST_CASE("50-reference perturbation suite") {
    auto papers = fixture_papers();
    REQUIRE(papers.size() == 10);
    resolver::PaperIndex index(papers);

    struct Ref {
        std::string text;
        std::string truth;
    };
    std::vector<Ref> suite;
    for (const auto& p : papers) {
        suite.push_back({citation_of(p), p.paper_id});                     // verbatim
        suite.push_back({citation_of(p, 0, true), p.paper_id});            // truncated title
        suite.push_back({citation_of(p, +1), p.paper_id});                 // off-by-one year
        suite.push_back({citation_of(p, -1, false, true), p.paper_id});    // swapped initials
        suite.push_back({citation_of(p, 0, false, false, true), p.paper_id});  // no journal
    }
    REQUIRE(suite.size() == 50);

    size_t correct = 0, false_accepts = 0;
    for (const auto& ref : suite) {
        auto m = resolver::resolve_npr(ref.text, index, 0.7);
        if (m.paper_id) {
            if (*m.paper_id == ref.truth) ++correct;
            else ++false_accepts;
        }
    }
    CHECK(correct >= 45);  // >= 90%
    CHECK(false_accepts == 0);
}

TEST_CASE("raising the threshold never increases accepted matches") {
    auto papers = fixture_papers();
    resolver::PaperIndex index(papers);
    std::vector<std::string> refs;
    for (const auto& p : papers) {
        refs.push_back(citation_of(p, 0, true));
        refs.push_back(citation_of(p, 0, false, false, true));
    }
    size_t prev = refs.size() + 1;
    for (double threshold : {0.3, 0.5, 0.7, 0.85, 0.95, 1.0}) {
        size_t accepted = 0;
        for (const auto& r : refs)
            if (resolver::resolve_npr(r, index, threshold).paper_id) ++accepted;
        CHECK(accepted <= prev);
        prev = accepted;
    }
}

TEST_CASE("no false accepts on a disjoint corpus") {
    auto papers = fixture_papers();
    // index the first half, cite the second half
    std::vector<PaperRecord> half(papers.begin(), papers.begin() + 5);
    resolver::PaperIndex index(half);
    for (size_t i = 5; i < papers.size(); ++i) {
        auto m = resolver::resolve_npr(citation_of(papers[i]), index, 0.7);
        CAPTURE(papers[i].paper_id);
        CHECK_FALSE(m.paper_id.has_value());
    }
}

TEST_CASE("resolution is deterministic and ties break to the smallest paper id") {
    PaperRecord a, b;
    a.paper_id = "200";
    b.paper_id = "100";
    a.title = b.title = "Identical duplicated record title";
    a.journal = b.journal = "Journal";
    a.pub_year = b.pub_year = 1990;
    resolver::PaperIndex index({a, b});
    auto m1 = resolver::resolve_npr(
        "Identical duplicated record title. Journal. 1990.", index, 0.5);
    auto m2 = resolver::resolve_npr(
        "Identical duplicated record title. Journal. 1990.", index, 0.5);
    REQUIRE(m1.paper_id.has_value());
    CHECK(*m1.paper_id == "100");
    CHECK(m1.paper_id == m2.paper_id);
    CHECK(m1.confidence == m2.confidence);
}

TEST_CASE("resolve_corpus keeps the paper-id/threshold invariant and link order") {
    auto papers = fixture_papers();
    resolver::PaperIndex index(papers);
    PatentRecord patent;
    patent.patent_id = "77";
    patent.npr_strings = {citation_of(papers[0]), "XYZZY 1234", citation_of(papers[1])};
    auto links = resolver::resolve_corpus({patent}, index, 0.7);
    REQUIRE(links.size() == 3);
    CHECK(links[0].npr_index == 0);
    CHECK(links[1].npr_index == 1);
    CHECK(links[2].npr_index == 2);
    CHECK(links[0].accepted());
    CHECK_FALSE(links[1].accepted());
    CHECK(links[1].confidence == 0.0);
    CHECK(links[2].accepted());
    for (const auto& link : links) {
        if (link.paper_id) CHECK(link.confidence >= 0.7);
    }

    std::string path =
        (std::filesystem::temp_directory_path() / "scilink_links.tsv").string();
    resolver::store_links(links, path);
    auto loaded = resolver::load_links(path);
    REQUIRE(loaded.size() == links.size());
    for (size_t i = 0; i < links.size(); ++i) {
        CHECK(loaded[i].patent_id == links[i].patent_id);
        CHECK(loaded[i].paper_id == links[i].paper_id);
        CHECK(loaded[i].confidence == doctest::Approx(links[i].confidence).epsilon(1e-6));
    }
    std::filesystem::remove(path);
}
