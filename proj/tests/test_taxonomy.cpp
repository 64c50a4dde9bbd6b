#include "doctest.h"

#include <random>

#include "scilink/taxonomy.hpp"

using namespace scilink;
using taxonomy::AssigneeType;

namespace {

std::string data(const std::string& name) {
    return std::string(SCILINK_DATA) + "/" + name;
}

PatentRecord with_inventors(std::vector<std::optional<std::string>> countries) {
    PatentRecord p;
    p.patent_id = "1";
    int i = 0;
    for (auto& c : countries) {
        InventorRecord inv;
        inv.name = "Inventor " + std::to_string(++i);
        inv.country = c;
        p.inventors.push_back(inv);
    }
    return p;
}

taxonomy::ClassifierConfig default_config() {
    taxonomy::ClassifierConfig cfg;
    cfg.known_names = taxonomy::load_name_table(data("assignee_names.tsv"));
    cfg.role_codes = taxonomy::load_role_map(data("role_map.tsv"));
    cfg.keyword_rules = taxonomy::load_keyword_rules(data("assignee_keywords.tsv"));
    return cfg;
}

PatentRecord with_assignee(const std::string& name,
                           std::optional<std::string> role = std::nullopt) {
    PatentRecord p;
    p.patent_id = "1";
    AssigneeRecord a;
    a.name = name;
    a.role_code = role;
    p.assignees.push_back(a);
    return p;
}

}  // namespace

TEST_CASE("country_fractions implements fractional counting") {
    std::map<std::string, std::string> no_fallback;

    auto cw = taxonomy::country_fractions(with_inventors({"US", "US", "JP"}), no_fallback);
    REQUIRE(cw.known());
    CHECK(cw.weights.at("US") == doctest::Approx(2.0 / 3).epsilon(1e-12));
    CHECK(cw.weights.at("JP") == doctest::Approx(1.0 / 3).epsilon(1e-12));

    cw = taxonomy::country_fractions(with_inventors({"CA"}), no_fallback);
    CHECK(cw.weights.at("CA") == doctest::Approx(1.0));

    // unknown residences are excluded from the denominator
    cw = taxonomy::country_fractions(
        with_inventors({"US", std::nullopt, std::nullopt}), no_fallback);
    REQUIRE(cw.weights.size() == 1);
    CHECK(cw.weights.at("US") == doctest::Approx(1.0));

    // all unknown: fallback table, then unknown
    auto p = with_inventors({std::nullopt});
    CHECK_FALSE(taxonomy::country_fractions(p, no_fallback).known());
    std::map<std::string, std::string> fallback = {{"1", "DE"}};
    cw = taxonomy::country_fractions(p, fallback);
    CHECK(cw.weights.at("DE") == doctest::Approx(1.0));
}

TEST_CASE("country weights sum to 1 over randomized inventor lists") {
    std::mt19937 rng(20240817);
    const char* codes[] = {"US", "JP", "DE", "FR", "GB", "CA", "CH"};
    std::map<std::string, std::string> no_fallback;
    for (int trial = 0; trial < 1000; ++trial) {
        size_t n = 1 + rng() % 12;
        std::vector<std::optional<std::string>> countries;
        bool any_known = false;
        for (size_t i = 0; i < n; ++i) {
            if (rng() % 4 == 0) {
                countries.push_back(std::nullopt);
            } else {
                countries.push_back(codes[rng() % 7]);
                any_known = true;
            }
        }
        auto cw = taxonomy::country_fractions(with_inventors(countries), no_fallback);
        if (!any_known) {
            CHECK_FALSE(cw.known());
            continue;
        }
        double sum = 0.0;
        for (const auto& [cc, w] : cw.weights) {
            CHECK(w > 0.0);
            sum += w;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("aggregated fractional counts sum to attributable patent count") {
    std::mt19937 rng(99);
    const char* codes[] = {"US", "JP", "DE"};
    std::map<std::string, std::string> no_fallback;
    double total = 0.0;
    int attributable = 0;
    for (int i = 0; i < 200; ++i) {
        std::vector<std::optional<std::string>> countries;
        for (size_t k = 0, n = 1 + rng() % 5; k < n; ++k) {
            if (rng() % 3 == 0) countries.push_back(std::nullopt);
            else countries.push_back(codes[rng() % 3]);
        }
        auto cw = taxonomy::country_fractions(with_inventors(countries), no_fallback);
        if (cw.known()) ++attributable;
        for (const auto& [cc, w] : cw.weights) total += w;
    }
    CHECK(total == doctest::Approx(attributable).epsilon(1e-9));
}

TEST_CASE("first_inventor_country") {
    std::map<std::string, std::string> no_fallback;
    CHECK(taxonomy::first_inventor_country(with_inventors({"JP", "US"}), no_fallback) ==
          "JP");
    std::map<std::string, std::string> fallback = {{"1", "US"}};
    CHECK(taxonomy::first_inventor_country(with_inventors({std::nullopt}), fallback) ==
          "US");
    PatentRecord empty;
    empty.patent_id = "1";
    CHECK_FALSE(taxonomy::first_inventor_country(empty, no_fallback).has_value());
}

TEST_CASE("assignee cascade stages") {
    auto cfg = default_config();

    SUBCASE("stage 1: exact normalized name match") {
        auto cls = taxonomy::classify_assignee(
            with_assignee("Massachusetts  Institute of Technology."), cfg);
        CHECK(cls.type == AssigneeType::university);
        CHECK(cls.stage == 1);
        CHECK_FALSE(cls.low_confidence);
    }
    SUBCASE("stage 2: role code beats keywords when no exact name") {
        // "06" maps to government even though the name has a corporate keyword
        auto cls = taxonomy::classify_assignee(
            with_assignee("Federal Armaments Corp", "06"), cfg);
        CHECK(cls.type == AssigneeType::government);
        CHECK(cls.stage == 2);
    }
    SUBCASE("stage 3: assignee equal to an applicant name is an individual") {
        auto p = with_assignee("John A. Smith");
        p.applicant_names = {"John A. Smith"};
        auto cls = taxonomy::classify_assignee(p, cfg);
        CHECK(cls.type == AssigneeType::individual);
        CHECK(cls.stage == 3);
    }
    SUBCASE("stage 4: keyword rules") {
        auto cls = taxonomy::classify_assignee(
            with_assignee("Trustees of Boston University"), cfg);
        CHECK(cls.type == AssigneeType::university);
        CHECK(cls.stage == 4);

        cls = taxonomy::classify_assignee(with_assignee("Acme Pharma Ltd."), cfg);
        CHECK(cls.type == AssigneeType::corporation);
        CHECK(cls.stage == 4);

        cls = taxonomy::classify_assignee(with_assignee("Scripps Research Institute"), cfg);
        CHECK(cls.type == AssigneeType::institute);

        cls = taxonomy::classify_assignee(with_assignee("St. Mary Hospital"), cfg);
        CHECK(cls.type == AssigneeType::hospital);
    }
    SUBCASE("stage 5: no assignee") {
        PatentRecord p;
        p.patent_id = "1";
        auto cls = taxonomy::classify_assignee(p, cfg);
        CHECK(cls.type == AssigneeType::unassigned);
        CHECK(cls.stage == 5);
    }
    SUBCASE("cascade exhausted defaults to flagged corporation") {
        auto cls = taxonomy::classify_assignee(with_assignee("Zyxwvut"), cfg);
        CHECK(cls.type == AssigneeType::corporation);
        CHECK(cls.stage == 0);
        CHECK(cls.low_confidence);
    }
    SUBCASE("stage precedence: input matching several stages takes the earliest") {
        // matches stage 1 (known name), has a role code, and a keyword
        auto p = with_assignee("The General Hospital Corporation", "02");
        auto cls = taxonomy::classify_assignee(p, cfg);
        CHECK(cls.type == AssigneeType::hospital);  // stage 1 wins over role 02
        CHECK(cls.stage == 1);
    }
    SUBCASE("multi-assignee: first typed, rest recorded") {
        auto p = with_assignee("Acme Pharma Ltd.");
        AssigneeRecord second;
        second.name = "Beta University";
        p.assignees.push_back(second);
        auto cls = taxonomy::classify_assignee(p, cfg);
        CHECK(cls.type == AssigneeType::corporation);
        REQUIRE(cls.extra_assignees.size() == 1);
        CHECK(cls.extra_assignees[0] == "Beta University");
    }
    SUBCASE("purity: same input, same output") {
        auto p = with_assignee("Acme Pharma Ltd.");
        auto a = taxonomy::classify_assignee(p, cfg);
        auto b = taxonomy::classify_assignee(p, cfg);
        CHECK(a.type == b.type);
        CHECK(a.stage == b.stage);
    }
}

TEST_CASE("normalize_assignee_name") {
    CHECK(taxonomy::normalize_assignee_name("Acme  Pharma, Ltd.") == "ACME PHARMA LTD");
    CHECK(taxonomy::normalize_assignee_name("acme pharma ltd") == "ACME PHARMA LTD");
    CHECK(taxonomy::normalize_assignee_name("") == "");
}

TEST_CASE("nber_category lookup") {
    auto map = taxonomy::load_nber_map(data("uspc_nber.tsv"));

    auto drugs = taxonomy::nber_category("424", map);
    CHECK(drugs.category == 3);
    CHECK(drugs.subcategory == "31");
    CHECK(drugs.name == "Drugs");

    auto organic = taxonomy::nber_category("534", map);
    CHECK(organic.category == 1);
    CHECK(organic.subcategory == "14");

    auto unknown = taxonomy::nber_category("999", map);
    CHECK_FALSE(unknown.known());

    // invariant: subcategory leading digit equals category for every entry
    for (const auto& [klass, cat] : map) {
        REQUIRE(cat.subcategory.size() == 2);
        CHECK(cat.subcategory[0] - '0' == cat.category);
    }
}
