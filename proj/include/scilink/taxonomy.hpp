#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scilink/records.hpp"

namespace scilink::taxonomy {

/// Fractional country attribution of one patent. Empty weights with
/// known=false means the patent could not be attributed.
struct CountryWeights {
    std::map<std::string, double> weights;  // sums to 1 when non-empty
    bool known() const { return !weights.empty(); }
};

enum class AssigneeType {
    corporation, university, institute, government, hospital, individual, unassigned
};

const char* to_string(AssigneeType t);

struct AssigneeClassification {
    AssigneeType type = AssigneeType::unassigned;
    int stage = 0;             // cascade stage that decided (1..5, 0 = default)
    bool low_confidence = false;
    std::vector<std::string> extra_assignees;  // multi-assignee audit trail
};

struct NberCategory {
    int category = 0;          // 1..6, 0 = unknown
    std::string subcategory;   // 2-digit, leading digit == category
    std::string name;

    bool known() const { return category != 0; }
    bool operator==(const NberCategory&) const = default;
};

struct ClassifierConfig {
    std::map<std::string, AssigneeType> known_names;   // normalized name -> type
    std::map<std::string, AssigneeType> role_codes;
    std::vector<std::pair<std::string, AssigneeType>> keyword_rules;  // ordered
    std::map<std::string, std::string> country_fallback;  // patent_id -> country
};

using NberMap = std::map<std::string, NberCategory>;  // 3-digit class -> category

// Config loaders; all files are tab-separated text, '#' comments allowed.
NberMap load_nber_map(const std::string& path);
std::map<std::string, AssigneeType> load_name_table(const std::string& path);
std::map<std::string, AssigneeType> load_role_map(const std::string& path);
std::vector<std::pair<std::string, AssigneeType>> load_keyword_rules(const std::string& path);
std::map<std::string, std::string> load_fallback_table(const std::string& path);

/// Uppercase, strip punctuation, collapse whitespace. Stage-1 exact-match key.
std::string normalize_assignee_name(const std::string& name);

/// Fractional counting over inventor residences: each inventor with a known
/// country contributes 1/n, n = number of inventors with known country.
/// Unknown residences are excluded from the denominator. Falls back to the
/// secondary table when no residence is known.
CountryWeights country_fractions(const PatentRecord& patent,
                                 const std::map<std::string, std::string>& fallback);

/// First-inventor counting variant. Returns nullopt when unattributable.
std::optional<std::string> first_inventor_country(
    const PatentRecord& patent, const std::map<std::string, std::string>& fallback);

/// The §-style cascade: exact name match, role code, applicant equality,
/// keyword rules, no-assignee; unresolved defaults to corporation (flagged).
AssigneeClassification classify_assignee(const PatentRecord& patent,
                                         const ClassifierConfig& config);

NberCategory nber_category(const std::string& uspc_primary, const NberMap& map);

}  // namespace scilink::taxonomy
