#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace scilink {

enum class PatentKind { utility, design, plant, reissue, other };

const char* to_string(PatentKind k);
PatentKind patent_kind_from_string(const std::string& s);

struct InventorRecord {
    std::string name;
    std::optional<std::string> country;  // uppercase ISO-3166-like 2-letter
    std::string raw_address;

    bool operator==(const InventorRecord&) const = default;
};

struct AssigneeRecord {
    std::string name;
    std::optional<std::string> role_code;
    std::optional<std::string> country;

    bool operator==(const AssigneeRecord&) const = default;
};

/// One granted patent. Inventor order is preserved from the source
/// document; index 0 is the first inventor.
struct PatentRecord {
    std::string patent_id;  // grant number without commas
    int grant_year = 0;
    PatentKind kind = PatentKind::other;
    bool withdrawn = false;
    std::vector<InventorRecord> inventors;
    std::vector<AssigneeRecord> assignees;
    std::vector<std::string> applicant_names;
    std::optional<std::string> uspc_primary;  // 3-digit class
    std::vector<std::string> uspc_all;
    std::vector<std::string> ipc_codes;  // normalized, e.g. "A61K 51/00"
    std::vector<std::string> patent_citations;
    std::vector<std::string> npr_strings;

    bool operator==(const PatentRecord&) const = default;
};

struct GrantRecord {
    std::string grant_number;
    std::string agency_acronym;  // uppercase
    std::string country;

    bool operator==(const GrantRecord&) const = default;
};

/// One biomedical paper, mirroring the MEDLINE element set we consume.
struct PaperRecord {
    std::string paper_id;  // accession number
    std::string title;
    std::string journal;
    int pub_year = 0;
    std::optional<std::string> volume;
    std::optional<std::string> first_page;
    std::optional<std::string> first_author_affiliation;
    std::optional<std::string> first_author_lastname;
    std::vector<std::string> mesh_terms;
    std::vector<std::string> publication_types;
    std::vector<GrantRecord> grants;

    bool operator==(const PaperRecord&) const = default;
};

/// One patent NPR resolved (or not) against the paper corpus.
struct ResolvedCitation {
    std::string patent_id;
    int npr_index = 0;  // position in the patent's NPR list
    std::optional<std::string> paper_id;
    double confidence = 0.0;

    bool accepted() const { return paper_id.has_value(); }
    bool operator==(const ResolvedCitation&) const = default;
};

void to_json(nlohmann::json& j, const InventorRecord& r);
void from_json(const nlohmann::json& j, InventorRecord& r);
void to_json(nlohmann::json& j, const AssigneeRecord& r);
void from_json(const nlohmann::json& j, AssigneeRecord& r);
void to_json(nlohmann::json& j, const PatentRecord& r);
void from_json(const nlohmann::json& j, PatentRecord& r);
void to_json(nlohmann::json& j, const GrantRecord& r);
void from_json(const nlohmann::json& j, GrantRecord& r);
void to_json(nlohmann::json& j, const PaperRecord& r);
void from_json(const nlohmann::json& j, PaperRecord& r);

}  // namespace scilink
