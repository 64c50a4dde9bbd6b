#include "scilink/records.hpp"

#include <stdexcept>

namespace scilink {

using nlohmann::json;

const char* to_string(PatentKind k) {
    switch (k) {
        case PatentKind::utility: return "utility";
        case PatentKind::design: return "design";
        case PatentKind::plant: return "plant";
        case PatentKind::reissue: return "reissue";
        case PatentKind::other: return "other";
    }
    return "other";
}

PatentKind patent_kind_from_string(const std::string& s) {
    if (s == "utility") return PatentKind::utility;
    if (s == "design") return PatentKind::design;
    if (s == "plant") return PatentKind::plant;
    if (s == "reissue") return PatentKind::reissue;
    if (s == "other") return PatentKind::other;
    throw std::invalid_argument("unknown patent kind: " + s);
}

namespace {

void put_opt(json& j, const char* key, const std::optional<std::string>& v) {
    if (v) j[key] = *v;
}

void get_opt(const json& j, const char* key, std::optional<std::string>& v) {
    if (auto it = j.find(key); it != j.end() && !it->is_null()) v = it->get<std::string>();
    else v.reset();
}

}  // namespace

void to_json(json& j, const InventorRecord& r) {
    j = json{{"name", r.name}, {"raw_address", r.raw_address}};
    put_opt(j, "country", r.country);
}

void from_json(const json& j, InventorRecord& r) {
    r.name = j.at("name").get<std::string>();
    r.raw_address = j.at("raw_address").get<std::string>();
    get_opt(j, "country", r.country);
}

void to_json(json& j, const AssigneeRecord& r) {
    j = json{{"name", r.name}};
    put_opt(j, "role_code", r.role_code);
    put_opt(j, "country", r.country);
}

void from_json(const json& j, AssigneeRecord& r) {
    r.name = j.at("name").get<std::string>();
    get_opt(j, "role_code", r.role_code);
    get_opt(j, "country", r.country);
}

void to_json(json& j, const PatentRecord& r) {
    j = json{
        {"patent_id", r.patent_id},
        {"grant_year", r.grant_year},
        {"kind", to_string(r.kind)},
        {"withdrawn", r.withdrawn},
        {"inventors", r.inventors},
        {"assignees", r.assignees},
        {"applicant_names", r.applicant_names},
        {"uspc_all", r.uspc_all},
        {"ipc_codes", r.ipc_codes},
        {"patent_citations", r.patent_citations},
        {"npr_strings", r.npr_strings},
    };
    put_opt(j, "uspc_primary", r.uspc_primary);
}

void from_json(const json& j, PatentRecord& r) {
    r.patent_id = j.at("patent_id").get<std::string>();
    r.grant_year = j.at("grant_year").get<int>();
    r.kind = patent_kind_from_string(j.at("kind").get<std::string>());
    r.withdrawn = j.at("withdrawn").get<bool>();
    r.inventors = j.at("inventors").get<std::vector<InventorRecord>>();
    r.assignees = j.at("assignees").get<std::vector<AssigneeRecord>>();
    r.applicant_names = j.at("applicant_names").get<std::vector<std::string>>();
    get_opt(j, "uspc_primary", r.uspc_primary);
    r.uspc_all = j.at("uspc_all").get<std::vector<std::string>>();
    r.ipc_codes = j.at("ipc_codes").get<std::vector<std::string>>();
    r.patent_citations = j.at("patent_citations").get<std::vector<std::string>>();
    r.npr_strings = j.at("npr_strings").get<std::vector<std::string>>();
}

void to_json(json& j, const GrantRecord& r) {
    j = json{{"grant_number", r.grant_number},
             {"agency_acronym", r.agency_acronym},
             {"country", r.country}};
}

void from_json(const json& j, GrantRecord& r) {
    r.grant_number = j.at("grant_number").get<std::string>();
    r.agency_acronym = j.at("agency_acronym").get<std::string>();
    r.country = j.at("country").get<std::string>();
}

void to_json(json& j, const PaperRecord& r) {
    j = json{
        {"paper_id", r.paper_id},
        {"title", r.title},
        {"journal", r.journal},
        {"pub_year", r.pub_year},
        {"mesh_terms", r.mesh_terms},
        {"publication_types", r.publication_types},
        {"grants", r.grants},
    };
    put_opt(j, "volume", r.volume);
    put_opt(j, "first_page", r.first_page);
    put_opt(j, "first_author_affiliation", r.first_author_affiliation);
    put_opt(j, "first_author_lastname", r.first_author_lastname);
}

void from_json(const json& j, PaperRecord& r) {
    r.paper_id = j.at("paper_id").get<std::string>();
    r.title = j.at("title").get<std::string>();
    r.journal = j.at("journal").get<std::string>();
    r.pub_year = j.at("pub_year").get<int>();
    get_opt(j, "volume", r.volume);
    get_opt(j, "first_page", r.first_page);
    get_opt(j, "first_author_affiliation", r.first_author_affiliation);
    get_opt(j, "first_author_lastname", r.first_author_lastname);
    r.mesh_terms = j.at("mesh_terms").get<std::vector<std::string>>();
    r.publication_types = j.at("publication_types").get<std::vector<std::string>>();
    r.grants = j.at("grants").get<std::vector<GrantRecord>>();
}

}  // namespace scilink
