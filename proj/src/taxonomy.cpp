#include "scilink/taxonomy.hpp"

#include <stdexcept>

#include "scilink/util.hpp"

namespace scilink::taxonomy {

const char* to_string(AssigneeType t) {
    switch (t) {
        case AssigneeType::corporation: return "corporation";
        case AssigneeType::university: return "university";
        case AssigneeType::institute: return "institute";
        case AssigneeType::government: return "government";
        case AssigneeType::hospital: return "hospital";
        case AssigneeType::individual: return "individual";
        case AssigneeType::unassigned: return "unassigned";
    }
    return "unassigned";
}

namespace {

AssigneeType assignee_type_from_string(const std::string& s) {
    for (AssigneeType t : {AssigneeType::corporation, AssigneeType::university,
                           AssigneeType::institute, AssigneeType::government,
                           AssigneeType::hospital, AssigneeType::individual,
                           AssigneeType::unassigned}) {
        if (s == to_string(t)) return t;
    }
    throw std::invalid_argument("unknown assignee type: " + s);
}

}  // namespace

NberMap load_nber_map(const std::string& path) {
    NberMap map;
    for (const auto& row : util::read_tsv(path)) {
        if (row.size() < 2) continue;
        NberCategory cat;
        cat.subcategory = row[1];
        if (cat.subcategory.size() != 2 || !std::isdigit((unsigned char)cat.subcategory[0]))
            throw std::runtime_error("bad NBER subcategory '" + row[1] + "' in " + path);
        cat.category = cat.subcategory[0] - '0';
        if (row.size() > 2) cat.name = row[2];
        map[row[0]] = std::move(cat);
    }
    return map;
}

std::map<std::string, AssigneeType> load_name_table(const std::string& path) {
    std::map<std::string, AssigneeType> table;
    for (const auto& row : util::read_tsv(path)) {
        if (row.size() < 2) continue;
        table[normalize_assignee_name(row[0])] = assignee_type_from_string(row[1]);
    }
    return table;
}

std::map<std::string, AssigneeType> load_role_map(const std::string& path) {
    std::map<std::string, AssigneeType> table;
    for (const auto& row : util::read_tsv(path)) {
        if (row.size() < 2) continue;
        table[row[0]] = assignee_type_from_string(row[1]);
    }
    return table;
}

std::vector<std::pair<std::string, AssigneeType>> load_keyword_rules(const std::string& path) {
    std::vector<std::pair<std::string, AssigneeType>> rules;
    for (const auto& row : util::read_tsv(path)) {
        if (row.size() < 2) continue;
        rules.emplace_back(row[0], assignee_type_from_string(row[1]));
    }
    return rules;
}

std::map<std::string, std::string> load_fallback_table(const std::string& path) {
    std::map<std::string, std::string> table;
    for (const auto& row : util::read_tsv(path)) {
        if (row.size() < 2) continue;
        table[row[0]] = util::to_upper(row[1]);
    }
    return table;
}

std::string normalize_assignee_name(const std::string& name) {
    std::string out;
    bool pending_space = false;
    for (unsigned char c : name) {
        if (std::isalnum(c)) {
            if (pending_space && !out.empty()) out.push_back(' ');
            pending_space = false;
            out.push_back(static_cast<char>(std::toupper(c)));
        } else {
            pending_space = true;
        }
    }
    return out;
}

CountryWeights country_fractions(const PatentRecord& patent,
                                 const std::map<std::string, std::string>& fallback) {
    CountryWeights cw;
    int known = 0;
    for (const auto& inv : patent.inventors)
        if (inv.country) ++known;
    if (known > 0) {
        for (const auto& inv : patent.inventors)
            if (inv.country) cw.weights[*inv.country] += 1.0 / known;
        return cw;
    }
    if (auto it = fallback.find(patent.patent_id); it != fallback.end())
        cw.weights[it->second] = 1.0;
    return cw;
}

std::optional<std::string> first_inventor_country(
    const PatentRecord& patent, const std::map<std::string, std::string>& fallback) {
    if (!patent.inventors.empty() && patent.inventors.front().country)
        return patent.inventors.front().country;
    if (auto it = fallback.find(patent.patent_id); it != fallback.end())
        return it->second;
    return std::nullopt;
}

AssigneeClassification classify_assignee(const PatentRecord& patent,
                                         const ClassifierConfig& config) {
    AssigneeClassification result;
    if (patent.assignees.empty()) {
        result.type = AssigneeType::unassigned;
        result.stage = 5;
        return result;
    }
    const AssigneeRecord& first = patent.assignees.front();
    for (size_t i = 1; i < patent.assignees.size(); ++i)
        result.extra_assignees.push_back(patent.assignees[i].name);

    std::string norm = normalize_assignee_name(first.name);

    // stage 1: exact normalized-name match
    if (auto it = config.known_names.find(norm); it != config.known_names.end()) {
        result.type = it->second;
        result.stage = 1;
        return result;
    }
    // stage 2: office-supplied role code
    if (first.role_code) {
        if (auto it = config.role_codes.find(*first.role_code);
            it != config.role_codes.end()) {
            result.type = it->second;
            result.stage = 2;
            return result;
        }
    }
    // stage 3: assignee name equals an applicant name -> individual
    for (const auto& applicant : patent.applicant_names) {
        if (normalize_assignee_name(applicant) == norm) {
            result.type = AssigneeType::individual;
            result.stage = 3;
            return result;
        }
    }
    // stage 4: keyword rules, first match wins
    for (const auto& [keyword, type] : config.keyword_rules) {
        if (util::contains_word(first.name, keyword)) {
            result.type = type;
            result.stage = 4;
            return result;
        }
    }
    // cascade exhausted
    result.type = AssigneeType::corporation;
    result.stage = 0;
    result.low_confidence = true;
    return result;
}

NberCategory nber_category(const std::string& uspc_primary, const NberMap& map) {
    if (auto it = map.find(uspc_primary); it != map.end()) return it->second;
    return NberCategory{};
}

}  // namespace scilink::taxonomy
