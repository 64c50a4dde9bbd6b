#include "scilink/medline.hpp"

#include <array>
#include <sstream>
#include <stdexcept>

#include "scilink/util.hpp"

namespace scilink::medline {

const char* to_string(InstitutionType t) {
    switch (t) {
        case InstitutionType::EDU: return "EDU";
        case InstitutionType::PRO: return "PRO";
        case InstitutionType::HOS: return "HOS";
        case InstitutionType::COM: return "COM";
        case InstitutionType::UNK: return "UNK";
    }
    return "UNK";
}

const char* to_string(RawInstitutionType t) {
    switch (t) {
        case RawInstitutionType::educational: return "educational";
        case RawInstitutionType::hospital: return "hospital";
        case RawInstitutionType::edu_hospital: return "edu_hospital";
        case RawInstitutionType::organization: return "organization";
        case RawInstitutionType::commercial: return "commercial";
        case RawInstitutionType::government: return "government";
        case RawInstitutionType::military: return "military";
        case RawInstitutionType::unknown: return "unknown";
    }
    return "unknown";
}

namespace {

RawInstitutionType raw_type_from_string(const std::string& s) {
    for (RawInstitutionType t :
         {RawInstitutionType::educational, RawInstitutionType::hospital,
          RawInstitutionType::edu_hospital, RawInstitutionType::organization,
          RawInstitutionType::commercial, RawInstitutionType::government,
          RawInstitutionType::military, RawInstitutionType::unknown}) {
        if (s == to_string(t)) return t;
    }
    throw std::invalid_argument("unknown raw institution type: " + s);
}

InstitutionType institution_from_string(const std::string& s) {
    for (InstitutionType t : {InstitutionType::EDU, InstitutionType::PRO,
                              InstitutionType::HOS, InstitutionType::COM,
                              InstitutionType::UNK}) {
        if (s == to_string(t)) return t;
    }
    throw std::invalid_argument("unknown institution type: " + s);
}

}  // namespace

AffiliationLexicon load_affiliation_lexicon(const std::string& country_path,
                                            const std::string& institution_path) {
    AffiliationLexicon lex;
    for (const auto& row : util::read_tsv(country_path)) {
        if (row.size() < 2) continue;
        lex.country_tokens[util::fold_text(row[0])] = util::to_upper(row[1]);
    }
    for (const auto& row : util::read_tsv(institution_path)) {
        if (row.size() < 2) continue;
        lex.institution_keywords.emplace_back(row[0], raw_type_from_string(row[1]));
    }
    return lex;
}

std::map<std::string, std::string> load_nih_institutes(const std::string& path) {
    std::map<std::string, std::string> table;
    for (const auto& row : util::read_tsv(path)) {
        if (row.empty()) continue;
        table[util::to_upper(row[0])] = row.size() > 1 ? row[1] : "";
    }
    return table;
}

AffiliationResult parse_affiliation(const std::string& text,
                                    const AffiliationLexicon& lexicon) {
    AffiliationResult result;
    if (util::trim(text).empty()) return result;

    // country: comma-separated segments scanned from the end; whole segment
    // first, then individual tokens
    auto segments = util::split(text, ',');
    for (auto it = segments.rbegin(); it != segments.rend() && result.country == "UNK"; ++it) {
        std::string folded = util::fold_text(*it);
        if (auto hit = lexicon.country_tokens.find(folded);
            hit != lexicon.country_tokens.end()) {
            result.country = hit->second;
            break;
        }
        auto tokens = util::tokenize(*it);
        for (auto tok = tokens.rbegin(); tok != tokens.rend(); ++tok) {
            if (auto hit = lexicon.country_tokens.find(*tok);
                hit != lexicon.country_tokens.end()) {
                result.country = hit->second;
                break;
            }
        }
    }

    bool has_edu = false, has_hosp = false, has_eduhosp = false, has_gov = false,
         has_mil = false, has_com = false, has_org = false;
    for (const auto& [keyword, type] : lexicon.institution_keywords) {
        if (!util::contains_word(text, keyword)) continue;
        switch (type) {
            case RawInstitutionType::educational: has_edu = true; break;
            case RawInstitutionType::hospital: has_hosp = true; break;
            case RawInstitutionType::edu_hospital: has_eduhosp = true; break;
            case RawInstitutionType::government: has_gov = true; break;
            case RawInstitutionType::military: has_mil = true; break;
            case RawInstitutionType::commercial: has_com = true; break;
            case RawInstitutionType::organization: has_org = true; break;
            case RawInstitutionType::unknown: break;
        }
    }
    if (has_eduhosp || (has_edu && has_hosp))
        result.institution = RawInstitutionType::edu_hospital;
    else if (has_edu) result.institution = RawInstitutionType::educational;
    else if (has_hosp) result.institution = RawInstitutionType::hospital;
    else if (has_gov) result.institution = RawInstitutionType::government;
    else if (has_mil) result.institution = RawInstitutionType::military;
    else if (has_com) result.institution = RawInstitutionType::commercial;
    else if (has_org) result.institution = RawInstitutionType::organization;
    return result;
}

InstitutionType merge_institution(RawInstitutionType raw) {
    switch (raw) {
        case RawInstitutionType::educational:
        case RawInstitutionType::edu_hospital:
            return InstitutionType::EDU;
        case RawInstitutionType::organization:
        case RawInstitutionType::government:
        case RawInstitutionType::military:
            return InstitutionType::PRO;
        case RawInstitutionType::hospital: return InstitutionType::HOS;
        case RawInstitutionType::commercial: return InstitutionType::COM;
        case RawInstitutionType::unknown: return InstitutionType::UNK;
    }
    return InstitutionType::UNK;
}

FundingInfo funding_flags(const PaperRecord& paper,
                          const std::map<std::string, std::string>& nih_institutes) {
    static const std::array<std::string, 4> kUsGovTypes = {
        "Research Support, U.S. Gov't, Non-P.H.S.",
        "Research Support, U.S. Gov't, P.H.S.",
        "Research Support, N.I.H., Extramural",
        "Research Support, N.I.H., Intramural",
    };
    FundingInfo info;
    for (const auto& pt : paper.publication_types) {
        for (const auto& wanted : kUsGovTypes) {
            if (pt == wanted) {
                info.us_gov_funded = true;
                break;
            }
        }
    }
    for (const auto& grant : paper.grants) {
        if (!grant.country.empty() &&
            grant.country.find("United States") == std::string::npos)
            continue;
        if (nih_institutes.count(grant.agency_acronym)) {
            info.nih_funded = true;
            info.nih_institutes.insert(grant.agency_acronym);
        }
    }
    // metadata inconsistency is flagged, never corrected
    info.inconsistent = info.nih_funded && !info.us_gov_funded;
    return info;
}

PaperAttributes classify_paper(const PaperRecord& paper,
                               const AffiliationLexicon& lexicon,
                               const std::map<std::string, std::string>& nih_institutes) {
    PaperAttributes attrs;
    attrs.paper_id = paper.paper_id;
    AffiliationResult aff =
        parse_affiliation(paper.first_author_affiliation.value_or(""), lexicon);
    attrs.country = aff.country;
    attrs.institution = merge_institution(aff.institution);
    attrs.funding = funding_flags(paper, nih_institutes);
    return attrs;
}

void store_paper_attributes(const std::vector<PaperAttributes>& attrs,
                            const std::string& path) {
    std::ostringstream out;
    out << "paper_id\tcountry\tinst_type\tus_gov\tnih\tnih_institutes\n";
    for (const auto& a : attrs) {
        out << a.paper_id << "\t" << a.country << "\t" << to_string(a.institution)
            << "\t" << (a.funding.us_gov_funded ? 1 : 0) << "\t"
            << (a.funding.nih_funded ? 1 : 0) << "\t";
        bool first = true;
        for (const auto& ic : a.funding.nih_institutes) {
            if (!first) out << ";";
            out << ic;
            first = false;
        }
        out << "\n";
    }
    util::write_file(path, out.str());
}

std::map<std::string, PaperAttributes> load_paper_attributes(const std::string& path) {
    std::map<std::string, PaperAttributes> out;
    auto rows = util::read_tsv(path);
    for (const auto& row : rows) {
        if (row.size() < 5 || row[0] == "paper_id") continue;
        PaperAttributes a;
        a.paper_id = row[0];
        a.country = row[1];
        a.institution = institution_from_string(row[2]);
        a.funding.us_gov_funded = row[3] == "1";
        a.funding.nih_funded = row[4] == "1";
        if (row.size() > 5) {
            for (const auto& ic : util::split(row[5], ';'))
                if (!ic.empty()) a.funding.nih_institutes.insert(ic);
        }
        out[a.paper_id] = std::move(a);
    }
    return out;
}

}  // namespace scilink::medline
