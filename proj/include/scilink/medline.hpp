#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "scilink/records.hpp"

namespace scilink::medline {

enum class InstitutionType { EDU, PRO, HOS, COM, UNK };

enum class RawInstitutionType {
    educational, hospital, edu_hospital, organization,
    commercial, government, military, unknown
};

const char* to_string(InstitutionType t);
const char* to_string(RawInstitutionType t);

struct AffiliationLexicon {
    // token/phrase (folded) -> 2-letter country code; includes country names,
    // common abbreviations, and US state names/postal codes
    std::map<std::string, std::string> country_tokens;
    // institution keyword (verbatim, word-boundary matched) -> raw class;
    // file order is match precedence within a class
    std::vector<std::pair<std::string, RawInstitutionType>> institution_keywords;
};

AffiliationLexicon load_affiliation_lexicon(const std::string& country_path,
                                            const std::string& institution_path);

/// NIH institute acronyms (NCI, NIGMS, ...) -> full names.
std::map<std::string, std::string> load_nih_institutes(const std::string& path);

struct AffiliationResult {
    std::string country = "UNK";  // 2-letter code or "UNK"
    RawInstitutionType institution = RawInstitutionType::unknown;
};

/// Deterministic rule-based extraction from free affiliation text.
/// Class precedence: edu_hospital > educational > hospital > government >
/// military > commercial > organization.
AffiliationResult parse_affiliation(const std::string& text,
                                    const AffiliationLexicon& lexicon);

/// The 8 -> 5 merge: edu_hospital/educational -> EDU;
/// organization/government/military -> PRO; hospital -> HOS;
/// commercial -> COM; unknown -> UNK.
InstitutionType merge_institution(RawInstitutionType raw);

struct FundingInfo {
    bool us_gov_funded = false;
    bool nih_funded = false;
    std::set<std::string> nih_institutes;
    bool inconsistent = false;  // nih_funded without a us-gov publication type
};

/// Exact, case-sensitive, full-string matching of the four publication-type
/// strings; NIH support from the grant list against the institute table.
FundingInfo funding_flags(const PaperRecord& paper,
                          const std::map<std::string, std::string>& nih_institutes);

struct PaperAttributes {
    std::string paper_id;
    std::string country = "UNK";
    InstitutionType institution = InstitutionType::UNK;
    FundingInfo funding;
};

PaperAttributes classify_paper(const PaperRecord& paper,
                               const AffiliationLexicon& lexicon,
                               const std::map<std::string, std::string>& nih_institutes);

// paper_id -> attributes table persistence (tab-separated)
void store_paper_attributes(const std::vector<PaperAttributes>& attrs,
                            const std::string& path);
std::map<std::string, PaperAttributes> load_paper_attributes(const std::string& path);

}  // namespace scilink::medline
