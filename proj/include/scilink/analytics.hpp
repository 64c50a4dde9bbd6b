#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scilink/medline.hpp"
#include "scilink/records.hpp"
#include "scilink/taxonomy.hpp"

namespace scilink::analytics {

/// Per-patent digest all aggregations run over.
struct PatentFacts {
    std::string patent_id;
    int grant_year = 0;
    taxonomy::NberCategory nber;
    std::map<std::string, double> country_weights;
    std::optional<std::string> first_country;
    taxonomy::AssigneeType assignee_type = taxonomy::AssigneeType::unassigned;
    std::string assignee_name;  // first assignee, normalized
    size_t npr_count = 0;
    std::vector<std::string> mnpr_paper_ids;  // accepted links, NPR order
};

std::vector<PatentFacts> build_facts(
    const std::vector<PatentRecord>& patents,
    const std::vector<ResolvedCitation>& links,
    const std::map<std::string, taxonomy::NberCategory>& nber_by_patent,
    const taxonomy::ClassifierConfig& config);

struct SubcategorySummary {
    taxonomy::NberCategory subcategory;
    bool is_category_total = false;
    size_t patents_all = 0;
    size_t patents_with_mnpr = 0;
    double pct_with_mnpr = 0.0;
    size_t total_nprs = 0;
    size_t total_mnprs = 0;
    double pct_mnpr_of_npr = 0.0;
    double mean_mnpr_all = 0.0;
    double mean_mnpr_conditional = 0.0;
    bool conditional_mean_degenerate = false;  // no patent had an MNPR
};

/// One row per NBER subcategory present, plus a total row per category.
std::vector<SubcategorySummary> summary_table(const std::vector<PatentFacts>& facts);

enum class Measure { patent_count, frac_with_mnpr, total_mnprs, mean_mnprs };
enum class CountryMode { fractional, first_inventor };

struct SeriesSlice {
    std::optional<int> category;
    std::optional<std::string> country;
    CountryMode country_mode = CountryMode::fractional;
};

struct YearlySeries {
    Measure measure = Measure::patent_count;
    std::map<int, double> points;
};

YearlySeries yearly_series(const std::vector<PatentFacts>& facts, Measure measure,
                           const SeriesSlice& slice = {});

struct ExponentialFit {
    double slope = 0.0;  // per-year log10 rate
    double intercept = 0.0;
    double doubling_time_years = 0.0;
    double r_squared = 0.0;
};

/// OLS of log10(value) on year over [first, last]. Throws on nonpositive
/// values (naming the year), fewer than 3 points, or a nonpositive slope
/// (doubling time undefined).
ExponentialFit fit_exponential(const YearlySeries& series, int first_year, int last_year);

enum class Dimension { country, institution, funding_usgov, funding_nih };
enum class CountingMode { reference_level, paper_level };

/// Fractions over the MNPR links of patents granted in `year`; keys cover
/// every link (UNK included) and sum to 1. Reference-level counting counts
/// a paper once per citing patent.
std::map<std::string, double> cited_fractions(
    const std::vector<PatentFacts>& facts,
    const std::map<std::string, medline::PaperAttributes>& paper_attrs, int year,
    Dimension dimension, CountingMode mode = CountingMode::reference_level);

struct CompanyCitationProfile {
    std::map<medline::InstitutionType, size_t> counts;
    size_t total_links = 0;
    std::optional<double> public_fraction;  // (EDU + PRO) / total, UNK kept in denominator
};

/// Company patents only; optionally a single company by normalized name.
CompanyCitationProfile company_public_fraction(
    const std::vector<PatentFacts>& facts,
    const std::map<std::string, medline::PaperAttributes>& paper_attrs,
    const std::optional<std::string>& company = std::nullopt);

/// Public-science fraction per company, over companies with >= 1 MNPR.
std::map<std::string, double> per_company_fractions(
    const std::vector<PatentFacts>& facts,
    const std::map<std::string, medline::PaperAttributes>& paper_attrs);

/// Empirical CDF points (fraction, share of companies with value <= fraction).
std::vector<std::pair<double, double>> public_fraction_cdf(
    const std::vector<double>& per_company_fractions);

struct Histogram {
    double lo = -1.0;
    double bin_width = 0.05;
    std::vector<size_t> counts;
    std::vector<double> bin_centers;
    std::vector<double> minima;  // interior local minima of smoothed counts
};

/// Fixed-width bins over [-1, 1]; minima found on 3-bin moving-average counts.
Histogram ls_histogram(const std::vector<double>& scores, double bin_width = 0.05);

struct FdaSubsetResult {
    Histogram histogram;
    double share_below = 0.0;
    size_t links_scored = 0;
    bool empty = false;  // no overlap between the id list and the corpus
};

FdaSubsetResult fda_subset_analysis(const std::set<std::string>& patent_ids,
                                    const std::vector<PatentFacts>& facts,
                                    const std::map<std::string, double>& ls_table,
                                    double threshold = 0.16, double bin_width = 0.05);

std::set<std::string> load_id_list(const std::string& path);

}  // namespace scilink::analytics
