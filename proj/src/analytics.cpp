#include "scilink/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "scilink/util.hpp"

namespace scilink::analytics {

std::vector<PatentFacts> build_facts(
    const std::vector<PatentRecord>& patents,
    const std::vector<ResolvedCitation>& links,
    const std::map<std::string, taxonomy::NberCategory>& nber_by_patent,
    const taxonomy::ClassifierConfig& config) {
    std::map<std::string, std::vector<std::string>> accepted;
    for (const auto& link : links) {
        if (link.paper_id) accepted[link.patent_id].push_back(*link.paper_id);
    }
    std::vector<PatentFacts> facts;
    facts.reserve(patents.size());
    for (const auto& patent : patents) {
        PatentFacts f;
        f.patent_id = patent.patent_id;
        f.grant_year = patent.grant_year;
        if (auto it = nber_by_patent.find(patent.patent_id); it != nber_by_patent.end())
            f.nber = it->second;
        f.country_weights = taxonomy::country_fractions(patent, config.country_fallback).weights;
        f.first_country = taxonomy::first_inventor_country(patent, config.country_fallback);
        auto cls = taxonomy::classify_assignee(patent, config);
        f.assignee_type = cls.type;
        if (!patent.assignees.empty())
            f.assignee_name = taxonomy::normalize_assignee_name(patent.assignees.front().name);
        f.npr_count = patent.npr_strings.size();
        if (auto it = accepted.find(patent.patent_id); it != accepted.end())
            f.mnpr_paper_ids = it->second;
        facts.push_back(std::move(f));
    }
    return facts;
}

std::vector<SubcategorySummary> summary_table(const std::vector<PatentFacts>& facts) {
    std::map<std::string, SubcategorySummary> by_sub;
    std::map<int, SubcategorySummary> by_cat;
    for (const auto& f : facts) {
        auto apply = [&f](SubcategorySummary& row) {
            ++row.patents_all;
            row.total_nprs += f.npr_count;
            row.total_mnprs += f.mnpr_paper_ids.size();
            if (!f.mnpr_paper_ids.empty()) ++row.patents_with_mnpr;
        };
        std::string sub = f.nber.known() ? f.nber.subcategory : "??";
        auto& srow = by_sub[sub];
        srow.subcategory = f.nber;
        apply(srow);
        auto& crow = by_cat[f.nber.category];
        crow.subcategory.category = f.nber.category;
        crow.subcategory.name = "Total";
        crow.is_category_total = true;
        apply(crow);
    }
    auto finish = [](SubcategorySummary& row) {
        if (row.patents_all > 0) {
            row.pct_with_mnpr = 100.0 * row.patents_with_mnpr / row.patents_all;
            row.mean_mnpr_all = static_cast<double>(row.total_mnprs) / row.patents_all;
        }
        if (row.total_nprs > 0)
            row.pct_mnpr_of_npr = 100.0 * row.total_mnprs / row.total_nprs;
        if (row.patents_with_mnpr > 0) {
            row.mean_mnpr_conditional =
                static_cast<double>(row.total_mnprs) / row.patents_with_mnpr;
        } else {
            row.conditional_mean_degenerate = true;  // flagged zero
        }
    };
    std::vector<SubcategorySummary> out;
    for (auto& [sub, row] : by_sub) {
        finish(row);
        out.push_back(row);
        // append the category total after its last subcategory
        auto next = by_sub.upper_bound(sub);
        int cat = row.subcategory.category;
        if (next == by_sub.end() || next->second.subcategory.category != cat) {
            auto& total = by_cat[cat];
            finish(total);
            out.push_back(total);
        }
    }
    return out;
}

namespace {

double patent_weight(const PatentFacts& f, const SeriesSlice& slice) {
    if (slice.category && f.nber.category != *slice.category) return 0.0;
    if (!slice.country) return 1.0;
    if (slice.country_mode == CountryMode::first_inventor)
        return (f.first_country && *f.first_country == *slice.country) ? 1.0 : 0.0;
    if (auto it = f.country_weights.find(*slice.country); it != f.country_weights.end())
        return it->second;
    return 0.0;
}

}  // namespace

YearlySeries yearly_series(const std::vector<PatentFacts>& facts, Measure measure,
                           const SeriesSlice& slice) {
    YearlySeries series;
    series.measure = measure;
    std::map<int, double> patents, with_mnpr, mnprs;
    int lo = 0, hi = 0;
    bool any = false;
    for (const auto& f : facts) {
        double w = patent_weight(f, slice);
        if (w <= 0.0) continue;
        patents[f.grant_year] += w;
        if (!f.mnpr_paper_ids.empty()) with_mnpr[f.grant_year] += w;
        mnprs[f.grant_year] += w * static_cast<double>(f.mnpr_paper_ids.size());
        if (!any || f.grant_year < lo) lo = any ? std::min(lo, f.grant_year) : f.grant_year;
        hi = any ? std::max(hi, f.grant_year) : f.grant_year;
        any = true;
    }
    if (!any) return series;
    for (int year = lo; year <= hi; ++year) {
        double n = patents.count(year) ? patents[year] : 0.0;
        switch (measure) {
            case Measure::patent_count:
                series.points[year] = n;
                break;
            case Measure::total_mnprs:
                series.points[year] = mnprs.count(year) ? mnprs[year] : 0.0;
                break;
            case Measure::frac_with_mnpr:
                if (n > 0) series.points[year] = (with_mnpr.count(year) ? with_mnpr[year] : 0.0) / n;
                break;  // empty denominator: point omitted
            case Measure::mean_mnprs:
                if (n > 0) series.points[year] = (mnprs.count(year) ? mnprs[year] : 0.0) / n;
                break;
        }
    }
    return series;
}

ExponentialFit fit_exponential(const YearlySeries& series, int first_year, int last_year) {
    std::vector<std::pair<double, double>> pts;  // (year, log10 value)
    for (const auto& [year, value] : series.points) {
        if (year < first_year || year > last_year) continue;
        if (value <= 0.0)
            throw std::domain_error("nonpositive series value at year " +
                                    std::to_string(year));
        pts.emplace_back(static_cast<double>(year), std::log10(value));
    }
    if (pts.size() < 3)
        throw std::invalid_argument("exponential fit needs at least 3 points in range");

    double n = static_cast<double>(pts.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (auto [x, y] : pts) {
        sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::runtime_error("degenerate year axis");
    ExponentialFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (auto [x, y] : pts) {
        double r = y - (fit.slope * x + fit.intercept);
        ss_res += r * r;
    }
    fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    if (fit.slope <= 0.0)
        throw std::domain_error("nonpositive growth rate: doubling time undefined");
    fit.doubling_time_years = std::log10(2.0) / fit.slope;
    return fit;
}

namespace {

std::string link_key(const medline::PaperAttributes* attrs, Dimension dimension) {
    if (!attrs) {
        switch (dimension) {
            case Dimension::country: return "UNK";
            case Dimension::institution: return "UNK";
            case Dimension::funding_usgov: return "OTHER";
            case Dimension::funding_nih: return "OTHER";
        }
    }
    switch (dimension) {
        case Dimension::country: return attrs->country;
        case Dimension::institution: return medline::to_string(attrs->institution);
        case Dimension::funding_usgov:
            return attrs->funding.us_gov_funded ? "US_GOV" : "OTHER";
        case Dimension::funding_nih:
            return attrs->funding.nih_funded ? "NIH" : "OTHER";
    }
    return "UNK";
}

}  // namespace

std::map<std::string, double> cited_fractions(
    const std::vector<PatentFacts>& facts,
    const std::map<std::string, medline::PaperAttributes>& paper_attrs, int year,
    Dimension dimension, CountingMode mode) {
    std::map<std::string, size_t> counts;
    std::set<std::string> seen_papers;
    size_t total = 0;
    for (const auto& f : facts) {
        if (f.grant_year != year) continue;
        for (const auto& paper_id : f.mnpr_paper_ids) {
            if (mode == CountingMode::paper_level && !seen_papers.insert(paper_id).second)
                continue;
            auto it = paper_attrs.find(paper_id);
            const medline::PaperAttributes* attrs =
                it == paper_attrs.end() ? nullptr : &it->second;
            ++counts[link_key(attrs, dimension)];
            ++total;
        }
    }
    std::map<std::string, double> fractions;
    if (total == 0) return fractions;
    for (const auto& [key, count] : counts)
        fractions[key] = static_cast<double>(count) / total;
    return fractions;
}

CompanyCitationProfile company_public_fraction(
    const std::vector<PatentFacts>& facts,
    const std::map<std::string, medline::PaperAttributes>& paper_attrs,
    const std::optional<std::string>& company) {
    CompanyCitationProfile profile;
    std::string wanted = company ? taxonomy::normalize_assignee_name(*company) : "";
    for (const auto& f : facts) {
        if (f.assignee_type != taxonomy::AssigneeType::corporation) continue;
        if (company && f.assignee_name != wanted) continue;
        for (const auto& paper_id : f.mnpr_paper_ids) {
            auto it = paper_attrs.find(paper_id);
            medline::InstitutionType inst = it == paper_attrs.end()
                ? medline::InstitutionType::UNK : it->second.institution;
            ++profile.counts[inst];
            ++profile.total_links;
        }
    }
    if (profile.total_links > 0) {
        size_t pub = 0;
        if (auto it = profile.counts.find(medline::InstitutionType::EDU);
            it != profile.counts.end()) pub += it->second;
        if (auto it = profile.counts.find(medline::InstitutionType::PRO);
            it != profile.counts.end()) pub += it->second;
        profile.public_fraction = static_cast<double>(pub) / profile.total_links;
    }
    return profile;
}

std::map<std::string, double> per_company_fractions(
    const std::vector<PatentFacts>& facts,
    const std::map<std::string, medline::PaperAttributes>& paper_attrs) {
    std::map<std::string, std::pair<size_t, size_t>> tallies;  // company -> (public, total)
    for (const auto& f : facts) {
        if (f.assignee_type != taxonomy::AssigneeType::corporation) continue;
        if (f.assignee_name.empty()) continue;
        for (const auto& paper_id : f.mnpr_paper_ids) {
            auto it = paper_attrs.find(paper_id);
            medline::InstitutionType inst = it == paper_attrs.end()
                ? medline::InstitutionType::UNK : it->second.institution;
            auto& [pub, total] = tallies[f.assignee_name];
            ++total;
            if (inst == medline::InstitutionType::EDU ||
                inst == medline::InstitutionType::PRO) ++pub;
        }
    }
    std::map<std::string, double> out;
    for (const auto& [company, tally] : tallies) {
        if (tally.second > 0)
            out[company] = static_cast<double>(tally.first) / tally.second;
    }
    return out;
}

std::vector<std::pair<double, double>> public_fraction_cdf(
    const std::vector<double>& per_company) {
    if (per_company.empty())
        throw std::invalid_argument("no companies with MNPRs");
    std::vector<double> sorted(per_company);
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::pair<double, double>> cdf;
    const double n = static_cast<double>(sorted.size());
    for (size_t i = 0; i < sorted.size(); ++i) {
        // collapse runs of equal values into a single step
        if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
        cdf.emplace_back(sorted[i], static_cast<double>(i + 1) / n);
    }
    return cdf;
}

Histogram ls_histogram(const std::vector<double>& scores, double bin_width) {
    Histogram h;
    h.bin_width = bin_width;
    size_t bins = static_cast<size_t>(std::ceil(2.0 / bin_width));
    h.counts.assign(bins, 0);
    for (size_t i = 0; i < bins; ++i) h.bin_centers.push_back(-1.0 + (i + 0.5) * bin_width);
    for (double s : scores) {
        double pos = (s + 1.0) / bin_width;
        long idx = static_cast<long>(std::floor(pos));
        if (idx < 0) idx = 0;
        if (idx >= static_cast<long>(bins)) idx = static_cast<long>(bins) - 1;
        ++h.counts[static_cast<size_t>(idx)];
    }
    // 3-bin moving average, then interior strict minima
    std::vector<double> smooth(bins, 0.0);
    for (size_t i = 0; i < bins; ++i) {
        double sum = static_cast<double>(h.counts[i]);
        double n = 1.0;
        if (i > 0) { sum += static_cast<double>(h.counts[i - 1]); n += 1.0; }
        if (i + 1 < bins) { sum += static_cast<double>(h.counts[i + 1]); n += 1.0; }
        smooth[i] = sum / n;
    }
    for (size_t i = 1; i + 1 < bins; ++i) {
        if (smooth[i] < smooth[i - 1] && smooth[i] < smooth[i + 1])
            h.minima.push_back(h.bin_centers[i]);
    }
    return h;
}

FdaSubsetResult fda_subset_analysis(const std::set<std::string>& patent_ids,
                                    const std::vector<PatentFacts>& facts,
                                    const std::map<std::string, double>& ls_table,
                                    double threshold, double bin_width) {
    FdaSubsetResult result;
    std::vector<double> scores;
    size_t below = 0;
    bool any_patent = false;
    for (const auto& f : facts) {
        if (!patent_ids.count(f.patent_id)) continue;
        any_patent = true;
        for (const auto& paper_id : f.mnpr_paper_ids) {
            auto it = ls_table.find(paper_id);
            if (it == ls_table.end()) continue;  // unscored papers reported via links_scored
            scores.push_back(it->second);
            if (it->second < threshold) ++below;
        }
    }
    result.links_scored = scores.size();
    if (!any_patent || scores.empty()) {
        result.empty = true;
        return result;
    }
    result.histogram = ls_histogram(scores, bin_width);
    result.share_below = static_cast<double>(below) / scores.size();
    return result;
}

std::set<std::string> load_id_list(const std::string& path) {
    std::set<std::string> ids;
    std::istringstream in(util::read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        std::string t = util::trim(line);
        if (!t.empty() && t[0] != '#') ids.insert(t);
    }
    return ids;
}

}  // namespace scilink::analytics
