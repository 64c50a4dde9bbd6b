#include "scilink/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "scilink/medline.hpp"
#include "scilink/resolver.hpp"
#include "scilink/util.hpp"

namespace scilink::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string resolve_path(const fs::path& base, const std::string& p) {
    fs::path path(p);
    if (path.is_absolute()) return path.string();
    return (base / path).lexically_normal().string();
}

}  // namespace

PipelineConfig PipelineConfig::load(const std::string& path) {
    PipelineConfig cfg;
    fs::path base = fs::path(path).parent_path();
    std::istringstream in(util::read_file(path));
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = util::trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t sep = t.find_first_of(" \t");
        if (sep == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected 'key value'");
        std::string key = t.substr(0, sep);
        std::string value = util::trim(t.substr(sep + 1));
        auto path_of = [&](const std::string& v) { return resolve_path(base, v); };

        if (key == "patents_xml") cfg.patent_files.push_back(path_of(value));
        else if (key == "papers_file") cfg.paper_files.push_back(path_of(value));
        else if (key == "withdrawn") cfg.withdrawn_path = path_of(value);
        else if (key == "years") {
            auto parts = util::split(value, ':');
            if (parts.size() != 2)
                throw std::runtime_error("years must be FIRST:LAST");
            cfg.years.first = static_cast<int>(util::parse_int(parts[0]).value());
            cfg.years.last = static_cast<int>(util::parse_int(parts[1]).value());
        }
        else if (key == "uspc_set") cfg.uspc_set_path = path_of(value);
        else if (key == "nber_map") cfg.nber_map_path = path_of(value);
        else if (key == "assignee_names") cfg.assignee_names_path = path_of(value);
        else if (key == "role_map") cfg.role_map_path = path_of(value);
        else if (key == "assignee_keywords") cfg.assignee_keywords_path = path_of(value);
        else if (key == "country_fallback") cfg.country_fallback_path = path_of(value);
        else if (key == "country_lexicon") cfg.country_lexicon_path = path_of(value);
        else if (key == "institution_lexicon") cfg.institution_lexicon_path = path_of(value);
        else if (key == "nih_institutes") cfg.nih_institutes_path = path_of(value);
        else if (key == "mesh_tree") cfg.mesh_tree_path = path_of(value);
        else if (key == "concordance_rows") cfg.concordance_rows_path = path_of(value);
        else if (key == "fda_ids") cfg.fda_ids_path = path_of(value);
        else if (key == "resolver_threshold") cfg.resolver_threshold = std::stod(value);
        else if (key == "ls_dim") cfg.ls_dim = static_cast<int>(util::parse_int(value).value());
        else if (key == "ls_threshold") cfg.ls_threshold = std::stod(value);
        else if (key == "counting_mode") {
            cfg.counting_mode = value == "paper"
                ? analytics::CountingMode::paper_level
                : analytics::CountingMode::reference_level;
        }
        else if (key == "country_mode") {
            cfg.country_mode = value == "first"
                ? analytics::CountryMode::first_inventor
                : analytics::CountryMode::fractional;
        }
        else if (key == "seed") cfg.seed = static_cast<unsigned>(util::parse_int(value).value());
        else if (key == "threads") cfg.threads = static_cast<int>(util::parse_int(value).value());
        else throw std::runtime_error("unknown config key: " + key);
    }
    return cfg;
}

void PipelineConfig::validate() const {
    std::vector<std::string> required = {uspc_set_path, nber_map_path, role_map_path,
                                         assignee_keywords_path, country_lexicon_path,
                                         institution_lexicon_path, nih_institutes_path,
                                         mesh_tree_path};
    for (const auto& f : patent_files) required.push_back(f);
    for (const auto& f : paper_files) required.push_back(f);
    for (const auto& opt : {withdrawn_path, assignee_names_path, country_fallback_path,
                            concordance_rows_path, fda_ids_path})
        if (opt) required.push_back(*opt);
    for (const auto& f : required) {
        if (f.empty()) throw std::runtime_error("config is missing a required path");
        if (!fs::exists(f)) throw std::runtime_error("missing input file: " + f);
    }
    if (patent_files.empty()) throw std::runtime_error("no patents_xml inputs configured");
    if (paper_files.empty()) throw std::runtime_error("no papers_file inputs configured");
}

taxonomy::ClassifierConfig load_classifier_config(const PipelineConfig& config) {
    taxonomy::ClassifierConfig cc;
    if (config.assignee_names_path)
        cc.known_names = taxonomy::load_name_table(*config.assignee_names_path);
    cc.role_codes = taxonomy::load_role_map(config.role_map_path);
    cc.keyword_rules = taxonomy::load_keyword_rules(config.assignee_keywords_path);
    if (config.country_fallback_path)
        cc.country_fallback = taxonomy::load_fallback_table(*config.country_fallback_path);
    return cc;
}

std::map<std::string, taxonomy::NberCategory> assign_nber(
    const std::vector<PatentRecord>& patents, const taxonomy::NberMap& nber_map,
    const concordance::ConcordanceTable* table) {
    std::map<std::string, taxonomy::NberCategory> out;
    for (const auto& patent : patents) {
        if (patent.uspc_primary) {
            out[patent.patent_id] = taxonomy::nber_category(*patent.uspc_primary, nber_map);
        } else if (table) {
            auto a = concordance::assign_uspc(patent.ipc_codes, *table, nber_map);
            if (a.assignable) out[patent.patent_id] = a.nber;
        }
    }
    return out;
}

namespace {

std::set<std::string> load_set(const std::string& path) {
    return analytics::load_id_list(path);
}

std::string series_name(analytics::Measure m) {
    switch (m) {
        case analytics::Measure::patent_count: return "patent_count";
        case analytics::Measure::frac_with_mnpr: return "frac_with_mnpr";
        case analytics::Measure::total_mnprs: return "total_mnprs";
        case analytics::Measure::mean_mnprs: return "mean_mnprs";
    }
    return "unknown";
}

void write_series(const analytics::YearlySeries& series, const std::string& path) {
    std::ostringstream out;
    out << "year\tvalue\n";
    for (const auto& [year, value] : series.points)
        out << year << "\t" << util::format_fixed(value, 6) << "\n";
    util::write_file(path, out.str());
}

void write_summary(const std::vector<analytics::SubcategorySummary>& rows,
                   const std::string& path) {
    std::ostringstream out;
    out << "subcategory\tname\tpatents_all\tpatents_with_mnpr\tpct_with_mnpr\t"
           "total_nprs\ttotal_mnprs\tpct_mnpr_of_npr\tmean_mnpr_all\t"
           "mean_mnpr_conditional\tflag\n";
    for (const auto& row : rows) {
        std::string sub = row.is_category_total
            ? std::to_string(row.subcategory.category) + "_total"
            : (row.subcategory.known() ? row.subcategory.subcategory : "??");
        out << sub << "\t" << row.subcategory.name << "\t" << row.patents_all << "\t"
            << row.patents_with_mnpr << "\t" << util::format_fixed(row.pct_with_mnpr, 2)
            << "\t" << row.total_nprs << "\t" << row.total_mnprs << "\t"
            << util::format_fixed(row.pct_mnpr_of_npr, 2) << "\t"
            << util::format_fixed(row.mean_mnpr_all, 3) << "\t"
            << util::format_fixed(row.mean_mnpr_conditional, 3) << "\t"
            << (row.conditional_mean_degenerate ? "no_mnpr_patents" : "-") << "\n";
    }
    util::write_file(path, out.str());
}

void write_histogram(const analytics::Histogram& h, const std::string& path) {
    std::ostringstream out;
    out << "bin_center\tcount\n";
    for (size_t i = 0; i < h.counts.size(); ++i)
        out << util::format_fixed(h.bin_centers[i], 4) << "\t" << h.counts[i] << "\n";
    out << "# local_minima:";
    for (double m : h.minima) out << " " << util::format_fixed(m, 4);
    out << "\n";
    util::write_file(path, out.str());
}

struct RunContext {
    fs::path out;
    ingest::Corpus corpus;
    taxonomy::NberMap nber_map;
    taxonomy::ClassifierConfig classifier;
    std::map<std::string, taxonomy::NberCategory> nber_by_patent;
    std::optional<concordance::ConcordanceTable> table;
    std::vector<ResolvedCitation> links;
    std::map<std::string, medline::PaperAttributes> paper_attrs;
    std::map<std::string, double> ls_scores;
};

void stage_ingest(const PipelineConfig& cfg, RunContext& ctx) {
    fs::create_directories(ctx.out / "corpus");
    std::set<std::string> uspc_set = load_set(cfg.uspc_set_path);
    std::set<std::string> withdrawn;
    if (cfg.withdrawn_path) withdrawn = load_set(*cfg.withdrawn_path);

    std::vector<PatentRecord> patents;
    std::vector<ingest::SkipReport> patent_skips;
    for (const auto& file : cfg.patent_files) {
        auto result = ingest::parse_grant_xml(util::read_file(file));
        patents.insert(patents.end(), result.records.begin(), result.records.end());
        patent_skips.insert(patent_skips.end(), result.skipped.begin(), result.skipped.end());
    }
    ctx.corpus.patents = ingest::filter_sample(patents, uspc_set, withdrawn, cfg.years);

    std::vector<ingest::SkipReport> paper_skips;
    for (const auto& file : cfg.paper_files) {
        auto result = ingest::parse_paper_records(util::read_file(file));
        ctx.corpus.papers.insert(ctx.corpus.papers.end(), result.records.begin(),
                                 result.records.end());
        paper_skips.insert(paper_skips.end(), result.skipped.begin(), result.skipped.end());
    }
    ingest::store_corpus(ctx.corpus, (ctx.out / "corpus").string());
    util::write_file((ctx.out / "corpus" / "patent_skips.tsv").string(),
                     ingest::skip_report_lines(patent_skips));
    util::write_file((ctx.out / "corpus" / "paper_skips.tsv").string(),
                     ingest::skip_report_lines(paper_skips));
}

void stage_concord(const PipelineConfig& cfg, RunContext& ctx) {
    if (!cfg.concordance_rows_path) return;
    auto rows = concordance::load_concordance_rows(*cfg.concordance_rows_path);
    ctx.table = concordance::build_concordance(rows);
    concordance::store_concordance(*ctx.table,
                                   (ctx.out / "concordance_table.tsv").string());
    std::ostringstream out;
    out << "patent_id\tchosen_uspc\tnber_subcategory\n";
    for (const auto& patent : ctx.corpus.patents) {
        if (patent.uspc_primary) continue;
        auto a = concordance::assign_uspc(patent.ipc_codes, *ctx.table, ctx.nber_map);
        if (!a.assignable) {
            out << patent.patent_id << "\t-\t??\n";
            continue;
        }
        ctx.nber_by_patent[patent.patent_id] = a.nber;
        out << patent.patent_id << "\t" << a.chosen << "\t"
            << (a.nber.known() ? a.nber.subcategory : "??") << "\n";
    }
    util::write_file((ctx.out / "concord_assignments.tsv").string(), out.str());
}

void stage_classify(const PipelineConfig& cfg, RunContext& ctx) {
    (void)cfg;
    ctx.nber_by_patent = assign_nber(ctx.corpus.patents, ctx.nber_map, nullptr);
    std::ostringstream out;
    out << "patent_id\tassignee_type\tstage\tlow_confidence\tfirst_country\t"
           "country_weights\tnber_subcategory\textra_assignees\n";
    for (const auto& patent : ctx.corpus.patents) {
        auto cls = taxonomy::classify_assignee(patent, ctx.classifier);
        auto cw = taxonomy::country_fractions(patent, ctx.classifier.country_fallback);
        auto first = taxonomy::first_inventor_country(patent, ctx.classifier.country_fallback);
        out << patent.patent_id << "\t" << taxonomy::to_string(cls.type) << "\t"
            << cls.stage << "\t" << (cls.low_confidence ? 1 : 0) << "\t"
            << first.value_or("UNK") << "\t";
        bool first_w = true;
        for (const auto& [cc, w] : cw.weights) {
            if (!first_w) out << ";";
            out << cc << ":" << util::format_fixed(w, 6);
            first_w = false;
        }
        if (cw.weights.empty()) out << "UNK";
        auto nber = ctx.nber_by_patent.find(patent.patent_id);
        out << "\t"
            << (nber != ctx.nber_by_patent.end() && nber->second.known()
                    ? nber->second.subcategory : "??")
            << "\t";
        bool first_e = true;
        for (const auto& name : cls.extra_assignees) {
            if (!first_e) out << ";";
            out << name;
            first_e = false;
        }
        out << "\n";
    }
    util::write_file((ctx.out / "classify.tsv").string(), out.str());
}

void stage_resolve(const PipelineConfig& cfg, RunContext& ctx) {
    resolver::PaperIndex index(ctx.corpus.papers);
    ctx.links = resolver::resolve_corpus(ctx.corpus.patents, index, cfg.resolver_threshold);
    resolver::store_links(ctx.links, (ctx.out / "links.tsv").string());
}

void stage_paperclass(const PipelineConfig& cfg, RunContext& ctx) {
    auto lexicon = medline::load_affiliation_lexicon(cfg.country_lexicon_path,
                                                     cfg.institution_lexicon_path);
    auto nih = medline::load_nih_institutes(cfg.nih_institutes_path);
    std::vector<medline::PaperAttributes> attrs;
    for (const auto& paper : ctx.corpus.papers) {
        attrs.push_back(medline::classify_paper(paper, lexicon, nih));
        ctx.paper_attrs[paper.paper_id] = attrs.back();
    }
    medline::store_paper_attributes(attrs, (ctx.out / "paper_attrs.tsv").string());
}

void stage_levelscore(const PipelineConfig& cfg, RunContext& ctx) {
    auto tree = levelscore::load_mesh_tree(cfg.mesh_tree_path);
    auto model = levelscore::train_model(ctx.corpus.papers, tree, cfg.ls_dim);
    levelscore::store_model(model, (ctx.out / "ls_model.tsv").string());
    size_t unscored = 0;
    for (const auto& paper : ctx.corpus.papers) {
        if (auto ls = levelscore::paper_level_score(model, paper))
            ctx.ls_scores[paper.paper_id] = *ls;
        else
            ++unscored;
    }
    levelscore::store_scores(ctx.ls_scores, (ctx.out / "ls_scores.tsv").string());
    util::write_file((ctx.out / "ls_coverage.tsv").string(),
                     "scored\t" + std::to_string(ctx.ls_scores.size()) + "\nunscored\t" +
                         std::to_string(unscored) + "\n");
}

std::string stage_analyze(const PipelineConfig& cfg, RunContext& ctx) {
    fs::create_directories(ctx.out / "analytics");
    fs::path dir = ctx.out / "analytics";
    auto facts = analytics::build_facts(ctx.corpus.patents, ctx.links, ctx.nber_by_patent,
                                        ctx.classifier);

    write_summary(analytics::summary_table(facts), (dir / "summary.tsv").string());

    for (auto measure : {analytics::Measure::patent_count, analytics::Measure::frac_with_mnpr,
                         analytics::Measure::total_mnprs, analytics::Measure::mean_mnprs}) {
        auto series = analytics::yearly_series(facts, measure);
        write_series(series, (dir / ("series_" + series_name(measure) + ".tsv")).string());
    }

    std::string note;
    try {
        auto series = analytics::yearly_series(facts, analytics::Measure::total_mnprs);
        auto fit = analytics::fit_exponential(series, cfg.years.first, cfg.years.last);
        std::ostringstream out;
        out << "slope\t" << util::format_fixed(fit.slope, 6) << "\n"
            << "intercept\t" << util::format_fixed(fit.intercept, 6) << "\n"
            << "doubling_time_years\t" << util::format_fixed(fit.doubling_time_years, 3)
            << "\n"
            << "r_squared\t" << util::format_fixed(fit.r_squared, 6) << "\n";
        util::write_file((dir / "fit_total_mnprs.tsv").string(), out.str());
    } catch (const std::exception& e) {
        note = std::string("exponential fit skipped: ") + e.what();
    }

    // per-year cited fractions for each dimension
    std::set<int> years;
    for (const auto& f : facts) years.insert(f.grant_year);
    const std::vector<std::pair<analytics::Dimension, std::string>> dims = {
        {analytics::Dimension::country, "country"},
        {analytics::Dimension::institution, "institution"},
        {analytics::Dimension::funding_usgov, "funding_usgov"},
        {analytics::Dimension::funding_nih, "funding_nih"},
    };
    for (const auto& [dim, name] : dims) {
        std::ostringstream out;
        out << "year\tkey\tfraction\n";
        for (int year : years) {
            for (const auto& [key, fraction] : analytics::cited_fractions(
                     facts, ctx.paper_attrs, year, dim, cfg.counting_mode)) {
                out << year << "\t" << key << "\t" << util::format_fixed(fraction, 3)
                    << "\n";
            }
        }
        util::write_file((dir / ("cited_" + name + ".tsv")).string(), out.str());
    }

    auto company_fractions = analytics::per_company_fractions(facts, ctx.paper_attrs);
    {
        std::ostringstream out;
        out << "company\tpublic_fraction\n";
        for (const auto& [company, fraction] : company_fractions)
            out << company << "\t" << util::format_fixed(fraction, 3) << "\n";
        util::write_file((dir / "companies.tsv").string(), out.str());
    }
    if (!company_fractions.empty()) {
        std::vector<double> values;
        for (const auto& [company, fraction] : company_fractions) values.push_back(fraction);
        std::ostringstream out;
        out << "fraction\tcumulative_share\n";
        for (const auto& [fraction, share] : analytics::public_fraction_cdf(values))
            out << util::format_fixed(fraction, 3) << "\t" << util::format_fixed(share, 3)
                << "\n";
        util::write_file((dir / "company_cdf.tsv").string(), out.str());
    }

    {
        std::vector<double> scores;
        for (const auto& [id, ls] : ctx.ls_scores) scores.push_back(ls);
        write_histogram(analytics::ls_histogram(scores), (dir / "ls_histogram.tsv").string());
    }

    if (cfg.fda_ids_path) {
        auto ids = analytics::load_id_list(*cfg.fda_ids_path);
        auto result = analytics::fda_subset_analysis(ids, facts, ctx.ls_scores,
                                                     cfg.ls_threshold);
        std::ostringstream out;
        out << "links_scored\t" << result.links_scored << "\n"
            << "share_below\t" << util::format_fixed(result.share_below, 3) << "\n"
            << "empty\t" << (result.empty ? 1 : 0) << "\n";
        util::write_file((dir / "fda_summary.tsv").string(), out.str());
        if (!result.empty)
            write_histogram(result.histogram, (dir / "fda_histogram.tsv").string());
    }
    return note;
}

void write_manifest(const fs::path& out, const PipelineConfig& cfg,
                    const std::string& config_digest,
                    const std::vector<StageStatus>& stages, bool complete) {
    json manifest;
    manifest["format"] = "scilink-run-manifest-v1";
    manifest["seed"] = cfg.seed;
    manifest["config_digest"] = config_digest;
    manifest["complete"] = complete;
    json stage_list = json::array();
    for (const auto& s : stages)
        stage_list.push_back({{"name", s.name}, {"ok", s.ok}, {"message", s.message}});
    manifest["stages"] = stage_list;

    json inputs = json::object();
    auto add_input = [&inputs](const std::string& path) {
        inputs[path] = util::fnv1a64_hex(util::read_file(path));
    };
    for (const auto& f : cfg.patent_files) add_input(f);
    for (const auto& f : cfg.paper_files) add_input(f);
    manifest["input_digests"] = inputs;

    json outputs = json::object();
    std::vector<std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(out)) {
        if (!entry.is_regular_file()) continue;
        if (entry.path().filename() == "manifest.json") continue;
        files.push_back(fs::relative(entry.path(), out).generic_string());
    }
    std::sort(files.begin(), files.end());
    for (const auto& rel : files)
        outputs[rel] = util::fnv1a64_hex(util::read_file((out / rel).string()));
    manifest["output_digests"] = outputs;

    util::write_file((out / "manifest.json").string(), manifest.dump(2) + "\n");
}

}  // namespace

RunResult run_pipeline(const PipelineConfig& cfg, const std::string& out_dir) {
    RunResult result;
    cfg.validate();
    RunContext ctx;
    ctx.out = fs::path(out_dir);
    fs::create_directories(ctx.out);

    std::string config_digest;
    {
        std::ostringstream repr;
        repr << cfg.years.first << ":" << cfg.years.last << "|" << cfg.resolver_threshold
             << "|" << cfg.ls_dim << "|" << cfg.ls_threshold << "|" << cfg.seed;
        for (const auto& f : cfg.patent_files) repr << "|" << f;
        for (const auto& f : cfg.paper_files) repr << "|" << f;
        config_digest = util::fnv1a64_hex(repr.str());
    }

    ctx.nber_map = taxonomy::load_nber_map(cfg.nber_map_path);
    ctx.classifier = load_classifier_config(cfg);

    struct Stage {
        const char* name;
        std::function<std::string()> run;
    };
    std::vector<Stage> stages = {
        {"ingest", [&] { stage_ingest(cfg, ctx); return std::string(); }},
        {"classify", [&] { stage_classify(cfg, ctx); return std::string(); }},
        {"concord", [&] { stage_concord(cfg, ctx); return std::string(); }},
        {"resolve", [&] { stage_resolve(cfg, ctx); return std::string(); }},
        {"paperclass", [&] { stage_paperclass(cfg, ctx); return std::string(); }},
        {"levelscore", [&] { stage_levelscore(cfg, ctx); return std::string(); }},
        {"analyze", [&] { return stage_analyze(cfg, ctx); }},
    };

    bool failed = false;
    for (auto& stage : stages) {
        StageStatus status;
        status.name = stage.name;
        if (failed) {
            status.message = "not run";
            result.stages.push_back(status);
            continue;
        }
        try {
            status.message = stage.run();
            status.ok = true;
        } catch (const std::exception& e) {
            status.message = e.what();
            failed = true;
        }
        result.stages.push_back(status);
    }
    result.ok = !failed;
    write_manifest(ctx.out, cfg, config_digest, result.stages, result.ok);
    return result;
}

}  // namespace scilink::pipeline
