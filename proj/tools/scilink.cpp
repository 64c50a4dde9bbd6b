// Command-line front end for the science-linkage pipeline.

#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "scilink/analytics.hpp"
#include "scilink/concordance.hpp"
#include "scilink/ingest.hpp"
#include "scilink/levelscore.hpp"
#include "scilink/medline.hpp"
#include "scilink/pipeline.hpp"
#include "scilink/resolver.hpp"
#include "scilink/taxonomy.hpp"
#include "scilink/util.hpp"

namespace fs = std::filesystem;
using namespace scilink;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitStage = 3;

int cmd_ingest_patents(const std::vector<std::string>& files, const std::string& out,
                       const std::string& withdrawn, const std::string& years,
                       const std::string& uspc_set) {
    auto parts = util::split(years, ':');
    if (parts.size() != 2) {
        std::cerr << "--years must be FIRST:LAST\n";
        return kExitUsage;
    }
    ingest::YearRange range;
    range.first = static_cast<int>(util::parse_int(parts[0]).value_or(0));
    range.last = static_cast<int>(util::parse_int(parts[1]).value_or(0));

    std::set<std::string> uspc = analytics::load_id_list(uspc_set);
    std::set<std::string> withdrawn_ids;
    if (!withdrawn.empty()) withdrawn_ids = analytics::load_id_list(withdrawn);

    std::vector<PatentRecord> records;
    std::vector<ingest::SkipReport> skips;
    for (const auto& file : files) {
        auto result = ingest::parse_grant_xml(util::read_file(file));
        records.insert(records.end(), result.records.begin(), result.records.end());
        skips.insert(skips.end(), result.skipped.begin(), result.skipped.end());
    }
    auto filtered = ingest::filter_sample(records, uspc, withdrawn_ids, range);
    ingest::store_patents(filtered, out);
    util::write_file((fs::path(out) / "patent_skips.tsv").string(),
                     ingest::skip_report_lines(skips));
    std::cout << "parsed " << records.size() << ", retained " << filtered.size()
              << ", skipped documents " << skips.size() << "\n";
    return kExitOk;
}

int cmd_ingest_papers(const std::vector<std::string>& files, const std::string& out) {
    std::vector<PaperRecord> records;
    std::vector<ingest::SkipReport> skips;
    for (const auto& file : files) {
        auto result = ingest::parse_paper_records(util::read_file(file));
        records.insert(records.end(), result.records.begin(), result.records.end());
        skips.insert(skips.end(), result.skipped.begin(), result.skipped.end());
    }
    ingest::store_papers(records, out);
    util::write_file((fs::path(out) / "paper_skips.tsv").string(),
                     ingest::skip_report_lines(skips));
    std::cout << "parsed " << records.size() << ", skipped " << skips.size() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"patent-to-paper science linkage pipeline"};
    app.require_subcommand(1);

    // ingest
    auto* ingest_cmd = app.add_subcommand("ingest", "parse inputs into a corpus");
    ingest_cmd->require_subcommand(1);
    std::vector<std::string> in_files;
    std::string out_dir, withdrawn_file, years = "1976:2012", uspc_file;
    auto* ing_pat = ingest_cmd->add_subcommand("patents", "parse grant XML files");
    ing_pat->add_option("files", in_files)->required();
    ing_pat->add_option("--out", out_dir)->required();
    ing_pat->add_option("--withdrawn", withdrawn_file);
    ing_pat->add_option("--years", years);
    ing_pat->add_option("--uspc-set", uspc_file)->required();
    auto* ing_pap = ingest_cmd->add_subcommand("papers", "parse paper metadata files");
    ing_pap->add_option("files", in_files)->required();
    ing_pap->add_option("--out", out_dir)->required();

    // classify
    std::string corpus_dir, out_file, nber_file, role_file, keyword_file, names_file,
        fallback_file;
    auto* classify_cmd = app.add_subcommand("classify", "country/assignee/NBER per patent");
    classify_cmd->add_option("--corpus", corpus_dir)->required();
    classify_cmd->add_option("--nber-map", nber_file)->required();
    classify_cmd->add_option("--role-map", role_file)->required();
    classify_cmd->add_option("--keywords", keyword_file)->required();
    classify_cmd->add_option("--names", names_file);
    classify_cmd->add_option("--fallback", fallback_file);
    classify_cmd->add_option("--out", out_file)->required();

    // concord
    auto* concord_cmd = app.add_subcommand("concord", "IPC to USPC concordance");
    concord_cmd->require_subcommand(1);
    std::string rows_file, table_file, labeled_file;
    auto* con_build = concord_cmd->add_subcommand("build", "build fractional table");
    con_build->add_option("--rows", rows_file)->required();
    con_build->add_option("--out", out_file)->required();
    auto* con_assign = concord_cmd->add_subcommand("assign", "assign classes via table");
    con_assign->add_option("--corpus", corpus_dir)->required();
    con_assign->add_option("--table", table_file)->required();
    con_assign->add_option("--nber-map", nber_file)->required();
    con_assign->add_option("--out", out_file)->required();
    auto* con_validate = concord_cmd->add_subcommand("validate", "check dual-labeled patents");
    con_validate->add_option("--labeled", labeled_file)->required();
    con_validate->add_option("--table", table_file)->required();
    con_validate->add_option("--nber-map", nber_file)->required();

    // resolve
    std::string patents_dir, papers_dir;
    double threshold = 0.7;
    auto* resolve_cmd = app.add_subcommand("resolve", "match NPR strings to papers");
    resolve_cmd->add_option("--patents", patents_dir)->required();
    resolve_cmd->add_option("--papers", papers_dir)->required();
    resolve_cmd->add_option("--threshold", threshold);
    resolve_cmd->add_option("--out", out_file)->required();

    // paperclass
    std::string country_lex, inst_lex, nih_file;
    auto* paperclass_cmd = app.add_subcommand("paperclass", "paper country/type/funding");
    paperclass_cmd->add_option("--corpus", corpus_dir)->required();
    paperclass_cmd->add_option("--country-lexicon", country_lex)->required();
    paperclass_cmd->add_option("--institution-lexicon", inst_lex)->required();
    paperclass_cmd->add_option("--nih", nih_file)->required();
    paperclass_cmd->add_option("--out", out_file)->required();

    // levelscore
    auto* ls_cmd = app.add_subcommand("levelscore", "basic-applied level score");
    ls_cmd->require_subcommand(1);
    std::string mesh_file, model_file;
    int dim = 50;
    auto* ls_train = ls_cmd->add_subcommand("train", "fit embedding and axis");
    ls_train->add_option("--papers", papers_dir)->required();
    ls_train->add_option("--mesh", mesh_file)->required();
    ls_train->add_option("--dim", dim);
    ls_train->add_option("--out", out_file)->required();
    auto* ls_score = ls_cmd->add_subcommand("score", "score papers with a model");
    ls_score->add_option("--model", model_file)->required();
    ls_score->add_option("--papers", papers_dir)->required();
    ls_score->add_option("--out", out_file)->required();

    // analyze
    std::string what, links_file, attrs_file, ls_file, measure_name = "patent_count",
                dimension_name = "country", company, fda_file, country_slice;
    int year = 0, category_slice = 0;
    std::string fit_years = "1976:2012";
    double ls_threshold = 0.16;
    auto* analyze_cmd = app.add_subcommand("analyze", "statistics over a resolved corpus");
    analyze_cmd->add_option("what", what)->required()->check(
        CLI::IsMember({"summary", "series", "fit", "cited", "companies", "fda"}));
    analyze_cmd->add_option("--corpus", corpus_dir)->required();
    analyze_cmd->add_option("--links", links_file)->required();
    analyze_cmd->add_option("--nber-map", nber_file)->required();
    analyze_cmd->add_option("--role-map", role_file)->required();
    analyze_cmd->add_option("--keywords", keyword_file)->required();
    analyze_cmd->add_option("--names", names_file);
    analyze_cmd->add_option("--fallback", fallback_file);
    analyze_cmd->add_option("--rows", rows_file);
    analyze_cmd->add_option("--attrs", attrs_file);
    analyze_cmd->add_option("--ls", ls_file);
    analyze_cmd->add_option("--measure", measure_name)->check(
        CLI::IsMember({"patent_count", "frac_with_mnpr", "total_mnprs", "mean_mnprs"}));
    analyze_cmd->add_option("--dimension", dimension_name)->check(
        CLI::IsMember({"country", "institution", "funding_usgov", "funding_nih"}));
    analyze_cmd->add_option("--year", year);
    analyze_cmd->add_option("--category", category_slice);
    analyze_cmd->add_option("--country", country_slice);
    analyze_cmd->add_option("--company", company);
    analyze_cmd->add_option("--fda-ids", fda_file);
    analyze_cmd->add_option("--fit-years", fit_years);
    analyze_cmd->add_option("--ls-threshold", ls_threshold);
    analyze_cmd->add_option("--out", out_file)->required();

    // run
    std::string config_file;
    unsigned seed = 0;
    int threads = 1;
    bool seed_set = false, threads_set = false;
    auto* run_cmd = app.add_subcommand("run", "full pipeline from a config file");
    run_cmd->add_option("--config", config_file)->required();
    run_cmd->add_option("--out", out_dir)->required();
    run_cmd->add_option("--seed", seed)->each([&](const std::string&) { seed_set = true; });
    run_cmd->add_option("--threads", threads)->each([&](const std::string&) { threads_set = true; });

    CLI11_PARSE(app, argc, argv);

    try {
        if (ing_pat->parsed())
            return cmd_ingest_patents(in_files, out_dir, withdrawn_file, years, uspc_file);
        if (ing_pap->parsed()) return cmd_ingest_papers(in_files, out_dir);

        if (classify_cmd->parsed()) {
            auto corpus = ingest::load_corpus(corpus_dir);
            taxonomy::ClassifierConfig cc;
            cc.role_codes = taxonomy::load_role_map(role_file);
            cc.keyword_rules = taxonomy::load_keyword_rules(keyword_file);
            if (!names_file.empty()) cc.known_names = taxonomy::load_name_table(names_file);
            if (!fallback_file.empty())
                cc.country_fallback = taxonomy::load_fallback_table(fallback_file);
            auto nber_map = taxonomy::load_nber_map(nber_file);
            std::ostringstream out;
            out << "patent_id\tassignee_type\tstage\tlow_confidence\tfirst_country\t"
                   "country_weights\tnber_subcategory\n";
            for (const auto& patent : corpus.patents) {
                auto cls = taxonomy::classify_assignee(patent, cc);
                auto cw = taxonomy::country_fractions(patent, cc.country_fallback);
                auto first = taxonomy::first_inventor_country(patent, cc.country_fallback);
                auto nber = patent.uspc_primary
                    ? taxonomy::nber_category(*patent.uspc_primary, nber_map)
                    : taxonomy::NberCategory{};
                out << patent.patent_id << "\t" << taxonomy::to_string(cls.type) << "\t"
                    << cls.stage << "\t" << (cls.low_confidence ? 1 : 0) << "\t"
                    << first.value_or("UNK") << "\t";
                bool first_w = true;
                for (const auto& [code, weight] : cw.weights) {
                    if (!first_w) out << ";";
                    out << code << ":" << util::format_fixed(weight, 6);
                    first_w = false;
                }
                if (cw.weights.empty()) out << "UNK";
                out << "\t" << (nber.known() ? nber.subcategory : "??") << "\n";
            }
            util::write_file(out_file, out.str());
            return kExitOk;
        }

        if (con_build->parsed()) {
            auto rows = concordance::load_concordance_rows(rows_file);
            auto table = concordance::build_concordance(rows);
            concordance::store_concordance(table, out_file);
            std::cout << "ipc codes: " << table.ipc_to_uspc.size()
                      << ", skipped rows: " << table.skipped_rows.size() << "\n";
            return kExitOk;
        }
        if (con_assign->parsed()) {
            auto corpus = ingest::load_corpus(corpus_dir);
            auto table = concordance::load_concordance(table_file);
            auto nber_map = taxonomy::load_nber_map(nber_file);
            std::ostringstream out;
            out << "patent_id\tchosen_uspc\tnber_subcategory\tweights\n";
            for (const auto& patent : corpus.patents) {
                auto a = concordance::assign_uspc(patent.ipc_codes, table, nber_map);
                out << patent.patent_id << "\t" << (a.assignable ? a.chosen : "-") << "\t"
                    << (a.assignable && a.nber.known() ? a.nber.subcategory : "??") << "\t";
                bool first_w = true;
                for (const auto& [klass, weight] : a.weights) {
                    if (!first_w) out << ";";
                    out << klass << ":" << util::format_fixed(weight, 3);
                    first_w = false;
                }
                out << "\n";
            }
            util::write_file(out_file, out.str());
            return kExitOk;
        }
        if (con_validate->parsed()) {
            auto labeled = concordance::load_dual_labeled(labeled_file);
            auto table = concordance::load_concordance(table_file);
            auto nber_map = taxonomy::load_nber_map(nber_file);
            auto result = concordance::validate_concordance(labeled, table, nber_map);
            std::cout << "accuracy\t" << util::format_fixed(result.accuracy, 3) << "\n";
            for (const auto& [key, count] : result.confusion)
                std::cout << "confusion\t" << key.first << "\t" << key.second << "\t"
                          << count << "\n";
            return kExitOk;
        }

        if (resolve_cmd->parsed()) {
            auto patents = ingest::load_corpus(patents_dir).patents;
            auto papers = ingest::load_corpus(papers_dir).papers;
            resolver::PaperIndex index(papers);
            auto links = resolver::resolve_corpus(patents, index, threshold);
            resolver::store_links(links, out_file);
            size_t accepted = 0;
            for (const auto& link : links)
                if (link.accepted()) ++accepted;
            std::cout << "nprs " << links.size() << ", resolved " << accepted << "\n";
            return kExitOk;
        }

        if (paperclass_cmd->parsed()) {
            auto corpus = ingest::load_corpus(corpus_dir);
            auto lexicon = medline::load_affiliation_lexicon(country_lex, inst_lex);
            auto nih = medline::load_nih_institutes(nih_file);
            std::vector<medline::PaperAttributes> attrs;
            for (const auto& paper : corpus.papers)
                attrs.push_back(medline::classify_paper(paper, lexicon, nih));
            medline::store_paper_attributes(attrs, out_file);
            return kExitOk;
        }

        if (ls_train->parsed()) {
            auto papers = ingest::load_corpus(papers_dir).papers;
            auto tree = levelscore::load_mesh_tree(mesh_file);
            auto model = levelscore::train_model(papers, tree, dim);
            levelscore::store_model(model, out_file);
            return kExitOk;
        }
        if (ls_score->parsed()) {
            auto papers = ingest::load_corpus(papers_dir).papers;
            auto model = levelscore::load_model(model_file);
            std::map<std::string, double> scores;
            for (const auto& paper : papers) {
                if (auto ls = levelscore::paper_level_score(model, paper))
                    scores[paper.paper_id] = *ls;
            }
            levelscore::store_scores(scores, out_file);
            return kExitOk;
        }

        if (analyze_cmd->parsed()) {
            auto corpus = ingest::load_corpus(corpus_dir);
            auto links = resolver::load_links(links_file);
            auto nber_map = taxonomy::load_nber_map(nber_file);
            taxonomy::ClassifierConfig cc;
            cc.role_codes = taxonomy::load_role_map(role_file);
            cc.keyword_rules = taxonomy::load_keyword_rules(keyword_file);
            if (!names_file.empty()) cc.known_names = taxonomy::load_name_table(names_file);
            if (!fallback_file.empty())
                cc.country_fallback = taxonomy::load_fallback_table(fallback_file);
            std::optional<concordance::ConcordanceTable> table;
            if (!rows_file.empty())
                table = concordance::build_concordance(
                    concordance::load_concordance_rows(rows_file));
            auto nber_by_patent = pipeline::assign_nber(corpus.patents, nber_map,
                                                        table ? &*table : nullptr);
            auto facts = analytics::build_facts(corpus.patents, links, nber_by_patent, cc);
            std::map<std::string, medline::PaperAttributes> attrs;
            if (!attrs_file.empty()) attrs = medline::load_paper_attributes(attrs_file);
            std::map<std::string, double> ls_table;
            if (!ls_file.empty()) ls_table = levelscore::load_scores(ls_file);

            std::ostringstream out;
            if (what == "summary") {
                out << "subcategory\tpatents_all\tpatents_with_mnpr\tpct_with_mnpr\t"
                       "total_nprs\ttotal_mnprs\tpct_mnpr_of_npr\tmean_mnpr_all\t"
                       "mean_mnpr_conditional\n";
                for (const auto& row : analytics::summary_table(facts)) {
                    std::string sub = row.is_category_total
                        ? std::to_string(row.subcategory.category) + "_total"
                        : (row.subcategory.known() ? row.subcategory.subcategory : "??");
                    out << sub << "\t" << row.patents_all << "\t" << row.patents_with_mnpr
                        << "\t" << util::format_fixed(row.pct_with_mnpr, 2) << "\t"
                        << row.total_nprs << "\t" << row.total_mnprs << "\t"
                        << util::format_fixed(row.pct_mnpr_of_npr, 2) << "\t"
                        << util::format_fixed(row.mean_mnpr_all, 3) << "\t"
                        << util::format_fixed(row.mean_mnpr_conditional, 3) << "\n";
                }
            } else if (what == "series" || what == "fit") {
                analytics::Measure measure = analytics::Measure::patent_count;
                if (measure_name == "frac_with_mnpr") measure = analytics::Measure::frac_with_mnpr;
                else if (measure_name == "total_mnprs") measure = analytics::Measure::total_mnprs;
                else if (measure_name == "mean_mnprs") measure = analytics::Measure::mean_mnprs;
                analytics::SeriesSlice slice;
                if (category_slice > 0) slice.category = category_slice;
                if (!country_slice.empty()) slice.country = country_slice;
                auto series = analytics::yearly_series(facts, measure, slice);
                if (what == "series") {
                    out << "year\tvalue\n";
                    for (const auto& [y, v] : series.points)
                        out << y << "\t" << util::format_fixed(v, 6) << "\n";
                } else {
                    auto parts = util::split(fit_years, ':');
                    auto fit = analytics::fit_exponential(
                        series, static_cast<int>(util::parse_int(parts.at(0)).value()),
                        static_cast<int>(util::parse_int(parts.at(1)).value()));
                    out << "slope\t" << util::format_fixed(fit.slope, 6) << "\n"
                        << "intercept\t" << util::format_fixed(fit.intercept, 6) << "\n"
                        << "doubling_time_years\t"
                        << util::format_fixed(fit.doubling_time_years, 3) << "\n"
                        << "r_squared\t" << util::format_fixed(fit.r_squared, 6) << "\n";
                }
            } else if (what == "cited") {
                analytics::Dimension dim = analytics::Dimension::country;
                if (dimension_name == "institution") dim = analytics::Dimension::institution;
                else if (dimension_name == "funding_usgov") dim = analytics::Dimension::funding_usgov;
                else if (dimension_name == "funding_nih") dim = analytics::Dimension::funding_nih;
                out << "key\tfraction\n";
                for (const auto& [key, fraction] :
                     analytics::cited_fractions(facts, attrs, year, dim))
                    out << key << "\t" << util::format_fixed(fraction, 3) << "\n";
            } else if (what == "companies") {
                if (!company.empty()) {
                    auto profile = analytics::company_public_fraction(facts, attrs, company);
                    out << "total_links\t" << profile.total_links << "\n";
                    for (const auto& [inst, count] : profile.counts)
                        out << medline::to_string(inst) << "\t" << count << "\n";
                    if (profile.public_fraction)
                        out << "public_fraction\t"
                            << util::format_fixed(*profile.public_fraction, 2) << "\n";
                } else {
                    out << "company\tpublic_fraction\n";
                    for (const auto& [name, fraction] :
                         analytics::per_company_fractions(facts, attrs))
                        out << name << "\t" << util::format_fixed(fraction, 3) << "\n";
                }
            } else if (what == "fda") {
                if (fda_file.empty()) {
                    std::cerr << "--fda-ids is required for 'fda'\n";
                    return kExitUsage;
                }
                auto ids = analytics::load_id_list(fda_file);
                auto result =
                    analytics::fda_subset_analysis(ids, facts, ls_table, ls_threshold);
                out << "links_scored\t" << result.links_scored << "\n"
                    << "share_below\t" << util::format_fixed(result.share_below, 3) << "\n"
                    << "empty\t" << (result.empty ? 1 : 0) << "\n";
                if (result.empty)
                    std::cerr << "warning: no overlap between the id list and the corpus\n";
            }
            util::write_file(out_file, out.str());
            return kExitOk;
        }

        if (run_cmd->parsed()) {
            auto cfg = pipeline::PipelineConfig::load(config_file);
            if (seed_set) cfg.seed = seed;
            if (threads_set) cfg.threads = threads;
            auto result = pipeline::run_pipeline(cfg, out_dir);
            for (const auto& stage : result.stages) {
                std::cout << stage.name << "\t" << (stage.ok ? "ok" : "FAILED");
                if (!stage.message.empty()) std::cout << "\t" << stage.message;
                std::cout << "\n";
            }
            return result.ok ? kExitOk : kExitStage;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }

    std::cerr << "no subcommand executed\n";
    return kExitUsage;
}
