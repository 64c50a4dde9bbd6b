#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scilink/analytics.hpp"
#include "scilink/concordance.hpp"
#include "scilink/ingest.hpp"
#include "scilink/levelscore.hpp"
#include "scilink/taxonomy.hpp"

namespace scilink::pipeline {

/// Whole-run configuration, loaded from a plain key/value file
/// (`key<TAB>value`, '#' comments). Relative paths resolve against the
/// config file's directory.
struct PipelineConfig {
    std::vector<std::string> patent_files;
    std::vector<std::string> paper_files;
    std::optional<std::string> withdrawn_path;
    ingest::YearRange years;
    std::string uspc_set_path;
    std::string nber_map_path;
    std::optional<std::string> assignee_names_path;
    std::string role_map_path;
    std::string assignee_keywords_path;
    std::optional<std::string> country_fallback_path;
    std::string country_lexicon_path;
    std::string institution_lexicon_path;
    std::string nih_institutes_path;
    std::string mesh_tree_path;
    std::optional<std::string> concordance_rows_path;
    std::optional<std::string> fda_ids_path;
    double resolver_threshold = 0.7;
    int ls_dim = 50;
    double ls_threshold = 0.16;
    analytics::CountingMode counting_mode = analytics::CountingMode::reference_level;
    analytics::CountryMode country_mode = analytics::CountryMode::fractional;
    unsigned seed = 42;
    int threads = 1;

    static PipelineConfig load(const std::string& path);
    /// Throws naming the first missing referenced file.
    void validate() const;
};

struct StageStatus {
    std::string name;
    bool ok = false;
    std::string message;
};

struct RunResult {
    std::vector<StageStatus> stages;
    bool ok = false;
};

/// Execute ingest -> classify -> concord -> resolve -> paperclass ->
/// levelscore -> analyze into `out_dir`, then write manifest.json with the
/// config digest and per-file digests. A stage failure halts the run; the
/// manifest marks it incomplete.
RunResult run_pipeline(const PipelineConfig& config, const std::string& out_dir);

taxonomy::ClassifierConfig load_classifier_config(const PipelineConfig& config);

/// NBER assignment per patent: USPC primary class where present, the IPC
/// concordance otherwise (when a table is available).
std::map<std::string, taxonomy::NberCategory> assign_nber(
    const std::vector<PatentRecord>& patents, const taxonomy::NberMap& nber_map,
    const concordance::ConcordanceTable* table);

}  // namespace scilink::pipeline
