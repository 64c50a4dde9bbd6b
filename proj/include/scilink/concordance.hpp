#pragma once

#include <map>
#include <string>
#include <vector>

#include "scilink/taxonomy.hpp"

namespace scilink::concordance {

/// Table key form: uppercase, slashes removed, whitespace collapsed
/// ("A61K 51/00" -> "A61K 5100").
std::string normalize_ipc(const std::string& code);

struct ConcordanceRow {
    std::string uspc_class;     // 3-digit
    std::string uspc_subclass;
    std::string ipc_code;
};

/// Fractional IPC -> 3-digit-USPC weight map. Per-IPC weights sum to 1.
struct ConcordanceTable {
    std::map<std::string, std::map<std::string, double>> ipc_to_uspc;
    std::vector<std::string> skipped_rows;
};

ConcordanceTable build_concordance(const std::vector<ConcordanceRow>& rows);

ConcordanceTable load_concordance(const std::string& path);
void store_concordance(const ConcordanceTable& table, const std::string& path);
std::vector<ConcordanceRow> load_concordance_rows(const std::string& path);

struct UspcAssignment {
    bool assignable = false;
    std::map<std::string, double> weights;  // sums to 1 when assignable
    std::string chosen;                     // argmax, ties to smallest class
    taxonomy::NberCategory nber;
    std::vector<std::string> unmatched_ipc;  // codes absent from the table
};

/// Patent-level class weights: average of per-IPC weight vectors over the
/// patent's distinct matched IPC codes.
UspcAssignment assign_uspc(const std::vector<std::string>& ipc_codes,
                           const ConcordanceTable& table,
                           const taxonomy::NberMap& nber_map);

struct DualLabeledPatent {
    std::string patent_id;
    std::vector<std::string> ipc_codes;
    int truth_category = 0;  // NBER category from ground-truth USPC
};

struct ValidationResult {
    double accuracy = 0.0;
    size_t agreements = 0;
    size_t total = 0;
    // (assigned category, truth category) -> count; category 0 = unassignable
    std::map<std::pair<int, int>, size_t> confusion;
};

ValidationResult validate_concordance(const std::vector<DualLabeledPatent>& labeled,
                                      const ConcordanceTable& table,
                                      const taxonomy::NberMap& nber_map);

std::vector<DualLabeledPatent> load_dual_labeled(const std::string& path);

}  // namespace scilink::concordance
