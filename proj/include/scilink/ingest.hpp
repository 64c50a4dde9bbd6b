#pragma once

#include <set>
#include <string>
#include <vector>

#include "scilink/records.hpp"

namespace scilink::ingest {

struct SkipReport {
    size_t document_offset = 0;  // byte offset of the document in the stream
    std::string reason;
};

struct GrantParseResult {
    std::vector<PatentRecord> records;
    std::vector<SkipReport> skipped;
    size_t documents_encountered = 0;
};

/// Parse a bulk grant stream: one or more XML grant documents concatenated,
/// each starting with its own `<?xml` declaration. Malformed documents are
/// skipped and reported, never abort the batch.
GrantParseResult parse_grant_xml(const std::string& document_bytes);

struct PaperParseResult {
    std::vector<PaperRecord> records;
    std::vector<SkipReport> skipped;
    size_t documents_encountered = 0;
};

/// Parse MEDLINE-style tagged records ("PMID- ...", blank-line separated).
PaperParseResult parse_paper_records(const std::string& bytes);

struct YearRange {
    int first = 1976;
    int last = 2012;
    bool contains(int y) const { return y >= first && y <= last; }
};

/// The §3.1-style sample filter: not-withdrawn utility patents in the year
/// range whose primary 3-digit USPC class is in the life-science set.
std::vector<PatentRecord> filter_sample(const std::vector<PatentRecord>& records,
                                        const std::set<std::string>& uspc_lifesci_set,
                                        const std::set<std::string>& withdrawn_ids,
                                        const YearRange& years);

struct Corpus {
    std::vector<PatentRecord> patents;
    std::vector<PaperRecord> papers;

    bool operator==(const Corpus&) const = default;
};

/// Persist as newline-delimited JSON under `dir` (patents.ndjson,
/// papers.ndjson). Deterministic: same input, byte-identical files.
/// Throws on duplicate ids, naming the offender.
void store_corpus(const Corpus& corpus, const std::string& dir);
Corpus load_corpus(const std::string& dir);

void store_patents(const std::vector<PatentRecord>& records, const std::string& dir);
void store_papers(const std::vector<PaperRecord>& records, const std::string& dir);

std::string skip_report_lines(const std::vector<SkipReport>& skipped);

}  // namespace scilink::ingest
