#include "scilink/concordance.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "scilink/util.hpp"

namespace scilink::concordance {

std::string normalize_ipc(const std::string& code) {
    std::string out;
    bool pending_space = false;
    for (unsigned char c : code) {
        if (c == '/') continue;
        if (std::isspace(c)) {
            pending_space = true;
            continue;
        }
        if (pending_space && !out.empty()) out.push_back(' ');
        pending_space = false;
        out.push_back(static_cast<char>(std::toupper(c)));
    }
    return out;
}

namespace {

bool plausible_ipc(const std::string& normalized) {
    // section letter + digits + subclass letter at minimum, e.g. "A61K"
    if (normalized.size() < 4) return false;
    return std::isalpha((unsigned char)normalized[0]) &&
           std::isdigit((unsigned char)normalized[1]);
}

}  // namespace

ConcordanceTable build_concordance(const std::vector<ConcordanceRow>& rows) {
    if (rows.empty())
        throw std::invalid_argument("concordance row set is empty");
    ConcordanceTable table;
    // ipc -> set of distinct (class, subclass) pairs
    std::map<std::string, std::set<std::pair<std::string, std::string>>> pairs;
    for (const auto& row : rows) {
        std::string ipc = normalize_ipc(row.ipc_code);
        if (!plausible_ipc(ipc)) {
            table.skipped_rows.push_back(row.ipc_code);
            continue;
        }
        pairs[ipc].insert({row.uspc_class, row.uspc_subclass});
    }
    for (const auto& [ipc, subclasses] : pairs) {
        const double k = static_cast<double>(subclasses.size());
        auto& weights = table.ipc_to_uspc[ipc];
        for (const auto& [klass, sub] : subclasses) weights[klass] += 1.0 / k;
    }
    return table;
}

std::vector<ConcordanceRow> load_concordance_rows(const std::string& path) {
    std::vector<ConcordanceRow> rows;
    for (const auto& row : util::read_tsv(path)) {
        if (row.size() < 3) continue;
        rows.push_back({row[0], row[1], row[2]});
    }
    return rows;
}

void store_concordance(const ConcordanceTable& table, const std::string& path) {
    std::ostringstream out;
    out << "# ipc\tuspc_class\tweight\n";
    for (const auto& [ipc, weights] : table.ipc_to_uspc)
        for (const auto& [klass, w] : weights)
            out << ipc << "\t" << klass << "\t" << util::format_fixed(w, 12) << "\n";
    util::write_file(path, out.str());
}

ConcordanceTable load_concordance(const std::string& path) {
    ConcordanceTable table;
    for (const auto& row : util::read_tsv(path)) {
        if (row.size() < 3) continue;
        table.ipc_to_uspc[row[0]][row[1]] = std::stod(row[2]);
    }
    if (table.ipc_to_uspc.empty())
        throw std::runtime_error("empty concordance table: " + path);
    return table;
}

UspcAssignment assign_uspc(const std::vector<std::string>& ipc_codes,
                           const ConcordanceTable& table,
                           const taxonomy::NberMap& nber_map) {
    UspcAssignment result;
    std::set<std::string> distinct;  // identical codes count once
    for (const auto& code : ipc_codes) distinct.insert(normalize_ipc(code));

    std::vector<const std::map<std::string, double>*> matched;
    for (const auto& code : distinct) {
        auto it = table.ipc_to_uspc.find(code);
        if (it == table.ipc_to_uspc.end()) result.unmatched_ipc.push_back(code);
        else matched.push_back(&it->second);
    }
    if (matched.empty()) return result;  // unassignable

    const double m = static_cast<double>(matched.size());
    for (const auto* weights : matched)
        for (const auto& [klass, w] : *weights) result.weights[klass] += w / m;

    // argmax; ties broken by lexicographically smallest class (map order)
    double best = -1.0;
    for (const auto& [klass, w] : result.weights) {
        if (w > best) {
            best = w;
            result.chosen = klass;
        }
    }
    result.assignable = true;
    result.nber = taxonomy::nber_category(result.chosen, nber_map);
    return result;
}

ValidationResult validate_concordance(const std::vector<DualLabeledPatent>& labeled,
                                      const ConcordanceTable& table,
                                      const taxonomy::NberMap& nber_map) {
    if (labeled.empty())
        throw std::invalid_argument("no dual-labeled patents supplied");
    ValidationResult result;
    result.total = labeled.size();
    for (const auto& patent : labeled) {
        UspcAssignment a = assign_uspc(patent.ipc_codes, table, nber_map);
        int assigned = a.assignable ? a.nber.category : 0;
        ++result.confusion[{assigned, patent.truth_category}];
        if (assigned != 0 && assigned == patent.truth_category) ++result.agreements;
    }
    result.accuracy = static_cast<double>(result.agreements) / result.total;
    return result;
}

std::vector<DualLabeledPatent> load_dual_labeled(const std::string& path) {
    // patent_id<TAB>truth_category<TAB>ipc;ipc;...
    std::vector<DualLabeledPatent> out;
    for (const auto& row : util::read_tsv(path)) {
        if (row.size() < 3) continue;
        DualLabeledPatent p;
        p.patent_id = row[0];
        p.truth_category = static_cast<int>(util::parse_int(row[1]).value_or(0));
        for (const auto& code : util::split(row[2], ';')) {
            std::string t = util::trim(code);
            if (!t.empty()) p.ipc_codes.push_back(t);
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace scilink::concordance
