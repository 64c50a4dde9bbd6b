#include "scilink/ingest.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "scilink/util.hpp"

namespace scilink::ingest {

namespace pt = boost::property_tree;
namespace fs = std::filesystem;
using util::trim;

namespace {

std::string normalize_patent_id(std::string s) {
    std::string out;
    for (char c : s) {
        if (c != ',' && !std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
    }
    // strip leading zeros after any alphabetic prefix (bulk files pad to 8)
    size_t p = 0;
    while (p < out.size() && std::isalpha(static_cast<unsigned char>(out[p]))) ++p;
    size_t z = p;
    while (z + 1 < out.size() && out[z] == '0') ++z;
    return out.substr(0, p) + out.substr(z);
}

PatentKind kind_from_document(const std::string& appl_type, const std::string& doc_number) {
    if (appl_type == "utility") return PatentKind::utility;
    if (appl_type == "design") return PatentKind::design;
    if (appl_type == "plant") return PatentKind::plant;
    if (appl_type == "reissue") return PatentKind::reissue;
    if (!appl_type.empty()) return PatentKind::other;
    if (doc_number.rfind("RE", 0) == 0) return PatentKind::reissue;
    if (doc_number.rfind("PP", 0) == 0) return PatentKind::plant;
    if (doc_number.rfind('D', 0) == 0) return PatentKind::design;
    return PatentKind::utility;
}

std::optional<std::string> country_of(const pt::ptree& address) {
    auto c = address.get_optional<std::string>("country");
    if (!c) return std::nullopt;
    std::string cc = util::to_upper(trim(*c));
    if (cc.size() != 2) return std::nullopt;
    return cc;
}

std::string address_text(const pt::ptree& address) {
    std::string out;
    for (const char* part : {"street", "city", "state", "country"}) {
        if (auto v = address.get_optional<std::string>(part)) {
            std::string t = trim(*v);
            if (t.empty()) continue;
            if (!out.empty()) out += ", ";
            out += t;
        }
    }
    return out;
}

std::string person_name(const pt::ptree& book) {
    if (auto org = book.get_optional<std::string>("orgname")) return trim(*org);
    std::string last = trim(book.get<std::string>("last-name", ""));
    std::string first = trim(book.get<std::string>("first-name", ""));
    if (first.empty()) return last;
    if (last.empty()) return first;
    return last + ", " + first;
}

std::string normalize_ipc_from_parts(const pt::ptree& node) {
    std::string section = trim(node.get<std::string>("section", ""));
    std::string klass = trim(node.get<std::string>("class", ""));
    std::string subclass = trim(node.get<std::string>("subclass", ""));
    std::string group = trim(node.get<std::string>("main-group", ""));
    std::string subgroup = trim(node.get<std::string>("subgroup", ""));
    if (section.empty() || klass.empty() || subclass.empty() || group.empty()) return {};
    std::string out = section + klass + subclass + " " + group;
    if (!subgroup.empty()) out += "/" + subgroup;
    return out;
}

PatentRecord record_from_tree(const pt::ptree& doc) {
    const pt::ptree& bib = doc.get_child("us-bibliographic-data-grant");
    PatentRecord rec;

    const pt::ptree& pubref = bib.get_child("publication-reference.document-id");
    std::string doc_number = trim(pubref.get<std::string>("doc-number"));
    rec.patent_id = normalize_patent_id(doc_number);
    if (rec.patent_id.empty()) throw std::runtime_error("empty doc-number");
    std::string date = trim(pubref.get<std::string>("date", ""));
    if (date.size() < 4) throw std::runtime_error("missing grant date");
    auto year = util::parse_int(date.substr(0, 4));
    if (!year) throw std::runtime_error("bad grant date: " + date);
    rec.grant_year = static_cast<int>(*year);

    std::string appl_type =
        bib.get<std::string>("application-reference.<xmlattr>.appl-type", "");
    rec.kind = kind_from_document(appl_type, doc_number);

    if (auto nat = bib.get_child_optional("classification-national")) {
        for (const auto& [key, value] : *nat) {
            if (key != "main-classification" && key != "further-classification") continue;
            std::string full = trim(value.get_value<std::string>());
            if (full.empty()) continue;
            rec.uspc_all.push_back(full);
            if (key == "main-classification" && !rec.uspc_primary) {
                std::string klass = trim(full.substr(0, std::min<size_t>(3, full.size())));
                if (klass.size() == 3) rec.uspc_primary = klass;
            }
        }
    }

    if (auto ipcr = bib.get_child_optional("classifications-ipcr")) {
        for (const auto& [key, value] : *ipcr) {
            if (key != "classification-ipcr") continue;
            std::string code = normalize_ipc_from_parts(value);
            if (!code.empty()) rec.ipc_codes.push_back(code);
        }
    }

    auto parse_inventor = [&rec](const pt::ptree& node) {
        const pt::ptree* book = &node;
        if (auto b = node.get_child_optional("addressbook")) book = &*b;
        InventorRecord inv;
        inv.name = person_name(*book);
        if (auto addr = book->get_child_optional("address")) {
            inv.country = country_of(*addr);
            inv.raw_address = address_text(*addr);
        }
        rec.inventors.push_back(std::move(inv));
    };
    if (auto parties = bib.get_child_optional("us-parties")) {
        if (auto inventors = parties->get_child_optional("inventors")) {
            for (const auto& [key, value] : *inventors)
                if (key == "inventor") parse_inventor(value);
        }
        if (auto applicants = parties->get_child_optional("us-applicants")) {
            for (const auto& [key, value] : *applicants) {
                if (key != "us-applicant") continue;
                const pt::ptree* book = &value;
                if (auto b = value.get_child_optional("addressbook")) book = &*b;
                std::string name = person_name(*book);
                if (!name.empty()) rec.applicant_names.push_back(name);
            }
        }
    }

    if (auto assignees = bib.get_child_optional("assignees")) {
        for (const auto& [key, value] : *assignees) {
            if (key != "assignee") continue;
            const pt::ptree* book = &value;
            if (auto b = value.get_child_optional("addressbook")) book = &*b;
            AssigneeRecord a;
            a.name = person_name(*book);
            if (a.name.empty()) continue;
            if (auto role = book->get_optional<std::string>("role")) {
                std::string r = trim(*role);
                if (!r.empty()) a.role_code = r;
            }
            if (auto addr = book->get_child_optional("address")) a.country = country_of(*addr);
            rec.assignees.push_back(std::move(a));
        }
    }

    if (auto cited = bib.get_child_optional("us-references-cited")) {
        for (const auto& [key, value] : *cited) {
            if (key != "us-citation") continue;
            if (auto patcit = value.get_child_optional("patcit")) {
                std::string num =
                    trim(patcit->get<std::string>("document-id.doc-number", ""));
                if (!num.empty()) rec.patent_citations.push_back(normalize_patent_id(num));
            } else if (auto nplcit = value.get_child_optional("nplcit")) {
                // one othercit field entry == one NPR string
                std::string text = trim(nplcit->get<std::string>("othercit", ""));
                if (!text.empty()) rec.npr_strings.push_back(text);
            }
        }
    }

    return rec;
}

// Split a bulk stream into per-document chunks at `<?xml` declarations.
std::vector<std::pair<size_t, std::string>> split_documents(const std::string& bytes) {
    std::vector<std::pair<size_t, std::string>> chunks;
    const std::string marker = "<?xml";
    size_t pos = bytes.find(marker);
    if (pos == std::string::npos) {
        if (!trim(bytes).empty()) chunks.emplace_back(0, bytes);
        return chunks;
    }
    while (pos != std::string::npos) {
        size_t next = bytes.find(marker, pos + marker.size());
        size_t end = (next == std::string::npos) ? bytes.size() : next;
        chunks.emplace_back(pos, bytes.substr(pos, end - pos));
        pos = next;
    }
    return chunks;
}

}  // namespace

GrantParseResult parse_grant_xml(const std::string& document_bytes) {
    GrantParseResult result;
    for (auto& [offset, chunk] : split_documents(document_bytes)) {
        ++result.documents_encountered;
        try {
            std::istringstream in(chunk);
            pt::ptree tree;
            pt::read_xml(in, tree, pt::xml_parser::no_comments);
            auto doc = tree.get_child_optional("us-patent-grant");
            if (!doc) {
                result.skipped.push_back({offset, "unrecognized document schema"});
                continue;
            }
            result.records.push_back(record_from_tree(*doc));
        } catch (const std::exception& e) {
            result.skipped.push_back({offset, e.what()});
        }
    }
    return result;
}

namespace {

struct TaggedField {
    std::string tag;
    std::string value;
};

std::vector<std::vector<TaggedField>> split_tagged_records(const std::string& bytes) {
    std::vector<std::vector<TaggedField>> records;
    std::vector<TaggedField> current;
    std::istringstream in(bytes);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) {
            if (!current.empty()) records.push_back(std::move(current));
            current.clear();
            continue;
        }
        if (line.size() > 6 && line.substr(0, 6) == "      " && !current.empty()) {
            current.back().value += " " + trim(line);
            continue;
        }
        if (line.size() >= 6 && line[4] == '-') {
            current.push_back({trim(line.substr(0, 4)), trim(line.substr(5))});
        }
        // lines matching neither pattern are ignored
    }
    if (!current.empty()) records.push_back(std::move(current));
    return records;
}

PaperRecord paper_from_fields(const std::vector<TaggedField>& fields) {
    PaperRecord rec;
    for (const auto& f : fields) {
        if (f.tag == "PMID" && rec.paper_id.empty()) rec.paper_id = f.value;
        else if (f.tag == "TI" && rec.title.empty()) rec.title = f.value;
        else if (f.tag == "JT" && rec.journal.empty()) rec.journal = f.value;
        else if (f.tag == "DP" && rec.pub_year == 0) {
            if (f.value.size() >= 4) {
                if (auto y = util::parse_int(f.value.substr(0, 4)))
                    rec.pub_year = static_cast<int>(*y);
            }
        } else if (f.tag == "VI" && !rec.volume) rec.volume = f.value;
        else if (f.tag == "PG" && !rec.first_page) {
            rec.first_page = trim(f.value.substr(0, f.value.find('-')));
        } else if (f.tag == "AD" && !rec.first_author_affiliation) {
            rec.first_author_affiliation = f.value;
        } else if (f.tag == "FAU" && !rec.first_author_lastname) {
            rec.first_author_lastname = trim(f.value.substr(0, f.value.find(',')));
        } else if (f.tag == "MH") rec.mesh_terms.push_back(f.value);
        else if (f.tag == "PT") rec.publication_types.push_back(f.value);
        else if (f.tag == "GR") {
            // grant_number/agency_acronym/country
            auto parts = util::split(f.value, '/');
            GrantRecord g;
            g.grant_number = trim(parts[0]);
            if (parts.size() > 1) g.agency_acronym = util::to_upper(trim(parts[1]));
            if (parts.size() > 2) g.country = trim(parts[2]);
            rec.grants.push_back(std::move(g));
        }
    }
    if (rec.paper_id.empty()) throw std::runtime_error("record missing PMID");
    if (rec.pub_year <= 1800) throw std::runtime_error("record missing or bad DP year");
    return rec;
}

}  // namespace

PaperParseResult parse_paper_records(const std::string& bytes) {
    PaperParseResult result;
    size_t index = 0;
    for (const auto& fields : split_tagged_records(bytes)) {
        ++result.documents_encountered;
        try {
            result.records.push_back(paper_from_fields(fields));
        } catch (const std::exception& e) {
            result.skipped.push_back({index, e.what()});
        }
        ++index;
    }
    return result;
}

std::vector<PatentRecord> filter_sample(const std::vector<PatentRecord>& records,
                                        const std::set<std::string>& uspc_lifesci_set,
                                        const std::set<std::string>& withdrawn_ids,
                                        const YearRange& years) {
    if (uspc_lifesci_set.empty())
        throw std::invalid_argument("life-science USPC set is empty");
    std::vector<PatentRecord> out;
    for (const auto& rec : records) {
        if (rec.kind != PatentKind::utility) continue;
        if (withdrawn_ids.count(rec.patent_id)) continue;
        if (!years.contains(rec.grant_year)) continue;
        if (!rec.uspc_primary || !uspc_lifesci_set.count(*rec.uspc_primary)) continue;
        out.push_back(rec);
    }
    return out;
}

namespace {

template <typename Record>
void write_ndjson(const std::vector<Record>& records, const std::string& path,
                  std::string Record::* id_field, const char* what) {
    std::set<std::string> seen;
    std::ostringstream out;
    for (const auto& rec : records) {
        const std::string& id = rec.*id_field;
        if (!seen.insert(id).second)
            throw std::runtime_error(std::string("duplicate ") + what + " id: " + id);
        nlohmann::json j = rec;
        out << j.dump() << "\n";
    }
    util::write_file(path, out.str());
}

template <typename Record>
std::vector<Record> read_ndjson(const std::string& path) {
    std::vector<Record> records;
    if (!fs::exists(path)) return records;
    std::istringstream in(util::read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        records.push_back(nlohmann::json::parse(line).get<Record>());
    }
    return records;
}

}  // namespace

void store_patents(const std::vector<PatentRecord>& records, const std::string& dir) {
    fs::create_directories(dir);
    write_ndjson(records, (fs::path(dir) / "patents.ndjson").string(),
                 &PatentRecord::patent_id, "patent");
}

void store_papers(const std::vector<PaperRecord>& records, const std::string& dir) {
    fs::create_directories(dir);
    write_ndjson(records, (fs::path(dir) / "papers.ndjson").string(),
                 &PaperRecord::paper_id, "paper");
}

void store_corpus(const Corpus& corpus, const std::string& dir) {
    store_patents(corpus.patents, dir);
    store_papers(corpus.papers, dir);
}

Corpus load_corpus(const std::string& dir) {
    Corpus c;
    c.patents = read_ndjson<PatentRecord>((fs::path(dir) / "patents.ndjson").string());
    c.papers = read_ndjson<PaperRecord>((fs::path(dir) / "papers.ndjson").string());
    return c;
}

std::string skip_report_lines(const std::vector<SkipReport>& skipped) {
    std::ostringstream out;
    for (const auto& s : skipped) out << s.document_offset << "\t" << s.reason << "\n";
    return out.str();
}

}  // namespace scilink::ingest
