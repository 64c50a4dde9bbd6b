#include "scilink/levelscore.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "scilink/util.hpp"

namespace scilink::levelscore {

namespace {

const std::vector<std::string>& basic_roots() {
    static const std::vector<std::string> kRoots = {
        "A11", "B02", "B03", "B04", "G02.111.570", "G02.149", "B01"};
    return kRoots;
}

const std::string kHumansNode = "B01.050.150.900.649.801.400.112.400.400";
const std::string kPersonsRoot = "M01";

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

MeshTree load_mesh_tree(const std::string& path) {
    MeshTree tree;
    for (const auto& row : util::read_tsv(path)) {
        if (row.size() < 2) continue;
        tree.term_to_tree_numbers[row[0]].insert(row[1]);
    }
    return tree;
}

bool is_descendant(const std::string& tree_number, const std::string& root) {
    if (tree_number == root) return true;
    if (tree_number.size() <= root.size()) return false;
    return tree_number.compare(0, root.size(), root) == 0 &&
           tree_number[root.size()] == '.';
}

AnchorSets select_anchor_terms(const MeshTree& tree) {
    if (tree.term_to_tree_numbers.empty())
        throw std::invalid_argument("MeSH tree is empty");
    AnchorSets sets;
    for (const auto& [term, numbers] : tree.term_to_tree_numbers) {
        bool under_basic = false, under_humans = false, under_persons = false;
        for (const auto& number : numbers) {
            if (is_descendant(number, kHumansNode)) under_humans = true;
            if (is_descendant(number, kPersonsRoot)) under_persons = true;
            for (const auto& root : basic_roots())
                if (is_descendant(number, root)) under_basic = true;
        }
        if (under_humans || under_persons) {
            sets.applied.insert(term);  // Humans-exclusion dominates
        } else if (under_basic) {
            sets.basic.insert(term);
        }
    }
    return sets;
}

Cooccurrence build_cooccurrence(const std::vector<PaperRecord>& papers) {
    Cooccurrence co;
    std::set<std::string> vocab;
    std::vector<std::set<std::string>> paper_terms;
    paper_terms.reserve(papers.size());
    for (const auto& paper : papers) {
        std::set<std::string> terms(paper.mesh_terms.begin(), paper.mesh_terms.end());
        for (const auto& t : terms) vocab.insert(t);
        paper_terms.push_back(std::move(terms));
    }
    co.terms.assign(vocab.begin(), vocab.end());
    for (size_t i = 0; i < co.terms.size(); ++i) co.term_index[co.terms[i]] = i;
    co.counts.assign(co.terms.size(), std::vector<double>(co.terms.size(), 0.0));
    for (const auto& terms : paper_terms) {
        std::vector<size_t> ids;
        for (const auto& t : terms) ids.push_back(co.term_index.at(t));
        for (size_t a = 0; a < ids.size(); ++a) {
            co.counts[ids[a]][ids[a]] += 1.0;
            for (size_t b = a + 1; b < ids.size(); ++b) {
                co.counts[ids[a]][ids[b]] += 1.0;
                co.counts[ids[b]][ids[a]] += 1.0;
            }
        }
    }
    return co;
}

MeshEmbedding embed_terms(const Cooccurrence& co, int d) {
    if (d <= 0) throw std::invalid_argument("embedding dimension must be positive");
    const size_t n = co.terms.size();
    if (n == 0) throw std::invalid_argument("empty co-occurrence matrix");
    if (static_cast<size_t>(d) > n) d = static_cast<int>(n);

    // positive pointwise mutual information over off-diagonal pair counts
    Eigen::MatrixXd ppmi = Eigen::MatrixXd::Zero(n, n);
    std::vector<double> row_sum(n, 0.0);
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            row_sum[i] += co.counts[i][j];
            total += co.counts[i][j];
        }
    }
    if (total > 0) {
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = i + 1; j < n; ++j) {
                double c = co.counts[i][j];
                if (c <= 0 || row_sum[i] <= 0 || row_sum[j] <= 0) continue;
                double pmi = std::log(c * total / (row_sum[i] * row_sum[j]));
                if (pmi > 0) {
                    ppmi(i, j) = pmi;
                    ppmi(j, i) = pmi;
                }
            }
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(ppmi);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigendecomposition failed");
    const auto& values = solver.eigenvalues();   // ascending
    const auto& vectors = solver.eigenvectors();

    MeshEmbedding emb;
    emb.dim = d;
    Eigen::MatrixXd factors = Eigen::MatrixXd::Zero(n, d);
    for (int k = 0; k < d; ++k) {
        const Eigen::Index col = static_cast<Eigen::Index>(n) - 1 - k;
        double lambda = values(col);
        if (lambda <= 0) break;  // remaining components stay zero
        Eigen::VectorXd v = vectors.col(col);
        // sign convention: largest-magnitude component positive
        Eigen::Index max_idx = 0;
        double max_abs = 0.0;
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            if (std::abs(v(i)) > max_abs) {
                max_abs = std::abs(v(i));
                max_idx = i;
            }
        }
        if (v(max_idx) < 0) v = -v;
        factors.col(k) = std::sqrt(lambda) * v;
    }
    for (size_t i = 0; i < n; ++i) {
        std::vector<double> vec(d);
        double norm2 = 0.0;
        for (int k = 0; k < d; ++k) {
            vec[k] = factors(static_cast<Eigen::Index>(i), k);
            norm2 += vec[k] * vec[k];
        }
        if (norm2 > 0) emb.term_vectors[co.terms[i]] = std::move(vec);
    }
    return emb;
}

namespace {

std::vector<double> centroid(const MeshEmbedding& emb, const std::set<std::string>& terms,
                             size_t* used) {
    std::vector<double> c(emb.dim, 0.0);
    size_t n = 0;
    for (const auto& term : terms) {
        auto it = emb.term_vectors.find(term);
        if (it == emb.term_vectors.end()) continue;
        for (int k = 0; k < emb.dim; ++k) c[k] += it->second[k];
        ++n;
    }
    if (n > 0)
        for (double& x : c) x /= static_cast<double>(n);
    *used = n;
    return c;
}

double norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

std::vector<double> fit_axis(const MeshEmbedding& embedding,
                             const std::set<std::string>& basic,
                             const std::set<std::string>& applied) {
    size_t nb = 0, na = 0;
    std::vector<double> cb = centroid(embedding, basic, &nb);
    std::vector<double> ca = centroid(embedding, applied, &na);
    if (nb == 0) throw std::invalid_argument("no embedded basic anchor terms");
    if (na == 0) throw std::invalid_argument("no embedded applied anchor terms");
    std::vector<double> axis(embedding.dim);
    for (int k = 0; k < embedding.dim; ++k) axis[k] = ca[k] - cb[k];
    double n = norm(axis);
    if (n <= 0) throw std::runtime_error("degenerate axis: anchor centroids coincide");
    for (double& x : axis) x /= n;
    return axis;
}

LevelScoreModel train_model(const std::vector<PaperRecord>& papers,
                            const MeshTree& tree, int d) {
    LevelScoreModel model;
    Cooccurrence co = build_cooccurrence(papers);
    model.embedding = embed_terms(co, d);
    AnchorSets anchors = select_anchor_terms(tree);
    model.basic_anchor_terms = anchors.basic;
    model.applied_anchor_terms = anchors.applied;
    model.axis = fit_axis(model.embedding, anchors.basic, anchors.applied);
    return model;
}

std::optional<double> term_score(const LevelScoreModel& model, const std::string& term) {
    auto it = model.embedding.term_vectors.find(term);
    if (it == model.embedding.term_vectors.end()) return std::nullopt;
    const auto& v = it->second;
    double dot = 0.0;
    for (int k = 0; k < model.embedding.dim; ++k) dot += v[k] * model.axis[k];
    double n = norm(v);
    if (n <= 0) return std::nullopt;
    double cosine = dot / n;  // axis is unit
    return std::clamp(cosine, -1.0, 1.0);
}

std::optional<double> paper_level_score(const LevelScoreModel& model,
                                        const PaperRecord& paper) {
    std::set<std::string> terms(paper.mesh_terms.begin(), paper.mesh_terms.end());
    double sum = 0.0;
    size_t n = 0;
    for (const auto& term : terms) {
        if (auto s = term_score(model, term)) {
            sum += *s;
            ++n;
        }
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

bool classify_basic(double ls, double threshold) { return ls < threshold; }

void store_model(const LevelScoreModel& model, const std::string& path) {
    std::ostringstream out;
    out << "# lsmodel v1\n";
    out << "dim\t" << model.embedding.dim << "\n";
    out << "axis";
    for (double x : model.axis) out << "\t" << format_double(x);
    out << "\n";
    for (const auto& term : model.basic_anchor_terms) out << "basic\t" << term << "\n";
    for (const auto& term : model.applied_anchor_terms) out << "applied\t" << term << "\n";
    for (const auto& [term, vec] : model.embedding.term_vectors) {
        out << "term\t" << term;
        for (double x : vec) out << "\t" << format_double(x);
        out << "\n";
    }
    util::write_file(path, out.str());
}

LevelScoreModel load_model(const std::string& path) {
    LevelScoreModel model;
    for (const auto& row : util::read_tsv(path)) {
        if (row.size() < 2) continue;
        if (row[0] == "dim") {
            model.embedding.dim = static_cast<int>(util::parse_int(row[1]).value_or(0));
        } else if (row[0] == "axis") {
            for (size_t i = 1; i < row.size(); ++i) model.axis.push_back(std::stod(row[i]));
        } else if (row[0] == "basic") {
            model.basic_anchor_terms.insert(row[1]);
        } else if (row[0] == "applied") {
            model.applied_anchor_terms.insert(row[1]);
        } else if (row[0] == "term" && row.size() > 2) {
            std::vector<double> vec;
            for (size_t i = 2; i < row.size(); ++i) vec.push_back(std::stod(row[i]));
            model.embedding.term_vectors[row[1]] = std::move(vec);
        }
    }
    if (model.embedding.dim == 0 || model.axis.empty())
        throw std::runtime_error("malformed model file: " + path);
    return model;
}

void store_scores(const std::map<std::string, double>& scores, const std::string& path) {
    std::ostringstream out;
    out << "paper_id\tlevel_score\n";
    for (const auto& [id, ls] : scores) out << id << "\t" << format_double(ls) << "\n";
    util::write_file(path, out.str());
}

std::map<std::string, double> load_scores(const std::string& path) {
    std::map<std::string, double> scores;
    for (const auto& row : util::read_tsv(path)) {
        if (row.size() < 2 || row[0] == "paper_id") continue;
        scores[row[0]] = std::stod(row[1]);
    }
    return scores;
}

}  // namespace scilink::levelscore
