#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scilink/records.hpp"

namespace scilink::levelscore {

/// MeSH term name -> set of dotted tree numbers.
struct MeshTree {
    std::map<std::string, std::set<std::string>> term_to_tree_numbers;
};

MeshTree load_mesh_tree(const std::string& path);

/// True iff tree_number equals root or descends from it (segment-boundary
/// aware: "A110.5" is not under "A11").
bool is_descendant(const std::string& tree_number, const std::string& root);

struct AnchorSets {
    std::set<std::string> basic;
    std::set<std::string> applied;
};

/// Basic roots: Cells (A11), Archaea (B02), Bacteria (B03), Viruses (B04),
/// Molecular Structure (G02.111.570), Chemical Processes (G02.149),
/// Eukaryota (B01) except the Humans subtree. Applied roots: the Humans
/// node and Persons (M01). A term qualifying for both sides is applied.
AnchorSets select_anchor_terms(const MeshTree& tree);

struct Cooccurrence {
    std::vector<std::string> terms;          // sorted vocabulary
    std::map<std::string, size_t> term_index;
    // dense symmetric counts; diagonal = papers containing the term
    std::vector<std::vector<double>> counts;
};

Cooccurrence build_cooccurrence(const std::vector<PaperRecord>& papers);

struct MeshEmbedding {
    int dim = 0;
    std::map<std::string, std::vector<double>> term_vectors;  // zero-norm terms omitted
};

/// PPMI reweighting of the co-occurrence matrix followed by a rank-d
/// symmetric eigen-factorization. Deterministic: eigenvectors get a fixed
/// sign convention (largest-magnitude component positive).
MeshEmbedding embed_terms(const Cooccurrence& cooccurrence, int d);

struct LevelScoreModel {
    MeshEmbedding embedding;
    std::vector<double> axis;  // unit vector
    std::set<std::string> basic_anchor_terms;
    std::set<std::string> applied_anchor_terms;
};

/// axis = normalize(centroid(applied vectors) - centroid(basic vectors)).
std::vector<double> fit_axis(const MeshEmbedding& embedding,
                             const std::set<std::string>& basic,
                             const std::set<std::string>& applied);

LevelScoreModel train_model(const std::vector<PaperRecord>& papers,
                            const MeshTree& tree, int d);

/// Cosine of (axis, term vector); negative = basic end, positive = applied.
std::optional<double> term_score(const LevelScoreModel& model, const std::string& term);

/// Mean of the term scores over the paper's scorable MeSH terms.
std::optional<double> paper_level_score(const LevelScoreModel& model,
                                        const PaperRecord& paper);

/// Fig.-4 convention: basic iff ls is strictly smaller than the threshold.
bool classify_basic(double ls, double threshold = 0.16);

void store_model(const LevelScoreModel& model, const std::string& path);
LevelScoreModel load_model(const std::string& path);

void store_scores(const std::map<std::string, double>& scores, const std::string& path);
std::map<std::string, double> load_scores(const std::string& path);

}  // namespace scilink::levelscore
