#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "opengloss/model.hpp"
#include "opengloss/store.hpp"

namespace opengloss {

// ---------------------------------------------------------------------------
// Per-entry edge extraction. Deterministic, no external calls. Edge order is
// the traversal order of the entry; canonical ordering happens at graph
// assembly.

// Synonym/antonym/hypernym/hyponym edges, one per listed target, tagged with
// the owning POS and 0-based sense index. Hyponyms are taken from the data,
// never synthesized as hypernym inverses.
std::vector<LexemeEdge> extract_sense_edges(const LexemeEntry& entry);

// Collocation and inflection edges; lexeme level, no sense index.
std::vector<LexemeEdge> extract_pos_edges(const LexemeEntry& entry);

// POS-specific derivation edges, one etymology-parent edge to the immediate
// trail precursor, one morpheme-component edge per recorded component.
// Cognates stay in etymology metadata and produce no edges.
std::vector<LexemeEdge> extract_morph_ety_edges(const LexemeEntry& entry);

// All of the above, in that order.
std::vector<LexemeEdge> extract_all_edges(const LexemeEntry& entry);

// ---------------------------------------------------------------------------
// Pruning

struct PruneOptions {
    // Derivations are lexeme-to-lexeme semantic links and pruned by default;
    // the flag exists because only the four sense-level relations are
    // unambiguously subject to target-validity enforcement.
    bool prune_derivations = true;
    // Case-insensitive fallback for target matching (default off: "London"
    // and "london" are distinct headwords).
    bool case_insensitive = false;
};

// True when this relation's targets must exist in the vocabulary.
// Collocation phrases, inflected forms, and historical forms are exempt:
// they are usually not headwords.
bool vocabulary_pruned(EdgeType type, const PruneOptions& opts);

struct GraphValidationReport {
    std::int64_t invalid_target_count = 0;              // == sum of pruned_edges
    std::map<EdgeType, std::int64_t> pruned_edges;      // per relation
    std::vector<std::vector<std::string>> hypernym_cycles;
    std::int64_t asymmetric_synonym_pairs = 0;
    std::int64_t asymmetric_antonym_pairs = 0;
};

std::pair<std::vector<LexemeEdge>, GraphValidationReport> prune_invalid_edges(
    const std::vector<LexemeEdge>& edges, const std::set<std::string>& vocabulary,
    const PruneOptions& opts = {});

// ---------------------------------------------------------------------------
// Snowball frontier

struct FrontierItem {
    std::string lemma;
    std::int64_t reference_count = 0;

    bool operator==(const FrontierItem&) const = default;
};

// Out-of-vocabulary targets of sense-level and derivation edges, computed on
// the pre-prune edge list: the feedback queue for the next sampling round.
// Sorted by descending reference count, then lexicographically.
std::vector<FrontierItem> snowball_frontier(const std::vector<LexemeEdge>& edges,
                                            const std::set<std::string>& vocabulary);

// ---------------------------------------------------------------------------
// The assembled graph. Lemmas are interned; edges are stored deduplicated in
// canonical (source, relation-ordinal, target, sense-index) order with the
// collapsed multiplicity recorded, so identical inputs build byte-identical
// edge files.

class SemanticGraph {
public:
    using LemmaId = std::uint32_t;

    struct Edge {
        LemmaId source = 0;
        LemmaId target = 0;
        EdgeType relation = EdgeType::Synonym;
        std::int8_t source_pos = -1;    // PartOfSpeech ordinal, -1 = none
        std::int32_t sense_index = -1;  // -1 = none
        std::uint32_t multiplicity = 1;
    };

    LemmaId intern(std::string_view lemma);
    std::optional<LemmaId> find(std::string_view lemma) const;
    const std::string& name(LemmaId id) const { return names_.at(id); }
    std::size_t lemma_count() const { return names_.size(); }

    void add_node(std::string_view lemma) { node_ids_.insert(intern(lemma)); }
    bool is_node(LemmaId id) const { return node_ids_.count(id) > 0; }
    bool has_node(std::string_view lemma) const;
    std::size_t node_count() const { return node_ids_.size(); }

    void add_edge(const LexemeEdge& edge);
    void add_edge(Edge edge) { edges_.push_back(edge); }

    // Sorts canonically and collapses duplicates. Must be called once after
    // the last add_edge; idempotent.
    void finalize();
    bool finalized() const { return finalized_; }

    // Drops edges whose targets fail the vocabulary rule for their relation,
    // accumulating per-relation pruned counts into the report.
    void prune(const PruneOptions& opts, GraphValidationReport& report);

    const std::vector<Edge>& edges() const { return edges_; }
    LexemeEdge materialize(const Edge& e) const;

    std::int64_t total_edge_count() const;  // multiplicity sum
    std::map<EdgeType, std::int64_t> edge_counts() const;          // multiplicity sums
    std::map<EdgeType, std::int64_t> distinct_edge_counts() const;

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, LemmaId> ids_;
    std::set<LemmaId> node_ids_;
    std::vector<Edge> edges_;
    bool finalized_ = false;
};

// Pure audits over the finalized graph; never mutate.

// Directed synonym (resp. antonym) lemma pairs lacking the reverse edge.
void check_symmetry(const SemanticGraph& graph, GraphValidationReport& report);

// Every nontrivial strongly connected component of the hypernym subgraph
// (including self-loops), members sorted lexicographically, components
// ordered by first member. Empty result <=> the hypernym graph is acyclic.
std::vector<std::vector<std::string>> detect_hypernym_cycles(const SemanticGraph& graph);

// ---------------------------------------------------------------------------
// Connectivity

struct DegreeSummary {
    double mean = 0.0;
    double median = 0.0;
    std::int64_t max = 0;
    double stddev = 0.0;
};

struct ConnectivityStats {
    DegreeSummary sense_level;
    DegreeSummary word_level;
    double isolated_sense_fraction = 0.0;
    std::int64_t sense_population = 0;
    std::int64_t word_population = 0;
};

// Degree attribution rule: a sense's degree is its surviving out-edges (the
// items of its relation lists whose targets pass the pruning rule) plus an
// equal floor share of the lemma's sense-level in-edges; the data only ever
// names target lemmas, so in-edges cannot be pinned to a target sense. A
// lemma's degree is all surviving incident edges, any relation, in
// multiplicity units.
ConnectivityStats connectivity_stats(const SemanticGraph& graph,
                                     const std::vector<std::filesystem::path>& shards,
                                     const PruneOptions& opts = {});

// ---------------------------------------------------------------------------
// End-to-end build

struct GraphBuildOptions {
    PruneOptions prune;
    int jobs = 1;  // parallel shards; merge order is deterministic
};

struct GraphBuildResult {
    SemanticGraph graph;  // pruned, finalized
    GraphValidationReport report;
    std::vector<FrontierItem> frontier;            // pre-prune
    std::map<EdgeType, std::int64_t> extracted;    // pre-prune multiplicity sums
    std::int64_t entries_scanned = 0;
    std::int64_t entries_rejected = 0;
};

// Streams the shards once, extracts everything, prunes against the shard
// vocabulary, finalizes. Symmetry and cycle audits are separate passes.
GraphBuildResult build_graph(const std::vector<std::filesystem::path>& shards,
                             const GraphBuildOptions& opts = {});

// Canonical JSONL edge file (one edge per line, collapsed duplicates carry a
// "multiplicity" field when > 1).
void write_edge_file(const std::filesystem::path& path, const SemanticGraph& graph);

// Rebuilds a graph from an edge file; the node set comes from the caller
// (typically the shard vocabulary).
SemanticGraph read_edge_file(const std::filesystem::path& path,
                             const std::set<std::string>& nodes);

}  // namespace opengloss
