#include "opengloss/graph.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numeric>
#include <thread>
#include <unordered_set>

#include "opengloss/json_io.hpp"
#include "opengloss/normalize.hpp"

namespace opengloss {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Extraction

namespace {

void emit_sense_list(std::vector<LexemeEdge>& out, const LexemeEntry& entry, PartOfSpeech pos,
                     std::int32_t sense_index, const std::vector<std::string>& targets,
                     EdgeType relation) {
    for (const auto& raw : targets) {
        std::string target = normalize_lemma_lenient(raw);
        if (target.empty()) continue;
        LexemeEdge edge;
        edge.source = entry.lemma;
        edge.target = std::move(target);
        edge.relation = relation;
        edge.source_pos = pos;
        edge.sense_index = sense_index;
        edge.priority = classify_priority(relation);
        out.push_back(std::move(edge));
    }
}

void emit_lexeme_edge(std::vector<LexemeEdge>& out, const LexemeEntry& entry,
                      const std::string& raw_target, EdgeType relation) {
    std::string target = normalize_lemma_lenient(raw_target);
    if (target.empty()) return;
    LexemeEdge edge;
    edge.source = entry.lemma;
    edge.target = std::move(target);
    edge.relation = relation;
    edge.priority = classify_priority(relation);
    out.push_back(std::move(edge));
}

}  // namespace

std::vector<LexemeEdge> extract_sense_edges(const LexemeEntry& entry) {
    std::vector<LexemeEdge> out;
    for (const auto& pe : entry.pos_entries) {
        for (std::size_t i = 0; i < pe.senses.size(); ++i) {
            const auto& sense = pe.senses[i];
            auto idx = static_cast<std::int32_t>(i);
            emit_sense_list(out, entry, pe.pos, idx, sense.synonyms, EdgeType::Synonym);
            emit_sense_list(out, entry, pe.pos, idx, sense.antonyms, EdgeType::Antonym);
            emit_sense_list(out, entry, pe.pos, idx, sense.hypernyms, EdgeType::Hypernym);
            emit_sense_list(out, entry, pe.pos, idx, sense.hyponyms, EdgeType::Hyponym);
        }
    }
    return out;
}

std::vector<LexemeEdge> extract_pos_edges(const LexemeEntry& entry) {
    std::vector<LexemeEdge> out;
    for (const auto& pe : entry.pos_entries) {
        for (const auto& phrase : pe.collocations) {
            emit_lexeme_edge(out, entry, phrase, EdgeType::Collocation);
        }
        for (const auto& infl : pe.morphology.inflections) {
            emit_lexeme_edge(out, entry, infl.form, EdgeType::Inflection);
        }
    }
    return out;
}

std::vector<LexemeEdge> extract_morph_ety_edges(const LexemeEntry& entry) {
    std::vector<LexemeEdge> out;
    for (const auto& pe : entry.pos_entries) {
        for (const auto& d : pe.morphology.derivations) {
            emit_lexeme_edge(out, entry, d.form, derivation_edge_type(d.target_pos));
        }
    }
    if (entry.etymology) {
        const Etymology& ety = *entry.etymology;
        if (!ety.trail.empty()) {
            // Trail is ordered oldest first; the last step is the immediate
            // precursor.
            emit_lexeme_edge(out, entry, ety.trail.back().form, EdgeType::EtymologyParent);
        }
        for (const auto& component : ety.components) {
            emit_lexeme_edge(out, entry, component, EdgeType::MorphemeComponent);
        }
        // Cognates stay in metadata; no edges.
    }
    return out;
}

std::vector<LexemeEdge> extract_all_edges(const LexemeEntry& entry) {
    std::vector<LexemeEdge> out = extract_sense_edges(entry);
    std::vector<LexemeEdge> pos = extract_pos_edges(entry);
    std::vector<LexemeEdge> morph = extract_morph_ety_edges(entry);
    out.insert(out.end(), std::make_move_iterator(pos.begin()), std::make_move_iterator(pos.end()));
    out.insert(out.end(), std::make_move_iterator(morph.begin()),
               std::make_move_iterator(morph.end()));
    return out;
}

// ---------------------------------------------------------------------------
// Pruning

bool vocabulary_pruned(EdgeType type, const PruneOptions& opts) {
    switch (type) {
        case EdgeType::Synonym:
        case EdgeType::Antonym:
        case EdgeType::Hypernym:
        case EdgeType::Hyponym:
            return true;
        case EdgeType::NounDerivation:
        case EdgeType::VerbDerivation:
        case EdgeType::AdjectiveDerivation:
        case EdgeType::AdverbDerivation:
            return opts.prune_derivations;
        default:
            return false;
    }
}

namespace {

std::set<std::string> lowercase_set(const std::set<std::string>& vocabulary) {
    std::set<std::string> out;
    for (const auto& lemma : vocabulary) out.insert(to_lower(lemma));
    return out;
}

}  // namespace

std::pair<std::vector<LexemeEdge>, GraphValidationReport> prune_invalid_edges(
    const std::vector<LexemeEdge>& edges, const std::set<std::string>& vocabulary,
    const PruneOptions& opts) {
    std::set<std::string> lowered;
    if (opts.case_insensitive) lowered = lowercase_set(vocabulary);

    std::vector<LexemeEdge> kept;
    kept.reserve(edges.size());
    GraphValidationReport report;
    for (const auto& edge : edges) {
        bool valid = true;
        if (vocabulary_pruned(edge.relation, opts)) {
            valid = vocabulary.count(edge.target) > 0;
            if (!valid && opts.case_insensitive) {
                valid = lowered.count(to_lower(edge.target)) > 0;
            }
        }
        if (valid) {
            kept.push_back(edge);
        } else {
            ++report.pruned_edges[edge.relation];
            ++report.invalid_target_count;
        }
    }
    return {std::move(kept), std::move(report)};
}

// ---------------------------------------------------------------------------
// Frontier

namespace {

bool frontier_relation(EdgeType type) {
    switch (type) {
        case EdgeType::Synonym:
        case EdgeType::Antonym:
        case EdgeType::Hypernym:
        case EdgeType::Hyponym:
        case EdgeType::NounDerivation:
        case EdgeType::VerbDerivation:
        case EdgeType::AdjectiveDerivation:
        case EdgeType::AdverbDerivation:
            return true;
        default:
            return false;
    }
}

void sort_frontier(std::vector<FrontierItem>& items) {
    std::sort(items.begin(), items.end(), [](const FrontierItem& a, const FrontierItem& b) {
        if (a.reference_count != b.reference_count) return a.reference_count > b.reference_count;
        return a.lemma < b.lemma;
    });
}

}  // namespace

std::vector<FrontierItem> snowball_frontier(const std::vector<LexemeEdge>& edges,
                                            const std::set<std::string>& vocabulary) {
    std::map<std::string, std::int64_t> counts;
    for (const auto& edge : edges) {
        if (!frontier_relation(edge.relation)) continue;
        if (vocabulary.count(edge.target) > 0) continue;
        ++counts[edge.target];
    }
    std::vector<FrontierItem> items;
    items.reserve(counts.size());
    for (auto& [lemma, count] : counts) items.push_back({lemma, count});
    sort_frontier(items);
    return items;
}

// ---------------------------------------------------------------------------
// SemanticGraph

SemanticGraph::LemmaId SemanticGraph::intern(std::string_view lemma) {
    auto it = ids_.find(std::string(lemma));
    if (it != ids_.end()) return it->second;
    auto id = static_cast<LemmaId>(names_.size());
    names_.emplace_back(lemma);
    ids_.emplace(names_.back(), id);
    return id;
}

std::optional<SemanticGraph::LemmaId> SemanticGraph::find(std::string_view lemma) const {
    auto it = ids_.find(std::string(lemma));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

bool SemanticGraph::has_node(std::string_view lemma) const {
    auto id = find(lemma);
    return id && is_node(*id);
}

void SemanticGraph::add_edge(const LexemeEdge& edge) {
    Edge e;
    e.source = intern(edge.source);
    e.target = intern(edge.target);
    e.relation = edge.relation;
    e.source_pos = edge.source_pos ? static_cast<std::int8_t>(*edge.source_pos) : std::int8_t{-1};
    e.sense_index = edge.sense_index ? *edge.sense_index : -1;
    e.multiplicity = 1;
    edges_.push_back(e);
}

void SemanticGraph::finalize() {
    // Rank ids by lemma so edge ordering can use integer comparisons.
    std::vector<LemmaId> by_name(names_.size());
    std::iota(by_name.begin(), by_name.end(), 0);
    std::sort(by_name.begin(), by_name.end(),
              [&](LemmaId a, LemmaId b) { return names_[a] < names_[b]; });
    std::vector<std::uint32_t> rank(names_.size());
    for (std::uint32_t i = 0; i < by_name.size(); ++i) rank[by_name[i]] = i;

    std::sort(edges_.begin(), edges_.end(), [&](const Edge& a, const Edge& b) {
        if (rank[a.source] != rank[b.source]) return rank[a.source] < rank[b.source];
        if (a.relation != b.relation) return a.relation < b.relation;
        if (rank[a.target] != rank[b.target]) return rank[a.target] < rank[b.target];
        if (a.sense_index != b.sense_index) return a.sense_index < b.sense_index;
        return a.source_pos < b.source_pos;
    });

    // Collapse identical (source, relation, target, sense-index) tuples; the
    // surviving POS tag is the smallest ordinal, multiplicities add up.
    std::vector<Edge> merged;
    merged.reserve(edges_.size());
    for (const Edge& e : edges_) {
        if (!merged.empty()) {
            Edge& last = merged.back();
            if (last.source == e.source && last.relation == e.relation &&
                last.target == e.target && last.sense_index == e.sense_index) {
                last.multiplicity += e.multiplicity;
                // Smallest real POS ordinal survives the collapse.
                if (e.source_pos >= 0 && (last.source_pos < 0 || e.source_pos < last.source_pos)) {
                    last.source_pos = e.source_pos;
                }
                continue;
            }
        }
        merged.push_back(e);
    }
    edges_ = std::move(merged);
    finalized_ = true;
}

void SemanticGraph::prune(const PruneOptions& opts, GraphValidationReport& report) {
    std::set<std::string> lowered;
    if (opts.case_insensitive) {
        for (std::uint32_t id = 0; id < lemma_count(); ++id) {
            if (is_node(id)) lowered.insert(to_lower(name(id)));
        }
    }
    std::vector<Edge> kept;
    kept.reserve(edges_.size());
    for (const auto& e : edges_) {
        bool valid = true;
        if (vocabulary_pruned(e.relation, opts)) {
            valid = is_node(e.target);
            if (!valid && opts.case_insensitive) {
                valid = lowered.count(to_lower(name(e.target))) > 0;
            }
        }
        if (valid) {
            kept.push_back(e);
        } else {
            report.pruned_edges[e.relation] += e.multiplicity;
            report.invalid_target_count += e.multiplicity;
        }
    }
    edges_ = std::move(kept);
    finalized_ = false;
}

LexemeEdge SemanticGraph::materialize(const Edge& e) const {
    LexemeEdge edge;
    edge.source = names_.at(e.source);
    edge.target = names_.at(e.target);
    edge.relation = e.relation;
    if (e.source_pos >= 0) edge.source_pos = static_cast<PartOfSpeech>(e.source_pos);
    if (e.sense_index >= 0) edge.sense_index = e.sense_index;
    edge.priority = classify_priority(e.relation);
    return edge;
}

std::int64_t SemanticGraph::total_edge_count() const {
    std::int64_t n = 0;
    for (const auto& e : edges_) n += e.multiplicity;
    return n;
}

std::map<EdgeType, std::int64_t> SemanticGraph::edge_counts() const {
    std::map<EdgeType, std::int64_t> counts;
    for (const auto& e : edges_) counts[e.relation] += e.multiplicity;
    return counts;
}

std::map<EdgeType, std::int64_t> SemanticGraph::distinct_edge_counts() const {
    std::map<EdgeType, std::int64_t> counts;
    for (const auto& e : edges_) ++counts[e.relation];
    return counts;
}

// ---------------------------------------------------------------------------
// Symmetry

namespace {

std::int64_t asymmetric_pair_count(const SemanticGraph& graph, EdgeType relation) {
    std::unordered_set<std::uint64_t> pairs;
    for (const auto& e : graph.edges()) {
        if (e.relation != relation) continue;
        pairs.insert((static_cast<std::uint64_t>(e.source) << 32) | e.target);
    }
    std::int64_t missing = 0;
    for (std::uint64_t key : pairs) {
        std::uint64_t reverse = (key << 32) | (key >> 32);
        if (!pairs.count(reverse)) ++missing;
    }
    return missing;
}

}  // namespace

void check_symmetry(const SemanticGraph& graph, GraphValidationReport& report) {
    report.asymmetric_synonym_pairs = asymmetric_pair_count(graph, EdgeType::Synonym);
    report.asymmetric_antonym_pairs = asymmetric_pair_count(graph, EdgeType::Antonym);
}

// ---------------------------------------------------------------------------
// Hypernym cycles: iterative Tarjan over the hypernym subgraph.

std::vector<std::vector<std::string>> detect_hypernym_cycles(const SemanticGraph& graph) {
    // Compact vertex universe: endpoints of hypernym edges.
    std::unordered_map<std::uint32_t, std::uint32_t> compact;
    std::vector<std::uint32_t> vertex_ids;
    auto compact_id = [&](std::uint32_t id) {
        auto [it, inserted] = compact.try_emplace(id, static_cast<std::uint32_t>(vertex_ids.size()));
        if (inserted) vertex_ids.push_back(id);
        return it->second;
    };

    std::vector<std::pair<std::uint32_t, std::uint32_t>> arcs;
    std::vector<bool> self_loop;
    for (const auto& e : graph.edges()) {
        if (e.relation != EdgeType::Hypernym) continue;
        std::uint32_t u = compact_id(e.source);
        std::uint32_t v = compact_id(e.target);
        arcs.emplace_back(u, v);
        if (self_loop.size() < vertex_ids.size()) self_loop.resize(vertex_ids.size(), false);
        if (u == v) self_loop[u] = true;
    }
    self_loop.resize(vertex_ids.size(), false);

    const std::size_t n = vertex_ids.size();
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (auto [u, v] : arcs) adj[u].push_back(v);

    // Deterministic traversal order: lemma-sorted roots and neighbors.
    auto name_of = [&](std::uint32_t v) -> const std::string& {
        return graph.name(vertex_ids[v]);
    };
    for (auto& list : adj) {
        std::sort(list.begin(), list.end(),
                  [&](std::uint32_t a, std::uint32_t b) { return name_of(a) < name_of(b); });
    }
    std::vector<std::uint32_t> roots(n);
    std::iota(roots.begin(), roots.end(), 0);
    std::sort(roots.begin(), roots.end(),
              [&](std::uint32_t a, std::uint32_t b) { return name_of(a) < name_of(b); });

    std::vector<std::int32_t> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::uint32_t> stack;
    std::int32_t counter = 0;
    std::vector<std::vector<std::string>> cycles;

    struct Frame {
        std::uint32_t v;
        std::size_t child = 0;
    };

    for (std::uint32_t root : roots) {
        if (index[root] != -1) continue;
        std::vector<Frame> frames{{root}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.child < adj[f.v].size()) {
                std::uint32_t w = adj[f.v][f.child++];
                if (index[w] == -1) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                if (low[f.v] == index[f.v]) {
                    std::vector<std::string> component;
                    std::uint32_t w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        component.push_back(name_of(w));
                    } while (w != f.v);
                    if (component.size() > 1 || self_loop[f.v]) {
                        std::sort(component.begin(), component.end());
                        cycles.push_back(std::move(component));
                    }
                }
                std::uint32_t v = f.v;
                frames.pop_back();
                if (!frames.empty()) {
                    low[frames.back().v] = std::min(low[frames.back().v], low[v]);
                }
            }
        }
    }

    std::sort(cycles.begin(), cycles.end());
    return cycles;
}

// ---------------------------------------------------------------------------
// Connectivity

namespace {

DegreeSummary summarize(std::vector<std::int64_t>& degrees) {
    DegreeSummary s;
    if (degrees.empty()) return s;
    std::sort(degrees.begin(), degrees.end());
    double sum = 0;
    for (auto d : degrees) sum += static_cast<double>(d);
    s.mean = sum / static_cast<double>(degrees.size());
    std::size_t n = degrees.size();
    s.median = (n % 2 == 1) ? static_cast<double>(degrees[n / 2])
                            : (static_cast<double>(degrees[n / 2 - 1]) +
                               static_cast<double>(degrees[n / 2])) /
                                  2.0;
    s.max = degrees.back();
    double var = 0;
    for (auto d : degrees) {
        double delta = static_cast<double>(d) - s.mean;
        var += delta * delta;
    }
    s.stddev = std::sqrt(var / static_cast<double>(n));
    return s;
}

}  // namespace

ConnectivityStats connectivity_stats(const SemanticGraph& graph,
                                     const std::vector<fs::path>& shards,
                                     const PruneOptions& opts) {
    // Incident multiplicity per node from the pruned graph.
    std::unordered_map<std::uint32_t, std::int64_t> out_all, in_all, in_sense;
    for (const auto& e : graph.edges()) {
        out_all[e.source] += e.multiplicity;
        if (graph.is_node(e.target)) {
            in_all[e.target] += e.multiplicity;
            if (edge_category(e.relation) == EdgeCategory::SenseLevel) {
                in_sense[e.target] += e.multiplicity;
            }
        }
    }

    std::set<std::string> lowered_nodes;
    if (opts.case_insensitive) {
        for (std::uint32_t id = 0; id < graph.lemma_count(); ++id) {
            if (graph.is_node(id)) lowered_nodes.insert(to_lower(graph.name(id)));
        }
    }
    // Same survival test as pruning, against the graph's node set.
    auto survives = [&](const LexemeEdge& edge) {
        if (!vocabulary_pruned(edge.relation, opts)) return true;
        if (graph.has_node(edge.target)) return true;
        if (opts.case_insensitive) return lowered_nodes.count(to_lower(edge.target)) > 0;
        return false;
    };

    std::vector<std::int64_t> sense_degrees;
    std::int64_t isolated = 0;

    for_each_entry(shards, [&](const LexemeEntry& entry) {
        auto lemma_id = graph.find(entry.lemma);
        std::int64_t in_sense_total =
            lemma_id && in_sense.count(*lemma_id) ? in_sense.at(*lemma_id) : 0;
        std::size_t sense_count = entry.sense_count();
        std::int64_t share =
            sense_count > 0 ? in_sense_total / static_cast<std::int64_t>(sense_count) : 0;

        // Surviving out-edges per (pos, sense index).
        std::map<std::pair<int, std::int32_t>, std::int64_t> out_by_sense;
        for (const auto& pe : entry.pos_entries) {
            for (std::size_t i = 0; i < pe.senses.size(); ++i) {
                out_by_sense[{static_cast<int>(pe.pos), static_cast<std::int32_t>(i)}] = 0;
            }
        }
        for (const auto& edge : extract_sense_edges(entry)) {
            if (!survives(edge)) continue;
            ++out_by_sense[{static_cast<int>(*edge.source_pos), *edge.sense_index}];
        }
        for (const auto& [key, out] : out_by_sense) {
            std::int64_t degree = out + share;
            sense_degrees.push_back(degree);
            if (degree == 0) ++isolated;
        }
    });

    ConnectivityStats stats;
    stats.sense_population = static_cast<std::int64_t>(sense_degrees.size());
    stats.isolated_sense_fraction =
        sense_degrees.empty() ? 0.0
                              : static_cast<double>(isolated) / static_cast<double>(sense_degrees.size());
    stats.sense_level = summarize(sense_degrees);

    std::vector<std::int64_t> word_degrees;
    for (std::uint32_t id = 0; id < graph.lemma_count(); ++id) {
        if (!graph.is_node(id)) continue;
        std::int64_t degree = 0;
        if (auto it = out_all.find(id); it != out_all.end()) degree += it->second;
        if (auto it = in_all.find(id); it != in_all.end()) degree += it->second;
        word_degrees.push_back(degree);
    }
    stats.word_population = static_cast<std::int64_t>(word_degrees.size());
    stats.word_level = summarize(word_degrees);
    return stats;
}

// ---------------------------------------------------------------------------
// Build

namespace {

struct ShardExtract {
    std::vector<std::string> names;  // local interner
    std::vector<SemanticGraph::Edge> edges;
    std::vector<std::uint32_t> node_ids;  // local ids of headwords
    std::map<EdgeType, std::int64_t> extracted;
    std::int64_t accepted = 0;
    std::int64_t rejected = 0;
};

ShardExtract extract_shard(const fs::path& shard) {
    ShardExtract result;
    std::unordered_map<std::string, std::uint32_t> local_ids;
    auto intern = [&](const std::string& s) {
        auto it = local_ids.find(s);
        if (it != local_ids.end()) return it->second;
        auto id = static_cast<std::uint32_t>(result.names.size());
        result.names.push_back(s);
        local_ids.emplace(s, id);
        return id;
    };
    for_each_entry(
        {shard},
        [&](const LexemeEntry& entry) {
            ++result.accepted;
            result.node_ids.push_back(intern(entry.lemma));
            for (const auto& edge : extract_all_edges(entry)) {
                SemanticGraph::Edge e;
                e.source = intern(edge.source);
                e.target = intern(edge.target);
                e.relation = edge.relation;
                e.source_pos =
                    edge.source_pos ? static_cast<std::int8_t>(*edge.source_pos) : std::int8_t{-1};
                e.sense_index = edge.sense_index ? *edge.sense_index : -1;
                e.multiplicity = 1;
                result.edges.push_back(e);
                ++result.extracted[edge.relation];
            }
        },
        [&](const Rejection&) { ++result.rejected; });
    return result;
}

}  // namespace

GraphBuildResult build_graph(const std::vector<fs::path>& shards, const GraphBuildOptions& opts) {
    GraphBuildResult result;

    // Per-shard extraction, merged in shard order so builds are reproducible
    // regardless of worker count.
    std::vector<ShardExtract> extracts(shards.size());
    int jobs = std::max(1, opts.jobs);
    if (jobs == 1 || shards.size() <= 1) {
        for (std::size_t i = 0; i < shards.size(); ++i) extracts[i] = extract_shard(shards[i]);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        std::size_t worker_count = std::min(static_cast<std::size_t>(jobs), shards.size());
        workers.reserve(worker_count);
        for (std::size_t w = 0; w < worker_count; ++w) {
            workers.emplace_back([&]() {
                for (;;) {
                    std::size_t i = next.fetch_add(1);
                    if (i >= shards.size()) return;
                    extracts[i] = extract_shard(shards[i]);
                }
            });
        }
        for (auto& t : workers) t.join();
    }

    SemanticGraph& graph = result.graph;
    for (auto& ex : extracts) {
        std::vector<SemanticGraph::LemmaId> remap(ex.names.size());
        for (std::size_t i = 0; i < ex.names.size(); ++i) remap[i] = graph.intern(ex.names[i]);
        for (auto local : ex.node_ids) graph.add_node(ex.names[local]);
        for (auto e : ex.edges) {
            e.source = remap[e.source];
            e.target = remap[e.target];
            graph.add_edge(e);
        }
        for (const auto& [relation, count] : ex.extracted) result.extracted[relation] += count;
        result.entries_scanned += ex.accepted;
        result.entries_rejected += ex.rejected;
        ex = ShardExtract{};  // release early
    }

    // Frontier before pruning: out-of-vocabulary sense/derivation targets.
    {
        std::unordered_map<std::uint32_t, std::int64_t> counts;
        for (const auto& e : graph.edges()) {
            if (!frontier_relation(e.relation)) continue;
            if (graph.is_node(e.target)) continue;
            counts[e.target] += e.multiplicity;
        }
        result.frontier.reserve(counts.size());
        for (const auto& [id, count] : counts) {
            result.frontier.push_back({graph.name(id), count});
        }
        sort_frontier(result.frontier);
    }

    graph.prune(opts.prune, result.report);
    graph.finalize();
    return result;
}

void write_edge_file(const fs::path& path, const SemanticGraph& graph) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    for (const auto& e : graph.edges()) {
        json doc = edge_to_json(graph.materialize(e));
        if (e.multiplicity > 1) doc["multiplicity"] = e.multiplicity;
        out << doc.dump() << '\n';
    }
    if (!out) throw IoError("write failed for " + path.string());
}

SemanticGraph read_edge_file(const fs::path& path, const std::set<std::string>& nodes) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    SemanticGraph graph;
    for (const auto& lemma : nodes) graph.add_node(lemma);
    std::string line;
    std::int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        json doc = json::parse(line, nullptr, false);
        if (doc.is_discarded()) {
            throw IoError("malformed edge at " + path.string() + ":" + std::to_string(line_no));
        }
        LexemeEdge edge = edge_from_json(doc);
        SemanticGraph::Edge e;
        e.source = graph.intern(edge.source);
        e.target = graph.intern(edge.target);
        e.relation = edge.relation;
        e.source_pos = edge.source_pos ? static_cast<std::int8_t>(*edge.source_pos) : std::int8_t{-1};
        e.sense_index = edge.sense_index ? *edge.sense_index : -1;
        e.multiplicity = doc.value("multiplicity", 1u);
        graph.add_edge(e);
    }
    graph.finalize();
    return graph;
}

}  // namespace opengloss
