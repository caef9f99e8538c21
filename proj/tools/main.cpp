#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "opengloss/backend.hpp"
#include "opengloss/graph.hpp"
#include "opengloss/json_io.hpp"
#include "opengloss/pipeline.hpp"
#include "opengloss/qa.hpp"
#include "opengloss/stats.hpp"
#include "opengloss/store.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace opengloss;

// Exit codes: 0 success, 1 data violations found, 2 usage error,
// 3 I/O or backend failure.
namespace {

constexpr int kOk = 0;
constexpr int kViolations = 1;
constexpr int kUsage = 2;
constexpr int kFailure = 3;

std::vector<fs::path> to_paths(const std::vector<std::string>& inputs) {
    std::vector<fs::path> paths;
    paths.reserve(inputs.size());
    for (const auto& s : inputs) paths.push_back(s);
    return collect_shard_paths(paths);
}

int default_jobs() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

fs::path default_checkpoint(const fs::path& output) {
    if (const char* cache = std::getenv("OPENGLOSS_CACHE_DIR"); cache && *cache) {
        return fs::path(cache) / (output.filename().string() + ".checkpoint.json");
    }
    fs::path p = output;
    p += ".checkpoint.json";
    return p;
}

int cmd_validate(const std::vector<std::string>& inputs, bool strict,
                 const std::string& manifest) {
    auto shards = to_paths(inputs);
    std::int64_t rejected = 0;
    StreamCounts counts = for_each_entry(
        shards, [](const LexemeEntry&) {},
        [&](const Rejection& r) {
            ++rejected;
            std::cerr << r.shard.string() << ":" << r.line << ": " << r.diagnostic << "\n";
        },
        strict ? ValidationMode::GenerationStrict : ValidationMode::IngestionLenient);
    if (!manifest.empty()) {
        std::vector<Shard> scanned;
        scanned.reserve(shards.size());
        for (const auto& path : shards) scanned.push_back(scan_shard(path));
        write_manifest(manifest, scanned);
    }
    json summary = {{"accepted", counts.accepted}, {"rejected", counts.rejected}};
    std::cout << summary.dump() << "\n";
    return rejected == 0 ? kOk : kViolations;
}

int cmd_stats(const std::vector<std::string>& inputs, const std::string& format, bool with_graph,
              int jobs) {
    auto shards = to_paths(inputs);
    CorpusStats stats = collect_stats(shards, jobs);
    if (format == "csv") {
        std::cout << stats_report_csv(stats);
        return kOk;
    }
    json report = stats_report_json(stats);
    if (with_graph) {
        GraphBuildOptions opts;
        opts.jobs = jobs;
        GraphBuildResult built = build_graph(shards, opts);
        report["edge_distribution"] = edge_distribution_json(edge_distribution(built.graph));
        report["connectivity"] = connectivity_json(connectivity_stats(built.graph, shards));
    }
    std::cout << report.dump(2) << "\n";
    return kOk;
}

json report_to_json(const GraphValidationReport& report) {
    json pruned = json::object();
    for (const auto& [relation, count] : report.pruned_edges) {
        pruned[std::string(to_string(relation))] = count;
    }
    json cycles = json::array();
    for (const auto& cycle : report.hypernym_cycles) cycles.push_back(cycle);
    return {{"invalid_target_count", report.invalid_target_count},
            {"pruned_edges", std::move(pruned)},
            {"hypernym_cycles", std::move(cycles)},
            {"asymmetric_synonym_pairs", report.asymmetric_synonym_pairs},
            {"asymmetric_antonym_pairs", report.asymmetric_antonym_pairs}};
}

int cmd_graph_build(const std::vector<std::string>& inputs, const std::string& output,
                    const std::string& report_path, bool prune_derivations, bool case_insensitive,
                    int jobs) {
    auto shards = to_paths(inputs);
    GraphBuildOptions opts;
    opts.prune.prune_derivations = prune_derivations;
    opts.prune.case_insensitive = case_insensitive;
    opts.jobs = jobs;
    GraphBuildResult built = build_graph(shards, opts);
    write_edge_file(output, built.graph);

    json extracted = json::object();
    for (const auto& [relation, count] : built.extracted) {
        extracted[std::string(to_string(relation))] = count;
    }
    json kept = json::object();
    for (const auto& [relation, count] : built.graph.edge_counts()) {
        kept[std::string(to_string(relation))] = count;
    }
    json report = {{"entries_scanned", built.entries_scanned},
                   {"entries_rejected", built.entries_rejected},
                   {"nodes", built.graph.node_count()},
                   {"extracted", std::move(extracted)},
                   {"kept", std::move(kept)},
                   {"pruning", report_to_json(built.report)},
                   {"frontier_size", built.frontier.size()},
                   {"edge_file", output}};
    if (report_path.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        std::ofstream out(report_path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write report " + report_path);
        out << report.dump(2) << "\n";
        std::cout << report["edge_file"].get<std::string>() << "\n";
    }
    return kOk;
}

int cmd_graph_check(const std::string& edge_file, const std::vector<std::string>& inputs,
                    int jobs) {
    auto shards = to_paths(inputs);
    LemmaIndex index = build_lemma_index(shards, jobs);
    SemanticGraph graph = read_edge_file(edge_file, index.vocabulary);

    GraphValidationReport report;
    {
        // Re-audit target validity without mutating the graph.
        SemanticGraph copy = graph;
        copy.prune({}, report);
    }
    check_symmetry(graph, report);
    report.hypernym_cycles = detect_hypernym_cycles(graph);

    std::cout << report_to_json(report).dump(2) << "\n";
    bool violations = report.invalid_target_count > 0 || !report.hypernym_cycles.empty() ||
                      report.asymmetric_synonym_pairs > 0 || report.asymmetric_antonym_pairs > 0;
    return violations ? kViolations : kOk;
}

int cmd_frontier(const std::vector<std::string>& inputs, std::size_t cap,
                 const std::string& format, int jobs) {
    auto shards = to_paths(inputs);
    GraphBuildOptions opts;
    opts.jobs = jobs;
    GraphBuildResult built = build_graph(shards, opts);
    if (built.frontier.size() > cap) built.frontier.resize(cap);
    if (format == "csv") {
        std::cout << "lemma,references\n";
        for (const auto& item : built.frontier) {
            std::cout << item.lemma << "," << item.reference_count << "\n";
        }
        return kOk;
    }
    json out = json::array();
    for (const auto& item : built.frontier) {
        out.push_back({{"lemma", item.lemma}, {"references", item.reference_count}});
    }
    std::cout << out.dump(2) << "\n";
    return kOk;
}

int cmd_generate(const std::string& seeds_file, const std::string& backend_sel,
                 std::uint64_t seed, double malformation_rate, const std::string& replay_dir,
                 const std::string& http_host, const std::string& output,
                 std::string checkpoint, int concurrency, int rate_limit, int rounds,
                 std::size_t round_cap, int max_attempts, const std::string& timestamp,
                 int checkpoint_interval) {
    auto backend = make_backend(backend_sel, seed, malformation_rate, replay_dir, http_host);
    PipelineRun run;
    run.queue = select_seed_lexemes(seeds_file);
    if (run.queue.empty()) throw std::invalid_argument("no usable seed lexemes in " + seeds_file);

    OrchestrateOptions opts;
    opts.concurrency = concurrency;
    opts.rate_per_minute = rate_limit;
    opts.retry.max_attempts = max_attempts;
    opts.output_shard = output;
    if (checkpoint.empty()) checkpoint = default_checkpoint(output).string();
    opts.checkpoint = checkpoint;
    opts.checkpoint_interval = checkpoint_interval;
    opts.timestamp = timestamp;

    run = orchestrate(std::move(run), *backend, opts);
    for (int round = 0; round < rounds; ++round) {
        GraphBuildResult built = build_graph({fs::path(output)}, {});
        run_snowball_round(run, built.frontier, round_cap);
        run = orchestrate(std::move(run), *backend, opts);
    }

    json failures = json::array();
    for (const auto& f : run.failed) {
        failures.push_back({{"lemma", f.lemma},
                            {"stage", f.stage},
                            {"attempts", f.attempts},
                            {"diagnostics", f.diagnostics}});
    }
    json summary = {{"queued", run.queue.size()},
                    {"completed", run.completed},
                    {"failed", std::move(failures)},
                    {"requests", run.request_count},
                    {"retries", run.retry_count},
                    {"estimated_cost_units", run.estimated_cost_units},
                    {"rounds", run.round},
                    {"shard", output},
                    {"checkpoint", checkpoint}};
    std::cout << summary.dump(2) << "\n";
    return run.failed.empty() ? kOk : kViolations;
}

int cmd_qa(const std::vector<std::string>& inputs, std::size_t sample, std::uint64_t seed,
           const std::string& backend_sel, const std::string& replay_dir,
           const std::string& http_host, const std::string& policy_text,
           const std::string& format, int max_attempts, int jobs) {
    auto shards = to_paths(inputs);
    LemmaIndex index = build_lemma_index(shards, jobs);
    auto judge = make_backend(backend_sel, seed, 0.0, replay_dir, http_host);
    QaPolicy policy = policy_text == "strict-traditional" ? QaPolicy::StrictTraditional
                                                          : QaPolicy::WordnetAligned;
    std::vector<LexemeEntry> entries = sample_entries(shards, index, sample, seed);
    RetryPolicy retry{max_attempts};

    // Entries are judged independently; keep in-flight judge calls bounded.
    std::vector<QaResult> results(entries.size());
    if (int cap = judge->max_concurrency(); cap > 0) jobs = std::min(jobs, cap);
    std::size_t workers_n = std::min<std::size_t>(std::max(1, jobs), entries.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(workers_n);
    for (std::size_t w = 0; w < workers_n; ++w) {
        workers.emplace_back([&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= entries.size()) return;
                try {
                    results[i] = judge_entry(entries[i], *judge, index.vocabulary, policy, retry);
                } catch (const std::exception& e) {
                    results[i].lemma = entries[i].lemma;
                    results[i].verdict = QaVerdict::NeedsReview;
                    results[i].transport_note = e.what();
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    QaReport report = aggregate_report(results);
    if (format == "text") {
        std::cout << qa_report_text(report);
    } else {
        std::cout << qa_report_json(report).dump(2) << "\n";
    }
    return kOk;
}

int cmd_compare(const std::vector<std::string>& inputs, const std::string& wordlist,
                bool underscore_normalize, int jobs) {
    auto shards = to_paths(inputs);
    LemmaIndex index = build_lemma_index(shards, jobs);
    OverlapStats overlap = vocab_overlap_file(index.vocabulary, wordlist, underscore_normalize);
    std::cout << overlap_json(overlap).dump(2) << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"OpenGloss lexical knowledge-graph engine"};
    app.require_subcommand(1);

    // validate
    auto* validate = app.add_subcommand("validate", "Validate shards; exit 0 iff no rejections");
    std::vector<std::string> validate_inputs;
    bool validate_strict = false;
    std::string validate_manifest;
    validate->add_option("shards", validate_inputs, "JSONL files or directories")->required();
    validate->add_flag("--strict", validate_strict, "generation-strict arity enforcement");
    validate->add_option("--manifest", validate_manifest,
                         "also write a shard manifest (checksums + counts) here");

    // stats
    auto* stats = app.add_subcommand("stats", "Dataset statistics report");
    std::vector<std::string> stats_inputs;
    std::string stats_format = "json";
    bool stats_with_graph = false;
    int stats_jobs = default_jobs();
    stats->add_option("shards", stats_inputs, "JSONL files or directories")->required();
    stats->add_option("--format", stats_format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    stats->add_flag("--with-graph", stats_with_graph,
                    "also build the graph and report edge distribution + connectivity");
    stats->add_option("--jobs", stats_jobs, "parallel shard workers");

    // graph build/check
    auto* graph = app.add_subcommand("graph", "Build or audit the semantic graph");
    graph->require_subcommand(1);
    auto* gbuild = graph->add_subcommand("build", "Extract, prune, and write the edge file");
    std::vector<std::string> gbuild_inputs;
    std::string gbuild_output, gbuild_report;
    bool gbuild_no_prune_derivations = false;
    bool gbuild_ci = false;
    int gbuild_jobs = default_jobs();
    gbuild->add_option("shards", gbuild_inputs, "JSONL files or directories")->required();
    gbuild->add_option("-o,--output", gbuild_output, "edge file path")->required();
    gbuild->add_option("--report", gbuild_report, "write the build report here instead of stdout");
    gbuild->add_flag("--no-prune-derivations", gbuild_no_prune_derivations,
                     "exempt derivation targets from vocabulary pruning");
    gbuild->add_flag("--case-insensitive-match", gbuild_ci,
                     "case-insensitive fallback for target matching");
    gbuild->add_option("--jobs", gbuild_jobs, "parallel shard workers");

    auto* gcheck = graph->add_subcommand("check", "Symmetry, cycle, and pruning audit");
    std::string gcheck_edges;
    std::vector<std::string> gcheck_inputs;
    int gcheck_jobs = default_jobs();
    gcheck->add_option("edges", gcheck_edges, "edge file")->required();
    gcheck->add_option("shards", gcheck_inputs, "JSONL files or directories")->required();
    gcheck->add_option("--jobs", gcheck_jobs, "parallel shard workers");

    // frontier
    auto* frontier = app.add_subcommand("frontier", "Out-of-vocabulary snowball frontier");
    std::vector<std::string> frontier_inputs;
    std::size_t frontier_cap = 100;
    std::string frontier_format = "json";
    int frontier_jobs = default_jobs();
    frontier->add_option("shards", frontier_inputs, "JSONL files or directories")->required();
    frontier->add_option("--cap", frontier_cap, "maximum frontier entries");
    frontier->add_option("--format", frontier_format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    frontier->add_option("--jobs", frontier_jobs, "parallel shard workers");

    // generate
    auto* generate = app.add_subcommand("generate", "Run the generation pipeline");
    std::string gen_seeds, gen_backend = "mock", gen_replay, gen_http, gen_output, gen_checkpoint,
                gen_timestamp;
    std::uint64_t gen_seed = 42;
    double gen_malformation = 0.0;
    int gen_concurrency = default_jobs();
    int gen_rate = 0, gen_rounds = 0, gen_attempts = 3, gen_ckpt_interval = 1;
    std::size_t gen_round_cap = 100;
    generate->add_option("--seeds", gen_seeds, "newline-delimited seed wordlist")->required();
    generate->add_option("--backend", gen_backend, "mock, replay, or http")
        ->check(CLI::IsMember({"mock", "replay", "http"}));
    generate->add_option("--seed", gen_seed, "deterministic mock seed");
    generate->add_option("--malformation-rate", gen_malformation,
                         "mock malformed-output fraction");
    generate->add_option("--replay-dir", gen_replay, "fixture directory for the replay backend");
    generate->add_option("--http-host", gen_http, "base URL for the http backend");
    generate->add_option("-o,--output", gen_output, "output shard path")->required();
    generate->add_option("--checkpoint", gen_checkpoint,
                         "checkpoint path (default: alongside output, or OPENGLOSS_CACHE_DIR)");
    generate->add_option("--concurrency", gen_concurrency, "lexemes in flight");
    generate->add_option("--rate-limit", gen_rate, "requests per minute, 0 = unlimited");
    generate->add_option("--rounds", gen_rounds, "snowball rounds after the seed pass");
    generate->add_option("--round-cap", gen_round_cap, "frontier lemmas per round");
    generate->add_option("--max-attempts", gen_attempts, "schema-retry attempts per stage");
    generate->add_option("--timestamp", gen_timestamp,
                         "fixed metadata timestamp (reproducible runs)");
    generate->add_option("--checkpoint-interval", gen_ckpt_interval,
                         "entries between checkpoint writes");

    // qa
    auto* qa = app.add_subcommand("qa", "Sample entries and run the quality audit");
    std::vector<std::string> qa_inputs;
    std::size_t qa_sample = 1000;
    std::uint64_t qa_seed = 42;
    std::string qa_backend = "mock", qa_replay, qa_http, qa_policy = "wordnet-aligned",
                qa_format = "json";
    int qa_attempts = 3;
    int qa_jobs = default_jobs();
    qa->add_option("shards", qa_inputs, "JSONL files or directories")->required();
    qa->add_option("--sample", qa_sample, "entries to sample");
    qa->add_option("--seed", qa_seed, "sampling / judge seed");
    qa->add_option("--backend", qa_backend, "mock, replay, or http")
        ->check(CLI::IsMember({"mock", "replay", "http"}));
    qa->add_option("--replay-dir", qa_replay, "fixture directory for the replay judge");
    qa->add_option("--http-host", qa_http, "base URL for the http judge");
    qa->add_option("--policy", qa_policy, "strict-traditional or wordnet-aligned")
        ->check(CLI::IsMember({"strict-traditional", "wordnet-aligned"}));
    qa->add_option("--format", qa_format, "json or text")->check(CLI::IsMember({"json", "text"}));
    qa->add_option("--max-attempts", qa_attempts, "judge retry attempts");
    qa->add_option("--jobs", qa_jobs, "bounded in-flight judge calls");

    // compare
    auto* compare = app.add_subcommand("compare", "Vocabulary overlap against a wordlist");
    std::vector<std::string> compare_inputs;
    std::string compare_wordlist;
    bool compare_underscore = false;
    compare->add_option("shards", compare_inputs, "JSONL files or directories")->required();
    compare->add_option("--wordlist", compare_wordlist, "newline-delimited external wordlist")
        ->required();
    compare->add_flag("--underscore-normalize", compare_underscore,
                      "map underscores to spaces before comparison");
    int compare_jobs = default_jobs();
    compare->add_option("--jobs", compare_jobs, "parallel shard workers");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*validate) return cmd_validate(validate_inputs, validate_strict, validate_manifest);
        if (*stats) return cmd_stats(stats_inputs, stats_format, stats_with_graph, stats_jobs);
        if (*gbuild) {
            return cmd_graph_build(gbuild_inputs, gbuild_output, gbuild_report,
                                   !gbuild_no_prune_derivations, gbuild_ci, gbuild_jobs);
        }
        if (*gcheck) return cmd_graph_check(gcheck_edges, gcheck_inputs, gcheck_jobs);
        if (*frontier) {
            return cmd_frontier(frontier_inputs, frontier_cap, frontier_format, frontier_jobs);
        }
        if (*generate) {
            return cmd_generate(gen_seeds, gen_backend, gen_seed, gen_malformation, gen_replay,
                                gen_http, gen_output, gen_checkpoint, gen_concurrency, gen_rate,
                                gen_rounds, gen_round_cap, gen_attempts, gen_timestamp,
                                gen_ckpt_interval);
        }
        if (*qa) {
            return cmd_qa(qa_inputs, qa_sample, qa_seed, qa_backend, qa_replay, qa_http, qa_policy,
                          qa_format, qa_attempts, qa_jobs);
        }
        if (*compare) {
            return cmd_compare(compare_inputs, compare_wordlist, compare_underscore, compare_jobs);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kUsage;
}
