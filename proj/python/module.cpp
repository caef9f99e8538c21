#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "opengloss/backend.hpp"
#include "opengloss/graph.hpp"
#include "opengloss/json_io.hpp"
#include "opengloss/normalize.hpp"
#include "opengloss/pipeline.hpp"
#include "opengloss/qa.hpp"
#include "opengloss/stats.hpp"
#include "opengloss/store.hpp"
#include "opengloss/validate.hpp"

namespace py = pybind11;
using namespace opengloss;

namespace {

std::vector<std::filesystem::path> as_shards(const std::vector<std::filesystem::path>& inputs) {
    return collect_shard_paths(inputs);
}

}  // namespace

PYBIND11_MODULE(_opengloss, m) {
    m.doc() = "Lexical knowledge-graph engine: validation, graph construction, "
              "statistics, generation pipeline, and QA over JSONL entry shards.";

    py::enum_<PartOfSpeech>(m, "PartOfSpeech")
        .value("noun", PartOfSpeech::Noun)
        .value("verb", PartOfSpeech::Verb)
        .value("adjective", PartOfSpeech::Adjective)
        .value("adverb", PartOfSpeech::Adverb)
        .value("determiner", PartOfSpeech::Determiner)
        .value("preposition", PartOfSpeech::Preposition)
        .value("conjunction", PartOfSpeech::Conjunction)
        .value("pronoun", PartOfSpeech::Pronoun)
        .value("interjection", PartOfSpeech::Interjection);

    py::enum_<EdgeType>(m, "EdgeType")
        .value("synonym", EdgeType::Synonym)
        .value("antonym", EdgeType::Antonym)
        .value("hypernym", EdgeType::Hypernym)
        .value("hyponym", EdgeType::Hyponym)
        .value("collocation", EdgeType::Collocation)
        .value("inflection", EdgeType::Inflection)
        .value("noun_derivation", EdgeType::NounDerivation)
        .value("verb_derivation", EdgeType::VerbDerivation)
        .value("adjective_derivation", EdgeType::AdjectiveDerivation)
        .value("adverb_derivation", EdgeType::AdverbDerivation)
        .value("cognate", EdgeType::Cognate)
        .value("morpheme_component", EdgeType::MorphemeComponent)
        .value("etymology_parent", EdgeType::EtymologyParent);

    py::enum_<EdgePriority>(m, "EdgePriority")
        .value("high", EdgePriority::High)
        .value("medium", EdgePriority::Medium)
        .value("low", EdgePriority::Low);

    py::enum_<QaVerdict>(m, "QaVerdict")
        .value("passed", QaVerdict::Pass)
        .value("needs_review", QaVerdict::NeedsReview)
        .value("flagged", QaVerdict::Flagged);

    m.def("normalize_lemma", [](const std::string& raw) { return normalize_lemma(raw); },
          py::arg("raw"), "NFC + whitespace-collapsed canonical lemma form.");
    m.def("classify_priority", &classify_priority, py::arg("relation"));
    m.def("edge_type_name", [](EdgeType t) { return std::string(to_string(t)); });

    // Entries move across the boundary as JSON strings; the python package
    // wraps them in dicts.
    m.def(
        "parse_entry_json",
        [](const std::string& line) { return entry_to_json(parse_entry(line)).dump(); },
        py::arg("line"), "Parse one JSONL entry line and return its canonical serialization.");
    m.def(
        "validate_entry_json",
        [](const std::string& line, bool strict) {
            LexemeEntry entry = parse_entry(line);
            ValidationOutcome outcome = validate_entry(
                entry, strict ? ValidationMode::GenerationStrict : ValidationMode::IngestionLenient);
            std::vector<std::map<std::string, std::string>> issues;
            for (const auto& issue : outcome.issues) {
                issues.push_back({{"severity", std::string(to_string(issue.severity))},
                                  {"field", issue.field},
                                  {"message", issue.message}});
            }
            return py::make_tuple(outcome.ok(), issues);
        },
        py::arg("line"), py::arg("strict") = false,
        "Returns (ok, issues) for one entry line.");
    m.def(
        "extract_edges_json",
        [](const std::string& line) {
            LexemeEntry entry = parse_entry(line);
            nlohmann::json out = nlohmann::json::array();
            for (const auto& edge : extract_all_edges(entry)) out.push_back(edge_to_json(edge));
            return out.dump();
        },
        py::arg("line"), "All 13-relation edges extracted from one entry, as a JSON array.");

    m.def(
        "build_graph",
        [](const std::vector<std::filesystem::path>& inputs, const std::string& edge_file,
           bool prune_derivations, int jobs) {
            GraphBuildOptions opts;
            opts.prune.prune_derivations = prune_derivations;
            opts.jobs = jobs;
            GraphBuildResult built = build_graph(as_shards(inputs), opts);
            if (!edge_file.empty()) write_edge_file(edge_file, built.graph);
            nlohmann::json report = {
                {"entries_scanned", built.entries_scanned},
                {"entries_rejected", built.entries_rejected},
                {"nodes", built.graph.node_count()},
                {"invalid_target_count", built.report.invalid_target_count},
                {"edge_distribution", edge_distribution_json(edge_distribution(built.graph))},
            };
            nlohmann::json frontier = nlohmann::json::array();
            for (const auto& item : built.frontier) {
                frontier.push_back({{"lemma", item.lemma}, {"references", item.reference_count}});
            }
            report["frontier"] = std::move(frontier);
            return report.dump();
        },
        py::arg("shards"), py::arg("edge_file") = std::string(),
        py::arg("prune_derivations") = true, py::arg("jobs") = 1,
        "Build the pruned graph; returns the build report as JSON.");

    m.def(
        "stats_report",
        [](const std::vector<std::filesystem::path>& inputs, int jobs) {
            return stats_report_json(collect_stats(as_shards(inputs), jobs)).dump();
        },
        py::arg("shards"), py::arg("jobs") = 1, "Corpus statistics report as JSON.");

    m.def(
        "vocab_overlap",
        [](const std::vector<std::filesystem::path>& inputs, const std::filesystem::path& wordlist,
           bool underscore_normalize) {
            LemmaIndex index = build_lemma_index(as_shards(inputs));
            return overlap_json(vocab_overlap_file(index.vocabulary, wordlist,
                                                   underscore_normalize))
                .dump();
        },
        py::arg("shards"), py::arg("wordlist"), py::arg("underscore_normalize") = false);

    m.def("select_seed_lexemes",
          [](const std::filesystem::path& wordlist) { return select_seed_lexemes(wordlist); },
          py::arg("wordlist"));

    m.def(
        "generate",
        [](const std::vector<std::string>& seeds, const std::filesystem::path& output,
           std::uint64_t seed, double malformation_rate, int concurrency, int max_attempts,
           const std::string& timestamp, const std::string& checkpoint) {
            MockBackend backend(seed, malformation_rate);
            PipelineRun run;
            run.queue = select_seed_lexemes(seeds);
            OrchestrateOptions opts;
            opts.concurrency = concurrency;
            opts.retry.max_attempts = max_attempts;
            opts.output_shard = output;
            opts.checkpoint = checkpoint;
            opts.timestamp = timestamp;
            run = orchestrate(std::move(run), backend, opts);
            nlohmann::json summary = {{"completed", run.completed},
                                      {"failed", run.failed.size()},
                                      {"requests", run.request_count},
                                      {"retries", run.retry_count}};
            return summary.dump();
        },
        py::arg("seeds"), py::arg("output"), py::arg("seed") = 42,
        py::arg("malformation_rate") = 0.0, py::arg("concurrency") = 1,
        py::arg("max_attempts") = 3, py::arg("timestamp") = std::string("1970-01-01T00:00:00Z"),
        py::arg("checkpoint") = std::string(),
        "Run the mock generation pipeline over seed lemmas; returns a JSON summary.");

    m.def(
        "qa_run",
        [](const std::vector<std::filesystem::path>& inputs, std::size_t sample,
           std::uint64_t seed, bool wordnet_aligned) {
            auto shards = as_shards(inputs);
            LemmaIndex index = build_lemma_index(shards);
            MockBackend judge(seed);
            QaPolicy policy =
                wordnet_aligned ? QaPolicy::WordnetAligned : QaPolicy::StrictTraditional;
            std::vector<QaResult> results;
            for (const auto& entry : sample_entries(shards, index, sample, seed)) {
                results.push_back(judge_entry(entry, judge, index.vocabulary, policy));
            }
            return qa_report_json(aggregate_report(results)).dump();
        },
        py::arg("shards"), py::arg("sample"), py::arg("seed") = 42,
        py::arg("wordnet_aligned") = true,
        "Sample entries and run the mock judge; returns the QA report as JSON.");

    py::register_exception<ParseError>(m, "EntryParseError");
    py::register_exception<NormalizationError>(m, "NormalizationError");
    py::register_exception<IoError>(m, "IoError");
}
