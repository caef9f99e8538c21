#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "opengloss/backend.hpp"
#include "opengloss/graph.hpp"
#include "opengloss/model.hpp"

namespace opengloss {

struct CheckpointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RetryPolicy {
    int max_attempts = 3;  // >= 1
};

struct FailureRecord {
    std::string lemma;
    std::string stage;  // role name of the stage that exhausted its retries
    int attempts = 0;
    std::vector<std::string> diagnostics;
};

// Work-queue state of one generation run. Lemmas are unique within the
// queue; completed + failed + pending == queue size.
struct PipelineRun {
    std::vector<std::string> queue;
    std::int64_t completed = 0;
    std::vector<FailureRecord> failed;
    std::int64_t request_count = 0;
    std::int64_t retry_count = 0;
    double estimated_cost_units = 0.0;
    int round = 0;

    std::int64_t pending() const {
        return static_cast<std::int64_t>(queue.size()) - completed -
               static_cast<std::int64_t>(failed.size());
    }
};

// Wordlist filter: keep entries of 3-15 Unicode scalars that are purely
// alphabetic (dropping possessives and abbreviations), deduplicated after
// normalization, first-seen order. Proper nouns stay.
std::vector<std::string> select_seed_lexemes(const std::filesystem::path& wordlist,
                                             std::size_t min_len = 3, std::size_t max_len = 15);
std::vector<std::string> select_seed_lexemes(const std::vector<std::string>& lines,
                                             std::size_t min_len = 3, std::size_t max_len = 15);

struct GenerationOutcome {
    std::optional<LexemeEntry> entry;       // engaged on success
    std::optional<FailureRecord> failure;   // engaged on failure
    std::int64_t requests = 0;
    std::int64_t retries = 0;
};

// Full agent sequence for one lemma: overview -> per-POS details ->
// etymology (skipped for stopwords) -> encyclopedia. Every stage output is
// parsed and strictly validated; failures retry with the accumulated field
// diagnostics appended to the context, up to retry.max_attempts per stage.
// The assembled entry always passes validate_entry(GenerationStrict).
GenerationOutcome generate_lexeme(const std::string& lemma, GenerationBackend& backend,
                                  const RetryPolicy& retry = {},
                                  const std::string& timestamp = {});

// Appends up to `cap` frontier lemmas not already in the queue and bumps the
// round counter.
void run_snowball_round(PipelineRun& run, const std::vector<FrontierItem>& frontier,
                        std::size_t cap);

// Evenly paced request limiter: grants are at least 60000/per_minute ms
// apart. Clock and sleep are injectable for tests.
class RateLimiter {
public:
    RateLimiter(int per_minute, std::function<std::int64_t()> now_ms = {},
                std::function<void(std::int64_t)> sleep_ms = {});

    void acquire();

private:
    std::int64_t interval_ms_ = 0;
    std::int64_t next_slot_ms_ = 0;
    std::function<std::int64_t()> now_ms_;
    std::function<void(std::int64_t)> sleep_ms_;
    std::mutex mutex_;
};

struct OrchestrateOptions {
    int concurrency = 1;
    int rate_per_minute = 0;  // 0 = unlimited
    RetryPolicy retry;
    std::filesystem::path output_shard;
    std::filesystem::path checkpoint;  // empty = no checkpointing
    bool resume = true;
    int checkpoint_interval = 1;  // entries between checkpoint writes
    std::string timestamp;        // stamped into entries; empty = now (UTC)
    double cost_per_request = 1.0;

    // Test hooks.
    std::function<std::int64_t()> now_ms;
    std::function<void(std::int64_t)> sleep_ms;
    std::function<bool()> interrupt;  // polled between writes; true = stop
};

// Drives the queue with bounded concurrency and rate limiting; successes are
// appended to the output shard in queue order; the checkpoint file makes the
// run resumable after interruption (corrupt checkpoints refuse to resume).
PipelineRun orchestrate(PipelineRun run, GenerationBackend& backend,
                        const OrchestrateOptions& opts);

}  // namespace opengloss
