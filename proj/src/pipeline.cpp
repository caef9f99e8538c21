#include "opengloss/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <ctime>
#include <fstream>
#include <set>
#include <thread>
#include <unordered_set>

#include "opengloss/json_io.hpp"
#include "opengloss/normalize.hpp"
#include "opengloss/store.hpp"
#include "opengloss/validate.hpp"

namespace opengloss {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Seed selection

std::vector<std::string> select_seed_lexemes(const std::vector<std::string>& lines,
                                             std::size_t min_len, std::size_t max_len) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& raw : lines) {
        std::string lemma = normalize_lemma_lenient(raw);
        if (lemma.empty()) continue;
        std::size_t length = codepoint_count(lemma);
        if (length < min_len || length > max_len) continue;
        if (!is_alphabetic(lemma)) continue;  // drops possessives, hyphens, digits
        if (seen.insert(lemma).second) out.push_back(std::move(lemma));
    }
    return out;
}

std::vector<std::string> select_seed_lexemes(const fs::path& wordlist, std::size_t min_len,
                                             std::size_t max_len) {
    std::ifstream in(wordlist, std::ios::binary);
    if (!in) throw IoError("cannot open wordlist " + wordlist.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return select_seed_lexemes(lines, min_len, max_len);
}

// ---------------------------------------------------------------------------
// Stage machinery

namespace {

struct StageOutcome {
    bool ok = false;
    json doc;
    int attempts = 0;
    std::vector<std::string> diagnostics;
};

// One agent stage with the schema-retry loop: on failure the context of the
// next attempt carries every diagnostic gathered so far, so attempt n+1
// strictly extends attempt n.
StageOutcome run_stage(GenerationBackend& backend, AgentRole role, const json& base_context,
                       const RetryPolicy& retry,
                       const std::function<std::vector<std::string>(const json&)>& check) {
    StageOutcome outcome;
    int max_attempts = std::max(1, retry.max_attempts);
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        outcome.attempts = attempt;
        json context = base_context;
        context["instructions"] = std::string(prompt_template(role));
        context["attempt"] = attempt;
        context["requirements"] = outcome.diagnostics;

        std::string raw;
        try {
            raw = backend.generate(role, context, default_sampling_params(role));
        } catch (const TransportError& e) {
            outcome.diagnostics.push_back(std::string("transport: ") + e.what());
            continue;
        }
        json doc = json::parse(raw, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) {
            outcome.diagnostics.push_back("output is not a JSON object");
            continue;
        }
        std::vector<std::string> problems = check(doc);
        if (!problems.empty()) {
            for (auto& p : problems) outcome.diagnostics.push_back(std::move(p));
            continue;
        }
        outcome.ok = true;
        outcome.doc = std::move(doc);
        return outcome;
    }
    return outcome;
}

struct OverviewResult {
    std::vector<PartOfSpeech> pos_list;
    bool is_stopword = false;
    std::optional<std::string> stopword_reason;
    std::map<std::string, int> sense_hints;
};

std::vector<std::string> check_overview(const json& doc) {
    std::vector<std::string> problems;
    auto pos = doc.find("pos");
    if (pos == doc.end() || !pos->is_array() || pos->empty()) {
        problems.push_back("field 'pos' must be a non-empty array of part-of-speech labels");
    } else {
        std::set<std::string> seen;
        for (const auto& p : *pos) {
            if (!p.is_string() || !parse_part_of_speech(p.get<std::string>())) {
                problems.push_back("field 'pos' contains an unknown part-of-speech label");
                break;
            }
            if (!seen.insert(p.get<std::string>()).second) {
                problems.push_back("field 'pos' contains duplicates");
                break;
            }
        }
    }
    if (auto it = doc.find("is_stopword"); it == doc.end() || !it->is_boolean()) {
        problems.push_back("field 'is_stopword' must be a boolean");
    }
    if (auto it = doc.find("sense_counts"); it != doc.end() && !it->is_object()) {
        problems.push_back("field 'sense_counts' must be an object");
    }
    return problems;
}

OverviewResult parse_overview(const json& doc) {
    OverviewResult result;
    for (const auto& p : doc["pos"]) {
        result.pos_list.push_back(*parse_part_of_speech(p.get<std::string>()));
    }
    result.is_stopword = doc["is_stopword"].get<bool>();
    if (auto it = doc.find("stopword_reason"); it != doc.end() && it->is_string()) {
        result.stopword_reason = it->get<std::string>();
    }
    if (auto it = doc.find("sense_counts"); it != doc.end() && it->is_object()) {
        for (auto kv = it->begin(); kv != it->end(); ++kv) {
            if (kv.value().is_number_integer()) {
                result.sense_hints[kv.key()] = kv.value().get<int>();
            }
        }
    }
    return result;
}

// POS details are validated by assembling a one-POS entry and running the
// strict validator; its error diagnostics become the retry requirements.
std::vector<std::string> check_pos_details(const json& doc, const std::string& lemma,
                                           const std::string& pos) {
    std::vector<std::string> problems;
    json wrapper = {{"lemma", lemma}};
    json pe = doc;
    pe["pos"] = pos;
    wrapper["pos_entries"] = json::array({pe});
    LexemeEntry probe;
    try {
        probe = entry_from_json(wrapper);
    } catch (const std::exception& e) {
        problems.push_back(e.what());
        return problems;
    }
    ValidationOutcome outcome = validate_entry(probe, ValidationMode::GenerationStrict);
    for (const auto& issue : outcome.issues) {
        if (issue.severity == Severity::Error) {
            problems.push_back("field " + issue.field + ": " + issue.message);
        }
    }
    return problems;
}

std::vector<std::string> check_etymology(const json& doc, const std::string& lemma) {
    std::vector<std::string> problems;
    json wrapper = {{"lemma", lemma}, {"etymology", doc}};
    try {
        LexemeEntry probe = entry_from_json(wrapper);
        if (!probe.etymology || probe.etymology->trail.empty()) {
            problems.push_back("field 'trail' must be a non-empty array of precursor forms");
        }
    } catch (const std::exception& e) {
        problems.push_back(e.what());
    }
    return problems;
}

std::vector<std::string> check_encyclopedia(const json& doc) {
    std::vector<std::string> problems;
    auto body = doc.find("body");
    if (body == doc.end() || !body->is_string()) {
        problems.push_back("field 'body' must be a string");
        return problems;
    }
    std::int64_t words = count_words(body->get<std::string>());
    if (words < 200 || words > 400) {
        problems.push_back("field 'body' must run 200-400 words, got " + std::to_string(words));
    }
    return problems;
}

}  // namespace

GenerationOutcome generate_lexeme(const std::string& lemma, GenerationBackend& backend,
                                  const RetryPolicy& retry, const std::string& timestamp) {
    GenerationOutcome outcome;
    std::string normalized = normalize_lemma(lemma);

    auto account = [&](const StageOutcome& stage) {
        outcome.requests += stage.attempts;
        outcome.retries += stage.attempts - 1;
    };
    auto fail = [&](const StageOutcome& stage, AgentRole role) {
        FailureRecord record;
        record.lemma = normalized;
        record.stage = std::string(to_string(role));
        record.attempts = stage.attempts;
        record.diagnostics = stage.diagnostics;
        outcome.failure = std::move(record);
    };

    json base = {{"lemma", normalized}};
    StageOutcome overview_stage =
        run_stage(backend, AgentRole::Overview, base, retry, check_overview);
    account(overview_stage);
    if (!overview_stage.ok) {
        fail(overview_stage, AgentRole::Overview);
        return outcome;
    }
    OverviewResult overview = parse_overview(overview_stage.doc);

    LexemeEntry entry;
    entry.lemma = normalized;
    entry.is_stopword = overview.is_stopword;
    entry.stopword_reason = overview.stopword_reason;

    for (PartOfSpeech pos : overview.pos_list) {
        std::string pos_text(to_string(pos));
        int hint = 2;
        if (auto it = overview.sense_hints.find(pos_text); it != overview.sense_hints.end()) {
            hint = std::clamp(it->second, 1, 4);
        }
        json context = {{"lemma", normalized}, {"pos", pos_text}, {"sense_count_hint", hint}};
        StageOutcome stage =
            run_stage(backend, AgentRole::PosDetails, context, retry,
                      [&](const json& doc) { return check_pos_details(doc, normalized, pos_text); });
        account(stage);
        if (!stage.ok) {
            fail(stage, AgentRole::PosDetails);
            return outcome;
        }
        json wrapper = {{"lemma", normalized}};
        json pe = stage.doc;
        pe["pos"] = pos_text;
        wrapper["pos_entries"] = json::array({pe});
        entry.pos_entries.push_back(entry_from_json(wrapper).pos_entries.at(0));
    }

    if (!overview.is_stopword) {
        // Stopwords skip etymology enrichment entirely.
        StageOutcome stage =
            run_stage(backend, AgentRole::Etymology, base, retry,
                      [&](const json& doc) { return check_etymology(doc, normalized); });
        account(stage);
        if (!stage.ok) {
            fail(stage, AgentRole::Etymology);
            return outcome;
        }
        json wrapper = {{"lemma", normalized}, {"etymology", stage.doc}};
        entry.etymology = entry_from_json(wrapper).etymology;
    }

    {
        StageOutcome stage = run_stage(backend, AgentRole::Encyclopedia, base, retry,
                                       [](const json& doc) { return check_encyclopedia(doc); });
        account(stage);
        if (!stage.ok) {
            fail(stage, AgentRole::Encyclopedia);
            return outcome;
        }
        EncyclopediaEntry enc;
        enc.body = stage.doc["body"].get<std::string>();
        enc.word_count = count_words(enc.body);
        entry.encyclopedia = std::move(enc);
    }

    entry.metadata.timestamp = timestamp;
    entry.metadata.schema_version = std::string(kSchemaVersion);

    ValidationOutcome validation = validate_entry(entry, ValidationMode::GenerationStrict);
    if (!validation.ok()) {
        FailureRecord record;
        record.lemma = normalized;
        record.stage = "assembly";
        record.attempts = 1;
        for (const auto& issue : validation.issues) {
            if (issue.severity == Severity::Error) {
                record.diagnostics.push_back("field " + issue.field + ": " + issue.message);
            }
        }
        outcome.failure = std::move(record);
        return outcome;
    }
    outcome.entry = std::move(entry);
    return outcome;
}

// ---------------------------------------------------------------------------
// Snowball

void run_snowball_round(PipelineRun& run, const std::vector<FrontierItem>& frontier,
                        std::size_t cap) {
    std::unordered_set<std::string> queued(run.queue.begin(), run.queue.end());
    std::size_t added = 0;
    for (const auto& item : frontier) {
        if (added >= cap) break;
        if (queued.count(item.lemma)) continue;
        run.queue.push_back(item.lemma);
        queued.insert(item.lemma);
        ++added;
    }
    ++run.round;
}

// ---------------------------------------------------------------------------
// Rate limiting

RateLimiter::RateLimiter(int per_minute, std::function<std::int64_t()> now_ms,
                         std::function<void(std::int64_t)> sleep_ms)
    : now_ms_(std::move(now_ms)), sleep_ms_(std::move(sleep_ms)) {
    if (per_minute > 0) interval_ms_ = 60000 / per_minute;
    if (!now_ms_) {
        now_ms_ = []() {
            return std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now().time_since_epoch())
                .count();
        };
    }
    if (!sleep_ms_) {
        sleep_ms_ = [](std::int64_t ms) {
            std::this_thread::sleep_for(std::chrono::milliseconds(ms));
        };
    }
}

void RateLimiter::acquire() {
    if (interval_ms_ <= 0) return;
    std::int64_t wait = 0;
    {
        std::lock_guard lock(mutex_);
        std::int64_t now = now_ms_();
        std::int64_t slot = std::max(next_slot_ms_, now);
        next_slot_ms_ = slot + interval_ms_;
        wait = slot - now;
    }
    if (wait > 0) sleep_ms_(wait);
}

// ---------------------------------------------------------------------------
// Checkpointing

namespace {

struct CheckpointState {
    std::string timestamp;
    std::vector<std::string> queue;  // queue at last save; must be a prefix of
                                     // the resuming run's queue (snowball only
                                     // ever appends)
    int round = 0;
    std::vector<std::string> completed;
    std::vector<FailureRecord> failed;
    std::int64_t request_count = 0;
    std::int64_t retry_count = 0;
    double cost_units = 0.0;
    std::int64_t shard_bytes = 0;
};

void save_checkpoint(const fs::path& path, const CheckpointState& state) {
    json failed = json::array();
    for (const auto& f : state.failed) {
        failed.push_back({{"lemma", f.lemma},
                          {"stage", f.stage},
                          {"attempts", f.attempts},
                          {"diagnostics", f.diagnostics}});
    }
    json doc = {{"version", 1},
                {"timestamp", state.timestamp},
                {"queue", state.queue},
                {"round", state.round},
                {"completed", state.completed},
                {"failed", std::move(failed)},
                {"request_count", state.request_count},
                {"retry_count", state.retry_count},
                {"cost_units", state.cost_units},
                {"shard_bytes", state.shard_bytes}};
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write checkpoint " + tmp.string());
        out << doc.dump(2) << '\n';
        out.flush();
        if (!out) throw IoError("checkpoint write failed " + tmp.string());
    }
    fs::rename(tmp, path);  // atomic replace
}

CheckpointState load_checkpoint(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw CheckpointError("checkpoint is not valid JSON: " + path.string());
    }
    for (const char* key : {"version", "timestamp", "queue", "round", "completed", "failed",
                            "request_count", "retry_count", "shard_bytes"}) {
        if (!doc.contains(key)) {
            throw CheckpointError("checkpoint missing field '" + std::string(key) + "': " +
                                  path.string());
        }
    }
    CheckpointState state;
    try {
        state.timestamp = doc["timestamp"].get<std::string>();
        for (const auto& lemma : doc["queue"]) state.queue.push_back(lemma.get<std::string>());
        state.round = doc["round"].get<int>();
        for (const auto& lemma : doc["completed"]) {
            state.completed.push_back(lemma.get<std::string>());
        }
        for (const auto& f : doc["failed"]) {
            FailureRecord record;
            record.lemma = f.at("lemma").get<std::string>();
            record.stage = f.at("stage").get<std::string>();
            record.attempts = f.at("attempts").get<int>();
            for (const auto& d : f.at("diagnostics")) {
                record.diagnostics.push_back(d.get<std::string>());
            }
            state.failed.push_back(std::move(record));
        }
        state.request_count = doc["request_count"].get<std::int64_t>();
        state.retry_count = doc["retry_count"].get<std::int64_t>();
        state.cost_units = doc.value("cost_units", 0.0);
        state.shard_bytes = doc["shard_bytes"].get<std::int64_t>();
    } catch (const json::exception& e) {
        throw CheckpointError("checkpoint field has wrong type: " + std::string(e.what()));
    }
    return state;
}

std::string now_utc_iso() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Serializes every backend call through the rate limiter.
class PacedBackend : public GenerationBackend {
public:
    PacedBackend(GenerationBackend& base, RateLimiter& limiter) : base_(base), limiter_(limiter) {}

    std::string generate(AgentRole role, const json& context,
                         const SamplingParams& params) override {
        limiter_.acquire();
        return base_.generate(role, context, params);
    }
    int max_concurrency() const override { return base_.max_concurrency(); }

private:
    GenerationBackend& base_;
    RateLimiter& limiter_;
};

}  // namespace

PipelineRun orchestrate(PipelineRun run, GenerationBackend& backend,
                        const OrchestrateOptions& opts) {
    if (opts.output_shard.empty()) throw std::invalid_argument("output shard path required");

    std::string timestamp = opts.timestamp.empty() ? now_utc_iso() : opts.timestamp;
    CheckpointState state;
    std::unordered_set<std::string> done;
    bool resumed = false;

    if (opts.resume && !opts.checkpoint.empty() && fs::is_regular_file(opts.checkpoint)) {
        state = load_checkpoint(opts.checkpoint);
        bool prefix = state.queue.size() <= run.queue.size() &&
                      std::equal(state.queue.begin(), state.queue.end(), run.queue.begin());
        if (!prefix) {
            throw CheckpointError("checkpoint queue is not a prefix of this run's queue");
        }
        std::error_code ec;
        auto size = fs::exists(opts.output_shard, ec)
                        ? static_cast<std::int64_t>(fs::file_size(opts.output_shard, ec))
                        : 0;
        if (size < state.shard_bytes) {
            throw CheckpointError("output shard is shorter than the checkpoint recorded");
        }
        fs::resize_file(opts.output_shard, static_cast<std::uintmax_t>(state.shard_bytes), ec);
        if (ec) throw IoError("cannot truncate shard: " + ec.message());
        timestamp = state.timestamp;
        resumed = true;
    } else {
        state.timestamp = timestamp;
        state.round = run.round;
        std::ofstream create(opts.output_shard, std::ios::binary | std::ios::trunc);
        if (!create) throw IoError("cannot create shard " + opts.output_shard.string());
    }
    state.queue = run.queue;
    state.round = std::max(state.round, run.round);
    for (const auto& lemma : state.completed) done.insert(lemma);
    for (const auto& f : state.failed) done.insert(f.lemma);

    std::vector<std::string> pending;
    for (const auto& lemma : run.queue) {
        // done doubles as a duplicate guard: no lemma generates twice.
        if (done.insert(lemma).second) pending.push_back(lemma);
    }

    RateLimiter limiter(opts.rate_per_minute, opts.now_ms, opts.sleep_ms);
    PacedBackend paced(backend, limiter);

    struct Slot {
        bool ready = false;
        GenerationOutcome outcome;
    };
    std::vector<Slot> slots(pending.size());
    std::mutex mutex;
    std::condition_variable cv;
    std::size_t cursor = 0;  // next slot the writer needs
    std::atomic<bool> stop{false};
    std::atomic<std::size_t> next{0};

    int concurrency = std::max(1, opts.concurrency);
    if (int cap = backend.max_concurrency(); cap > 0) concurrency = std::min(concurrency, cap);
    std::size_t workers_n = std::min<std::size_t>(concurrency, pending.size());
    // Dispatch window keeps out-of-order completions bounded.
    const std::size_t window = static_cast<std::size_t>(concurrency) * 8 + 8;

    std::vector<std::thread> workers;
    workers.reserve(workers_n);
    for (std::size_t w = 0; w < workers_n; ++w) {
        workers.emplace_back([&]() {
            for (;;) {
                if (stop.load()) return;
                std::size_t i = next.fetch_add(1);
                if (i >= pending.size()) return;
                {
                    std::unique_lock lock(mutex);
                    cv.wait(lock, [&] { return stop.load() || i < cursor + window; });
                    if (stop.load()) return;
                }
                GenerationOutcome outcome;
                try {
                    outcome = generate_lexeme(pending[i], paced, opts.retry, timestamp);
                } catch (const std::exception& e) {
                    FailureRecord record;
                    record.lemma = pending[i];
                    record.stage = "internal";
                    record.attempts = 1;
                    record.diagnostics = {e.what()};
                    outcome.failure = std::move(record);
                }
                {
                    std::lock_guard lock(mutex);
                    slots[i].outcome = std::move(outcome);
                    slots[i].ready = true;
                }
                cv.notify_all();
            }
        });
    }

    std::ofstream shard(opts.output_shard, std::ios::binary | std::ios::app);
    if (!shard) throw IoError("cannot open shard for append " + opts.output_shard.string());

    std::int64_t since_checkpoint = 0;
    auto checkpoint_now = [&]() {
        if (opts.checkpoint.empty()) return;
        save_checkpoint(opts.checkpoint, state);
        since_checkpoint = 0;
    };

    bool interrupted = false;
    for (; cursor < pending.size(); ) {
        GenerationOutcome outcome;
        {
            std::unique_lock lock(mutex);
            cv.wait(lock, [&] { return slots[cursor].ready; });
            outcome = std::move(slots[cursor].outcome);
        }
        cv.notify_all();  // window may have moved

        state.request_count += outcome.requests;
        state.retry_count += outcome.retries;
        state.cost_units += static_cast<double>(outcome.requests) * opts.cost_per_request;
        if (outcome.entry) {
            std::string line = serialize_entry(*outcome.entry);
            shard << line << '\n';
            shard.flush();
            if (!shard) throw IoError("shard write failed");
            state.shard_bytes += static_cast<std::int64_t>(line.size()) + 1;
            state.completed.push_back(outcome.entry->lemma);
        } else if (outcome.failure) {
            state.failed.push_back(*outcome.failure);
        }
        {
            std::lock_guard lock(mutex);
            ++cursor;
        }
        cv.notify_all();
        if (++since_checkpoint >= opts.checkpoint_interval) checkpoint_now();
        if (opts.interrupt && opts.interrupt()) {
            interrupted = true;
            break;
        }
    }

    stop.store(true);
    cv.notify_all();
    for (auto& t : workers) t.join();
    checkpoint_now();
    (void)interrupted;

    run.completed = static_cast<std::int64_t>(state.completed.size());
    run.failed = state.failed;
    run.request_count = state.request_count;
    run.retry_count = state.retry_count;
    run.estimated_cost_units = state.cost_units;
    if (resumed) run.round = std::max(run.round, state.round);
    return run;
}

}  // namespace opengloss
