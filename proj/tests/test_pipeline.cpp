#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <map>
#include <thread>

#include <httplib.h>

#include "opengloss/backend.hpp"
#include "opengloss/graph.hpp"
#include "opengloss/json_io.hpp"
#include "opengloss/pipeline.hpp"
#include "opengloss/store.hpp"
#include "opengloss/validate.hpp"

#include "helpers.hpp"

using namespace opengloss;
using nlohmann::json;

TEST_CASE("seed selection: length, alphabetic filter, dedup, order") {
    auto seeds = select_seed_lexemes(
        std::vector<std::string>{"Aaron's", "Aaron", "ab", "photosynthesis"});
    CHECK(seeds == std::vector<std::string>{"Aaron", "photosynthesis"});

    auto bounds = select_seed_lexemes(std::vector<std::string>{
        "abc",                // 3: in
        "ab",                 // 2: out
        "abcdefghijklmno",    // 15: in
        "abcdefghijklmnop",   // 16: out
        "abc",                // duplicate
        " abc ",              // duplicate after normalization
        "hyphen-ated",        // non-alphabetic
        "caf\xC3\xA9"         // accented, alphabetic: in
    });
    CHECK(bounds == std::vector<std::string>{"abc", "abcdefghijklmno", "caf\xC3\xA9"});
}

TEST_CASE("sampling parameter defaults per role") {
    SamplingParams overview = default_sampling_params(AgentRole::Overview);
    CHECK(overview.temperature == doctest::Approx(0.7));
    CHECK(overview.top_p == doctest::Approx(0.95));
    CHECK(overview.max_tokens == 2048);
    CHECK(overview.frequency_penalty == doctest::Approx(0.0));

    SamplingParams enc = default_sampling_params(AgentRole::Encyclopedia);
    CHECK(enc.temperature == doctest::Approx(0.9));
    CHECK(enc.max_tokens == 4096);
    CHECK(enc.frequency_penalty == doctest::Approx(0.3));

    CHECK(default_sampling_params(AgentRole::PosDetails).temperature == doctest::Approx(0.7));
    CHECK(default_sampling_params(AgentRole::Etymology).max_tokens == 2048);

    CHECK_THROWS_AS(check_sampling_params({-0.1, 0.95, 100, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(check_sampling_params({0.7, 0.0, 100, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(check_sampling_params({0.7, 1.5, 100, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(check_sampling_params({0.7, 0.95, 0, 0.0}), std::invalid_argument);
    CHECK_NOTHROW(check_sampling_params({0.0, 1.0, 1, 0.0}));
}

TEST_CASE("mock backend is bit-reproducible per (seed, lemma, role, attempt)") {
    MockBackend a(42), b(42), c(43);
    json ctx = {{"lemma", "stone"}, {"attempt", 1}};
    auto params = default_sampling_params(AgentRole::Overview);
    CHECK(a.generate(AgentRole::Overview, ctx, params) ==
          b.generate(AgentRole::Overview, ctx, params));
    CHECK(a.generate(AgentRole::Overview, ctx, params) !=
          c.generate(AgentRole::Overview, ctx, params));
    json ctx2 = {{"lemma", "stone"}, {"attempt", 2}};
    CHECK(a.generate(AgentRole::Overview, ctx, params) !=
          a.generate(AgentRole::Overview, ctx2, params));
}

TEST_CASE("generate_lexeme produces a strict-valid entry deterministically") {
    MockBackend backend(42);
    GenerationOutcome one = generate_lexeme("dog", backend, {}, "2025-01-01T00:00:00Z");
    REQUIRE(one.entry.has_value());
    CHECK_FALSE(one.failure.has_value());
    CHECK(validate_entry(*one.entry, ValidationMode::GenerationStrict).ok());
    CHECK(one.entry->lemma == "dog");
    CHECK(one.entry->encyclopedia.has_value());
    CHECK(one.entry->encyclopedia->word_count >= 200);
    CHECK(one.entry->encyclopedia->word_count <= 400);
    CHECK(one.retries == 0);
    CHECK(one.requests >= 3);  // overview + >=1 pos + etymology + encyclopedia

    GenerationOutcome two = generate_lexeme("dog", backend, {}, "2025-01-01T00:00:00Z");
    REQUIRE(two.entry.has_value());
    CHECK(serialize_entry(*one.entry) == serialize_entry(*two.entry));
}

TEST_CASE("golden fixture: mock seed 42 'dog' matches the frozen serialization") {
    MockBackend backend(42);
    GenerationOutcome outcome = generate_lexeme("dog", backend, {}, "2025-01-01T00:00:00Z");
    REQUIRE(outcome.entry.has_value());
    std::string produced = serialize_entry(*outcome.entry);

    std::filesystem::path golden =
        std::filesystem::path(OPENGLOSS_FIXTURES_DIR) / "golden_dog_seed42.json";
    REQUIRE_MESSAGE(std::filesystem::exists(golden), "golden fixture missing: run "
                                                     "tests/fixtures to regenerate");
    std::string frozen = testutil::slurp(golden);
    while (!frozen.empty() && (frozen.back() == '\n' || frozen.back() == '\r')) frozen.pop_back();
    CHECK(produced == frozen);
}

TEST_CASE("stopwords skip the etymology stage") {
    MockBackend backend(42);
    GenerationOutcome outcome = generate_lexeme("the", backend, {}, "t");
    REQUIRE(outcome.entry.has_value());
    CHECK(outcome.entry->is_stopword);
    CHECK_FALSE(outcome.entry->etymology.has_value());
    CHECK(outcome.entry->stopword_reason.has_value());
    CHECK(validate_entry(*outcome.entry, ValidationMode::GenerationStrict).ok());
}

TEST_CASE("malformation rate 1.0 exhausts retries into a failure record") {
    MockBackend backend(42, 1.0);
    GenerationOutcome outcome = generate_lexeme("stone", backend, {3}, "t");
    REQUIRE(outcome.failure.has_value());
    CHECK_FALSE(outcome.entry.has_value());
    CHECK(outcome.failure->attempts == 3);
    CHECK(outcome.failure->stage == "overview");
    CHECK(outcome.failure->diagnostics.size() >= 3);
    CHECK(outcome.requests == 3);
    CHECK(outcome.retries == 2);
}

namespace {

// Records every context the backend sees, for the escalation property.
class RecordingBackend : public GenerationBackend {
public:
    RecordingBackend(GenerationBackend& base) : base_(base) {}
    std::string generate(AgentRole role, const json& context,
                         const SamplingParams& params) override {
        contexts.push_back(context);
        return base_.generate(role, context, params);
    }
    std::vector<json> contexts;

private:
    GenerationBackend& base_;
};

}  // namespace

TEST_CASE("retry escalation: attempt n+1 context contains attempt n diagnostics") {
    MockBackend mock(9, 0.9);
    RecordingBackend recorder(mock);
    for (const char* lemma : {"stone", "river", "light", "cloud", "forest"}) {
        (void)generate_lexeme(lemma, recorder, {3}, "t");
    }
    // Group contexts by (lemma, role, pos) and check requirement growth.
    std::map<std::string, std::vector<json>> by_stage;
    for (const auto& ctx : recorder.contexts) {
        std::string key = ctx.value("lemma", "") + "|" + ctx.value("pos", "");
        by_stage[key].push_back(ctx);
    }
    bool saw_retry = false;
    for (const auto& ctx : recorder.contexts) {
        int attempt = ctx.value("attempt", 1);
        if (attempt == 1) {
            CHECK(ctx["requirements"].empty());
            continue;
        }
        saw_retry = true;
        CHECK_FALSE(ctx["requirements"].empty());
    }
    CHECK(saw_retry);
    // Requirements accumulate monotonically within a stage's attempts.
    for (const auto& [key, contexts] : by_stage) {
        for (std::size_t i = 1; i < contexts.size(); ++i) {
            if (contexts[i].value("attempt", 1) <= contexts[i - 1].value("attempt", 1)) continue;
            const auto& prev = contexts[i - 1]["requirements"];
            const auto& next = contexts[i]["requirements"];
            REQUIRE(next.size() > prev.size());
            for (std::size_t k = 0; k < prev.size(); ++k) CHECK(next[k] == prev[k]);
        }
    }
}

TEST_CASE("moderate malformation still converges to strict-valid entries") {
    MockBackend backend(42, 0.05);
    int successes = 0;
    std::int64_t requests = 0, retries = 0;
    testutil::Rng rng{5};
    for (int i = 0; i < 60; ++i) {
        std::string lemma = testutil::random_word(rng) + std::to_string(i);
        GenerationOutcome outcome = generate_lexeme(lemma, backend, {3}, "t");
        if (outcome.entry) {
            ++successes;
            CHECK(validate_entry(*outcome.entry, ValidationMode::GenerationStrict).ok());
        }
        requests += outcome.requests;
        retries += outcome.retries;
    }
    CHECK(successes == 60);
    double fraction = static_cast<double>(retries) / static_cast<double>(requests);
    CHECK(fraction > 0.0);
    CHECK(fraction < 0.15);
}

TEST_CASE("snowball round appends capped novel frontier lemmas") {
    PipelineRun run;
    run.queue = {"dog", "cat"};
    run_snowball_round(run, {{"canine", 2}, {"dog", 9}, {"feline", 1}}, 10);
    CHECK(run.queue == std::vector<std::string>{"dog", "cat", "canine", "feline"});
    CHECK(run.round == 1);

    PipelineRun capped;
    capped.queue = {"x"};
    run_snowball_round(capped, {{"a", 3}, {"b", 2}, {"c", 1}}, 2);
    CHECK(capped.queue == std::vector<std::string>{"x", "a", "b"});

    PipelineRun unchanged;
    unchanged.queue = {"a", "b"};
    run_snowball_round(unchanged, {{"a", 1}, {"b", 1}}, 5);
    CHECK(unchanged.queue == std::vector<std::string>{"a", "b"});
    CHECK(unchanged.round == 1);
}

TEST_CASE("rate limiter paces grants evenly (fake clock arithmetic)") {
    std::int64_t virtual_now = 0;
    RateLimiter limiter(
        60, [&]() { return virtual_now; }, [&](std::int64_t ms) { virtual_now += ms; });
    for (int i = 0; i < 120; ++i) limiter.acquire();
    // 120 requests at 60/min: one second apart, so just under two minutes.
    CHECK(virtual_now >= 119000);
    CHECK(virtual_now < 125000);
}

TEST_CASE("rate limiter is a no-op when unlimited") {
    std::int64_t virtual_now = 0;
    RateLimiter limiter(
        0, [&]() { return virtual_now; }, [&](std::int64_t ms) { virtual_now += ms; });
    for (int i = 0; i < 1000; ++i) limiter.acquire();
    CHECK(virtual_now == 0);
}

namespace {

class ConcurrencyProbe : public GenerationBackend {
public:
    explicit ConcurrencyProbe(GenerationBackend& base) : base_(base) {}
    std::string generate(AgentRole role, const json& context,
                         const SamplingParams& params) override {
        int now = ++in_flight_;
        int seen = max_seen_.load();
        while (now > seen && !max_seen_.compare_exchange_weak(seen, now)) {
        }
        std::string out = base_.generate(role, context, params);
        --in_flight_;
        ++calls_;
        return out;
    }
    int max_seen() const { return max_seen_.load(); }
    std::int64_t calls() const { return calls_.load(); }

private:
    GenerationBackend& base_;
    std::atomic<int> in_flight_{0};
    std::atomic<int> max_seen_{0};
    std::atomic<std::int64_t> calls_{0};
};

std::vector<std::string> pool_lemmas(int n) {
    testutil::Rng rng{77};
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back(testutil::random_word(rng) + std::to_string(i));
    return out;
}

}  // namespace

TEST_CASE("orchestrate: queue-order output, bounded in-flight, request accounting") {
    testutil::TempDir dir("orch");
    MockBackend mock(21);
    ConcurrencyProbe probe(mock);

    PipelineRun run;
    run.queue = pool_lemmas(100);
    OrchestrateOptions opts;
    opts.concurrency = 8;
    opts.output_shard = dir.file("out.jsonl");
    opts.checkpoint = dir.file("ckpt.json");
    opts.timestamp = "2025-03-03T00:00:00Z";
    PipelineRun done = orchestrate(run, probe, opts);

    CHECK(done.completed == 100);
    CHECK(done.failed.empty());
    CHECK(done.pending() == 0);
    CHECK(probe.max_seen() <= 8);
    CHECK(probe.max_seen() >= 2);  // concurrency actually used
    CHECK(done.request_count == probe.calls());
    CHECK(done.estimated_cost_units == doctest::Approx(static_cast<double>(probe.calls())));

    // Output is one strict-valid entry per queue item, in queue order.
    std::vector<std::string> lemmas;
    for_each_entry({dir.file("out.jsonl")},
                   [&](const LexemeEntry& e) { lemmas.push_back(e.lemma); });
    CHECK(lemmas == run.queue);
}

TEST_CASE("orchestrate is deterministic across concurrency levels") {
    testutil::TempDir dir("det");
    auto run_with = [&](int concurrency, const std::string& name) {
        MockBackend mock(11);
        PipelineRun run;
        run.queue = pool_lemmas(40);
        OrchestrateOptions opts;
        opts.concurrency = concurrency;
        opts.output_shard = dir.file(name);
        opts.timestamp = "2025-03-03T00:00:00Z";
        orchestrate(run, mock, opts);
        return testutil::slurp(dir.file(name));
    };
    CHECK(run_with(1, "a.jsonl") == run_with(8, "b.jsonl"));
}

TEST_CASE("interrupted run resumes to a byte-identical shard") {
    testutil::TempDir dir("resume");
    const std::string timestamp = "2025-04-04T00:00:00Z";
    auto lemmas = pool_lemmas(30);

    // Uninterrupted reference run.
    {
        MockBackend mock(5, 0.02);
        PipelineRun run;
        run.queue = lemmas;
        OrchestrateOptions opts;
        opts.concurrency = 4;
        opts.output_shard = dir.file("full.jsonl");
        opts.timestamp = timestamp;
        orchestrate(run, mock, opts);
    }

    // Interrupted after 7 writes, then resumed.
    OrchestrateOptions opts;
    opts.concurrency = 4;
    opts.output_shard = dir.file("partial.jsonl");
    opts.checkpoint = dir.file("partial.ckpt.json");
    opts.timestamp = timestamp;
    {
        MockBackend mock(5, 0.02);
        PipelineRun run;
        run.queue = lemmas;
        int writes = 0;
        opts.interrupt = [&]() { return ++writes >= 7; };
        PipelineRun stopped = orchestrate(run, mock, opts);
        CHECK(stopped.completed < 30);
    }
    {
        MockBackend mock(5, 0.02);
        PipelineRun run;
        run.queue = lemmas;
        opts.interrupt = {};
        PipelineRun resumed = orchestrate(run, mock, opts);
        CHECK(resumed.completed + static_cast<std::int64_t>(resumed.failed.size()) == 30);
    }
    CHECK(testutil::slurp(dir.file("partial.jsonl")) == testutil::slurp(dir.file("full.jsonl")));
}

TEST_CASE("corrupt checkpoints refuse to resume") {
    testutil::TempDir dir("corrupt");
    auto lemmas = pool_lemmas(5);
    OrchestrateOptions opts;
    opts.output_shard = dir.file("out.jsonl");
    opts.checkpoint = dir.file("ckpt.json");
    opts.timestamp = "t";

    SUBCASE("garbage file") {
        testutil::write_lines(opts.checkpoint, {"not a checkpoint"});
        MockBackend mock(1);
        PipelineRun run;
        run.queue = lemmas;
        CHECK_THROWS_AS(orchestrate(run, mock, opts), CheckpointError);
    }
    SUBCASE("queue mismatch") {
        MockBackend mock(1);
        PipelineRun run;
        run.queue = lemmas;
        orchestrate(run, mock, opts);
        PipelineRun other;
        other.queue = {"entirely", "different"};
        CHECK_THROWS_AS(orchestrate(other, mock, opts), CheckpointError);
    }
    SUBCASE("shard shorter than recorded") {
        MockBackend mock(1);
        PipelineRun run;
        run.queue = lemmas;
        orchestrate(run, mock, opts);
        std::filesystem::resize_file(opts.output_shard, 3);
        PipelineRun again;
        again.queue = lemmas;
        CHECK_THROWS_AS(orchestrate(again, mock, opts), CheckpointError);
    }
}

TEST_CASE("snowball closure equals brute-force reachability over mock relations") {
    testutil::TempDir dir("closure");
    const std::uint64_t seed = 31;
    const std::string timestamp = "2025-05-05T00:00:00Z";
    std::vector<std::string> seeds = {"stone", "river",  "light",  "cloud",  "forest",
                                      "meadow", "copper", "silver", "branch", "petal"};

    // Pipeline path: orchestrate + shard-derived frontier, three rounds.
    MockBackend backend(seed);
    PipelineRun run;
    run.queue = seeds;
    OrchestrateOptions opts;
    opts.concurrency = 4;
    opts.output_shard = dir.file("shard.jsonl");
    opts.checkpoint = dir.file("ckpt.json");
    opts.timestamp = timestamp;
    run = orchestrate(run, backend, opts);
    for (int round = 0; round < 3; ++round) {
        GraphBuildResult built = build_graph({opts.output_shard});
        run_snowball_round(run, built.frontier, 1000000);
        run = orchestrate(run, backend, opts);
    }

    // Oracle: regenerate each queued lemma directly and accumulate frontier
    // targets by brute force.
    std::vector<std::string> expected = seeds;
    {
        MockBackend oracle_backend(seed);
        std::map<std::string, LexemeEntry> cache;
        auto entry_of = [&](const std::string& lemma) {
            auto it = cache.find(lemma);
            if (it != cache.end()) return it->second;
            GenerationOutcome outcome = generate_lexeme(lemma, oracle_backend, {}, timestamp);
            REQUIRE(outcome.entry.has_value());
            cache[lemma] = *outcome.entry;
            return cache[lemma];
        };
        for (int round = 0; round < 3; ++round) {
            std::set<std::string> vocabulary(expected.begin(), expected.end());
            std::map<std::string, std::int64_t> counts;
            for (const auto& lemma : expected) {
                for (const auto& edge : extract_all_edges(entry_of(lemma))) {
                    switch (edge.relation) {
                        case EdgeType::Synonym:
                        case EdgeType::Antonym:
                        case EdgeType::Hypernym:
                        case EdgeType::Hyponym:
                        case EdgeType::NounDerivation:
                        case EdgeType::VerbDerivation:
                        case EdgeType::AdjectiveDerivation:
                        case EdgeType::AdverbDerivation:
                            if (!vocabulary.count(edge.target)) ++counts[edge.target];
                            break;
                        default:
                            break;
                    }
                }
            }
            std::vector<FrontierItem> frontier;
            for (const auto& [lemma, count] : counts) frontier.push_back({lemma, count});
            std::sort(frontier.begin(), frontier.end(),
                      [](const FrontierItem& a, const FrontierItem& b) {
                          if (a.reference_count != b.reference_count) {
                              return a.reference_count > b.reference_count;
                          }
                          return a.lemma < b.lemma;
                      });
            for (const auto& item : frontier) expected.push_back(item.lemma);
        }
    }
    CHECK(run.queue == expected);
    CHECK(run.completed == static_cast<std::int64_t>(expected.size()));
}

TEST_CASE("http backend round trip against a local server") {
    MockBackend mock(3);
    httplib::Server server;
    std::atomic<int> failures_to_serve{0};
    std::string seen_auth;
    server.Post("/v1/generate", [&](const httplib::Request& req, httplib::Response& res) {
        if (failures_to_serve.fetch_sub(1) > 0) {
            res.status = 503;
            return;
        }
        if (req.has_header("Authorization")) seen_auth = req.get_header_value("Authorization");
        json body = json::parse(req.body);
        AgentRole role = *parse_agent_role(body.at("role").get<std::string>());
        SamplingParams params;
        params.temperature = body["params"]["temperature"].get<double>();
        params.top_p = body["params"]["top_p"].get<double>();
        params.max_tokens = body["params"]["max_tokens"].get<int>();
        params.frequency_penalty = body["params"]["frequency_penalty"].get<double>();
        std::string output = mock.generate(role, body.at("context"), params);
        // Alternate string and object forms of the response envelope.
        json envelope;
        if (role == AgentRole::Overview) {
            envelope = {{"output", output}};
        } else {
            envelope = {{"output", json::parse(output, nullptr, false).is_discarded()
                                       ? json(output)
                                       : json::parse(output)}};
        }
        res.set_content(envelope.dump(), "application/json");
    });
    failures_to_serve = 0;

    int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread server_thread([&]() { server.listen_after_bind(); });
    server.wait_until_ready();

    setenv("OPENGLOSS_API_KEY", "sekret-token", 1);
    HttpBackendConfig config;
    config.host = "http://127.0.0.1:" + std::to_string(port);
    config.max_5xx_retries = 2;
    HttpBackend http(config);

    // Same outputs as the local mock, end to end.
    GenerationOutcome via_http = generate_lexeme("stone", http, {}, "t");
    MockBackend local(3);
    GenerationOutcome direct = generate_lexeme("stone", local, {}, "t");
    REQUIRE(via_http.entry.has_value());
    REQUIRE(direct.entry.has_value());
    CHECK(serialize_entry(*via_http.entry) == serialize_entry(*direct.entry));
    CHECK(seen_auth == "Bearer sekret-token");

    // Transient 5xx responses are retried.
    failures_to_serve = 2;
    json ctx = {{"lemma", "river"}, {"attempt", 1}};
    CHECK_NOTHROW(http.generate(AgentRole::Overview, ctx, default_sampling_params(AgentRole::Overview)));

    // Persistent 5xx exhausts retries.
    failures_to_serve = 10;
    CHECK_THROWS_AS(http.generate(AgentRole::Overview, ctx,
                                  default_sampling_params(AgentRole::Overview)),
                    TransportError);
    failures_to_serve = 0;

    // Wrong path is a transport error, not a retry loop.
    HttpBackendConfig bad = config;
    bad.path = "/nowhere";
    HttpBackend nowhere(bad);
    CHECK_THROWS_AS(nowhere.generate(AgentRole::Overview, ctx,
                                     default_sampling_params(AgentRole::Overview)),
                    TransportError);

    unsetenv("OPENGLOSS_API_KEY");
    server.stop();
    server_thread.join();
}

TEST_CASE("replay backend serves fixtures and reports missing ones") {
    testutil::TempDir dir("replay");
    std::filesystem::create_directories(dir.path() / "dog");
    testutil::write_lines(dir.path() / "dog" / "overview.json",
                          {R"({"pos":["noun"],"is_stopword":false,"sense_counts":{"noun":1}})"});
    ReplayBackend replay(dir.path());
    json ctx = {{"lemma", "dog"}, {"attempt", 1}};
    std::string out =
        replay.generate(AgentRole::Overview, ctx, default_sampling_params(AgentRole::Overview));
    CHECK(json::parse(out)["pos"][0] == "noun");
    json ctx2 = {{"lemma", "cat"}, {"attempt", 1}};
    CHECK_THROWS_AS(
        replay.generate(AgentRole::Overview, ctx2, default_sampling_params(AgentRole::Overview)),
        TransportError);
}
