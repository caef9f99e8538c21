#include "opengloss/backend.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>
#include <vector>

#include <httplib.h>

#include "opengloss/json_io.hpp"
#include "opengloss/normalize.hpp"

namespace opengloss {

using nlohmann::json;

std::string_view to_string(AgentRole role) {
    switch (role) {
        case AgentRole::Overview: return "overview";
        case AgentRole::PosDetails: return "pos-details";
        case AgentRole::Etymology: return "etymology";
        case AgentRole::Encyclopedia: return "encyclopedia";
        case AgentRole::QaJudge: return "qa-judge";
    }
    return "overview";
}

std::optional<AgentRole> parse_agent_role(std::string_view text) {
    for (AgentRole role : {AgentRole::Overview, AgentRole::PosDetails, AgentRole::Etymology,
                           AgentRole::Encyclopedia, AgentRole::QaJudge}) {
        if (text == to_string(role)) return role;
    }
    return std::nullopt;
}

SamplingParams default_sampling_params(AgentRole role) {
    SamplingParams params;
    switch (role) {
        case AgentRole::Encyclopedia:
            params.temperature = 0.9;
            params.max_tokens = 4096;
            params.frequency_penalty = 0.3;
            break;
        case AgentRole::Overview:
        case AgentRole::PosDetails:
        case AgentRole::Etymology:
        case AgentRole::QaJudge:
            params.temperature = 0.7;
            params.max_tokens = 2048;
            break;
    }
    return params;
}

void check_sampling_params(const SamplingParams& params) {
    if (params.temperature < 0) throw std::invalid_argument("temperature must be >= 0");
    if (!(params.top_p > 0.0 && params.top_p <= 1.0)) {
        throw std::invalid_argument("top_p must be in (0, 1]");
    }
    if (params.max_tokens <= 0) throw std::invalid_argument("max_tokens must be > 0");
}

json sampling_params_json(const SamplingParams& params) {
    return {{"temperature", params.temperature},
            {"top_p", params.top_p},
            {"max_tokens", params.max_tokens},
            {"frequency_penalty", params.frequency_penalty}};
}

// ---------------------------------------------------------------------------
// MockBackend

namespace {

struct Rng {
    std::uint64_t state;

    std::uint64_t next() {  // splitmix64
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
    int range(int lo, int hi) { return lo + static_cast<int>(below(hi - lo + 1)); }
    double unit() { return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0); }
};

const std::vector<std::string>& noun_pool() {
    static const std::vector<std::string> pool = {
        "system",   "process",  "structure", "pattern",  "concept",  "method",  "object",
        "material", "surface",  "region",    "network",  "signal",   "circle",  "machine",
        "garden",   "village",  "mountain",  "river",    "animal",   "plant",   "mineral",
        "language", "student",  "teacher",   "library",  "question", "answer",  "journey",
        "market",   "bridge",   "window",    "mixture",  "measure",  "motion",  "balance",
        "feature",  "boundary", "category",  "instance", "sequence", "element", "habitat",
        "climate",  "energy",   "particle",  "organism", "texture",  "melody"};
    return pool;
}

const std::vector<std::string>& verb_pool() {
    static const std::vector<std::string> pool = {
        "move",    "build",  "carry",   "change", "collect", "compare", "connect", "contain",
        "create",  "define", "develop", "divide", "explain", "explore", "measure", "observe",
        "operate", "order",  "prepare", "reduce", "repeat",  "select",  "support", "transform"};
    return pool;
}

const std::vector<std::string>& adjective_pool() {
    static const std::vector<std::string> pool = {
        "broad",   "careful", "common",  "complex", "distinct", "early",  "formal",  "general",
        "gentle",  "gradual", "heavy",   "hollow",  "modern",   "narrow", "natural", "precise",
        "regular", "simple",  "smooth",  "steady",  "strong",   "subtle", "uniform", "visible"};
    return pool;
}

const std::vector<std::string>& adverb_pool() {
    static const std::vector<std::string> pool = {"quickly", "slowly",    "carefully", "often",
                                                  "rarely",  "gradually", "directly",  "evenly",
                                                  "broadly", "precisely", "steadily",  "together"};
    return pool;
}

const std::vector<std::string>& language_pool() {
    static const std::vector<std::string> pool = {"Latin",     "Greek",       "Old English",
                                                  "Old French", "Old Norse",  "Proto-Germanic",
                                                  "Sanskrit",  "Middle English"};
    return pool;
}

const std::vector<std::string>& pool_for(PartOfSpeech pos) {
    switch (pos) {
        case PartOfSpeech::Verb: return verb_pool();
        case PartOfSpeech::Adjective: return adjective_pool();
        case PartOfSpeech::Adverb: return adverb_pool();
        default: return noun_pool();
    }
}

// k distinct pool words, none equal to the excluded lemma.
std::vector<std::string> sample_words(Rng& rng, const std::vector<std::string>& pool, int k,
                                      const std::string& exclude) {
    std::vector<std::uint32_t> idx(pool.size());
    for (std::uint32_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::vector<std::string> out;
    for (std::size_t i = 0; i < idx.size() && static_cast<int>(out.size()) < k; ++i) {
        std::size_t j = i + rng.below(idx.size() - i);
        std::swap(idx[i], idx[j]);
        if (pool[idx[i]] != exclude) out.push_back(pool[idx[i]]);
    }
    return out;
}

std::string mutate_form(Rng& rng, const std::string& lemma) {
    static const char* suffixes[] = {"us", "os", "a", "um", "is", "on"};
    std::string base = lemma;
    if (base.size() > 3 && rng.below(2) == 0) base.resize(base.size() - 1);
    return base + suffixes[rng.below(6)];
}

json mock_overview(Rng& rng, const std::string& lemma) {
    static const std::vector<std::string> stopwords = {"the", "a",  "an", "of", "and", "or", "to",
                                                       "in",  "on", "at", "is", "it",  "as", "by"};
    json doc = json::object();
    bool stop = std::find(stopwords.begin(), stopwords.end(), lemma) != stopwords.end();
    doc["is_stopword"] = stop;
    if (stop) {
        static const char* function_pos[] = {"determiner", "conjunction", "preposition", "pronoun"};
        doc["stopword_reason"] = "function word with purely grammatical role";
        doc["pos"] = json::array({function_pos[rng.below(4)]});
        doc["sense_counts"] = {{doc["pos"][0].get<std::string>(), 1}};
        return doc;
    }
    doc["stopword_reason"] = nullptr;
    std::vector<std::string> pos_list;
    std::uint64_t r = rng.below(100);
    std::string primary = r < 52 ? "noun" : r < 79 ? "adjective" : r < 96 ? "verb" : "adverb";
    pos_list.push_back(primary);
    if (rng.below(100) < 35) {
        std::string secondary = primary == "noun" ? "verb" : "noun";
        pos_list.push_back(secondary);
    }
    json counts = json::object();
    for (const auto& pos : pos_list) {
        std::uint64_t c = rng.below(100);
        counts[pos] = c < 20 ? 1 : c < 55 ? 2 : c < 85 ? 3 : 4;
    }
    doc["pos"] = pos_list;
    doc["sense_counts"] = std::move(counts);
    return doc;
}

json mock_sense(Rng& rng, const std::string& lemma, PartOfSpeech pos) {
    const auto& pool = pool_for(pos);
    json sense = json::object();
    std::string def = "A " + adjective_pool()[rng.below(adjective_pool().size())] + " " +
                      noun_pool()[rng.below(noun_pool().size())] + " that " +
                      verb_pool()[rng.below(verb_pool().size())] + "s " +
                      noun_pool()[rng.below(noun_pool().size())] + " in " +
                      noun_pool()[rng.below(noun_pool().size())] + " contexts.";
    sense["definition"] = def;
    sense["synonyms"] = sample_words(rng, pool, rng.range(3, 5), lemma);
    if (rng.below(100) < 70) {
        sense["antonyms"] = sample_words(rng, adjective_pool(), rng.range(1, 3), lemma);
    }
    sense["hypernyms"] = sample_words(rng, noun_pool(), rng.range(2, 4), lemma);
    sense["hyponyms"] = sample_words(rng, noun_pool(), rng.range(2, 4), lemma);
    json examples = json::array();
    int example_count = rng.range(1, 3);
    for (int i = 0; i < example_count; ++i) {
        examples.push_back("The " + lemma + " " +
                           verb_pool()[rng.below(verb_pool().size())] + "s " +
                           adverb_pool()[rng.below(adverb_pool().size())] + " near the " +
                           noun_pool()[rng.below(noun_pool().size())] + ".");
    }
    sense["examples"] = std::move(examples);
    return sense;
}

json mock_pos_details(Rng& rng, const std::string& lemma, const std::string& pos_text,
                      int sense_hint) {
    PartOfSpeech pos = parse_part_of_speech(pos_text).value_or(PartOfSpeech::Noun);
    json doc = json::object();
    int sense_count = std::clamp(sense_hint, 1, 4);
    json senses = json::array();
    for (int i = 0; i < sense_count; ++i) senses.push_back(mock_sense(rng, lemma, pos));
    doc["senses"] = std::move(senses);

    json morphology = json::object();
    json inflections = json::array();
    switch (pos) {
        case PartOfSpeech::Noun:
            inflections.push_back({{"form", lemma + "s"}, {"feature", "plural"}});
            break;
        case PartOfSpeech::Verb:
            inflections.push_back({{"form", lemma + "ed"}, {"feature", "past"}});
            inflections.push_back({{"form", lemma + "ing"}, {"feature", "present participle"}});
            break;
        case PartOfSpeech::Adjective:
            inflections.push_back({{"form", lemma + "er"}, {"feature", "comparative"}});
            inflections.push_back({{"form", lemma + "est"}, {"feature", "superlative"}});
            break;
        default:
            break;
    }
    if (!inflections.empty()) morphology["inflections"] = std::move(inflections);
    int derivation_count = static_cast<int>(rng.below(3));
    if (derivation_count > 0) {
        static const std::pair<const char*, const char*> table[] = {
            {"ness", "noun"}, {"ize", "verb"}, {"ful", "adjective"}, {"ly", "adverb"}};
        json derivations = json::array();
        for (int i = 0; i < derivation_count; ++i) {
            const auto& [suffix, dpos] = table[rng.below(4)];
            derivations.push_back({{"form", lemma + suffix}, {"pos", dpos}});
        }
        morphology["derivations"] = std::move(derivations);
    }
    if (!morphology.empty()) doc["morphology"] = std::move(morphology);

    json collocations = json::array();
    int collocation_count = rng.range(3, 6);
    for (int i = 0; i < collocation_count; ++i) {
        switch (rng.below(3)) {
            case 0:
                collocations.push_back(lemma + " " + noun_pool()[rng.below(noun_pool().size())]);
                break;
            case 1:
                collocations.push_back(verb_pool()[rng.below(verb_pool().size())] + " the " + lemma);
                break;
            default:
                collocations.push_back(adjective_pool()[rng.below(adjective_pool().size())] + " " +
                                       lemma);
                break;
        }
    }
    doc["collocations"] = std::move(collocations);
    return doc;
}

json mock_etymology(Rng& rng, const std::string& lemma) {
    json doc = json::object();
    json trail = json::array();
    int steps = rng.range(1, 3);
    for (int i = 0; i < steps; ++i) {
        json step = {{"language", language_pool()[rng.below(language_pool().size())]},
                     {"form", mutate_form(rng, lemma)}};
        if (rng.below(2) == 0) {
            step["gloss"] = noun_pool()[rng.below(noun_pool().size())];
        }
        trail.push_back(std::move(step));
    }
    doc["trail"] = std::move(trail);
    if (rng.below(100) < 40) {
        json cognates = json::array();
        int n = rng.range(1, 2);
        for (int i = 0; i < n; ++i) {
            cognates.push_back({{"language", language_pool()[rng.below(language_pool().size())]},
                                {"form", mutate_form(rng, lemma)}});
        }
        doc["cognates"] = std::move(cognates);
    }
    auto space = lemma.find(' ');
    if (space != std::string::npos) {
        doc["components"] = json::array({lemma.substr(0, space), lemma.substr(space + 1)});
    } else if (lemma.size() >= 6 && rng.below(100) < 25) {
        std::size_t half = lemma.size() / 2;
        doc["components"] = json::array({lemma.substr(0, half) + "-", lemma.substr(half)});
    }
    if (rng.below(100) < 30) {
        doc["notes"] = "Attested in scholarly sources since the early modern period.";
    }
    return doc;
}

json mock_encyclopedia(Rng& rng, const std::string& lemma) {
    // Whitespace token count lands exactly on the 200-400 target. A
    // multi-word lemma contributes one token per word.
    int target_words = 200 + static_cast<int>(rng.below(201));
    std::string body = "The " + lemma;
    int words = 1 + static_cast<int>(count_words(lemma));
    int sentence_length = words;
    while (words < target_words) {
        const std::vector<std::string>* pool = nullptr;
        switch (rng.below(4)) {
            case 0: pool = &noun_pool(); break;
            case 1: pool = &verb_pool(); break;
            case 2: pool = &adjective_pool(); break;
            default: pool = &adverb_pool(); break;
        }
        std::string w = (*pool)[rng.below(pool->size())];
        ++words;
        ++sentence_length;
        bool end_sentence =
            sentence_length >= 9 + static_cast<int>(rng.below(6)) || words == target_words;
        body += " " + w;
        if (end_sentence) {
            body += ".";
            sentence_length = 0;
        }
    }
    return json{{"body", body}};
}

json mock_qa_judgment(Rng& rng, const std::string& lemma) {
    static const char* dimensions[] = {"headword-structure", "definition", "encyclopedia",
                                       "etymology",          "examples",   "hypernym",
                                       "hyponym",            "synonym",    "antonym"};
    json doc = json::object();
    json issues = json::array();
    std::uint64_t r = rng.below(100);
    int issue_count = r < 72 ? 0 : r < 92 ? 1 : 2;
    bool major = rng.below(100) < 30;
    for (int i = 0; i < issue_count; ++i) {
        issues.push_back({{"dimension", dimensions[rng.below(9)]},
                          {"severity", (major && i == 0) ? "major" : "minor"},
                          {"note", "automated audit note for '" + lemma + "'"}});
    }
    doc["issues"] = std::move(issues);
    doc["summary"] = issues.empty() ? "entry meets all checked criteria"
                                    : "entry has findings requiring review";
    return doc;
}

}  // namespace

MockBackend::MockBackend(std::uint64_t seed, double malformation_rate)
    : seed_(seed), malformation_rate_(malformation_rate) {}

std::string MockBackend::generate(AgentRole role, const json& context,
                                  const SamplingParams& params) {
    check_sampling_params(params);
    std::string lemma = context.value("lemma", "");
    int attempt = context.value("attempt", 1);
    std::string pos = context.value("pos", "");

    // Output is a pure function of (seed, lemma, role, pos, attempt).
    std::string descriptor = std::to_string(seed_) + "|" + lemma + "|" +
                             std::string(to_string(role)) + "|" + pos + "|" +
                             std::to_string(attempt);
    Rng rng{0x243f6a8885a308d3ULL};
    for (unsigned char c : descriptor) {
        rng.state ^= c;
        rng.state *= 1099511628211ULL;
    }
    rng.next();

    bool malformed = rng.unit() < malformation_rate_;
    bool truncate = malformed && rng.below(2) == 0;

    json doc;
    switch (role) {
        case AgentRole::Overview:
            doc = mock_overview(rng, lemma);
            if (malformed && !truncate) doc["pos"] = json::array();  // empty POS list
            break;
        case AgentRole::PosDetails: {
            int hint = context.value("sense_count_hint", 2);
            doc = mock_pos_details(rng, lemma, pos, hint);
            if (malformed && !truncate) {
                // Deliberate arity breach: five senses under one POS.
                json extra = doc["senses"];
                while (extra.size() < 5) extra.push_back(extra[0]);
                doc["senses"] = extra;
            }
            break;
        }
        case AgentRole::Etymology:
            doc = mock_etymology(rng, lemma);
            if (malformed && !truncate) doc["trail"] = "unknown";  // wrong type
            break;
        case AgentRole::Encyclopedia:
            doc = mock_encyclopedia(rng, lemma);
            if (malformed && !truncate) doc["body"] = "";
            break;
        case AgentRole::QaJudge:
            doc = mock_qa_judgment(rng, lemma);
            if (malformed && !truncate) doc["issues"] = "none";  // wrong type
            break;
    }

    std::string text = doc.dump();
    if (truncate) {
        std::size_t keep = text.size() / 2 + rng.below(text.size() / 4 + 1);
        text.resize(std::min(keep, text.size() - 1));
    }
    return text;
}

// ---------------------------------------------------------------------------
// ReplayBackend

ReplayBackend::ReplayBackend(std::filesystem::path root) : root_(std::move(root)) {}

std::string ReplayBackend::generate(AgentRole role, const json& context, const SamplingParams&) {
    std::string lemma = context.value("lemma", "");
    std::filesystem::path dir = root_ / lemma;
    std::vector<std::filesystem::path> candidates;
    if (role == AgentRole::PosDetails) {
        std::string pos = context.value("pos", "");
        if (!pos.empty()) candidates.push_back(dir / ("pos_details." + pos + ".json"));
        candidates.push_back(dir / "pos_details.json");
    } else if (role == AgentRole::QaJudge) {
        candidates.push_back(dir / "qa_judge.json");
    } else {
        candidates.push_back(dir / (std::string(to_string(role)) + ".json"));
    }
    for (const auto& path : candidates) {
        std::ifstream in(path, std::ios::binary);
        if (!in) continue;
        std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return content;
    }
    throw TransportError("no replay fixture for '" + lemma + "' role " +
                         std::string(to_string(role)) + " under " + root_.string());
}

// ---------------------------------------------------------------------------
// HttpBackend

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {}
HttpBackend::~HttpBackend() = default;

std::string HttpBackend::generate(AgentRole role, const json& context,
                                  const SamplingParams& params) {
    check_sampling_params(params);
    json body = {{"role", std::string(to_string(role))},
                 {"context", context},
                 {"params", sampling_params_json(params)}};
    std::string payload = body.dump();

    httplib::Client client(config_.host);
    client.set_connection_timeout(config_.timeout_seconds, 0);
    client.set_read_timeout(config_.timeout_seconds, 0);
    httplib::Headers headers;
    if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key) {
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    for (int attempt = 0;; ++attempt) {
        auto res = client.Post(config_.path, headers, payload, "application/json");
        if (!res) {
            throw TransportError("connection to " + config_.host + " failed: " +
                                 httplib::to_string(res.error()));
        }
        if (res->status >= 500) {
            if (attempt < config_.max_5xx_retries) {
                std::this_thread::sleep_for(std::chrono::milliseconds(100 * (attempt + 1)));
                continue;
            }
            throw TransportError("server error " + std::to_string(res->status) + " from " +
                                 config_.host);
        }
        if (res->status != 200) {
            throw TransportError("unexpected status " + std::to_string(res->status) + " from " +
                                 config_.host);
        }
        json doc = json::parse(res->body, nullptr, false);
        if (doc.is_discarded() || !doc.is_object() || !doc.contains("output")) {
            throw TransportError("malformed response body from " + config_.host);
        }
        const json& output = doc["output"];
        return output.is_string() ? output.get<std::string>() : output.dump();
    }
}

// ---------------------------------------------------------------------------

std::unique_ptr<GenerationBackend> make_backend(const std::string& selector, std::uint64_t seed,
                                                double malformation_rate,
                                                const std::filesystem::path& replay_dir,
                                                const std::string& http_host) {
    if (selector == "mock") {
        return std::make_unique<MockBackend>(seed, malformation_rate);
    }
    if (selector == "replay") {
        if (replay_dir.empty()) throw std::invalid_argument("replay backend needs a fixture dir");
        return std::make_unique<ReplayBackend>(replay_dir);
    }
    if (selector == "http") {
        if (http_host.empty()) throw std::invalid_argument("http backend needs a host");
        HttpBackendConfig config;
        config.host = http_host;
        return std::make_unique<HttpBackend>(config);
    }
    throw std::invalid_argument("unknown backend '" + selector + "'");
}

}  // namespace opengloss
