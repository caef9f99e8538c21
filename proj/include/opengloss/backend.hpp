#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "opengloss/model.hpp"

namespace opengloss {

// The five agent roles. Each maps to exactly one output schema.
enum class AgentRole {
    Overview,
    PosDetails,
    Etymology,
    Encyclopedia,
    QaJudge,
};

inline constexpr std::size_t kAgentRoleCount = 5;

std::string_view to_string(AgentRole role);
std::optional<AgentRole> parse_agent_role(std::string_view text);

struct SamplingParams {
    double temperature = 0.7;
    double top_p = 0.95;
    int max_tokens = 2048;
    double frequency_penalty = 0.0;
};

// Per-role defaults: temperature 0.7 except the encyclopedia agent at 0.9
// with frequency penalty 0.3 and a 4096-token budget for longer prose.
SamplingParams default_sampling_params(AgentRole role);

// Throws std::invalid_argument when temperature < 0, top_p outside (0, 1],
// or max_tokens <= 0.
void check_sampling_params(const SamplingParams& params);

nlohmann::json sampling_params_json(const SamplingParams& params);

// Versioned prompt template for a role; becomes the "instructions" field of
// the call context.
std::string_view prompt_template(AgentRole role);

struct TransportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Abstracts the model behind the pipeline: one call produces the raw
// candidate output bytes for a role, a structured context, and sampling
// parameters. Transport failures throw TransportError and are retry
// eligible.
class GenerationBackend {
public:
    virtual ~GenerationBackend() = default;

    virtual std::string generate(AgentRole role, const nlohmann::json& context,
                                 const SamplingParams& params) = 0;

    // 0 = safe for unlimited concurrent invocation.
    virtual int max_concurrency() const { return 0; }
};

// Deterministic stand-in: output is a pure function of (seed, lemma, role,
// attempt), so runs are bit-reproducible and resumable. The malformation
// knob corrupts a deterministic fraction of responses (truncated JSON or
// deliberate arity breaches) to exercise the retry loop.
class MockBackend : public GenerationBackend {
public:
    explicit MockBackend(std::uint64_t seed, double malformation_rate = 0.0);

    std::string generate(AgentRole role, const nlohmann::json& context,
                         const SamplingParams& params) override;

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    double malformation_rate_;
};

// Serves fixtures from a directory: {lemma}/{role}.json, with
// pos_details.{pos}.json preferred for POS-specific calls. Missing fixture
// files throw TransportError.
class ReplayBackend : public GenerationBackend {
public:
    explicit ReplayBackend(std::filesystem::path root);

    std::string generate(AgentRole role, const nlohmann::json& context,
                         const SamplingParams& params) override;

private:
    std::filesystem::path root_;
};

struct HttpBackendConfig {
    std::string host;  // "http://host:port"
    std::string path = "/v1/generate";
    int timeout_seconds = 60;
    int max_5xx_retries = 2;
    std::string api_key_env = "OPENGLOSS_API_KEY";
};

// POSTs {role, context, params} as JSON and expects {"output": <string or
// object>}. 5xx responses are retried with backoff before giving up; 4xx and
// connection failures throw immediately.
class HttpBackend : public GenerationBackend {
public:
    explicit HttpBackend(HttpBackendConfig config);
    ~HttpBackend() override;

    std::string generate(AgentRole role, const nlohmann::json& context,
                         const SamplingParams& params) override;

private:
    HttpBackendConfig config_;
};

std::unique_ptr<GenerationBackend> make_backend(const std::string& selector, std::uint64_t seed,
                                                double malformation_rate,
                                                const std::filesystem::path& replay_dir,
                                                const std::string& http_host);

}  // namespace opengloss
