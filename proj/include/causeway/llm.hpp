#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "causeway/errors.hpp"

namespace causeway {

/// Completion backend. temperature 0 requests deterministic decoding.
class LlmClient {
  public:
    virtual ~LlmClient() = default;
    virtual std::string complete(const std::string& prompt, double temperature) = 0;
    virtual std::string model_name() const = 0;
    /// Implementations unsafe for concurrent complete() calls return false;
    /// the pipeline serializes calls to exclusive clients.
    virtual bool concurrent_safe() const { return true; }
};

/// FNV-1a 64-bit, the stable prompt hash used to key scripted completions.
std::uint64_t fnv1a64(std::string_view data);
std::string prompt_hash(const std::string& prompt);  // 16 hex digits

/// Replays scripted completions keyed by prompt_hash(prompt). Lookup order:
/// exact hash, then "default.retrieval"/"default.diagnosis" by prompt kind
/// (a diagnosis prompt asks for a ```summary section), then "default", then
/// a canned completion of the right shape so pipelines never stall.
class MockLlmClient : public LlmClient {
  public:
    explicit MockLlmClient(const nlohmann::json& script = nlohmann::json::object());
    static MockLlmClient from_file(const std::string& path);

    std::string complete(const std::string& prompt, double temperature) override;
    std::string model_name() const override { return "mock"; }

    /// Prompts seen so far, in call order (test introspection).
    const std::vector<std::string>& calls() const { return calls_; }

  private:
    std::map<std::string, std::string> script_;
    std::vector<std::string> calls_;
};

/// OpenAI-style chat-completion backend over HTTP. The API key is read from
/// the CAUSEWAY_API_KEY environment variable only; an empty value sends no
/// Authorization header. Failures throw LlmUnavailable.
class HttpLlmClient : public LlmClient {
  public:
    HttpLlmClient(std::string endpoint, std::string model);

    std::string complete(const std::string& prompt, double temperature) override;
    std::string model_name() const override { return model_; }
    bool concurrent_safe() const override { return false; }

    static const char* api_key_env() { return "CAUSEWAY_API_KEY"; }

  private:
    std::string endpoint_;  // e.g. "http://host:port/v1/chat/completions"
    std::string model_;
};

}  // namespace causeway
