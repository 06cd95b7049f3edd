#include "causeway/llm.hpp"

#include <cstdlib>
#include <fstream>

#include <httplib.h>

namespace causeway {

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string prompt_hash(const std::string& prompt) {
    static const char* digits = "0123456789abcdef";
    std::uint64_t h = fnv1a64(prompt);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

namespace {

const char* kCannedRetrieval = "```\n```\n";

const char* kCannedDiagnosis =
    "```summary\n"
    "No specific root cause could be established from the supplied material; "
    "the failure appears to involve the interaction of the reported "
    "components.\n"
    "```\n"
    "```components\n"
    "PRIMARY SET\n"
    "Unknown\n"
    "RANKED\n"
    "Unknown\n"
    "```\n";

bool is_diagnosis_prompt(const std::string& prompt) {
    return prompt.find("```summary") != std::string::npos;
}

}  // namespace

MockLlmClient::MockLlmClient(const nlohmann::json& script) {
    if (script.is_object())
        for (const auto& [k, v] : script.items())
            if (v.is_string()) script_[k] = v.get<std::string>();
}

MockLlmClient MockLlmClient::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError(0, "cannot open mock script " + path);
    try {
        return MockLlmClient(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(e.byte, e.what());
    }
}

std::string MockLlmClient::complete(const std::string& prompt, double) {
    calls_.push_back(prompt);
    auto it = script_.find(prompt_hash(prompt));
    if (it != script_.end()) return it->second;
    bool diagnosis = is_diagnosis_prompt(prompt);
    it = script_.find(diagnosis ? "default.diagnosis" : "default.retrieval");
    if (it != script_.end()) return it->second;
    it = script_.find("default");
    if (it != script_.end()) return it->second;
    return diagnosis ? kCannedDiagnosis : kCannedRetrieval;
}

HttpLlmClient::HttpLlmClient(std::string endpoint, std::string model)
    : endpoint_(std::move(endpoint)), model_(std::move(model)) {}

std::string HttpLlmClient::complete(const std::string& prompt, double temperature) {
    // Split endpoint into host part and path.
    std::string host = endpoint_, path = "/v1/chat/completions";
    auto scheme = endpoint_.find("://");
    auto slash = endpoint_.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (slash != std::string::npos) {
        host = endpoint_.substr(0, slash);
        path = endpoint_.substr(slash);
    }

    nlohmann::json body = {
        {"model", model_},
        {"messages", {{{"role", "user"}, {"content", prompt}}}},
        {"temperature", temperature},
    };

    httplib::Client client(host);
    client.set_read_timeout(120, 0);
    httplib::Headers headers;
    if (const char* key = std::getenv(api_key_env()); key && *key)
        headers.emplace("Authorization", std::string("Bearer ") + key);

    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res)
        throw LlmUnavailable("no response from " + endpoint_ + ": " +
                             httplib::to_string(res.error()));
    if (res->status != 200)
        throw LlmUnavailable("HTTP " + std::to_string(res->status) + " from " +
                             endpoint_ + ": " + res->body);
    try {
        nlohmann::json j = nlohmann::json::parse(res->body);
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw LlmUnavailable(std::string("malformed completion response: ") + e.what());
    }
}

}  // namespace causeway
