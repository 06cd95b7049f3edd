#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace causeway {

/// Grammar violation in a source-subset or IDL file. `expected` describes
/// what the parser was looking for at (path, line).
struct SyntaxError : std::runtime_error {
    std::string path;
    int line;
    std::string expected;

    SyntaxError(std::string p, int l, std::string exp)
        : std::runtime_error(p + ":" + std::to_string(l) + ": expected " + exp),
          path(std::move(p)),
          line(l),
          expected(std::move(exp)) {}
};

/// Two method declarations collapsed to the same fully-qualified signature.
struct DuplicateSignature : std::runtime_error {
    std::string signature;

    explicit DuplicateSignature(std::string sig)
        : std::runtime_error("duplicate method signature: " + sig),
          signature(std::move(sig)) {}
};

/// Interchange or artifact file is structurally broken.
struct FormatError : std::runtime_error {
    std::size_t offset;
    std::string reason;

    FormatError(std::size_t off, std::string r)
        : std::runtime_error("format error at byte " + std::to_string(off) + ": " + r),
          offset(off),
          reason(std::move(r)) {}
};

/// Interchange file declares a schema_version this build does not speak.
struct VersionMismatch : std::runtime_error {
    int found;
    int supported;

    VersionMismatch(int f, int s)
        : std::runtime_error("unsupported schema_version " + std::to_string(f) +
                             " (supported: " + std::to_string(s) + ")"),
          found(f),
          supported(s) {}
};

/// The LLM backend could not produce a completion (network, HTTP, script miss).
struct LlmUnavailable : std::runtime_error {
    std::string cause;

    explicit LlmUnavailable(std::string c)
        : std::runtime_error("LLM backend unavailable: " + c), cause(std::move(c)) {}
};

/// evaluate was handed a diagnosis with no matching ground-truth label.
struct MissingGroundTruth : std::runtime_error {
    std::string id;

    explicit MissingGroundTruth(std::string issue_id)
        : std::runtime_error("no ground truth for issue " + issue_id),
          id(std::move(issue_id)) {}
};

}  // namespace causeway
