#pragma once

#include <string>

#include <json.hpp>

#include "causeway/cfir.hpp"
#include "causeway/errors.hpp"

namespace causeway {

/// Current CFIR interchange schema version.
inline constexpr int kFactsSchemaVersion = 1;

/// Serializes CodeFacts to the CFIR interchange document (stable key order).
/// The logging-statement index is derived data and is not serialized; loaders
/// rebuild it.
nlohmann::ordered_json facts_to_json(const CodeFacts& facts);

/// Parses a CFIR interchange document. Throws FormatError on shape problems
/// and VersionMismatch on an unsupported schema_version.
CodeFacts facts_from_json(const nlohmann::json& j);

/// File wrappers: UTF-8, LF newlines, 2-space indentation.
/// load_facts throws FormatError (unreadable/garbled file) or VersionMismatch.
CodeFacts load_facts(const std::string& path);
void save_facts(const CodeFacts& facts, const std::string& path);

}  // namespace causeway
