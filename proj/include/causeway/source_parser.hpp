#pragma once

#include <string>
#include <utility>
#include <vector>

#include "causeway/cfir.hpp"
#include "causeway/errors.hpp"

namespace causeway {

/// One input file: (relative path, full text).
using SourceFile = std::pair<std::string, std::string>;

/// Parses the documented source subset (see docs/grammar.md) into CodeFacts:
/// one MethodDecl per method, one logging-statement index entry per
/// LOG.<level>(...) call, one Static call edge per statement-level invocation
/// whose target resolves by name+arity within the parsed set. Unresolved
/// invocations become edges with resolved=false. Files parse concurrently;
/// the merge and the resolution pass are single-threaded and deterministic
/// in the input file order.
///
/// Throws SyntaxError on any construct outside the subset and
/// DuplicateSignature when two methods collide.
CodeFacts parse_source_subset(const std::vector<SourceFile>& files,
                              const std::string& project_version = "");

/// Parses the proto-subset IDL grammar: `service Name { rpc M (Req) returns
/// (Resp); }` blocks; message/package/syntax/option/import declarations are
/// validated and skipped. One IdlService per service block, file order
/// preserved. Throws SyntaxError.
std::vector<IdlService> parse_idl(const std::vector<SourceFile>& files);

}  // namespace causeway
