#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "causeway/cfir.hpp"
#include "causeway/logsource.hpp"

namespace causeway {

/// Static call graph, later patched with RPC-bridged edges. Bridging never
/// removes anything: a stub edge replaced for traversal stays stored and is
/// listed in superseded_for_traversal instead.
struct CallGraph {
    std::set<std::string> nodes;  // method signatures
    std::vector<CallEdge> edges;  // Static and RpcBridged
    std::vector<std::pair<std::string, std::string>> unresolved;  // caller, name
    std::set<size_t> superseded_for_traversal;  // edge indices skipped by walks

    /// Edge indices usable for traversal from `from`, in a fixed order.
    std::vector<size_t> out_edges(const std::string& from) const;
};

CallGraph build_call_graph(const CodeFacts& facts);

/// One client-stub call bound to a server-side implementation method.
struct RpcBinding {
    std::string service_name;
    std::string rpc_name;
    size_t client_call_edge = 0;  // index of the original Static stub edge
    std::string server_impl_signature;
    std::string impl_class;
    bool operator==(const RpcBinding&) const = default;
};

struct RpcBridgeResult {
    CallGraph graph;
    std::vector<RpcBinding> bindings;
    std::vector<std::string> warnings;            // ambiguous implementations
    std::vector<std::string> unresolved_bindings;  // stub calls without an impl
};

/// Adds an RpcBridged edge caller→implementation for every stub call: the
/// callee's simple name equals an rpc name and its class name contains the
/// service name. Implementations are classes whose name contains the service
/// name AND which declare the service interface in their implements list.
/// More than one surviving class bridges them all and records a warning.
RpcBridgeResult bridge_rpcs(CallGraph graph, const CodeFacts& facts);

/// One method on an execution path and how it was entered.
struct PathStep {
    enum class Entry { CodePoint, StaticCall, RpcHop };
    std::string signature;
    Entry entry_reason = Entry::CodePoint;
    std::optional<int> call_site_line;
    bool operator==(const PathStep&) const = default;
};

/// A bounded acyclic method sequence connecting two consecutive code points.
struct ExecutionPath {
    std::vector<PathStep> steps;  // non-empty; no repeated signature
    CodePoint from;
    CodePoint to;
    int depth_used = 0;  // invocation hops, ≤ max_depth
    std::vector<BranchStep> taken_branches;  // merged from anchor templates
    bool unlinked = false;  // no route within depth: both anchors, no hops
    bool operator==(const ExecutionPath&) const = default;
};

/// For each consecutive pair of points, enumerates acyclic signature
/// sequences of at most max_depth hops over traversable edges. Kept paths are
/// capped per segment, preferring fewer hops, then paths containing an RPC
/// hop, then lexicographic order. Unreachable segments yield one two-step
/// path flagged unlinked; a pair sharing a method yields a single-step path.
std::vector<ExecutionPath> reconstruct_paths(const CallGraph& graph,
                                             const CodeFacts& facts,
                                             const std::vector<CodePoint>& points,
                                             int max_depth = 2,
                                             int max_paths_per_segment = 5);

/// DOT rendering of the patched graph; RpcBridged edges are dashed.
std::string graph_to_dot(const CallGraph& graph);

}  // namespace causeway
