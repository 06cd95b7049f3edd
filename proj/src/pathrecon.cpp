#include "causeway/pathrecon.hpp"

#include <algorithm>
#include <functional>

namespace causeway {

namespace {

std::string last_segment(const std::string& dotted) {
    auto pos = dotted.rfind('.');
    return pos == std::string::npos ? dotted : dotted.substr(pos + 1);
}

bool edge_order(const CallEdge& a, const CallEdge& b) {
    if (a.callee != b.callee) return a.callee < b.callee;
    if (a.call_site_line != b.call_site_line) return a.call_site_line < b.call_site_line;
    return a.kind < b.kind;
}

}  // namespace

std::vector<size_t> CallGraph::out_edges(const std::string& from) const {
    std::vector<size_t> out;
    for (size_t i = 0; i < edges.size(); ++i)
        if (edges[i].caller == from && !superseded_for_traversal.count(i))
            out.push_back(i);
    std::sort(out.begin(), out.end(),
              [&](size_t a, size_t b) { return edge_order(edges[a], edges[b]); });
    return out;
}

CallGraph build_call_graph(const CodeFacts& facts) {
    CallGraph g;
    for (const auto& [sig, m] : facts.methods) g.nodes.insert(sig);
    for (const CallEdge& e : facts.call_edges) {
        if (e.resolved)
            g.edges.push_back(e);
        else
            g.unresolved.push_back({e.caller, e.callee});
    }
    return g;
}

// ---------------------------------------------------------------------------
// RPC bridging

namespace {

struct ClassInfo {
    std::vector<std::string> implements;
    std::vector<std::string> method_signatures;  // sorted (map iteration order)
    std::map<std::string, std::vector<std::string>> by_name;
};

std::map<std::string, ClassInfo> class_table(const CodeFacts& facts) {
    std::map<std::string, ClassInfo> table;
    for (const auto& [sig, m] : facts.methods) {
        ClassInfo& info = table[m.class_name];
        info.implements = m.implemented_interfaces_of_class;
        info.method_signatures.push_back(sig);
        info.by_name[m.name].push_back(sig);
    }
    return table;
}

bool implements_service(const ClassInfo& info, const std::string& service_name) {
    for (const std::string& iface : info.implements)
        if (iface == service_name || last_segment(iface) == service_name) return true;
    return false;
}

}  // namespace

RpcBridgeResult bridge_rpcs(CallGraph graph, const CodeFacts& facts) {
    RpcBridgeResult result;
    std::map<std::string, ClassInfo> classes = class_table(facts);
    std::set<std::tuple<std::string, std::string, int>> added;

    size_t original_edge_count = graph.edges.size();
    for (const IdlService& service : facts.idl_services) {
        for (const RpcMethod& rpc : service.rpc_methods) {
            // Implementation candidates: class name contains the service name
            // and the class declares the service interface plus the rpc.
            std::vector<std::pair<std::string, std::string>> impls;  // class, sig
            for (const auto& [cls, info] : classes) {
                if (last_segment(cls).find(service.service_name) == std::string::npos)
                    continue;
                if (!implements_service(info, service.service_name)) continue;
                auto it = info.by_name.find(rpc.rpc_name);
                if (it == info.by_name.end()) continue;
                impls.push_back({cls, it->second.front()});
            }
            if (impls.size() > 1) {
                std::string w = service.service_name + "." + rpc.rpc_name +
                                ": multiple implementation classes:";
                for (const auto& [cls, sig] : impls) w += " " + cls;
                result.warnings.push_back(w);
            }

            // Client stub calls of this rpc.
            for (size_t i = 0; i < original_edge_count; ++i) {
                const CallEdge& e = graph.edges[i];
                if (e.kind != CallEdge::Kind::Static || !e.resolved) continue;
                const MethodDecl* callee = facts.find_method(e.callee);
                if (!callee || callee->name != rpc.rpc_name) continue;
                if (callee->simple_class_name().find(service.service_name) ==
                    std::string::npos)
                    continue;
                if (impls.empty()) {
                    result.unresolved_bindings.push_back(
                        service.service_name + "." + rpc.rpc_name +
                        ": no implementation class for stub call " + e.caller +
                        " -> " + e.callee);
                    continue;
                }
                for (const auto& [cls, impl_sig] : impls) {
                    if (added.insert({e.caller, impl_sig, e.call_site_line}).second) {
                        CallEdge bridged;
                        bridged.caller = e.caller;
                        bridged.callee = impl_sig;
                        bridged.kind = CallEdge::Kind::RpcBridged;
                        bridged.resolved = true;
                        bridged.call_site_line = e.call_site_line;
                        graph.edges.push_back(bridged);
                    }
                    RpcBinding b;
                    b.service_name = service.service_name;
                    b.rpc_name = rpc.rpc_name;
                    b.client_call_edge = i;
                    b.server_impl_signature = impl_sig;
                    b.impl_class = cls;
                    result.bindings.push_back(std::move(b));
                }
                graph.superseded_for_traversal.insert(i);
            }
        }
    }
    result.graph = std::move(graph);
    return result;
}

// ---------------------------------------------------------------------------
// Path reconstruction

namespace {

std::vector<BranchStep> merge_branches(const CodePoint& a, const CodePoint& b) {
    std::vector<BranchStep> out = a.branch_path;
    for (const BranchStep& s : b.branch_path)
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    return out;
}

struct Candidate {
    std::vector<size_t> edge_seq;
    std::vector<std::string> signatures;  // including start
    bool has_rpc = false;
};

}  // namespace

std::vector<ExecutionPath> reconstruct_paths(const CallGraph& graph,
                                             const CodeFacts& facts [[maybe_unused]],
                                             const std::vector<CodePoint>& points,
                                             int max_depth,
                                             int max_paths_per_segment) {
    std::vector<ExecutionPath> out;
    if (points.empty()) return out;

    std::map<std::string, std::vector<size_t>> adjacency;
    for (const std::string& n : graph.nodes) adjacency[n] = graph.out_edges(n);

    auto single_point_path = [&](const CodePoint& a, const CodePoint& b) {
        ExecutionPath p;
        p.steps.push_back({a.method_signature, PathStep::Entry::CodePoint, {}});
        p.from = a;
        p.to = b;
        p.depth_used = 0;
        p.taken_branches = merge_branches(a, b);
        return p;
    };

    if (points.size() == 1) {
        // A lone code point still names a method worth profiling.
        out.push_back(single_point_path(points[0], points[0]));
        return out;
    }

    for (size_t pi = 0; pi + 1 < points.size(); ++pi) {
        const CodePoint& from = points[pi];
        const CodePoint& to = points[pi + 1];
        if (from.method_signature == to.method_signature) {
            out.push_back(single_point_path(from, to));
            continue;
        }

        std::vector<Candidate> found;
        std::vector<size_t> edge_seq;
        std::set<std::string> visited{from.method_signature};
        std::function<void(const std::string&)> dfs = [&](const std::string& cur) {
            if (cur == to.method_signature) {
                Candidate c;
                c.edge_seq = edge_seq;
                c.signatures.push_back(from.method_signature);
                for (size_t ei : edge_seq) {
                    c.signatures.push_back(graph.edges[ei].callee);
                    c.has_rpc |= graph.edges[ei].kind == CallEdge::Kind::RpcBridged;
                }
                found.push_back(std::move(c));
                return;  // paths end at the target; longer ones would revisit it
            }
            if (static_cast<int>(edge_seq.size()) == max_depth) return;
            auto it = adjacency.find(cur);
            if (it == adjacency.end()) return;
            for (size_t ei : it->second) {
                const std::string& next = graph.edges[ei].callee;
                if (!visited.insert(next).second) continue;
                edge_seq.push_back(ei);
                dfs(next);
                edge_seq.pop_back();
                visited.erase(next);
            }
        };
        if (graph.nodes.count(from.method_signature)) dfs(from.method_signature);

        if (found.empty()) {
            ExecutionPath p;
            p.steps.push_back({from.method_signature, PathStep::Entry::CodePoint, {}});
            p.steps.push_back({to.method_signature, PathStep::Entry::CodePoint, {}});
            p.from = from;
            p.to = to;
            p.depth_used = 0;
            p.taken_branches = merge_branches(from, to);
            p.unlinked = true;
            out.push_back(std::move(p));
            continue;
        }

        std::sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
            if (a.edge_seq.size() != b.edge_seq.size())
                return a.edge_seq.size() < b.edge_seq.size();
            if (a.has_rpc != b.has_rpc) return a.has_rpc;
            return a.signatures < b.signatures;
        });
        if (static_cast<int>(found.size()) > max_paths_per_segment)
            found.resize(max_paths_per_segment);

        for (const Candidate& c : found) {
            ExecutionPath p;
            p.steps.push_back({from.method_signature, PathStep::Entry::CodePoint, {}});
            for (size_t ei : c.edge_seq) {
                const CallEdge& e = graph.edges[ei];
                p.steps.push_back({e.callee,
                                   e.kind == CallEdge::Kind::RpcBridged
                                       ? PathStep::Entry::RpcHop
                                       : PathStep::Entry::StaticCall,
                                   e.call_site_line});
            }
            p.from = from;
            p.to = to;
            p.depth_used = static_cast<int>(c.edge_seq.size());
            p.taken_branches = merge_branches(from, to);
            out.push_back(std::move(p));
        }
    }
    return out;
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

std::string graph_to_dot(const CallGraph& graph) {
    std::string out = "digraph callgraph {\n  rankdir=LR;\n  node [shape=box];\n";
    for (const std::string& n : graph.nodes)
        out += "  \"" + dot_escape(n) + "\";\n";
    for (size_t i = 0; i < graph.edges.size(); ++i) {
        const CallEdge& e = graph.edges[i];
        out += "  \"" + dot_escape(e.caller) + "\" -> \"" + dot_escape(e.callee) + "\"";
        std::vector<std::string> attrs;
        if (e.kind == CallEdge::Kind::RpcBridged)
            attrs.push_back("style=dashed, label=\"rpc\"");
        if (graph.superseded_for_traversal.count(i))
            attrs.push_back("color=gray");
        if (!attrs.empty()) {
            out += " [";
            for (size_t a = 0; a < attrs.size(); ++a)
                out += (a ? ", " : "") + attrs[a];
            out += "]";
        }
        out += ";\n";
    }
    out += "}\n";
    return out;
}

}  // namespace causeway
