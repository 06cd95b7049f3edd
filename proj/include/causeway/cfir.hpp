#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace causeway {

/// Expression tree for the source subset. Everything that is not a string
/// literal, a variable reference, or a concatenation is opaque to the
/// restoration pass.
struct Expr {
    enum class Kind { StrLit, VarRef, Concat, Call, Other };

    Kind kind = Kind::Other;
    // StrLit: literal text (unescaped). VarRef: variable name.
    // Call: callee name. Other: canonical source text.
    std::string text;
    // Concat: exactly {left, right}. Call: argument list.
    std::vector<Expr> parts;
    // Call only: receiver as written ("stub", "pkg.Class"), empty if none.
    std::string receiver;

    static Expr str(std::string s);
    static Expr var(std::string name);
    static Expr concat(Expr left, Expr right);
    static Expr call(std::string name, std::vector<Expr> args, std::string recv = "");
    static Expr other(std::string src_text);

    bool operator==(const Expr& rhs) const;
};

struct Statement;
using Block = std::vector<Statement>;

/// One statement of the source subset. `line` is 1-based within the file.
struct Statement {
    enum class Kind { Decl, Assign, LogCall, Invoke, If, Return };

    Kind kind = Kind::Return;
    int line = 0;

    std::string var;            // Decl / Assign
    std::string decl_type;      // Decl
    std::optional<Expr> value;  // Decl init / Assign rhs / LogCall arg / Return value
    std::string log_level;      // LogCall: trace|debug|info|warn|error|fatal

    std::string invoke_name;      // Invoke: simple method name as written
    std::string invoke_receiver;  // Invoke: receiver text, empty if none
    // Invoke: resolved target signature, empty while unresolved.
    std::string callee_signature;
    std::vector<Expr> args;  // Invoke

    Expr cond;  // If
    Block then_block;
    Block else_block;

    bool operator==(const Statement& rhs) const;
};

/// Structural equality that ignores line numbers, for render/re-parse checks.
bool equal_ignoring_lines(const Statement& a, const Statement& b);
bool equal_ignoring_lines(const Block& a, const Block& b);

struct Param {
    std::string type;
    std::string name;
    bool operator==(const Param&) const = default;
};

struct LineSpan {
    int start = 0;  // 1-based inclusive
    int end = 0;
    bool contains(int line) const { return line >= start && line <= end; }
    bool operator==(const LineSpan&) const = default;
};

struct MethodDecl {
    std::string signature;   // "pkg.Class.method(T1,T2)"
    std::string name;        // simple method name
    std::string class_name;  // "pkg.Class"
    std::string file;        // relative path
    LineSpan line_span;
    std::optional<std::string> doc_comment;  // delimiters stripped
    std::string return_type;
    std::vector<Param> params;
    Block body;
    bool is_interface_method = false;
    std::vector<std::string> implemented_interfaces_of_class;

    /// Last dotted segment of class_name.
    std::string simple_class_name() const;

    bool operator==(const MethodDecl& rhs) const;
};

struct CallEdge {
    enum class Kind { Static, RpcBridged };

    std::string caller;  // signature
    // Resolved signature, or the raw callee name when unresolved.
    std::string callee;
    Kind kind = Kind::Static;
    bool resolved = true;
    int call_site_line = 0;

    bool operator==(const CallEdge&) const = default;
};

struct RpcMethod {
    std::string rpc_name;
    std::string request_type;
    std::string response_type;
    bool operator==(const RpcMethod&) const = default;
};

struct IdlService {
    std::string service_name;
    std::vector<RpcMethod> rpc_methods;
    std::string source_file;
    bool operator==(const IdlService&) const = default;
};

/// Index of one logging statement inside a CodeFacts instance.
struct LogSite {
    std::string method_signature;
    std::vector<int> stmt_path;  // child indices from the method body root
    int line = 0;
    std::string level;
    bool operator==(const LogSite&) const = default;
};

/// The code-facts intermediate representation: everything later phases need
/// to know about one project version. Immutable after construction.
struct CodeFacts {
    std::map<std::string, MethodDecl> methods;  // keyed by signature
    std::vector<CallEdge> call_edges;           // Static only at this stage
    std::vector<IdlService> idl_services;
    std::vector<LogSite> logging_statements;
    std::string project_version;

    const MethodDecl* find_method(const std::string& signature) const;
    /// Resolves a LogSite back to its statement; nullptr if the path is stale.
    const Statement* log_statement(const LogSite& site) const;
    /// Methods of one class, in line order.
    std::vector<const MethodDecl*> methods_of_class(const std::string& class_name) const;

    /// Rebuilds logging_statements from the method bodies (single-writer step
    /// done once after parsing or loading).
    void reindex_logging_statements();

    /// Throws std::logic_error if a structural invariant is broken.
    void validate() const;

    bool operator==(const CodeFacts& rhs) const;
};

const Statement* statement_at(const Block& body, const std::vector<int>& path);

/// Canonical rendering: parse(render(x)) is structurally equal to x (modulo
/// line numbers for statements; exact for expressions).
std::string render_expr(const Expr& e);
std::string render_statement(const Statement& s, int indent = 0);
std::string render_block(const Block& b, int indent = 0);
/// Renders all methods that live in `file` as one compilable source file.
std::string render_file(const CodeFacts& facts, const std::string& file);

}  // namespace causeway
