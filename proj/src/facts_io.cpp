#include "causeway/facts_io.hpp"

#include <fstream>
#include <sstream>

namespace causeway {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

[[noreturn]] void shape_error(const std::string& ctx, const std::string& want) {
    throw FormatError(0, ctx + " must be " + want);
}

const json& need(const json& j, const char* key, const std::string& ctx) {
    if (!j.is_object() || !j.contains(key))
        throw FormatError(0, ctx + " is missing required key \"" + key + "\"");
    return j.at(key);
}

std::string need_str(const json& j, const char* key, const std::string& ctx) {
    const json& v = need(j, key, ctx);
    if (!v.is_string()) shape_error(ctx + "." + key, "a string");
    return v.get<std::string>();
}

int need_int(const json& j, const char* key, const std::string& ctx) {
    const json& v = need(j, key, ctx);
    if (!v.is_number_integer()) shape_error(ctx + "." + key, "an integer");
    return v.get<int>();
}

bool need_bool(const json& j, const char* key, const std::string& ctx) {
    const json& v = need(j, key, ctx);
    if (!v.is_boolean()) shape_error(ctx + "." + key, "a boolean");
    return v.get<bool>();
}

const json& need_array(const json& j, const char* key, const std::string& ctx) {
    const json& v = need(j, key, ctx);
    if (!v.is_array()) shape_error(ctx + "." + key, "an array");
    return v;
}

// --- expressions -----------------------------------------------------------

ojson expr_to_json(const Expr& e) {
    ojson o;
    switch (e.kind) {
        case Expr::Kind::StrLit:
            o["kind"] = "str";
            o["text"] = e.text;
            break;
        case Expr::Kind::VarRef:
            o["kind"] = "var";
            o["name"] = e.text;
            break;
        case Expr::Kind::Concat:
            o["kind"] = "concat";
            o["left"] = expr_to_json(e.parts[0]);
            o["right"] = expr_to_json(e.parts[1]);
            break;
        case Expr::Kind::Call: {
            o["kind"] = "call";
            o["name"] = e.text;
            if (!e.receiver.empty()) o["receiver"] = e.receiver;
            ojson args = ojson::array();
            for (const Expr& a : e.parts) args.push_back(expr_to_json(a));
            o["args"] = std::move(args);
            break;
        }
        case Expr::Kind::Other:
            o["kind"] = "other";
            o["text"] = e.text;
            break;
    }
    return o;
}

Expr expr_from_json(const json& j, const std::string& ctx) {
    if (!j.is_object()) shape_error(ctx, "an expression object");
    std::string kind = need_str(j, "kind", ctx);
    if (kind == "str") return Expr::str(need_str(j, "text", ctx));
    if (kind == "var") return Expr::var(need_str(j, "name", ctx));
    if (kind == "concat")
        return Expr::concat(expr_from_json(need(j, "left", ctx), ctx + ".left"),
                            expr_from_json(need(j, "right", ctx), ctx + ".right"));
    if (kind == "call") {
        std::vector<Expr> args;
        const json& ja = need_array(j, "args", ctx);
        for (size_t i = 0; i < ja.size(); ++i)
            args.push_back(expr_from_json(ja[i], ctx + ".args[" + std::to_string(i) + "]"));
        std::string recv;
        if (j.contains("receiver")) recv = need_str(j, "receiver", ctx);
        return Expr::call(need_str(j, "name", ctx), std::move(args), std::move(recv));
    }
    if (kind == "other") return Expr::other(need_str(j, "text", ctx));
    shape_error(ctx + ".kind", "one of str|var|concat|call|other");
}

// --- statements ------------------------------------------------------------

ojson stmt_to_json(const Statement& s);

ojson block_to_json(const Block& b) {
    ojson arr = ojson::array();
    for (const Statement& s : b) arr.push_back(stmt_to_json(s));
    return arr;
}

ojson stmt_to_json(const Statement& s) {
    ojson o;
    switch (s.kind) {
        case Statement::Kind::Decl:
            o["kind"] = "decl";
            o["line"] = s.line;
            o["type"] = s.decl_type;
            o["var"] = s.var;
            if (s.value) o["value"] = expr_to_json(*s.value);
            break;
        case Statement::Kind::Assign:
            o["kind"] = "assign";
            o["line"] = s.line;
            o["var"] = s.var;
            o["value"] = expr_to_json(*s.value);
            break;
        case Statement::Kind::LogCall:
            o["kind"] = "log";
            o["line"] = s.line;
            o["level"] = s.log_level;
            o["value"] = expr_to_json(*s.value);
            break;
        case Statement::Kind::Invoke: {
            o["kind"] = "invoke";
            o["line"] = s.line;
            o["name"] = s.invoke_name;
            if (!s.invoke_receiver.empty()) o["receiver"] = s.invoke_receiver;
            if (!s.callee_signature.empty()) o["callee"] = s.callee_signature;
            ojson args = ojson::array();
            for (const Expr& a : s.args) args.push_back(expr_to_json(a));
            o["args"] = std::move(args);
            break;
        }
        case Statement::Kind::If:
            o["kind"] = "if";
            o["line"] = s.line;
            o["cond"] = expr_to_json(s.cond);
            o["then"] = block_to_json(s.then_block);
            if (!s.else_block.empty()) o["else"] = block_to_json(s.else_block);
            break;
        case Statement::Kind::Return:
            o["kind"] = "return";
            o["line"] = s.line;
            if (s.value) o["value"] = expr_to_json(*s.value);
            break;
    }
    return o;
}

Statement stmt_from_json(const json& j, const std::string& ctx);

Block block_from_json(const json& j, const std::string& ctx) {
    if (!j.is_array()) shape_error(ctx, "a statement array");
    Block b;
    for (size_t i = 0; i < j.size(); ++i)
        b.push_back(stmt_from_json(j[i], ctx + "[" + std::to_string(i) + "]"));
    return b;
}

Statement stmt_from_json(const json& j, const std::string& ctx) {
    if (!j.is_object()) shape_error(ctx, "a statement object");
    std::string kind = need_str(j, "kind", ctx);
    Statement s;
    s.line = need_int(j, "line", ctx);
    if (kind == "decl") {
        s.kind = Statement::Kind::Decl;
        s.decl_type = need_str(j, "type", ctx);
        s.var = need_str(j, "var", ctx);
        if (j.contains("value")) s.value = expr_from_json(j.at("value"), ctx + ".value");
        return s;
    }
    if (kind == "assign") {
        s.kind = Statement::Kind::Assign;
        s.var = need_str(j, "var", ctx);
        s.value = expr_from_json(need(j, "value", ctx), ctx + ".value");
        return s;
    }
    if (kind == "log") {
        s.kind = Statement::Kind::LogCall;
        s.log_level = need_str(j, "level", ctx);
        s.value = expr_from_json(need(j, "value", ctx), ctx + ".value");
        return s;
    }
    if (kind == "invoke") {
        s.kind = Statement::Kind::Invoke;
        s.invoke_name = need_str(j, "name", ctx);
        if (j.contains("receiver")) s.invoke_receiver = need_str(j, "receiver", ctx);
        if (j.contains("callee")) s.callee_signature = need_str(j, "callee", ctx);
        const json& ja = need_array(j, "args", ctx);
        for (size_t i = 0; i < ja.size(); ++i)
            s.args.push_back(
                expr_from_json(ja[i], ctx + ".args[" + std::to_string(i) + "]"));
        return s;
    }
    if (kind == "if") {
        s.kind = Statement::Kind::If;
        s.cond = expr_from_json(need(j, "cond", ctx), ctx + ".cond");
        s.then_block = block_from_json(need(j, "then", ctx), ctx + ".then");
        if (j.contains("else")) s.else_block = block_from_json(j.at("else"), ctx + ".else");
        return s;
    }
    if (kind == "return") {
        s.kind = Statement::Kind::Return;
        if (j.contains("value")) s.value = expr_from_json(j.at("value"), ctx + ".value");
        return s;
    }
    shape_error(ctx + ".kind", "one of decl|assign|log|invoke|if|return");
}

// --- methods, edges, services ----------------------------------------------

ojson method_to_json(const MethodDecl& m) {
    ojson o;
    o["signature"] = m.signature;
    o["name"] = m.name;
    o["class_name"] = m.class_name;
    o["file"] = m.file;
    o["line_span"] = ojson::array({m.line_span.start, m.line_span.end});
    if (m.doc_comment) o["doc_comment"] = *m.doc_comment;
    o["return_type"] = m.return_type;
    ojson params = ojson::array();
    for (const Param& p : m.params) {
        ojson pj;
        pj["type"] = p.type;
        pj["name"] = p.name;
        params.push_back(std::move(pj));
    }
    o["params"] = std::move(params);
    o["is_interface_method"] = m.is_interface_method;
    if (!m.implemented_interfaces_of_class.empty())
        o["implements"] = m.implemented_interfaces_of_class;
    o["body"] = block_to_json(m.body);
    return o;
}

MethodDecl method_from_json(const json& j, const std::string& ctx) {
    if (!j.is_object()) shape_error(ctx, "a method object");
    MethodDecl m;
    m.signature = need_str(j, "signature", ctx);
    m.name = need_str(j, "name", ctx);
    m.class_name = need_str(j, "class_name", ctx);
    m.file = need_str(j, "file", ctx);
    const json& span = need_array(j, "line_span", ctx);
    if (span.size() != 2 || !span[0].is_number_integer() || !span[1].is_number_integer())
        shape_error(ctx + ".line_span", "a [start, end] integer pair");
    m.line_span = {span[0].get<int>(), span[1].get<int>()};
    if (j.contains("doc_comment")) m.doc_comment = need_str(j, "doc_comment", ctx);
    m.return_type = need_str(j, "return_type", ctx);
    const json& params = need_array(j, "params", ctx);
    for (size_t i = 0; i < params.size(); ++i) {
        std::string pctx = ctx + ".params[" + std::to_string(i) + "]";
        m.params.push_back(
            {need_str(params[i], "type", pctx), need_str(params[i], "name", pctx)});
    }
    m.is_interface_method = need_bool(j, "is_interface_method", ctx);
    if (j.contains("implements")) {
        const json& impls = j.at("implements");
        if (!impls.is_array()) shape_error(ctx + ".implements", "an array of strings");
        for (const auto& v : impls) {
            if (!v.is_string()) shape_error(ctx + ".implements", "an array of strings");
            m.implemented_interfaces_of_class.push_back(v.get<std::string>());
        }
    }
    m.body = block_from_json(need(j, "body", ctx), ctx + ".body");
    return m;
}

ojson edge_to_json(const CallEdge& e) {
    ojson o;
    o["caller"] = e.caller;
    o["callee"] = e.callee;
    o["kind"] = e.kind == CallEdge::Kind::Static ? "static" : "rpc_bridged";
    o["resolved"] = e.resolved;
    o["line"] = e.call_site_line;
    return o;
}

CallEdge edge_from_json(const json& j, const std::string& ctx) {
    if (!j.is_object()) shape_error(ctx, "a call-edge object");
    CallEdge e;
    e.caller = need_str(j, "caller", ctx);
    e.callee = need_str(j, "callee", ctx);
    std::string kind = need_str(j, "kind", ctx);
    if (kind == "static")
        e.kind = CallEdge::Kind::Static;
    else if (kind == "rpc_bridged")
        e.kind = CallEdge::Kind::RpcBridged;
    else
        shape_error(ctx + ".kind", "\"static\" or \"rpc_bridged\"");
    e.resolved = need_bool(j, "resolved", ctx);
    e.call_site_line = need_int(j, "line", ctx);
    return e;
}

ojson service_to_json(const IdlService& s) {
    ojson o;
    o["service_name"] = s.service_name;
    o["source_file"] = s.source_file;
    ojson rpcs = ojson::array();
    for (const RpcMethod& rm : s.rpc_methods) {
        ojson r;
        r["name"] = rm.rpc_name;
        r["request"] = rm.request_type;
        r["response"] = rm.response_type;
        rpcs.push_back(std::move(r));
    }
    o["rpcs"] = std::move(rpcs);
    return o;
}

IdlService service_from_json(const json& j, const std::string& ctx) {
    if (!j.is_object()) shape_error(ctx, "a service object");
    IdlService s;
    s.service_name = need_str(j, "service_name", ctx);
    s.source_file = need_str(j, "source_file", ctx);
    const json& rpcs = need_array(j, "rpcs", ctx);
    for (size_t i = 0; i < rpcs.size(); ++i) {
        std::string rctx = ctx + ".rpcs[" + std::to_string(i) + "]";
        s.rpc_methods.push_back({need_str(rpcs[i], "name", rctx),
                                 need_str(rpcs[i], "request", rctx),
                                 need_str(rpcs[i], "response", rctx)});
    }
    return s;
}

}  // namespace

ojson facts_to_json(const CodeFacts& facts) {
    ojson o;
    o["schema_version"] = kFactsSchemaVersion;
    o["project_version"] = facts.project_version;
    ojson methods = ojson::array();
    for (const auto& [sig, m] : facts.methods) methods.push_back(method_to_json(m));
    o["methods"] = std::move(methods);
    ojson edges = ojson::array();
    for (const CallEdge& e : facts.call_edges) edges.push_back(edge_to_json(e));
    o["call_edges"] = std::move(edges);
    ojson services = ojson::array();
    for (const IdlService& s : facts.idl_services) services.push_back(service_to_json(s));
    o["idl_services"] = std::move(services);
    return o;
}

CodeFacts facts_from_json(const json& j) {
    if (!j.is_object()) throw FormatError(0, "top level must be an object");
    const json& ver = need(j, "schema_version", "top level");
    if (!ver.is_number_integer())
        throw FormatError(0, "schema_version must be an integer");
    if (ver.get<int>() != kFactsSchemaVersion)
        throw VersionMismatch(ver.get<int>(), kFactsSchemaVersion);

    CodeFacts facts;
    facts.project_version = need_str(j, "project_version", "top level");
    const json& methods = need_array(j, "methods", "top level");
    for (size_t i = 0; i < methods.size(); ++i) {
        MethodDecl m = method_from_json(methods[i], "methods[" + std::to_string(i) + "]");
        if (facts.methods.count(m.signature))
            throw FormatError(0, "duplicate method signature: " + m.signature);
        std::string sig = m.signature;
        facts.methods.emplace(std::move(sig), std::move(m));
    }
    const json& edges = need_array(j, "call_edges", "top level");
    for (size_t i = 0; i < edges.size(); ++i)
        facts.call_edges.push_back(
            edge_from_json(edges[i], "call_edges[" + std::to_string(i) + "]"));
    const json& services = need_array(j, "idl_services", "top level");
    for (size_t i = 0; i < services.size(); ++i)
        facts.idl_services.push_back(
            service_from_json(services[i], "idl_services[" + std::to_string(i) + "]"));

    facts.reindex_logging_statements();
    try {
        facts.validate();
    } catch (const std::logic_error& e) {
        throw FormatError(0, std::string("facts fail validation: ") + e.what());
    }
    return facts;
}

CodeFacts load_facts(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError(0, "cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    json j;
    try {
        j = json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw FormatError(e.byte, e.what());
    }
    return facts_from_json(j);
}

void save_facts(const CodeFacts& facts, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError(0, "cannot open " + path + " for writing");
    out << facts_to_json(facts).dump(2) << "\n";
}

}  // namespace causeway
