#include "causeway/cfir.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace causeway {

Expr Expr::str(std::string s) {
    Expr e;
    e.kind = Kind::StrLit;
    e.text = std::move(s);
    return e;
}

Expr Expr::var(std::string name) {
    Expr e;
    e.kind = Kind::VarRef;
    e.text = std::move(name);
    return e;
}

Expr Expr::concat(Expr left, Expr right) {
    Expr e;
    e.kind = Kind::Concat;
    e.parts.push_back(std::move(left));
    e.parts.push_back(std::move(right));
    return e;
}

Expr Expr::call(std::string name, std::vector<Expr> args, std::string recv) {
    Expr e;
    e.kind = Kind::Call;
    e.text = std::move(name);
    e.parts = std::move(args);
    e.receiver = std::move(recv);
    return e;
}

Expr Expr::other(std::string src_text) {
    Expr e;
    e.kind = Kind::Other;
    e.text = std::move(src_text);
    return e;
}

bool Expr::operator==(const Expr& rhs) const {
    return kind == rhs.kind && text == rhs.text && receiver == rhs.receiver &&
           parts == rhs.parts;
}

bool Statement::operator==(const Statement& rhs) const {
    return kind == rhs.kind && line == rhs.line && var == rhs.var &&
           decl_type == rhs.decl_type && value == rhs.value &&
           log_level == rhs.log_level && invoke_name == rhs.invoke_name &&
           invoke_receiver == rhs.invoke_receiver &&
           callee_signature == rhs.callee_signature && args == rhs.args &&
           cond == rhs.cond && then_block == rhs.then_block &&
           else_block == rhs.else_block;
}

bool equal_ignoring_lines(const Statement& a, const Statement& b) {
    return a.kind == b.kind && a.var == b.var && a.decl_type == b.decl_type &&
           a.value == b.value && a.log_level == b.log_level &&
           a.invoke_name == b.invoke_name &&
           a.invoke_receiver == b.invoke_receiver &&
           a.callee_signature == b.callee_signature && a.args == b.args &&
           a.cond == b.cond && equal_ignoring_lines(a.then_block, b.then_block) &&
           equal_ignoring_lines(a.else_block, b.else_block);
}

bool equal_ignoring_lines(const Block& a, const Block& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!equal_ignoring_lines(a[i], b[i])) return false;
    return true;
}

std::string MethodDecl::simple_class_name() const {
    auto pos = class_name.rfind('.');
    return pos == std::string::npos ? class_name : class_name.substr(pos + 1);
}

bool MethodDecl::operator==(const MethodDecl& rhs) const {
    return signature == rhs.signature && name == rhs.name &&
           class_name == rhs.class_name && file == rhs.file &&
           line_span == rhs.line_span && doc_comment == rhs.doc_comment &&
           return_type == rhs.return_type && params == rhs.params &&
           body == rhs.body && is_interface_method == rhs.is_interface_method &&
           implemented_interfaces_of_class == rhs.implemented_interfaces_of_class;
}

const MethodDecl* CodeFacts::find_method(const std::string& signature) const {
    auto it = methods.find(signature);
    return it == methods.end() ? nullptr : &it->second;
}

const Statement* statement_at(const Block& body, const std::vector<int>& path) {
    const Block* block = &body;
    const Statement* stmt = nullptr;
    for (size_t i = 0; i < path.size(); ++i) {
        int idx = path[i];
        // Even indices address a statement in the current block; for If
        // statements the next path element selects then (0) or else (1).
        if (idx < 0 || static_cast<size_t>(idx) >= block->size()) return nullptr;
        stmt = &(*block)[idx];
        if (i + 1 < path.size()) {
            if (stmt->kind != Statement::Kind::If) return nullptr;
            ++i;
            if (i >= path.size()) return nullptr;
            block = path[i] == 0 ? &stmt->then_block : &stmt->else_block;
        }
    }
    return stmt;
}

const Statement* CodeFacts::log_statement(const LogSite& site) const {
    const MethodDecl* m = find_method(site.method_signature);
    if (!m) return nullptr;
    const Statement* s = statement_at(m->body, site.stmt_path);
    if (!s || s->kind != Statement::Kind::LogCall) return nullptr;
    return s;
}

std::vector<const MethodDecl*> CodeFacts::methods_of_class(
    const std::string& class_name) const {
    std::vector<const MethodDecl*> out;
    for (const auto& [sig, m] : methods)
        if (m.class_name == class_name) out.push_back(&m);
    std::sort(out.begin(), out.end(), [](const MethodDecl* a, const MethodDecl* b) {
        return a->line_span.start < b->line_span.start;
    });
    return out;
}

namespace {

void collect_log_sites(const Block& block, std::vector<int>& path,
                       const std::string& signature, std::vector<LogSite>& out) {
    for (size_t i = 0; i < block.size(); ++i) {
        const Statement& s = block[i];
        if (s.kind == Statement::Kind::LogCall) {
            path.push_back(static_cast<int>(i));
            out.push_back({signature, path, s.line, s.log_level});
            path.pop_back();
        } else if (s.kind == Statement::Kind::If) {
            path.push_back(static_cast<int>(i));
            path.push_back(0);
            collect_log_sites(s.then_block, path, signature, out);
            path.back() = 1;
            collect_log_sites(s.else_block, path, signature, out);
            path.pop_back();
            path.pop_back();
        }
    }
}

}  // namespace

void CodeFacts::reindex_logging_statements() {
    logging_statements.clear();
    for (const auto& [sig, m] : methods) {
        std::vector<int> path;
        collect_log_sites(m.body, path, sig, logging_statements);
    }
}

void CodeFacts::validate() const {
    for (const auto& [sig, m] : methods) {
        if (sig != m.signature)
            throw std::logic_error("method map key mismatch for " + sig);
        if (m.line_span.start > m.line_span.end)
            throw std::logic_error("inverted line span in " + sig);
    }
    for (const auto& site : logging_statements) {
        const Statement* s = log_statement(site);
        if (!s) throw std::logic_error("stale logging statement index in " +
                                       site.method_signature);
        const MethodDecl& m = methods.at(site.method_signature);
        if (!m.line_span.contains(s->line))
            throw std::logic_error("log call outside method span in " +
                                   site.method_signature);
    }
    for (const auto& e : call_edges) {
        if (e.kind != CallEdge::Kind::Static)
            throw std::logic_error("bridged edge present at construction time");
        const MethodDecl* caller = find_method(e.caller);
        if (!caller) throw std::logic_error("edge caller missing: " + e.caller);
        if (!caller->line_span.contains(e.call_site_line))
            throw std::logic_error("call site outside caller span: " + e.caller);
        if (e.resolved && !find_method(e.callee))
            throw std::logic_error("resolved edge to missing callee: " + e.callee);
    }
    for (const auto& svc : idl_services) {
        std::vector<std::string> names;
        for (const auto& rm : svc.rpc_methods) names.push_back(rm.rpc_name);
        std::sort(names.begin(), names.end());
        if (std::adjacent_find(names.begin(), names.end()) != names.end())
            throw std::logic_error("duplicate rpc name in service " +
                                   svc.service_name);
    }
}

bool CodeFacts::operator==(const CodeFacts& rhs) const {
    return methods == rhs.methods && call_edges == rhs.call_edges &&
           idl_services == rhs.idl_services &&
           logging_statements == rhs.logging_statements &&
           project_version == rhs.project_version;
}

// ---------------------------------------------------------------------------
// Canonical rendering

namespace {

std::string escape_string(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    return out;
}

std::string indent_str(int n) { return std::string(static_cast<size_t>(n) * 4, ' '); }

}  // namespace

std::string render_expr(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::StrLit:
            return "\"" + escape_string(e.text) + "\"";
        case Expr::Kind::VarRef:
            return e.text;
        case Expr::Kind::Concat: {
            // `+` parses left-associative; parenthesize a right-nested concat
            // so rendering preserves the tree shape.
            std::string rhs = render_expr(e.parts[1]);
            if (e.parts[1].kind == Expr::Kind::Concat) rhs = "(" + rhs + ")";
            return render_expr(e.parts[0]) + " + " + rhs;
        }
        case Expr::Kind::Call: {
            std::string out = e.receiver.empty() ? "" : e.receiver + ".";
            out += e.text + "(";
            for (size_t i = 0; i < e.parts.size(); ++i) {
                if (i) out += ", ";
                out += render_expr(e.parts[i]);
            }
            return out + ")";
        }
        case Expr::Kind::Other:
            return e.text;
    }
    return "";
}

std::string render_statement(const Statement& s, int indent) {
    std::string pad = indent_str(indent);
    switch (s.kind) {
        case Statement::Kind::Decl: {
            std::string out = pad + s.decl_type + " " + s.var;
            if (s.value) out += " = " + render_expr(*s.value);
            return out + ";\n";
        }
        case Statement::Kind::Assign:
            return pad + s.var + " = " + render_expr(*s.value) + ";\n";
        case Statement::Kind::LogCall:
            return pad + "LOG." + s.log_level + "(" + render_expr(*s.value) + ");\n";
        case Statement::Kind::Invoke: {
            std::string out = pad;
            if (!s.invoke_receiver.empty()) out += s.invoke_receiver + ".";
            out += s.invoke_name + "(";
            for (size_t i = 0; i < s.args.size(); ++i) {
                if (i) out += ", ";
                out += render_expr(s.args[i]);
            }
            return out + ");\n";
        }
        case Statement::Kind::If: {
            std::string out = pad + "if (" + render_expr(s.cond) + ") {\n";
            out += render_block(s.then_block, indent + 1);
            out += pad + "}";
            if (!s.else_block.empty()) {
                out += " else {\n";
                out += render_block(s.else_block, indent + 1);
                out += pad + "}";
            }
            return out + "\n";
        }
        case Statement::Kind::Return: {
            std::string out = pad + "return";
            if (s.value) out += " " + render_expr(*s.value);
            return out + ";\n";
        }
    }
    return "";
}

std::string render_block(const Block& b, int indent) {
    std::string out;
    for (const auto& s : b) out += render_statement(s, indent);
    return out;
}

namespace {

std::string render_doc_comment(const std::string& doc, int indent) {
    std::string pad = indent_str(indent);
    std::string out = pad + "/**\n";
    std::istringstream in(doc);
    std::string line;
    while (std::getline(in, line)) out += pad + " * " + line + "\n";
    out += pad + " */\n";
    return out;
}

std::string render_method(const MethodDecl& m, int indent) {
    std::string pad = indent_str(indent);
    std::string out;
    if (m.doc_comment) out += render_doc_comment(*m.doc_comment, indent);
    out += pad;
    if (!m.is_interface_method) out += "public ";
    out += m.return_type + " " + m.name + "(";
    for (size_t i = 0; i < m.params.size(); ++i) {
        if (i) out += ", ";
        out += m.params[i].type + " " + m.params[i].name;
    }
    out += ")";
    if (m.is_interface_method) return out + ";\n";
    out += " {\n" + render_block(m.body, indent + 1) + pad + "}\n";
    return out;
}

}  // namespace

std::string render_file(const CodeFacts& facts, const std::string& file) {
    // Group methods by class, classes in first-appearance (line) order.
    std::vector<const MethodDecl*> in_file;
    for (const auto& [sig, m] : facts.methods)
        if (m.file == file) in_file.push_back(&m);
    std::sort(in_file.begin(), in_file.end(),
              [](const MethodDecl* a, const MethodDecl* b) {
                  return a->line_span.start < b->line_span.start;
              });
    if (in_file.empty()) return "";

    std::string pkg;
    const std::string& cls = in_file.front()->class_name;
    if (auto pos = cls.rfind('.'); pos != std::string::npos) pkg = cls.substr(0, pos);

    std::string out;
    if (!pkg.empty()) out += "package " + pkg + ";\n\n";

    std::vector<std::string> class_order;
    for (const MethodDecl* m : in_file)
        if (std::find(class_order.begin(), class_order.end(), m->class_name) ==
            class_order.end())
            class_order.push_back(m->class_name);

    for (const auto& cname : class_order) {
        bool iface = false;
        std::vector<const MethodDecl*> members;
        for (const MethodDecl* m : in_file)
            if (m->class_name == cname) {
                members.push_back(m);
                iface = m->is_interface_method;
            }
        auto pos = cname.rfind('.');
        std::string simple = pos == std::string::npos ? cname : cname.substr(pos + 1);
        out += iface ? "public interface " : "public class ";
        out += simple;
        const auto& impls = members.front()->implemented_interfaces_of_class;
        if (!impls.empty()) {
            out += " implements ";
            for (size_t i = 0; i < impls.size(); ++i) {
                if (i) out += ", ";
                out += impls[i];
            }
        }
        out += " {\n";
        for (size_t i = 0; i < members.size(); ++i) {
            if (i) out += "\n";
            out += render_method(*members[i], 1);
        }
        out += "}\n";
    }
    return out;
}

}  // namespace causeway
