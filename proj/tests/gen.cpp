#include "gen.hpp"

#include <set>

#include "causeway/source_parser.hpp"

namespace gen {

using causeway::LogTemplate;
using causeway::Token;

std::string word(Rng& rng) {
    int len = pick(rng, 1, 8);
    std::string w;
    for (int i = 0; i < len; ++i) w += static_cast<char>('a' + pick(rng, 0, 25));
    return w;
}

namespace {

/// Source spelling of a string literal's content (escapes included).
std::string literal_body(Rng& rng) {
    std::string s;
    int pieces = pick(rng, 1, 4);
    for (int i = 0; i < pieces; ++i) {
        if (i) s += ' ';
        switch (pick(rng, 0, 5)) {
            case 0: s += word(rng); break;
            case 1: s += word(rng) + "="; break;
            case 2: s += "(" + word(rng) + ")"; break;
            case 3: s += word(rng) + "."; break;
            case 4: s += std::to_string(pick(rng, 0, 999)); break;
            default: s += word(rng) + ":"; break;
        }
    }
    if (chance(rng, 0.15)) s += "\\n";
    if (chance(rng, 0.10)) s += " \\\"" + word(rng) + "\\\"";
    return s;
}

struct MethodPlan {
    std::string cls;   // simple class name
    std::string name;
    int arity = 0;
};

struct ClassPlan {
    std::string name;
    bool is_interface = false;
    std::string implements;  // simple interface name, or empty
    std::vector<MethodPlan> methods;
};

class SourceGen {
  public:
    explicit SourceGen(Rng& rng) : rng_(rng) {}

    std::vector<std::pair<std::string, std::string>> project() {
        plan();
        std::vector<std::pair<std::string, std::string>> files;
        int per_file = std::max(1, static_cast<int>(classes_.size()) / pick(rng_, 1, 3));
        std::string content;
        int in_file = 0, file_no = 0;
        for (size_t i = 0; i < classes_.size(); ++i) {
            if (in_file == 0)
                content = "package genpkg" + std::to_string(file_no) + ";\n\n";
            emit_class(content, classes_[i]);
            if (++in_file == per_file || i + 1 == classes_.size()) {
                files.push_back({"F" + std::to_string(file_no) + ".java", content});
                ++file_no;
                in_file = 0;
            }
        }
        return files;
    }

  private:
    void plan() {
        int n = pick(rng_, 1, 4);
        for (int c = 0; c < n; ++c) {
            std::string cls = "C" + std::to_string(c);
            if (chance(rng_, 0.35)) {
                ClassPlan iface;
                iface.name = "I" + std::to_string(c);
                iface.is_interface = true;
                int nm = pick(rng_, 1, 2);
                for (int m = 0; m < nm; ++m)
                    iface.methods.push_back(
                        {iface.name, "im" + std::to_string(c) + std::to_string(m),
                         pick(rng_, 0, 2)});
                classes_.push_back(iface);
            }
            ClassPlan cp;
            cp.name = cls;
            if (!classes_.empty() && classes_.back().is_interface &&
                classes_.back().name == "I" + std::to_string(c))
                cp.implements = classes_.back().name;
            int nm = pick(rng_, 1, 3);
            for (int m = 0; m < nm; ++m)
                cp.methods.push_back(
                    {cls, "m" + std::to_string(c) + std::to_string(m), pick(rng_, 0, 3)});
            classes_.push_back(cp);
        }
        for (const ClassPlan& cp : classes_)
            if (!cp.is_interface)
                for (const MethodPlan& mp : cp.methods) callables_.push_back(mp);
    }

    void emit_doc(std::string& out, int indent) {
        std::string pad(static_cast<size_t>(indent) * 4, ' ');
        out += pad + "/**\n";
        int lines = pick(rng_, 1, 3);
        for (int i = 0; i < lines; ++i)
            out += pad + " * " + word(rng_) + " " + word(rng_) + ".\n";
        out += pad + " */\n";
    }

    void emit_class(std::string& out, const ClassPlan& cp) {
        out += std::string("public ") + (cp.is_interface ? "interface " : "class ") +
               cp.name;
        if (!cp.implements.empty()) out += " implements " + cp.implements;
        out += " {\n";
        for (size_t m = 0; m < cp.methods.size(); ++m) {
            if (m) out += "\n";
            emit_method(out, cp, cp.methods[m]);
        }
        out += "}\n\n";
    }

    void emit_method(std::string& out, const ClassPlan& cp, const MethodPlan& mp) {
        if (chance(rng_, 0.4)) emit_doc(out, 1);
        std::vector<std::string> vars;
        std::string header = cp.is_interface ? "    " : "    public ";
        header += chance(rng_, 0.3) ? "void " : "String ";
        header += mp.name + "(";
        for (int a = 0; a < mp.arity; ++a) {
            if (a) header += ", ";
            std::string pname = "p" + std::to_string(a);
            header += "String " + pname;
            vars.push_back(pname);
        }
        header += ")";
        if (cp.is_interface) {
            out += header + ";\n";
            return;
        }
        out += header + " {\n";
        var_counter_ = 0;
        emit_block(out, 2, 0, vars);
        out += "    }\n";
    }

    std::string expr(int depth, const std::vector<std::string>& vars) {
        int c = pick(rng_, 0, depth >= 2 ? 2 : 5);
        switch (c) {
            case 0: return "\"" + literal_body(rng_) + "\"";
            case 1:
                if (!vars.empty()) return vars[static_cast<size_t>(
                    pick(rng_, 0, static_cast<int>(vars.size()) - 1))];
                return "\"" + literal_body(rng_) + "\"";
            case 2: return std::to_string(pick(rng_, 0, 9999));
            case 3: return expr(depth + 1, vars) + " + " + expr(depth + 1, vars);
            case 4: return "(" + expr(depth + 1, vars) + ")";
            default: {
                std::string call = word(rng_) + "(";
                int args = pick(rng_, 0, 2);
                for (int a = 0; a < args; ++a)
                    call += std::string(a ? ", " : "") + expr(depth + 1, vars);
                return call + ")";
            }
        }
    }

    void emit_block(std::string& out, int indent, int depth,
                    std::vector<std::string>& vars) {
        std::string pad(static_cast<size_t>(indent) * 4, ' ');
        int n = pick(rng_, 1, depth == 0 ? 5 : 3);
        for (int i = 0; i < n; ++i) {
            switch (pick(rng_, 0, 9)) {
                case 0:
                case 1: {  // declaration
                    std::string v = "v" + std::to_string(var_counter_++);
                    if (chance(rng_, 0.8))
                        out += pad + "String " + v + " = " + expr(0, vars) + ";\n";
                    else
                        out += pad + "String " + v + ";\n";
                    vars.push_back(v);
                    break;
                }
                case 2:
                case 3: {  // assignment
                    if (vars.empty()) break;
                    const std::string& v = vars[static_cast<size_t>(
                        pick(rng_, 0, static_cast<int>(vars.size()) - 1))];
                    out += pad + v + (chance(rng_, 0.3) ? " += " : " = ") +
                           expr(0, vars) + ";\n";
                    break;
                }
                case 4:
                case 5: {  // logging statement
                    static const char* levels[] = {"trace", "debug", "info",
                                                   "warn",  "error", "fatal"};
                    out += pad + "LOG." + levels[pick(rng_, 0, 5)] + "(" +
                           expr(0, vars) + ");\n";
                    break;
                }
                case 6: {  // invocation
                    const MethodPlan& target = callables_[static_cast<size_t>(
                        pick(rng_, 0, static_cast<int>(callables_.size()) - 1))];
                    std::string stmt;
                    int form = pick(rng_, 0, 3);
                    if (form == 0)
                        stmt = target.name;  // same-class style (may not resolve)
                    else if (form == 1)
                        stmt = "this." + target.name;
                    else if (form == 2)
                        stmt = target.cls + "." + target.name;
                    else
                        stmt = "Unknown.helper";  // never resolves
                    stmt += "(";
                    int args = form == 3 ? pick(rng_, 0, 2) : target.arity;
                    for (int a = 0; a < args; ++a)
                        stmt += std::string(a ? ", " : "") + expr(1, vars);
                    out += pad + stmt + ");\n";
                    break;
                }
                case 7: {  // if statement
                    if (depth >= 2) break;
                    std::string cond =
                        vars.empty() ? word(rng_)
                                     : vars[static_cast<size_t>(pick(
                                           rng_, 0, static_cast<int>(vars.size()) - 1))] +
                                           (chance(rng_, 0.5) ? " == null" : " != null");
                    out += pad + "if (" + cond + ") {\n";
                    std::vector<std::string> inner = vars;
                    emit_block(out, indent + 1, depth + 1, inner);
                    out += pad + "}";
                    if (chance(rng_, 0.5)) {
                        out += " else {\n";
                        std::vector<std::string> inner2 = vars;
                        emit_block(out, indent + 1, depth + 1, inner2);
                        out += pad + "}";
                    }
                    out += "\n";
                    break;
                }
                case 8: {  // return
                    if (chance(rng_, 0.5))
                        out += pad + "return " + expr(0, vars) + ";\n";
                    else
                        out += pad + "return;\n";
                    break;
                }
                default: {  // extra logging with concatenation, the common shape
                    out += pad + "LOG.info(\"" + literal_body(rng_) + "\" + " +
                           expr(1, vars) + ");\n";
                    break;
                }
            }
        }
    }

    Rng& rng_;
    std::vector<ClassPlan> classes_;
    std::vector<MethodPlan> callables_;
    int var_counter_ = 0;
};

}  // namespace

std::vector<std::pair<std::string, std::string>> random_project(Rng& rng) {
    return SourceGen(rng).project();
}

std::string random_idl(Rng& rng) {
    if (chance(rng, 0.3)) return "";
    std::string out = "syntax = \"proto3\";\n\npackage genidl;\n\n";
    out += "message Req {\n  string payload = 1;\n}\n\n";
    out += "message Resp {\n  string payload = 1;\n}\n\n";
    int services = pick(rng, 1, 2);
    for (int s = 0; s < services; ++s) {
        out += "service Svc" + std::to_string(s) + " {\n";
        int rpcs = pick(rng, 1, 3);
        for (int r = 0; r < rpcs; ++r)
            out += "  rpc call" + std::to_string(s) + std::to_string(r) +
                   " (Req) returns (Resp);\n";
        out += "}\n\n";
    }
    return out;
}

causeway::CodeFacts random_facts(Rng& rng) {
    causeway::CodeFacts facts = causeway::parse_source_subset(
        random_project(rng), "v" + std::to_string(pick(rng, 0, 99)));
    std::string idl = random_idl(rng);
    if (!idl.empty())
        facts.idl_services = causeway::parse_idl({{"gen.proto", idl}});
    facts.validate();
    return facts;
}

std::vector<LogTemplate> random_templates(Rng& rng, int count) {
    std::vector<LogTemplate> out;
    for (int i = 0; i < count; ++i) {
        LogTemplate t;
        int len = pick(rng, 1, 7);
        bool prev_wildcard = false;
        for (int k = 0; k < len; ++k) {
            int kind = prev_wildcard ? 0 : pick(rng, 0, 9);
            if (kind <= 6) {
                t.tokens.push_back(Token::word(word(rng)));
                prev_wildcard = false;
            } else if (kind <= 8) {
                t.tokens.push_back(Token::wildcard());
                prev_wildcard = true;
            } else {
                switch (pick(rng, 0, 3)) {
                    case 0: t.tokens.push_back(Token::wildcard(word(rng) + "<*>")); break;
                    case 1: t.tokens.push_back(Token::wildcard("<*>" + word(rng))); break;
                    case 2:
                        t.tokens.push_back(
                            Token::wildcard("(" + word(rng) + "=<*>)"));
                        break;
                    default: t.tokens.push_back(Token::wildcard("<*>.")); break;
                }
                prev_wildcard = true;
            }
        }
        t.origin_signature =
            "genpkg0.C" + std::to_string(pick(rng, 0, 3)) + ".log(String)";
        t.origin_line = pick(rng, 1, 40);
        int branches = pick(rng, 0, 2);
        for (int b = 0; b < branches; ++b)
            t.branch_path.push_back(
                {t.origin_signature + "#" + std::to_string(b), chance(rng, 0.5)});
        for (const Token& tok : t.tokens)
            if (tok.kind == Token::Kind::Static)
                t.static_char_count += static_cast<int>(tok.text.size());
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<std::string> message_from(Rng& rng, const LogTemplate& t) {
    std::vector<std::string> msg;
    for (const Token& tok : t.tokens) {
        if (tok.kind == Token::Kind::Static) {
            msg.push_back(tok.text);
            continue;
        }
        if (tok.text != "<*>") {
            // Decorated: fill the hole inside the decorated word.
            std::string filled;
            size_t pos = 0, hole;
            while ((hole = tok.text.find("<*>", pos)) != std::string::npos) {
                filled += tok.text.substr(pos, hole - pos);
                filled += word(rng);
                pos = hole + 3;
            }
            filled += tok.text.substr(pos);
            msg.push_back(filled);
            continue;
        }
        int n = pick(rng, 1, 3);
        for (int i = 0; i < n; ++i) msg.push_back(word(rng));
    }
    return msg;
}

std::vector<std::string> random_message(Rng& rng) {
    std::vector<std::string> msg;
    int n = pick(rng, 0, 8);
    for (int i = 0; i < n; ++i) msg.push_back(word(rng));
    return msg;
}

std::vector<std::pair<std::string, std::string>> random_edges(Rng& rng, int nodes,
                                                              double density) {
    std::vector<std::pair<std::string, std::string>> out;
    for (int a = 0; a < nodes; ++a)
        for (int b = 0; b < nodes; ++b) {
            if (a == b) continue;
            if (chance(rng, density))
                out.push_back({"n" + std::to_string(a), "n" + std::to_string(b)});
        }
    return out;
}

}  // namespace gen
