#include "causeway/source_parser.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <tuple>

namespace causeway {
namespace {

// ---------------------------------------------------------------------------
// Lexing (shared by the source-subset and proto-subset parsers)

struct Lexeme {
    enum class Kind { Ident, Str, Int, Punct, Doc, End };
    Kind kind = Kind::End;
    std::string text;  // Ident: name; Str: unescaped value; Punct: operator;
                       // Doc: stripped comment body
    std::string raw;   // exact source spelling (Str keeps quotes and escapes)
    int line = 1;
};

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

/// Strips the doc-comment body: per line, trailing whitespace, leading
/// whitespace, a leading '*', and one space after it; then drops blank lines
/// at both ends. `inner` is the text between "/**" and "*/".
std::string strip_doc(const std::string& inner) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : inner) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    lines.push_back(cur);
    for (auto& t : lines) {
        while (!t.empty() && (t.back() == ' ' || t.back() == '\t' || t.back() == '\r'))
            t.pop_back();
        size_t i = 0;
        while (i < t.size() && (t[i] == ' ' || t[i] == '\t')) ++i;
        t.erase(0, i);
        if (!t.empty() && t[0] == '*') {
            t.erase(0, 1);
            if (!t.empty() && t[0] == ' ') t.erase(0, 1);
        }
    }
    size_t first = 0, last = lines.size();
    while (first < last && lines[first].empty()) ++first;
    while (last > first && lines[last - 1].empty()) --last;
    std::string out;
    for (size_t i = first; i < last; ++i) {
        if (i > first) out += '\n';
        out += lines[i];
    }
    return out;
}

class Lexer {
  public:
    Lexer(std::string path, const std::string& src) : path_(std::move(path)), src_(src) {}

    std::vector<Lexeme> run() {
        std::vector<Lexeme> out;
        while (true) {
            skip_trivia(out);
            if (pos_ >= src_.size()) break;
            char c = src_[pos_];
            if (c == '"')
                out.push_back(lex_string());
            else if (is_digit(c))
                out.push_back(lex_int());
            else if (is_ident_start(c))
                out.push_back(lex_ident());
            else
                out.push_back(lex_punct());
        }
        out.push_back({Lexeme::Kind::End, "", "", line_});
        return out;
    }

  private:
    [[noreturn]] void fail(int line, const std::string& expected) const {
        throw SyntaxError(path_, line, expected);
    }

    void skip_trivia(std::vector<Lexeme>& out) {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\r') {
                ++pos_;
            } else if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
            } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
                int start_line = line_;
                size_t start = pos_;
                pos_ += 2;
                size_t close = src_.find("*/", pos_);
                if (close == std::string::npos) fail(start_line, "closing */");
                std::string inner = src_.substr(pos_, close - pos_);
                line_ += static_cast<int>(std::count(inner.begin(), inner.end(), '\n'));
                pos_ = close + 2;
                if (!inner.empty() && inner[0] == '*') {
                    Lexeme doc;
                    doc.kind = Lexeme::Kind::Doc;
                    doc.text = strip_doc(inner.substr(1));
                    doc.raw = src_.substr(start, pos_ - start);
                    doc.line = start_line;
                    out.push_back(std::move(doc));
                }
            } else {
                break;
            }
        }
    }

    Lexeme lex_string() {
        Lexeme t;
        t.kind = Lexeme::Kind::Str;
        t.line = line_;
        size_t start = pos_;
        ++pos_;  // opening quote
        while (true) {
            if (pos_ >= src_.size() || src_[pos_] == '\n')
                fail(t.line, "closing '\"' on the same line");
            char c = src_[pos_];
            if (c == '"') {
                ++pos_;
                break;
            }
            if (c == '\\') {
                if (pos_ + 1 >= src_.size()) fail(t.line, "an escape sequence");
                char e = src_[pos_ + 1];
                switch (e) {
                    case 'n': t.text += '\n'; break;
                    case 't': t.text += '\t'; break;
                    case 'r': t.text += '\r'; break;
                    case 'b': t.text += '\b'; break;
                    case 'f': t.text += '\f'; break;
                    case '0': t.text += '\0'; break;
                    case '\\': t.text += '\\'; break;
                    case '"': t.text += '"'; break;
                    case '\'': t.text += '\''; break;
                    default: fail(t.line, "a valid escape sequence");
                }
                pos_ += 2;
            } else {
                t.text += c;
                ++pos_;
            }
        }
        t.raw = src_.substr(start, pos_ - start);
        return t;
    }

    Lexeme lex_int() {
        Lexeme t;
        t.kind = Lexeme::Kind::Int;
        t.line = line_;
        while (pos_ < src_.size() && is_digit(src_[pos_])) t.text += src_[pos_++];
        t.raw = t.text;
        return t;
    }

    Lexeme lex_ident() {
        Lexeme t;
        t.kind = Lexeme::Kind::Ident;
        t.line = line_;
        while (pos_ < src_.size() && is_ident_char(src_[pos_])) t.text += src_[pos_++];
        t.raw = t.text;
        return t;
    }

    Lexeme lex_punct() {
        static const char* kTwoChar[] = {"==", "!=", "<=", ">=", "&&", "||", "+="};
        static const std::string kSingle = "{}();,.=+<>!&|-*/%[]:?";
        Lexeme t;
        t.kind = Lexeme::Kind::Punct;
        t.line = line_;
        if (pos_ + 1 < src_.size()) {
            std::string two = src_.substr(pos_, 2);
            for (const char* op : kTwoChar) {
                if (two == op) {
                    t.text = two;
                    t.raw = two;
                    pos_ += 2;
                    return t;
                }
            }
        }
        if (kSingle.find(src_[pos_]) == std::string::npos)
            fail(line_, "a token of the source subset");
        t.text = std::string(1, src_[pos_]);
        t.raw = t.text;
        ++pos_;
        return t;
    }

    std::string path_;
    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1;
};

// ---------------------------------------------------------------------------
// Parser base: token cursor shared by the two grammars

class ParserBase {
  protected:
    ParserBase(std::string path, std::vector<Lexeme> toks)
        : path_(std::move(path)), toks_(std::move(toks)) {}

    const Lexeme& cur() const { return peek(0); }
    const Lexeme& peek(size_t k) const {
        size_t i = pos_ + k;
        if (i >= toks_.size()) i = toks_.size() - 1;  // End sentinel
        return toks_[i];
    }
    void advance() {
        if (pos_ + 1 < toks_.size()) ++pos_;
    }
    bool at_end() const { return cur().kind == Lexeme::Kind::End; }
    bool at_punct(const char* p) const {
        return cur().kind == Lexeme::Kind::Punct && cur().text == p;
    }
    bool at_ident(const char* name) const {
        return cur().kind == Lexeme::Kind::Ident && cur().text == name;
    }
    [[noreturn]] void fail(const std::string& expected) const {
        throw SyntaxError(path_, cur().line, expected);
    }
    void expect_punct(const char* p, const std::string& expected) {
        if (!at_punct(p)) fail(expected);
        advance();
    }
    std::string expect_ident(const std::string& expected) {
        if (cur().kind != Lexeme::Kind::Ident) fail(expected);
        std::string name = cur().text;
        advance();
        return name;
    }
    std::string parse_dotted(const std::string& expected) {
        std::string name = expect_ident(expected);
        while (at_punct(".")) {
            advance();
            name += '.';
            name += expect_ident("an identifier after '.'");
        }
        return name;
    }

    std::string path_;
    std::vector<Lexeme> toks_;
    size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Source-subset parser

bool is_modifier(const Lexeme& t) {
    static const std::set<std::string> kMods = {"public", "private",   "protected",
                                               "static", "final",     "synchronized",
                                               "abstract"};
    return t.kind == Lexeme::Kind::Ident && kMods.count(t.text) > 0;
}

bool is_log_level(const std::string& s) {
    static const std::set<std::string> kLevels = {"trace", "debug", "info",
                                                  "warn",  "error", "fatal"};
    return kLevels.count(s) > 0;
}

class SourceParser : public ParserBase {
  public:
    SourceParser(std::string path, std::vector<Lexeme> toks)
        : ParserBase(std::move(path), std::move(toks)) {}

    std::vector<MethodDecl> parse_file() {
        while (cur().kind == Lexeme::Kind::Doc) advance();  // file-head comment
        if (at_ident("package")) {
            advance();
            package_ = parse_dotted("a package name");
            expect_punct(";", "';' after the package declaration");
        }
        std::vector<MethodDecl> out;
        while (!at_end()) parse_class(out);
        return out;
    }

  private:
    void parse_class(std::vector<MethodDecl>& out) {
        while (cur().kind == Lexeme::Kind::Doc) advance();  // class docs not modeled
        if (at_ident("public")) advance();
        bool iface = false;
        if (at_ident("interface")) {
            iface = true;
            advance();
        } else if (at_ident("class")) {
            advance();
        } else {
            fail("'class' or 'interface'");
        }
        std::string simple = expect_ident("a class name");
        std::string fq = package_.empty() ? simple : package_ + "." + simple;
        std::vector<std::string> impls;
        if (at_ident("implements")) {
            advance();
            while (true) {
                std::string n = parse_dotted("an interface name");
                // Same-package shorthand: a simple name is qualified with the
                // file's package (the subset has no import statements).
                if (n.find('.') == std::string::npos && !package_.empty())
                    n = package_ + "." + n;
                impls.push_back(std::move(n));
                if (!at_punct(",")) break;
                advance();
            }
        }
        expect_punct("{", "'{' to open the class body");
        while (!at_punct("}")) {
            if (at_end()) fail("'}' to close the class body");
            std::optional<std::string> doc;
            while (cur().kind == Lexeme::Kind::Doc) {
                doc = cur().text;
                advance();
            }
            out.push_back(parse_method(fq, iface, impls, std::move(doc)));
        }
        advance();  // '}'
    }

    MethodDecl parse_method(const std::string& cls, bool iface,
                            const std::vector<std::string>& impls,
                            std::optional<std::string> doc) {
        int start_line = cur().line;
        while (is_modifier(cur())) advance();
        std::string ret = parse_dotted("a return type");
        std::string name = expect_ident("a method name");
        expect_punct("(", "'(' to open the parameter list");
        std::vector<Param> params;
        if (!at_punct(")")) {
            while (true) {
                std::string ptype = parse_dotted("a parameter type");
                std::string pname = expect_ident("a parameter name");
                params.push_back({std::move(ptype), std::move(pname)});
                if (!at_punct(",")) break;
                advance();
            }
        }
        expect_punct(")", "')' to close the parameter list");

        MethodDecl m;
        m.name = name;
        m.class_name = cls;
        m.file = path_;
        m.doc_comment = std::move(doc);
        m.return_type = ret;
        m.params = params;
        m.is_interface_method = iface;
        m.implemented_interfaces_of_class = impls;
        std::string sig = cls + "." + name + "(";
        for (size_t i = 0; i < params.size(); ++i) {
            if (i) sig += ',';
            sig += params[i].type;
        }
        m.signature = sig + ")";

        if (iface) {
            int end_line = cur().line;
            expect_punct(";", "';' after an interface method");
            m.line_span = {start_line, end_line};
        } else {
            expect_punct("{", "'{' to open the method body");
            m.body = parse_block();
            int end_line = cur().line;
            expect_punct("}", "'}' to close the method body");
            m.line_span = {start_line, end_line};
        }
        return m;
    }

    Block parse_block() {
        Block b;
        while (!at_punct("}")) {
            if (at_end()) fail("'}' to close the block");
            b.push_back(parse_statement());
        }
        return b;
    }

    Statement parse_statement() {
        if (cur().kind != Lexeme::Kind::Ident) fail("a statement");
        if (at_ident("if")) return parse_if();
        if (at_ident("return")) return parse_return();
        if (at_ident("LOG") && peek(1).kind == Lexeme::Kind::Punct && peek(1).text == ".")
            return parse_log_call();
        return parse_decl_assign_or_invoke();
    }

    Statement parse_if() {
        Statement s;
        s.kind = Statement::Kind::If;
        s.line = cur().line;
        advance();  // if
        expect_punct("(", "'(' after if");
        s.cond = parse_condition();
        expect_punct(")", "')' to close the condition");
        expect_punct("{", "'{' to open the then branch");
        s.then_block = parse_block();
        expect_punct("}", "'}' to close the then branch");
        if (at_ident("else")) {
            advance();
            if (at_punct("{")) {
                advance();
                s.else_block = parse_block();
                expect_punct("}", "'}' to close the else branch");
            } else if (at_ident("if")) {
                s.else_block.push_back(parse_if());
            } else {
                fail("'{' or 'if' after else");
            }
        }
        return s;
    }

    /// Conditions are opaque: the balanced token run up to the closing ')'
    /// is stored as Other text, tokens joined by single spaces (a canonical
    /// form that re-lexes to the same token sequence).
    Expr parse_condition() {
        int start_line = cur().line;
        std::string text;
        int depth = 0;
        while (true) {
            if (at_end()) throw SyntaxError(path_, start_line, "')' to close the condition");
            if (at_punct("(")) {
                ++depth;
            } else if (at_punct(")")) {
                if (depth == 0) break;
                --depth;
            }
            if (!text.empty()) text += ' ';
            text += cur().raw;
            advance();
        }
        if (text.empty()) fail("a condition expression");
        return Expr::other(text);
    }

    Statement parse_return() {
        Statement s;
        s.kind = Statement::Kind::Return;
        s.line = cur().line;
        advance();  // return
        if (!at_punct(";")) s.value = parse_expr();
        expect_punct(";", "';' after return");
        return s;
    }

    Statement parse_log_call() {
        Statement s;
        s.kind = Statement::Kind::LogCall;
        s.line = cur().line;
        advance();  // LOG
        advance();  // .
        int level_line = cur().line;
        std::string level = expect_ident("a log level");
        if (!is_log_level(level))
            throw SyntaxError(path_, level_line,
                              "a log level (trace|debug|info|warn|error|fatal)");
        s.log_level = level;
        expect_punct("(", "'(' after the log level");
        s.value = parse_expr();
        expect_punct(")", "')' to close the log call");
        expect_punct(";", "';' after the log call");
        return s;
    }

    Statement parse_decl_assign_or_invoke() {
        Statement s;
        s.line = cur().line;
        std::vector<std::string> segs;
        segs.push_back(expect_ident("a statement"));
        while (at_punct(".")) {
            advance();
            segs.push_back(expect_ident("an identifier after '.'"));
        }

        if (cur().kind == Lexeme::Kind::Ident) {  // `Type name [= expr];`
            s.kind = Statement::Kind::Decl;
            s.decl_type = join_segments(segs, segs.size());
            s.var = expect_ident("a variable name");
            if (at_punct("=")) {
                advance();
                s.value = parse_expr();
            }
            expect_punct(";", "';' after the declaration");
            return s;
        }

        if (at_punct("(")) {  // `receiver.name(args);`
            s.kind = Statement::Kind::Invoke;
            s.invoke_name = segs.back();
            s.invoke_receiver = join_segments(segs, segs.size() - 1);
            advance();  // (
            s.args = parse_args();
            while (at_punct(".")) {  // chained call: fold into opaque receiver
                Expr inner = Expr::call(s.invoke_name, s.args, s.invoke_receiver);
                advance();
                std::string nm = expect_ident("a method name after '.'");
                expect_punct("(", "'(' to open the argument list");
                std::vector<Expr> args = parse_args();
                s.invoke_receiver = render_expr(inner);
                s.invoke_name = std::move(nm);
                s.args = std::move(args);
            }
            expect_punct(";", "';' after the invocation");
            return s;
        }

        if (at_punct("=") || at_punct("+=")) {
            if (segs.size() != 1) fail("a simple variable on the left of the assignment");
            s.kind = Statement::Kind::Assign;
            s.var = segs[0];
            bool plus = at_punct("+=");
            advance();
            Expr rhs = parse_expr();
            s.value = plus ? Expr::concat(Expr::var(s.var), std::move(rhs))
                           : std::move(rhs);
            expect_punct(";", "';' after the assignment");
            return s;
        }

        fail("a declaration, assignment, or invocation");
    }

    std::vector<Expr> parse_args() {  // caller consumed '('
        std::vector<Expr> args;
        if (!at_punct(")")) {
            while (true) {
                args.push_back(parse_expr());
                if (!at_punct(",")) break;
                advance();
            }
        }
        expect_punct(")", "')' to close the argument list");
        return args;
    }

    Expr parse_expr() {
        Expr lhs = parse_term();
        while (at_punct("+")) {
            advance();
            Expr rhs = parse_term();
            lhs = Expr::concat(std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    Expr parse_term() {
        const Lexeme& t = cur();
        if (t.kind == Lexeme::Kind::Str) {
            Expr e = Expr::str(t.text);
            advance();
            return e;
        }
        // Int and bool literals fold to their Java string form: the subset
        // models string construction, where `"x" + 5` contributes "5".
        if (t.kind == Lexeme::Kind::Int) {
            Expr e = Expr::str(t.text);
            advance();
            return e;
        }
        if (at_punct("(")) {
            advance();
            Expr e = parse_expr();
            expect_punct(")", "')' to close the group");
            return e;
        }
        if (t.kind == Lexeme::Kind::Ident) {
            if (t.text == "true" || t.text == "false") {
                Expr e = Expr::str(t.text);
                advance();
                return e;
            }
            std::vector<std::string> segs;
            segs.push_back(expect_ident("an expression"));
            while (at_punct(".")) {
                advance();
                segs.push_back(expect_ident("an identifier after '.'"));
            }
            if (at_punct("(")) {
                advance();
                Expr e = Expr::call(segs.back(), parse_args(),
                                    join_segments(segs, segs.size() - 1));
                while (at_punct(".")) {  // chained call on a call result
                    advance();
                    std::string nm = expect_ident("a method name after '.'");
                    expect_punct("(", "'(' to open the argument list");
                    std::vector<Expr> args = parse_args();
                    e = Expr::call(std::move(nm), std::move(args), render_expr(e));
                }
                return e;
            }
            return Expr::var(join_segments(segs, segs.size()));
        }
        fail("an expression");
    }

    static std::string join_segments(const std::vector<std::string>& segs, size_t n) {
        std::string out;
        for (size_t i = 0; i < n; ++i) {
            if (i) out += '.';
            out += segs[i];
        }
        return out;
    }

    std::string package_;
};

// ---------------------------------------------------------------------------
// Call resolution (single-threaded pass over the merged method map)

struct ClassIndex {
    std::map<std::string, std::vector<const MethodDecl*>> by_class;
    std::map<std::string, std::set<std::string>> simple_to_full;
    std::map<std::string, std::vector<const MethodDecl*>> by_method_name;
};

ClassIndex build_class_index(const CodeFacts& facts) {
    ClassIndex idx;
    for (const auto& [sig, m] : facts.methods) {
        idx.by_class[m.class_name].push_back(&m);
        idx.simple_to_full[m.simple_class_name()].insert(m.class_name);
        idx.by_method_name[m.name].push_back(&m);
    }
    return idx;
}

/// Resolves `name` to a class: exact class_name match first, then a unique
/// simple-name match; "" when neither applies.
std::string resolve_class_name(const ClassIndex& idx, const std::string& name) {
    if (idx.by_class.count(name)) return name;
    if (name.find('.') == std::string::npos) {
        auto it = idx.simple_to_full.find(name);
        if (it != idx.simple_to_full.end() && it->second.size() == 1)
            return *it->second.begin();
    }
    return "";
}

std::vector<std::string> candidates_in_class(const ClassIndex& idx,
                                             const std::string& cls,
                                             const std::string& name, size_t arity) {
    std::vector<std::string> out;
    auto it = idx.by_class.find(cls);
    if (it == idx.by_class.end()) return out;
    for (const MethodDecl* m : it->second)
        if (m->name == name && m->params.size() == arity) out.push_back(m->signature);
    return out;
}

std::vector<std::string> candidates_global(const ClassIndex& idx,
                                           const std::string& name, size_t arity) {
    std::vector<std::string> out;
    auto it = idx.by_method_name.find(name);
    if (it == idx.by_method_name.end()) return out;
    for (const MethodDecl* m : it->second)
        if (m->params.size() == arity) out.push_back(m->signature);
    return out;
}

void collect_local_types(const Block& b, std::map<std::string, std::string>& types) {
    for (const Statement& s : b) {
        if (s.kind == Statement::Kind::Decl) {
            auto it = types.find(s.var);
            if (it == types.end())
                types[s.var] = s.decl_type;
            else if (it->second != s.decl_type)
                it->second.clear();  // conflicting re-declaration: type unknown
        } else if (s.kind == Statement::Kind::If) {
            collect_local_types(s.then_block, types);
            collect_local_types(s.else_block, types);
        }
    }
}

/// Name+arity dispatch: receiver as class, receiver as typed local, then
/// same-class for unqualified calls, then a globally unique match. Anything
/// still ambiguous stays unresolved.
std::string resolve_invoke(const ClassIndex& idx, const MethodDecl& caller,
                           const std::map<std::string, std::string>& locals,
                           const Statement& st) {
    size_t arity = st.args.size();
    const std::string& recv = st.invoke_receiver;

    if (recv.empty() || recv == "this") {
        auto c = candidates_in_class(idx, caller.class_name, st.invoke_name, arity);
        if (c.size() == 1) return c[0];
        if (c.size() > 1) return "";  // same-class arity clash
        if (recv.empty()) {
            auto g = candidates_global(idx, st.invoke_name, arity);
            if (g.size() == 1) return g[0];
        }
        return "";
    }

    std::string cls = resolve_class_name(idx, recv);
    if (!cls.empty()) {
        auto c = candidates_in_class(idx, cls, st.invoke_name, arity);
        if (c.size() == 1) return c[0];
        if (c.size() > 1) return "";
    }

    auto lt = locals.find(recv);
    if (lt != locals.end() && !lt->second.empty()) {
        std::string vcls = resolve_class_name(idx, lt->second);
        if (!vcls.empty()) {
            auto c = candidates_in_class(idx, vcls, st.invoke_name, arity);
            if (c.size() == 1) return c[0];
            if (c.size() > 1) return "";
        }
    }

    auto g = candidates_global(idx, st.invoke_name, arity);
    if (g.size() == 1) return g[0];
    return "";
}

void resolve_block(Block& b, const ClassIndex& idx, const MethodDecl& caller,
                   const std::map<std::string, std::string>& locals,
                   std::vector<CallEdge>& edges) {
    for (Statement& s : b) {
        if (s.kind == Statement::Kind::Invoke) {
            std::string target = resolve_invoke(idx, caller, locals, s);
            s.callee_signature = target;
            CallEdge e;
            e.caller = caller.signature;
            e.kind = CallEdge::Kind::Static;
            e.call_site_line = s.line;
            if (!target.empty()) {
                e.callee = target;
                e.resolved = true;
            } else {
                e.callee = s.invoke_receiver.empty()
                               ? s.invoke_name
                               : s.invoke_receiver + "." + s.invoke_name;
                e.resolved = false;
            }
            edges.push_back(std::move(e));
        } else if (s.kind == Statement::Kind::If) {
            resolve_block(s.then_block, idx, caller, locals, edges);
            resolve_block(s.else_block, idx, caller, locals, edges);
        }
    }
}

void resolve_calls(CodeFacts& facts) {
    ClassIndex idx = build_class_index(facts);
    std::vector<CallEdge> edges;
    for (auto& [sig, m] : facts.methods) {
        std::map<std::string, std::string> locals;
        for (const Param& p : m.params) locals[p.name] = p.type;
        collect_local_types(m.body, locals);
        resolve_block(m.body, idx, m, locals, edges);
    }
    // Drop exact duplicate (caller, callee, line) triples, keeping first.
    std::set<std::tuple<std::string, std::string, int>> seen;
    std::vector<CallEdge> unique;
    unique.reserve(edges.size());
    for (auto& e : edges)
        if (seen.insert({e.caller, e.callee, e.call_site_line}).second)
            unique.push_back(std::move(e));
    facts.call_edges = std::move(unique);
}

// ---------------------------------------------------------------------------
// Proto-subset parser

class IdlParser : public ParserBase {
  public:
    IdlParser(std::string path, std::vector<Lexeme> toks)
        : ParserBase(std::move(path), std::move(toks)) {}

    void parse_into(std::vector<IdlService>& out) {
        while (!at_end()) {
            if (cur().kind == Lexeme::Kind::Doc) {
                advance();
            } else if (at_ident("syntax")) {
                advance();
                expect_punct("=", "'=' after syntax");
                if (cur().kind != Lexeme::Kind::Str) fail("a syntax string");
                advance();
                expect_punct(";", "';' after the syntax declaration");
            } else if (at_ident("package")) {
                advance();
                parse_dotted("a package name");
                expect_punct(";", "';' after the package declaration");
            } else if (at_ident("import")) {
                advance();
                if (at_ident("public")) advance();
                if (cur().kind != Lexeme::Kind::Str) fail("an import path string");
                advance();
                expect_punct(";", "';' after the import");
            } else if (at_ident("option")) {
                advance();
                while (!at_punct(";")) {
                    if (at_end()) fail("';' after the option");
                    advance();
                }
                advance();
            } else if (at_ident("message") || at_ident("enum")) {
                advance();
                expect_ident("a message name");
                skip_braces();
            } else if (at_ident("service")) {
                out.push_back(parse_service());
            } else {
                fail("'service', 'message', 'enum', 'syntax', 'package', 'import', or "
                     "'option'");
            }
        }
    }

  private:
    void skip_braces() {
        expect_punct("{", "'{'");
        int depth = 1;
        while (depth > 0) {
            if (at_end()) fail("'}'");
            if (at_punct("{")) ++depth;
            if (at_punct("}")) --depth;
            advance();
        }
    }

    IdlService parse_service() {
        advance();  // service
        IdlService svc;
        svc.service_name = expect_ident("a service name");
        svc.source_file = path_;
        expect_punct("{", "'{' to open the service body");
        while (!at_punct("}")) {
            if (at_end()) fail("'}' to close the service body");
            if (cur().kind == Lexeme::Kind::Doc) {
                advance();
                continue;
            }
            if (!at_ident("rpc")) fail("'rpc'");
            int line = cur().line;
            advance();
            RpcMethod rm;
            rm.rpc_name = expect_ident("an rpc name");
            expect_punct("(", "'(' before the request type");
            if (at_ident("stream")) advance();
            rm.request_type = parse_dotted("a request type");
            expect_punct(")", "')' after the request type");
            if (!at_ident("returns")) fail("'returns'");
            advance();
            expect_punct("(", "'(' before the response type");
            if (at_ident("stream")) advance();
            rm.response_type = parse_dotted("a response type");
            expect_punct(")", "')' after the response type");
            if (at_punct("{")) {
                advance();
                expect_punct("}", "'}' (rpc options are not supported)");
            } else {
                expect_punct(";", "';' after the rpc declaration");
            }
            for (const auto& prev : svc.rpc_methods)
                if (prev.rpc_name == rm.rpc_name)
                    throw SyntaxError(path_, line,
                                      "a distinct rpc name ('" + rm.rpc_name +
                                          "' repeats in service " + svc.service_name +
                                          ")");
            svc.rpc_methods.push_back(std::move(rm));
        }
        advance();  // '}'
        return svc;
    }
};

std::vector<MethodDecl> parse_one_source(const SourceFile& f) {
    SourceParser p(f.first, Lexer(f.first, f.second).run());
    return p.parse_file();
}

}  // namespace

CodeFacts parse_source_subset(const std::vector<SourceFile>& files,
                              const std::string& project_version) {
    std::vector<std::vector<MethodDecl>> per_file(files.size());
    if (files.size() > 1) {
        std::vector<std::future<std::vector<MethodDecl>>> futs;
        futs.reserve(files.size());
        for (const auto& f : files)
            futs.push_back(
                std::async(std::launch::async, [&f] { return parse_one_source(f); }));
        for (size_t i = 0; i < futs.size(); ++i) per_file[i] = futs[i].get();
    } else if (files.size() == 1) {
        per_file[0] = parse_one_source(files[0]);
    }

    CodeFacts facts;
    facts.project_version = project_version;
    for (auto& methods : per_file)
        for (auto& m : methods) {
            if (facts.methods.count(m.signature)) throw DuplicateSignature(m.signature);
            std::string sig = m.signature;
            facts.methods.emplace(std::move(sig), std::move(m));
        }
    resolve_calls(facts);
    facts.reindex_logging_statements();
    facts.validate();
    return facts;
}

std::vector<IdlService> parse_idl(const std::vector<SourceFile>& files) {
    std::vector<IdlService> out;
    for (const auto& f : files) {
        IdlParser p(f.first, Lexer(f.first, f.second).run());
        p.parse_into(out);
    }
    return out;
}

}  // namespace causeway
