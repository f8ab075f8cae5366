#include "ldsim/sparql/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <unordered_map>

#include "ldsim/rdf/io.hpp"
#include "ldsim/rdf/vocab.hpp"

namespace ldsim::sparql {
namespace {

enum class Tok { End, Iri, PName, Blank, Var, String, LangTag, Integer, Decimal, Double, Word, Punct };

struct Token {
    Tok type = Tok::End;
    std::string text;
    std::size_t line = 0, col = 0;
};

bool name_char(char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '-' || u >= 0x80;
}

std::string upper(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : s_(text) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_ws();
            Token t;
            t.line = line_;
            t.col = col_;
            if (pos_ >= s_.size()) {
                out.push_back(t);
                return out;
            }
            lex_one(t);
            out.push_back(std::move(t));
        }
    }

private:
    char peek(std::size_t k = 0) const { return pos_ + k < s_.size() ? s_[pos_ + k] : '\0'; }
    char get() {
        char c = s_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }
    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, line_, col_); }

    void skip_ws() {
        while (pos_ < s_.size()) {
            char c = peek();
            if (c == '#') {
                while (pos_ < s_.size() && peek() != '\n') get();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                get();
            } else {
                break;
            }
        }
    }

    bool looks_like_iri() const {
        // '<' starts an IRI when a '>' follows before any whitespace.
        for (std::size_t i = pos_ + 1; i < s_.size(); ++i) {
            char c = s_[i];
            if (c == '>') return true;
            if (std::isspace(static_cast<unsigned char>(c)) || c == '<' || c == '"' || c == '{' || c == '}') return false;
        }
        return false;
    }

    void lex_one(Token& t) {
        char c = peek();
        if (c == '<' && looks_like_iri()) {
            get();
            while (peek() != '>') t.text.push_back(get());
            get();
            t.type = Tok::Iri;
            return;
        }
        if ((c == '?' || c == '$') && name_char(peek(1))) {
            get();
            while (name_char(peek()) && peek() != '-') t.text.push_back(get());
            t.type = Tok::Var;
            return;
        }
        if (c == '_' && peek(1) == ':') {
            get();
            get();
            while (name_char(peek()) || (peek() == '.' && name_char(peek(1)))) t.text.push_back(get());
            if (t.text.empty()) fail("empty blank node label");
            t.type = Tok::Blank;
            return;
        }
        if (c == '"' || c == '\'') {
            lex_string(t);
            return;
        }
        if (c == '@') {
            get();
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-') t.text.push_back(get());
            if (t.text.empty()) fail("empty language tag");
            t.type = Tok::LangTag;
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
            lex_number(t);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == ':' || static_cast<unsigned char>(c) >= 0x80) {
            while (name_char(peek()) || (peek() == '.' && name_char(peek(1)))) t.text.push_back(get());
            if (peek() == ':') {
                t.text.push_back(get());
                while (name_char(peek()) || peek() == ':' || peek() == '%' ||
                       (peek() == '.' && (name_char(peek(1)) || peek(1) == ':')))
                    t.text.push_back(get());
                t.type = Tok::PName;
            } else {
                t.type = Tok::Word;
            }
            return;
        }
        static const char* two[] = {"^^", "!=", "<=", ">=", "&&", "||"};
        for (const char* op : two) {
            if (c == op[0] && peek(1) == op[1]) {
                get();
                get();
                t.text = op;
                t.type = Tok::Punct;
                return;
            }
        }
        if (std::string_view("{}()[].;,^/+*?|!=<>-").find(c) != std::string_view::npos) {
            t.text = std::string(1, get());
            t.type = Tok::Punct;
            return;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    std::uint32_t hex(int n) {
        std::uint32_t v = 0;
        for (int i = 0; i < n; ++i) {
            char c = get();
            v <<= 4;
            if (c >= '0' && c <= '9') v |= c - '0';
            else if (c >= 'a' && c <= 'f') v |= c - 'a' + 10;
            else if (c >= 'A' && c <= 'F') v |= c - 'A' + 10;
            else fail("invalid hex escape");
        }
        return v;
    }

    void lex_string(Token& t) {
        char q = get();
        bool long_form = peek() == q && peek(1) == q;
        if (long_form) {
            get();
            get();
        }
        while (true) {
            if (pos_ >= s_.size()) fail("unterminated string");
            char c = peek();
            if (long_form && c == q && peek(1) == q && peek(2) == q) {
                get();
                get();
                get();
                break;
            }
            if (!long_form && c == q) {
                get();
                break;
            }
            if (!long_form && c == '\n') fail("newline in string");
            get();
            if (c != '\\') {
                t.text.push_back(c);
                continue;
            }
            char e = get();
            switch (e) {
                case 't': t.text.push_back('\t'); break;
                case 'n': t.text.push_back('\n'); break;
                case 'r': t.text.push_back('\r'); break;
                case 'b': t.text.push_back('\b'); break;
                case 'f': t.text.push_back('\f'); break;
                case '"': t.text.push_back('"'); break;
                case '\'': t.text.push_back('\''); break;
                case '\\': t.text.push_back('\\'); break;
                case 'u':
                case 'U': {
                    std::uint32_t cp = hex(e == 'u' ? 4 : 8);
                    if (cp < 0x80) t.text.push_back(static_cast<char>(cp));
                    else if (cp < 0x800) {
                        t.text.push_back(static_cast<char>(0xC0 | (cp >> 6)));
                        t.text.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
                    } else if (cp < 0x10000) {
                        t.text.push_back(static_cast<char>(0xE0 | (cp >> 12)));
                        t.text.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
                        t.text.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
                    } else {
                        t.text.push_back(static_cast<char>(0xF0 | (cp >> 18)));
                        t.text.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
                        t.text.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
                        t.text.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
                    }
                    break;
                }
                default: fail("invalid string escape");
            }
        }
        t.type = Tok::String;
    }

    void lex_number(Token& t) {
        t.type = Tok::Integer;
        while (std::isdigit(static_cast<unsigned char>(peek()))) t.text.push_back(get());
        if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
            t.type = Tok::Decimal;
            t.text.push_back(get());
            while (std::isdigit(static_cast<unsigned char>(peek()))) t.text.push_back(get());
        }
        if (peek() == 'e' || peek() == 'E') {
            t.type = Tok::Double;
            t.text.push_back(get());
            if (peek() == '+' || peek() == '-') t.text.push_back(get());
            if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("malformed exponent");
            while (std::isdigit(static_cast<unsigned char>(peek()))) t.text.push_back(get());
        }
    }

    std::string_view s_;
    std::size_t pos_ = 0, line_ = 1, col_ = 1;
};

const std::set<std::string> kAggregates = {"COUNT", "SUM", "MIN", "MAX", "AVG", "SAMPLE", "GROUP_CONCAT"};

// Built-ins and their arity (-1: variadic).
const std::map<std::string, int> kBuiltins = {
    {"RAND", 0},     {"BOUND", 1},   {"STR", 1},       {"ABS", 1},       {"FLOOR", 1},     {"CEIL", 1},
    {"ROUND", 1},    {"IF", 3},      {"ISIRI", 1},     {"ISURI", 1},     {"ISBLANK", 1},   {"ISLITERAL", 1},
    {"ISNUMERIC", 1}, {"DATATYPE", 1}, {"HOURS", 1},   {"MINUTES", 1},   {"SECONDS", 1},
};

class Parser {
public:
    Parser(std::string_view text, std::string_view base) : toks_(Lexer(text).run()), base_(base) {}

    Query query() {
        prologue();
        Query q;
        const Token& t = peek();
        std::string kw = t.type == Tok::Word ? upper(t.text) : "";
        if (kw == "CONSTRUCT" || kw == "DESCRIBE") unsupported(kw, t);
        if (kw == "SELECT") {
            next();
            q.form = Query::Form::Select;
            if (is_word("DISTINCT") || is_word("REDUCED")) next();
            std::vector<int> projected;
            bool star = false;
            if (is_punct("*")) {
                next();
                star = true;
            } else {
                while (peek().type == Tok::Var || is_punct("(")) {
                    if (is_punct("(")) unsupported("SELECT expression", peek());
                    projected.push_back(var_index(next().text));
                }
                if (projected.empty()) fail("expected projection");
            }
            parse_from(q);
            if (is_word("WHERE")) next();
            q.where = group();
            q.projection = star ? visible(q.where.scope) : projected;
            for (int v : projected)
                if (!std::binary_search(q.where.scope.begin(), q.where.scope.end(), v))
                    throw SyntaxError("projected variable ?" + vars_[v] + " does not occur in the pattern", t.line, t.col);
        } else if (kw == "ASK") {
            next();
            q.form = Query::Form::Ask;
            parse_from(q);
            if (is_word("WHERE")) next();
            q.where = group();
        } else {
            fail("expected SELECT or ASK");
        }
        trailing_modifiers();
        if (peek().type != Tok::End) fail("unexpected '" + peek().text + "' after query");
        q.vars = vars_;
        return q;
    }

    Update update() {
        Update u;
        prologue();
        while (peek().type != Tok::End) {
            u.operations.push_back(operation());
            if (is_punct(";")) {
                next();
                prologue();
                continue;
            }
            if (peek().type != Tok::End) fail("expected ';' between update operations");
        }
        if (u.operations.empty()) fail("empty update");
        return u;
    }

private:
    // -- token access -----------------------------------------------------
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    const Token& next() {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }
    bool is_punct(std::string_view p, std::size_t k = 0) const {
        return peek(k).type == Tok::Punct && peek(k).text == p;
    }
    bool is_word(std::string_view w, std::size_t k = 0) const {
        return peek(k).type == Tok::Word && upper(peek(k).text) == w;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw SyntaxError(msg, peek().line, peek().col);
    }
    [[noreturn]] void unsupported(const std::string& what, const Token& at) const {
        throw UnsupportedFeature(what, at.line, at.col);
    }
    void expect_punct(std::string_view p) {
        if (!is_punct(p)) fail("expected '" + std::string(p) + "'" + describe_found());
        next();
    }
    std::string describe_found() const {
        if (peek().type == Tok::End) return " at end of input";
        return ", found '" + peek().text + "'";
    }

    // -- prologue and IRIs ------------------------------------------------
    void prologue() {
        while (true) {
            if (is_word("PREFIX")) {
                next();
                const Token& p = next();
                if (p.type != Tok::PName || p.text.back() != ':') fail("expected prefix name");
                const Token& iri = next();
                if (iri.type != Tok::Iri) fail("expected IRI in PREFIX");
                prefixes_[p.text.substr(0, p.text.size() - 1)] = resolve(iri.text, iri);
            } else if (is_word("BASE")) {
                next();
                const Token& iri = next();
                if (iri.type != Tok::Iri) fail("expected IRI in BASE");
                base_ = resolve(iri.text, iri);
            } else {
                return;
            }
        }
    }

    std::string resolve(const std::string& iri, const Token& at) const {
        auto colon = iri.find(':');
        auto delim = iri.find_first_of("/?#");
        bool absolute = colon != std::string::npos && colon > 0 && (delim == std::string::npos || colon < delim);
        if (absolute) return iri;
        if (base_.empty()) throw SyntaxError("relative IRI <" + iri + "> without a base", at.line, at.col);
        return rdf::resolve_iri(base_, iri);
    }

    std::string expand(const Token& t) const {
        auto colon = t.text.find(':');
        auto it = prefixes_.find(t.text.substr(0, colon));
        if (it == prefixes_.end())
            throw SyntaxError("undeclared prefix '" + t.text.substr(0, colon) + ":'", t.line, t.col);
        std::string local = t.text.substr(colon + 1);
        return it->second + local;
    }

    bool at_iri() const { return peek().type == Tok::Iri || peek().type == Tok::PName; }

    Term iri() {
        const Token& t = next();
        if (t.type == Tok::Iri) return Term::iri(resolve(t.text, t));
        if (t.type == Tok::PName) return Term::iri(expand(t));
        throw SyntaxError("expected IRI", t.line, t.col);
    }

    // -- variables --------------------------------------------------------
    int var_index(const std::string& name) {
        auto it = var_ids_.find(name);
        if (it != var_ids_.end()) return it->second;
        int id = static_cast<int>(vars_.size());
        vars_.push_back(name);
        var_ids_.emplace(name, id);
        return id;
    }
    int hidden_var() { return var_index("_:anon" + std::to_string(hidden_++)); }
    std::vector<int> visible(const std::vector<int>& scope) const {
        std::vector<int> out;
        for (int v : scope)
            if (vars_[v].rfind("_:", 0) != 0) out.push_back(v);
        return out;
    }
    void reset_vars() {
        vars_.clear();
        var_ids_.clear();
        hidden_ = 0;
    }

    // -- query pieces -----------------------------------------------------
    void parse_from(Query& q) {
        while (is_word("FROM")) {
            next();
            if (is_word("NAMED")) unsupported("FROM NAMED", peek());
            q.from.push_back(iri());
        }
    }

    void trailing_modifiers() {
        for (const char* kw : {"GROUP", "HAVING", "ORDER", "LIMIT", "OFFSET", "VALUES"}) {
            if (is_word(kw)) {
                std::string name = kw;
                if (name == "GROUP" || name == "ORDER") name += " BY";
                unsupported(name, peek());
            }
        }
    }

    GroupPattern group() {
        expect_punct("{");
        GroupPattern g;
        if (is_word("SELECT")) unsupported("subquery", peek());
        std::set<int> scope;
        while (!is_punct("}")) {
            const Token& t = peek();
            if (t.type == Tok::End) fail("unterminated group pattern");
            if (is_punct(".")) {
                next();
                continue;
            }
            if (t.type == Tok::Word) {
                std::string kw = upper(t.text);
                if (kw == "OPTIONAL" || kw == "MINUS" || kw == "SERVICE" || kw == "VALUES" || kw == "UNION")
                    unsupported(kw, t);
                if (kw == "GRAPH") {
                    next();
                    PatternElement e;
                    e.kind = PatternElement::Kind::Graph;
                    if (peek().type == Tok::Var) {
                        e.graph = TermOrVar::variable(var_index(next().text));
                        scope.insert(e.graph.var);
                    } else {
                        e.graph = TermOrVar::of(iri());
                    }
                    e.group = std::make_shared<GroupPattern>(group());
                    scope.insert(e.group->scope.begin(), e.group->scope.end());
                    g.elements.push_back(std::move(e));
                    check_union();
                    continue;
                }
                if (kw == "FILTER") {
                    next();
                    PatternElement e;
                    e.kind = PatternElement::Kind::Filter;
                    e.expr = constraint();
                    g.elements.push_back(std::move(e));
                    continue;
                }
                if (kw == "BIND") {
                    next();
                    expect_punct("(");
                    PatternElement e;
                    e.kind = PatternElement::Kind::Bind;
                    e.expr = expression();
                    if (!is_word("AS")) fail("expected AS in BIND");
                    next();
                    const Token& v = next();
                    if (v.type != Tok::Var) throw SyntaxError("expected variable after AS", v.line, v.col);
                    e.var = var_index(v.text);
                    if (scope.count(e.var))
                        throw SyntaxError("BIND target ?" + v.text + " is already in scope", v.line, v.col);
                    scope.insert(e.var);
                    expect_punct(")");
                    g.elements.push_back(std::move(e));
                    continue;
                }
            }
            if (is_punct("{")) {
                PatternElement e;
                e.kind = PatternElement::Kind::Group;
                e.group = std::make_shared<GroupPattern>(group());
                scope.insert(e.group->scope.begin(), e.group->scope.end());
                g.elements.push_back(std::move(e));
                check_union();
                continue;
            }
            std::vector<TriplePattern> triples;
            triples_same_subject(triples, false);
            for (auto& tp : triples) {
                for (const TermOrVar* x : {&tp.s, &tp.p, &tp.o})
                    if (x->is_var()) scope.insert(x->var);
                PatternElement e;
                e.kind = PatternElement::Kind::Triple;
                e.triple = std::move(tp);
                g.elements.push_back(std::move(e));
            }
            if (!is_punct(".") && !is_punct("}") && !is_punct("{") && peek().type != Tok::Word)
                fail("expected '.'" + describe_found());
        }
        next();
        g.scope.assign(scope.begin(), scope.end());
        return g;
    }

    void check_union() {
        if (is_word("UNION")) unsupported("UNION", peek());
    }

    // Parses subject + property list; template mode forbids paths and blank nodes.
    void triples_same_subject(std::vector<TriplePattern>& out, bool template_mode) {
        TermOrVar subject;
        if (is_punct("[")) {
            if (template_mode) unsupported("blank node in update template", peek());
            next();
            subject = TermOrVar::variable(hidden_var());
            if (!is_punct("]")) property_list(subject, out, template_mode);
            expect_punct("]");
            if (is_punct(".") || is_punct("}")) return;
        } else {
            subject = var_or_term(template_mode);
            if (subject.term.is_literal()) fail("literal in subject position");
        }
        property_list(subject, out, template_mode);
    }

    void property_list(const TermOrVar& subject, std::vector<TriplePattern>& out, bool template_mode) {
        while (true) {
            TriplePattern proto;
            proto.s = subject;
            if (peek().type == Tok::Var) {
                proto.p = TermOrVar::variable(var_index(next().text));
            } else {
                Path path = path_alternative(template_mode);
                if (path.kind == Path::Kind::Link) proto.p = TermOrVar::of(path.iri);
                else proto.path = std::make_shared<Path>(std::move(path));
            }
            while (true) {
                TriplePattern tp = proto;
                if (is_punct("[")) {
                    if (template_mode) unsupported("blank node in update template", peek());
                    next();
                    tp.o = TermOrVar::variable(hidden_var());
                    if (!is_punct("]")) property_list(tp.o, out, template_mode);
                    expect_punct("]");
                } else {
                    tp.o = var_or_term(template_mode);
                }
                out.push_back(std::move(tp));
                if (!is_punct(",")) break;
                next();
            }
            if (!is_punct(";")) return;
            while (is_punct(";")) next();
            if (is_punct(".") || is_punct("}") || is_punct("]")) return;
        }
    }

    Path path_alternative(bool template_mode) {
        Path p = path_sequence(template_mode);
        if (is_punct("|")) unsupported("alternative path", peek());
        return p;
    }

    Path path_sequence(bool template_mode) {
        Path first = path_elt_or_inverse(template_mode);
        if (!is_punct("/")) return first;
        if (template_mode) unsupported("property path in update template", peek());
        Path seq;
        seq.kind = Path::Kind::Sequence;
        seq.parts.push_back(std::move(first));
        while (is_punct("/")) {
            next();
            seq.parts.push_back(path_elt_or_inverse(template_mode));
        }
        return seq;
    }

    Path path_elt_or_inverse(bool template_mode) {
        if (is_punct("^")) {
            if (template_mode) unsupported("property path in update template", peek());
            next();
            Path inv;
            inv.kind = Path::Kind::Inverse;
            inv.parts.push_back(path_elt(template_mode));
            return inv;
        }
        return path_elt(template_mode);
    }

    Path path_elt(bool template_mode) {
        Path prim = path_primary(template_mode);
        if (is_punct("+")) {
            if (template_mode) unsupported("property path in update template", peek());
            next();
            Path plus;
            plus.kind = Path::Kind::OneOrMore;
            plus.parts.push_back(std::move(prim));
            return plus;
        }
        if (is_punct("*")) unsupported("zero-or-more path", peek());
        if (is_punct("?")) unsupported("zero-or-one path", peek());
        return prim;
    }

    Path path_primary(bool template_mode) {
        if (is_punct("!")) unsupported("negated property set", peek());
        if (is_punct("(")) {
            if (template_mode) unsupported("property path in update template", peek());
            next();
            Path p = path_alternative(template_mode);
            expect_punct(")");
            return p;
        }
        Path link;
        if (peek().type == Tok::Word && peek().text == "a") {
            next();
            link.iri = Term::iri(vocab::kRdfType);
            return link;
        }
        if (!at_iri()) fail("expected predicate" + describe_found());
        link.iri = iri();
        return link;
    }

    TermOrVar var_or_term(bool template_mode) {
        const Token& t = peek();
        switch (t.type) {
            case Tok::Var: next(); return TermOrVar::variable(var_index(t.text));
            case Tok::Iri:
            case Tok::PName: return TermOrVar::of(iri());
            case Tok::Blank: {
                if (template_mode) unsupported("blank node in update template", t);
                next();
                return TermOrVar::variable(var_index("_:" + t.text));
            }
            case Tok::Punct:
                if (t.text == "(") unsupported("RDF collection", t);
                if (t.text == "-" || t.text == "+") {
                    next();
                    const Token& n = peek();
                    if (n.type != Tok::Integer && n.type != Tok::Decimal && n.type != Tok::Double)
                        fail("expected number after sign");
                    Term num = literal_term();
                    return TermOrVar::of(t.text == "-" ? Term::literal("-" + num.value(), num.datatype()) : num);
                }
                break;
            default:
                if (t.type == Tok::Word && (t.text == "true" || t.text == "false")) {
                    next();
                    return TermOrVar::of(Term::boolean(t.text == "true"));
                }
                if (t.type == Tok::String || t.type == Tok::Integer || t.type == Tok::Decimal || t.type == Tok::Double)
                    return TermOrVar::of(literal_term());
        }
        fail("expected term" + describe_found());
    }

    Term literal_term() {
        const Token& t = next();
        switch (t.type) {
            case Tok::Integer: return Term::literal(t.text, vocab::kXsdInteger);
            case Tok::Decimal: return Term::literal(t.text, vocab::kXsdDecimal);
            case Tok::Double: return Term::literal(t.text, vocab::kXsdDouble);
            case Tok::String: {
                if (peek().type == Tok::LangTag) return Term::lang_literal(t.text, next().text);
                if (is_punct("^^")) {
                    next();
                    return Term::literal(t.text, iri().value());
                }
                return Term::literal(t.text);
            }
            default: throw SyntaxError("expected literal", t.line, t.col);
        }
    }

    // -- expressions --------------------------------------------------------
    Expr constraint() {
        if (is_punct("(")) {
            next();
            Expr e = expression();
            expect_punct(")");
            return e;
        }
        if (is_word("NOT") || is_word("EXISTS")) unsupported("EXISTS", peek());
        if (peek().type == Tok::Word || at_iri()) return primary();
        fail("expected FILTER constraint");
    }

    Expr binary(Expr::Op op, Expr lhs, Expr rhs) {
        Expr e;
        e.op = op;
        e.args.push_back(std::move(lhs));
        e.args.push_back(std::move(rhs));
        return e;
    }

    Expr expression() {
        Expr lhs = and_expr();
        while (is_punct("||")) {
            next();
            lhs = binary(Expr::Op::Or, std::move(lhs), and_expr());
        }
        return lhs;
    }

    Expr and_expr() {
        Expr lhs = relational();
        while (is_punct("&&")) {
            next();
            lhs = binary(Expr::Op::And, std::move(lhs), relational());
        }
        return lhs;
    }

    Expr relational() {
        Expr lhs = additive();
        static const std::pair<const char*, Expr::Op> ops[] = {
            {"=", Expr::Op::Eq}, {"!=", Expr::Op::Ne}, {"<", Expr::Op::Lt},
            {"<=", Expr::Op::Le}, {">", Expr::Op::Gt}, {">=", Expr::Op::Ge},
        };
        for (auto [text, op] : ops) {
            if (is_punct(text)) {
                next();
                return binary(op, std::move(lhs), additive());
            }
        }
        if (is_word("IN") || (is_word("NOT") && is_word("IN", 1))) unsupported("IN", peek());
        return lhs;
    }

    Expr additive() {
        Expr lhs = multiplicative();
        while (is_punct("+") || is_punct("-")) {
            Expr::Op op = next().text == "+" ? Expr::Op::Add : Expr::Op::Sub;
            lhs = binary(op, std::move(lhs), multiplicative());
        }
        return lhs;
    }

    Expr multiplicative() {
        Expr lhs = unary();
        while (is_punct("*") || is_punct("/")) {
            Expr::Op op = next().text == "*" ? Expr::Op::Mul : Expr::Op::Div;
            lhs = binary(op, std::move(lhs), unary());
        }
        return lhs;
    }

    Expr unary() {
        if (is_punct("!") || is_punct("-") || is_punct("+")) {
            std::string op = next().text;
            Expr e;
            e.op = op == "!" ? Expr::Op::Not : op == "-" ? Expr::Op::Neg : Expr::Op::Plus;
            e.args.push_back(unary());
            return e;
        }
        return primary();
    }

    std::vector<Expr> arguments() {
        expect_punct("(");
        std::vector<Expr> args;
        if (is_word("DISTINCT")) unsupported("aggregate", peek());
        if (!is_punct(")")) {
            args.push_back(expression());
            while (is_punct(",")) {
                next();
                args.push_back(expression());
            }
        }
        expect_punct(")");
        return args;
    }

    Expr primary() {
        const Token& t = peek();
        Expr e;
        if (is_punct("(")) {
            next();
            e = expression();
            expect_punct(")");
            return e;
        }
        if (t.type == Tok::Var) {
            next();
            e.op = Expr::Op::Variable;
            e.var = var_index(t.text);
            return e;
        }
        if (t.type == Tok::Word) {
            std::string kw = upper(t.text);
            if (t.text == "true" || t.text == "false") {
                next();
                e.constant = Term::boolean(t.text == "true");
                return e;
            }
            if (kw == "EXISTS" || kw == "NOT") unsupported("EXISTS", t);
            if (kAggregates.count(kw)) unsupported("aggregate " + kw, t);
            auto it = kBuiltins.find(kw);
            if (it == kBuiltins.end()) unsupported("function " + kw, t);
            next();
            e.op = Expr::Op::Call;
            e.function = kw;
            e.args = arguments();
            if (it->second >= 0 && static_cast<int>(e.args.size()) != it->second)
                throw SyntaxError(kw + " expects " + std::to_string(it->second) + " argument(s)", t.line, t.col);
            if (kw == "BOUND" && e.args[0].op != Expr::Op::Variable)
                throw SyntaxError("BOUND expects a variable", t.line, t.col);
            if (kw == "RAND") e.callsite = callsites_++;
            return e;
        }
        if (at_iri()) {
            Term name = iri();
            if (!is_punct("(")) {
                e.constant = name;
                return e;
            }
            static const std::set<std::string> known = {
                std::string(vocab::kSim) + "time",      std::string(vocab::kSim) + "now",
                std::string(vocab::kSim) + "iteration", std::string(vocab::kXsdInteger),
                std::string(vocab::kXsdDecimal),        std::string(vocab::kXsdDouble),
                std::string(vocab::kXsdString),         std::string(vocab::kXsdBoolean),
                std::string(vocab::kXsdTime),           std::string(vocab::kXsdDateTime),
            };
            if (!known.count(name.value())) unsupported("function <" + name.value() + ">", t);
            e.op = Expr::Op::Call;
            e.function = name.value();
            e.args = arguments();
            bool sim_fn = name.value().rfind(std::string(vocab::kSim), 0) == 0;
            if (sim_fn ? !e.args.empty() : e.args.size() != 1)
                throw SyntaxError("wrong number of arguments to <" + name.value() + ">", t.line, t.col);
            return e;
        }
        if (t.type == Tok::String || t.type == Tok::Integer || t.type == Tok::Decimal || t.type == Tok::Double) {
            e.constant = literal_term();
            return e;
        }
        fail("expected expression" + describe_found());
    }

    // -- updates ------------------------------------------------------------
    UpdateOperation operation() {
        reset_vars();
        UpdateOperation op;
        const Token& t = peek();
        std::string kw = t.type == Tok::Word ? upper(t.text) : "";
        for (const char* un : {"LOAD", "CLEAR", "DROP", "CREATE", "ADD", "MOVE", "COPY", "WITH"})
            if (kw == un) unsupported(kw, t);
        if (kw == "INSERT" && is_word("DATA", 1)) {
            next();
            next();
            op.inserts = quad_block(true);
        } else if (kw == "DELETE" && is_word("DATA", 1)) {
            next();
            next();
            op.deletes = quad_block(true);
        } else if (kw == "DELETE" && is_word("WHERE", 1)) {
            next();
            next();
            op.deletes = quad_block(false);
            op.where = templates_as_pattern(op.deletes);
        } else if (kw == "DELETE" || kw == "INSERT") {
            if (kw == "DELETE") {
                next();
                op.deletes = quad_block(false);
            }
            if (is_word("INSERT")) {
                next();
                op.inserts = quad_block(false);
            }
            if (is_word("USING")) unsupported("USING", peek());
            if (!is_word("WHERE")) fail("expected WHERE" + describe_found());
            next();
            op.where = group();
            check_template_vars(op, t);
        } else {
            fail("expected update operation" + describe_found());
        }
        op.vars = vars_;
        return op;
    }

    std::vector<QuadTemplate> quad_block(bool ground) {
        expect_punct("{");
        std::vector<QuadTemplate> out;
        auto add_triples = [&](const TermOrVar& g) {
            std::vector<TriplePattern> triples;
            triples_same_subject(triples, true);
            for (auto& tp : triples) {
                if (ground && (tp.s.is_var() || tp.p.is_var() || tp.o.is_var() || g.is_var()))
                    fail("variables are not allowed in DATA blocks");
                out.push_back({tp.s, tp.p, tp.o, g});
            }
        };
        while (!is_punct("}")) {
            if (peek().type == Tok::End) fail("unterminated template");
            if (is_punct(".")) {
                next();
                continue;
            }
            if (is_word("GRAPH")) {
                next();
                TermOrVar g = peek().type == Tok::Var ? TermOrVar::variable(var_index(next().text)) : TermOrVar::of(iri());
                expect_punct("{");
                while (!is_punct("}")) {
                    if (peek().type == Tok::End) fail("unterminated GRAPH template");
                    if (is_punct(".")) {
                        next();
                        continue;
                    }
                    add_triples(g);
                }
                next();
                continue;
            }
            add_triples(TermOrVar{});
        }
        next();
        return out;
    }

    GroupPattern templates_as_pattern(const std::vector<QuadTemplate>& tmpl) {
        GroupPattern g;
        std::set<int> scope;
        for (const auto& q : tmpl) {
            PatternElement triple;
            triple.kind = PatternElement::Kind::Triple;
            triple.triple.s = q.s;
            triple.triple.p = q.p;
            triple.triple.o = q.o;
            for (const TermOrVar* x : {&q.s, &q.p, &q.o, &q.g})
                if (x->is_var()) scope.insert(x->var);
            if (q.g.empty()) {
                g.elements.push_back(std::move(triple));
                continue;
            }
            PatternElement graph;
            graph.kind = PatternElement::Kind::Graph;
            graph.graph = q.g;
            graph.group = std::make_shared<GroupPattern>();
            graph.group->elements.push_back(std::move(triple));
            for (const TermOrVar* x : {&q.s, &q.p, &q.o, &q.g})
                if (x->is_var()) graph.group->scope.push_back(x->var);
            std::sort(graph.group->scope.begin(), graph.group->scope.end());
            graph.group->scope.erase(std::unique(graph.group->scope.begin(), graph.group->scope.end()),
                                     graph.group->scope.end());
            g.elements.push_back(std::move(graph));
        }
        g.scope.assign(scope.begin(), scope.end());
        return g;
    }

    void check_template_vars(const UpdateOperation& op, const Token& at) const {
        for (const auto* list : {&op.deletes, &op.inserts})
            for (const auto& q : *list)
                for (const TermOrVar* x : {&q.s, &q.p, &q.o, &q.g})
                    if (x->is_var() && !std::binary_search(op.where.scope.begin(), op.where.scope.end(), x->var))
                        throw SyntaxError("template variable ?" + vars_[x->var] + " is not bound by WHERE", at.line,
                                          at.col);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::string base_;
    std::unordered_map<std::string, std::string> prefixes_;
    std::vector<std::string> vars_;
    std::unordered_map<std::string, int> var_ids_;
    int hidden_ = 0;
    int callsites_ = 0;
};

}  // namespace

Query parse_query(std::string_view text, std::string_view base) { return Parser(text, base).query(); }

Update parse_update(std::string_view text, std::string_view base) { return Parser(text, base).update(); }

}  // namespace ldsim::sparql
