#include "ldsim/rdf/io.hpp"

#include <algorithm>
#include <atomic>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "ldsim/rdf/vocab.hpp"

namespace ldsim::rdf {

// ---------------------------------------------------------------------------
// IRI resolution

namespace {

struct IriParts {
    std::optional<std::string_view> scheme, authority, query, fragment;
    std::string_view path;
};

IriParts split_iri(std::string_view s) {
    IriParts p;
    // scheme
    auto colon = s.find(':');
    auto first_delim = s.find_first_of("/?#");
    if (colon != std::string_view::npos && (first_delim == std::string_view::npos || colon < first_delim) && colon > 0 &&
        std::isalpha(static_cast<unsigned char>(s[0]))) {
        p.scheme = s.substr(0, colon);
        s.remove_prefix(colon + 1);
    }
    if (auto hash = s.find('#'); hash != std::string_view::npos) {
        p.fragment = s.substr(hash + 1);
        s = s.substr(0, hash);
    }
    if (auto q = s.find('?'); q != std::string_view::npos) {
        p.query = s.substr(q + 1);
        s = s.substr(0, q);
    }
    if (s.substr(0, 2) == "//") {
        s.remove_prefix(2);
        auto slash = s.find('/');
        p.authority = s.substr(0, slash);
        s = slash == std::string_view::npos ? std::string_view{} : s.substr(slash);
    }
    p.path = s;
    return p;
}

std::string remove_dot_segments(std::string_view in) {
    std::string input(in), output;
    while (!input.empty()) {
        if (input.rfind("../", 0) == 0) input.erase(0, 3);
        else if (input.rfind("./", 0) == 0) input.erase(0, 2);
        else if (input.rfind("/./", 0) == 0) input.replace(0, 3, "/");
        else if (input == "/.") input = "/";
        else if (input.rfind("/../", 0) == 0 || input == "/..") {
            input = input.size() == 3 ? std::string("/") : input.replace(0, 4, "/");
            auto last = output.rfind('/');
            output.erase(last == std::string::npos ? 0 : last);
        } else if (input == "." || input == "..") input.clear();
        else {
            std::size_t start = input[0] == '/' ? 1 : 0;
            auto next = input.find('/', start);
            output += input.substr(0, next);
            input.erase(0, next == std::string::npos ? input.size() : next);
        }
    }
    return output;
}

std::string compose(const IriParts& p, const std::string& path) {
    std::string out;
    if (p.scheme) out += std::string(*p.scheme) + ":";
    if (p.authority) out += "//" + std::string(*p.authority);
    out += path;
    if (p.query) out += "?" + std::string(*p.query);
    if (p.fragment) out += "#" + std::string(*p.fragment);
    return out;
}

}  // namespace

std::string resolve_iri(std::string_view base, std::string_view reference) {
    IriParts r = split_iri(reference);
    if (r.scheme) {
        IriParts t = r;
        return compose(t, remove_dot_segments(r.path));
    }
    IriParts b = split_iri(base);
    IriParts t;
    t.scheme = b.scheme;
    t.fragment = r.fragment;
    std::string path;
    if (r.authority) {
        t.authority = r.authority;
        path = remove_dot_segments(r.path);
        t.query = r.query;
    } else {
        t.authority = b.authority;
        if (r.path.empty()) {
            path = std::string(b.path);
            t.query = r.query ? r.query : b.query;
        } else {
            if (r.path[0] == '/') path = remove_dot_segments(r.path);
            else {
                std::string merged;
                if (b.authority && b.path.empty()) merged = "/" + std::string(r.path);
                else {
                    auto last = b.path.rfind('/');
                    merged = (last == std::string_view::npos ? std::string() : std::string(b.path.substr(0, last + 1))) +
                             std::string(r.path);
                }
                path = remove_dot_segments(merged);
            }
            t.query = r.query;
        }
    }
    return compose(t, path);
}

// ---------------------------------------------------------------------------
// Parser

namespace {

std::atomic<std::uint64_t> g_document_counter{0};

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) out.push_back(static_cast<char>(cp));
    else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool is_pn_char(char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '-' || u >= 0x80;
}

class Parser {
public:
    Parser(std::string_view text, Format format, std::string_view base, Term graph)
        : text_(text), format_(format), base_(base), graph_(graph.valid() ? graph : default_graph()) {
        doc_prefix_ = "d" + std::to_string(g_document_counter.fetch_add(1)) + "_";
    }

    std::vector<Quad> run() {
        skip_ws();
        while (!eof()) {
            if (format_ == Format::NTriples || format_ == Format::NQuads) line_statement();
            else statement();
            skip_ws();
        }
        return std::move(out_);
    }

private:
    // -- cursor -----------------------------------------------------------
    bool eof() const { return pos_ >= text_.size(); }
    char peek(std::size_t k = 0) const { return pos_ + k < text_.size() ? text_[pos_ + k] : '\0'; }
    char get() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }
    void expect(char c) {
        skip_ws();
        if (peek() != c) fail(std::string("expected '") + c + "'" + (eof() ? " at end of input" : std::string(", found '") + peek() + "'"));
        get();
    }
    void skip_ws() {
        while (!eof()) {
            char c = peek();
            if (c == '#') {
                while (!eof() && peek() != '\n') get();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                get();
            } else {
                break;
            }
        }
    }
    bool match_keyword(std::string_view kw) {
        if (text_.size() - pos_ < kw.size()) return false;
        for (std::size_t i = 0; i < kw.size(); ++i)
            if (std::toupper(static_cast<unsigned char>(text_[pos_ + i])) != std::toupper(static_cast<unsigned char>(kw[i])))
                return false;
        char after = peek(kw.size());
        if (is_pn_char(after) || after == ':') return false;
        for (std::size_t i = 0; i < kw.size(); ++i) get();
        return true;
    }

    // -- statements -------------------------------------------------------
    void statement() {
        if (peek() == '@') {
            get();
            if (match_keyword("prefix")) {
                prefix_decl();
                expect('.');
            } else if (match_keyword("base")) {
                skip_ws();
                base_ = resolve(read_iriref());
                expect('.');
            } else {
                fail("unknown directive");
            }
            return;
        }
        if (match_keyword("PREFIX")) {
            prefix_decl();
            return;
        }
        if (match_keyword("BASE")) {
            skip_ws();
            base_ = resolve(read_iriref());
            return;
        }
        if (format_ == Format::TriG) {
            if (match_keyword("GRAPH")) {
                skip_ws();
                Term g = read_graph_label();
                graph_block(g);
                return;
            }
            if (peek() == '{') {
                graph_block(graph_);
                return;
            }
            // label { ... } without the GRAPH keyword
            if (peek() == '<' || peek() == '_' || is_pname_start()) {
                std::size_t save_pos = pos_, save_line = line_, save_col = col_;
                Term label = read_graph_label();
                skip_ws();
                if (peek() == '{') {
                    graph_block(label);
                    return;
                }
                pos_ = save_pos;
                line_ = save_line;
                col_ = save_col;
            }
        }
        triples(graph_);
        expect('.');
    }

    void graph_block(Term g) {
        expect('{');
        skip_ws();
        while (peek() != '}') {
            if (eof()) fail("unterminated graph block");
            triples(g);
            skip_ws();
            if (peek() == '.') {
                get();
                skip_ws();
            } else if (peek() != '}') {
                fail("expected '.' or '}'");
            }
        }
        get();
    }

    Term read_graph_label() {
        skip_ws();
        if (peek() == '<') return Term::iri(resolve(read_iriref()));
        if (peek() == '_' && peek(1) == ':') return read_blank_label();
        if (is_pname_start()) return Term::iri(read_pname());
        fail("expected graph name");
    }

    void prefix_decl() {
        skip_ws();
        std::string name;
        while (!eof() && peek() != ':') {
            if (!is_pn_char(peek()) && peek() != '.') fail("invalid prefix name");
            name.push_back(get());
        }
        if (eof()) fail("expected ':' in prefix declaration");
        get();
        skip_ws();
        prefixes_[name] = resolve(read_iriref());
    }

    void triples(Term g) {
        skip_ws();
        Term subject;
        if (peek() == '[') {
            subject = blank_property_list(g);
            skip_ws();
            if (peek() == '.' || peek() == '}') return;
        } else if (peek() == '(') {
            subject = collection(g);
        } else {
            subject = read_subject();
        }
        predicate_object_list(subject, g);
    }

    void predicate_object_list(Term subject, Term g) {
        while (true) {
            skip_ws();
            Term predicate = read_predicate();
            while (true) {
                skip_ws();
                Term object = read_object(g);
                emit(subject, predicate, object, g);
                skip_ws();
                if (peek() == ',') {
                    get();
                    continue;
                }
                break;
            }
            skip_ws();
            if (peek() != ';') return;
            while (peek() == ';') {
                get();
                skip_ws();
            }
            if (peek() == '.' || peek() == ']' || peek() == '}' || eof()) return;
        }
    }

    Term blank_property_list(Term g) {
        expect('[');
        Term b = fresh_blank();
        skip_ws();
        if (peek() == ']') {
            get();
            return b;
        }
        predicate_object_list(b, g);
        expect(']');
        return b;
    }

    Term collection(Term g) {
        expect('(');
        std::vector<Term> items;
        skip_ws();
        while (peek() != ')') {
            if (eof()) fail("unterminated collection");
            items.push_back(read_object(g));
            skip_ws();
        }
        get();
        static const Term nil = Term::iri(vocab::kRdfNil);
        static const Term first = Term::iri(vocab::kRdfFirst);
        static const Term rest = Term::iri(vocab::kRdfRest);
        if (items.empty()) return nil;
        Term head = fresh_blank();
        Term cur = head;
        for (std::size_t i = 0; i < items.size(); ++i) {
            emit(cur, first, items[i], g);
            Term next = i + 1 < items.size() ? fresh_blank() : nil;
            emit(cur, rest, next, g);
            cur = next;
        }
        return head;
    }

    void line_statement() {
        Term s = read_subject();
        skip_ws();
        Term p = read_predicate();
        skip_ws();
        Term o = read_object(graph_);
        skip_ws();
        Term g = graph_;
        if (format_ == Format::NQuads && peek() != '.') {
            if (peek() == '<') g = Term::iri(resolve(read_iriref()));
            else if (peek() == '_') g = read_blank_label();
            else fail("expected graph label or '.'");
        }
        expect('.');
        emit(s, p, o, g);
    }

    // -- terms ------------------------------------------------------------
    Term read_subject() {
        skip_ws();
        if (peek() == '<') return Term::iri(resolve(read_iriref()));
        if (peek() == '_' && peek(1) == ':') return read_blank_label();
        if (is_turtle() && is_pname_start()) return Term::iri(read_pname());
        fail("expected subject");
    }

    Term read_predicate() {
        skip_ws();
        if (peek() == '<') return Term::iri(resolve(read_iriref()));
        if (is_turtle() && peek() == 'a' && !is_pn_char(peek(1)) && peek(1) != ':') {
            get();
            static const Term type = Term::iri(vocab::kRdfType);
            return type;
        }
        if (is_turtle() && is_pname_start()) return Term::iri(read_pname());
        fail("expected predicate");
    }

    Term read_object(Term g) {
        skip_ws();
        char c = peek();
        if (c == '<') return Term::iri(resolve(read_iriref()));
        if (c == '_' && peek(1) == ':') return read_blank_label();
        if (c == '"' || c == '\'') return read_literal();
        if (!is_turtle()) fail("expected object");
        if (c == '[') return blank_property_list(g);
        if (c == '(') return collection(g);
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' ||
            (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))))
            return read_number();
        if (match_keyword("true")) return Term::boolean(true);
        if (match_keyword("false")) return Term::boolean(false);
        if (is_pname_start()) return Term::iri(read_pname());
        fail("expected object");
    }

    bool is_turtle() const { return format_ == Format::Turtle || format_ == Format::TriG; }

    bool is_pname_start() const {
        char c = peek();
        if (c == ':') return true;
        if (!std::isalpha(static_cast<unsigned char>(c)) && static_cast<unsigned char>(c) < 0x80) return false;
        std::size_t k = 0;
        while (pos_ + k < text_.size() && (is_pn_char(text_[pos_ + k]) || text_[pos_ + k] == '.')) ++k;
        return pos_ + k < text_.size() && text_[pos_ + k] == ':';
    }

    std::string read_iriref() {
        if (peek() != '<') fail("expected IRI");
        get();
        std::string iri;
        while (true) {
            if (eof()) fail("unterminated IRI");
            char c = get();
            if (c == '>') break;
            if (c == '\\') {
                char e = get();
                if (e == 'u') append_utf8(iri, read_hex(4));
                else if (e == 'U') append_utf8(iri, read_hex(8));
                else fail("invalid escape in IRI");
                continue;
            }
            if (c == ' ' || c == '\n' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' || c == '`')
                fail("invalid character in IRI");
            iri.push_back(c);
        }
        return iri;
    }

    std::string resolve(const std::string& iri) {
        IriParts parts = split_iri(iri);
        if (parts.scheme) return iri;
        if (base_.empty()) fail("relative IRI <" + iri + "> without a base");
        return resolve_iri(base_, iri);
    }

    std::string read_pname() {
        std::string prefix;
        while (peek() != ':') prefix.push_back(get());
        get();
        auto it = prefixes_.find(prefix);
        if (it == prefixes_.end()) fail("undeclared prefix '" + prefix + ":'");
        std::string local;
        while (!eof()) {
            char c = peek();
            if (is_pn_char(c) || c == '.' || c == ':') {
                local.push_back(get());
            } else if (c == '%') {
                local.push_back(get());
                local.push_back(get());
                local.push_back(get());
            } else if (c == '\\') {
                get();
                local.push_back(get());
            } else {
                break;
            }
        }
        // A trailing '.' terminates the statement rather than the name.
        while (!local.empty() && local.back() == '.') {
            local.pop_back();
            --pos_;
            --col_;
        }
        return it->second + local;
    }

    Term read_blank_label() {
        get();
        get();
        std::string label;
        while (!eof() && (is_pn_char(peek()) || peek() == '.')) label.push_back(get());
        while (!label.empty() && label.back() == '.') {
            label.pop_back();
            --pos_;
            --col_;
        }
        if (label.empty()) fail("empty blank node label");
        return Term::blank(doc_prefix_ + label);
    }

    Term fresh_blank() { return Term::blank(doc_prefix_ + "anon" + std::to_string(anon_++)); }

    std::uint32_t read_hex(int digits) {
        std::uint32_t v = 0;
        for (int i = 0; i < digits; ++i) {
            if (eof()) fail("truncated escape");
            char c = get();
            v <<= 4;
            if (c >= '0' && c <= '9') v |= c - '0';
            else if (c >= 'a' && c <= 'f') v |= c - 'a' + 10;
            else if (c >= 'A' && c <= 'F') v |= c - 'A' + 10;
            else fail("invalid hex digit");
        }
        return v;
    }

    Term read_literal() {
        char q = get();
        bool long_form = peek() == q && peek(1) == q;
        if (long_form) {
            get();
            get();
        }
        std::string lex;
        while (true) {
            if (eof()) fail("unterminated string literal");
            char c = peek();
            if (long_form) {
                if (c == q && peek(1) == q && peek(2) == q) {
                    get();
                    get();
                    get();
                    break;
                }
            } else {
                if (c == q) {
                    get();
                    break;
                }
                if (c == '\n' || c == '\r') fail("newline in string literal");
            }
            get();
            if (c == '\\') {
                char e = get();
                switch (e) {
                    case 't': lex.push_back('\t'); break;
                    case 'b': lex.push_back('\b'); break;
                    case 'n': lex.push_back('\n'); break;
                    case 'r': lex.push_back('\r'); break;
                    case 'f': lex.push_back('\f'); break;
                    case '"': lex.push_back('"'); break;
                    case '\'': lex.push_back('\''); break;
                    case '\\': lex.push_back('\\'); break;
                    case 'u': append_utf8(lex, read_hex(4)); break;
                    case 'U': append_utf8(lex, read_hex(8)); break;
                    default: fail("invalid string escape");
                }
            } else {
                lex.push_back(c);
            }
        }
        if (peek() == '@') {
            get();
            std::string lang;
            while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-')) lang.push_back(get());
            if (lang.empty()) fail("empty language tag");
            return Term::lang_literal(lex, lang);
        }
        if (peek() == '^' && peek(1) == '^') {
            get();
            get();
            std::string dt;
            if (peek() == '<') dt = resolve(read_iriref());
            else if (is_turtle() && is_pname_start()) dt = read_pname();
            else fail("expected datatype IRI");
            return Term::literal(lex, dt);
        }
        return Term::literal(lex);
    }

    Term read_number() {
        std::string s;
        if (peek() == '+' || peek() == '-') s.push_back(get());
        bool digits = false, dot = false, exp = false;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            s.push_back(get());
            digits = true;
        }
        if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
            dot = true;
            s.push_back(get());
            while (std::isdigit(static_cast<unsigned char>(peek()))) s.push_back(get());
            digits = true;
        }
        if (digits && (peek() == 'e' || peek() == 'E')) {
            exp = true;
            s.push_back(get());
            if (peek() == '+' || peek() == '-') s.push_back(get());
            if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("malformed exponent");
            while (std::isdigit(static_cast<unsigned char>(peek()))) s.push_back(get());
        }
        if (!digits) fail("malformed number");
        if (exp) return Term::literal(s, vocab::kXsdDouble);
        if (dot) return Term::literal(s, vocab::kXsdDecimal);
        return Term::literal(s, vocab::kXsdInteger);
    }

    void emit(Term s, Term p, Term o, Term g) {
        if (s.is_literal()) fail("literal in subject position");
        out_.push_back({s, p, o, g});
    }

    std::string_view text_;
    Format format_;
    std::string base_;
    Term graph_;
    std::size_t pos_ = 0, line_ = 1, col_ = 1;
    std::map<std::string, std::string> prefixes_;
    std::vector<Quad> out_;
    std::string doc_prefix_;
    std::uint64_t anon_ = 0;
};

}  // namespace

std::vector<Quad> parse_quads(std::string_view text, Format format, std::string_view base, Term graph) {
    return Parser(text, format, base, graph).run();
}

Dataset parse_document(std::string_view text, Format format, std::string_view base, Term graph) {
    auto quads = parse_quads(text, format, base, graph);
    return Dataset::from_quads(quads);
}

// ---------------------------------------------------------------------------
// Serializers

namespace {

struct PrefixEntry {
    std::string_view prefix;
    std::string_view ns;
};

constexpr PrefixEntry kKnownPrefixes[] = {
    {"rdf", vocab::kRdf},       {"rdfs", vocab::kRdfs}, {"xsd", vocab::kXsd},   {"owl", vocab::kOwl},
    {"time", vocab::kTime},     {"sosa", vocab::kSosa}, {"ssn", vocab::kSsn},   {"brick", vocab::kBrick},
    {"bf", vocab::kBf},         {"sim", vocab::kSim},
};

bool safe_local(std::string_view local) {
    if (local.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(local[0])) && local[0] != '_') return false;
    return std::all_of(local.begin(), local.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
    });
}

std::string blank_label(const std::string& label) {
    std::string out;
    for (char c : label) out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
    if (out.empty() || !std::isalpha(static_cast<unsigned char>(out[0]))) out = "b" + out;
    return out;
}

std::string iri_token(const std::string& iri, std::vector<bool>* used) {
    for (std::size_t i = 0; i < std::size(kKnownPrefixes); ++i) {
        const auto& p = kKnownPrefixes[i];
        if (iri.size() > p.ns.size() && iri.compare(0, p.ns.size(), p.ns) == 0) {
            std::string_view local(iri.data() + p.ns.size(), iri.size() - p.ns.size());
            if (safe_local(local)) {
                if (used) (*used)[i] = true;
                return std::string(p.prefix) + ":" + std::string(local);
            }
        }
    }
    return "<" + iri + ">";
}

std::string turtle_term(Term t, std::vector<bool>* used) {
    switch (t.kind()) {
        case TermKind::Iri: return iri_token(t.value(), used);
        case TermKind::Blank: return "_:" + blank_label(t.value());
        case TermKind::Literal: {
            std::string out = "\"" + escape_string(t.value()) + "\"";
            if (!t.lang().empty()) return out + "@" + t.lang();
            const auto& dt = t.datatype();
            if (dt == vocab::kXsdString) return out;
            if (dt == vocab::kXsdInteger) {
                const auto& v = t.value();
                bool plain = !v.empty() && std::all_of(v.begin() + ((v[0] == '-' || v[0] == '+') ? 1 : 0), v.end(),
                                                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
                if (plain && v.size() > ((v[0] == '-' || v[0] == '+') ? 1u : 0u)) return v;
            }
            if (dt == vocab::kXsdBoolean && (t.value() == "true" || t.value() == "false")) return t.value();
            return out + "^^" + iri_token(dt, used);
        }
    }
    return {};
}

std::string nt_term(Term t) {
    if (t.is_blank()) return "_:" + blank_label(t.value());
    if (t.is_literal() && t.datatype() == vocab::kXsdString) return "\"" + escape_string(t.value()) + "\"";
    return t.to_string();
}

std::vector<Triple> sorted_lexically(const std::vector<Triple>& ts) {
    std::vector<Triple> out(ts);
    std::sort(out.begin(), out.end(), [](const Triple& a, const Triple& b) {
        if (a.s != b.s) return lexical_less(a.s, b.s);
        if (a.p != b.p) return lexical_less(a.p, b.p);
        return lexical_less(a.o, b.o);
    });
    return out;
}

std::string turtle_body(const std::vector<Triple>& triples, std::vector<bool>& used, const std::string& indent) {
    std::string out;
    auto sorted = sorted_lexically(triples);
    static const Term type = Term::iri(vocab::kRdfType);
    for (std::size_t i = 0; i < sorted.size();) {
        Term s = sorted[i].s;
        out += indent + turtle_term(s, &used);
        bool first_pred = true;
        while (i < sorted.size() && sorted[i].s == s) {
            Term p = sorted[i].p;
            out += first_pred ? " " : " ;\n" + indent + "    ";
            first_pred = false;
            out += p == type ? "a" : turtle_term(p, &used);
            bool first_obj = true;
            while (i < sorted.size() && sorted[i].s == s && sorted[i].p == p) {
                out += first_obj ? " " : ", ";
                first_obj = false;
                out += turtle_term(sorted[i].o, &used);
                ++i;
            }
        }
        out += " .\n";
    }
    return out;
}

std::string prefix_header(const std::vector<bool>& used) {
    std::string out;
    for (std::size_t i = 0; i < std::size(kKnownPrefixes); ++i)
        if (used[i])
            out += "@prefix " + std::string(kKnownPrefixes[i].prefix) + ": <" + std::string(kKnownPrefixes[i].ns) + "> .\n";
    if (!out.empty()) out += "\n";
    return out;
}

}  // namespace

std::string serialize_graph(const Graph& g, Format format) {
    if (format == Format::NTriples || format == Format::NQuads) {
        std::string out;
        for (const auto& t : sorted_lexically(g.triples()))
            out += nt_term(t.s) + " " + nt_term(t.p) + " " + nt_term(t.o) + " .\n";
        return out;
    }
    std::vector<bool> used(std::size(kKnownPrefixes), false);
    std::string body = turtle_body(g.triples(), used, "");
    return prefix_header(used) + body;
}

std::string serialize_dataset(const Dataset& d, Format format) {
    auto names = d.graph_names();
    std::sort(names.begin(), names.end(), [](Term a, Term b) {
        if (a == default_graph()) return b != default_graph();
        if (b == default_graph()) return false;
        return lexical_less(a, b);
    });
    if (format == Format::NQuads || format == Format::NTriples) {
        std::string out;
        for (Term name : names) {
            for (const auto& t : sorted_lexically(d.graph(name).triples())) {
                out += nt_term(t.s) + " " + nt_term(t.p) + " " + nt_term(t.o);
                if (name != default_graph() && format == Format::NQuads) out += " " + nt_term(name);
                out += " .\n";
            }
        }
        return out;
    }
    std::vector<bool> used(std::size(kKnownPrefixes), false);
    std::string body;
    for (Term name : names) {
        const auto g = d.graph(name);
        if (name == default_graph()) {
            body += turtle_body(g.triples(), used, "");
            body += "\n";
        } else {
            body += turtle_term(name, &used) + " {\n" + turtle_body(g.triples(), used, "    ") + "}\n\n";
        }
    }
    return prefix_header(used) + body;
}

std::optional<Format> format_from_extension(std::string_view path) {
    auto dot = path.rfind('.');
    if (dot == std::string_view::npos) return std::nullopt;
    auto ext = path.substr(dot + 1);
    if (ext == "ttl") return Format::Turtle;
    if (ext == "trig") return Format::TriG;
    if (ext == "nt") return Format::NTriples;
    if (ext == "nq") return Format::NQuads;
    return std::nullopt;
}

std::optional<Format> format_from_media_type(std::string_view mt) {
    auto semi = mt.find(';');
    if (semi != std::string_view::npos) mt = mt.substr(0, semi);
    while (!mt.empty() && mt.back() == ' ') mt.remove_suffix(1);
    while (!mt.empty() && mt.front() == ' ') mt.remove_prefix(1);
    if (mt == "text/turtle" || mt == "application/x-turtle") return Format::Turtle;
    if (mt == "application/n-triples" || mt == "text/plain") return Format::NTriples;
    if (mt == "application/trig") return Format::TriG;
    if (mt == "application/n-quads") return Format::NQuads;
    return std::nullopt;
}

std::string_view media_type(Format format) {
    switch (format) {
        case Format::Turtle: return "text/turtle";
        case Format::TriG: return "application/trig";
        case Format::NTriples: return "application/n-triples";
        case Format::NQuads: return "application/n-quads";
    }
    return "text/turtle";
}

bool is_skolem_iri(Term t) {
    return t.is_iri() && t.value().find(vocab::kGenidSegment) != std::string::npos;
}

Dataset skolemize(const Dataset& d, std::string_view base) {
    auto quads = d.quads();
    bool any = std::any_of(quads.begin(), quads.end(), [](const Quad& q) {
        return q.s.is_blank() || q.o.is_blank() || q.g.is_blank();
    });
    if (!any) return d;
    std::map<TermId, Term> mapping;
    auto map_term = [&](Term t) {
        if (!t.is_blank()) return t;
        auto [it, inserted] = mapping.try_emplace(t.id());
        if (inserted) {
            // FNV-1a over the document-scoped label.
            std::uint64_t h = 1469598103934665603ULL;
            for (unsigned char c : t.value()) h = (h ^ c) * 1099511628211ULL;
            char buf[32];
            std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
            it->second = Term::iri(std::string(base) + std::string(vocab::kGenidSegment) + buf);
        }
        return it->second;
    };
    for (auto& q : quads) {
        q.s = map_term(q.s);
        q.o = map_term(q.o);
        q.g = map_term(q.g);
    }
    return Dataset::from_quads(quads);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

}  // namespace ldsim::rdf
