#include "ldsim/agent/rules.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <map>

#include "ldsim/rdf/io.hpp"
#include "ldsim/sparql/parser.hpp"

namespace ldsim::agent {

namespace {

class Scanner {
public:
    explicit Scanner(const std::string& text) : s_(text) {}

    bool done() {
        skip();
        return i_ >= s_.size();
    }

    std::string word() {
        skip();
        std::size_t start = i_;
        if (i_ < s_.size() && s_[i_] == '<') {
            while (i_ < s_.size() && s_[i_] != '>') ++i_;
            if (i_ == s_.size()) fail("unterminated IRI");
            ++i_;
        } else {
            while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '{') ++i_;
        }
        if (start == i_) fail("expected a word");
        return s_.substr(start, i_ - start);
    }

    std::string peek_word() {
        std::size_t saved = i_;
        std::string w = done() ? std::string() : word();
        i_ = saved;
        return w;
    }

    // The text of a balanced {...} block, braces included.
    std::string block() {
        skip();
        if (i_ >= s_.size() || s_[i_] != '{') fail("expected '{'");
        std::size_t start = i_;
        int depth = 0;
        for (; i_ < s_.size(); ++i_) {
            char c = s_[i_];
            if (c == '"' || c == '\'') {
                for (++i_; i_ < s_.size() && s_[i_] != c; ++i_)
                    if (s_[i_] == '\\') ++i_;
            } else if (c == '{') {
                ++depth;
            } else if (c == '}' && --depth == 0) {
                ++i_;
                return s_.substr(start, i_ - start);
            }
        }
        fail("unbalanced braces");
        return {};
    }

    void expect(const std::string& kw) {
        std::string w = word();
        if (w != kw) fail("expected " + kw + ", found " + w);
    }

    [[noreturn]] void fail(const std::string& msg) const {
        std::size_t line = 1 + std::count(s_.begin(), s_.begin() + std::min(i_, s_.size()), '\n');
        throw RuleError("line " + std::to_string(line) + ": " + msg);
    }

private:
    void skip() {
        for (;;) {
            while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
            if (i_ < s_.size() && s_[i_] == '#') {
                while (i_ < s_.size() && s_[i_] != '\n') ++i_;
                continue;
            }
            return;
        }
    }

    const std::string& s_;
    std::size_t i_ = 0;
};

struct Context {
    std::string base;
    std::string prefix_text;
    std::map<std::string, std::string> prefixes;

    std::string resolve(const std::string& w, Scanner& sc) const {
        if (w.size() >= 2 && w.front() == '<' && w.back() == '>')
            return rdf::resolve_iri(base, w.substr(1, w.size() - 2));
        auto colon = w.find(':');
        if (colon == std::string::npos) sc.fail("expected an IRI, found " + w);
        auto it = prefixes.find(w.substr(0, colon));
        if (it == prefixes.end()) sc.fail("undeclared prefix in " + w);
        return it->second + w.substr(colon + 1);
    }

    sparql::Query query(const std::string& block, Scanner& sc) const {
        try {
            return sparql::parse_query(prefix_text + "SELECT * WHERE " + block, base);
        } catch (const std::exception& e) {
            sc.fail(e.what());
        }
    }
};

bool is_var(const std::string& w) { return w.size() > 1 && (w[0] == '?' || w[0] == '$'); }

bool binds(const sparql::Query& q, const std::string& var) {
    return std::find(q.vars.begin(), q.vars.end(), var) != q.vars.end();
}

Directive directive(Scanner& sc, const Context& ctx) {
    Directive d;
    std::string w = sc.word();
    if (is_var(w)) {
        d.var = w.substr(1);
        sc.expect("WHERE");
        d.query = ctx.query(sc.block(), sc);
        if (!binds(d.query, d.var)) sc.fail("?" + d.var + " is not bound by the pattern");
    } else {
        d.iri = ctx.resolve(w, sc);
    }
    return d;
}

Rule rule(Scanner& sc, const Context& ctx) {
    Rule r;
    r.name = sc.word();
    if (sc.peek_word() == "ONCE") {
        sc.word();
        r.once = true;
    }
    sc.expect("IF");
    std::string cond = sc.block();
    r.condition = ctx.query(cond, sc);
    sc.expect("THEN");
    sc.expect("PUT");
    std::string target = sc.word();
    if (!is_var(target)) sc.fail("PUT target must be a variable");
    r.target_var = target.substr(1);
    std::string tmpl = sc.block();
    sparql::Update u;
    try {
        u = sparql::parse_update(ctx.prefix_text + "INSERT " + tmpl + " WHERE " + cond, ctx.base);
    } catch (const std::exception& e) {
        sc.fail(e.what());
    }
    r.payload = u.operations.at(0).inserts;
    r.template_vars = u.operations.at(0).vars;
    if (!binds(r.condition, r.target_var)) sc.fail("rule " + r.name + ": ?" + r.target_var + " is unbound");
    return r;
}

}  // namespace

Program parse_program(const std::string& text, const std::string& base) {
    Program p;
    Context ctx{base, {}, {}};
    Scanner sc(text);
    while (!sc.done()) {
        std::string kw = sc.word();
        if (kw == "PREFIX") {
            std::string name = sc.word();
            std::string iri = sc.word();
            if (name.empty() || name.back() != ':' || iri.front() != '<') sc.fail("malformed PREFIX");
            ctx.prefixes[name.substr(0, name.size() - 1)] = iri.substr(1, iri.size() - 2);
            ctx.prefix_text += "PREFIX " + name + " " + iri + "\n";
        } else if (kw == "FOLLOW") {
            for (std::string w = sc.peek_word(); !w.empty() && (w[0] == '<' || w.find(':') != std::string::npos);
                 w = sc.peek_word())
                p.follow.push_back(ctx.resolve(sc.word(), sc));
        } else if (kw == "ONCE") {
            p.once.push_back(directive(sc, ctx));
        } else if (kw == "READ") {
            p.reads.push_back(directive(sc, ctx));
        } else if (kw == "RULE") {
            p.rules.push_back(rule(sc, ctx));
        } else {
            sc.fail("unknown directive " + kw);
        }
    }
    return p;
}

std::string default_rule_dir() {
    if (const char* env = std::getenv("LDSIM_DATA_DIR")) return std::string(env) + "/rules";
#ifdef LDSIM_DATA_DIR
    return std::string(LDSIM_DATA_DIR) + "/rules";
#else
    return "data/rules";
#endif
}

Program load_program(const std::string& task_id, const std::string& dir, const std::string& base) {
    std::filesystem::path path = std::filesystem::path(dir) / (task_id + ".rules");
    if (!std::filesystem::exists(path)) throw RuleError("missing " + path.string());
    try {
        return parse_program(rdf::read_file(path.string()), base);
    } catch (const RuleError& e) {
        throw RuleError(path.string() + ": " + e.what());
    }
}

}  // namespace ldsim::agent
