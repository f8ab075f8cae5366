#include "ldsim/sparql/eval.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <set>
#include <unordered_set>

#include "ldsim/rdf/temporal.hpp"
#include "ldsim/rdf/vocab.hpp"
#include "ldsim/sim/keyed_rand.hpp"

namespace ldsim::sparql {

using rdf::default_graph;
using rdf::Quad;
using rdf::TermId;
using rdf::Triple;

namespace {

using Row = std::vector<TermId>;
using TripleFn = std::function<void(const Triple&)>;

// Where triple patterns are matched.
struct ActiveGraph {
    bool named = false;
    TermOrVar graph;             // named: constant or variable
    const std::vector<Term>* from = nullptr;  // default graph: FROM list or null for union
};

struct Env {
    const Dataset& d;
    const EvalContext& ctx;
    const std::vector<std::string>& vars;
    std::vector<bool> hidden;
};

Term resolve(const TermOrVar& x, const Row& row) {
    if (x.is_var()) return Term::from_id(row[x.var]);
    return x.term;
}

// Calls f for every distinct triple matching (s, p, o) in the given graph
// scope. `g` is a concrete graph, or invalid for the default-graph scope.
void scan(const Env& env, const ActiveGraph& ag, Term g, Term s, Term p, Term o, const TripleFn& f) {
    if (g.valid()) {
        env.d.match(g, s, p, o, [&](const Quad& q) { f(q.triple()); });
        return;
    }
    std::vector<Triple> found;
    if (ag.from) {
        for (Term name : *ag.from) env.d.match(name, s, p, o, [&](const Quad& q) { found.push_back(q.triple()); });
        if (ag.from->size() > 1) {
            std::sort(found.begin(), found.end());
            found.erase(std::unique(found.begin(), found.end()), found.end());
        }
    } else {
        env.d.match({}, s, p, o, [&](const Quad& q) { found.push_back(q.triple()); });
        std::sort(found.begin(), found.end());
        found.erase(std::unique(found.begin(), found.end()), found.end());
    }
    for (const auto& t : found) f(t);
}

// -- property paths -------------------------------------------------------

void collect_links(const Path& p, std::vector<Term>& out) {
    if (p.kind == Path::Kind::Link) out.push_back(p.iri);
    for (const auto& part : p.parts) collect_links(part, out);
}

void sort_unique(std::vector<Term>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<Term> walk(const Env& env, const ActiveGraph& ag, Term g, const Path& p, Term node, bool forward);

std::vector<Term> walk_set(const Env& env, const ActiveGraph& ag, Term g, const Path& p,
                           const std::vector<Term>& nodes, bool forward) {
    std::vector<Term> out;
    for (Term n : nodes) {
        auto step = walk(env, ag, g, p, n, forward);
        out.insert(out.end(), step.begin(), step.end());
    }
    sort_unique(out);
    return out;
}

std::vector<Term> walk(const Env& env, const ActiveGraph& ag, Term g, const Path& p, Term node, bool forward) {
    std::vector<Term> out;
    switch (p.kind) {
        case Path::Kind::Link:
            if (forward) scan(env, ag, g, node, p.iri, {}, [&](const Triple& t) { out.push_back(t.o); });
            else scan(env, ag, g, {}, p.iri, node, [&](const Triple& t) { out.push_back(t.s); });
            sort_unique(out);
            return out;
        case Path::Kind::Inverse: return walk(env, ag, g, p.parts[0], node, !forward);
        case Path::Kind::Sequence: {
            std::vector<Term> cur{node};
            if (forward) {
                for (const auto& part : p.parts) cur = walk_set(env, ag, g, part, cur, true);
            } else {
                for (auto it = p.parts.rbegin(); it != p.parts.rend(); ++it) cur = walk_set(env, ag, g, *it, cur, false);
            }
            return cur;
        }
        case Path::Kind::OneOrMore: {
            std::unordered_set<TermId> visited;
            std::vector<Term> frontier = walk(env, ag, g, p.parts[0], node, forward);
            while (!frontier.empty()) {
                std::vector<Term> next;
                for (Term t : frontier) {
                    if (!visited.insert(t.id()).second) continue;
                    out.push_back(t);
                    auto step = walk(env, ag, g, p.parts[0], t, forward);
                    for (Term s : step)
                        if (!visited.count(s.id())) next.push_back(s);
                }
                frontier.swap(next);
            }
            sort_unique(out);
            return out;
        }
    }
    return out;
}

// Candidate start nodes when both path ends are unbound.
std::vector<Term> path_nodes(const Env& env, const ActiveGraph& ag, Term g, const Path& p) {
    std::vector<Term> links, out;
    collect_links(p, links);
    for (Term l : links)
        scan(env, ag, g, {}, l, {}, [&](const Triple& t) {
            out.push_back(t.s);
            out.push_back(t.o);
        });
    sort_unique(out);
    return out;
}

// -- expressions --------------------------------------------------------------

std::optional<bool> ebv(Term t) {
    if (!t.is_literal()) return std::nullopt;
    const auto& dt = t.datatype();
    if (dt == vocab::kXsdBoolean) return t.value() == "true" || t.value() == "1";
    if (auto n = t.numeric()) return *n != 0 && !std::isnan(*n);
    if (dt == vocab::kXsdString) return !t.value().empty();
    return std::nullopt;
}

enum class NumType { Integer, Decimal, Double };

std::optional<NumType> num_type(Term t) {
    if (!t.is_literal() || !t.numeric()) return std::nullopt;
    const auto& dt = t.datatype();
    if (t.is_integer_typed()) return NumType::Integer;
    if (dt == vocab::kXsdDecimal) return NumType::Decimal;
    return NumType::Double;
}

Term make_number(double v, NumType type) {
    switch (type) {
        case NumType::Integer: return Term::integer(static_cast<long long>(v));
        case NumType::Decimal: return Term::decimal(v);
        case NumType::Double: return Term::dbl(v);
    }
    return {};
}

bool is_string_like(Term t) {
    return t.is_literal() && (t.datatype() == vocab::kXsdString || t.datatype() == vocab::kRdfLangString);
}

// <0, 0, >0 for ordered comparison; nullopt when the operands are not comparable.
std::optional<int> compare(Term a, Term b) {
    if (!a.valid() || !b.valid()) return std::nullopt;
    if (auto x = a.numeric(), y = b.numeric(); x && y && a.is_literal() && b.is_literal())
        return *x < *y ? -1 : (*x > *y ? 1 : 0);
    auto ka = rdf::temporal_kind(a), kb = rdf::temporal_kind(b);
    if (ka != rdf::TemporalKind::None && ka == kb) {
        auto x = rdf::temporal_value(a), y = rdf::temporal_value(b);
        if (!x || !y) return std::nullopt;
        return *x < *y ? -1 : (*x > *y ? 1 : 0);
    }
    if (is_string_like(a) && is_string_like(b) && a.lang() == b.lang())
        return a.value() < b.value() ? -1 : (a.value() > b.value() ? 1 : 0);
    if (a.datatype() == vocab::kXsdBoolean && b.datatype() == vocab::kXsdBoolean && a.is_literal() && b.is_literal())
        return static_cast<int>(*ebv(a)) - static_cast<int>(*ebv(b));
    return std::nullopt;
}

std::optional<bool> equals(Term a, Term b) {
    if (!a.valid() || !b.valid()) return std::nullopt;
    if (a == b) return true;
    if (auto c = compare(a, b)) return *c == 0;
    return false;
}

std::optional<int> clock_field(Term t, int field) {
    auto kind = rdf::temporal_kind(t);
    if (kind == rdf::TemporalKind::None) return std::nullopt;
    const auto& v = t.value();
    std::size_t pos = 0;
    if (kind == rdf::TemporalKind::DateTime) {
        pos = v.find('T');
        if (pos == std::string::npos) return std::nullopt;
        ++pos;
    }
    if (v.size() < pos + 8) return std::nullopt;
    return std::atoi(v.substr(pos + 3 * field, 2).c_str());
}

class ExprEval {
public:
    ExprEval(const Env& env, const Row& row, const std::vector<int>* scope, const std::vector<int>* key_vars)
        : env_(env), row_(row), scope_(scope), key_vars_(key_vars) {}

    std::optional<Term> eval(const Expr& e) {
        using Op = Expr::Op;
        switch (e.op) {
            case Op::Constant: return e.constant;
            case Op::Variable: {
                if (scope_ && !std::binary_search(scope_->begin(), scope_->end(), e.var)) return std::nullopt;
                Term t = Term::from_id(row_[e.var]);
                if (!t.valid()) return std::nullopt;
                return t;
            }
            case Op::Or: {
                auto a = truth(e.args[0]), b = truth(e.args[1]);
                if ((a && *a) || (b && *b)) return Term::boolean(true);
                if (a && b) return Term::boolean(false);
                return std::nullopt;
            }
            case Op::And: {
                auto a = truth(e.args[0]), b = truth(e.args[1]);
                if ((a && !*a) || (b && !*b)) return Term::boolean(false);
                if (a && b) return Term::boolean(true);
                return std::nullopt;
            }
            case Op::Not: {
                auto a = truth(e.args[0]);
                if (!a) return std::nullopt;
                return Term::boolean(!*a);
            }
            case Op::Eq:
            case Op::Ne: {
                auto a = eval(e.args[0]), b = eval(e.args[1]);
                if (!a || !b) return std::nullopt;
                auto r = equals(*a, *b);
                if (!r) return std::nullopt;
                return Term::boolean(e.op == Op::Eq ? *r : !*r);
            }
            case Op::Lt:
            case Op::Le:
            case Op::Gt:
            case Op::Ge: {
                auto a = eval(e.args[0]), b = eval(e.args[1]);
                if (!a || !b) return std::nullopt;
                auto c = compare(*a, *b);
                if (!c) return std::nullopt;
                bool r = e.op == Op::Lt ? *c < 0 : e.op == Op::Le ? *c <= 0 : e.op == Op::Gt ? *c > 0 : *c >= 0;
                return Term::boolean(r);
            }
            case Op::Add:
            case Op::Sub:
            case Op::Mul:
            case Op::Div: return arithmetic(e);
            case Op::Neg:
            case Op::Plus: {
                auto a = eval(e.args[0]);
                if (!a) return std::nullopt;
                auto type = num_type(*a);
                if (!type) return std::nullopt;
                return e.op == Op::Plus ? *a : make_number(-*a->numeric(), *type);
            }
            case Op::Call: return call(e);
        }
        return std::nullopt;
    }

    std::optional<bool> truth(const Expr& e) {
        auto v = eval(e);
        if (!v) return std::nullopt;
        return ebv(*v);
    }

private:
    std::optional<Term> arithmetic(const Expr& e) {
        auto a = eval(e.args[0]), b = eval(e.args[1]);
        if (!a || !b) return std::nullopt;
        auto ta = num_type(*a), tb = num_type(*b);
        if (!ta || !tb) return std::nullopt;
        NumType type = std::max(*ta, *tb);
        double x = *a->numeric(), y = *b->numeric();
        double r = 0;
        switch (e.op) {
            case Expr::Op::Add: r = x + y; break;
            case Expr::Op::Sub: r = x - y; break;
            case Expr::Op::Mul: r = x * y; break;
            default:
                if (y == 0 && type != NumType::Double) return std::nullopt;
                r = x / y;
                if (type == NumType::Integer) type = NumType::Decimal;
        }
        return make_number(r, type);
    }

    std::string key() const {
        std::vector<std::string> names;
        std::vector<Term> row;
        for (int v : *key_vars_) {
            names.push_back(env_.vars[v]);
            row.push_back(Term::from_id(row_[v]));
        }
        return binding_key(names, row);
    }

    std::optional<Term> call(const Expr& e) {
        const std::string& f = e.function;
        if (f == "RAND") {
            std::string site = env_.ctx.update_id + "#" + std::to_string(e.callsite);
            return Term::dbl(sim::keyed_rand(env_.ctx.seed, env_.ctx.iteration, site, key_vars_ ? key() : ""));
        }
        if (f == "BOUND") {
            int v = e.args[0].var;
            if (scope_ && !std::binary_search(scope_->begin(), scope_->end(), v)) return Term::boolean(false);
            return Term::boolean(row_[v] != rdf::kNoTerm);
        }
        if (f == "IF") {
            auto c = truth(e.args[0]);
            if (!c) return std::nullopt;
            return eval(e.args[*c ? 1 : 2]);
        }
        static const std::string sim_ns(vocab::kSim);
        if (f == sim_ns + "time") return env_.ctx.time_of_day.valid() ? std::optional(env_.ctx.time_of_day) : std::nullopt;
        if (f == sim_ns + "now") return env_.ctx.now.valid() ? std::optional(env_.ctx.now) : std::nullopt;
        if (f == sim_ns + "iteration") return Term::integer(env_.ctx.iteration);

        auto a = eval(e.args[0]);
        if (!a) return std::nullopt;
        Term t = *a;
        if (f == "STR" || f == vocab::kXsdString) {
            if (t.is_blank()) return std::nullopt;
            return Term::literal(t.value());
        }
        if (f == "ISIRI" || f == "ISURI") return Term::boolean(t.is_iri());
        if (f == "ISBLANK") return Term::boolean(t.is_blank());
        if (f == "ISLITERAL") return Term::boolean(t.is_literal());
        if (f == "ISNUMERIC") return Term::boolean(num_type(t).has_value());
        if (f == "DATATYPE") {
            if (!t.is_literal()) return std::nullopt;
            return Term::iri(t.datatype());
        }
        if (f == "HOURS" || f == "MINUTES" || f == "SECONDS") {
            auto v = clock_field(t, f == "HOURS" ? 0 : f == "MINUTES" ? 1 : 2);
            if (!v) return std::nullopt;
            return Term::integer(*v);
        }
        if (f == "ABS" || f == "FLOOR" || f == "CEIL" || f == "ROUND") {
            auto type = num_type(t);
            if (!type) return std::nullopt;
            double x = *t.numeric();
            double r = f == "ABS" ? std::fabs(x) : f == "FLOOR" ? std::floor(x) : f == "CEIL" ? std::ceil(x)
                                                                                                 : std::floor(x + 0.5);
            return make_number(r, *type);
        }
        if (f == vocab::kXsdInteger || f == vocab::kXsdDecimal || f == vocab::kXsdDouble) {
            if (!t.is_literal()) return std::nullopt;
            double v = 0;
            if (auto n = t.numeric()) {
                v = *n;
            } else if (t.datatype() == vocab::kXsdBoolean) {
                v = t.value() == "true" || t.value() == "1" ? 1 : 0;
            } else {
                char* end = nullptr;
                v = std::strtod(t.value().c_str(), &end);
                if (!end || *end != '\0' || t.value().empty()) return std::nullopt;
            }
            if (f == vocab::kXsdInteger) return Term::integer(static_cast<long long>(std::trunc(v)));
            return make_number(v, f == vocab::kXsdDecimal ? NumType::Decimal : NumType::Double);
        }
        if (f == vocab::kXsdBoolean) {
            auto b = ebv(t);
            if (!b) return std::nullopt;
            return Term::boolean(*b);
        }
        if (f == vocab::kXsdTime) {
            if (!t.is_literal()) return std::nullopt;
            std::string lex = t.value();
            if (rdf::temporal_kind(t) == rdf::TemporalKind::DateTime) lex = lex.substr(lex.find('T') + 1);
            if (!rdf::parse_time(lex)) return std::nullopt;
            return Term::literal(lex, vocab::kXsdTime);
        }
        if (f == vocab::kXsdDateTime) {
            if (!t.is_literal() || !rdf::parse_datetime(t.value())) return std::nullopt;
            return Term::literal(t.value(), vocab::kXsdDateTime);
        }
        return std::nullopt;
    }

    const Env& env_;
    const Row& row_;
    const std::vector<int>* scope_;
    const std::vector<int>* key_vars_;
};

bool uses_rand(const Expr& e) {
    if (e.op == Expr::Op::Call && e.function == "RAND") return true;
    return std::any_of(e.args.begin(), e.args.end(), uses_rand);
}

void expr_vars(const Expr& e, std::vector<int>& out) {
    if (e.op == Expr::Op::Variable) out.push_back(e.var);
    for (const auto& a : e.args) expr_vars(a, out);
}

// -- group evaluation -------------------------------------------------------

class Evaluator {
public:
    explicit Evaluator(Env& env) : env_(env) {}

    std::vector<Row> group(const GroupPattern& g, const ActiveGraph& ag, std::vector<Row> rows,
                           std::vector<bool> bound) {
        struct Pending {
            const Expr* expr;
            std::vector<int> vars;
            bool deferred;  // rand() filters wait for the end of the group
        };
        std::vector<Pending> filters;
        for (const auto& e : g.elements) {
            if (e.kind != PatternElement::Kind::Filter) continue;
            Pending p{&e.expr, {}, uses_rand(e.expr)};
            expr_vars(e.expr, p.vars);
            filters.push_back(std::move(p));
        }
        std::vector<int> key_vars = visible(g.scope);

        auto apply_ready = [&](bool at_end) {
            for (auto it = filters.begin(); it != filters.end();) {
                bool ready = at_end;
                if (!ready && !it->deferred) {
                    ready = std::all_of(it->vars.begin(), it->vars.end(), [&](int v) {
                        return bound[v] && std::binary_search(g.scope.begin(), g.scope.end(), v);
                    });
                }
                if (!ready) {
                    ++it;
                    continue;
                }
                std::vector<Row> kept;
                for (auto& r : rows) {
                    ExprEval ev(env_, r, &g.scope, &key_vars);
                    auto t = ev.truth(*it->expr);
                    if (t && *t) kept.push_back(std::move(r));
                }
                rows.swap(kept);
                it = filters.erase(it);
            }
        };

        const auto& els = g.elements;
        for (std::size_t i = 0; i < els.size() && !rows.empty();) {
            const auto& e = els[i];
            switch (e.kind) {
                case PatternElement::Kind::Filter: ++i; continue;
                case PatternElement::Kind::Triple: {
                    std::size_t j = i;
                    std::vector<const TriplePattern*> run;
                    while (j < els.size() && (els[j].kind == PatternElement::Kind::Triple ||
                                              els[j].kind == PatternElement::Kind::Filter)) {
                        if (els[j].kind == PatternElement::Kind::Triple) run.push_back(&els[j].triple);
                        ++j;
                    }
                    while (!run.empty() && !rows.empty()) {
                        auto best = std::max_element(run.begin(), run.end(), [&](auto a, auto b) {
                            return score(*a, bound) < score(*b, bound);
                        });
                        const TriplePattern* tp = *best;
                        run.erase(best);
                        rows = triple(*tp, ag, rows);
                        for (const TermOrVar* x : {&tp->s, &tp->p, &tp->o})
                            if (x->is_var()) bound[x->var] = true;
                        apply_ready(false);
                    }
                    i = j;
                    continue;
                }
                case PatternElement::Kind::Graph: {
                    ActiveGraph inner;
                    inner.named = true;
                    inner.graph = e.graph;
                    rows = graph_block(*e.group, inner, std::move(rows), bound);
                    if (e.graph.is_var()) bound[e.graph.var] = true;
                    for (int v : e.group->scope) bound[v] = true;
                    break;
                }
                case PatternElement::Kind::Group:
                    rows = group(*e.group, ag, std::move(rows), bound);
                    for (int v : e.group->scope) bound[v] = true;
                    break;
                case PatternElement::Kind::Bind: {
                    std::vector<int> in_scope;
                    for (int v : key_vars)
                        if (bound[v]) in_scope.push_back(v);
                    for (auto& r : rows) {
                        ExprEval ev(env_, r, &g.scope, &in_scope);
                        auto t = ev.eval(e.expr);
                        r[e.var] = t ? t->id() : rdf::kNoTerm;
                    }
                    bound[e.var] = true;
                    break;
                }
            }
            apply_ready(false);
            ++i;
        }
        if (!rows.empty()) apply_ready(true);
        else rows.clear();
        return rows;
    }

    std::vector<int> visible(const std::vector<int>& scope) const {
        std::vector<int> out;
        for (int v : scope)
            if (!env_.hidden[v]) out.push_back(v);
        return out;
    }

private:
    static int score(const TriplePattern& tp, const std::vector<bool>& bound) {
        auto is_bound = [&](const TermOrVar& x) { return !x.is_var() || bound[x.var]; };
        int s = 0;
        if (is_bound(tp.s)) s += 8;
        if (is_bound(tp.o)) s += 4;
        if (tp.path) s -= 2;
        else if (is_bound(tp.p)) s += 1;
        return s;
    }

    std::vector<Row> graph_block(const GroupPattern& g, const ActiveGraph& ag, std::vector<Row> rows,
                                 const std::vector<bool>& bound) {
        if (!ag.graph.is_var() || bound[ag.graph.var]) {
            // Graph known for every row: hidden default graph is not addressable.
            if (!ag.graph.is_var() && ag.graph.term == default_graph()) return {};
            return group(g, ag, std::move(rows), bound);
        }
        // Unbound graph variable: the first triple pattern binds it through
        // `triple`; other shapes iterate over every named graph.
        bool starts_with_triple = !g.elements.empty() && g.elements.front().kind == PatternElement::Kind::Triple &&
                                  !g.elements.front().triple.path;
        if (starts_with_triple) return group(g, ag, std::move(rows), bound);
        std::vector<Row> out;
        auto names = env_.d.graph_names();
        auto with_g = bound;
        with_g[ag.graph.var] = true;
        for (Term name : names) {
            if (name == default_graph()) continue;
            std::vector<Row> seeded = rows;
            for (auto& r : seeded) r[ag.graph.var] = name.id();
            auto res = group(g, ag, std::move(seeded), with_g);
            out.insert(out.end(), std::make_move_iterator(res.begin()), std::make_move_iterator(res.end()));
        }
        return out;
    }

    static bool bind(Row& r, const TermOrVar& x, Term value) {
        if (!x.is_var()) return x.term == value;
        TermId& slot = r[x.var];
        if (slot == rdf::kNoTerm) {
            slot = value.id();
            return true;
        }
        return slot == value.id();
    }

    std::vector<Row> triple(const TriplePattern& tp, const ActiveGraph& ag, const std::vector<Row>& rows) {
        std::vector<Row> out;
        for (const Row& r : rows) {
            Term s = resolve(tp.s, r), o = resolve(tp.o, r);
            Term g;
            bool graph_var_free = false;
            if (ag.named) {
                g = resolve(ag.graph, r);
                graph_var_free = !g.valid();
            }
            if (tp.path) {
                path_triple(tp, ag, r, s, o, g, graph_var_free, out);
                continue;
            }
            Term p = resolve(tp.p, r);
            if (graph_var_free) {
                env_.d.match({}, s, p, o, [&](const Quad& q) {
                    if (q.g == default_graph()) return;
                    Row n = r;
                    if (bind(n, tp.s, q.s) && bind(n, tp.p, q.p) && bind(n, tp.o, q.o) && bind(n, ag.graph, q.g))
                        out.push_back(std::move(n));
                });
                continue;
            }
            if (ag.named && g == default_graph()) continue;
            scan(env_, ag, g, s, p, o, [&](const Triple& t) {
                Row n = r;
                if (bind(n, tp.s, t.s) && bind(n, tp.p, t.p) && bind(n, tp.o, t.o)) out.push_back(std::move(n));
            });
        }
        return out;
    }

    void path_triple(const TriplePattern& tp, const ActiveGraph& ag, const Row& r, Term s, Term o, Term g,
                     bool graph_var_free, std::vector<Row>& out) {
        std::vector<Term> graphs;
        if (graph_var_free) {
            for (Term name : env_.d.graph_names())
                if (name != default_graph()) graphs.push_back(name);
        } else {
            if (ag.named && g == default_graph()) return;
            graphs.push_back(g);  // invalid = default scope
        }
        for (Term gg : graphs) {
            auto emit = [&](Term from, Term to) {
                Row n = r;
                if (bind(n, tp.s, from) && bind(n, tp.o, to) && (!graph_var_free || bind(n, ag.graph, gg)))
                    out.push_back(std::move(n));
            };
            if (s.valid()) {
                for (Term t : walk(env_, ag, gg, *tp.path, s, true))
                    if (!o.valid() || t == o) emit(s, t);
            } else if (o.valid()) {
                for (Term t : walk(env_, ag, gg, *tp.path, o, false)) emit(t, o);
            } else {
                for (Term start : path_nodes(env_, ag, gg, *tp.path))
                    for (Term t : walk(env_, ag, gg, *tp.path, start, true)) emit(start, t);
            }
        }
    }

    Env& env_;
};

std::vector<Row> solve(Env& env, const GroupPattern& where, const std::vector<Term>* from) {
    Evaluator ev(env);
    ActiveGraph ag;
    ag.from = from;
    std::vector<Row> rows(1, Row(env.vars.size(), rdf::kNoTerm));
    return ev.group(where, ag, std::move(rows), std::vector<bool>(env.vars.size(), false));
}

std::vector<bool> hidden_flags(const std::vector<std::string>& vars) {
    std::vector<bool> out;
    for (const auto& v : vars) out.push_back(v.rfind("_:", 0) == 0);
    return out;
}

}  // namespace

std::string binding_key(const std::vector<std::string>& vars, const std::vector<Term>& row) {
    std::vector<std::size_t> order(vars.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vars[a] < vars[b]; });
    std::string out;
    for (std::size_t i : order) {
        if (i >= row.size() || !row[i].valid() || vars[i].rfind("_:", 0) == 0) continue;
        if (!out.empty()) out.push_back(' ');
        out += "?" + vars[i] + "=" + row[i].to_string();
    }
    return out;
}

bool ask(const Dataset& d, const Query& q, const EvalContext& ctx) {
    Env env{d, ctx, q.vars, hidden_flags(q.vars)};
    return !solve(env, q.where, q.from.empty() ? nullptr : &q.from).empty();
}

Solutions select(const Dataset& d, const Query& q, const EvalContext& ctx) {
    Env env{d, ctx, q.vars, hidden_flags(q.vars)};
    auto rows = solve(env, q.where, q.from.empty() ? nullptr : &q.from);
    std::vector<Row> projected;
    projected.reserve(rows.size());
    for (const auto& r : rows) {
        Row p;
        p.reserve(q.projection.size());
        for (int v : q.projection) p.push_back(r[v]);
        projected.push_back(std::move(p));
    }
    std::sort(projected.begin(), projected.end());
    projected.erase(std::unique(projected.begin(), projected.end()), projected.end());
    Solutions out;
    for (int v : q.projection) out.vars.push_back(q.vars[v]);
    for (const auto& p : projected) {
        std::vector<Term> row;
        row.reserve(p.size());
        for (TermId id : p) row.push_back(Term::from_id(id));
        out.rows.push_back(std::move(row));
    }
    return out;
}

Dataset eval_update(const Dataset& d, const UpdateOperation& op, const EvalContext& ctx, UpdateStats* stats) {
    Env env{d, ctx, op.vars, hidden_flags(op.vars)};
    std::vector<Row> rows;
    if (op.where.elements.empty()) rows.assign(1, Row(op.vars.size(), rdf::kNoTerm));
    else rows = solve(env, op.where, nullptr);
    if (stats) stats->solutions += rows.size();

    std::vector<Quad> removals, additions;
    auto instantiate = [&](const std::vector<QuadTemplate>& tmpl, std::vector<Quad>& out) {
        for (const auto& r : rows) {
            for (const auto& qt : tmpl) {
                Term s = resolve(qt.s, r), p = resolve(qt.p, r), o = resolve(qt.o, r);
                Term g = qt.g.empty() ? default_graph() : resolve(qt.g, r);
                bool ok = s.valid() && p.valid() && o.valid() && g.valid() && !s.is_literal() && p.is_iri() &&
                          g.is_iri();
                if (!ok) {
                    if (stats) ++stats->skipped_quads;
                    continue;
                }
                out.push_back({s, p, o, g});
            }
        }
    };
    instantiate(op.deletes, removals);
    instantiate(op.inserts, additions);
    return d.apply(removals, additions);
}

Dataset eval_update(const Dataset& d, const Update& u, const EvalContext& ctx, UpdateStats* stats) {
    Dataset cur = d;
    for (const auto& op : u.operations) cur = eval_update(cur, op, ctx, stats);
    return cur;
}

std::vector<Term> eval_path(const Dataset& d, const Path& path, Term start) {
    EvalContext ctx;
    std::vector<std::string> no_vars;
    Env env{d, ctx, no_vars, {}};
    ActiveGraph ag;
    return walk(env, ag, {}, path, start, true);
}

}  // namespace ldsim::sparql
