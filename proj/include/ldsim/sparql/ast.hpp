#pragma once

// Syntax trees for the supported query/update subset.
//
// Variables are numbered per statement; `vars` maps an index back to its
// name. Blank nodes in patterns become hidden variables whose names start
// with "_:".

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldsim/rdf/term.hpp"

namespace ldsim::sparql {

using rdf::Term;

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(const std::string& what, std::size_t line, std::size_t column)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_, column_;
};

// Raised for valid SPARQL that lies outside the supported subset.
class UnsupportedFeature : public SyntaxError {
public:
    UnsupportedFeature(const std::string& construct, std::size_t line, std::size_t column)
        : SyntaxError("unsupported construct: " + construct, line, column), construct_(construct) {}
    const std::string& construct() const { return construct_; }

private:
    std::string construct_;
};

struct TermOrVar {
    Term term;
    int var = -1;
    bool is_var() const { return var >= 0; }
    bool empty() const { return var < 0 && !term.valid(); }
    static TermOrVar of(Term t) { return {t, -1}; }
    static TermOrVar variable(int v) { return {Term(), v}; }
};

struct Path {
    enum class Kind { Link, Inverse, Sequence, OneOrMore };
    Kind kind = Kind::Link;
    Term iri;                 // Link
    std::vector<Path> parts;  // Inverse/OneOrMore: one part; Sequence: two or more
};

struct TriplePattern {
    TermOrVar s;
    TermOrVar p;               // empty when `path` is used
    std::shared_ptr<Path> path;  // set for anything other than a plain IRI or variable
    TermOrVar o;
};

struct Expr {
    enum class Op {
        Constant, Variable,
        Or, And, Not,
        Eq, Ne, Lt, Le, Gt, Ge,
        Add, Sub, Mul, Div, Neg, Plus,
        Call,
    };
    Op op = Op::Constant;
    Term constant;
    int var = -1;
    std::string function;  // Call: upper-cased built-in name or full IRI
    int callsite = -1;     // Call to rand(): statement-wide call-site number
    std::vector<Expr> args;
};

struct GroupPattern;

struct PatternElement {
    enum class Kind { Triple, Graph, Group, Filter, Bind };
    Kind kind = Kind::Triple;
    TriplePattern triple;                 // Triple
    TermOrVar graph;                      // Graph
    std::shared_ptr<GroupPattern> group;  // Graph, Group
    Expr expr;                            // Filter, Bind
    int var = -1;                         // Bind target
};

struct GroupPattern {
    std::vector<PatternElement> elements;
    // Variables bound somewhere inside this group (including nested groups).
    std::vector<int> scope;
};

struct Query {
    enum class Form { Ask, Select };
    Form form = Form::Select;
    std::vector<std::string> vars;
    std::vector<int> projection;  // Select; all visible variables for SELECT *
    std::vector<Term> from;
    GroupPattern where;
};

struct QuadTemplate {
    TermOrVar s, p, o;
    TermOrVar g;  // empty means the default graph
};

struct UpdateOperation {
    std::vector<std::string> vars;
    std::vector<QuadTemplate> deletes;
    std::vector<QuadTemplate> inserts;
    GroupPattern where;
};

struct Update {
    std::vector<UpdateOperation> operations;
};

}  // namespace ldsim::sparql
