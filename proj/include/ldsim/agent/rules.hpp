#pragma once

// Condition-action rule programs for the baseline agents.
//
// A program is a sequence of directives; `#` starts a comment outside
// braces:
//
//   PREFIX p: <iri>
//   FOLLOW <iri> p:name ...            extra link predicates for traversal
//   ONCE <iri> | ?x WHERE { pattern }  fetch once per run (fixpoint)
//   READ <iri> | ?x WHERE { pattern }  fetch on every loop
//   RULE name [ONCE]
//     IF { pattern }
//     THEN PUT ?x { template }
//
// Patterns use the query grammar of the SPARQL subset. A directive fetches
// the document of every IRI bound to ?x (the IRI without its fragment). A
// rule PUTs the instantiated template to the document of ?x; with ONCE it
// fires at most once per document.

#include <stdexcept>
#include <string>
#include <vector>

#include "ldsim/sparql/ast.hpp"

namespace ldsim::agent {

class RuleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Directive {
    std::string iri;  // a fixed resource, or empty
    std::string var;
    sparql::Query query;
};

struct Rule {
    std::string name;
    bool once = false;
    sparql::Query condition;
    std::string target_var;
    std::vector<std::string> template_vars;
    std::vector<sparql::QuadTemplate> payload;
};

struct Program {
    std::vector<std::string> follow;
    std::vector<Directive> once;
    std::vector<Directive> reads;
    std::vector<Rule> rules;
};

Program parse_program(const std::string& text, const std::string& base);

// data/rules/<task>.rules
std::string default_rule_dir();
Program load_program(const std::string& task_id, const std::string& dir, const std::string& base);

}  // namespace ldsim::agent
