#pragma once

// Interned RDF terms.
//
// Every distinct (kind, lexical form, datatype, language) tuple is stored
// once in a process-wide pool and referred to by a 32-bit id. Term equality
// is id equality, which is RDF term equality (literals compare by lexical
// form and datatype, never by value).

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace ldsim::rdf {

enum class TermKind : std::uint8_t { Iri, Blank, Literal };

using TermId = std::uint32_t;

// 0 never names a term; it is used as "unbound" by the query engine.
inline constexpr TermId kNoTerm = 0;

class Term {
public:
    Term() = default;

    static Term iri(std::string_view value);
    static Term blank(std::string_view label);
    // Literal with explicit datatype; an empty datatype means xsd:string.
    static Term literal(std::string_view lexical, std::string_view datatype = {});
    static Term lang_literal(std::string_view lexical, std::string_view lang);
    static Term integer(long long v);
    static Term decimal(double v);
    static Term dbl(double v);
    static Term boolean(bool v);

    static Term from_id(TermId id) { Term t; t.id_ = id; return t; }

    TermId id() const { return id_; }
    bool valid() const { return id_ != kNoTerm; }

    TermKind kind() const;
    bool is_iri() const { return valid() && kind() == TermKind::Iri; }
    bool is_blank() const { return valid() && kind() == TermKind::Blank; }
    bool is_literal() const { return valid() && kind() == TermKind::Literal; }

    // IRI string, blank label, or literal lexical form.
    const std::string& value() const;
    // Datatype IRI of a literal (rdf:langString for tagged literals).
    const std::string& datatype() const;
    const std::string& lang() const;

    // Numeric value for xsd numeric literals.
    std::optional<double> numeric() const;
    bool is_integer_typed() const;

    // N-Triples form: <iri>, _:label, "lex"^^<dt>, "lex"@lang, "lex".
    std::string to_string() const;

    // IRI with any fragment removed; the document that carries the term.
    Term document() const;

    friend bool operator==(Term a, Term b) { return a.id_ == b.id_; }
    friend bool operator!=(Term a, Term b) { return a.id_ != b.id_; }
    // Id order: stable within a process, not lexical.
    friend bool operator<(Term a, Term b) { return a.id_ < b.id_; }

private:
    TermId id_ = kNoTerm;
};

// Lexical ordering of terms; use where output must be reproducible.
bool lexical_less(Term a, Term b);

std::string escape_string(std::string_view s);

}  // namespace ldsim::rdf

template <>
struct std::hash<ldsim::rdf::Term> {
    std::size_t operator()(ldsim::rdf::Term t) const noexcept { return std::hash<std::uint32_t>{}(t.id()); }
};
