#pragma once

// Turtle, TriG, N-Triples and N-Quads reading and writing.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ldsim/rdf/dataset.hpp"

namespace ldsim::rdf {

enum class Format { Turtle, TriG, NTriples, NQuads };

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_, column_;
};

// Parses a document. Triples of triple formats (and top-level triples of
// TriG) are placed in `graph`, which defaults to the reserved default graph.
// Relative IRIs are resolved against `base`; a relative IRI with an empty
// base is an error.
Dataset parse_document(std::string_view text, Format format, std::string_view base = {}, Term graph = {});
std::vector<Quad> parse_quads(std::string_view text, Format format, std::string_view base = {}, Term graph = {});

// Graph serializations (Turtle or N-Triples). Turtle output is sorted
// lexically by subject, predicate, object.
std::string serialize_graph(const Graph& g, Format format = Format::Turtle);
// Dataset serializations (TriG or N-Quads); the reserved default graph is
// written as the document's default graph.
std::string serialize_dataset(const Dataset& d, Format format = Format::TriG);

// RFC 3986 reference resolution.
std::string resolve_iri(std::string_view base, std::string_view reference);

std::optional<Format> format_from_extension(std::string_view path);
std::optional<Format> format_from_media_type(std::string_view media_type);
std::string_view media_type(Format format);

// Replaces every blank node by an IRI under `<base>.well-known/genid/`.
// Labels are hashed so the same document skolemizes identically.
Dataset skolemize(const Dataset& d, std::string_view base);
bool is_skolem_iri(Term t);

// Reads a whole file; throws std::runtime_error when it cannot be opened.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace ldsim::rdf
