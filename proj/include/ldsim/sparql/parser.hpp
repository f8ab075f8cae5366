#pragma once

#include <string_view>

#include "ldsim/sparql/ast.hpp"

namespace ldsim::sparql {

// Parses ASK or SELECT. Throws SyntaxError, or UnsupportedFeature for
// constructs outside the subset.
Query parse_query(std::string_view text, std::string_view base = {});

// Parses one or more ';'-separated update operations.
Update parse_update(std::string_view text, std::string_view base = {});

}  // namespace ldsim::sparql
