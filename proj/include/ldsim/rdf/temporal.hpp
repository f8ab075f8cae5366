#pragma once

// xsd:dateTime and xsd:time values as seconds.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "ldsim/rdf/term.hpp"

namespace ldsim::rdf {

// Seconds since 1970-01-01T00:00:00Z. A missing timezone is read as UTC.
std::optional<double> parse_datetime(std::string_view lexical);
// Seconds since midnight, shifted to UTC when a timezone is present.
std::optional<double> parse_time(std::string_view lexical);

// Canonical forms without timezone, e.g. 2024-06-01T08:00:00 and 08:00:00.
std::string format_datetime(std::int64_t epoch_seconds);
std::string format_time(std::int64_t seconds_of_day);

Term datetime_literal(std::int64_t epoch_seconds);
Term time_literal(std::int64_t seconds_of_day);

enum class TemporalKind { None, DateTime, Time };

// Kind and value of a dateTime/time literal; None for anything else.
TemporalKind temporal_kind(Term t);
std::optional<double> temporal_value(Term t);

}  // namespace ldsim::rdf
