#include "ldsim/rdf/temporal.hpp"

#include <cstdio>
#include <cstdlib>

#include "ldsim/rdf/vocab.hpp"

namespace ldsim::rdf {
namespace {

// Howard Hinnant's days_from_civil.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y += m <= 2;
}

bool digits(std::string_view s, std::size_t pos, std::size_t n, int& out) {
    if (pos + n > s.size()) return false;
    out = 0;
    for (std::size_t i = pos; i < pos + n; ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
        out = out * 10 + (s[i] - '0');
    }
    return true;
}

// Parses hh:mm:ss(.fff)?(Z|(+|-)hh:mm)? starting at pos; returns seconds
// (UTC-adjusted) and requires the whole string to be consumed.
std::optional<double> parse_clock(std::string_view s, std::size_t pos) {
    int hh, mm, ss;
    if (!digits(s, pos, 2, hh) || s.size() < pos + 8 || s[pos + 2] != ':' || !digits(s, pos + 3, 2, mm) ||
        s[pos + 5] != ':' || !digits(s, pos + 6, 2, ss))
        return std::nullopt;
    if (hh > 24 || mm > 59 || ss > 60) return std::nullopt;
    double secs = hh * 3600.0 + mm * 60.0 + ss;
    pos += 8;
    if (pos < s.size() && s[pos] == '.') {
        std::size_t start = pos;
        ++pos;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
        secs += std::strtod(std::string(s.substr(start, pos - start)).c_str(), nullptr);
    }
    if (pos == s.size()) return secs;
    if (s[pos] == 'Z' && pos + 1 == s.size()) return secs;
    if ((s[pos] == '+' || s[pos] == '-') && pos + 6 == s.size() && s[pos + 3] == ':') {
        int th, tm;
        if (!digits(s, pos + 1, 2, th) || !digits(s, pos + 4, 2, tm)) return std::nullopt;
        double off = th * 3600.0 + tm * 60.0;
        return s[pos] == '+' ? secs - off : secs + off;
    }
    return std::nullopt;
}

}  // namespace

std::optional<double> parse_datetime(std::string_view s) {
    std::size_t pos = 0;
    bool neg = !s.empty() && s[0] == '-';
    if (neg) pos = 1;
    std::size_t dash = s.find('-', pos);
    if (dash == std::string_view::npos || dash - pos < 4) return std::nullopt;
    int year = 0;
    if (!digits(s, pos, dash - pos, year)) return std::nullopt;
    int mon, day;
    if (!digits(s, dash + 1, 2, mon) || s.size() <= dash + 6 || s[dash + 3] != '-' || !digits(s, dash + 4, 2, day) ||
        s[dash + 6] != 'T')
        return std::nullopt;
    if (mon < 1 || mon > 12 || day < 1 || day > 31) return std::nullopt;
    auto clock = parse_clock(s, dash + 7);
    if (!clock) return std::nullopt;
    std::int64_t days = days_from_civil(neg ? -year : year, static_cast<unsigned>(mon), static_cast<unsigned>(day));
    return static_cast<double>(days) * 86400.0 + *clock;
}

std::optional<double> parse_time(std::string_view s) { return parse_clock(s, 0); }

std::string format_datetime(std::int64_t epoch) {
    std::int64_t days = epoch >= 0 ? epoch / 86400 : -((-epoch + 86399) / 86400);
    std::int64_t rem = epoch - days * 86400;
    std::int64_t y;
    unsigned m, d;
    civil_from_days(days, y, m, d);
    char buf[48];
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lld", static_cast<long long>(y), m, d,
                  static_cast<long long>(rem / 3600), static_cast<long long>(rem / 60 % 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

std::string format_time(std::int64_t s) {
    s = ((s % 86400) + 86400) % 86400;
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld", static_cast<long long>(s / 3600),
                  static_cast<long long>(s / 60 % 60), static_cast<long long>(s % 60));
    return buf;
}

Term datetime_literal(std::int64_t epoch) { return Term::literal(format_datetime(epoch), vocab::kXsdDateTime); }
Term time_literal(std::int64_t secs) { return Term::literal(format_time(secs), vocab::kXsdTime); }

TemporalKind temporal_kind(Term t) {
    if (!t.is_literal()) return TemporalKind::None;
    const auto& dt = t.datatype();
    if (dt == vocab::kXsdDateTime || dt == vocab::kXsdDateTimeStamp) return TemporalKind::DateTime;
    if (dt == vocab::kXsdTime) return TemporalKind::Time;
    return TemporalKind::None;
}

std::optional<double> temporal_value(Term t) {
    switch (temporal_kind(t)) {
        case TemporalKind::DateTime: return parse_datetime(t.value());
        case TemporalKind::Time: return parse_time(t.value());
        case TemporalKind::None: break;
    }
    return std::nullopt;
}

}  // namespace ldsim::rdf
