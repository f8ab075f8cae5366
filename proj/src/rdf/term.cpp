#include "ldsim/rdf/term.hpp"

#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>
#include <cctype>
#include <cstdlib>

#include "ldsim/rdf/vocab.hpp"

namespace ldsim::rdf {
namespace {

struct TermData {
    TermKind kind;
    std::string value;
    std::string datatype;
    std::string lang;
    std::optional<double> numeric;
    bool integer_typed = false;
};

bool is_numeric_datatype(std::string_view dt) {
    return dt == vocab::kXsdInteger || dt == vocab::kXsdDecimal || dt == vocab::kXsdDouble ||
           dt == vocab::kXsdFloat || dt == vocab::kXsdInt || dt == vocab::kXsdLong;
}

// Append-only chunked storage: readers index without locking because an id
// is only handed out after its slot has been written.
class TermPool {
public:
    static TermPool& instance() {
        static TermPool pool;
        return pool;
    }

    TermId intern(TermKind kind, std::string_view value, std::string_view datatype, std::string_view lang) {
        std::string key;
        key.reserve(value.size() + datatype.size() + lang.size() + 4);
        key.push_back(static_cast<char>('0' + static_cast<int>(kind)));
        key.append(value);
        key.push_back('\x1f');
        key.append(datatype);
        key.push_back('\x1f');
        key.append(lang);

        std::lock_guard lock(mutex_);
        if (auto it = index_.find(key); it != index_.end()) return it->second;

        TermId id = next_;
        std::size_t chunk = id / kChunkSize;
        if (chunk >= kMaxChunks) throw std::length_error("term pool exhausted");
        if (!chunks_[chunk]) chunks_[chunk] = std::make_unique<std::array<TermData, kChunkSize>>();
        TermData& d = (*chunks_[chunk])[id % kChunkSize];
        d.kind = kind;
        d.value = std::string(value);
        d.datatype = std::string(datatype);
        d.lang = std::string(lang);
        if (kind == TermKind::Literal && is_numeric_datatype(datatype)) {
            double v = 0;
            auto s = std::string(value);
            char* end = nullptr;
            v = std::strtod(s.c_str(), &end);
            if (end && *end == '\0' && !s.empty()) d.numeric = v;
            d.integer_typed = datatype == vocab::kXsdInteger || datatype == vocab::kXsdInt || datatype == vocab::kXsdLong;
        }
        index_.emplace(std::move(key), id);
        ++next_;
        return id;
    }

    const TermData& get(TermId id) const {
        if (id == kNoTerm) throw std::logic_error("access to unbound term");
        return (*chunks_[id / kChunkSize])[id % kChunkSize];
    }

private:
    static constexpr std::size_t kChunkSize = 1 << 14;
    static constexpr std::size_t kMaxChunks = 1 << 12;

    TermPool() : chunks_(kMaxChunks) {
        // Slot 0 is reserved for kNoTerm.
        chunks_[0] = std::make_unique<std::array<TermData, kChunkSize>>();
    }

    std::mutex mutex_;
    std::unordered_map<std::string, TermId> index_;
    std::vector<std::unique_ptr<std::array<TermData, kChunkSize>>> chunks_;
    TermId next_ = 1;
};

std::string format_double(double v, bool decimal_form) {
    if (decimal_form && std::floor(v) == v && std::fabs(v) < 1e15) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.1f", v);
        return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // Prefer the shortest form that round-trips.
    for (int prec = 1; prec <= 17; ++prec) {
        char tmp[64];
        std::snprintf(tmp, sizeof tmp, "%.*g", prec, v);
        if (std::strtod(tmp, nullptr) == v) {
            std::snprintf(buf, sizeof buf, "%s", tmp);
            break;
        }
    }
    std::string s = buf;
    if (decimal_form) {
        if (s.find('e') != std::string::npos || s.find('E') != std::string::npos) {
            std::snprintf(buf, sizeof buf, "%.6f", v);
            s = buf;
        }
        if (s.find('.') == std::string::npos) s += ".0";
    } else if (s.find('e') == std::string::npos && s.find('E') == std::string::npos) {
        if (s.find('.') == std::string::npos && s.find("inf") == std::string::npos &&
            s.find("nan") == std::string::npos)
            s += ".0";
        s += "E0";
    }
    return s;
}

}  // namespace

Term Term::iri(std::string_view value) {
    return from_id(TermPool::instance().intern(TermKind::Iri, value, {}, {}));
}

Term Term::blank(std::string_view label) {
    return from_id(TermPool::instance().intern(TermKind::Blank, label, {}, {}));
}

Term Term::literal(std::string_view lexical, std::string_view datatype) {
    if (datatype.empty()) datatype = vocab::kXsdString;
    return from_id(TermPool::instance().intern(TermKind::Literal, lexical, datatype, {}));
}

Term Term::lang_literal(std::string_view lexical, std::string_view lang) {
    std::string lower(lang);
    for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return from_id(TermPool::instance().intern(TermKind::Literal, lexical, vocab::kRdfLangString, lower));
}

Term Term::integer(long long v) { return literal(std::to_string(v), vocab::kXsdInteger); }
Term Term::decimal(double v) { return literal(format_double(v, true), vocab::kXsdDecimal); }
Term Term::dbl(double v) { return literal(format_double(v, false), vocab::kXsdDouble); }
Term Term::boolean(bool v) { return literal(v ? "true" : "false", vocab::kXsdBoolean); }

TermKind Term::kind() const { return TermPool::instance().get(id_).kind; }
const std::string& Term::value() const { return TermPool::instance().get(id_).value; }
const std::string& Term::datatype() const { return TermPool::instance().get(id_).datatype; }
const std::string& Term::lang() const { return TermPool::instance().get(id_).lang; }
std::optional<double> Term::numeric() const { return TermPool::instance().get(id_).numeric; }
bool Term::is_integer_typed() const { return TermPool::instance().get(id_).integer_typed; }

std::string escape_string(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string Term::to_string() const {
    if (!valid()) return "UNDEF";
    const auto& d = TermPool::instance().get(id_);
    switch (d.kind) {
        case TermKind::Iri: return "<" + d.value + ">";
        case TermKind::Blank: return "_:" + d.value;
        case TermKind::Literal: {
            std::string out = "\"" + escape_string(d.value) + "\"";
            if (!d.lang.empty()) return out + "@" + d.lang;
            if (d.datatype == vocab::kXsdString) return out;
            return out + "^^<" + d.datatype + ">";
        }
    }
    return {};
}

Term Term::document() const {
    if (!is_iri()) return *this;
    const auto& v = value();
    auto hash = v.find('#');
    if (hash == std::string::npos) return *this;
    return iri(std::string_view(v).substr(0, hash));
}

bool lexical_less(Term a, Term b) {
    if (a == b) return false;
    if (!a.valid() || !b.valid()) return !a.valid();
    if (a.kind() != b.kind()) return a.kind() < b.kind();
    if (a.value() != b.value()) return a.value() < b.value();
    if (a.datatype() != b.datatype()) return a.datatype() < b.datatype();
    return a.lang() < b.lang();
}

}  // namespace ldsim::rdf
