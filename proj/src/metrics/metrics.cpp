#include "ldsim/metrics/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "ldsim/sparql/eval.hpp"

namespace ldsim::metrics {

std::set<std::string> match_faults(const Dataset& d, const FaultQuery& fq, const sparql::EvalContext& ctx) {
    auto sol = sparql::select(d, fq.query, ctx);
    std::set<std::string> out;
    for (const auto& row : sol.rows) out.insert(sparql::binding_key(sol.vars, row));
    return out;
}

std::set<std::string> check_faults(const Dataset& d, const std::vector<FaultQuery>& queries,
                                   const sim::Simulation& sim) {
    std::set<std::string> out;
    for (const auto& fq : queries)
        for (const auto& key : match_faults(d, fq, sim.context("fault:" + fq.id))) out.insert(fq.id + " " + key);
    return out;
}

int FaultTrace::max_length() const {
    int l = 1;
    for (const auto& [id, n] : lengths) l = std::max(l, n);
    return l;
}

std::set<std::string> FaultTrace::gamma(std::int64_t t) const {
    std::set<std::string> out;
    if (t < 0 || t >= std::int64_t(raw.size())) return out;
    for (const auto& key : raw[t]) {
        auto it = lengths.find(key.substr(0, key.find(' ')));
        int l = it == lengths.end() ? 1 : it->second;
        if (t - l + 1 < 0) continue;
        bool all = true;
        for (int j = 1; j < l && all; ++j) all = raw[t - j].count(key) > 0;
        if (all) out.insert(key);
    }
    return out;
}

std::vector<std::size_t> FaultTrace::counts() const {
    std::vector<std::size_t> out;
    for (std::int64_t t = 0; t < std::int64_t(raw.size()); ++t) out.push_back(gamma(t).size());
    return out;
}

const char* to_string(OpClass c) {
    switch (c) {
        case OpClass::Read: return "read";
        case OpClass::Create: return "create";
        case OpClass::Replace: return "replace";
        case OpClass::Delete: return "delete";
    }
    return "?";
}

std::optional<OpClass> op_class_from_string(std::string_view s) {
    if (s == "read") return OpClass::Read;
    if (s == "create") return OpClass::Create;
    if (s == "replace") return OpClass::Replace;
    if (s == "delete") return OpClass::Delete;
    return std::nullopt;
}

namespace {

struct Totals {
    std::size_t eligible = 0, faulty = 0, faults = 0;
};

Totals totals(const FaultTrace& trace) {
    Totals out;
    auto counts = trace.counts();
    for (std::int64_t t = 0; t < std::int64_t(counts.size()); ++t) {
        if (!trace.eligible(t)) continue;
        ++out.eligible;
        out.faulty += counts[t] > 0;
        out.faults += counts[t];
    }
    return out;
}

}  // namespace

double fault_rate(const FaultTrace& trace) {
    Totals s = totals(trace);
    if (s.eligible == 0) throw MetricError("fault rate needs iterations >= sequence length");
    return double(s.faulty) / double(s.eligible);
}

double average_fault_count(const FaultTrace& trace) {
    Totals s = totals(trace);
    return s.faulty == 0 ? 0.0 : double(s.faults) / double(s.faulty);
}

std::optional<double> normalized_fault_count(const FaultTrace& trace, const FaultTrace& dry) {
    Totals d = totals(dry);
    if (d.faults == 0) return std::nullopt;
    return double(totals(trace).faults) / double(d.faults);
}

std::optional<double> read_write_ratio(const std::vector<OperationRecord>& ops) {
    std::size_t reads = 0, writes = 0;
    for (const auto& op : ops) {
        if (!op.succeeded()) continue;
        (op.is_read() ? reads : writes)++;
    }
    if (writes == 0) return std::nullopt;
    return double(reads) / double(writes);
}

MetricsReport compute_metrics(const FaultTrace& trace, const FaultTrace* dry, const std::vector<OperationRecord>& ops) {
    MetricsReport r;
    r.iterations = trace.iterations();
    r.series = trace.counts();
    Totals s = totals(trace);
    r.faulty_slots = s.faulty;
    r.total_faults = s.faults;
    if (s.eligible == 0) {
        r.valid = false;
        r.note = "no eligible slot";
    } else {
        r.fault_rate = fault_rate(trace);
    }
    r.average_fault_count = average_fault_count(trace);
    if (dry) {
        r.dry_total_faults = totals(*dry).faults;
        r.normalized_fault_count = normalized_fault_count(trace, *dry);
    }
    for (const auto& op : ops) {
        if (!op.succeeded()) ++r.rejected;
        else if (op.is_read()) ++r.reads;
        else ++r.writes;
    }
    r.read_write_ratio = read_write_ratio(ops);
    return r;
}

FaultTrace dry_run(const sim::SimEnvironment& env, const sim::RunParams& params,
                   const std::vector<FaultQuery>& queries, std::vector<Dataset>* snapshots) {
    sim::Simulation s(env, params);
    FaultTrace trace;
    for (const auto& q : queries)
        if (q.length != 1) trace.lengths[q.id] = q.length;
    for (;;) {
        if (snapshots) snapshots->push_back(s.dataset());
        trace.raw.push_back(check_faults(s.dataset(), queries, s));
        if (s.finished()) break;
        s.tick();
    }
    return trace;
}

// ---------------------------------------------------------------------------
// TSV

namespace {

std::string escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '\t': out += "\\t"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\\': out += "\\\\"; break;
            default: out += c;
        }
    }
    return out;
}

std::string unescape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\' || i + 1 == s.size()) {
            out += s[i];
            continue;
        }
        char c = s[++i];
        out += c == 't' ? '\t' : c == 'n' ? '\n' : c == 'r' ? '\r' : c;
    }
    return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = line.find('\t', start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        out.push_back(line);
    }
    return out;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string faults_tsv(const FaultTrace& trace) {
    std::string out = "# iterations\t" + std::to_string(trace.iterations()) + "\n";
    for (const auto& [id, l] : trace.lengths) out += "# length\t" + escape(id) + "\t" + std::to_string(l) + "\n";
    out += "timeslot\tfault_id\tbinding_key\n";
    for (std::size_t t = 0; t < trace.raw.size(); ++t)
        for (const auto& key : trace.raw[t]) {
            auto sp = key.find(' ');
            std::string id = key.substr(0, sp), binding = sp == std::string::npos ? "" : key.substr(sp + 1);
            out += std::to_string(t) + "\t" + escape(id) + "\t" + escape(binding) + "\n";
        }
    return out;
}

FaultTrace parse_faults_tsv(const std::string& text) {
    FaultTrace trace;
    bool header = false;
    for (const auto& line : lines_of(text)) {
        if (line.empty()) continue;
        auto f = split_tabs(line);
        if (line[0] == '#') {
            if (f[0] == "# iterations" && f.size() >= 2) trace.raw.resize(std::stoll(f[1]) + 1);
            if (f[0] == "# length" && f.size() >= 3) trace.lengths[unescape(f[1])] = std::stoi(f[2]);
            continue;
        }
        if (!header) {
            header = true;
            continue;
        }
        if (f.size() < 3) throw std::runtime_error("faults.tsv: malformed line: " + line);
        std::size_t t = std::stoull(f[0]);
        if (t >= trace.raw.size()) trace.raw.resize(t + 1);
        trace.raw[t].insert(unescape(f[1]) + " " + unescape(f[2]));
    }
    return trace;
}

std::string ops_tsv(const std::vector<OperationRecord>& ops) {
    std::string out = "seq\ttimeslot\tagent\tmethod\ttarget\tclass\tstatus\tbytes\tdelta_graphs\tpayload\n";
    for (const auto& op : ops) {
        std::string delta;
        for (const auto& g : op.delta_graphs) delta += (delta.empty() ? "" : " ") + g;
        out += std::to_string(op.seq) + "\t" + std::to_string(op.timeslot) + "\t" + escape(op.agent) + "\t" +
               op.method + "\t" + escape(op.target) + "\t" + to_string(op.classification) + "\t" +
               std::to_string(op.status) + "\t" + std::to_string(op.payload_size) + "\t" + escape(delta) + "\t" +
               escape(op.payload) + "\n";
    }
    return out;
}

std::vector<OperationRecord> parse_ops_tsv(const std::string& text) {
    std::vector<OperationRecord> out;
    auto lines = lines_of(text);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto f = split_tabs(lines[i]);
        if (f.size() != 10) throw std::runtime_error("ops.tsv: malformed line " + std::to_string(i + 1));
        OperationRecord op;
        op.seq = std::stoll(f[0]);
        op.timeslot = std::stoll(f[1]);
        op.agent = unescape(f[2]);
        op.method = f[3];
        op.target = unescape(f[4]);
        auto cls = op_class_from_string(f[5]);
        if (!cls) throw std::runtime_error("ops.tsv: unknown class " + f[5]);
        op.classification = *cls;
        op.status = std::stoi(f[6]);
        op.payload_size = std::stoull(f[7]);
        std::string delta = unescape(f[8]);
        for (std::size_t s = 0; s < delta.size();) {
            auto e = delta.find(' ', s);
            if (e == std::string::npos) e = delta.size();
            if (e > s) op.delta_graphs.push_back(delta.substr(s, e - s));
            s = e + 1;
        }
        op.payload = unescape(f[9]);
        out.push_back(std::move(op));
    }
    return out;
}

std::string metrics_tsv(const MetricsReport& r) {
    auto opt = [](const std::optional<double>& v) { return v ? fmt_double(*v) : std::string("NA"); };
    std::string out = "metric\tvalue\n";
    out += "fault_rate\t" + (r.valid ? fmt_double(r.fault_rate) : std::string("NA")) + "\n";
    out += "average_fault_count\t" + fmt_double(r.average_fault_count) + "\n";
    out += "normalized_fault_count\t" + opt(r.normalized_fault_count) + "\n";
    out += "read_write_ratio\t" + opt(r.read_write_ratio) + "\n";
    out += "reads\t" + std::to_string(r.reads) + "\n";
    out += "writes\t" + std::to_string(r.writes) + "\n";
    out += "rejected\t" + std::to_string(r.rejected) + "\n";
    out += "faulty_slots\t" + std::to_string(r.faulty_slots) + "\n";
    out += "total_faults\t" + std::to_string(r.total_faults) + "\n";
    out += "dry_total_faults\t" + std::to_string(r.dry_total_faults) + "\n";
    out += "iterations\t" + std::to_string(r.iterations) + "\n";
    out += "valid\t" + std::string(r.valid ? "true" : "false") + "\n";
    if (!r.note.empty()) out += "note\t" + escape(r.note) + "\n";
    return out;
}

std::map<std::string, std::string> parse_metrics_tsv(const std::string& text) {
    std::map<std::string, std::string> out;
    auto lines = lines_of(text);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto f = split_tabs(lines[i]);
        if (f.size() == 2) out[f[0]] = unescape(f[1]);
    }
    return out;
}

std::vector<std::string> audit_operations(const std::vector<OperationRecord>& ops) {
    std::vector<std::string> out;
    for (const auto& op : ops) {
        if (op.is_read() || !op.succeeded()) {
            if (!op.delta_graphs.empty())
                out.push_back("op " + std::to_string(op.seq) + ": " + op.method + " without effect changed graphs");
            continue;
        }
        // A write of the current contents is an identity and changes nothing.
        if (op.delta_graphs.size() > 1 || (op.delta_graphs.size() == 1 && op.delta_graphs[0] != op.target))
            out.push_back("op " + std::to_string(op.seq) + ": " + op.method + " " + op.target + " changed " +
                          std::to_string(op.delta_graphs.size()) + " graphs");
    }
    return out;
}

}  // namespace ldsim::metrics
