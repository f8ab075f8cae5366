#include "ldsim/tasks/tasks.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "ldsim/rdf/io.hpp"
#include "ldsim/rdf/vocab.hpp"
#include "ldsim/sparql/parser.hpp"

namespace ldsim::tasks {

namespace fs = std::filesystem;

const std::vector<std::string>& task_ids() {
    static const std::vector<std::string> ids = {"TS1", "TS2", "TS3", "TC1", "TC2",
                                                 "TC3", "TC4", "TC5", "TC6", "TC7"};
    return ids;
}

std::string default_task_dir() {
    if (const char* env = std::getenv("LDSIM_DATA_DIR")) return std::string(env) + "/tasks";
#ifdef LDSIM_DATA_DIR
    return std::string(LDSIM_DATA_DIR) + "/tasks";
#else
    return "data/tasks";
#endif
}

namespace {

std::string trim(std::string s) {
    auto ws = [](unsigned char c) { return std::isspace(c); };
    while (!s.empty() && ws(s.back())) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && ws(s[i])) ++i;
    return s.substr(i);
}

std::map<std::string, std::string> read_properties(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw TaskError("task.properties: expected key=value: " + line);
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

std::vector<fs::path> files_in(const fs::path& dir, const std::string& ext) {
    std::vector<fs::path> out;
    if (!fs::is_directory(dir)) return out;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ext) out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

int int_property(const std::map<std::string, std::string>& p, const std::string& key, int fallback) {
    auto it = p.find(key);
    if (it == p.end()) return fallback;
    try {
        return std::stoi(it->second);
    } catch (const std::exception&) {
        throw TaskError("task.properties: " + key + " is not an integer");
    }
}

bool bool_property(const std::map<std::string, std::string>& p, const std::string& key) {
    auto it = p.find(key);
    return it != p.end() && it->second == "true";
}

std::vector<sim::NamedUpdate> load_updates(const fs::path& dir, const std::string& id, const std::string& base) {
    std::vector<sim::NamedUpdate> out;
    for (const auto& f : files_in(dir, ".ru")) {
        std::string name = id + "/" + dir.filename().string() + "/" + f.stem().string();
        try {
            out.push_back({name, sparql::parse_update(rdf::read_file(f.string()), base)});
        } catch (const std::exception& e) {
            throw TaskError(f.string() + ": " + e.what());
        }
    }
    return out;
}

}  // namespace

TaskSpec load_task(const std::string& id, const std::string& root, const std::string& base) {
    if (std::find(task_ids().begin(), task_ids().end(), id) == task_ids().end())
        throw TaskError("unknown task: " + id);
    fs::path dir = fs::path(root) / id;
    fs::path props = dir / "task.properties";
    if (!fs::exists(props)) throw TaskError("missing " + props.string());

    TaskSpec t;
    t.id = id;
    t.properties = read_properties(rdf::read_file(props.string()));
    const auto& p = t.properties;
    t.title = p.count("title") ? p.at("title") : id;
    t.task_class = p.count("class") && p.at("class") == "continuous" ? TaskClass::Continuous : TaskClass::Single;
    t.duration = int_property(p, "duration", 1440);
    t.reasoning = bool_property(p, "reasoning");
    t.sunlight = bool_property(p, "sunlight");
    t.occupancy = bool_property(p, "occupancy");
    t.scope = int_property(p, "scope", 0);
    t.ideal_reads = int_property(p, "ideal.reads", 0);
    t.ideal_writes = int_property(p, "ideal.writes", 0);
    t.ideal_loops = int_property(p, "ideal.loops", 0);
    if (p.count("oracle.reads")) {
        std::istringstream in(p.at("oracle.reads"));
        for (std::string v; in >> v;) t.oracle_reads.push_back(v);
    }

    t.init_updates = load_updates(dir / "init", id, base);
    t.updates = load_updates(dir / "update", id, base);
    for (const auto& f : files_in(dir / "fault", ".rq")) {
        metrics::FaultQuery fq;
        fq.id = f.stem().string();
        try {
            fq.query = sparql::parse_query(rdf::read_file(f.string()), base);
        } catch (const std::exception& e) {
            throw TaskError(f.string() + ": " + e.what());
        }
        if (fq.query.form != sparql::Query::Form::Select) throw TaskError(f.string() + ": fault queries must be SELECT");
        auto& vars = fq.query.vars;
        bool binds_n = false;
        for (int i : fq.query.projection) binds_n = binds_n || vars[i] == "n";
        if (!binds_n) throw TaskError(f.string() + ": fault query must project ?n");
        fq.length = int_property(p, "length." + fq.id, 1);
        if (fq.length < 1) throw TaskError(f.string() + ": sequence length must be at least 1");
        t.faults.push_back(std::move(fq));
    }
    if (t.faults.empty()) throw TaskError("task " + id + " has no fault query");
    return t;
}

sim::SimEnvironment make_environment(const TaskSpec& task, const Dataset& building, std::uint64_t seed,
                                     const std::string& base) {
    sim::SimEnvironment env;
    env.initial = building;
    env.init_updates = task.init_updates;
    env.updates = task.updates;
    env.seed = seed;
    env.sunlight = task.sunlight;
    env.occupancy = task.occupancy;
    env.base = base;
    return env;
}

sim::RunParams run_params(const TaskSpec& task, std::int64_t timeslot_ms) {
    sim::RunParams p;
    p.iterations = task.duration;
    p.timeslot_ms = timeslot_ms;
    return p;
}

Term graph_of(Term node) {
    const auto& v = node.value();
    return Term::iri(v.substr(0, v.find('#')));
}

Term toggled(Term value) { return Term::literal(value.value() == "on" ? "off" : "on"); }

std::vector<rdf::Triple> toggled_graph(const Dataset& d, Term node) {
    Term g = graph_of(node);
    std::vector<rdf::Triple> out;
    for (const auto& t : d.graph(g)) {
        if (t.s == node && t.p.value() == vocab::kRdfValue) out.push_back({t.s, t.p, toggled(t.o)});
        else out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

struct FaultRow {
    Term node;
    std::map<std::string, Term> vars;
};

std::vector<FaultRow> fault_rows(const TaskSpec& task, const sim::Simulation& s,
                                 const std::vector<std::string>& extra) {
    std::vector<FaultRow> out;
    for (const auto& fq : task.faults) {
        sparql::Query q = fq.query;
        q.projection.clear();
        std::vector<std::string> wanted = {"n"};
        wanted.insert(wanted.end(), extra.begin(), extra.end());
        for (const auto& name : wanted) {
            auto it = std::find(q.vars.begin(), q.vars.end(), name);
            if (it != q.vars.end()) q.projection.push_back(int(it - q.vars.begin()));
        }
        auto sol = sparql::select(s.dataset(), q, s.context("fault:" + fq.id));
        for (const auto& row : sol.rows) {
            FaultRow r;
            for (std::size_t i = 0; i < sol.vars.size(); ++i) {
                if (sol.vars[i] == "n") r.node = row[i];
                else if (row[i].valid()) r.vars[sol.vars[i]] = row[i];
            }
            if (r.node.valid()) out.push_back(std::move(r));
        }
    }
    return out;
}

}  // namespace

std::set<Term> faulty_lights(const TaskSpec& task, const sim::Simulation& s) {
    std::set<Term> out;
    for (const auto& r : fault_rows(task, s, {})) out.insert(r.node);
    return out;
}

bool single_loop_check(const TaskSpec& task, const sim::SimEnvironment& env, const sim::RunParams& params,
                       std::int64_t from, std::int64_t ticks) {
    sim::Simulation s(env, params);
    while (s.iteration() < from && !s.finished()) s.tick();
    Dataset d = s.dataset();
    for (Term node : faulty_lights(task, s)) d = d.with_graph(graph_of(node), toggled_graph(d, node));
    s.set_dataset(std::move(d));
    if (!faulty_lights(task, s).empty()) return false;
    for (std::int64_t i = 0; i < ticks && !s.finished(); ++i) {
        s.tick();
        if (!faulty_lights(task, s).empty()) return false;
    }
    return true;
}

OraclePlan oracle_plan(const TaskSpec& task, const sim::Simulation& s) {
    OraclePlan plan;
    std::set<std::string> read_seen;
    std::set<Term> fixed;
    for (const auto& r : fault_rows(task, s, task.oracle_reads)) {
        if (fixed.count(r.node)) continue;
        for (const auto& v : task.oracle_reads) {
            auto it = r.vars.find(v);
            if (it != r.vars.end() && read_seen.insert(it->second.value()).second)
                plan.reads.push_back(it->second.value());
        }
        fixed.insert(r.node);
        plan.writes.push_back({graph_of(r.node).value(), toggled_graph(s.dataset(), r.node)});
    }
    return plan;
}

}  // namespace ldsim::tasks
