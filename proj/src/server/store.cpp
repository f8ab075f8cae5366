#include "ldsim/server/store.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "ldsim/rdf/io.hpp"
#include "ldsim/rdf/temporal.hpp"
#include "ldsim/rdf/vocab.hpp"

namespace ldsim::server {

namespace v = ldsim::vocab;
using metrics::OpClass;
using metrics::OperationRecord;
using Clock = std::chrono::steady_clock;

namespace {

std::set<std::string> actuatable_graphs(const Dataset& d) {
    std::set<std::string> out;
    d.match({}, {}, Term::iri(v::kRdfType), Term::iri(v::kSosaActuatableProperty), [&](const rdf::Quad& q) {
        if (q.g != rdf::default_graph()) out.insert(q.g.value());
    });
    return out;
}

std::string ntriples(std::span<const rdf::Triple> triples) {
    return rdf::serialize_graph(rdf::Graph(Term::iri("urn:x-ldsim:payload"),
                                           std::vector<rdf::Triple>(triples.begin(), triples.end())),
                                rdf::Format::NTriples);
}

rdf::Format request_format(std::string_view content_type) {
    auto semi = content_type.find(';');
    auto f = rdf::format_from_media_type(content_type.substr(0, semi));
    if (!f || *f == rdf::Format::TriG || *f == rdf::Format::NQuads) return rdf::Format::Turtle;
    return *f;
}

Response text(int status, std::string body) { return {status, std::move(body), "text/plain"}; }

}  // namespace

GraphStore::GraphStore(sim::SimEnvironment env, std::vector<metrics::FaultQuery> faults, Policy policy,
                       bool manual_clock)
    : env_(std::move(env)), faults_(std::move(faults)), policy_(policy), manual_clock_(manual_clock) {
    sim_.emplace(env_, sim::RunParams{});
    writable_ = actuatable_graphs(sim_->dataset());
    publish();
}

GraphStore::~GraphStore() {
    stop_ = true;
    if (clock_.joinable()) clock_.join();
}

GraphStore::Snapshot GraphStore::current() const {
    std::lock_guard lock(snap_mu_);
    return snap_;
}

void GraphStore::publish() {
    Snapshot s{sim_->dataset(), sim_->iteration(), phase_};
    std::lock_guard lock(snap_mu_);
    snap_ = std::move(s);
}

Phase GraphStore::phase() const { return current().phase; }
std::int64_t GraphStore::iteration() const { return current().t; }
Dataset GraphStore::snapshot() const { return current().dataset; }

sim::RunParams GraphStore::params() const {
    std::lock_guard lock(write_mu_);
    return sim_->params();
}

bool GraphStore::writable(const std::string& target) const {
    std::lock_guard lock(write_mu_);
    return writable_.count(target) > 0;
}

void GraphStore::record(OperationRecord op) {
    std::lock_guard lock(log_mu_);
    op.seq = next_seq_++;
    ops_.push_back(std::move(op));
}

Response GraphStore::get(const std::string& target, std::string_view accept, const std::string& agent) {
    Snapshot s = current();
    OperationRecord op;
    op.timeslot = s.t;
    op.agent = agent;
    op.method = "GET";
    op.target = target;
    op.classification = OpClass::Read;
    Response r;
    Term name = Term::iri(target);
    if (s.phase == Phase::Finished && target != sim_iri()) {
        r = text(410, "run finished\n");
    } else if (name == rdf::default_graph() || !s.dataset.has_graph(name)) {
        r = text(404, "not found\n");
    } else {
        auto fmt = accept.find("application/n-triples") != std::string_view::npos ? rdf::Format::NTriples
                                                                                   : rdf::Format::Turtle;
        r = {200, rdf::serialize_graph(s.dataset.graph(name), fmt), std::string(rdf::media_type(fmt))};
    }
    op.status = r.status;
    record(std::move(op));
    return r;
}

Response GraphStore::put(const std::string& target, std::string_view body, std::string_view content_type,
                         const std::string& agent) {
    if (target == sim_iri()) {
        sim::RunParams p;
        try {
            p = parse_run_params(body, env_.base);
        } catch (const std::exception& e) {
            return text(400, std::string(e.what()) + "\n");
        }
        return start(p);
    }
    return write("PUT", target, body, content_type, agent);
}

Response GraphStore::post(const std::string& target, std::string_view body, std::string_view content_type,
                          const std::string& agent) {
    return write("POST", target, body, content_type, agent);
}

Response GraphStore::del(const std::string& target, const std::string& agent) {
    return write("DELETE", target, {}, {}, agent);
}

Response GraphStore::write(const std::string& method, const std::string& target, std::string_view body,
                           std::string_view content_type, const std::string& agent) {
    OperationRecord op;
    op.agent = agent;
    op.method = method;
    op.target = target;
    op.payload_size = body.size();
    op.classification = method == "DELETE" ? OpClass::Delete : OpClass::Replace;

    auto finish = [&](Response r) {
        op.status = r.status;
        record(std::move(op));
        return r;
    };

    // Parse outside the lock.
    std::vector<rdf::Triple> triples;
    std::string parse_error;
    if (method != "DELETE") {
        try {
            for (const auto& q : rdf::parse_quads(body, request_format(content_type), target)) {
                bool own = q.s.is_iri() && (q.s.value() == target || q.s.value().rfind(target + "#", 0) == 0);
                if (!own) {
                    parse_error = "triple subject " + q.s.to_string() + " is not " + target + " or a fragment of it";
                    break;
                }
                triples.push_back({q.s, q.p, q.o});
            }
        } catch (const std::exception& e) {
            parse_error = e.what();
        }
        if (parse_error.empty() && triples.empty()) parse_error = "empty graph";
        std::sort(triples.begin(), triples.end());
        triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
    }

    std::lock_guard lock(write_mu_);
    op.timeslot = sim_->iteration();
    if (phase_ == Phase::Ready) return finish(text(409, "no run in progress\n"));
    if (phase_ == Phase::Finished) return finish(text(410, "run finished\n"));
    if ((method == "POST" && !policy_.allow_post) || (method == "DELETE" && !policy_.allow_delete))
        return finish(text(405, method + " is not allowed\n"));
    if (!writable_.count(target)) return finish(text(403, "not writable\n"));
    if (!parse_error.empty()) return finish(text(400, parse_error + "\n"));

    const Dataset before = sim_->dataset();
    Term name = Term::iri(target);
    bool existed = before.has_graph(name);
    Dataset after;
    if (method == "DELETE") {
        if (!existed) return finish(text(404, "not found\n"));
        after = before.without_graph(name);
    } else if (method == "POST") {
        std::vector<rdf::Triple> merged = before.graph(name).triples();
        merged.insert(merged.end(), triples.begin(), triples.end());
        std::sort(merged.begin(), merged.end());
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
        after = before.with_graph(name, std::move(merged));
    } else {
        after = before.with_graph(name, triples);
    }
    if (!existed && method != "DELETE") op.classification = OpClass::Create;
    for (Term g : rdf::changed_graphs(before, after)) op.delta_graphs.push_back(g.value());
    if (method != "DELETE") op.payload = ntriples(after.graph(name).triples());
    sim_->set_dataset(std::move(after));
    publish();
    return finish(text(method == "DELETE" ? 204 : existed ? 204 : 201, ""));
}

Response GraphStore::start(const sim::RunParams& params) {
    try {
        params.check();
    } catch (const std::exception& e) {
        return text(400, std::string(e.what()) + "\n");
    }
    {
        std::lock_guard lock(write_mu_);
        if (phase_ != Phase::Ready) return text(409, "run already started\n");
        try {
            sim_.emplace(env_, params);
        } catch (const std::exception& e) {
            return text(500, std::string(e.what()) + "\n");
        }
        writable_ = actuatable_graphs(sim_->dataset());
        trace_ = {};
        for (const auto& q : faults_)
            if (q.length != 1) trace_.lengths[q.id] = q.length;
        phase_ = Phase::Running;
        publish();
    }
    if (!manual_clock_) clock_ = std::thread([this] { clock_loop(); });
    return text(200, "started\n");
}

bool GraphStore::end_slot() {
    std::lock_guard lock(write_mu_);
    if (phase_ != Phase::Running) return false;
    auto t0 = Clock::now();
    trace_.raw.push_back(metrics::check_faults(sim_->dataset(), faults_, *sim_));
    if (keep_datasets_) slot_datasets_.push_back(sim_->dataset());
    if (sim_->finished()) {
        phase_ = Phase::Finished;
    } else {
        sim_->tick();
    }
    slot_ms_.push_back(std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
    publish();
    if (phase_ == Phase::Finished) {
        std::lock_guard fl(finished_mu_);
        finished_cv_.notify_all();
        return false;
    }
    return true;
}

std::vector<Dataset> GraphStore::slot_datasets() const {
    std::lock_guard lock(write_mu_);
    return slot_datasets_;
}

void GraphStore::clock_loop() {
    const auto slot = std::chrono::milliseconds(sim_->params().timeslot_ms);
    auto deadline = Clock::now() + slot;
    while (!stop_) {
        std::this_thread::sleep_until(deadline);
        if (stop_) break;
        if (!end_slot()) break;
        auto now = Clock::now();
        deadline += slot;
        if (now > deadline) {
            ++deadline_misses_;
            deadline = now;
        }
    }
}

void GraphStore::wait_finished() {
    std::unique_lock lock(finished_mu_);
    finished_cv_.wait(lock, [&] { return phase() == Phase::Finished; });
}

metrics::FaultTrace GraphStore::trace() const {
    std::lock_guard lock(write_mu_);
    return trace_;
}

std::vector<OperationRecord> GraphStore::operations() const {
    std::lock_guard lock(log_mu_);
    return ops_;
}

std::vector<double> GraphStore::slot_durations_ms() const {
    std::lock_guard lock(write_mu_);
    return slot_ms_;
}

sim::RunParams parse_run_params(std::string_view body, const std::string& base) {
    std::vector<rdf::Quad> quads;
    try {
        quads = rdf::parse_quads(body, rdf::Format::Turtle, base + "sim");
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("unparsable run parameters: ") + e.what());
    }
    sim::RunParams p;
    bool has_iterations = false, has_timeslot = false;
    for (const auto& q : quads) {
        const auto& pred = q.p.value();
        auto integer = [&]() -> std::int64_t {
            auto n = q.o.numeric();
            if (!n || *n != std::floor(*n)) throw std::invalid_argument(pred + " must be an integer");
            return std::int64_t(*n);
        };
        if (pred == v::kSimIterations) {
            p.iterations = integer();
            has_iterations = true;
        } else if (pred == v::kSimTimeslotDuration) {
            p.timeslot_ms = integer();
            has_timeslot = true;
        } else if (pred == v::kSimStepDuration) {
            p.step_seconds = integer() / 1000;
        } else if (pred == v::kSimInitialTime) {
            auto t = rdf::parse_datetime(q.o.value());
            if (!t) throw std::invalid_argument("initial time must be an xsd:dateTime");
            p.initial_time = std::int64_t(*t);
        }
    }
    if (!has_iterations) throw std::invalid_argument("missing sim:iterations");
    if (!has_timeslot) throw std::invalid_argument("missing sim:timeslotDuration");
    p.check();
    return p;
}

std::string run_params_turtle(const sim::RunParams& p, const std::string& base) {
    return "@prefix sim: <" + std::string(v::kSim) + "> .\n"
           "@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n"
           "<" + base + "sim> sim:initialTime \"" + rdf::format_datetime(p.initial_time) + "\"^^xsd:dateTime ;\n"
           "  sim:timeslotDuration " + std::to_string(p.timeslot_ms) + " ;\n"
           "  sim:stepDuration " + std::to_string(p.step_seconds * 1000) + " ;\n"
           "  sim:iterations " + std::to_string(p.iterations) + " .\n";
}

Dataset replay(const sim::SimEnvironment& env, const sim::RunParams& params, const std::vector<OperationRecord>& ops) {
    std::vector<const OperationRecord*> writes;
    for (const auto& op : ops)
        if (op.succeeded() && !op.is_read()) writes.push_back(&op);
    std::stable_sort(writes.begin(), writes.end(), [](auto a, auto b) { return a->seq < b->seq; });
    sim::Simulation s(env, params);
    std::size_t next = 0;
    for (;;) {
        Dataset d = s.dataset();
        for (; next < writes.size() && writes[next]->timeslot == s.iteration(); ++next) {
            const auto& op = *writes[next];
            Term name = Term::iri(op.target);
            if (op.classification == OpClass::Delete) {
                d = d.without_graph(name);
                continue;
            }
            std::vector<rdf::Triple> triples;
            for (const auto& q : rdf::parse_quads(op.payload, rdf::Format::NTriples)) triples.push_back({q.s, q.p, q.o});
            std::sort(triples.begin(), triples.end());
            d = d.with_graph(name, std::move(triples));
        }
        s.set_dataset(std::move(d));
        if (s.finished()) break;
        s.tick();
    }
    if (next != writes.size()) throw std::runtime_error("replay: operations outside the run's timeslots");
    return s.dataset();
}

}  // namespace ldsim::server
