// ldsim command line: build datasets, serve a task, run benchmarks.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "ldsim/agent/bench.hpp"
#include "ldsim/building/building.hpp"
#include "ldsim/rdf/io.hpp"
#include "ldsim/server/http.hpp"

using namespace ldsim;

namespace {

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + p.string());
}

rdf::Dataset load_dataset(const std::string& path) {
    if (path.empty()) return agent::synthetic_building();
    return rdf::parse_document(rdf::read_file(path), rdf::Format::TriG);
}

void print_report(const metrics::MetricsReport& r, const agent::AgentStats& s) {
    std::cout << metrics::metrics_tsv(r);
    std::printf("agent\treads=%lld writes=%lld rejected=%lld loops=%lld action_loops=%lld\n",
                static_cast<long long>(s.reads), static_cast<long long>(s.writes),
                static_cast<long long>(s.rejected), static_cast<long long>(s.loops),
                static_cast<long long>(s.action_loops));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Read-write Linked Data building simulator"};
    app.require_subcommand(1);

    // build
    auto* build = app.add_subcommand("build", "Partition and augment a building dataset");
    std::string input, out_dir = "build-data", base = building::kDefaultBase;
    std::uint64_t building_seed = 1;
    build->add_option("--input", input, "Turtle building description (default: synthetic building)");
    build->add_option("--out", out_dir, "Output directory");
    build->add_option("--seed", building_seed, "Generator seed");
    build->add_option("--base", base, "Base IRI");

    // serve
    auto* serve = app.add_subcommand("serve", "Serve one task; a PUT to /sim starts the run");
    std::string task_id, dataset_path, host = "127.0.0.1", serve_out;
    std::uint64_t seed = 42;
    int port = 8080, threads = 8;
    serve->add_option("--task", task_id, "Task id")->required();
    serve->add_option("--seed", seed, "Simulation seed");
    serve->add_option("--dataset", dataset_path, "TriG dataset written by `build`");
    serve->add_option("--host", host, "Listen address");
    serve->add_option("--port", port, "Listen port");
    serve->add_option("--threads", threads, "Request threads");
    serve->add_option("--out", serve_out, "Directory for TSV results");

    // bench run
    auto* bench = app.add_subcommand("bench", "Benchmarks");
    bench->require_subcommand(1);
    auto* run = bench->add_subcommand("run", "Run one agent on one task");
    agent::BenchConfig cfg;
    std::string kind = "prefetch";
    double start_hour = -1;
    bool no_reasoning = false;
    run->add_option("--task", cfg.task_id, "Task id")->required();
    run->add_option("--agent", kind, "none | oracle | prefetch | traversal");
    run->add_option("--seed", cfg.seed, "Simulation seed");
    run->add_option("--timeslot-ms", cfg.timeslot_ms, "Timeslot duration in milliseconds");
    run->add_option("--iterations", cfg.iterations, "Iterations (default: task duration)");
    run->add_option("--start-hour", start_hour, "Simulated start time, hours after midnight");
    run->add_option("--poll-ms", cfg.poll_ms, "Agent loop interval (0: as fast as possible)");
    run->add_option("--dataset", dataset_path, "TriG dataset written by `build`");
    run->add_option("--out", cfg.out_dir, "Directory for TSV results");
    run->add_flag("--no-reasoning", no_reasoning, "Disable agent reasoning");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*build) {
            building::PartitionedDataset pd;
            building::Report report;
            if (input.empty()) {
                building::GeneratorParams gp;
                gp.seed = building_seed;
                gp.base = base;
                pd = building::augment_datapoints(building::partition(building::generate_synthetic(gp)));
                report = building::validate_counts(pd, gp);
            } else {
                auto triples = building::load_building(input, base);
                std::vector<std::string> warnings;
                pd = building::augment_datapoints(building::partition(triples), &warnings);
                for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
                auto counts = building::count_building(pd);
                counts.triples = long(triples.size());
                report = building::validate_real_counts(counts);
            }
            std::filesystem::create_directories(out_dir);
            write_file(std::filesystem::path(out_dir) / "dataset.trig", rdf::serialize_dataset(pd.dataset));
            write_file(std::filesystem::path(out_dir) / "manifest.txt",
                       building::manifest(pd, building::count_building(pd)));
            std::cout << report.to_string();
            return report.all_pass() ? 0 : 1;
        }

        if (*serve) {
            auto task = tasks::load_task(task_id);
            auto dataset = load_dataset(dataset_path);
            auto env = tasks::make_environment(task, dataset, seed);
            server::GraphStore store(env, task.faults);
            server::HttpServer http(store, threads);
            int bound = http.bind(host, port);
            if (bound < 0) {
                std::cerr << "cannot bind " << host << ":" << port << "\n";
                return 1;
            }
            std::cerr << "serving " << task_id << " on http://" << host << ":" << bound << "/\n";
            http.start();
            store.wait_finished();
            http.stop();
            auto dry = metrics::dry_run(env, store.params(), task.faults);
            auto report = metrics::compute_metrics(store.trace(), &dry, store.operations());
            if (!serve_out.empty()) {
                std::filesystem::path dir(serve_out);
                std::filesystem::create_directories(dir);
                write_file(dir / "faults.tsv", metrics::faults_tsv(store.trace()));
                write_file(dir / "ops.tsv", metrics::ops_tsv(store.operations()));
                write_file(dir / "metrics.tsv", metrics::metrics_tsv(report));
            }
            std::cout << metrics::metrics_tsv(report);
            return 0;
        }

        if (*run) {
            auto k = agent::agent_kind_from_string(kind);
            if (!k) {
                std::cerr << "unknown agent: " << kind << "\n";
                return 2;
            }
            cfg.agent = *k;
            if (start_hour >= 0) cfg.initial_time = 1653264000 + std::int64_t(start_hour * 3600);
            if (no_reasoning) cfg.reasoning = false;
            if (!dataset_path.empty()) cfg.building = load_dataset(dataset_path);
            auto result = agent::run_benchmark(cfg);
            print_report(result.report, result.agent);
            return result.report.valid ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
