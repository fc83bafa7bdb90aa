#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>

#include "amoebot/conventions.hpp"
#include "amoebot/energy_oracles.hpp"
#include "amoebot/expansion.hpp"
#include "amoebot/harness.hpp"

namespace fs = std::filesystem;
using namespace amoebot;

namespace {

struct ExperimentOptions {
    std::string algorithm = "leader-election";
    bool energy = false;
    int kappa = 10;
    int delta = 5;
    std::vector<std::string> delta_actions;  // label=value
    bool robust = false;
    std::vector<std::size_t> sizes{25};
    std::size_t trials = 1;
    std::string shape = "blob";
    bool hole_free = false;
    std::size_t sources = 1;
    std::string placement = "origin";
    std::string policy = "uniform";
    std::uint64_t seed = 1;
    std::uint64_t budget = 10'000'000;
    std::string out;
    unsigned threads = 0;
    bool no_invariants = false;
    std::string config;

    AlgorithmDescriptor descriptor() const {
        AlgorithmDescriptor d;
        d.base = algorithm;
        d.energy = energy;
        d.kappa = kappa;
        d.delta.default_demand = delta;
        for (const auto& kv : delta_actions) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw std::invalid_argument("--delta-action wants label=value: " + kv);
            d.delta.per_action[kv.substr(0, eq)] = std::stoi(kv.substr(eq + 1));
        }
        d.robust = robust;
        return d;
    }
    std::string out_dir() const { return out.empty() ? default_output_dir() : out; }
};

void add_experiment_options(CLI::App* app, ExperimentOptions& o) {
    app->add_option("--algorithm,-a", o.algorithm, "workload: leader-election, hexagon-formation, toy-coloring, empty, disconnecting-fixture");
    app->add_flag("--energy", o.energy, "wrap the workload in the energy distribution framework");
    app->add_option("--kappa", o.kappa, "battery capacity");
    app->add_option("--delta", o.delta, "default demand per action");
    app->add_option("--delta-action", o.delta_actions, "per-action demand, label=value");
    app->add_flag("--robust", o.robust, "apply the expansion-robust transformation");
    app->add_option("--n,-n", o.sizes, "system sizes");
    app->add_option("--trials", o.trials, "trials per size");
    app->add_option("--shape", o.shape, "initial shape: blob, line, hexagon");
    app->add_flag("--hole-free", o.hole_free, "reject blob growth steps that enclose a hole");
    app->add_option("--sources", o.sources, "number of source amoebots");
    app->add_option("--placement", o.placement, "source placement: origin, random");
    app->add_option("--policy", o.policy, "scheduler policy, optionally with +framework-first");
    app->add_option("--seed", o.seed, "base seed");
    app->add_option("--budget", o.budget, "activation budget per run");
    app->add_option("--out,-o", o.out, "output directory (default $AMOEBOT_OUT_DIR or ./out)");
    app->add_option("--threads", o.threads, "worker threads for sweeps (0: all cores)");
    app->add_flag("--no-invariants", o.no_invariants, "skip the energy invariant suite");
    app->add_option("--config", o.config, "JSON file supplying any of the options above");
}

// Fills options that were not given on the command line from the JSON config file.
void apply_config(CLI::App* app, ExperimentOptions& o) {
    if (o.config.empty()) return;
    std::ifstream in(o.config);
    if (!in) throw std::runtime_error("cannot open config " + o.config);
    const auto j = nlohmann::json::parse(in);
    auto unset = [&](const char* flag) { return app->count(flag) == 0; };
    auto take = [&](const char* key, const char* flag, auto& field) {
        if (j.contains(key) && unset(flag)) j.at(key).get_to(field);
    };
    take("algorithm", "--algorithm", o.algorithm);
    take("energy", "--energy", o.energy);
    take("kappa", "--kappa", o.kappa);
    take("delta", "--delta", o.delta);
    if (j.contains("delta_actions") && unset("--delta-action"))
        for (const auto& [label, v] : j.at("delta_actions").items())
            o.delta_actions.push_back(label + "=" + std::to_string(v.get<int>()));
    take("robust", "--robust", o.robust);
    if (j.contains("n") && unset("--n")) {
        if (j.at("n").is_array())
            j.at("n").get_to(o.sizes);
        else
            o.sizes = {j.at("n").get<std::size_t>()};
    }
    take("trials", "--trials", o.trials);
    take("shape", "--shape", o.shape);
    take("hole_free", "--hole-free", o.hole_free);
    take("sources", "--sources", o.sources);
    take("placement", "--placement", o.placement);
    take("policy", "--policy", o.policy);
    take("seed", "--seed", o.seed);
    take("budget", "--budget", o.budget);
    take("out", "--out", o.out);
    take("threads", "--threads", o.threads);
    take("no_invariants", "--no-invariants", o.no_invariants);
}

std::string frame_name(std::size_t round) {
    std::ostringstream os;
    os << "round-" << std::setw(6) << std::setfill('0') << round << ".svg";
    return os.str();
}

void write_file(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream f(p);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << text;
}

int cmd_run(CLI::App* app, ExperimentOptions& o, std::size_t trial, bool frames, std::size_t frame_every, bool svg) {
    apply_config(app, o);
    const auto d = o.descriptor();
    const BuiltAlgorithm alg = build_algorithm(d);
    const std::size_t n = o.sizes.at(0);
    const std::uint64_t seed = cell_seed(o.seed, n, trial);
    const bool hole_free = o.hole_free || d.base == "leader-election";
    const auto shape = generate_shape(shape_from_string(o.shape), n, seed, hole_free);
    const auto sources = place_sources(n, o.sources, o.placement, seed);
    const auto cfg0 = initial_configuration(alg, shape, sources);

    RunOptions ro;
    ro.seed = seed;
    ro.policy = Policy::parse(o.policy);
    ro.budget = o.budget;
    ro.sources = sources;
    ro.record_steps = true;
    ro.record_digests = true;
    const auto ex = run_experiment(alg, cfg0, ro, !o.no_invariants);

    const fs::path dir = o.out_dir();
    std::ostringstream trace_text;
    write_trace(trace_text, ex.result.trace);
    write_file(dir / "trace.txt", trace_text.str());
    if (svg) write_file(dir / "final.svg", render_svg(ex.result.final, d.base));
    if (frames) {
        Configuration cfg = cfg0;
        const auto& steps = ex.result.trace.steps;
        const auto& ends = ex.result.trace.round_ends;
        write_file(dir / "frames" / frame_name(0), render_svg(cfg, d.base));
        std::size_t done = 0;
        for (std::size_t r = 0; r < ends.size(); ++r) {
            for (; done < ends[r]; ++done) execute_action(cfg, steps[done].id, alg.runnable.actions[steps[done].action]);
            if ((r + 1) % frame_every == 0 || r + 1 == ends.size())
                write_file(dir / "frames" / frame_name(r + 1), render_svg(cfg, d.base));
        }
    }

    bool ok = ex.verdict.ok();
    std::cout << "algorithm   " << d.to_string() << "\n"
              << "n           " << n << "  seed " << seed << "  policy " << ro.policy.name() << "\n"
              << "terminated  " << (ex.result.terminated ? "yes" : "no") << "\n"
              << "activations " << ex.result.activations << "\n"
              << "rounds      " << ex.result.rounds << "\n";
    if (d.robust) {
        const AlgorithmSpec& inner = alg.with_energy ? *alg.with_energy : alg.base;
        const auto c = check_expansion_correspondence(inner, alg.runnable, ex.result.trace, alg.with_energy.has_value());
        std::cout << "correspondence " << (c.ok ? "pass" : "fail") << " (" << c.steps_checked << " steps)\n";
        if (!c.ok) std::cout << "  " << c.violations.front() << "\n";
        ok = ok && c.ok;
    }
    for (const auto& p : ex.verdict.problems) std::cout << "problem     " << p << "\n";
    std::cout << "trace       " << (dir / "trace.txt").string() << "\n";
    std::cout << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? 0 : 1;
}

int cmd_sweep(CLI::App* app, ExperimentOptions& o, const std::string& csv_path) {
    apply_config(app, o);
    SweepConfig sc;
    sc.algorithm = o.descriptor();
    sc.sizes = o.sizes;
    sc.trials = o.trials;
    sc.shape = shape_from_string(o.shape);
    sc.hole_free = o.hole_free;
    sc.source_count = o.sources;
    sc.placement = o.placement;
    sc.policy = Policy::parse(o.policy);
    sc.seed = o.seed;
    sc.budget = o.budget;
    sc.check_invariants = !o.no_invariants;
    sc.threads = o.threads;
    const auto rows = sweep(sc);

    if (csv_path == "-") {
        write_sweep_csv(std::cout, rows);
    } else {
        const fs::path p = csv_path.empty() ? fs::path(o.out_dir()) / "sweep.csv" : fs::path(csv_path);
        std::ostringstream os;
        write_sweep_csv(os, rows);
        write_file(p, os.str());
        std::cerr << "wrote " << p.string() << "\n";
    }

    std::map<std::size_t, std::pair<double, std::size_t>> mean;
    bool ok = true;
    for (const auto& r : rows) {
        ok = ok && r.terminated && r.terminal_ok && r.invariants_ok;
        auto& [sum, cnt] = mean[r.n];
        sum += static_cast<double>(r.rounds);
        ++cnt;
    }
    std::vector<double> xs, ys;
    for (const auto& [n, sc2] : mean) {
        xs.push_back(static_cast<double>(n));
        ys.push_back(sc2.first / static_cast<double>(sc2.second));
        std::cerr << "n=" << n << " mean rounds " << ys.back() << "\n";
    }
    const auto fit = fit_loglog(xs, ys, 50);
    if (fit.points >= 2) std::cerr << "log-log slope over n >= 50: " << fit.slope << "\n";
    std::cerr << (ok ? "all runs passed" : "some runs failed") << "\n";
    return ok ? 0 : 1;
}

int cmd_verify(const std::string& path, const std::vector<std::string>& only) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace " + path);
    const Trace t = read_trace(in);
    VerifySuites s;
    if (!only.empty()) {
        s = {false, false, false, false, false, false};
        for (const auto& name : only) {
            if (name == "digests") s.digests = true;
            else if (name == "rounds") s.rounds = true;
            else if (name == "invariants") s.invariants = true;
            else if (name == "replay") s.replay = true;
            else if (name == "correspondence") s.correspondence = true;
            else if (name == "terminal") s.terminal = true;
            else throw std::invalid_argument("unknown suite: " + name);
        }
    }
    const auto rep = verify_trace(t, s);
    for (const auto& r : rep.results)
        std::cout << std::left << std::setw(16) << r.suite << std::setw(6) << r.status << r.detail << "\n";
    std::cout << (rep.ok() ? "PASS" : "FAIL") << "\n";
    return rep.ok() ? 0 : 1;
}

int cmd_parallel(int k, int kappa, bool show) {
    const auto s = greedy_parallel_recharge(k, kappa);
    std::cout << "k=" << k << " kappa=" << kappa << " rounds=" << s.rounds << " (k*kappa=" << k * kappa << ")\n";
    if (show)
        for (std::size_t r = 0; r < s.configurations.size(); ++r) {
            std::cout << "E_" << r + 1 << " ";
            for (int e : s.configurations[r]) std::cout << e;
            std::cout << "\n";
        }
    return 0;
}

int cmd_enumerate(CLI::App* app, ExperimentOptions& o, std::size_t depth, std::size_t states) {
    apply_config(app, o);
    auto d = o.descriptor();
    d.energy = true;
    d.robust = false;
    const BuiltAlgorithm alg = build_algorithm(d);
    const std::size_t n = o.sizes.at(0);
    const auto shape = generate_shape(shape_from_string(o.shape), n, o.seed, o.hole_free || d.base == "leader-election");
    const auto sources = place_sources(n, o.sources, o.placement, o.seed);
    const auto r = terminal_inclusion(alg, shape, sources, depth, states);
    std::cout << "A^delta terminals " << r.energy_terminals << " (projected " << r.projected << ")\n"
              << "A terminals       " << r.base_terminals << "\n"
              << "not reachable by A " << r.missing << "\n"
              << (r.ok() ? "PASS" : "FAIL") << "\n";
    return r.ok() ? 0 : 1;
}

int cmd_conventions(CLI::App* app, ExperimentOptions& o) {
    apply_config(app, o);
    const auto d = o.descriptor();
    const BuiltAlgorithm alg = build_algorithm(d);
    bool ok = true;
    for (std::size_t n : o.sizes)
        for (std::size_t t = 0; t < o.trials; ++t) {
            const std::uint64_t seed = cell_seed(o.seed, n, t);
            const auto shape =
                generate_shape(shape_from_string(o.shape), n, seed, o.hole_free || d.base == "leader-election");
            const auto cfg0 = initial_configuration(alg, shape, place_sources(n, o.sources, o.placement, seed));
            const auto r = check_conventions(alg.runnable, cfg0, o.budget, seed, Policy::parse(o.policy));
            std::cout << "n=" << n << " trial=" << t << " steps=" << r.steps << " c1=" << r.counts[1]
                      << " c2=" << r.counts[2] << " c3=" << r.counts[3] << "\n";
            for (const auto& v : r.violations)
                std::cout << "  convention " << v.convention << " step " << v.step << " amoebot " << v.id << " "
                          << v.action << ": " << v.message << "\n";
            ok = ok && r.ok();
        }
    std::cout << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Amoebot energy-distribution simulator"};
    app.require_subcommand(1);

    ExperimentOptions run_opts, sweep_opts, enum_opts, conv_opts;

    auto* run = app.add_subcommand("run", "one seeded run; writes a trace and optional SVG frames");
    add_experiment_options(run, run_opts);
    std::size_t trial = 0, frame_every = 1;
    bool frames = false, svg = false;
    run->add_option("--trial", trial, "trial index, selects the seed as in sweeps");
    run->add_flag("--frames", frames, "write one SVG per round under <out>/frames");
    run->add_option("--frame-every", frame_every, "only every k-th round frame")->check(CLI::PositiveNumber);
    run->add_flag("--svg", svg, "write <out>/final.svg");

    auto* sw = app.add_subcommand("sweep", "runs every (n, trial) cell and writes CSV");
    add_experiment_options(sw, sweep_opts);
    std::string csv;
    sw->add_option("--csv", csv, "CSV path ('-' for stdout, default <out>/sweep.csv)");

    auto* verify = app.add_subcommand("verify", "checks a recorded trace");
    std::string trace_path;
    std::vector<std::string> suites;
    verify->add_option("trace", trace_path, "trace file")->required();
    verify->add_option("--suite", suites, "digests, rounds, invariants, replay, correspondence, terminal (default all)");

    auto* oracle = app.add_subcommand("oracle", "reference oracles");
    oracle->require_subcommand(1);
    auto* par = oracle->add_subcommand("parallel", "greedy parallel recharge on a path");
    int k = 5, kappa = 10;
    bool show = false;
    par->add_option("--k", k, "path length")->check(CLI::PositiveNumber);
    par->add_option("--kappa", kappa, "battery capacity")->check(CLI::PositiveNumber);
    par->add_flag("--schedule", show, "print every configuration");
    auto* en = oracle->add_subcommand("enumerate", "exhaustive terminal-set inclusion of A^delta in A");
    add_experiment_options(en, enum_opts);
    std::size_t depth = 100000, states = 2'000'000;
    en->add_option("--depth", depth, "depth limit");
    en->add_option("--states", states, "state limit");
    auto* conv = oracle->add_subcommand("conventions", "dynamic convention checker");
    add_experiment_options(conv, conv_opts);

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run) return cmd_run(run, run_opts, trial, frames, frame_every, svg);
        if (*sw) return cmd_sweep(sw, sweep_opts, csv);
        if (*verify) return cmd_verify(trace_path, suites);
        if (*par) return cmd_parallel(k, kappa, show);
        if (*en) return cmd_enumerate(en, enum_opts, depth, states);
        if (*conv) return cmd_conventions(conv, conv_opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
