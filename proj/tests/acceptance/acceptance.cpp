// Acceptance gate: one PASS/FAIL line per criterion, tolerances pinned below.
// `acceptance --calibrate` reruns the constant fits on the calibration seeds.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "amoebot/algorithms.hpp"
#include "amoebot/conventions.hpp"
#include "amoebot/energy_oracles.hpp"
#include "amoebot/expansion.hpp"
#include "amoebot/harness.hpp"

using namespace amoebot;

namespace {

// ---- pinned tolerances and frozen constants ----

constexpr double kOracleSeconds = 1.0;
constexpr double kInclusionSeconds = 300.0;
constexpr double kLeaderSlope = 1.5;
constexpr double kHexagonSlope = 2.0;
constexpr double kSlopeMinN = 50;

// Fitted once with `--calibrate` (calibration sweep seed 1000: max ratio times two) and frozen.
constexpr double kLeaderCubic = 0.34;     // rounds <= C n^3, leader election^delta
constexpr double kHexagonQuartic = 0.11;  // rounds <= C n^4, hexagon formation^delta
constexpr double kStableTreesC1 = 0.30;   // rounds to all-stable <= c1 n^2
constexpr double kFullBatteriesC2 = 20.0; // further rounds to all-full <= c2 n

constexpr int kKappa = 10;
constexpr int kDemand = 5;
constexpr std::uint64_t kCalibrationSeed = 1000;
constexpr std::uint64_t kAcceptanceSeed = 1;

const std::vector<std::size_t> kScalingSizes{10, 25, 50, 100, 150, 200, 250};
constexpr std::size_t kScalingTrials = 25;
const std::vector<std::size_t> kEnergyRunSizes{10, 25, 50, 100, 150};
constexpr std::size_t kEnergyRunTrials = 6;

struct Verdict {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    std::vector<std::string> notes;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int precision = 3) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(precision);
    os << v;
    return os.str();
}

void progress(const std::string& msg) { std::cerr << "  .. " << msg << std::endl; }

AlgorithmDescriptor energy_descriptor(const std::string& base, bool robust = false) {
    AlgorithmDescriptor d;
    d.base = base;
    d.energy = true;
    d.kappa = kKappa;
    d.delta.default_demand = kDemand;
    d.robust = robust;
    return d;
}

InitialShape workload_shape(const std::string& base, std::size_t n, std::uint64_t seed) {
    return generate_shape(ShapeKind::Blob, n, seed, base == "leader-election");
}

// ---- 1 ----

Verdict parallel_recharge() {
    Verdict v{1, "parallel-recharge oracle exactness"};
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t wrong = 0;
    std::map<int, std::size_t> wrong_by_kappa;
    bool only_2k_minus_1 = true;
    for (int k = 1; k <= 50; ++k)
        for (int kappa = 1; kappa <= 10; ++kappa) {
            const auto rounds = greedy_parallel_recharge(k, kappa).rounds;
            if (rounds != static_cast<std::size_t>(k * kappa)) {
                ++wrong;
                ++wrong_by_kappa[kappa];
                only_2k_minus_1 &= rounds == static_cast<std::size_t>(2 * k - 1);
            }
        }
    const double dt = seconds_since(t0);
    v.pass = wrong == 0 && dt < kOracleSeconds;
    v.detail = std::to_string(500 - wrong) + "/500 pairs give k*kappa, " + fmt(dt, 4) + " s";
    for (const auto& [kappa, count] : wrong_by_kappa)
        v.notes.push_back("kappa=" + std::to_string(kappa) + ": " + std::to_string(count) + " pairs differ" +
                          (only_2k_minus_1 ? " (all equal 2k-1)" : ""));
    if (!wrong_by_kappa.empty() && wrong_by_kappa.size() == 1 && wrong_by_kappa.count(1) && only_2k_minus_1)
        v.notes.push_back(
            "with kappa=1 a full source may not harvest in the round it passes its unit on, so the schedule "
            "as defined alternates harvest and pass rounds and needs 2k-1 rounds; the k*kappa formula assumes "
            "harvest and pass overlap. Not patched.");
    return v;
}

// ---- 2 ----

Verdict dominance() {
    Verdict v{2, "dominance over sequential recharge traces"};
    std::mt19937_64 rng(20240602);
    const auto all = all_orientations();
    const auto policies = Policy::shipped();
    std::size_t violations = 0, rounds_checked = 0;
    for (int trace = 0; trace < 1000; ++trace) {
        const int k = 1 + static_cast<int>(rng() % 8);
        const int kappa = 1 + static_cast<int>(rng() % 5);
        const auto alg = transform_energy(empty_algorithm(), DemandFunction{1, {}}, kappa);
        std::vector<NodeCoord> nodes;
        std::vector<Orientation> orient;
        // A random self-avoiding path with monotone q+r so it never touches itself.
        NodeCoord cur{0, 0};
        for (int i = 0; i < k; ++i) {
            nodes.push_back(cur);
            orient.push_back(all[rng() % all.size()]);
            cur = neighbor(cur, (rng() & 1) ? 0 : 1);
        }
        const auto cfg = stabilized_path(alg, nodes, orient);
        RunOptions opts;
        opts.seed = rng();
        opts.policy = policies[trace % policies.size()];
        opts.sources = {0};
        opts.record_steps = true;
        const auto res = run(alg, cfg, opts);
        std::vector<AmoebotId> path(k);
        for (int i = 0; i < k; ++i) path[i] = static_cast<AmoebotId>(i);
        const auto seq = sequential_energy_schedule(alg, res.trace, path);
        rounds_checked += seq.size();
        const auto rep = check_dominance(seq, kappa);
        if (!res.terminated || !rep.ok) {
            ++violations;
            if (v.notes.size() < 5) v.notes.push_back("trace " + std::to_string(trace) + ": " + rep.message);
        }
    }
    v.pass = violations == 0;
    v.detail = "1000 traces (k<=8, kappa<=5, all policies), " + std::to_string(rounds_checked) +
               " round configurations, " + std::to_string(violations) + " violating traces";
    return v;
}

// ---- 3 ----

Verdict inclusion() {
    Verdict v{3, "exhaustive terminal-set inclusion"};
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<std::vector<NodeCoord>> systems{
        {{0, 0}}, {{0, 0}, {1, 0}}, {{0, 0}, {1, 0}, {2, 0}}, {{0, 0}, {1, 0}, {0, 1}}, {{0, 0}, {1, 0}, {1, 1}}};
    std::size_t cases = 0, failing = 0, energy_terminals = 0;
    for (const std::string base : {"toy-coloring", "leader-election"}) {
        AlgorithmDescriptor d;
        d.base = base;
        d.energy = true;
        d.kappa = 2;
        d.delta.default_demand = 1;
        const auto built = build_algorithm(d);
        for (const auto& nodes : systems)
            for (std::uint64_t oseed = 1; oseed <= 3; ++oseed) {
                InitialShape shape;
                shape.nodes = nodes;
                std::mt19937_64 rng(oseed);
                const auto all = all_orientations();
                for (std::size_t i = 0; i < nodes.size(); ++i) shape.orientations.push_back(all[rng() % all.size()]);
                for (AmoebotId src = 0; src < nodes.size(); ++src) {
                    const auto rep = terminal_inclusion(built, shape, {src}, 100'000);
                    ++cases;
                    energy_terminals += rep.energy_terminals;
                    if (!rep.ok()) {
                        ++failing;
                        v.notes.push_back(base + " n=" + std::to_string(nodes.size()) + " source " +
                                          std::to_string(src) + ": " + std::to_string(rep.missing) + " missing");
                    }
                }
            }
    }
    const double dt = seconds_since(t0);
    v.pass = failing == 0 && dt < kInclusionSeconds;
    v.detail = std::to_string(cases) + " systems (n<=3, kappa=2, delta=1, toy and leader election), " +
               std::to_string(energy_terminals) + " energy terminals enumerated, " + std::to_string(failing) +
               " with a projection outside A's terminal set, " + fmt(dt, 2) + " s";
    return v;
}

// ---- 4, 5, 6 (randomized traces) ----

struct TraceTally {
    std::size_t traces = 0;
    std::size_t replay_fail = 0;
    std::size_t replayed_actions = 0;
    std::size_t invariant_fail = 0;
    std::uint64_t steps_checked = 0;
    std::size_t not_terminated = 0;
    std::size_t terminal_fail = 0;
    std::vector<std::string> examples;
};

TraceTally randomized(const std::string& base) {
    TraceTally t;
    const auto built = build_algorithm(energy_descriptor(base));
    for (std::size_t n : {10, 25, 50}) {
        for (const auto& policy : Policy::shipped())
            for (std::uint64_t seed = 1; seed <= 12; ++seed) {
                const std::uint64_t s = cell_seed(kAcceptanceSeed + 17, n, seed);
                const auto cfg = initial_configuration(built, workload_shape(base, n, s));
                EnergyInvariantChecker checker(*built.with_energy, built.descriptor.delta, kKappa);
                checker.check_configuration(cfg);
                RunOptions opts;
                opts.seed = s;
                opts.policy = policy;
                opts.sources = {0};
                opts.record_steps = true;
                opts.observer = &checker;
                const auto res = run(built.runnable, cfg, opts);
                ++t.traces;
                t.steps_checked += checker.steps();
                if (!checker.ok()) {
                    ++t.invariant_fail;
                    if (t.examples.size() < 3) t.examples.push_back("invariant: " + checker.violations().front());
                }
                if (!res.terminated) {
                    ++t.not_terminated;
                } else if (std::string why; !terminal_property_holds(base, res.final, cfg, &why)) {
                    ++t.terminal_fail;
                    if (t.examples.size() < 3) t.examples.push_back("terminal: " + why);
                }
                const auto rep = replay_equivalence(*built.with_energy, res.trace, built.base);
                t.replayed_actions += rep.replayed;
                if (!rep.ok) {
                    ++t.replay_fail;
                    if (t.examples.size() < 3) t.examples.push_back("replay: " + rep.message);
                }
            }
        progress(base + " randomized traces done for n=" + std::to_string(n));
    }
    return t;
}

// ---- 7 ----

struct Scaling {
    std::vector<SweepRow> rows;
    double max_ratio = 0;  // rounds / n^power
    LogLogFit fit;
    std::size_t unfinished = 0;
    std::size_t wrong_terminal = 0;
    std::size_t invariant_fail = 0;
    std::map<std::size_t, double> mean_rounds;
};

Scaling scaling(const std::string& base, int power, std::uint64_t seed) {
    SweepConfig cfg;
    cfg.algorithm = energy_descriptor(base);
    cfg.sizes = kScalingSizes;
    cfg.trials = kScalingTrials;
    cfg.shape = ShapeKind::Blob;
    cfg.hole_free = base == "leader-election";
    cfg.seed = seed;
    Scaling s;
    s.rows = sweep(cfg);
    std::map<std::size_t, std::pair<double, std::size_t>> acc;
    for (const auto& r : s.rows) {
        s.unfinished += !r.terminated;
        s.wrong_terminal += r.terminated && !r.terminal_ok;
        s.invariant_fail += !r.invariants_ok;
        s.max_ratio = std::max(s.max_ratio, static_cast<double>(r.rounds) / std::pow(static_cast<double>(r.n), power));
        acc[r.n].first += static_cast<double>(r.rounds);
        acc[r.n].second += 1;
    }
    std::vector<double> x, y;
    for (const auto& [n, a] : acc) {
        s.mean_rounds[n] = a.first / static_cast<double>(a.second);
        x.push_back(static_cast<double>(n));
        y.push_back(s.mean_rounds[n]);
    }
    s.fit = fit_loglog(x, y, kSlopeMinN);
    return s;
}

// ---- 8 ----

class PhaseObserver : public StepObserver {
  public:
    PhaseObserver(int kappa, int bat) : kappa_(kappa), bat_(bat) {}
    void round_closed(std::size_t round, const Configuration& cfg) override {
        if (!stable) {
            const auto st = in_stable_trees(cfg);
            if (std::all_of(st.begin(), st.end(), [](bool b) { return b; })) stable = round;
        }
        if (!full) {
            bool all_full = true;
            for (AmoebotId a = 0; a < cfg.size() && all_full; ++a) all_full = cfg.value(a, bat_) == kappa_;
            if (all_full) full = round;
        }
    }
    std::optional<std::size_t> stable;
    std::optional<std::size_t> full;

  private:
    int kappa_;
    int bat_;
};

struct EnergyRuns {
    std::size_t runs = 0;
    std::size_t incomplete = 0;
    double max_c1 = 0;  // stable round / n^2
    double max_c2 = 0;  // (full - stable) / n
    std::size_t c1_exceeded = 0;
    std::size_t c2_exceeded = 0;
};

EnergyRuns energy_runs(std::uint64_t seed) {
    EnergyRuns e;
    const auto alg = transform_energy(empty_algorithm(), DemandFunction{1, {}}, kKappa);
    const int bat = alg.schema->id(kEnergyBatteryVar);
    for (std::size_t n : kEnergyRunSizes)
        for (const auto& policy : Policy::shipped())
            for (std::size_t trial = 0; trial < kEnergyRunTrials; ++trial) {
                const std::uint64_t s = cell_seed(seed, n, trial);
                const auto shape = generate_shape(ShapeKind::Blob, n, s);
                const auto cfg = energize(make_configuration(alg, shape.nodes, shape.orientations), alg, {0});
                PhaseObserver obs(kKappa, bat);
                RunOptions opts;
                opts.seed = s;
                opts.policy = policy;
                opts.sources = {0};
                opts.observer = &obs;
                const auto res = run(alg, cfg, opts);
                ++e.runs;
                if (!res.terminated || !obs.stable || !obs.full) {
                    ++e.incomplete;
                    continue;
                }
                const double nn = static_cast<double>(n);
                const double c1 = static_cast<double>(*obs.stable) / (nn * nn);
                const double c2 = static_cast<double>(*obs.full - *obs.stable) / nn;
                e.max_c1 = std::max(e.max_c1, c1);
                e.max_c2 = std::max(e.max_c2, c2);
                e.c1_exceeded += c1 > kStableTreesC1;
                e.c2_exceeded += c2 > kFullBatteriesC2;
            }
    return e;
}

// ---- 9 ----

struct Correspondence {
    std::size_t traces = 0;
    std::size_t failing = 0;
    std::size_t steps = 0;
    std::size_t established_checks = 0;
    std::size_t guard = 0, execution = 0, established = 0, hidden_blocker = 0, arrived_blocked = 0;
    std::size_t max_churn = 0;
    std::string first;
};

Correspondence correspondence(const std::string& base) {
    Correspondence c;
    const auto built = build_algorithm(energy_descriptor(base, true));
    for (std::size_t n : {10, 25})
        for (const auto& policy : Policy::shipped())
            for (std::uint64_t seed = 1; seed <= 9; ++seed) {
                const std::uint64_t s = cell_seed(kAcceptanceSeed + 29, n, seed);
                const auto cfg = initial_configuration(built, workload_shape(base, n, s));
                RunOptions opts;
                opts.seed = s;
                opts.policy = policy;
                opts.sources = {0};
                opts.record_steps = true;
                const auto res = run(built.runnable, cfg, opts);
                const auto rep = check_expansion_correspondence(*built.with_energy, built.runnable, res.trace, true);
                ++c.traces;
                const bool bad = !rep.ok || !res.terminated;
                c.failing += bad;
                c.steps += rep.steps_checked;
                c.established_checks += rep.established_checks;
                c.guard += rep.guard_violations;
                c.execution += rep.execution_violations;
                c.established += rep.established_violations;
                c.hidden_blocker += rep.hidden_blocker_guards;
                c.arrived_blocked += rep.arrived_blocked;
                c.max_churn = std::max(c.max_churn, rep.max_reset_churn);
                if (bad && c.first.empty())
                    c.first = rep.violations.empty() ? "did not terminate" : rep.violations.front();
            }
    return c;
}

// ---- 10 ----

struct ConventionTally {
    std::size_t runs = 0;
    std::size_t counts[4] = {0, 0, 0, 0};
    std::size_t unfinished = 0;
};

ConventionTally conventions(const std::string& descriptor) {
    ConventionTally t;
    const auto built = build_algorithm(AlgorithmDescriptor::parse(descriptor));
    for (std::size_t n : {10, 25})
        for (const auto& policy : Policy::shipped())
            for (std::uint64_t seed = 1; seed <= 3; ++seed) {
                const std::uint64_t s = cell_seed(kAcceptanceSeed + 41, n, seed);
                const auto cfg = initial_configuration(built, workload_shape(built.descriptor.base, n, s));
                const auto rep = check_conventions(built.runnable, cfg, 10'000'000, s, policy);
                ++t.runs;
                t.unfinished += !rep.terminated;
                for (int i = 1; i <= 3; ++i) t.counts[i] += rep.counts[i];
            }
    return t;
}

int calibrate() {
    std::cout << "calibration seed " << kCalibrationSeed << "\n";
    for (auto [base, power] : {std::pair<std::string, int>{"leader-election", 3}, {"hexagon-formation", 4}}) {
        const auto s = scaling(base, power, kCalibrationSeed);
        std::cout << base << ": max rounds/n^" << power << " = " << s.max_ratio << ", slope " << s.fit.slope << "\n";
    }
    const auto e = energy_runs(kCalibrationSeed);
    std::cout << "energy runs: max stable/n^2 = " << e.max_c1 << ", max (full-stable)/n = " << e.max_c2 << " ("
              << e.incomplete << " incomplete)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1 && std::string(argv[1]) == "--calibrate") return calibrate();

    const auto t_start = std::chrono::steady_clock::now();
    std::vector<Verdict> out;

    out.push_back(parallel_recharge());
    progress("criterion 1 done");
    out.push_back(dominance());
    progress("criterion 2 done");
    out.push_back(inclusion());
    progress("criterion 3 done");

    const auto le = randomized("leader-election");
    const auto hex = randomized("hexagon-formation");
    {
        Verdict v{4, "replay equivalence on randomized traces"};
        v.pass = le.replay_fail == 0 && hex.replay_fail == 0 && le.traces >= 200 && hex.traces >= 200;
        v.detail = "leader election^delta " + std::to_string(le.traces - le.replay_fail) + "/" +
                   std::to_string(le.traces) + ", hexagon formation^delta " +
                   std::to_string(hex.traces - hex.replay_fail) + "/" + std::to_string(hex.traces) +
                   " congruent (n in {10,25,50}, 6 policies, " +
                   std::to_string(le.replayed_actions + hex.replayed_actions) + " actions replayed)";
        for (const auto* t : {&le, &hex})
            for (const auto& e : t->examples) v.notes.push_back(e);
        out.push_back(v);
    }
    {
        Verdict v{5, "energy invariant suite"};
        v.pass = le.invariant_fail == 0 && hex.invariant_fail == 0;
        v.detail = std::to_string(le.steps_checked + hex.steps_checked) + " steps over " +
                   std::to_string(le.traces + hex.traces) + " traces, " +
                   std::to_string(le.invariant_fail + hex.invariant_fail) +
                   " traces with violations (1a-1c, 2a-2c, battery range, conservation, forest)";
        out.push_back(v);
    }
    progress("criteria 4 and 5 done");

    const auto le_scale = scaling("leader-election", 3, kAcceptanceSeed);
    progress("leader election scaling sweep done");
    const auto hex_scale = scaling("hexagon-formation", 4, kAcceptanceSeed);
    progress("hexagon formation scaling sweep done");
    {
        Verdict v{6, "workload correctness"};
        const std::size_t runs = le.traces + hex.traces + le_scale.rows.size() + hex_scale.rows.size();
        const std::size_t wrong =
            le.terminal_fail + hex.terminal_fail + le_scale.wrong_terminal + hex_scale.wrong_terminal;
        const std::size_t unfinished =
            le.not_terminated + hex.not_terminated + le_scale.unfinished + hex_scale.unfinished;
        v.pass = wrong == 0;
        v.detail = std::to_string(runs - unfinished - wrong) + "/" + std::to_string(runs - unfinished) +
                   " terminated runs correct (one leader / seed-frame spiral)";
        if (unfinished) v.notes.push_back(std::to_string(unfinished) + " runs did not terminate (see criterion 7)");
        out.push_back(v);
    }
    {
        Verdict v{7, "termination and round scaling (kappa=10, delta=5)"};
        const bool terminated = le.not_terminated + hex.not_terminated + le_scale.unfinished + hex_scale.unfinished == 0;
        const bool le_bound = le_scale.max_ratio <= kLeaderCubic;
        const bool hex_bound = hex_scale.max_ratio <= kHexagonQuartic;
        const bool le_slope = le_scale.fit.slope <= kLeaderSlope;
        const bool hex_slope = hex_scale.fit.slope <= kHexagonSlope;
        v.pass = terminated && le_bound && hex_bound && le_slope && hex_slope;
        v.detail = "slopes " + fmt(le_scale.fit.slope) + " (<= " + fmt(kLeaderSlope, 1) + ") and " +
                   fmt(hex_scale.fit.slope) + " (<= " + fmt(kHexagonSlope, 1) + "); max rounds/n^3 " +
                   fmt(le_scale.max_ratio, 4) + " (C=" + fmt(kLeaderCubic, 4) + "), max rounds/n^4 " +
                   fmt(hex_scale.max_ratio, 5) + " (C=" + fmt(kHexagonQuartic, 5) + ")";
        std::ostringstream le_means, hex_means;
        for (const auto& [n, m] : le_scale.mean_rounds) le_means << " " << n << ":" << fmt(m, 1);
        for (const auto& [n, m] : hex_scale.mean_rounds) hex_means << " " << n << ":" << fmt(m, 1);
        v.notes.push_back("leader election mean rounds" + le_means.str());
        v.notes.push_back("hexagon formation mean rounds" + hex_means.str());
        v.notes.push_back(std::to_string(kScalingTrials) + " trials per size, sizes 10..250, " +
                          std::to_string(le_scale.rows.size() + hex_scale.rows.size()) + " runs, " +
                          std::to_string(le_scale.invariant_fail + hex_scale.invariant_fail) +
                          " with invariant violations");
        out.push_back(v);
    }

    {
        const auto e = energy_runs(kAcceptanceSeed);
        Verdict v{8, "energy-run phase bounds"};
        v.pass = e.incomplete == 0 && e.c1_exceeded == 0 && e.c2_exceeded == 0;
        v.detail = std::to_string(e.runs) + " framework-only runs: max stable-round/n^2 " + fmt(e.max_c1) +
                   " (c1=" + fmt(kStableTreesC1, 2) + "), max further-rounds/n " + fmt(e.max_c2) +
                   " (c2=" + fmt(kFullBatteriesC2, 2) + ")";
        if (e.incomplete) v.notes.push_back(std::to_string(e.incomplete) + " runs incomplete");
        out.push_back(v);
    }
    progress("criterion 8 done");

    {
        const auto le_c = correspondence("leader-election");
        const auto hex_c = correspondence("hexagon-formation");
        Verdict v{9, "expansion correspondence with established neighbours"};
        v.pass = le_c.failing == 0 && hex_c.failing == 0;
        auto describe = [](const std::string& name, const Correspondence& c) {
            return name + " " + std::to_string(c.traces - c.failing) + "/" + std::to_string(c.traces);
        };
        v.detail = describe("(leader election^delta)^E", le_c) + ", " +
                   describe("(hexagon formation^delta)^E", hex_c) + " traces clean (n in {10,25})";
        for (const auto& [name, c] : {std::pair<std::string, const Correspondence&>{"leader election", le_c},
                                      {"hexagon formation", hex_c}}) {
            v.notes.push_back(name + ": " + std::to_string(c.steps) + " steps compared, " +
                              std::to_string(c.established_checks) + " established-neighbour checks, guard " +
                              std::to_string(c.guard) + " (" + std::to_string(c.hidden_blocker) +
                              " with a hidden idle/pruning neighbour), execution " + std::to_string(c.execution) +
                              ", established " + std::to_string(c.established) + " (" +
                              std::to_string(c.arrived_blocked) + " by neighbours that arrived pruning), " +
                              "max reset churn " + std::to_string(c.max_churn));
            if (!c.first.empty()) v.notes.push_back(name + " first: " + c.first);
        }
        if (hex_c.failing && hex_c.established == hex_c.arrived_blocked && hex_c.guard == hex_c.hidden_blocker &&
            hex_c.execution == 0)
            v.notes.push_back(
                "every violation involves an amoebot that was pulled by its parent: the puller prunes before "
                "moving, so the pulled child arrives in new neighbourhoods as pruning with fresh expand flags, "
                "which the established-neighbour argument rules out. Not patched.");
        out.push_back(v);
    }
    progress("criterion 9 done");

    {
        Verdict v{10, "convention checker"};
        std::size_t clean_runs = 0, total_runs = 0, unfinished = 0, total_violations = 0;
        for (const std::string d : {"leader-election", "hexagon-formation", "leader-election energy",
                                    "hexagon-formation energy"}) {
            const auto t = conventions(d);
            total_runs += t.runs;
            unfinished += t.unfinished;
            const std::size_t viol = t.counts[1] + t.counts[2] + t.counts[3];
            total_violations += viol;
            clean_runs += viol == 0 ? t.runs : 0;
            if (viol)
                v.notes.push_back(d + ": conventions 1/2/3 = " + std::to_string(t.counts[1]) + "/" +
                                  std::to_string(t.counts[2]) + "/" + std::to_string(t.counts[3]));
        }
        const auto fixture = conventions("disconnecting-fixture");
        v.pass = total_violations == 0 && unfinished == 0 && fixture.counts[3] >= 1;
        v.detail = std::to_string(total_runs) + " workload runs with " + std::to_string(total_violations) +
                   " violations; disconnecting fixture: " + std::to_string(fixture.counts[3]) +
                   " convention 3 violations over " + std::to_string(fixture.runs) + " runs";
        out.push_back(v);
    }

    std::cout << "\nacceptance results (" << fmt(seconds_since(t_start), 1) << " s)\n";
    bool all = true;
    for (const auto& v : out) {
        all &= v.pass;
        std::cout << "criterion " << v.id << " " << (v.pass ? "PASS" : "FAIL") << "  " << v.name << ": " << v.detail
                  << "\n";
        for (const auto& n : v.notes) std::cout << "    note: " << n << "\n";
    }
    std::cout.flush();
    return all ? 0 : 1;
}
