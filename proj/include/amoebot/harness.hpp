#ifndef AMOEBOT_HARNESS_HPP
#define AMOEBOT_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "amoebot/energy.hpp"
#include "amoebot/scheduler.hpp"

namespace amoebot {

// ---- initial shapes ----

enum class ShapeKind { Blob, Line, Hexagon };
std::string to_string(ShapeKind k);
ShapeKind shape_from_string(const std::string& s);

struct InitialShape {
    std::vector<NodeCoord> nodes;  // nodes[0] is the origin
    std::vector<Orientation> orientations;
};

// Blob: seeded random growth from the origin (optionally rejecting steps that enclose a hole).
// Line and hexagon are deterministic; orientations are always drawn from the seed.
InitialShape generate_shape(ShapeKind kind, std::size_t n, std::uint64_t seed, bool hole_free = false);

bool nodes_connected(const std::vector<NodeCoord>& nodes);
// True when some unoccupied node is enclosed by occupied ones.
bool has_holes(const std::vector<NodeCoord>& nodes);

// Source placement: "origin" takes amoebots 0..count-1 (the blob grows outward from
// amoebot 0), "random" draws distinct amoebots from the seed.
std::vector<AmoebotId> place_sources(std::size_t n, std::size_t count, const std::string& placement,
                                     std::uint64_t seed);

// ---- algorithm registry ----

struct AlgorithmDescriptor {
    std::string base = "leader-election";
    bool energy = false;
    int kappa = 10;
    DemandFunction delta;
    bool robust = false;

    // Space-separated tokens, e.g. "hexagon-formation energy kappa=10 delta=5 delta.pull=3 robust".
    std::string to_string() const;
    static AlgorithmDescriptor parse(const std::string& text);
};

std::vector<std::string> registered_algorithms();
AlgorithmSpec base_algorithm(const std::string& name);

struct BuiltAlgorithm {
    AlgorithmDescriptor descriptor;
    AlgorithmSpec base;
    std::optional<AlgorithmSpec> with_energy;  // A^delta when energy is on
    AlgorithmSpec runnable;                    // what the scheduler executes
};
BuiltAlgorithm build_algorithm(const AlgorithmDescriptor& d);

// Initial configuration for the runnable algorithm. Amoebot 0 (at the origin) is the
// hexagon seed; `sources` default to amoebot 0 as well.
Configuration initial_configuration(const BuiltAlgorithm& alg, const InitialShape& shape,
                                    std::vector<AmoebotId> sources = {0});

// ---- single runs ----

struct RunVerdict {
    bool terminated = false;
    bool terminal_ok = true;    // the workload's terminal property (one leader / spiral shape)
    bool invariants_ok = true;  // energy invariants, when energy is on
    std::vector<std::string> problems;
    bool ok() const { return terminated && terminal_ok && invariants_ok; }
};

// Terminal property of the base workload.
bool terminal_property_holds(const std::string& base, const Configuration& cfg, const Configuration& initial,
                             std::string* why = nullptr);

struct ExperimentRun {
    RunResult result;
    RunVerdict verdict;
};

ExperimentRun run_experiment(const BuiltAlgorithm& alg, const Configuration& cfg0, const RunOptions& opts,
                             bool check_invariants);

// ---- trace verification ----

struct VerifySuites {
    bool digests = true;         // recorded configuration digests replay identically
    bool rounds = true;          // recorded round ends match a recount
    bool invariants = true;      // energy invariants at every step (energy traces)
    bool replay = true;          // algorithm actions replay under plain A (energy traces, not robust)
    bool correspondence = true;  // expansion correspondence (robust traces)
    bool terminal = true;        // terminal property of the workload (terminated traces)
};

struct SuiteResult {
    std::string suite;
    std::string status;  // "pass", "fail" or "skip"
    std::string detail;
};

struct VerifyReport {
    std::vector<SuiteResult> results;
    bool ok() const;
};

VerifyReport verify_trace(const Trace& trace, const VerifySuites& suites = {});

// ---- exhaustive equivalence ----

struct InclusionReport {
    std::size_t energy_terminals = 0;  // distinct terminal configurations of A^delta
    std::size_t base_terminals = 0;    // distinct terminal configurations of A
    std::size_t projected = 0;         // distinct projections of the A^delta terminals
    std::size_t missing = 0;           // projections absent from A's terminal set
    bool ok() const { return missing == 0 && energy_terminals > 0; }
};

// Enumerates every execution of A^delta and of A from the same start and checks that each
// A^delta terminal configuration, with the energy variables dropped, is a terminal of A.
InclusionReport terminal_inclusion(const BuiltAlgorithm& alg, const InitialShape& shape,
                                   const std::vector<AmoebotId>& sources, std::size_t depth_limit,
                                   std::size_t state_limit = 2'000'000);

// ---- sweeps ----

struct SweepConfig {
    AlgorithmDescriptor algorithm;
    std::vector<std::size_t> sizes;
    std::size_t trials = 1;
    ShapeKind shape = ShapeKind::Blob;
    bool hole_free = false;
    std::size_t source_count = 1;
    std::string placement = "origin";
    Policy policy;
    std::uint64_t seed = 1;
    std::uint64_t budget = 10'000'000;
    bool check_invariants = true;
    unsigned threads = 0;  // 0: hardware concurrency
};

struct SweepRow {
    std::size_t n = 0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::uint64_t rounds = 0;
    std::uint64_t activations = 0;
    bool terminated = false;
    bool terminal_ok = false;
    bool invariants_ok = false;
    std::string note;
};

// Seed of one sweep cell, derived from the sweep seed.
std::uint64_t cell_seed(std::uint64_t base, std::size_t n, std::size_t trial);
std::vector<SweepRow> sweep(const SweepConfig& cfg);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);
inline constexpr const char* kSweepCsvHeader =
    "n,trial,seed,rounds,activations,terminated,terminal_ok,invariants_ok,note";

struct LogLogFit {
    double slope = 0;
    double intercept = 0;
    std::size_t points = 0;
};
// Least squares of log(y) on log(x) over points with x >= min_x.
LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y, double min_x);

// ---- rendering ----

struct SvgStyle {
    double cell = 12.0;
    bool parent_arrows = true;
};
std::string render_svg(const Configuration& cfg, const std::string& base, SvgStyle style = {});

// Directory for outputs when none is given: $AMOEBOT_OUT_DIR or "out".
std::string default_output_dir();

}  // namespace amoebot

#endif
