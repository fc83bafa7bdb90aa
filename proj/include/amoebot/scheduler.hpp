#ifndef AMOEBOT_SCHEDULER_HPP
#define AMOEBOT_SCHEDULER_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "amoebot/vm.hpp"

namespace amoebot {

enum class PolicyKind { UniformRandom, StarveTheSource, ThrashTheForest };

struct Policy {
    PolicyKind kind = PolicyKind::UniformRandom;
    // Try framework-appended actions (EnergyDistribution, expand-flag resets) first.
    bool framework_first = false;

    std::string name() const;
    static Policy parse(const std::string& name);
    static std::vector<Policy> shipped();
};

struct ActivationRecord {
    AmoebotId id = 0;
    std::size_t action = 0;
    std::string label;
    unsigned support = 0;  // EnergyDistribution predicates satisfied at activation
    std::uint64_t pre_digest = 0;
    std::uint64_t post_digest = 0;
};

struct Trace {
    std::string algorithm;  // descriptor understood by the harness registry
    std::uint64_t seed = 0;
    std::string policy;
    Configuration initial;
    std::vector<ActivationRecord> steps;
    std::vector<std::size_t> round_ends;  // activation count at which each round closed
    bool terminated = false;
};

void write_trace(std::ostream& os, const Trace& t);
Trace read_trace(std::istream& is);

class StepObserver {
  public:
    virtual ~StepObserver() = default;
    virtual void before_step(const Configuration&, AmoebotId, std::size_t /*action*/) {}
    virtual void after_step(const Configuration&, const ActivationRecord&, const ExecutionReport&) {}
    virtual void round_closed(std::size_t /*round*/, const Configuration&) {}
};

struct RunOptions {
    std::uint64_t seed = 1;
    Policy policy;
    std::uint64_t budget = 10'000'000;
    bool record_steps = false;
    bool record_digests = false;
    bool record_ops = false;
    // Amoebots treated as sources by the starve-the-source scorer.
    std::vector<AmoebotId> sources;
    StepObserver* observer = nullptr;
};

struct RunResult {
    Trace trace;
    Configuration final;
    bool terminated = false;
    std::uint64_t activations = 0;
    std::uint64_t rounds = 0;
    // First failed execution (a Convention 1 violation), which stops the run.
    std::optional<ExecutionReport> failure;
};

RunResult run(const AlgorithmSpec& alg, const Configuration& cfg0, const RunOptions& opts);

// Recomputes round boundaries from scratch by replaying the trace.
std::vector<std::size_t> round_boundaries(const AlgorithmSpec& alg, const Trace& trace);
std::size_t round_count(const AlgorithmSpec& alg, const Trace& trace);

// Replays a trace and checks every recorded digest. Returns the index of the first mismatch.
std::optional<std::size_t> replay_digests(const AlgorithmSpec& alg, const Trace& trace);

class EnumerationLimit : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// All terminal configurations reachable by any sequence of (amoebot, enabled action) choices.
std::vector<Configuration> enumerate_all_executions(const AlgorithmSpec& alg, const Configuration& cfg0,
                                                    std::size_t depth_limit, std::size_t state_limit = 2'000'000);

}  // namespace amoebot

#endif
