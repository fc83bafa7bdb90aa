#ifndef AMOEBOT_ENERGY_ORACLES_HPP
#define AMOEBOT_ENERGY_ORACLES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "amoebot/energy.hpp"
#include "amoebot/scheduler.hpp"

namespace amoebot {

// Battery levels along a rooted path, index 0 is the source.
using EnergyLevels = std::vector<int>;

struct ParallelSchedule {
    std::size_t rounds = 0;               // parallel rounds from all-empty to all-full
    std::vector<EnergyLevels> configurations;  // E_1 .. E_{rounds+1}
};

// One greedy parallel round: the source harvests if not full, and every amoebot with
// energy passes one unit to a non-full child, all decided on the levels at round start.
EnergyLevels parallel_step(const EnergyLevels& e, int kappa);
ParallelSchedule greedy_parallel_recharge(int k, int kappa);

// Suffix sums: delta[i] = sum of e[i..k-1].
std::vector<int> suffix_energy(const EnergyLevels& e);
bool dominates(const EnergyLevels& a, const EnergyLevels& b);

struct DominanceReport {
    bool ok = true;
    std::size_t round = 0;    // 1-based round of the first violation
    std::size_t amoebot = 0;  // path index of the first violation
    std::string message;
};

// sequential[r] is the path's levels at the start of sequential round r+1; the last entry
// is the final configuration. Rounds past the end of a completed run repeat the last entry.
DominanceReport check_dominance(const std::vector<EnergyLevels>& sequential, int kappa);

// Levels along `path` at each recorded round start of a trace, followed by the final levels.
std::vector<EnergyLevels> sequential_energy_schedule(const AlgorithmSpec& alg_delta, const Trace& trace,
                                                     const std::vector<AmoebotId>& path);

// A^delta configuration on a path of nodes where every amoebot is already linked to its
// predecessor (a stabilized tree) and all batteries are empty. nodes[0] is the source.
Configuration stabilized_path(const AlgorithmSpec& alg_delta, const std::vector<NodeCoord>& nodes,
                              const std::vector<Orientation>& orientations);

// The framework-free algorithm: no actions of its own.
AlgorithmSpec empty_algorithm();

// Positions and the variables of `plain` agree (energy variables ignored).
bool congruent(const Configuration& with_energy, const Configuration& plain);

struct ReplayReport {
    bool ok = true;
    std::optional<std::size_t> divergent_step;  // index into the trace
    std::size_t replayed = 0;                   // algorithm actions replayed under A
    std::string message;
};

// Replays the algorithm-action subsequence of an A^delta trace under plain A.
ReplayReport replay_equivalence(const AlgorithmSpec& alg_delta, const Trace& trace, const AlgorithmSpec& alg);

// Step observer for the energy invariants. Works for A^delta and (A^delta)^E traces.
class EnergyInvariantChecker : public StepObserver {
  public:
    EnergyInvariantChecker(const AlgorithmSpec& alg_delta, const DemandFunction& delta, int kappa);

    void before_step(const Configuration& cfg, AmoebotId id, std::size_t action) override;
    void after_step(const Configuration& cfg, const ActivationRecord& rec, const ExecutionReport& rep) override;

    // Checks a configuration on its own (used for the initial configuration).
    void check_configuration(const Configuration& cfg);

    bool ok() const { return violations_.empty(); }
    const std::vector<std::string>& violations() const { return violations_; }
    std::uint64_t steps() const { return steps_; }
    std::int64_t harvested() const { return harvested_; }
    std::int64_t spent() const { return spent_; }
    // Largest number of times one amoebot was pruned within a single energy run.
    int max_prunes_per_run() const { return max_prunes_; }

  private:
    void fail(const std::string& what);
    // Stability before the current step, walked over the cached parent links.
    bool stable_before(const Configuration& cfg, AmoebotId id) const;
    void check_forest_entry(const Configuration& cfg, AmoebotId id);
    bool cycle_from(const Configuration& cfg, AmoebotId id) const;

    EnergyVarIds ids_;
    int kappa_;
    std::vector<std::pair<std::string, int>> demands_;
    std::uint64_t steps_ = 0;
    std::int64_t harvested_ = 0;
    std::int64_t spent_ = 0;
    std::int64_t total_ = 0;
    std::int64_t initial_total_ = 0;
    bool initialized_ = false;
    bool in_run_ = false;
    int max_prunes_ = 0;
    std::vector<int> prunes_in_run_;
    std::vector<std::int32_t> bat_;
    std::vector<std::int32_t> parent_;
    std::vector<std::int32_t> state_;
    std::vector<NodeCoord> head_;
    std::vector<std::optional<NodeCoord>> tail_;
    bool pre_harvest_ = false;
    std::vector<AmoebotId> pruned_this_run_;
    std::vector<std::string> violations_;
};

}  // namespace amoebot

#endif
