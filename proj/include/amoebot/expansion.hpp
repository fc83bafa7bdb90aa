#ifndef AMOEBOT_EXPANSION_HPP
#define AMOEBOT_EXPANSION_HPP

#include <string>
#include <vector>

#include "amoebot/scheduler.hpp"

namespace amoebot {

inline constexpr const char* kExpandFlagsVar = "expand.flags";
inline constexpr const char* kResetFlagLabel = "reset-flag";

struct ExpansionOptions {
    // Fault injection for negative controls: leave neighbours' flags untouched.
    bool skip_neighbor_reset = false;
};

// A -> A^E. Action 0 is the flag reset; the others keep A's labels and order.
AlgorithmSpec transform_expansion_robust(const AlgorithmSpec& alg, ExpansionOptions opts = {});

// Ports of `id` whose neighbour has no clear flag facing `id`.
std::uint16_t non_established_ports(const Configuration& cfg, AmoebotId id);
std::vector<AmoebotId> established_neighborhood(const Configuration& cfg, AmoebotId id);

struct CorrespondenceReport {
    bool ok = true;
    std::size_t steps_checked = 0;       // non-reset steps compared against A
    std::size_t established_checks = 0;  // neighbour pairs checked for the established-neighbour property
    std::size_t max_reset_churn = 0;     // longest run of reset-flag steps
    // Violation counts by kind. The last two classify the first two by cause.
    std::size_t guard_violations = 0;        // enabled with N^E but not with N
    std::size_t execution_violations = 0;    // executions differ beyond the flags
    std::size_t established_violations = 0;  // idle/pruning/child neighbour outside N^E
    std::size_t hidden_blocker_guards = 0;   // guard violations with an idle or pruning neighbour outside N^E
    std::size_t arrived_blocked = 0;         // established violations by a neighbour that was idle or pruning when it arrived
    std::vector<std::string> violations;
};

// Walks an A^E trace. At each non-reset step: the matching action of A must be enabled with
// full neighbourhoods, and executing both from copies of the pre-step configuration must
// agree on everything except the flags. With `energy_neighbors`, also checks that idle,
// pruning and child neighbours are always established.
CorrespondenceReport check_expansion_correspondence(const AlgorithmSpec& alg, const AlgorithmSpec& alg_e,
                                                    const Trace& trace, bool energy_neighbors);

}  // namespace amoebot

#endif
