#ifndef AMOEBOT_CONVENTIONS_HPP
#define AMOEBOT_CONVENTIONS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "amoebot/scheduler.hpp"

namespace amoebot {

struct ConventionViolation {
    int convention = 0;     // 1 validity, 2 phase structure, 3 connectivity
    std::size_t step = 0;   // activations before the violation
    AmoebotId id = 0;
    std::string action;
    std::string message;
};

struct ConventionReport {
    std::vector<ConventionViolation> violations;  // first 64 kept
    std::size_t counts[4] = {0, 0, 0, 0};          // indexed by convention
    std::uint64_t steps = 0;
    std::uint64_t isolated_executions = 0;  // enabled actions tried on copies
    bool terminated = false;
    bool ok() const { return counts[1] + counts[2] + counts[3] == 0; }
};

// Dynamic checker. Along one scheduled execution it tries every enabled action of each
// activated amoebot in isolation (validity and recorded phase structure), rejects
// declared lock operations or misplaced movements, and checks connectivity after
// every step.
ConventionReport check_conventions(const AlgorithmSpec& alg, const Configuration& cfg0, std::uint64_t budget,
                                   std::uint64_t seed = 1, Policy policy = {});

// Phase-structure check of one recorded operation sequence; empty when fine.
std::string phase_structure_error(const std::vector<OpRecord>& ops);

}  // namespace amoebot

#endif
