#ifndef AMOEBOT_ENERGY_HPP
#define AMOEBOT_ENERGY_HPP

#include <map>
#include <string>
#include <vector>

#include "amoebot/vm.hpp"

namespace amoebot {

enum class EnergyState : int { Source = 0, Idle = 1, Active = 2, Asking = 3, Growing = 4, Pruning = 5 };
std::string_view to_string(EnergyState s);

inline constexpr const char* kEnergyStateVar = "energy.state";
inline constexpr const char* kEnergyParentVar = "energy.parent";
inline constexpr const char* kEnergyBatteryVar = "energy.bat";
inline constexpr const char* kEnergyDistributionLabel = "EnergyDistribution";

struct EnergyVarIds {
    int state = -1;
    int parent = -1;
    int bat = -1;
};
EnergyVarIds energy_var_ids(const Schema& schema);

struct DemandFunction {
    int default_demand = 5;
    std::map<std::string, int> per_action;
    int of(const std::string& label) const;
};

// Bits of the EnergyDistribution guard, in block order.
enum EnergyPredicate : unsigned {
    kGetPruned = 1u << 0,
    kAskGrowth = 1u << 1,
    kGrowForest = 1u << 2,
    kHarvestEnergy = 1u << 3,
    kShareEnergy = 1u << 4,
};
std::string predicate_set_to_string(unsigned set);
unsigned predicate_set_from_string(const std::string& s);

class TransformError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A -> A^delta. The result keeps A's actions (same labels, same order) followed by EnergyDistribution.
AlgorithmSpec transform_energy(const AlgorithmSpec& alg, const DemandFunction& delta, int kappa);

// The EnergyDistribution action alone, over a schema that already holds the energy variables.
ActionSpec energy_distribution_action(const EnergyVarIds& ids, int kappa);

unsigned energy_distribution_guard(const View& view, const EnergyVarIds& ids, int kappa);
unsigned energy_distribution_guard(const Configuration& cfg, AmoebotId id, int kappa);
ExecutionReport execute_energy_distribution(Configuration& cfg, AmoebotId id, int kappa);

// Ports (lowest per neighbor) whose neighbor's parent link resolves to the viewer.
std::vector<int> children_ports(const View& view, const EnergyVarIds& ids);
std::vector<AmoebotId> children(const Configuration& cfg, AmoebotId id);
// Parent amoebot by resolving the stored edge, if any.
std::optional<AmoebotId> parent_of(const Configuration& cfg, AmoebotId id);

// Moves a configuration of A into A^delta's schema and marks the given sources.
Configuration energize(const Configuration& cfg, const AlgorithmSpec& alg_delta, const std::vector<AmoebotId>& sources);

// Drops every energy variable (the congruence projection for replay).
std::shared_ptr<const Schema> without_energy(const Schema& schema);

// Amoebots whose parent chain reaches a source (sources included).
std::vector<bool> in_stable_trees(const Configuration& cfg);
// True when the parent relation has no cycle.
bool parent_relation_acyclic(const Configuration& cfg);

}  // namespace amoebot

#endif
