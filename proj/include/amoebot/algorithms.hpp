#ifndef AMOEBOT_ALGORITHMS_HPP
#define AMOEBOT_ALGORITHMS_HPP

#include <vector>

#include "amoebot/vm.hpp"

namespace amoebot {

// Leader election by erosion.
enum class ErosionPhase : int { NullCandidate = 0, Candidate = 1, Eroded = 2, Leader = 3 };
inline constexpr const char* kPhaseVar = "le.phase";

AlgorithmSpec leader_election_spec();

// Hexagon formation along a spiral rooted at a designated seed.
enum class HexState : int { Seed = 0, Idle = 1, Follower = 2, Root = 3, Retired = 4 };
inline constexpr const char* kHexStateVar = "hex.state";
inline constexpr const char* kHexParentVar = "hex.parent";
inline constexpr const char* kHexDirVar = "hex.dir";
inline constexpr const char* kHexSenseVar = "hex.sense";

AlgorithmSpec hexagon_formation_spec();
// Marks one amoebot as the seed.
void designate_seed(Configuration& cfg, AmoebotId seed);

// First n nodes of the counter-clockwise hexagonal spiral around the origin:
// (0,0), (1,0), (0,1), (-1,1), ...
std::vector<NodeCoord> spiral_positions(std::size_t n);

// The spiral laid out in a seed's local frame, in global coordinates.
std::vector<NodeCoord> spiral_positions(std::size_t n, NodeCoord seed, Orientation o);

// Greedy colouring: an uncoloured amoebot takes the smallest colour its neighbours lack.
inline constexpr const char* kColorVar = "toy.color";
AlgorithmSpec toy_coloring_spec();

// Negative control: every amoebot steps once along its local direction 0, which
// disconnects most starting configurations.
AlgorithmSpec disconnecting_fixture_spec();

}  // namespace amoebot

#endif
