#ifndef AMOEBOT_LATTICE_HPP
#define AMOEBOT_LATTICE_HPP

#include <array>
#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>

namespace amoebot {

// Axial coordinates. Direction 0 is +q, directions proceed counter-clockwise.
struct NodeCoord {
    int q = 0;
    int r = 0;
    auto operator<=>(const NodeCoord&) const = default;
};

inline constexpr std::array<NodeCoord, 6> kDirections{{{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};

constexpr int mod6(int x) { return ((x % 6) + 6) % 6; }
constexpr int opposite(int dir) { return mod6(dir + 3); }

constexpr NodeCoord operator+(NodeCoord a, NodeCoord b) { return {a.q + b.q, a.r + b.r}; }
constexpr NodeCoord operator-(NodeCoord a, NodeCoord b) { return {a.q - b.q, a.r - b.r}; }

constexpr NodeCoord neighbor(NodeCoord v, int dir) { return v + kDirections[static_cast<std::size_t>(mod6(dir))]; }

std::array<NodeCoord, 6> neighbors(NodeCoord v);

// Global direction from a to b if they are adjacent.
std::optional<int> direction_between(NodeCoord a, NodeCoord b);

int lattice_distance(NodeCoord a, NodeCoord b);

struct Orientation {
    int offset = 0;     // global direction of label 0
    int chirality = 1;  // +1 counter-clockwise labels, -1 clockwise
    auto operator<=>(const Orientation&) const = default;
};

class LatticeError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

void validate(Orientation o);

// Contracted port maps. Labels outside 0..5 throw LatticeError.
int label_to_direction(Orientation o, int label);
int direction_to_label(Orientation o, int dir);

// A half-edge: node plus outgoing global direction.
struct PortEdge {
    NodeCoord node;
    int dir = 0;
    auto operator<=>(const PortEdge&) const = default;
    NodeCoord target() const { return neighbor(node, dir); }
};

// The ten perimeter edges of an expanded amoebot, indexed by port label.
std::array<PortEdge, 10> expanded_port_layout(NodeCoord head, NodeCoord tail, Orientation o);

// All 12 orientations, for exhaustive tests.
std::array<Orientation, 12> all_orientations();

}  // namespace amoebot

template <>
struct std::hash<amoebot::NodeCoord> {
    std::size_t operator()(const amoebot::NodeCoord& v) const noexcept {
        auto x = static_cast<std::uint64_t>(static_cast<std::uint32_t>(v.q)) << 32 |
                 static_cast<std::uint32_t>(v.r);
        x ^= x >> 33;
        x *= 0xff51afd7ed558ccdULL;
        x ^= x >> 33;
        return static_cast<std::size_t>(x);
    }
};

#endif
