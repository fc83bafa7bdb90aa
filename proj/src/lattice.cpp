#include "amoebot/lattice.hpp"

#include <cstdlib>
#include <string>

namespace amoebot {

std::array<NodeCoord, 6> neighbors(NodeCoord v) {
    std::array<NodeCoord, 6> out{};
    for (int d = 0; d < 6; ++d) out[static_cast<std::size_t>(d)] = neighbor(v, d);
    return out;
}

std::optional<int> direction_between(NodeCoord a, NodeCoord b) {
    const NodeCoord delta = b - a;
    for (int d = 0; d < 6; ++d)
        if (kDirections[static_cast<std::size_t>(d)] == delta) return d;
    return std::nullopt;
}

int lattice_distance(NodeCoord a, NodeCoord b) {
    const int dq = a.q - b.q;
    const int dr = a.r - b.r;
    return (std::abs(dq) + std::abs(dr) + std::abs(dq + dr)) / 2;
}

void validate(Orientation o) {
    if (o.offset < 0 || o.offset > 5 || (o.chirality != 1 && o.chirality != -1))
        throw LatticeError("invalid orientation");
}

int label_to_direction(Orientation o, int label) {
    if (label < 0 || label > 5) throw LatticeError("contracted port label out of range: " + std::to_string(label));
    return mod6(o.offset + o.chirality * label);
}

int direction_to_label(Orientation o, int dir) {
    if (dir < 0 || dir > 5) throw LatticeError("direction out of range: " + std::to_string(dir));
    return mod6(o.chirality * (dir - o.offset));
}

std::array<PortEdge, 10> expanded_port_layout(NodeCoord head, NodeCoord tail, Orientation o) {
    validate(o);
    const auto axis = direction_between(head, tail);
    if (!axis) throw LatticeError("illegal expanded shape: head and tail not adjacent");
    const int dt = *axis;

    // Counter-clockwise perimeter: head edges after the axis, then tail edges after the reverse axis.
    std::array<PortEdge, 10> ccw{};
    for (int i = 0; i < 5; ++i) {
        ccw[static_cast<std::size_t>(i)] = {head, mod6(dt + 1 + i)};
        ccw[static_cast<std::size_t>(5 + i)] = {tail, mod6(dt + 4 + i)};
    }
    std::array<PortEdge, 10> cyc = ccw;
    if (o.chirality == -1)
        for (int i = 0; i < 10; ++i) cyc[static_cast<std::size_t>(i)] = ccw[static_cast<std::size_t>((10 - i) % 10)];

    // Start at the head edge with label 0's direction; if it faces the tail, the next edge in chirality order.
    const int d0 = label_to_direction(o, 0);
    int start = 0;
    if (d0 == dt) {
        // Rotating past the axis in chirality order lands on head edge dt + chirality.
        const int after = mod6(dt + o.chirality);
        for (int i = 0; i < 10; ++i)
            if (cyc[static_cast<std::size_t>(i)].node == head && cyc[static_cast<std::size_t>(i)].dir == after) start = i;
    } else {
        for (int i = 0; i < 10; ++i)
            if (cyc[static_cast<std::size_t>(i)].node == head && cyc[static_cast<std::size_t>(i)].dir == d0) start = i;
    }
    std::array<PortEdge, 10> out{};
    for (int i = 0; i < 10; ++i) out[static_cast<std::size_t>(i)] = cyc[static_cast<std::size_t>((start + i) % 10)];
    return out;
}

std::array<Orientation, 12> all_orientations() {
    std::array<Orientation, 12> out{};
    int k = 0;
    for (int c : {1, -1})
        for (int off = 0; off < 6; ++off) out[static_cast<std::size_t>(k++)] = {off, c};
    return out;
}

}  // namespace amoebot
