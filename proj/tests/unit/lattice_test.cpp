#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "amoebot/lattice.hpp"

using namespace amoebot;

TEST(Lattice, NeighborsAreAtDistanceOne) {
    const NodeCoord v{2, -3};
    for (int d = 0; d < 6; ++d) EXPECT_EQ(lattice_distance(v, neighbor(v, d)), 1);
}

TEST(Lattice, NeighborsOfOriginInDirectionOrder) {
    const std::array<NodeCoord, 6> expect{{{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};
    EXPECT_EQ(neighbors({0, 0}), expect);
}

TEST(Lattice, OppositeDirectionReturns) {
    for (const NodeCoord v : {NodeCoord{0, 0}, NodeCoord{5, -2}, NodeCoord{-7, 3}})
        for (int d = 0; d < 6; ++d) EXPECT_EQ(neighbors(neighbors(v)[d])[opposite(d)], v);
}

TEST(Lattice, NeighborsDistinct) {
    const auto nb = neighbors({3, 4});
    EXPECT_EQ(std::set<NodeCoord>(nb.begin(), nb.end()).size(), 6u);
}

TEST(Lattice, DirectionBetween) {
    for (int d = 0; d < 6; ++d) EXPECT_EQ(direction_between({1, 1}, neighbor({1, 1}, d)), d);
    EXPECT_FALSE(direction_between({0, 0}, {2, 0}).has_value());
    EXPECT_FALSE(direction_between({0, 0}, {0, 0}).has_value());
}

TEST(Orientation, LabelToDirection) {
    EXPECT_EQ(label_to_direction({0, 1}, 2), 2);
    EXPECT_EQ(label_to_direction({3, -1}, 1), 2);
    EXPECT_THROW(label_to_direction({0, 1}, 6), LatticeError);
    EXPECT_THROW(label_to_direction({0, 1}, -1), LatticeError);
}

TEST(Orientation, RoundTripAllOrientations) {
    std::set<Orientation> seen;
    for (const auto o : all_orientations()) {
        seen.insert(o);
        std::set<int> dirs;
        for (int l = 0; l < 6; ++l) {
            const int d = label_to_direction(o, l);
            dirs.insert(d);
            EXPECT_EQ(direction_to_label(o, d), l);
        }
        EXPECT_EQ(dirs.size(), 6u);
    }
    EXPECT_EQ(seen.size(), 12u);
}

namespace {

bool same_undirected(const PortEdge& a, const PortEdge& b) {
    return a == b || (a.node == b.target() && b.node == a.target());
}

}  // namespace

TEST(ExpandedLayout, TenDistinctPerimeterEdges) {
    for (const auto o : all_orientations())
        for (int d = 0; d < 6; ++d) {
            const NodeCoord tail{0, 0};
            const NodeCoord head = neighbor(tail, d);
            const auto layout = expanded_port_layout(head, tail, o);
            std::set<PortEdge> edges(layout.begin(), layout.end());
            EXPECT_EQ(edges.size(), 10u);
            for (const auto& e : layout) {
                EXPECT_TRUE(e.node == head || e.node == tail);
                EXPECT_FALSE(same_undirected(e, PortEdge{tail, d}));
            }
        }
}

TEST(ExpandedLayout, StartsNearHeadLabelZero) {
    for (const auto o : all_orientations()) {
        const NodeCoord tail{0, 0};
        const NodeCoord head{1, 0};
        const auto layout = expanded_port_layout(head, tail, o);
        EXPECT_EQ(layout[0].node, head);
        const int d0 = label_to_direction(o, 0);
        if (neighbor(head, d0) != tail) EXPECT_EQ(layout[0].dir, d0);
    }
}

TEST(ExpandedLayout, ReversingChiralityReversesCyclicOrder) {
    // Oracle: walk the perimeter of the node pair ourselves (counter-clockwise around
    // each node, switching nodes at the shared edge) and compare cyclic sequences.
    const NodeCoord tail{0, 0};
    const NodeCoord head{1, 0};
    const auto ccw = expanded_port_layout(head, tail, {0, 1});
    const auto cw = expanded_port_layout(head, tail, {0, -1});
    std::vector<PortEdge> a(ccw.begin(), ccw.end());
    std::vector<PortEdge> b(cw.rbegin(), cw.rend());
    auto start = std::find(b.begin(), b.end(), a[0]);
    ASSERT_NE(start, b.end());
    std::rotate(b.begin(), start, b.end());
    EXPECT_EQ(a, b);

    // Independent perimeter walk, counter-clockwise: around the head starting just past
    // the tail, then around the tail starting just past the head.
    const int a_dir = *direction_between(head, tail);
    std::vector<PortEdge> walk;
    for (int i = 1; i <= 5; ++i) walk.push_back({head, mod6(a_dir + i)});
    for (int i = 1; i <= 5; ++i) walk.push_back({tail, mod6(a_dir + 3 + i)});
    auto first = std::find(walk.begin(), walk.end(), a[0]);
    ASSERT_NE(first, walk.end());
    std::rotate(walk.begin(), first, walk.end());
    EXPECT_EQ(a, walk);
}

TEST(ExpandedLayout, RejectsNonAdjacentPair) {
    EXPECT_THROW(expanded_port_layout({0, 0}, {0, 0}, {}), LatticeError);
    EXPECT_THROW(expanded_port_layout({2, 0}, {0, 0}, {}), LatticeError);
}
