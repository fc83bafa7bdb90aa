#include <gtest/gtest.h>

#include <sstream>

#include "amoebot/energy.hpp"
#include "amoebot/vm.hpp"

using namespace amoebot;

namespace {

std::shared_ptr<Schema> scalar_schema() {
    auto s = std::make_shared<Schema>();
    s->add({"x", VarKind::Scalar, 0, 0, 100});
    s->add({"p", VarKind::Port, kNullPort, 0, 0});
    return s;
}

ActionSpec action(std::string label, Guard g, Compute c) {
    ActionSpec a;
    a.label = std::move(label);
    a.guard = std::move(g);
    a.compute = std::move(c);
    return a;
}

const Guard kAlways = [](const View&) { return true; };

// Port of `id` whose edge leads to node v.
int port_towards(const Configuration& cfg, AmoebotId id, NodeCoord v) {
    const auto& a = cfg.amoebot(id);
    for (int p = 0; p < a.port_count(); ++p)
        if (cfg.port_edge(id, p).target() == v) return p;
    return -1;
}

}  // namespace

TEST(Configuration, ConnectedIsolatedAndAdjacent) {
    Configuration cfg(scalar_schema());
    const auto a = cfg.add_amoebot({0, 0}, {2, -1});
    for (int p = 0; p < 6; ++p) EXPECT_FALSE(cfg.across(a, p).has_value());
    const auto b = cfg.add_amoebot({1, 0}, {5, 1});
    EXPECT_EQ(cfg.across(a, port_towards(cfg, a, {1, 0}))->id, b);
    EXPECT_EQ(cfg.across(b, port_towards(cfg, b, {0, 0}))->id, a);
}

TEST(Configuration, ExpandedNeighborOnTwoPorts) {
    // Expanded amoebot over (0,0)-(1,0) and a contracted one at (0,1), adjacent to both nodes.
    Configuration cfg(scalar_schema());
    const auto e = cfg.add_expanded({1, 0}, {0, 0}, {1, 1});
    const auto c = cfg.add_amoebot({0, 1}, {4, -1});
    int to_c = 0;
    for (int p = 0; p < 10; ++p)
        if (auto o = cfg.across(e, p); o && o->id == c) ++to_c;
    EXPECT_EQ(to_c, 2);
    int to_e = 0;
    for (int p = 0; p < 6; ++p)
        if (auto o = cfg.across(c, p); o && o->id == e) ++to_e;
    EXPECT_EQ(to_e, 2);
}

TEST(Configuration, AtMostOneAmoebotPerNode) {
    Configuration cfg(scalar_schema());
    cfg.add_amoebot({0, 0}, {});
    EXPECT_ANY_THROW(cfg.add_amoebot({0, 0}, {}));
}

TEST(Configuration, ExpandAndContract) {
    Configuration cfg(scalar_schema());
    const auto a = cfg.add_amoebot({0, 0}, {});
    cfg.set_value(a, 0, 7);
    cfg.expand(a, 0);
    EXPECT_TRUE(cfg.amoebot(a).expanded());
    EXPECT_EQ(cfg.amoebot(a).port_count(), 10);
    EXPECT_EQ(cfg.occupied_node_count(), 2u);
    EXPECT_EQ(cfg.amoebot(a).head, (NodeCoord{1, 0}));
    EXPECT_EQ(*cfg.amoebot(a).tail, (NodeCoord{0, 0}));
    EXPECT_THROW(cfg.expand(a, 0), MoveError);

    cfg.contract(a, NodeRole::Head);
    EXPECT_FALSE(cfg.amoebot(a).expanded());
    EXPECT_FALSE(cfg.occupied({0, 0}));
    EXPECT_EQ(cfg.value(a, 0), 7);
    EXPECT_THROW(cfg.contract(a, NodeRole::Head), MoveError);
}

TEST(Configuration, ExpandIntoOccupiedFails) {
    Configuration cfg(scalar_schema());
    const auto a = cfg.add_amoebot({0, 0}, {});
    cfg.add_amoebot({1, 0}, {});
    const auto before = cfg;
    try {
        cfg.expand(a, 0);
        FAIL();
    } catch (const MoveError& e) {
        EXPECT_EQ(e.kind, MoveError::Kind::TargetOccupied);
    }
    EXPECT_EQ(cfg, before);
}

TEST(Configuration, PushConservesNodes) {
    Configuration cfg(scalar_schema());
    const auto a = cfg.add_amoebot({0, 0}, {});
    const auto b = cfg.add_expanded({2, 0}, {1, 0}, {});
    const auto nodes = cfg.occupied_node_count();
    EXPECT_EQ(cfg.push(a, port_towards(cfg, a, {1, 0})), b);
    EXPECT_EQ(cfg.occupied_node_count(), nodes);
    EXPECT_TRUE(cfg.amoebot(a).expanded());
    EXPECT_FALSE(cfg.amoebot(b).expanded());
    EXPECT_EQ(cfg.amoebot(b).head, (NodeCoord{2, 0}));
    EXPECT_EQ(cfg.amoebot(a).head, (NodeCoord{1, 0}));
}

TEST(Configuration, PushOfContractedNeighborFails) {
    Configuration cfg(scalar_schema());
    const auto a = cfg.add_amoebot({0, 0}, {});
    cfg.add_amoebot({1, 0}, {});
    EXPECT_THROW(cfg.push(a, port_towards(cfg, a, {1, 0})), MoveError);
}

TEST(Configuration, PullLeavesPullerContracted) {
    Configuration cfg(scalar_schema());
    const auto a = cfg.add_expanded({1, 0}, {0, 0}, {});
    const auto b = cfg.add_amoebot({-1, 0}, {});
    EXPECT_EQ(cfg.pull(a, port_towards(cfg, a, {-1, 0})), b);
    EXPECT_FALSE(cfg.amoebot(a).expanded());
    EXPECT_EQ(cfg.amoebot(a).head, (NodeCoord{1, 0}));
    EXPECT_TRUE(cfg.amoebot(b).expanded());
    EXPECT_EQ(cfg.amoebot(b).head, (NodeCoord{0, 0}));
    EXPECT_EQ(cfg.occupied_node_count(), 3u);
}

TEST(Configuration, IsConnected) {
    Configuration cfg(scalar_schema());
    cfg.add_expanded({1, 0}, {0, 0}, {});
    cfg.add_amoebot({2, 0}, {});
    EXPECT_TRUE(cfg.is_connected());
    cfg.add_amoebot({5, 5}, {});
    EXPECT_FALSE(cfg.is_connected());
}

TEST(Configuration, TextRoundTrip) {
    Configuration cfg(scalar_schema());
    const auto a = cfg.add_expanded({1, 0}, {0, 0}, {3, -1});
    const auto b = cfg.add_amoebot({2, 0}, {1, 1});
    cfg.set_value(a, 0, 42);
    cfg.set_value(b, 1, pack_edge(cfg.port_edge(b, port_towards(cfg, b, {1, 0}))));
    const auto back = configuration_from_text(to_text(cfg));
    EXPECT_EQ(back, cfg);
    EXPECT_EQ(back.digest(), cfg.digest());
}

TEST(Configuration, ValueRangeChecked) {
    Configuration cfg(scalar_schema());
    const auto a = cfg.add_amoebot({0, 0}, {});
    EXPECT_THROW(cfg.set_value(a, 0, 101), MemoryError);
}

TEST(Vm, WriteThenReadSelf) {
    Configuration cfg(scalar_schema());
    const auto a = cfg.add_amoebot({0, 0}, {});
    int seen = -1;
    const auto act = action("w", kAlways, [&](Context& c) {
        c.write(0, 3);
        seen = c.read(0);
        return Move::none();
    });
    EXPECT_TRUE(execute_action(cfg, a, act).ok);
    EXPECT_EQ(seen, 3);
    EXPECT_EQ(cfg.value(a, 0), 3);
}

TEST(Vm, IncrementNeighborBattery) {
    Configuration cfg(scalar_schema());
    const auto a = cfg.add_amoebot({0, 0}, {});
    const auto b = cfg.add_amoebot({1, 0}, {});
    cfg.set_value(b, 0, 4);
    const int p = port_towards(cfg, a, {1, 0});
    const auto act = action("inc", kAlways, [p](Context& c) {
        c.write(p, 0, c.read(p, 0) + 1);
        return Move::none();
    });
    EXPECT_TRUE(execute_action(cfg, a, act).ok);
    EXPECT_EQ(cfg.value(b, 0), 5);
}

TEST(Vm, ReadOnDisconnectedPortFails) {
    Configuration cfg(scalar_schema());
    const auto a = cfg.add_amoebot({0, 0}, {});
    const auto act = action("r", kAlways, [](Context& c) {
        c.write(0, 9);
        c.read(2, 0);
        return Move::none();
    });
    const auto rep = execute_action(cfg, a, act);
    EXPECT_FALSE(rep.ok);
    EXPECT_EQ(rep.failure, Failure::Disconnected);
    EXPECT_EQ(cfg.value(a, 0), 0);  // rolled back
}

TEST(Vm, GuardFalseRefuses) {
    Configuration cfg(scalar_schema());
    const auto a = cfg.add_amoebot({0, 0}, {});
    bool ran = false;
    const auto act = action("never", [](const View&) { return false; }, [&](Context&) {
        ran = true;
        return Move::none();
    });
    const auto rep = execute_action(cfg, a, act);
    EXPECT_EQ(rep.failure, Failure::GuardFalse);
    EXPECT_FALSE(ran);
}

TEST(Vm, NoMoveKeepsOccupancy) {
    Configuration cfg(scalar_schema());
    cfg.add_amoebot({0, 0}, {});
    cfg.add_amoebot({1, 0}, {});
    const auto before = cfg.occupied_node_count();
    const auto act = action("n", kAlways, [](Context& c) {
        c.write(0, 1);
        return Move::none();
    });
    execute_action(cfg, 0, act);
    EXPECT_EQ(cfg.occupied_node_count(), before);
    EXPECT_EQ(cfg.amoebot(0).head, (NodeCoord{0, 0}));
}

TEST(Vm, ExpandMovePreservesMemory) {
    Configuration cfg(scalar_schema());
    const auto a = cfg.add_amoebot({0, 0}, {});
    const auto act = action("e", kAlways, [](Context& c) {
        c.write(0, 5);
        return Move::expand(0);
    });
    const auto rep = execute_action(cfg, a, act, {true, true});
    EXPECT_TRUE(rep.ok);
    EXPECT_EQ(cfg.amoebot(a).port_count(), 10);
    EXPECT_EQ(cfg.value(a, 0), 5);
    ASSERT_FALSE(rep.ops.empty());
    EXPECT_EQ(rep.ops.back().kind, OpKind::Expand);
}

TEST(Vm, FailedExpandUndoesPrefixOnly) {
    Configuration cfg(scalar_schema());
    const auto a = cfg.add_amoebot({0, 0}, {});
    cfg.add_amoebot({1, 0}, {});
    auto act = action("e", kAlways, [](Context& c) {
        c.write(0, 1);
        c.commit_prefix();
        c.write(0, 2);
        return Move::expand(0);
    });
    act.undo_failed_expand = true;
    const auto rep = execute_action(cfg, a, act);
    EXPECT_FALSE(rep.ok);
    EXPECT_TRUE(rep.undone);
    EXPECT_EQ(rep.failure, Failure::ExpandOccupied);
    EXPECT_EQ(cfg.value(a, 0), 1);
}

TEST(Vm, MovementNotLastRejectedAtLoad) {
    AlgorithmSpec alg;
    alg.name = "bad";
    alg.schema = scalar_schema();
    auto a = action("x", kAlways, [](Context&) { return Move::none(); });
    a.declared_ops = {OpKind::Expand, OpKind::Write};
    alg.actions.push_back(a);
    EXPECT_THROW(validate_algorithm(alg), AlgorithmLoadError);
}

TEST(Vm, LockRejectedAtLoad) {
    AlgorithmSpec alg;
    alg.name = "lock";
    alg.schema = scalar_schema();
    auto a = action("x", kAlways, [](Context&) { return Move::none(); });
    a.declared_ops = {OpKind::Lock, OpKind::Write};
    alg.actions.push_back(a);
    EXPECT_THROW(validate_algorithm(alg), AlgorithmLoadError);
}

TEST(Vm, DuplicateLabelsRejected) {
    AlgorithmSpec alg;
    alg.name = "dup";
    alg.schema = scalar_schema();
    alg.actions.push_back(action("x", kAlways, [](Context&) { return Move::none(); }));
    alg.actions.push_back(action("x", kAlways, [](Context&) { return Move::none(); }));
    EXPECT_THROW(validate_algorithm(alg), AlgorithmLoadError);
}

TEST(Vm, PortVariableSurvivesRelabeling) {
    // b remembers the edge to a; after b expands away the stored edge still resolves to a.
    Configuration cfg(scalar_schema());
    const auto a = cfg.add_amoebot({0, 0}, {});
    const auto b = cfg.add_amoebot({1, 0}, {2, -1});
    cfg.set_value(b, 1, pack_edge(cfg.port_edge(b, port_towards(cfg, b, {0, 0}))));
    cfg.expand(b, port_towards(cfg, b, {2, 0}));
    EXPECT_EQ(cfg.port_target(b, 1)->id, a);
}

TEST(Vm, FirstEnabledIsLowestIndex) {
    AlgorithmSpec alg;
    alg.name = "two";
    alg.schema = scalar_schema();
    alg.actions.push_back(action("a", [](const View& v) { return v.read(0) > 5; },
                                 [](Context&) { return Move::none(); }));
    alg.actions.push_back(action("b", kAlways, [](Context&) { return Move::none(); }));
    alg.actions.push_back(action("c", kAlways, [](Context&) { return Move::none(); }));
    Configuration cfg(alg.schema);
    cfg.add_amoebot({0, 0}, {});
    EXPECT_EQ(first_enabled(alg, cfg, 0), 1u);
    cfg.set_value(0, 0, 6);
    EXPECT_EQ(first_enabled(alg, cfg, 0), 0u);
}
