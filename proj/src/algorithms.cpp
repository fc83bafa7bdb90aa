#include "amoebot/algorithms.hpp"

#include <memory>

namespace amoebot {

namespace {

constexpr int as_int(ErosionPhase p) { return static_cast<int>(p); }
constexpr int as_int(HexState s) { return static_cast<int>(s); }

}  // namespace

// ---- leader election by erosion ----

namespace {

bool candidate_like(int phase) {
    return phase == as_int(ErosionPhase::NullCandidate) || phase == as_int(ErosionPhase::Candidate);
}

// Candidate-like neighbours of a contracted amoebot, as a 6-bit mask over its ports.
unsigned candidate_mask(const View& v, int phase) {
    unsigned mask = 0;
    for (int p = 0; p < 6; ++p)
        if (v.connected(p) && candidate_like(v.read(p, phase))) mask |= 1u << p;
    return mask;
}

bool single_arc(unsigned mask) {
    int starts = 0;
    for (int p = 0; p < 6; ++p)
        if ((mask & (1u << p)) && !(mask & (1u << ((p + 5) % 6)))) ++starts;
    return starts == 1;
}

}  // namespace

AlgorithmSpec leader_election_spec() {
    auto schema = std::make_shared<Schema>();
    const int phase = schema->add({kPhaseVar, VarKind::Scalar, as_int(ErosionPhase::NullCandidate), 0, 3});

    AlgorithmSpec alg;
    alg.name = "leader-election";
    alg.schema = schema;

    ActionSpec declare;
    declare.label = "declare";
    declare.guard = [phase](const View& v) { return v.read(phase) == as_int(ErosionPhase::NullCandidate); };
    declare.compute = [phase](Context& c) {
        c.write(phase, as_int(ErosionPhase::Candidate));
        return Move::none();
    };
    declare.declared_ops = {OpKind::Read, OpKind::Write};
    alg.actions.push_back(declare);

    ActionSpec erode;
    erode.label = "erode";
    erode.guard = [phase](const View& v) {
        if (v.expanded() || v.read(phase) != as_int(ErosionPhase::Candidate)) return false;
        const unsigned m = candidate_mask(v, phase);
        return m != 0 && m != 0x3f && single_arc(m);
    };
    erode.compute = [phase](Context& c) {
        c.write(phase, as_int(ErosionPhase::Eroded));
        return Move::none();
    };
    erode.declared_ops = {OpKind::Connected, OpKind::Read, OpKind::Write};
    alg.actions.push_back(erode);

    ActionSpec leader;
    leader.label = "declare-leader";
    leader.guard = [phase](const View& v) {
        return !v.expanded() && v.read(phase) == as_int(ErosionPhase::Candidate) && candidate_mask(v, phase) == 0;
    };
    leader.compute = [phase](Context& c) {
        c.write(phase, as_int(ErosionPhase::Leader));
        return Move::none();
    };
    leader.declared_ops = {OpKind::Connected, OpKind::Read, OpKind::Write};
    alg.actions.push_back(leader);
    return alg;
}

// ---- hexagon formation ----

namespace {

struct HexVars {
    int state, parent, dir, sense;
};

bool is(const View& v, int p, const HexVars& h, HexState s) { return v.read(p, h.state) == as_int(s); }
bool is(const View& v, const HexVars& h, HexState s) { return v.read(h.state) == as_int(s); }

// Whether the node next to this amoebot's `role` node in local direction ld holds a retired amoebot.
bool retired_at(const View& v, const HexVars& h, NodeRole role, int ld) {
    auto p = v.port_for(role, mod6(ld));
    return p && v.connected(*p) && is(v, *p, h, HexState::Retired);
}

// Next step along the retired structure's boundary from the `role` node, walking with the
// local rotation sense s: the first direction whose node is free of retired amoebots just
// past a retired one.
std::optional<int> succ(const View& v, const HexVars& h, NodeRole role, int s) {
    for (int i = 0; i < 6; ++i)
        if (retired_at(v, h, role, i) && !retired_at(v, h, role, i + s)) return mod6(i + s);
    return std::nullopt;
}

int sense_of(const View& v, const HexVars& h, int p) { return v.read(p, h.sense) * v.relative_chirality(p); }

std::optional<int> first_retired_port(const View& v, const HexVars& h) {
    for (int p : v.neighbor_ports())
        if (is(v, p, h, HexState::Retired)) return p;
    return std::nullopt;
}

// The last retired amoebot's construction direction names this amoebot's node.
bool at_frontier(const View& v, const HexVars& h) {
    for (int p : v.neighbor_ports())
        if (is(v, p, h, HexState::Retired) && v.points_to_me(p, h.dir)) return true;
    return false;
}

// Same test for one node of a possibly expanded amoebot.
bool frontier_at(const View& v, const HexVars& h, NodeRole role) {
    for (int p = 0; p < v.port_count(); ++p) {
        if (v.port_at_tail(p) != (role == NodeRole::Tail) || !v.connected(p)) continue;
        if (is(v, p, h, HexState::Retired) && v.points_to_my(p, h.dir, role)) return true;
    }
    return false;
}

// A contracted root sitting on the new frontier drops its direction so nobody pulls it on.
void halt_root(Context& c, const HexVars& h, std::optional<int> p) {
    if (p && c.connected(*p) && is(c, *p, h, HexState::Root) && !c.neighbor_expanded(*p))
        c.write_port(*p, h.dir, std::nullopt);
}

// Direction a root keeps after contracting into its head.
void settle_dir(Context& c, const HexVars& h) {
    if (!is(c, h, HexState::Root)) return;
    if (frontier_at(c, h, NodeRole::Head))
        c.write_port(h.dir, std::nullopt);
    else if (auto d = succ(c, h, NodeRole::Head, c.read(h.sense)))
        c.write_port_after_move(h.dir, NodeRole::Head, *d);
}

bool mover(const View& v, const HexVars& h) { return is(v, h, HexState::Follower) || is(v, h, HexState::Root); }

// A contracted root at the tail whose construction direction enters the tail node.
std::optional<int> waiting_root_at_tail(const View& v, const HexVars& h) {
    for (int p = 0; p < v.port_count(); ++p) {
        if (!v.port_at_tail(p) || !v.connected(p)) continue;
        if (is(v, p, h, HexState::Root) && !v.neighbor_expanded(p) && v.points_to_my(p, h.dir, NodeRole::Tail))
            return p;
    }
    return std::nullopt;
}

std::optional<int> contracted_child_at_tail(const View& v, const HexVars& h) {
    for (int p = 0; p < v.port_count(); ++p) {
        if (!v.port_at_tail(p) || !v.connected(p)) continue;
        if (is(v, p, h, HexState::Follower) && !v.neighbor_expanded(p) &&
            v.points_to_my(p, h.parent, NodeRole::Tail))
            return p;
    }
    return std::nullopt;
}

bool has_tail_child(const View& v, const HexVars& h) {
    for (int p = 0; p < v.port_count(); ++p)
        if (v.port_at_tail(p) && v.connected(p) && v.points_to_my(p, h.parent, NodeRole::Tail)) return true;
    return false;
}

// Parent candidates are movers that are contracted or touch this amoebot with their tail.
// A mover touching only with its head may have just arrived, so it is never chosen.
std::optional<int> first_mover_port(const View& v, const HexVars& h) {
    for (int p = 0; p < v.port_count(); ++p) {
        if (!v.connected(p) || !(is(v, p, h, HexState::Follower) || is(v, p, h, HexState::Root))) continue;
        if (!v.neighbor_expanded(p) || v.neighbor_tail_on(p)) return p;
    }
    return std::nullopt;
}

bool idle_at_tail(const View& v, const HexVars& h) {
    for (int p = 0; p < v.port_count(); ++p)
        if (v.port_at_tail(p) && v.connected(p) && is(v, p, h, HexState::Idle)) return true;
    return false;
}

}  // namespace

AlgorithmSpec hexagon_formation_spec() {
    auto schema = std::make_shared<Schema>();
    HexVars h{};
    h.state = schema->add({kHexStateVar, VarKind::Scalar, as_int(HexState::Idle), 0, 4});
    h.parent = schema->add({kHexParentVar, VarKind::Port});
    h.dir = schema->add({kHexDirVar, VarKind::Port});
    h.sense = schema->add({kHexSenseVar, VarKind::Scalar, 0, -1, 1});

    AlgorithmSpec alg;
    alg.name = "hexagon-formation";
    alg.schema = schema;
    const std::vector<OpKind> rw = {OpKind::Connected, OpKind::Read, OpKind::Write};

    ActionSpec seed;
    seed.label = "retire-seed";
    seed.guard = [h](const View& v) { return is(v, h, HexState::Seed); };
    seed.compute = [h](Context& c) {
        c.write(h.state, as_int(HexState::Retired));
        c.write(h.sense, -1);
        c.write_port(h.dir, c.port_for(NodeRole::Head, 0));
        halt_root(c, h, c.port_for(NodeRole::Head, 0));
        return Move::none();
    };
    seed.declared_ops = rw;
    alg.actions.push_back(seed);

    ActionSpec retire;
    retire.label = "retire";
    retire.guard = [h](const View& v) { return !v.expanded() && is(v, h, HexState::Root) && at_frontier(v, h); };
    retire.compute = [h](Context& c) {
        c.write(h.state, as_int(HexState::Retired));
        const auto d = succ(c, h, NodeRole::Head, c.read(h.sense));
        const auto next = d ? c.port_for(NodeRole::Head, *d) : std::nullopt;
        c.write_port(h.dir, next);
        halt_root(c, h, next);
        return Move::none();
    };
    retire.declared_ops = rw;
    alg.actions.push_back(retire);

    ActionSpec become_root;
    become_root.label = "become-root";
    become_root.guard = [h](const View& v) {
        return !v.expanded() && (is(v, h, HexState::Idle) || is(v, h, HexState::Follower)) &&
               first_retired_port(v, h).has_value();
    };
    become_root.compute = [h](Context& c) {
        const int s = sense_of(c, h, *first_retired_port(c, h));
        c.write(h.state, as_int(HexState::Root));
        c.write_port(h.parent, std::nullopt);
        c.write(h.sense, s);
        const auto d = at_frontier(c, h) ? std::nullopt : succ(c, h, NodeRole::Head, s);
        c.write_port(h.dir, d ? c.port_for(NodeRole::Head, *d) : std::nullopt);
        return Move::none();
    };
    become_root.declared_ops = rw;
    alg.actions.push_back(become_root);

    ActionSpec refresh;
    refresh.label = "refresh-dir";
    refresh.guard = [h](const View& v) {
        if (v.expanded() || !is(v, h, HexState::Root) || at_frontier(v, h)) return false;
        const auto d = succ(v, h, NodeRole::Head, v.read(h.sense));
        return d && v.read_port(h.dir) != v.port_for(NodeRole::Head, *d);
    };
    refresh.compute = [h](Context& c) {
        const auto d = succ(c, h, NodeRole::Head, c.read(h.sense));
        c.write_port(h.dir, c.port_for(NodeRole::Head, *d));
        return Move::none();
    };
    refresh.declared_ops = rw;
    alg.actions.push_back(refresh);

    ActionSpec walk;
    walk.label = "root-expand";
    walk.guard = [h](const View& v) {
        if (v.expanded() || !is(v, h, HexState::Root) || at_frontier(v, h)) return false;
        const auto d = succ(v, h, NodeRole::Head, v.read(h.sense));
        const auto p = v.read_port(h.dir);
        return d && p && *p == *d && !v.connected(*p);
    };
    walk.compute = [h](Context& c) { return Move::expand(*c.read_port(h.dir)); };
    walk.declared_ops = {OpKind::Connected, OpKind::Read, OpKind::Expand};
    alg.actions.push_back(walk);

    ActionSpec pull;
    pull.label = "pull";
    pull.guard = [h](const View& v) {
        return v.expanded() && mover(v, h) && (waiting_root_at_tail(v, h) || contracted_child_at_tail(v, h));
    };
    pull.compute = [h](Context& c) {
        int p;
        if (auto r = waiting_root_at_tail(c, h)) {
            p = *r;
            const auto d = succ(c, h, NodeRole::Tail, sense_of(c, h, p));
            if (frontier_at(c, h, NodeRole::Tail))
                c.write_port(p, h.dir, std::nullopt);
            else if (d)
                c.write_port_after_move(p, h.dir, NodeRole::Head, *d);
        } else {
            p = *contracted_child_at_tail(c, h);
            c.write_port_after_move(p, h.parent, NodeRole::Head, c.axis_local_dir());
        }
        settle_dir(c, h);
        return Move::pull(p);
    };
    pull.declared_ops = {OpKind::Connected, OpKind::Read, OpKind::Write, OpKind::Pull};
    alg.actions.push_back(pull);

    ActionSpec contract;
    contract.label = "contract-tail";
    contract.guard = [h](const View& v) {
        return v.expanded() && mover(v, h) && !has_tail_child(v, h) && !idle_at_tail(v, h);
    };
    contract.compute = [h](Context& c) {
        settle_dir(c, h);
        return Move::contract(NodeRole::Head);
    };
    contract.declared_ops = {OpKind::Connected, OpKind::Read, OpKind::Write, OpKind::Contract};
    alg.actions.push_back(contract);

    ActionSpec join;
    join.label = "join";
    join.guard = [h](const View& v) { return is(v, h, HexState::Idle) && first_mover_port(v, h).has_value(); };
    join.compute = [h](Context& c) {
        c.write(h.state, as_int(HexState::Follower));
        c.write_port(h.parent, *first_mover_port(c, h));
        return Move::none();
    };
    join.declared_ops = rw;
    alg.actions.push_back(join);
    return alg;
}

void designate_seed(Configuration& cfg, AmoebotId seed) {
    cfg.set_value(seed, cfg.schema().id(kHexStateVar), as_int(HexState::Seed));
}

std::vector<NodeCoord> spiral_positions(std::size_t n) {
    std::vector<NodeCoord> out;
    if (n == 0) return out;
    out.push_back({0, 0});
    for (int r = 1; out.size() < n; ++r) {
        NodeCoord v{r, -r};
        for (int d : {1, 2, 3, 4, 5, 0})
            for (int s = 0; s < r && out.size() < n; ++s) {
                v = neighbor(v, d);
                out.push_back(v);
            }
    }
    return out;
}

std::vector<NodeCoord> spiral_positions(std::size_t n, NodeCoord seed, Orientation o) {
    const NodeCoord e0 = kDirections[label_to_direction(o, 0)];
    const NodeCoord e1 = kDirections[label_to_direction(o, 1)];
    std::vector<NodeCoord> out;
    for (const auto& v : spiral_positions(n))
        out.push_back({seed.q + v.q * e0.q + v.r * e1.q, seed.r + v.q * e0.r + v.r * e1.r});
    return out;
}

// ---- small fixtures ----

AlgorithmSpec toy_coloring_spec() {
    auto schema = std::make_shared<Schema>();
    const int color = schema->add({kColorVar, VarKind::Scalar, 0, 0, 7});
    AlgorithmSpec alg;
    alg.name = "toy-coloring";
    alg.schema = schema;
    ActionSpec a;
    a.label = "color";
    a.guard = [color](const View& v) { return v.read(color) == 0; };
    a.compute = [color](Context& c) {
        unsigned used = 0;
        for (int p : c.neighbor_ports()) used |= 1u << c.read(p, color);
        int pick = 1;
        while (used & (1u << pick)) ++pick;
        c.write(color, pick);
        return Move::none();
    };
    a.declared_ops = {OpKind::Connected, OpKind::Read, OpKind::Write};
    alg.actions.push_back(a);
    return alg;
}

AlgorithmSpec disconnecting_fixture_spec() {
    auto schema = std::make_shared<Schema>();
    const int moved = schema->add({"drift.moved", VarKind::Scalar, 0, 0, 1});
    AlgorithmSpec alg;
    alg.name = "disconnecting-fixture";
    alg.schema = schema;
    ActionSpec e;
    e.label = "drift-expand";
    e.guard = [moved](const View& v) { return !v.expanded() && v.read(moved) == 0 && !v.connected(0); };
    e.compute = [](Context&) { return Move::expand(0); };
    e.declared_ops = {OpKind::Connected, OpKind::Read, OpKind::Expand};
    alg.actions.push_back(e);
    ActionSpec c;
    c.label = "drift-contract";
    c.guard = [](const View& v) { return v.expanded(); };
    c.compute = [moved](Context& ctx) {
        ctx.write(moved, 1);
        return Move::contract(NodeRole::Head);
    };
    c.declared_ops = {OpKind::Write, OpKind::Contract};
    alg.actions.push_back(c);
    return alg;
}

}  // namespace amoebot
