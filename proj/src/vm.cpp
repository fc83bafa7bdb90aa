#include "amoebot/vm.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace amoebot {

std::string_view to_string(OpKind k) {
    switch (k) {
        case OpKind::Connected: return "Connected";
        case OpKind::Read: return "Read";
        case OpKind::Write: return "Write";
        case OpKind::Expand: return "Expand";
        case OpKind::Contract: return "Contract";
        case OpKind::Push: return "Push";
        case OpKind::Pull: return "Pull";
        case OpKind::Lock: return "Lock";
        case OpKind::Unlock: return "Unlock";
    }
    return "?";
}

bool is_movement(OpKind k) {
    return k == OpKind::Expand || k == OpKind::Contract || k == OpKind::Push || k == OpKind::Pull;
}

std::string_view to_string(MoveKind k) {
    switch (k) {
        case MoveKind::None: return "none";
        case MoveKind::Expand: return "expand";
        case MoveKind::Contract: return "contract";
        case MoveKind::Push: return "push";
        case MoveKind::Pull: return "pull";
    }
    return "?";
}

std::string_view to_string(Failure f) {
    switch (f) {
        case Failure::None: return "none";
        case Failure::GuardFalse: return "guard-false";
        case Failure::InvalidPort: return "invalid-port";
        case Failure::Disconnected: return "disconnected-port";
        case Failure::Memory: return "memory";
        case Failure::ExpandOccupied: return "expand-occupied";
        case Failure::Movement: return "movement";
        case Failure::PhaseStructure: return "phase-structure";
    }
    return "?";
}

// ---- View ----

View::View(const Configuration& cfg, AmoebotId self, std::uint16_t hidden) : cfg_(&cfg), self_(self), hidden_(hidden) {}

bool View::expanded() const { return cfg_->amoebot(self_).expanded(); }
int View::port_count() const { return cfg_->amoebot(self_).port_count(); }

void View::check_port(int p) const {
    if (p < 0 || p >= port_count()) throw LatticeError("port label out of range: " + std::to_string(p));
}

std::optional<Occupant> View::neighbor_at(int p) const {
    check_port(p);
    if (hidden_ & (1u << p)) return std::nullopt;
    if (!cacheable_) return cfg_->across(self_, p);
    fill_cache();
    return nb_cache_[static_cast<std::size_t>(p)];
}

void View::fill_cache() const {
    if (cached_) return;
    const int m = port_count();
    for (int p = 0; p < m; ++p) nb_cache_[static_cast<std::size_t>(p)] = cfg_->across(self_, p);
    cached_ = true;
    nb_ports_cache_ = compute_neighbor_ports();
}

bool View::connected(int p) const { return neighbor_at(p).has_value(); }

int View::global_to_local(int dir) const { return direction_to_label(cfg_->amoebot(self_).orientation, dir); }
int View::local_to_global(int ld) const { return label_to_direction(cfg_->amoebot(self_).orientation, mod6(ld)); }

std::int32_t View::read(int var) const {
    cfg_->schema().at(var);
    return cfg_->value(self_, var);
}

std::int32_t View::read(int p, int var) const {
    auto nb = neighbor_at(p);
    if (!nb) throw ActionError("read on disconnected port " + std::to_string(p));
    cfg_->schema().at(var);
    return cfg_->value(nb->id, var);
}

std::optional<int> View::read_port(int var) const {
    auto e = cfg_->port_value(self_, var);
    if (!e) return std::nullopt;
    return cfg_->label_of_edge(self_, *e);
}

bool View::points_to_me(int p, int var) const {
    auto nb = neighbor_at(p);
    if (!nb) throw ActionError("read on disconnected port " + std::to_string(p));
    auto t = cfg_->port_target(nb->id, var);
    return t && t->id == self_;
}

bool View::points_to_my(int p, int var, NodeRole role) const {
    auto nb = neighbor_at(p);
    if (!nb) throw ActionError("read on disconnected port " + std::to_string(p));
    auto t = cfg_->port_target(nb->id, var);
    return t && t->id == self_ && t->role == role;
}

std::uint16_t View::read_edgeset(int var) const {
    const auto& a = cfg_->amoebot(self_);
    const int mask = cfg_->value(self_, var);
    std::uint16_t out = 0;
    const auto per = cfg_->perimeter(self_);
    for (std::size_t l = 0; l < per.size(); ++l) {
        const NodeRole role = per[l].node == a.head ? NodeRole::Head : NodeRole::Tail;
        if (mask & (1 << edgeset_bit(role, per[l].dir))) out |= static_cast<std::uint16_t>(1u << l);
    }
    return out;
}

bool View::has_clear_port_to_me(int p, int var) const {
    auto nb = neighbor_at(p);
    if (!nb) throw ActionError("read on disconnected port " + std::to_string(p));
    const auto& me = cfg_->amoebot(self_);
    const auto& b = cfg_->amoebot(nb->id);
    const int mask = cfg_->value(nb->id, var);
    for (const auto& e : cfg_->perimeter(nb->id)) {
        const NodeCoord t = e.target();
        if (t != me.head && !(me.tail && t == *me.tail)) continue;
        const NodeRole role = e.node == b.head ? NodeRole::Head : NodeRole::Tail;
        if (!(mask & (1 << edgeset_bit(role, e.dir)))) return true;
    }
    return false;
}

int View::local_dir(int p) const {
    check_port(p);
    return global_to_local(cfg_->port_edge(self_, p).dir);
}

bool View::port_at_tail(int p) const {
    check_port(p);
    const auto& a = cfg_->amoebot(self_);
    return a.tail && cfg_->port_edge(self_, p).node == *a.tail;
}

std::optional<int> View::port_for(NodeRole role, int ld) const {
    const auto& a = cfg_->amoebot(self_);
    if (role == NodeRole::Tail && !a.tail) return std::nullopt;
    return cfg_->label_of_edge(self_, {a.node(role), local_to_global(ld)});
}

int View::axis_local_dir() const {
    const auto& a = cfg_->amoebot(self_);
    if (!a.tail) throw ActionError("axis of a contracted amoebot");
    return global_to_local(*direction_between(*a.tail, a.head));
}

bool View::neighbor_expanded(int p) const {
    auto nb = neighbor_at(p);
    if (!nb) throw ActionError("read on disconnected port " + std::to_string(p));
    return cfg_->amoebot(nb->id).expanded();
}

bool View::neighbor_tail_on(int p) const {
    auto nb = neighbor_at(p);
    if (!nb) throw ActionError("read on disconnected port " + std::to_string(p));
    return nb->role == NodeRole::Tail;
}

int View::neighbor_axis_local_dir(int p) const {
    auto nb = neighbor_at(p);
    if (!nb) throw ActionError("read on disconnected port " + std::to_string(p));
    const auto& b = cfg_->amoebot(nb->id);
    if (!b.tail) throw ActionError("axis of a contracted neighbor");
    return global_to_local(*direction_between(*b.tail, b.head));
}

std::vector<int> View::ports_facing_me(int p) const {
    auto nb = neighbor_at(p);
    if (!nb) throw ActionError("read on disconnected port " + std::to_string(p));
    const auto& me = cfg_->amoebot(self_);
    std::vector<int> out;
    const auto per = cfg_->perimeter(nb->id);
    for (std::size_t l = 0; l < per.size(); ++l) {
        const NodeCoord t = per[l].target();
        if (t == me.head || (me.tail && t == *me.tail)) out.push_back(static_cast<int>(l));
    }
    return out;
}

int View::relative_chirality(int p) const {
    auto nb = neighbor_at(p);
    if (!nb) throw ActionError("read on disconnected port " + std::to_string(p));
    return cfg_->amoebot(self_).orientation.chirality * cfg_->amoebot(nb->id).orientation.chirality;
}

bool View::same_neighbor(int p, int q) const {
    auto a = neighbor_at(p);
    auto b = neighbor_at(q);
    return a && b && a->id == b->id;
}

std::vector<int> View::neighbor_ports() const {
    if (!cacheable_) return compute_neighbor_ports();
    fill_cache();
    return nb_ports_cache_;
}

std::vector<int> View::compute_neighbor_ports() const {
    std::vector<int> out;
    out.reserve(10);
    std::array<AmoebotId, 10> seen{};
    std::size_t count = 0;
    for (int p = 0; p < port_count(); ++p) {
        auto nb = neighbor_at(p);
        if (!nb) continue;
        if (std::find(seen.begin(), seen.begin() + count, nb->id) != seen.begin() + count) continue;
        seen[count++] = nb->id;
        out.push_back(p);
    }
    return out;
}

bool View::nodes_adjacent(int p, int q) const {
    check_port(p);
    check_port(q);
    return direction_between(cfg_->port_edge(self_, p).target(), cfg_->port_edge(self_, q).target()).has_value();
}

// ---- Context ----

Context::Context(Configuration& cfg, AmoebotId self, std::uint16_t hidden, bool record)
    : View(cfg, self, hidden), mcfg_(&cfg), record_(record) {
    cacheable_ = false;
}

void Context::note(OpKind k, int p, int var) {
    if (record_) ops_.push_back({k, p, var, after_move_});
}

void Context::journal(AmoebotId id, int var) {
    undo_.emplace_back(id, var, mcfg_->value(id, var));
    touched_.push_back(id);
}

AmoebotId Context::target_of(int p) const {
    auto nb = neighbor_at(p);
    if (!nb) throw ActionError("write on disconnected port " + std::to_string(p));
    return nb->id;
}

void Context::write(int var, std::int32_t value) {
    note(OpKind::Write, -1, var);
    mcfg_->schema().at(var);
    journal(self_, var);
    mcfg_->set_value(self_, var, value);
}

void Context::write(int p, int var, std::int32_t value) {
    note(OpKind::Write, p, var);
    const AmoebotId t = target_of(p);
    mcfg_->schema().at(var);
    journal(t, var);
    mcfg_->set_value(t, var, value);
}

void Context::write_port(int var, std::optional<int> label) {
    note(OpKind::Write, -1, var);
    if (mcfg_->schema().at(var).kind != VarKind::Port) throw MemoryError("not a port variable");
    const std::int32_t v = label ? pack_edge(mcfg_->port_edge(self_, *label)) : kNullPort;
    journal(self_, var);
    mcfg_->set_value(self_, var, v);
}

void Context::write_port(int p, int var, std::optional<int> label) {
    note(OpKind::Write, p, var);
    const AmoebotId t = target_of(p);
    if (mcfg_->schema().at(var).kind != VarKind::Port) throw MemoryError("not a port variable");
    const std::int32_t v = label ? pack_edge(mcfg_->port_edge(t, *label)) : kNullPort;
    journal(t, var);
    mcfg_->set_value(t, var, v);
}

void Context::write_port_after_move(int var, NodeRole role, int ld) {
    note(OpKind::Write, -1, var);
    if (mcfg_->schema().at(var).kind != VarKind::Port) throw MemoryError("not a port variable");
    journal(self_, var);
    pending_.push_back({self_, var, role, local_to_global(ld)});
}

void Context::write_port_after_move(int p, int var, NodeRole role, int ld) {
    note(OpKind::Write, p, var);
    const AmoebotId t = target_of(p);
    if (mcfg_->schema().at(var).kind != VarKind::Port) throw MemoryError("not a port variable");
    journal(t, var);
    pending_.push_back({t, var, role, local_to_global(ld)});
}

void Context::lock() { note(OpKind::Lock, -1, -1); }
void Context::unlock() { note(OpKind::Unlock, -1, -1); }

std::vector<int> Context::new_ports() const {
    std::vector<int> out;
    if (!outcome_) return out;
    const auto per = mcfg_->perimeter(self_);
    for (std::size_t l = 0; l < per.size(); ++l)
        if (std::find(outcome_->self_before.begin(), outcome_->self_before.end(), per[l]) ==
            outcome_->self_before.end())
            out.push_back(static_cast<int>(l));
    return out;
}

std::vector<int> Context::partner_new_ports() const {
    std::vector<int> out;
    if (!outcome_ || !outcome_->partner) return out;
    const auto per = mcfg_->perimeter(*outcome_->partner);
    for (std::size_t l = 0; l < per.size(); ++l)
        if (std::find(outcome_->partner_before.begin(), outcome_->partner_before.end(), per[l]) ==
            outcome_->partner_before.end())
            out.push_back(static_cast<int>(l));
    return out;
}

std::optional<int> Context::partner_port() const {
    if (!outcome_ || !outcome_->partner) return std::nullopt;
    for (int p = 0; p < port_count(); ++p) {
        auto nb = mcfg_->across(self_, p);
        if (nb && nb->id == *outcome_->partner) return p;
    }
    return std::nullopt;
}

bool Context::faces_partner(int p) const {
    if (!outcome_ || !outcome_->partner) return false;
    auto nb = mcfg_->across(self_, p);
    return nb && nb->id == *outcome_->partner;
}

bool Context::partner_faces_me(int partner_label) const {
    if (!outcome_ || !outcome_->partner) return false;
    auto nb = mcfg_->across(*outcome_->partner, partner_label);
    return nb && nb->id == self_;
}

namespace {
void set_edge_bit(Configuration& cfg, AmoebotId id, int var, int label) {
    const auto& a = cfg.amoebot(id);
    const PortEdge e = cfg.port_edge(id, label);
    const NodeRole role = e.node == a.head ? NodeRole::Head : NodeRole::Tail;
    cfg.set_value(id, var, cfg.value(id, var) | (1 << edgeset_bit(role, e.dir)));
}
}  // namespace

void Context::clear_edgeset_label(int var, int label) {
    note(OpKind::Write, -1, var);
    check_port(label);
    const auto& a = mcfg_->amoebot(self_);
    const PortEdge e = mcfg_->port_edge(self_, label);
    const NodeRole role = e.node == a.head ? NodeRole::Head : NodeRole::Tail;
    journal(self_, var);
    mcfg_->set_value(self_, var, mcfg_->value(self_, var) & ~(1 << edgeset_bit(role, e.dir)));
}

void Context::set_edgeset_label(int var, int label) {
    note(OpKind::Write, -1, var);
    set_edge_bit(*mcfg_, self_, var, label);
    touched_.push_back(self_);
}

void Context::set_partner_edgeset_label(int var, int label) {
    if (!outcome_ || !outcome_->partner) throw ActionError("no movement partner");
    note(OpKind::Write, partner_port().value_or(-1), var);
    set_edge_bit(*mcfg_, *outcome_->partner, var, label);
    touched_.push_back(*outcome_->partner);
}

// ---- Engine ----

struct Engine {
    static void rollback(Configuration& cfg, Context& ctx) {
        for (auto it = ctx.undo_.rbegin(); it != ctx.undo_.rend(); ++it)
            cfg.set_value(std::get<0>(*it), std::get<1>(*it), std::get<2>(*it));
        ctx.undo_.clear();
        ctx.pending_.clear();
    }

    static ExecutionReport run(Configuration& cfg, AmoebotId id, const ActionSpec& action, ExecOptions opts) {
        ExecutionReport rep;
        if (opts.check_guard && !guard_holds(cfg, id, action)) {
            rep.ok = false;
            rep.failure = Failure::GuardFalse;
            rep.message = "guard of " + action.label + " is false";
            return rep;
        }
        Context ctx(cfg, id, 0, opts.record_ops);
        auto fail = [&](Failure f, const std::string& msg) {
            rollback(cfg, ctx);
            rep.ok = false;
            rep.failure = f;
            rep.message = msg;
            rep.ops = ctx.ops_;
            rep.touched.clear();
            return rep;
        };

        Move m;
        try {
            m = action.compute(ctx);
        } catch (const LatticeError& e) {
            return fail(Failure::InvalidPort, e.what());
        } catch (const ActionError& e) {
            return fail(Failure::Disconnected, e.what());
        } catch (const MemoryError& e) {
            return fail(Failure::Memory, e.what());
        }
        rep.move = m;

        MoveOutcome outcome;
        outcome.move = m;
        if (m.kind != MoveKind::None) {
            static constexpr OpKind kinds[] = {OpKind::Read, OpKind::Expand, OpKind::Contract, OpKind::Push,
                                               OpKind::Pull};
            ctx.note(kinds[static_cast<int>(m.kind)], m.port, -1);
            try {
                outcome.self_before = cfg.perimeter(id);
                if (m.kind == MoveKind::Push || m.kind == MoveKind::Pull) {
                    if (ctx.hidden_ & (1u << m.port)) throw ActionError("handover through a hidden port");
                    auto nb = cfg.across(id, m.port);
                    if (nb) outcome.partner_before = cfg.perimeter(nb->id);
                }
                switch (m.kind) {
                    case MoveKind::Expand: cfg.expand(id, m.port); break;
                    case MoveKind::Contract: cfg.contract(id, m.keep); break;
                    case MoveKind::Push: outcome.partner = cfg.push(id, m.port); break;
                    case MoveKind::Pull: outcome.partner = cfg.pull(id, m.port); break;
                    case MoveKind::None: break;
                }
            } catch (const MoveError& e) {
                const bool occupied_target = m.kind == MoveKind::Expand && e.kind == MoveError::Kind::TargetOccupied;
                if (!(occupied_target && action.undo_failed_expand))
                    return fail(occupied_target ? Failure::ExpandOccupied : Failure::Movement, e.what());
                while (ctx.undo_.size() > ctx.kept_writes_) {
                    const auto& [who, var, old] = ctx.undo_.back();
                    cfg.set_value(who, var, old);
                    ctx.undo_.pop_back();
                }
                ctx.pending_.clear();
                ctx.touched_.resize(ctx.kept_touched_);
                std::sort(ctx.touched_.begin(), ctx.touched_.end());
                ctx.touched_.erase(std::unique(ctx.touched_.begin(), ctx.touched_.end()), ctx.touched_.end());
                rep.ok = false;
                rep.undone = true;
                rep.failure = Failure::ExpandOccupied;
                rep.message = e.what();
                rep.ops = ctx.ops_;
                rep.touched = std::move(ctx.touched_);
                return rep;
            } catch (const LatticeError& e) {
                return fail(Failure::InvalidPort, e.what());
            } catch (const ActionError& e) {
                return fail(Failure::Disconnected, e.what());
            }
            ctx.touched_.push_back(id);
            if (outcome.partner) ctx.touched_.push_back(*outcome.partner);
        }
        rep.partner = outcome.partner;

        for (const auto& w : ctx.pending_) {
            const auto& t = cfg.amoebot(w.target);
            if (w.role == NodeRole::Tail && !t.tail) throw ActionError("post-move write to the tail of a contracted amoebot");
            cfg.set_value(w.target, w.var, pack_edge({t.node(w.role), w.global_dir}));
        }
        ctx.pending_.clear();

        if (action.after_move) {
            ctx.after_move_ = true;
            ctx.outcome_ = &outcome;
            action.after_move(ctx, outcome);
            ctx.outcome_ = nullptr;
        }

        rep.ops = std::move(ctx.ops_);
        std::sort(ctx.touched_.begin(), ctx.touched_.end());
        ctx.touched_.erase(std::unique(ctx.touched_.begin(), ctx.touched_.end()), ctx.touched_.end());
        rep.touched = std::move(ctx.touched_);
        return rep;
    }
};

ExecutionReport execute_action(Configuration& cfg, AmoebotId id, const ActionSpec& action, ExecOptions opts) {
    return Engine::run(cfg, id, action, opts);
}

std::pair<Configuration, ExecutionReport> apply_action(const Configuration& cfg, AmoebotId id,
                                                       const ActionSpec& action, ExecOptions opts) {
    Configuration next = cfg;
    auto rep = execute_action(next, id, action, opts);
    return {std::move(next), std::move(rep)};
}

bool guard_holds(const Configuration& cfg, AmoebotId id, const ActionSpec& action) {
    return action.guard(View(cfg, id));
}

std::optional<std::size_t> first_enabled(const AlgorithmSpec& alg, const Configuration& cfg, AmoebotId id,
                                         bool framework_first) {
    const View view(cfg, id);
    const std::size_t m = alg.actions.size();
    const std::size_t split = (framework_first && alg.framework_begin > 0) ? alg.framework_begin : 0;
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t i = (split + k) % m;
        if (alg.actions[i].guard(view)) return i;
    }
    return std::nullopt;
}

bool is_enabled(const AlgorithmSpec& alg, const Configuration& cfg, AmoebotId id) {
    return first_enabled(alg, cfg, id).has_value();
}

bool is_terminal(const AlgorithmSpec& alg, const Configuration& cfg) {
    for (AmoebotId id = 0; id < cfg.size(); ++id)
        if (is_enabled(alg, cfg, id)) return false;
    return true;
}

void validate_algorithm(const AlgorithmSpec& alg) {
    if (!alg.schema) throw AlgorithmLoadError(alg.name + ": missing schema");
    std::set<std::string> labels;
    for (const auto& a : alg.actions) {
        if (!labels.insert(a.label).second) throw AlgorithmLoadError(alg.name + ": duplicate action label " + a.label);
        if (!a.guard || !a.compute) throw AlgorithmLoadError(alg.name + ": action " + a.label + " lacks guard or compute");
        int moves = 0;
        for (std::size_t i = 0; i < a.declared_ops.size(); ++i) {
            const OpKind k = a.declared_ops[i];
            if (k == OpKind::Lock || k == OpKind::Unlock)
                throw AlgorithmLoadError(alg.name + ": action " + a.label + " uses Lock/Unlock");
            if (is_movement(k)) {
                ++moves;
                if (i + 1 != a.declared_ops.size())
                    throw AlgorithmLoadError(alg.name + ": action " + a.label + " has a movement before its last operation");
            }
        }
        if (moves > 1) throw AlgorithmLoadError(alg.name + ": action " + a.label + " has more than one movement");
    }
}

Configuration make_configuration(const AlgorithmSpec& alg, const std::vector<NodeCoord>& nodes,
                                 const std::vector<Orientation>& orientations) {
    Configuration cfg(alg.schema);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        cfg.add_amoebot(nodes[i], i < orientations.size() ? orientations[i] : Orientation{});
    return cfg;
}

}  // namespace amoebot
