#include "amoebot/expansion.hpp"

#include <algorithm>

#include "amoebot/energy.hpp"
#include "amoebot/energy_oracles.hpp"

namespace amoebot {

namespace {

std::uint16_t hidden_mask(const View& v, int flags) {
    std::uint16_t mask = 0;
    for (int p = 0; p < v.port_count(); ++p)
        if (v.connected(p) && !v.has_clear_port_to_me(p, flags)) mask |= static_cast<std::uint16_t>(1u << p);
    return mask;
}

}  // namespace

AlgorithmSpec transform_expansion_robust(const AlgorithmSpec& alg, ExpansionOptions opts) {
    validate_algorithm(alg);
    auto schema = std::make_shared<Schema>(*alg.schema);
    if (schema->find(kExpandFlagsVar)) throw AlgorithmLoadError(alg.name + ": already expansion-robust");
    const int flags = schema->add({kExpandFlagsVar, VarKind::EdgeSet});

    AlgorithmSpec out;
    out.name = alg.name + "^E";
    out.schema = schema;

    ActionSpec reset;
    reset.label = kResetFlagLabel;
    reset.guard = [flags](const View& v) { return v.read_edgeset(flags) != 0; };
    reset.compute = [flags](Context& c) {
        const std::uint16_t set = c.read_edgeset(flags);
        int p = 0;
        while (!(set & (1u << p))) ++p;
        c.clear_edgeset_label(flags, p);
        return Move::none();
    };
    reset.declared_ops = {OpKind::Read, OpKind::Write};
    out.actions.push_back(reset);

    for (const auto& a : alg.actions) {
        ActionSpec t;
        t.label = a.label;
        t.guard = [g = a.guard, flags](const View& v) { return g(v.restricted(hidden_mask(v, flags))); };
        t.compute = [c = a.compute, flags, opts](Context& ctx) {
            const std::uint16_t hidden = hidden_mask(ctx, flags);
            ctx.write(flags, 0);
            if (!opts.skip_neighbor_reset)
                for (int p : ctx.neighbor_ports()) ctx.write(p, flags, 0);
            ctx.commit_prefix();
            ctx.restrict_to(hidden);
            return c(ctx);
        };
        t.after_move = [inner = a.after_move, flags](Context& ctx, const MoveOutcome& out) {
            if (inner) inner(ctx, out);
            ctx.restrict_to(0);
            if (out.partner) {
                for (int p : ctx.new_ports())
                    if (!ctx.faces_partner(p)) ctx.set_edgeset_label(flags, p);
                for (int p : ctx.partner_new_ports())
                    if (!ctx.partner_faces_me(p)) ctx.set_partner_edgeset_label(flags, p);
            } else if (out.move.kind == MoveKind::Expand) {
                for (int p : ctx.new_ports()) ctx.set_edgeset_label(flags, p);
            }
        };
        if (!a.declared_ops.empty()) {
            t.declared_ops = {OpKind::Write};
            t.declared_ops.insert(t.declared_ops.end(), a.declared_ops.begin(), a.declared_ops.end());
        }
        t.undo_failed_expand = true;
        out.actions.push_back(std::move(t));
    }
    out.framework_begin = 0;
    validate_algorithm(out);
    return out;
}

std::uint16_t non_established_ports(const Configuration& cfg, AmoebotId id) {
    return hidden_mask(View(cfg, id), cfg.schema().id(kExpandFlagsVar));
}

std::vector<AmoebotId> established_neighborhood(const Configuration& cfg, AmoebotId id) {
    const View v(cfg, id);
    const int flags = cfg.schema().id(kExpandFlagsVar);
    std::vector<AmoebotId> out;
    for (int p : v.neighbor_ports())
        if (v.has_clear_port_to_me(p, flags)) out.push_back(cfg.across(id, p)->id);
    std::sort(out.begin(), out.end());
    return out;
}

CorrespondenceReport check_expansion_correspondence(const AlgorithmSpec& alg, const AlgorithmSpec& alg_e,
                                                    const Trace& trace, bool energy_neighbors) {
    CorrespondenceReport rep;
    auto violation = [&](std::size_t i, const std::string& msg) {
        rep.ok = false;
        if (rep.violations.size() < 32) rep.violations.push_back("step " + std::to_string(i) + ": " + msg);
    };
    Configuration cfg = trace.initial;
    std::optional<EnergyVarIds> ids;
    if (energy_neighbors) ids = energy_var_ids(cfg.schema());

    auto blocked = [&](const Configuration& c, AmoebotId b) {
        const int st = c.value(b, ids->state);
        return st == static_cast<int>(EnergyState::Idle) || st == static_cast<int>(EnergyState::Pruning);
    };
    // Per amoebot: whether it was idle or pruning right after its last move.
    std::vector<bool> arrived_blocked(cfg.size(), false);

    std::size_t churn = 0;
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const auto& s = trace.steps[i];
        const int flags = cfg.schema().id(kExpandFlagsVar);
        if (ids) {
            for (AmoebotId a = 0; a < cfg.size(); ++a) {
                const View v(cfg, a);
                for (int p : v.neighbor_ports()) {
                    const AmoebotId b = cfg.across(a, p)->id;
                    if (!blocked(cfg, b) && !v.points_to_me(p, ids->parent)) continue;
                    ++rep.established_checks;
                    if (!v.has_clear_port_to_me(p, flags)) {
                        ++rep.established_violations;
                        if (arrived_blocked[b]) ++rep.arrived_blocked;
                        violation(i, "neighbour of " + std::to_string(a) + " on port " + std::to_string(p) +
                                         " is idle, pruning or a child but not established");
                    }
                }
            }
        }
        const auto& action_e = alg_e.actions.at(s.action);
        if (action_e.label == kResetFlagLabel) {
            rep.max_reset_churn = std::max(rep.max_reset_churn, ++churn);
        } else {
            churn = 0;
            const auto it = std::find_if(alg.actions.begin(), alg.actions.end(),
                                         [&](const ActionSpec& a) { return a.label == action_e.label; });
            if (it == alg.actions.end()) {
                violation(i, "no action " + action_e.label + " in the base algorithm");
            } else {
                ++rep.steps_checked;
                const Configuration plain = cfg.rebased(alg.schema);
                if (!guard_holds(plain, s.id, *it)) {
                    ++rep.guard_violations;
                    if (ids) {
                        const View v(cfg, s.id);
                        const std::uint16_t hidden = non_established_ports(cfg, s.id);
                        for (int p : v.neighbor_ports())
                            if ((hidden >> p) & 1u && blocked(cfg, cfg.across(s.id, p)->id)) {
                                ++rep.hidden_blocker_guards;
                                break;
                            }
                    }
                    violation(i, action_e.label + " enabled for " + std::to_string(s.id) +
                                     " in its established neighbourhood but not in its full neighbourhood");
                } else {
                    auto [after_e, re] = apply_action(cfg, s.id, action_e);
                    auto [after, ra] = apply_action(plain, s.id, *it);
                    if (re.ok != ra.ok || !congruent(after_e, after)) {
                        ++rep.execution_violations;
                        violation(i, re.ok != ra.ok ? action_e.label + ": executions disagree on success"
                                                    : action_e.label + ": executions differ beyond the expand flags");
                    }
                }
            }
        }
        std::vector<std::pair<NodeCoord, std::optional<NodeCoord>>> before;
        if (ids)
            for (const auto& a : cfg.amoebots()) before.emplace_back(a.head, a.tail);
        auto r = execute_action(cfg, s.id, action_e);
        if (ids)
            for (AmoebotId b = 0; b < cfg.size(); ++b)
                if (before[b] != std::make_pair(cfg.amoebot(b).head, cfg.amoebot(b).tail))
                    arrived_blocked[b] = blocked(cfg, b);
        if (!r.ok && !r.undone) {
            violation(i, "trace step failed on replay: " + r.message);
            break;
        }
    }
    const std::size_t bound = cfg.size() * 10;
    if (rep.max_reset_churn > bound) violation(trace.steps.size(), "unbounded flag-reset churn");
    return rep;
}

}  // namespace amoebot
