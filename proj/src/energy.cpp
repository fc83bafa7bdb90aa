#include "amoebot/energy.hpp"

#include <algorithm>
#include <sstream>

namespace amoebot {

std::string_view to_string(EnergyState s) {
    switch (s) {
        case EnergyState::Source: return "source";
        case EnergyState::Idle: return "idle";
        case EnergyState::Active: return "active";
        case EnergyState::Asking: return "asking";
        case EnergyState::Growing: return "growing";
        case EnergyState::Pruning: return "pruning";
    }
    return "?";
}

EnergyVarIds energy_var_ids(const Schema& schema) {
    return {schema.id(kEnergyStateVar), schema.id(kEnergyParentVar), schema.id(kEnergyBatteryVar)};
}

int DemandFunction::of(const std::string& label) const {
    auto it = per_action.find(label);
    return it == per_action.end() ? default_demand : it->second;
}

namespace {
constexpr const char* kPredicateNames[] = {"GetPruned", "AskGrowth", "GrowForest", "HarvestEnergy", "ShareEnergy"};

int st(const View& v, const EnergyVarIds& ids) { return v.read(ids.state); }
int st(const View& v, int p, const EnergyVarIds& ids) { return v.read(p, ids.state); }

bool has_idle_neighbor(const View& v, const EnergyVarIds& ids) {
    for (int p : v.neighbor_ports())
        if (st(v, p, ids) == static_cast<int>(EnergyState::Idle)) return true;
    return false;
}

bool has_asking_child(const View& v, const EnergyVarIds& ids) {
    for (int p : children_ports(v, ids))
        if (st(v, p, ids) == static_cast<int>(EnergyState::Asking)) return true;
    return false;
}

std::optional<int> non_full_child(const View& v, const EnergyVarIds& ids, int kappa) {
    for (int p : children_ports(v, ids))
        if (v.read(p, ids.bat) < kappa) return p;
    return std::nullopt;
}

bool get_pruned(const View& v, const EnergyVarIds& ids) { return st(v, ids) == static_cast<int>(EnergyState::Pruning); }

bool ask_growth(const View& v, const EnergyVarIds& ids) {
    return st(v, ids) == static_cast<int>(EnergyState::Active) && (has_idle_neighbor(v, ids) || has_asking_child(v, ids));
}

bool grow_forest(const View& v, const EnergyVarIds& ids) {
    const int s = st(v, ids);
    if (s == static_cast<int>(EnergyState::Growing)) return true;
    return s == static_cast<int>(EnergyState::Source) && (has_idle_neighbor(v, ids) || has_asking_child(v, ids));
}

bool harvest(const View& v, const EnergyVarIds& ids, int kappa) {
    return st(v, ids) == static_cast<int>(EnergyState::Source) && v.read(ids.bat) < kappa;
}

bool share(const View& v, const EnergyVarIds& ids, int kappa) {
    const int s = st(v, ids);
    if (s == static_cast<int>(EnergyState::Idle) || s == static_cast<int>(EnergyState::Pruning)) return false;
    return v.read(ids.bat) >= 1 && non_full_child(v, ids, kappa).has_value();
}

void prune(Context& ctx, const EnergyVarIds& ids) {
    for (int p : children_ports(ctx, ids)) {
        ctx.write(p, ids.state, static_cast<int>(EnergyState::Pruning));
        ctx.write_port(p, ids.parent, std::nullopt);
    }
    if (ctx.read(ids.state) != static_cast<int>(EnergyState::Source))
        ctx.write(ids.state, static_cast<int>(EnergyState::Idle));
}

bool blocked_state(int s) { return s == static_cast<int>(EnergyState::Idle) || s == static_cast<int>(EnergyState::Pruning); }

}  // namespace

std::string predicate_set_to_string(unsigned set) {
    std::string out;
    for (int i = 0; i < 5; ++i) {
        if (!(set & (1u << i))) continue;
        if (!out.empty()) out += ",";
        out += kPredicateNames[i];
    }
    return out.empty() ? "-" : out;
}

unsigned predicate_set_from_string(const std::string& s) {
    if (s == "-" || s.empty()) return 0;
    unsigned out = 0;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        bool found = false;
        for (int i = 0; i < 5; ++i)
            if (tok == kPredicateNames[i]) {
                out |= 1u << i;
                found = true;
            }
        if (!found) throw std::invalid_argument("unknown predicate: " + tok);
    }
    return out;
}

std::vector<int> children_ports(const View& view, const EnergyVarIds& ids) {
    std::vector<int> out;
    out.reserve(10);
    for (int p : view.neighbor_ports())
        if (view.points_to_me(p, ids.parent)) out.push_back(p);
    return out;
}

unsigned energy_distribution_guard(const View& v, const EnergyVarIds& ids, int kappa) {
    unsigned out = 0;
    if (get_pruned(v, ids)) out |= kGetPruned;
    if (ask_growth(v, ids)) out |= kAskGrowth;
    if (grow_forest(v, ids)) out |= kGrowForest;
    if (harvest(v, ids, kappa)) out |= kHarvestEnergy;
    if (share(v, ids, kappa)) out |= kShareEnergy;
    return out;
}

unsigned energy_distribution_guard(const Configuration& cfg, AmoebotId id, int kappa) {
    return energy_distribution_guard(View(cfg, id), energy_var_ids(cfg.schema()), kappa);
}

ActionSpec energy_distribution_action(const EnergyVarIds& ids, int kappa) {
    ActionSpec a;
    a.label = kEnergyDistributionLabel;
    a.guard = [ids, kappa](const View& v) { return energy_distribution_guard(v, ids, kappa) != 0; };
    a.compute = [ids, kappa](Context& ctx) {
        if (get_pruned(ctx, ids)) prune(ctx, ids);
        if (ask_growth(ctx, ids)) ctx.write(ids.state, static_cast<int>(EnergyState::Asking));
        if (grow_forest(ctx, ids)) {
            for (int p : ctx.neighbor_ports()) {
                if (ctx.read(p, ids.state) != static_cast<int>(EnergyState::Idle)) continue;
                const auto facing = ctx.ports_facing_me(p);
                ctx.write_port(p, ids.parent, facing.front());
                ctx.write(p, ids.state, static_cast<int>(EnergyState::Active));
            }
            for (int p : children_ports(ctx, ids))
                if (ctx.read(p, ids.state) == static_cast<int>(EnergyState::Asking))
                    ctx.write(p, ids.state, static_cast<int>(EnergyState::Growing));
            if (ctx.read(ids.state) == static_cast<int>(EnergyState::Growing))
                ctx.write(ids.state, static_cast<int>(EnergyState::Active));
        }
        if (harvest(ctx, ids, kappa)) ctx.write(ids.bat, ctx.read(ids.bat) + 1);
        if (share(ctx, ids, kappa)) {
            const int p = *non_full_child(ctx, ids, kappa);
            ctx.write(ids.bat, ctx.read(ids.bat) - 1);
            ctx.write(p, ids.bat, ctx.read(p, ids.bat) + 1);
        }
        return Move::none();
    };
    return a;
}

ExecutionReport execute_energy_distribution(Configuration& cfg, AmoebotId id, int kappa) {
    return execute_action(cfg, id, energy_distribution_action(energy_var_ids(cfg.schema()), kappa));
}

AlgorithmSpec transform_energy(const AlgorithmSpec& alg, const DemandFunction& delta, int kappa) {
    if (kappa < 1) throw TransformError("capacity must be positive");
    validate_algorithm(alg);
    auto schema = std::make_shared<Schema>(*alg.schema);
    if (schema->find(kEnergyStateVar)) throw TransformError("algorithm already carries energy variables");
    EnergyVarIds ids;
    ids.state = schema->add({kEnergyStateVar, VarKind::Scalar, static_cast<int>(EnergyState::Idle), 0, 5});
    ids.parent = schema->add({kEnergyParentVar, VarKind::Port});
    ids.bat = schema->add({kEnergyBatteryVar, VarKind::Scalar, 0, 0, kappa});

    AlgorithmSpec out;
    out.name = alg.name + "^delta";
    out.schema = schema;
    for (const auto& a : alg.actions) {
        const int d = delta.of(a.label);
        if (d < 1 || d > kappa) throw TransformError("demand of " + a.label + " outside 1..kappa");
        ActionSpec t;
        t.label = a.label;
        t.declared_ops = a.declared_ops;
        t.after_move = a.after_move;
        t.undo_failed_expand = a.undo_failed_expand;
        t.guard = [g = a.guard, ids, d](const View& v) {
            if (v.read(ids.bat) < d || blocked_state(v.read(ids.state))) return false;
            for (int p : v.neighbor_ports())
                if (blocked_state(v.read(p, ids.state))) return false;
            return g(v);
        };
        t.compute = [c = a.compute, ids, d](Context& ctx) {
            ctx.write(ids.bat, ctx.read(ids.bat) - d);
            const Move m = c(ctx);
            if (m.kind == MoveKind::Contract || m.kind == MoveKind::Pull) {
                ctx.write_port(ids.parent, std::nullopt);
                prune(ctx, ids);
            } else if (m.kind == MoveKind::Push) {
                ctx.write_port(ids.parent, std::nullopt);
                ctx.write_port(m.port, ids.parent, std::nullopt);
                ctx.write(ids.state, static_cast<int>(EnergyState::Pruning));
                ctx.write(m.port, ids.state, static_cast<int>(EnergyState::Pruning));
            }
            return m;
        };
        out.actions.push_back(std::move(t));
    }
    out.framework_begin = out.actions.size();
    out.actions.push_back(energy_distribution_action(ids, kappa));
    validate_algorithm(out);
    return out;
}

std::vector<AmoebotId> children(const Configuration& cfg, AmoebotId id) {
    const auto ids = energy_var_ids(cfg.schema());
    std::vector<AmoebotId> out;
    const View v(cfg, id);
    for (int p : children_ports(v, ids)) out.push_back(cfg.across(id, p)->id);
    return out;
}

std::optional<AmoebotId> parent_of(const Configuration& cfg, AmoebotId id) {
    const int var = cfg.schema().id(kEnergyParentVar);
    auto t = cfg.port_target(id, var);
    if (!t) return std::nullopt;
    return t->id;
}

Configuration energize(const Configuration& cfg, const AlgorithmSpec& alg_delta, const std::vector<AmoebotId>& sources) {
    Configuration out = cfg.rebased(alg_delta.schema);
    const auto ids = energy_var_ids(out.schema());
    for (AmoebotId s : sources) out.set_value(s, ids.state, static_cast<int>(EnergyState::Source));
    return out;
}

std::shared_ptr<const Schema> without_energy(const Schema& schema) {
    auto out = std::make_shared<Schema>();
    for (const auto& v : schema.vars())
        if (v.name != kEnergyStateVar && v.name != kEnergyParentVar && v.name != kEnergyBatteryVar) out->add(v);
    return out;
}

std::vector<bool> in_stable_trees(const Configuration& cfg) {
    const auto ids = energy_var_ids(cfg.schema());
    const std::size_t n = cfg.size();
    // 0 unknown, 1 stable, 2 not stable, 3 on current path
    std::vector<int> mark(n, 0);
    for (AmoebotId start = 0; start < n; ++start) {
        std::vector<AmoebotId> path;
        AmoebotId cur = start;
        int verdict = 2;
        while (true) {
            if (mark[cur] == 1 || mark[cur] == 2) {
                verdict = mark[cur];
                break;
            }
            if (mark[cur] == 3) {
                verdict = 2;
                break;
            }
            mark[cur] = 3;
            path.push_back(cur);
            if (cfg.value(cur, ids.state) == static_cast<int>(EnergyState::Source)) {
                verdict = 1;
                break;
            }
            auto p = parent_of(cfg, cur);
            if (!p) {
                verdict = 2;
                break;
            }
            cur = *p;
        }
        for (AmoebotId a : path) mark[a] = verdict;
    }
    std::vector<bool> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = mark[i] == 1;
    return out;
}

bool parent_relation_acyclic(const Configuration& cfg) {
    const std::size_t n = cfg.size();
    std::vector<int> mark(n, 0);  // 0 new, 1 on stack, 2 done
    for (AmoebotId start = 0; start < n; ++start) {
        std::vector<AmoebotId> path;
        AmoebotId cur = start;
        while (mark[cur] == 0) {
            mark[cur] = 1;
            path.push_back(cur);
            auto p = parent_of(cfg, cur);
            if (!p) break;
            cur = *p;
            if (mark[cur] == 1) return false;
        }
        for (AmoebotId a : path) mark[a] = 2;
    }
    return true;
}

}  // namespace amoebot
