#include "amoebot/energy_oracles.hpp"

#include <algorithm>
#include <numeric>

namespace amoebot {

EnergyLevels parallel_step(const EnergyLevels& e, int kappa) {
    EnergyLevels next = e;
    if (!e.empty() && e[0] < kappa) ++next[0];
    for (std::size_t i = 0; i + 1 < e.size(); ++i) {
        if (e[i] >= 1 && e[i + 1] < kappa) {
            --next[i];
            ++next[i + 1];
        }
    }
    return next;
}

ParallelSchedule greedy_parallel_recharge(int k, int kappa) {
    if (k < 1 || kappa < 1) throw std::invalid_argument("path length and capacity must be positive");
    ParallelSchedule out;
    EnergyLevels e(static_cast<std::size_t>(k), 0);
    out.configurations.push_back(e);
    const auto full = [&](const EnergyLevels& x) { return std::all_of(x.begin(), x.end(), [&](int v) { return v == kappa; }); };
    // Every round the source harvests or some unit moves one step, so 2k(kappa+1) rounds suffice.
    const std::size_t cap = 2u * static_cast<std::size_t>(k) * static_cast<std::size_t>(kappa + 1) + 2;
    while (!full(e)) {
        e = parallel_step(e, kappa);
        out.configurations.push_back(e);
        if (++out.rounds > cap) throw std::logic_error("parallel schedule failed to converge");
    }
    return out;
}

std::vector<int> suffix_energy(const EnergyLevels& e) {
    std::vector<int> d(e.size());
    int acc = 0;
    for (std::size_t i = e.size(); i-- > 0;) {
        acc += e[i];
        d[i] = acc;
    }
    return d;
}

bool dominates(const EnergyLevels& a, const EnergyLevels& b) {
    if (a.size() != b.size()) return false;
    const auto da = suffix_energy(a);
    const auto db = suffix_energy(b);
    for (std::size_t i = 0; i < da.size(); ++i)
        if (da[i] < db[i]) return false;
    return true;
}

DominanceReport check_dominance(const std::vector<EnergyLevels>& sequential, int kappa) {
    DominanceReport rep;
    auto bad = [&](std::string msg) {
        rep.ok = false;
        rep.message = std::move(msg);
        return rep;
    };
    if (sequential.empty() || sequential[0].empty()) return bad("empty schedule");
    const std::size_t k = sequential[0].size();
    for (const auto& e : sequential) {
        if (e.size() != k) return bad("inconsistent path length");
        for (int v : e)
            if (v < 0 || v > kappa) return bad("battery level outside 0..kappa");
    }
    if (std::any_of(sequential[0].begin(), sequential[0].end(), [](int v) { return v != 0; }))
        return bad("schedule does not start empty");

    const auto par = greedy_parallel_recharge(static_cast<int>(k), kappa);
    const auto& last = sequential.back();
    const bool complete = std::all_of(last.begin(), last.end(), [&](int v) { return v == kappa; });
    if (sequential.size() < par.configurations.size() && !complete)
        return bad("sequential run ends before the parallel schedule and is not fully charged");

    for (std::size_t r = 0; r < par.configurations.size(); ++r) {
        const auto& es = sequential[std::min(r, sequential.size() - 1)];
        const auto ds = suffix_energy(es);
        const auto dp = suffix_energy(par.configurations[r]);
        for (std::size_t i = 0; i < k; ++i) {
            if (ds[i] < dp[i]) {
                rep.ok = false;
                rep.round = r + 1;
                rep.amoebot = i;
                rep.message = "round " + std::to_string(r + 1) + ": suffix energy at path index " + std::to_string(i) +
                              " is " + std::to_string(ds[i]) + " sequentially but " + std::to_string(dp[i]) +
                              " in parallel";
                return rep;
            }
        }
    }
    return rep;
}

std::vector<EnergyLevels> sequential_energy_schedule(const AlgorithmSpec& alg_delta, const Trace& trace,
                                                     const std::vector<AmoebotId>& path) {
    const int bat = trace.initial.schema().id(kEnergyBatteryVar);
    auto levels = [&](const Configuration& c) {
        EnergyLevels e;
        e.reserve(path.size());
        for (AmoebotId id : path) e.push_back(c.value(id, bat));
        return e;
    };
    const auto ends = round_boundaries(alg_delta, trace);
    Configuration cfg = trace.initial;
    std::vector<EnergyLevels> out{levels(cfg)};
    ExecOptions eo;
    std::size_t next_end = 0;
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const auto& s = trace.steps[i];
        auto rep = execute_action(cfg, s.id, alg_delta.actions.at(s.action), eo);
        if (!rep.ok) throw std::runtime_error("trace step " + std::to_string(i) + " failed on replay: " + rep.message);
        if (next_end < ends.size() && ends[next_end] == i + 1) {
            out.push_back(levels(cfg));
            ++next_end;
        }
    }
    if (ends.empty() || ends.back() != trace.steps.size()) out.push_back(levels(cfg));
    return out;
}

AlgorithmSpec empty_algorithm() {
    AlgorithmSpec a;
    a.name = "empty";
    a.schema = std::make_shared<Schema>();
    return a;
}

Configuration stabilized_path(const AlgorithmSpec& alg_delta, const std::vector<NodeCoord>& nodes,
                              const std::vector<Orientation>& orientations) {
    Configuration cfg = make_configuration(alg_delta, nodes, orientations);
    const auto ids = energy_var_ids(cfg.schema());
    cfg.set_value(0, ids.state, static_cast<int>(EnergyState::Source));
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        const auto dir = direction_between(nodes[i], nodes[i - 1]);
        if (!dir) throw std::invalid_argument("path nodes must be consecutive neighbors");
        cfg.set_value(static_cast<AmoebotId>(i), ids.state, static_cast<int>(EnergyState::Active));
        cfg.set_value(static_cast<AmoebotId>(i), ids.parent, pack_edge({nodes[i], *dir}));
    }
    return cfg;
}

bool congruent(const Configuration& with_energy, const Configuration& plain) {
    if (with_energy.size() != plain.size()) return false;
    std::vector<int> map;
    for (const auto& v : plain.schema().vars()) {
        auto id = with_energy.schema().find(v.name);
        if (!id) return false;
        map.push_back(*id);
    }
    for (AmoebotId a = 0; a < plain.size(); ++a) {
        if (!(with_energy.amoebot(a) == plain.amoebot(a))) return false;
        for (std::size_t v = 0; v < map.size(); ++v)
            if (with_energy.value(a, map[v]) != plain.value(a, static_cast<int>(v))) return false;
    }
    return true;
}

ReplayReport replay_equivalence(const AlgorithmSpec& alg_delta, const Trace& trace, const AlgorithmSpec& alg) {
    ReplayReport rep;
    auto diverge = [&](std::size_t i, std::string msg) {
        rep.ok = false;
        rep.divergent_step = i;
        rep.message = std::move(msg);
        return rep;
    };
    Configuration cd = trace.initial;
    Configuration ca = trace.initial.rebased(alg.schema);
    if (!congruent(cd, ca)) return diverge(0, "initial configurations are not congruent");
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const auto& s = trace.steps[i];
        if (s.action >= alg_delta.actions.size() || alg_delta.actions[s.action].label != s.label)
            return diverge(i, "trace names an unknown action");
        auto rd = execute_action(cd, s.id, alg_delta.actions[s.action]);
        if (!rd.ok) return diverge(i, "A^delta step failed on replay: " + rd.message);
        if (s.action < alg_delta.framework_begin) {
            const auto it = std::find_if(alg.actions.begin(), alg.actions.end(),
                                         [&](const ActionSpec& a) { return a.label == s.label; });
            if (it == alg.actions.end()) return diverge(i, "no action " + s.label + " in A");
            auto ra = execute_action(ca, s.id, *it);
            if (!ra.ok) return diverge(i, "A refused " + s.label + ": " + ra.message);
            ++rep.replayed;
        }
        if (!congruent(cd, ca)) return diverge(i, "configurations diverge after " + s.label);
    }
    if (trace.terminated) {
        if (!is_terminal(alg_delta, cd)) return diverge(trace.steps.size(), "A^delta trace is not terminal on replay");
        if (!is_terminal(alg, ca)) return diverge(trace.steps.size(), "replayed A execution is not terminal");
    }
    return rep;
}

// ---- invariant checker ----

namespace {
constexpr int kSource = static_cast<int>(EnergyState::Source);
constexpr int kIdle = static_cast<int>(EnergyState::Idle);
constexpr int kPruning = static_cast<int>(EnergyState::Pruning);
}  // namespace

EnergyInvariantChecker::EnergyInvariantChecker(const AlgorithmSpec& alg_delta, const DemandFunction& delta, int kappa)
    : ids_(energy_var_ids(*alg_delta.schema)), kappa_(kappa) {
    for (std::size_t i = 0; i < alg_delta.framework_begin; ++i)
        demands_.emplace_back(alg_delta.actions[i].label, delta.of(alg_delta.actions[i].label));
}

void EnergyInvariantChecker::fail(const std::string& what) {
    if (violations_.size() < 64) violations_.push_back("step " + std::to_string(steps_) + ": " + what);
}

void EnergyInvariantChecker::check_forest_entry(const Configuration& cfg, AmoebotId id) {
    const int s = cfg.value(id, ids_.state);
    const int b = cfg.value(id, ids_.bat);
    if (b < 0 || b > kappa_) fail("battery of " + std::to_string(id) + " outside 0..kappa");
    if (cfg.value(id, ids_.parent) == kNullPort) return;
    if (s == kSource || s == kIdle || s == kPruning)
        fail("amoebot " + std::to_string(id) + " in state " + std::string(to_string(static_cast<EnergyState>(s))) +
             " holds a parent link");
    if (!cfg.port_target(id, ids_.parent)) fail("parent link of " + std::to_string(id) + " leads nowhere");
}

bool EnergyInvariantChecker::cycle_from(const Configuration& cfg, AmoebotId id) const {
    AmoebotId cur = id;
    for (std::size_t i = 0; i <= cfg.size(); ++i) {
        auto p = parent_of(cfg, cur);
        if (!p) return false;
        cur = *p;
        if (cur == id) return true;
    }
    return true;
}

bool EnergyInvariantChecker::stable_before(const Configuration& cfg, AmoebotId id) const {
    AmoebotId cur = id;
    for (std::size_t i = 0; i <= cfg.size(); ++i) {
        if (state_[cur] == kSource) return true;
        if (parent_[cur] == kNullPort) return false;
        const PortEdge e = unpack_edge(parent_[cur]);
        if (e.node != head_[cur] && (!tail_[cur] || e.node != *tail_[cur])) return false;
        auto occ = cfg.occupant(e.target());
        if (!occ || occ->id == cur) return false;
        cur = occ->id;
    }
    return false;
}

void EnergyInvariantChecker::check_configuration(const Configuration& cfg) {
    const std::size_t n = cfg.size();
    bat_.assign(n, 0);
    parent_.assign(n, kNullPort);
    state_.assign(n, 0);
    head_.assign(n, {});
    tail_.assign(n, std::nullopt);
    prunes_in_run_.assign(n, 0);
    total_ = 0;
    std::size_t sources = 0;
    for (AmoebotId a = 0; a < n; ++a) {
        bat_[a] = cfg.value(a, ids_.bat);
        parent_[a] = cfg.value(a, ids_.parent);
        state_[a] = cfg.value(a, ids_.state);
        head_[a] = cfg.amoebot(a).head;
        tail_[a] = cfg.amoebot(a).tail;
        total_ += bat_[a];
        if (state_[a] == kSource) ++sources;
        check_forest_entry(cfg, a);
    }
    initial_total_ = total_;
    if (sources == 0) fail("no source amoebot");
    if (!cfg.is_connected()) fail("configuration disconnected");
    if (!parent_relation_acyclic(cfg)) fail("parent relation has a cycle");
    initialized_ = true;
}

void EnergyInvariantChecker::before_step(const Configuration& cfg, AmoebotId id, std::size_t) {
    if (!initialized_) check_configuration(cfg);
    pre_harvest_ = cfg.value(id, ids_.state) == kSource && cfg.value(id, ids_.bat) < kappa_;
}

void EnergyInvariantChecker::after_step(const Configuration& cfg, const ActivationRecord& rec,
                                        const ExecutionReport& rep) {
    ++steps_;
    if (!rep.ok && !rep.undone) {
        fail("execution failed: " + rep.message);
        return;
    }
    const bool ed = rec.label == kEnergyDistributionLabel;
    int demand = 0;
    for (const auto& [label, d] : demands_)
        if (label == rec.label) demand = d;
    const bool moved = rep.ok && rep.move.kind != MoveKind::None;

    std::int64_t dsum = 0;
    int receivers = 0;
    for (AmoebotId t : rep.touched) {
        const int nb = cfg.value(t, ids_.bat);
        const int d = nb - bat_[t];
        dsum += d;
        const int ns = cfg.value(t, ids_.state);
        const std::int32_t np = cfg.value(t, ids_.parent);
        if (state_[t] == kSource && ns != kSource) fail("source " + std::to_string(t) + " changed state");
        if (state_[t] != kSource && ns == kSource) fail("amoebot " + std::to_string(t) + " became a source");
        if (ed) {
            if (cfg.amoebot(t).head != head_[t] || cfg.amoebot(t).tail != tail_[t])
                fail("occupancy changed during an energy run");
            if (t == rec.id) {
                if (d < -1 || d > 1) fail("activated amoebot's battery moved by more than one unit");
            } else if (d < 0) {
                fail("energy taken from neighbor " + std::to_string(t) + " during an energy run");
            } else if (d > 1) {
                fail("more than one unit transferred to " + std::to_string(t));
            } else if (d == 1) {
                ++receivers;
                auto p = parent_of(cfg, t);
                if (!p || *p != rec.id) fail("energy passed to a non-child");
            }
            if (np != parent_[t] && stable_before(cfg, t))
                fail("amoebot " + std::to_string(t) + " in a stable tree changed its parent during an energy run");
            if (ns == kPruning && state_[t] != kPruning) {
                if (prunes_in_run_[t]++ == 0) pruned_this_run_.push_back(t);
                max_prunes_ = std::max(max_prunes_, prunes_in_run_[t]);
            }
        }
        bat_[t] = nb;
        state_[t] = ns;
        parent_[t] = np;
        head_[t] = cfg.amoebot(t).head;
        tail_[t] = cfg.amoebot(t).tail;
        check_forest_entry(cfg, t);
    }

    if (ed) {
        if (!in_run_) {
            for (AmoebotId a : pruned_this_run_) prunes_in_run_[a] = 0;
            pruned_this_run_.clear();
            in_run_ = true;
        }
        const int harvest = pre_harvest_ ? 1 : 0;
        harvested_ += harvest;
        if (dsum != harvest) fail("energy created or spent inside an energy run");
        if (receivers > 1) fail("activation shared energy with more than one child");
    } else {
        in_run_ = false;
        const int spend = rep.ok ? demand : 0;
        spent_ += spend;
        if (dsum != -spend) fail("battery change " + std::to_string(dsum) + " does not match demand " + std::to_string(spend));
    }
    total_ += dsum;
    if (total_ != initial_total_ + harvested_ - spent_) fail("energy ledger does not balance");

    if (moved) {
        if (!cfg.is_connected()) fail("configuration disconnected after a move");
        for (AmoebotId a = 0; a < cfg.size(); ++a) {
            if (std::binary_search(rep.touched.begin(), rep.touched.end(), a)) continue;
            if (cfg.value(a, ids_.parent) != kNullPort && !cfg.port_target(a, ids_.parent))
                fail("parent link of " + std::to_string(a) + " left dangling by a move");
        }
        if (!parent_relation_acyclic(cfg)) fail("parent relation has a cycle");
    } else {
        for (AmoebotId t : rep.touched)
            if (cycle_from(cfg, t)) fail("parent relation has a cycle through " + std::to_string(t));
    }
}

}  // namespace amoebot
