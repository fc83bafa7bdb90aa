#include "amoebot/scheduler.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "amoebot/energy.hpp"

namespace amoebot {

std::string Policy::name() const {
    std::string base;
    switch (kind) {
        case PolicyKind::UniformRandom: base = "uniform"; break;
        case PolicyKind::StarveTheSource: base = "starve-the-source"; break;
        case PolicyKind::ThrashTheForest: base = "thrash-the-forest"; break;
    }
    return framework_first ? base + "+framework-first" : base;
}

Policy Policy::parse(const std::string& name) {
    Policy p;
    std::string base = name;
    const std::string suffix = "+framework-first";
    if (base.size() > suffix.size() && base.compare(base.size() - suffix.size(), suffix.size(), suffix) == 0) {
        p.framework_first = true;
        base.resize(base.size() - suffix.size());
    }
    if (base == "uniform")
        p.kind = PolicyKind::UniformRandom;
    else if (base == "starve-the-source")
        p.kind = PolicyKind::StarveTheSource;
    else if (base == "thrash-the-forest")
        p.kind = PolicyKind::ThrashTheForest;
    else
        throw std::invalid_argument("unknown policy: " + name);
    return p;
}

std::vector<Policy> Policy::shipped() {
    std::vector<Policy> out;
    for (auto k : {PolicyKind::UniformRandom, PolicyKind::StarveTheSource, PolicyKind::ThrashTheForest})
        for (bool ff : {false, true}) out.push_back({k, ff});
    return out;
}

namespace {

void add_neighbors(const Configuration& cfg, AmoebotId id, std::vector<AmoebotId>& out) {
    const auto& a = cfg.amoebot(id);
    auto scan = [&](NodeCoord v) {
        for (int d = 0; d < 6; ++d)
            if (auto occ = cfg.occupant(neighbor(v, d))) out.push_back(occ->id);
    };
    scan(a.head);
    if (a.tail) scan(*a.tail);
}

class EnabledSet {
  public:
    explicit EnabledSet(std::size_t n) : action_(n), pos_(n, npos) {}

    void set(AmoebotId id, std::optional<std::size_t> act) {
        action_[id] = act;
        if (act && pos_[id] == npos) {
            pos_[id] = list_.size();
            list_.push_back(id);
        } else if (!act && pos_[id] != npos) {
            const std::size_t i = pos_[id];
            const AmoebotId last = list_.back();
            list_[i] = last;
            pos_[last] = i;
            list_.pop_back();
            pos_[id] = npos;
        }
    }
    bool enabled(AmoebotId id) const { return action_[id].has_value(); }
    std::size_t action(AmoebotId id) const { return *action_[id]; }
    const std::vector<AmoebotId>& list() const { return list_; }

  private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::vector<std::optional<std::size_t>> action_;
    std::vector<std::size_t> pos_;
    std::vector<AmoebotId> list_;
};

class RoundTracker {
  public:
    explicit RoundTracker(std::size_t n) : pending_(n, false) {}

    void start(const std::vector<AmoebotId>& enabled) {
        for (AmoebotId id : enabled) pending_[id] = true;
        count_ = enabled.size();
    }
    void done(AmoebotId id) {
        if (pending_[id]) {
            pending_[id] = false;
            --count_;
        }
    }
    bool closed() const { return count_ == 0; }

  private:
    std::vector<bool> pending_;
    std::size_t count_ = 0;
};

}  // namespace

RunResult run(const AlgorithmSpec& alg, const Configuration& cfg0, const RunOptions& opts) {
    RunResult res;
    res.final = cfg0;
    Configuration& cfg = res.final;
    res.trace.seed = opts.seed;
    res.trace.policy = opts.policy.name();
    res.trace.algorithm = alg.name;
    if (opts.record_steps) res.trace.initial = cfg0;

    const std::size_t n = cfg.size();
    const bool ff = opts.policy.framework_first;
    std::mt19937_64 rng(opts.seed);
    EnabledSet enabled(n);
    for (AmoebotId id = 0; id < n; ++id) enabled.set(id, first_enabled(alg, cfg, id, ff));

    RoundTracker rounds(n);
    rounds.start(enabled.list());
    if (enabled.list().empty()) {
        res.terminated = true;
        return res;
    }

    std::optional<EnergyVarIds> eids;
    if (cfg.schema().find(kEnergyStateVar)) eids = energy_var_ids(cfg.schema());
    const int kappa = eids ? cfg.schema().at(eids->bat).max : 0;

    std::vector<AmoebotId> affected;
    std::vector<AmoebotId> best;
    while (true) {
        if (res.activations >= opts.budget) break;
        const auto& list = enabled.list();

        AmoebotId pick = 0;
        if (opts.policy.kind == PolicyKind::UniformRandom) {
            std::uniform_int_distribution<std::size_t> dist(0, list.size() - 1);
            pick = list[dist(rng)];
        } else {
            best.clear();
            long best_score = -1;
            for (AmoebotId id : list) {
                long score = 0;
                if (opts.policy.kind == PolicyKind::StarveTheSource) {
                    int dmin = 1 << 20;
                    for (AmoebotId s : opts.sources)
                        dmin = std::min(dmin, lattice_distance(cfg.amoebot(id).head, cfg.amoebot(s).head));
                    score = opts.sources.empty() ? 0 : dmin;
                } else {
                    score = enabled.action(id) < alg.framework_begin || alg.framework_begin == 0 ? 1 : 0;
                }
                if (score > best_score) {
                    best_score = score;
                    best.clear();
                }
                if (score == best_score) best.push_back(id);
            }
            std::uniform_int_distribution<std::size_t> dist(0, best.size() - 1);
            pick = best[dist(rng)];
        }

        const std::size_t act = enabled.action(pick);
        ActivationRecord rec;
        rec.id = pick;
        rec.action = act;
        rec.label = alg.actions[act].label;
        if (eids && act >= alg.framework_begin && alg.actions[act].label == kEnergyDistributionLabel)
            rec.support = energy_distribution_guard(View(cfg, pick), *eids, kappa);
        if (opts.record_digests) rec.pre_digest = cfg.digest();

        affected.clear();
        affected.push_back(pick);
        add_neighbors(cfg, pick, affected);
        const std::size_t first_ring = affected.size();
        for (std::size_t i = 1; i < first_ring; ++i) add_neighbors(cfg, affected[i], affected);

        if (opts.observer) opts.observer->before_step(cfg, pick, act);
        ExecOptions eo;
        eo.check_guard = false;
        eo.record_ops = opts.record_ops;
        ExecutionReport rep = execute_action(cfg, pick, alg.actions[act], eo);
        ++res.activations;
        if (opts.record_digests) rec.post_digest = cfg.digest();
        if (opts.observer) opts.observer->after_step(cfg, rec, rep);
        const bool failed = !rep.ok && !rep.undone;
        if (opts.record_steps) res.trace.steps.push_back(rec);
        if (failed) {
            res.failure = rep;
            break;
        }

        for (AmoebotId t : rep.touched) {
            affected.push_back(t);
            add_neighbors(cfg, t, affected);
        }
        std::sort(affected.begin(), affected.end());
        affected.erase(std::unique(affected.begin(), affected.end()), affected.end());
        rounds.done(pick);
        for (AmoebotId id : affected) {
            enabled.set(id, first_enabled(alg, cfg, id, ff));
            if (!enabled.enabled(id)) rounds.done(id);
        }

        if (rounds.closed()) {
            ++res.rounds;
            res.trace.round_ends.push_back(res.activations);
            if (opts.observer) opts.observer->round_closed(res.rounds, cfg);
            if (enabled.list().empty()) {
                res.terminated = true;
                break;
            }
            rounds.start(enabled.list());
        }
    }
    res.trace.terminated = res.terminated;
    return res;
}

std::vector<std::size_t> round_boundaries(const AlgorithmSpec& alg, const Trace& trace) {
    Configuration cfg = trace.initial;
    const std::size_t n = cfg.size();
    auto enabled_now = [&] {
        std::vector<bool> e(n);
        for (AmoebotId id = 0; id < n; ++id) e[id] = is_enabled(alg, cfg, id);
        return e;
    };
    std::vector<std::size_t> out;
    std::vector<bool> pending = enabled_now();
    ExecOptions eo;
    eo.check_guard = false;
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const auto& s = trace.steps[i];
        execute_action(cfg, s.id, alg.actions.at(s.action), eo);
        pending[s.id] = false;
        const auto e = enabled_now();
        bool open = false;
        for (AmoebotId id = 0; id < n; ++id) {
            if (!e[id]) pending[id] = false;
            open = open || pending[id];
        }
        if (!open) {
            out.push_back(i + 1);
            pending = e;
        }
    }
    return out;
}

std::size_t round_count(const AlgorithmSpec& alg, const Trace& trace) { return round_boundaries(alg, trace).size(); }

std::optional<std::size_t> replay_digests(const AlgorithmSpec& alg, const Trace& trace) {
    Configuration cfg = trace.initial;
    ExecOptions eo;
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const auto& s = trace.steps[i];
        if (cfg.digest() != s.pre_digest) return i;
        if (s.action >= alg.actions.size() || alg.actions[s.action].label != s.label) return i;
        auto rep = execute_action(cfg, s.id, alg.actions[s.action], eo);
        if (!rep.ok && !rep.undone) return i;
        if (cfg.digest() != s.post_digest) return i;
    }
    return std::nullopt;
}

std::vector<Configuration> enumerate_all_executions(const AlgorithmSpec& alg, const Configuration& cfg0,
                                                    std::size_t depth_limit, std::size_t state_limit) {
    std::unordered_map<std::uint64_t, std::vector<Configuration>> seen;
    auto visit = [&](const Configuration& c) {
        auto& bucket = seen[c.digest()];
        for (const auto& x : bucket)
            if (x == c) return false;
        bucket.push_back(c);
        return true;
    };
    std::vector<Configuration> terminals;
    struct Frame {
        Configuration cfg;
        std::size_t depth;
    };
    std::vector<Frame> stack;
    visit(cfg0);
    stack.push_back({cfg0, 0});
    std::size_t states = 1;
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        bool any = false;
        for (AmoebotId id = 0; id < f.cfg.size(); ++id) {
            const View view(f.cfg, id);
            for (const auto& a : alg.actions) {
                if (!a.guard(view)) continue;
                any = true;
                if (f.depth + 1 > depth_limit) throw EnumerationLimit("depth limit exceeded");
                auto [next, rep] = apply_action(f.cfg, id, a, {false, false});
                if (!rep.ok && !rep.undone) throw EnumerationLimit("invalid action during enumeration: " + rep.message);
                if (visit(next)) {
                    if (++states > state_limit) throw EnumerationLimit("state limit exceeded");
                    stack.push_back({std::move(next), f.depth + 1});
                }
            }
        }
        if (!any) terminals.push_back(std::move(f.cfg));
    }
    return terminals;
}

// ---- trace text format ----

void write_trace(std::ostream& os, const Trace& t) {
    os << "amoebot-trace 1\n";
    os << "algorithm " << t.algorithm << "\n";
    os << "seed " << t.seed << "\n";
    os << "policy " << t.policy << "\n";
    os << "initial\n";
    write_configuration(os, t.initial);
    os << "steps " << t.steps.size() << "\n";
    os << std::hex;
    for (const auto& s : t.steps)
        os << "s " << std::dec << s.id << " " << s.action << " " << s.label << " " << predicate_set_to_string(s.support)
           << " " << std::hex << s.pre_digest << " " << s.post_digest << "\n";
    os << std::dec;
    os << "rounds " << t.round_ends.size();
    for (auto r : t.round_ends) os << " " << r;
    os << "\n";
    os << "status " << (t.terminated ? "terminated" : "open") << "\n";
    os << "end\n";
}

Trace read_trace(std::istream& is) {
    Trace t;
    std::string word;
    int version = 0;
    is >> word >> version;
    if (word != "amoebot-trace" || version != 1) throw std::runtime_error("not a trace (version 1) stream");
    is >> word;
    if (word != "algorithm") throw std::runtime_error("expected algorithm");
    std::getline(is >> std::ws, t.algorithm);
    is >> word >> t.seed;
    if (word != "seed") throw std::runtime_error("expected seed");
    is >> word >> t.policy;
    if (word != "policy") throw std::runtime_error("expected policy");
    is >> word;
    if (word != "initial") throw std::runtime_error("expected initial");
    t.initial = read_configuration(is);
    std::size_t n = 0;
    is >> word >> n;
    if (word != "steps") throw std::runtime_error("expected steps");
    t.steps.resize(n);
    for (auto& s : t.steps) {
        std::string support;
        is >> word >> s.id >> s.action >> s.label >> support >> std::hex >> s.pre_digest >> s.post_digest >> std::dec;
        if (word != "s") throw std::runtime_error("bad step record");
        s.support = predicate_set_from_string(support);
    }
    is >> word >> n;
    if (word != "rounds") throw std::runtime_error("expected rounds");
    t.round_ends.resize(n);
    for (auto& r : t.round_ends) is >> r;
    is >> word >> word;
    t.terminated = word == "terminated";
    is >> word;
    if (word != "end" || !is) throw std::runtime_error("truncated trace");
    return t;
}

}  // namespace amoebot
