#include "amoebot/conventions.hpp"

namespace amoebot {

std::string phase_structure_error(const std::vector<OpRecord>& ops) {
    int moves = 0;
    bool moved = false;
    for (const auto& op : ops) {
        if (op.kind == OpKind::Lock || op.kind == OpKind::Unlock) return "lock operation";
        if (op.post_move) continue;
        if (moved) return std::string(to_string(op.kind)) + " after a movement";
        if (is_movement(op.kind)) {
            ++moves;
            moved = true;
        }
    }
    if (moves > 1) return "more than one movement";
    return {};
}

namespace {

class ConventionObserver : public StepObserver {
  public:
    ConventionObserver(const AlgorithmSpec& alg, ConventionReport& rep) : alg_(alg), rep_(rep) {}

    void add(int convention, AmoebotId id, const std::string& action, const std::string& msg) {
        ++rep_.counts[convention];
        if (rep_.violations.size() < 64) rep_.violations.push_back({convention, step_, id, action, msg});
    }

    void before_step(const Configuration& cfg, AmoebotId id, std::size_t) override {
        for (const auto& action : alg_.actions) {
            if (!guard_holds(cfg, id, action)) continue;
            ++rep_.isolated_executions;
            Configuration copy = cfg;
            const auto r = execute_action(copy, id, action, {.check_guard = false, .record_ops = true});
            if (!r.ok && !r.undone) add(1, id, action.label, r.message);
            if (auto e = phase_structure_error(r.ops); !e.empty()) add(2, id, action.label, e);
        }
    }

    void after_step(const Configuration& cfg, const ActivationRecord& rec, const ExecutionReport& rep) override {
        ++step_;
        if (rep.move.kind != MoveKind::None && !cfg.is_connected())
            add(3, rec.id, rec.label, "configuration disconnected");
    }

  private:
    const AlgorithmSpec& alg_;
    ConventionReport& rep_;
    std::size_t step_ = 0;
};

}  // namespace

ConventionReport check_conventions(const AlgorithmSpec& alg, const Configuration& cfg0, std::uint64_t budget,
                                   std::uint64_t seed, Policy policy) {
    ConventionReport rep;
    ConventionObserver obs(alg, rep);
    try {
        validate_algorithm(alg);
    } catch (const AlgorithmLoadError& e) {
        obs.add(2, 0, "", e.what());
        return rep;
    }
    if (!cfg0.is_connected()) obs.add(3, 0, "", "initial configuration disconnected");
    RunOptions o;
    o.seed = seed;
    o.policy = policy;
    o.budget = budget;
    o.observer = &obs;
    const auto res = run(alg, cfg0, o);
    rep.steps = res.activations;
    rep.terminated = res.terminated;
    return rep;
}

}  // namespace amoebot
