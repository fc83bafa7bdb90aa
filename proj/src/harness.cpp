#include "amoebot/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <iomanip>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "amoebot/algorithms.hpp"
#include "amoebot/energy_oracles.hpp"
#include "amoebot/expansion.hpp"

namespace amoebot {

// ---- shapes ----

std::string to_string(ShapeKind k) {
    switch (k) {
        case ShapeKind::Blob: return "blob";
        case ShapeKind::Line: return "line";
        case ShapeKind::Hexagon: return "hexagon";
    }
    return "?";
}

ShapeKind shape_from_string(const std::string& s) {
    if (s == "blob") return ShapeKind::Blob;
    if (s == "line") return ShapeKind::Line;
    if (s == "hexagon") return ShapeKind::Hexagon;
    throw std::invalid_argument("unknown shape: " + s);
}

bool nodes_connected(const std::vector<NodeCoord>& nodes) {
    if (nodes.empty()) return true;
    std::unordered_set<NodeCoord> occ(nodes.begin(), nodes.end());
    std::unordered_set<NodeCoord> seen{nodes[0]};
    std::deque<NodeCoord> queue{nodes[0]};
    while (!queue.empty()) {
        const NodeCoord v = queue.front();
        queue.pop_front();
        for (const auto& w : neighbors(v))
            if (occ.count(w) && seen.insert(w).second) queue.push_back(w);
    }
    return seen.size() == occ.size();
}

bool has_holes(const std::vector<NodeCoord>& nodes) {
    if (nodes.empty()) return false;
    std::unordered_set<NodeCoord> occ(nodes.begin(), nodes.end());
    int q0 = nodes[0].q, q1 = q0, r0 = nodes[0].r, r1 = r0;
    for (const auto& v : nodes) {
        q0 = std::min(q0, v.q);
        q1 = std::max(q1, v.q);
        r0 = std::min(r0, v.r);
        r1 = std::max(r1, v.r);
    }
    --q0, --r0, ++q1, ++r1;
    auto inside = [&](NodeCoord v) { return v.q >= q0 && v.q <= q1 && v.r >= r0 && v.r <= r1; };
    const std::size_t empty_cells =
        static_cast<std::size_t>(q1 - q0 + 1) * static_cast<std::size_t>(r1 - r0 + 1) - occ.size();
    // The box border is empty, so one flood from a corner reaches every unenclosed node.
    std::unordered_set<NodeCoord> seen{{q0, r0}};
    std::deque<NodeCoord> queue{{q0, r0}};
    while (!queue.empty()) {
        const NodeCoord v = queue.front();
        queue.pop_front();
        for (const auto& w : neighbors(v))
            if (inside(w) && !occ.count(w) && seen.insert(w).second) queue.push_back(w);
    }
    return seen.size() != empty_cells;
}

InitialShape generate_shape(ShapeKind kind, std::size_t n, std::uint64_t seed, bool hole_free) {
    if (n == 0) throw std::invalid_argument("shape needs at least one amoebot");
    std::mt19937_64 rng(seed);
    InitialShape out;
    switch (kind) {
        case ShapeKind::Line:
            for (std::size_t i = 0; i < n; ++i) out.nodes.push_back({static_cast<int>(i), 0});
            break;
        case ShapeKind::Hexagon: out.nodes = spiral_positions(n); break;
        case ShapeKind::Blob: {
            std::unordered_set<NodeCoord> occ{{0, 0}};
            out.nodes.push_back({0, 0});
            std::vector<NodeCoord> frontier;
            std::unordered_set<NodeCoord> in_frontier;
            auto grow_frontier = [&](NodeCoord v) {
                for (const auto& w : neighbors(v))
                    if (!occ.count(w) && in_frontier.insert(w).second) frontier.push_back(w);
            };
            grow_frontier({0, 0});
            while (out.nodes.size() < n) {
                const std::size_t i = std::uniform_int_distribution<std::size_t>(0, frontier.size() - 1)(rng);
                const NodeCoord w = frontier[i];
                if (hole_free) {
                    out.nodes.push_back(w);
                    const bool holed = has_holes(out.nodes);
                    out.nodes.pop_back();
                    if (holed) continue;
                }
                frontier[i] = frontier.back();
                frontier.pop_back();
                in_frontier.erase(w);
                occ.insert(w);
                out.nodes.push_back(w);
                grow_frontier(w);
            }
            break;
        }
    }
    const auto all = all_orientations();
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    for (std::size_t i = 0; i < n; ++i) out.orientations.push_back(all[pick(rng)]);
    return out;
}

std::vector<AmoebotId> place_sources(std::size_t n, std::size_t count, const std::string& placement,
                                     std::uint64_t seed) {
    if (count < 1 || count > n) throw std::invalid_argument("source count must be in 1..n");
    std::vector<AmoebotId> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<AmoebotId>(i);
    if (placement == "random") {
        std::mt19937_64 rng(seed ^ 0x5eed5eedULL);
        std::shuffle(ids.begin(), ids.end(), rng);
    } else if (placement != "origin") {
        throw std::invalid_argument("unknown source placement: " + placement);
    }
    ids.resize(count);
    std::sort(ids.begin(), ids.end());
    return ids;
}

// ---- registry ----

std::string AlgorithmDescriptor::to_string() const {
    std::ostringstream os;
    os << base;
    if (energy) {
        os << " energy kappa=" << kappa << " delta=" << delta.default_demand;
        for (const auto& [label, d] : delta.per_action) os << " delta." << label << "=" << d;
    }
    if (robust) os << " robust";
    return os.str();
}

AlgorithmDescriptor AlgorithmDescriptor::parse(const std::string& text) {
    AlgorithmDescriptor d;
    std::istringstream in(text);
    std::string tok;
    if (!(in >> d.base)) throw std::invalid_argument("empty algorithm descriptor");
    while (in >> tok) {
        if (tok == "energy") {
            d.energy = true;
        } else if (tok == "robust") {
            d.robust = true;
        } else if (tok.rfind("kappa=", 0) == 0) {
            d.kappa = std::stoi(tok.substr(6));
        } else if (tok.rfind("delta=", 0) == 0) {
            d.delta.default_demand = std::stoi(tok.substr(6));
        } else if (tok.rfind("delta.", 0) == 0 && tok.find('=') != std::string::npos) {
            const auto eq = tok.find('=');
            d.delta.per_action[tok.substr(6, eq - 6)] = std::stoi(tok.substr(eq + 1));
        } else {
            throw std::invalid_argument("unknown descriptor token: " + tok);
        }
    }
    return d;
}

std::vector<std::string> registered_algorithms() {
    return {"leader-election", "hexagon-formation", "toy-coloring", "empty", "disconnecting-fixture"};
}

AlgorithmSpec base_algorithm(const std::string& name) {
    if (name == "leader-election") return leader_election_spec();
    if (name == "hexagon-formation") return hexagon_formation_spec();
    if (name == "toy-coloring") return toy_coloring_spec();
    if (name == "empty") return empty_algorithm();
    if (name == "disconnecting-fixture") return disconnecting_fixture_spec();
    throw std::invalid_argument("unknown algorithm: " + name);
}

BuiltAlgorithm build_algorithm(const AlgorithmDescriptor& d) {
    BuiltAlgorithm out{d, base_algorithm(d.base), std::nullopt, {}};
    out.runnable = out.base;
    if (d.energy) {
        out.with_energy = transform_energy(out.base, d.delta, d.kappa);
        out.runnable = *out.with_energy;
    }
    if (d.robust) out.runnable = transform_expansion_robust(out.runnable);
    out.runnable.name = d.to_string();
    return out;
}

Configuration initial_configuration(const BuiltAlgorithm& alg, const InitialShape& shape,
                                    std::vector<AmoebotId> sources) {
    Configuration cfg = make_configuration(alg.base, shape.nodes, shape.orientations);
    if (alg.descriptor.base == "hexagon-formation") designate_seed(cfg, 0);
    if (alg.with_energy) cfg = energize(cfg, *alg.with_energy, sources);
    if (alg.descriptor.robust) cfg = cfg.rebased(alg.runnable.schema);
    return cfg;
}

// ---- runs ----

bool terminal_property_holds(const std::string& base, const Configuration& cfg, const Configuration& initial,
                             std::string* why) {
    auto reason = [&](const std::string& s) {
        if (why) *why = s;
        return false;
    };
    if (base == "leader-election") {
        const int phase = cfg.schema().id(kPhaseVar);
        std::size_t leaders = 0;
        for (AmoebotId a = 0; a < cfg.size(); ++a)
            if (cfg.value(a, phase) == static_cast<int>(ErosionPhase::Leader)) ++leaders;
        if (leaders != 1) return reason(std::to_string(leaders) + " leaders");
        return true;
    }
    if (base == "hexagon-formation") {
        std::set<NodeCoord> got;
        for (const auto& a : cfg.amoebots()) {
            if (a.expanded()) return reason("expanded amoebot in terminal configuration");
            got.insert(a.head);
        }
        const auto& seed = initial.amoebot(0);
        const auto spiral = spiral_positions(cfg.size(), seed.head, seed.orientation);
        if (got != std::set<NodeCoord>(spiral.begin(), spiral.end())) return reason("occupied set is not the spiral");
        return true;
    }
    if (base == "toy-coloring") {
        const int color = cfg.schema().id(kColorVar);
        for (AmoebotId a = 0; a < cfg.size(); ++a) {
            if (cfg.value(a, color) == 0) return reason("uncoloured amoebot");
            for (int p = 0; p < 6; ++p)
                if (auto nb = cfg.across(a, p); nb && cfg.value(nb->id, color) == cfg.value(a, color))
                    return reason("neighbours share a colour");
        }
        return true;
    }
    return true;
}

ExperimentRun run_experiment(const BuiltAlgorithm& alg, const Configuration& cfg0, const RunOptions& opts,
                             bool check_invariants) {
    ExperimentRun out;
    RunOptions o = opts;
    std::optional<EnergyInvariantChecker> checker;
    if (check_invariants && alg.with_energy) {
        checker.emplace(*alg.with_energy, alg.descriptor.delta, alg.descriptor.kappa);
        checker->check_configuration(cfg0);
        o.observer = &*checker;
    }
    out.result = run(alg.runnable, cfg0, o);
    auto& v = out.verdict;
    v.terminated = out.result.terminated;
    if (!v.terminated) v.problems.push_back("did not terminate within the activation budget");
    if (out.result.failure) {
        v.terminal_ok = false;
        v.problems.push_back("execution failure: " + out.result.failure->message);
    }
    if (v.terminated) {
        std::string why;
        if (!terminal_property_holds(alg.descriptor.base, out.result.final, cfg0, &why)) {
            v.terminal_ok = false;
            v.problems.push_back(why);
        }
    }
    if (checker && !checker->ok()) {
        v.invariants_ok = false;
        for (const auto& s : checker->violations()) v.problems.push_back(s);
    }
    return out;
}

// ---- sweeps ----

std::uint64_t cell_seed(std::uint64_t base, std::size_t n, std::size_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                      static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(trial)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

std::vector<SweepRow> sweep(const SweepConfig& cfg) {
    const BuiltAlgorithm alg = build_algorithm(cfg.algorithm);
    const bool hole_free = cfg.hole_free || cfg.algorithm.base == "leader-election";
    std::vector<SweepRow> rows;
    for (std::size_t n : cfg.sizes)
        for (std::size_t t = 0; t < cfg.trials; ++t) {
            SweepRow r;
            r.n = n;
            r.trial = t;
            r.seed = cell_seed(cfg.seed, n, t);
            rows.push_back(r);
        }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < rows.size();) {
            SweepRow& r = rows[i];
            try {
                const auto shape = generate_shape(cfg.shape, r.n, r.seed, hole_free);
                const auto sources = place_sources(r.n, cfg.source_count, cfg.placement, r.seed);
                const auto cfg0 = initial_configuration(alg, shape, sources);
                RunOptions o;
                o.seed = r.seed;
                o.policy = cfg.policy;
                o.budget = cfg.budget;
                o.sources = sources;
                const auto ex = run_experiment(alg, cfg0, o, cfg.check_invariants);
                r.rounds = ex.result.rounds;
                r.activations = ex.result.activations;
                r.terminated = ex.verdict.terminated;
                r.terminal_ok = ex.verdict.terminal_ok;
                r.invariants_ok = ex.verdict.invariants_ok;
                if (!ex.verdict.problems.empty()) r.note = ex.verdict.problems.front();
            } catch (const std::exception& e) {
                r.note = std::string("error: ") + e.what();
            }
        }
    };
    unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, rows.size()));
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << kSweepCsvHeader << "\n";
    for (const auto& r : rows) {
        std::string note = r.note;
        std::replace(note.begin(), note.end(), ',', ';');
        std::replace(note.begin(), note.end(), '\n', ' ');
        os << r.n << "," << r.trial << "," << r.seed << "," << r.rounds << "," << r.activations << ","
           << r.terminated << "," << r.terminal_ok << "," << r.invariants_ok << "," << note << "\n";
    }
}

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y, double min_x) {
    LogLogFit f;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (x[i] < min_x || x[i] <= 0 || y[i] <= 0) continue;
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++f.points;
    }
    if (f.points < 2) return f;
    const double n = static_cast<double>(f.points);
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

// ---- rendering ----

namespace {

struct Point {
    double x, y;
};

Point center(NodeCoord v, double s) {
    return {s * std::sqrt(3.0) * (v.q + v.r / 2.0), -s * 1.5 * v.r};
}

std::string fill_for(const std::string& base, const Configuration& cfg, AmoebotId a) {
    if (base == "leader-election") {
        static const char* colors[] = {"none", "#4c72b0", "#b0b0b0", "#dd8452"};
        return colors[cfg.value(a, cfg.schema().id(kPhaseVar))];
    }
    if (base == "hexagon-formation") {
        static const char* colors[] = {"#dd8452", "none", "#55a868", "#c44e52", "#4c72b0"};
        return colors[cfg.value(a, cfg.schema().id(kHexStateVar))];
    }
    if (base == "toy-coloring") {
        static const char* colors[] = {"none",    "#4c72b0", "#dd8452", "#55a868",
                                       "#c44e52", "#8172b3", "#937860", "#da8bc3"};
        return colors[cfg.value(a, cfg.schema().id(kColorVar))];
    }
    return "#4c72b0";
}

}  // namespace

std::string render_svg(const Configuration& cfg, const std::string& base, SvgStyle style) {
    const double s = style.cell;
    double x0 = 1e18, y0 = 1e18, x1 = -1e18, y1 = -1e18;
    for (const auto& a : cfg.amoebots())
        for (auto v : {std::optional<NodeCoord>(a.head), a.tail}) {
            if (!v) continue;
            const Point p = center(*v, s);
            x0 = std::min(x0, p.x), y0 = std::min(y0, p.y), x1 = std::max(x1, p.x), y1 = std::max(y1, p.y);
        }
    if (cfg.size() == 0) x0 = y0 = x1 = y1 = 0;
    const double pad = 2 * s;
    std::ostringstream os;
    os << std::fixed << std::setprecision(2);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << x0 - pad << " " << y0 - pad << " "
       << (x1 - x0) + 2 * pad << " " << (y1 - y0) + 2 * pad << "\">\n";
    os << "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"4\" "
          "markerHeight=\"4\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#333\"/></marker></defs>\n";

    const auto state = cfg.schema().find(kEnergyStateVar);
    const auto bat = cfg.schema().find(kEnergyBatteryVar);
    const int kappa = bat ? cfg.schema().at(*bat).max : 0;
    auto hexagon = [&](Point c) {
        std::ostringstream pts;
        pts << std::fixed << std::setprecision(2);
        for (int k = 0; k < 6; ++k) {
            const double ang = M_PI / 180.0 * (60.0 * k + 30.0);
            pts << c.x + 0.95 * s * std::cos(ang) << "," << c.y + 0.95 * s * std::sin(ang) << " ";
        }
        return pts.str();
    };
    for (AmoebotId id = 0; id < cfg.size(); ++id) {
        const auto& a = cfg.amoebot(id);
        const std::string fill = fill_for(base, cfg, id);
        const double opacity = bat && kappa > 0 ? static_cast<double>(cfg.value(id, *bat)) / kappa : 1.0;
        const bool source = state && cfg.value(id, *state) == static_cast<int>(EnergyState::Source);
        const std::string stroke = source ? "stroke=\"#000\" stroke-width=\"2.5\"" : "stroke=\"#666\" stroke-width=\"0.8\"";
        if (a.tail) {
            const Point h = center(a.head, s), t = center(*a.tail, s);
            os << "<line x1=\"" << h.x << "\" y1=\"" << h.y << "\" x2=\"" << t.x << "\" y2=\"" << t.y
               << "\" stroke=\"#666\" stroke-width=\"" << 1.2 * s << "\" stroke-linecap=\"round\" opacity=\"0.35\"/>\n";
        }
        for (auto v : {std::optional<NodeCoord>(a.head), a.tail}) {
            if (!v) continue;
            os << "<polygon points=\"" << hexagon(center(*v, s)) << "\" fill=\"" << fill << "\" fill-opacity=\""
               << opacity << "\" " << stroke << "/>\n";
        }
    }
    if (style.parent_arrows && state) {
        for (AmoebotId id = 0; id < cfg.size(); ++id) {
            auto e = cfg.port_value(id, cfg.schema().id(kEnergyParentVar));
            if (!e || !cfg.occupied(e->target())) continue;
            const Point from = center(e->node, s), to = center(e->target(), s);
            const Point tip{from.x + 0.8 * (to.x - from.x), from.y + 0.8 * (to.y - from.y)};
            os << "<line x1=\"" << from.x << "\" y1=\"" << from.y << "\" x2=\"" << tip.x << "\" y2=\"" << tip.y
               << "\" stroke=\"#333\" stroke-width=\"1\" marker-end=\"url(#arrow)\"/>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

std::string default_output_dir() {
    const char* env = std::getenv("AMOEBOT_OUT_DIR");
    return env && *env ? env : "out";
}

}  // namespace amoebot

namespace amoebot {

bool VerifyReport::ok() const {
    return std::none_of(results.begin(), results.end(), [](const SuiteResult& r) { return r.status == "fail"; });
}

VerifyReport verify_trace(const Trace& trace, const VerifySuites& suites) {
    VerifyReport out;
    const BuiltAlgorithm alg = build_algorithm(AlgorithmDescriptor::parse(trace.algorithm));
    const bool energy = alg.with_energy.has_value();
    const bool robust = alg.descriptor.robust;
    auto add = [&](const std::string& suite, bool pass, const std::string& detail) {
        out.results.push_back({suite, pass ? "pass" : "fail", detail});
    };
    auto skip = [&](const std::string& suite, const std::string& why) { out.results.push_back({suite, "skip", why}); };

    if (suites.digests) {
        const bool recorded = std::any_of(trace.steps.begin(), trace.steps.end(),
                                          [](const ActivationRecord& r) { return r.post_digest != 0; });
        if (!recorded) {
            skip("digests", "trace has no digests");
        } else {
            const auto bad = replay_digests(alg.runnable, trace);
            add("digests", !bad, bad ? "first mismatch at step " + std::to_string(*bad) : "");
        }
    }
    if (suites.rounds) {
        if (trace.round_ends.empty() && !trace.steps.empty()) {
            skip("rounds", "trace has no round ends");
        } else {
            const auto ends = round_boundaries(alg.runnable, trace);
            add("rounds", ends == trace.round_ends,
                std::to_string(ends.size()) + " rounds recounted, " + std::to_string(trace.round_ends.size()) +
                    " recorded");
        }
    }
    if (suites.invariants) {
        if (!energy) {
            skip("invariants", "no energy framework");
        } else {
            EnergyInvariantChecker checker(*alg.with_energy, alg.descriptor.delta, alg.descriptor.kappa);
            Configuration cfg = trace.initial;
            checker.check_configuration(cfg);
            for (const auto& s : trace.steps) {
                checker.before_step(cfg, s.id, s.action);
                const auto r = execute_action(cfg, s.id, alg.runnable.actions.at(s.action));
                checker.after_step(cfg, s, r);
            }
            add("invariants", checker.ok(),
                checker.ok() ? std::to_string(checker.steps()) + " steps"
                             : checker.violations().front());
        }
    }
    if (suites.replay) {
        if (!energy || robust) {
            skip("replay", energy ? "robust trace (see correspondence)" : "no energy framework");
        } else {
            const auto r = replay_equivalence(*alg.with_energy, trace, alg.base);
            add("replay", r.ok, r.ok ? std::to_string(r.replayed) + " actions replayed" : r.message);
        }
    }
    if (suites.correspondence) {
        if (!robust) {
            skip("correspondence", "not an expansion-robust trace");
        } else {
            const AlgorithmSpec& inner = energy ? *alg.with_energy : alg.base;
            const auto r = check_expansion_correspondence(inner, alg.runnable, trace, energy);
            add("correspondence", r.ok,
                r.ok ? std::to_string(r.steps_checked) + " steps checked" : r.violations.front());
        }
    }
    if (suites.terminal) {
        if (!trace.terminated) {
            skip("terminal", "trace did not terminate");
        } else {
            Configuration cfg = trace.initial;
            for (const auto& s : trace.steps) execute_action(cfg, s.id, alg.runnable.actions.at(s.action));
            std::string why;
            const bool terminal = is_terminal(alg.runnable, cfg);
            const bool ok = terminal && terminal_property_holds(alg.descriptor.base, cfg, trace.initial, &why);
            add("terminal", ok, terminal ? why : "final configuration still has enabled amoebots");
        }
    }
    return out;
}

}  // namespace amoebot

namespace amoebot {

InclusionReport terminal_inclusion(const BuiltAlgorithm& alg, const InitialShape& shape,
                                   const std::vector<AmoebotId>& sources, std::size_t depth_limit,
                                   std::size_t state_limit) {
    if (!alg.with_energy || alg.descriptor.robust)
        throw std::invalid_argument("terminal inclusion needs an energy algorithm without the robust layer");
    AlgorithmDescriptor plain = alg.descriptor;
    plain.energy = false;
    const BuiltAlgorithm base = build_algorithm(plain);

    const auto energy_terms =
        enumerate_all_executions(alg.runnable, initial_configuration(alg, shape, sources), depth_limit, state_limit);
    const auto base_terms =
        enumerate_all_executions(base.runnable, initial_configuration(base, shape, sources), depth_limit, state_limit);

    std::unordered_multimap<std::uint64_t, const Configuration*> index;
    for (const auto& c : base_terms) index.emplace(c.digest(), &c);
    std::vector<Configuration> projections;
    for (const auto& c : energy_terms) {
        Configuration p = c.rebased(base.runnable.schema);
        if (std::none_of(projections.begin(), projections.end(), [&](const Configuration& q) { return q == p; }))
            projections.push_back(std::move(p));
    }
    InclusionReport rep;
    rep.energy_terminals = energy_terms.size();
    rep.base_terminals = base_terms.size();
    rep.projected = projections.size();
    for (const auto& p : projections) {
        const auto [lo, hi] = index.equal_range(p.digest());
        if (std::none_of(lo, hi, [&](const auto& kv) { return *kv.second == p; })) ++rep.missing;
    }
    return rep;
}

}  // namespace amoebot
