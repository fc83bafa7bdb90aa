#ifndef AMOEBOT_VM_HPP
#define AMOEBOT_VM_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "amoebot/configuration.hpp"

namespace amoebot {

enum class OpKind : std::uint8_t { Connected, Read, Write, Expand, Contract, Push, Pull, Lock, Unlock };
std::string_view to_string(OpKind k);
bool is_movement(OpKind k);

struct OpRecord {
    OpKind kind = OpKind::Read;
    int port = -1;  // -1 addresses the amoebot itself
    int var = -1;
    bool post_move = false;  // framework bookkeeping written after the move (expand flags)
};

enum class MoveKind : std::uint8_t { None, Expand, Contract, Push, Pull };
std::string_view to_string(MoveKind k);

struct Move {
    MoveKind kind = MoveKind::None;
    int port = -1;
    NodeRole keep = NodeRole::Head;

    static Move none() { return {}; }
    static Move expand(int p) { return {MoveKind::Expand, p, NodeRole::Head}; }
    static Move contract(NodeRole keep) { return {MoveKind::Contract, -1, keep}; }
    static Move push(int p) { return {MoveKind::Push, p, NodeRole::Head}; }
    static Move pull(int p) { return {MoveKind::Pull, p, NodeRole::Head}; }
    bool operator==(const Move&) const = default;
};

class ActionError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// What an amoebot can observe: its own ports and memory, its neighbors' public memories,
// and the geometry it can derive from knowing neighbors' orientations. Ports listed in
// `hidden` behave as unconnected (used for established-neighborhood evaluation).
class View {
  public:
    View(const Configuration& cfg, AmoebotId self, std::uint16_t hidden = 0);

    bool expanded() const;
    int port_count() const;
    bool connected(int p) const;

    std::int32_t read(int var) const;
    std::int32_t read(int p, int var) const;

    // Own port-typed variable as a label of the current shape, if it still names a port.
    std::optional<int> read_port(int var) const;
    // Whether the neighbor on p has its port-typed variable `var` pointing at this amoebot.
    bool points_to_me(int p, int var) const;
    // Same, but the stored edge must end on this amoebot's `role` node.
    bool points_to_my(int p, int var, NodeRole role) const;
    // Own edge set as a bitmask over current port labels.
    std::uint16_t read_edgeset(int var) const;
    // Whether the neighbor on p has some port facing this amoebot that is absent from its edge set.
    bool has_clear_port_to_me(int p, int var) const;

    // Local frame: the direction numbering of the amoebot's own contracted labels.
    int local_dir(int p) const;
    bool port_at_tail(int p) const;
    std::optional<int> port_for(NodeRole role, int local_dir) const;
    int axis_local_dir() const;  // tail -> head, expanded only

    bool neighbor_expanded(int p) const;
    bool neighbor_tail_on(int p) const;  // port p touches the neighbor's tail node
    int neighbor_axis_local_dir(int p) const;  // neighbor tail -> head in this amoebot's frame
    std::vector<int> ports_facing_me(int p) const;  // neighbor's labels, ascending
    int relative_chirality(int p) const;
    bool same_neighbor(int p, int q) const;
    // Lowest connected port of each distinct neighbor, ascending.
    std::vector<int> neighbor_ports() const;
    // Local direction from this amoebot's node `from` to the node across port p; for
    // geometric bookkeeping such as "is the node across p adjacent to the node across q".
    bool nodes_adjacent(int p, int q) const;

    View restricted(std::uint16_t hidden) const { return View(*cfg_, self_, hidden); }
    std::uint16_t hidden() const { return hidden_; }

  protected:
    const Configuration& cfg() const { return *cfg_; }
    AmoebotId self() const { return self_; }
    std::optional<Occupant> neighbor_at(int p) const;
    void fill_cache() const;
    std::vector<int> compute_neighbor_ports() const;
    void check_port(int p) const;
    int global_to_local(int dir) const;
    int local_to_global(int ld) const;

    const Configuration* cfg_;
    AmoebotId self_;
    std::uint16_t hidden_;
    // Guards see a frozen configuration, so plain views memoize the neighbourhood.
    // Contexts move and change their hidden mask, so they never cache.
    bool cacheable_ = true;
    mutable bool cached_ = false;
    mutable std::array<std::optional<Occupant>, 10> nb_cache_;
    mutable std::vector<int> nb_ports_cache_;

    friend struct Engine;
};

struct PendingPortWrite {
    AmoebotId target = 0;
    int var = -1;
    NodeRole role = NodeRole::Head;
    int global_dir = 0;
};

// Result of a movement, available to after-move hooks.
struct MoveOutcome {
    Move move;
    std::optional<AmoebotId> partner;
    std::vector<PortEdge> self_before;
    std::vector<PortEdge> partner_before;
};

class Context : public View {
  public:
    Context(Configuration& cfg, AmoebotId self, std::uint16_t hidden, bool record);

    void write(int var, std::int32_t value);
    void write(int p, int var, std::int32_t value);
    // Port-typed writes. Labels are in the addressed amoebot's current labeling.
    void write_port(int var, std::optional<int> label);
    void write_port(int p, int var, std::optional<int> label);
    // Port-typed write whose label refers to the shape after this action's move:
    // the edge leaving the addressed amoebot's node `role` in `local_dir` (writer's frame).
    void write_port_after_move(int var, NodeRole role, int local_dir);
    void write_port_after_move(int p, int var, NodeRole role, int local_dir);

    void lock();
    void unlock();

    // Switch the neighborhood restriction for the remainder of the compute phase.
    void restrict_to(std::uint16_t hidden) { hidden_ = hidden; }
    // Writes made so far survive the rollback of a failed Expand (undo_failed_expand).
    void commit_prefix() {
        kept_writes_ = undo_.size();
        kept_touched_ = touched_.size();
    }

    // After-move helpers (valid only inside an after-move hook).
    std::vector<int> new_ports() const;
    std::vector<int> partner_new_ports() const;
    std::optional<int> partner_port() const;
    // Own port p leads to the movement partner / the partner's port leads back here.
    bool faces_partner(int p) const;
    bool partner_faces_me(int partner_label) const;
    void set_edgeset_label(int var, int label);
    void clear_edgeset_label(int var, int label);
    void set_partner_edgeset_label(int var, int label);

    const std::vector<OpRecord>& ops() const { return ops_; }

  private:
    void note(OpKind k, int p, int var);
    void journal(AmoebotId id, int var);
    AmoebotId target_of(int p) const;

    Configuration* mcfg_;
    bool record_;
    bool after_move_ = false;
    std::vector<OpRecord> ops_;
    std::vector<std::tuple<AmoebotId, int, std::int32_t>> undo_;
    std::vector<PendingPortWrite> pending_;
    std::vector<AmoebotId> touched_;
    std::size_t kept_writes_ = 0;
    std::size_t kept_touched_ = 0;
    const MoveOutcome* outcome_ = nullptr;

    friend struct Engine;
};

using Guard = std::function<bool(const View&)>;
using Compute = std::function<Move(Context&)>;
using AfterMove = std::function<void(Context&, const MoveOutcome&)>;

struct ActionSpec {
    std::string label;
    Guard guard;
    Compute compute;
    // Optional static operation signature, checked when the algorithm is loaded.
    std::vector<OpKind> declared_ops;
    AfterMove after_move;
    // When the Expand finds its target occupied, roll back the writes made after
    // Context::commit_prefix and report the execution as undone instead of failed.
    bool undo_failed_expand = false;
};

struct AlgorithmSpec {
    std::string name;
    std::shared_ptr<const Schema> schema;
    std::vector<ActionSpec> actions;
    // Index of the first framework-appended action (actions before it are the algorithm's own).
    std::size_t framework_begin = 0;
};

class AlgorithmLoadError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Rejects duplicate labels, missing callbacks, and declared signatures that break the
// compute-then-move structure or use Lock/Unlock.
void validate_algorithm(const AlgorithmSpec& alg);

enum class Failure : std::uint8_t {
    None,
    GuardFalse,
    InvalidPort,
    Disconnected,
    Memory,
    ExpandOccupied,
    Movement,
    PhaseStructure,
};
std::string_view to_string(Failure f);

struct ExecutionReport {
    bool ok = true;
    Failure failure = Failure::None;
    std::string message;
    Move move;
    std::optional<AmoebotId> partner;
    bool undone = false;
    std::vector<OpRecord> ops;
    // Amoebots whose memory or position changed.
    std::vector<AmoebotId> touched;
};

struct ExecOptions {
    bool check_guard = true;
    bool record_ops = false;
};

// Runs the compute phase, then the move; on any failure the configuration is restored.
ExecutionReport execute_action(Configuration& cfg, AmoebotId id, const ActionSpec& action, ExecOptions opts = {});
std::pair<Configuration, ExecutionReport> apply_action(const Configuration& cfg, AmoebotId id, const ActionSpec& action,
                                                       ExecOptions opts = {});

bool guard_holds(const Configuration& cfg, AmoebotId id, const ActionSpec& action);
// Lowest enabled action index, or none. With `framework_first`, framework-appended
// actions are tried before the algorithm's own.
std::optional<std::size_t> first_enabled(const AlgorithmSpec& alg, const Configuration& cfg, AmoebotId id,
                                         bool framework_first = false);
bool is_enabled(const AlgorithmSpec& alg, const Configuration& cfg, AmoebotId id);
bool is_terminal(const AlgorithmSpec& alg, const Configuration& cfg);

// A fresh configuration of the algorithm's schema at the given contracted positions.
Configuration make_configuration(const AlgorithmSpec& alg, const std::vector<NodeCoord>& nodes,
                                 const std::vector<Orientation>& orientations);

}  // namespace amoebot

#endif
