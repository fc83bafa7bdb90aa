#ifndef AMOEBOT_CONFIGURATION_HPP
#define AMOEBOT_CONFIGURATION_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "amoebot/lattice.hpp"

namespace amoebot {

using AmoebotId = std::uint32_t;

enum class NodeRole : std::uint8_t { Head = 0, Tail = 1 };

// Kinds of public-memory values. Port values are stored as lattice half-edges so that
// they survive relabeling; EdgeSet is a bitmask over the amoebot's perimeter edges.
enum class VarKind : std::uint8_t { Scalar, Port, EdgeSet };

struct VarDecl {
    std::string name;
    VarKind kind = VarKind::Scalar;
    int initial = 0;
    int min = 0;
    int max = 0;
};

inline constexpr int kNullPort = -1;
inline constexpr std::size_t kMaxPublicVars = 24;

class MemoryError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class Schema {
  public:
    int add(VarDecl decl);
    int id(std::string_view name) const;
    std::optional<int> find(std::string_view name) const;
    const VarDecl& at(int var) const;
    std::size_t size() const { return vars_.size(); }
    const std::vector<VarDecl>& vars() const { return vars_; }
    bool operator==(const Schema& other) const;

  private:
    std::vector<VarDecl> vars_;
    std::unordered_map<std::string, int> index_;
};

std::string_view to_string(VarKind k);
VarKind var_kind_from_string(std::string_view s);

std::int32_t pack_edge(PortEdge e);
PortEdge unpack_edge(std::int32_t packed);

struct Amoebot {
    AmoebotId id = 0;
    NodeCoord head;
    std::optional<NodeCoord> tail;
    Orientation orientation;

    bool expanded() const { return tail.has_value(); }
    int port_count() const { return expanded() ? 10 : 6; }
    NodeCoord node(NodeRole role) const { return role == NodeRole::Head ? head : *tail; }
    bool operator==(const Amoebot&) const = default;
};

struct Occupant {
    AmoebotId id = 0;
    NodeRole role = NodeRole::Head;
    bool operator==(const Occupant&) const = default;
};

class MoveError : public std::runtime_error {
  public:
    enum class Kind { AlreadyExpanded, NotExpanded, TargetOccupied, NotAdjacent, ShapeMismatch, NoNeighbor };
    MoveError(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}
    Kind kind;
};

class Configuration {
  public:
    Configuration() : Configuration(std::make_shared<Schema>()) {}
    explicit Configuration(std::shared_ptr<const Schema> schema);

    AmoebotId add_amoebot(NodeCoord node, Orientation o);
    AmoebotId add_expanded(NodeCoord head, NodeCoord tail, Orientation o);

    std::size_t size() const { return amoebots_.size(); }
    const Amoebot& amoebot(AmoebotId id) const { return amoebots_.at(id); }
    const std::vector<Amoebot>& amoebots() const { return amoebots_; }
    const Schema& schema() const { return *schema_; }
    const std::shared_ptr<const Schema>& schema_ptr() const { return schema_; }

    std::optional<Occupant> occupant(NodeCoord v) const;
    bool occupied(NodeCoord v) const { return occupancy_.count(v) != 0; }
    std::size_t occupied_node_count() const { return occupancy_.size(); }

    // Raw memory access (engine and checkers). Writes are range-checked.
    std::int32_t value(AmoebotId id, int var) const { return memory_[index(id, var)]; }
    void set_value(AmoebotId id, int var, std::int32_t v);
    std::span<const std::int32_t> memory(AmoebotId id) const;

    // Port geometry.
    PortEdge port_edge(AmoebotId id, int label) const;
    std::optional<int> label_of_edge(AmoebotId id, PortEdge e) const;
    std::optional<Occupant> across(AmoebotId id, int label) const;
    std::vector<PortEdge> perimeter(AmoebotId id) const;

    // Port-typed values resolved against the owner's current shape.
    std::optional<PortEdge> port_value(AmoebotId id, int var) const;
    // Occupant across the stored edge, if the edge is still one of the owner's ports.
    std::optional<Occupant> port_target(AmoebotId id, int var) const;

    // Movement primitives. They check legality and throw MoveError without side effects on failure.
    void expand(AmoebotId id, int label);
    void contract(AmoebotId id, NodeRole keep);
    AmoebotId push(AmoebotId id, int label);
    AmoebotId pull(AmoebotId id, int label);

    bool is_connected() const;
    // Empty string when legal, otherwise a description of the first problem.
    std::string legality_error() const;

    // Same amoebots and positions under another schema; variables matched by name,
    // missing ones take their initial values.
    Configuration rebased(std::shared_ptr<const Schema> schema) const;

    std::uint64_t digest() const;
    bool operator==(const Configuration& other) const;

  private:
    std::size_t index(AmoebotId id, int var) const;
    void check_value(int var, std::int32_t v) const;
    void place(AmoebotId id);
    void unplace(AmoebotId id);
    // EdgeSet values keyed by (role, dir); moves rewrite them through absolute edges.
    std::vector<std::pair<int, std::vector<PortEdge>>> capture_edgesets(AmoebotId id) const;
    void restore_edgesets(AmoebotId id, const std::vector<std::pair<int, std::vector<PortEdge>>>& saved);

    std::shared_ptr<const Schema> schema_;
    std::vector<Amoebot> amoebots_;
    std::vector<std::int32_t> memory_;
    std::unordered_map<NodeCoord, Occupant> occupancy_;
};

int edgeset_bit(NodeRole role, int dir);

// Versioned text format, round-trippable.
void write_configuration(std::ostream& os, const Configuration& cfg);
Configuration read_configuration(std::istream& is);
std::string to_text(const Configuration& cfg);
Configuration configuration_from_text(const std::string& text);

}  // namespace amoebot

#endif
