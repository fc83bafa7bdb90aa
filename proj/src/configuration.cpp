#include "amoebot/configuration.hpp"

#include <algorithm>
#include <limits>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace amoebot {

namespace {
constexpr int kCoordBias = 8192;
constexpr int kCoordLimit = 16384;
}  // namespace

int Schema::add(VarDecl decl) {
    if (index_.count(decl.name)) throw MemoryError("duplicate variable: " + decl.name);
    if (vars_.size() >= kMaxPublicVars) throw MemoryError("public memory exceeds constant bound");
    if (decl.kind == VarKind::Port) {
        decl.initial = kNullPort;
        decl.min = kNullPort;
        decl.max = std::numeric_limits<int>::max();
    } else if (decl.kind == VarKind::EdgeSet) {
        decl.initial = 0;
        decl.min = 0;
        decl.max = (1 << 12) - 1;
    } else if (decl.initial < decl.min || decl.initial > decl.max) {
        throw MemoryError("initial value out of range: " + decl.name);
    }
    const int id = static_cast<int>(vars_.size());
    index_.emplace(decl.name, id);
    vars_.push_back(std::move(decl));
    return id;
}

int Schema::id(std::string_view name) const {
    auto v = find(name);
    if (!v) throw MemoryError("unknown variable: " + std::string(name));
    return *v;
}

std::optional<int> Schema::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const VarDecl& Schema::at(int var) const {
    if (var < 0 || static_cast<std::size_t>(var) >= vars_.size())
        throw MemoryError("unknown variable index: " + std::to_string(var));
    return vars_[static_cast<std::size_t>(var)];
}

bool Schema::operator==(const Schema& other) const {
    if (vars_.size() != other.vars_.size()) return false;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        const auto& a = vars_[i];
        const auto& b = other.vars_[i];
        if (a.name != b.name || a.kind != b.kind || a.initial != b.initial || a.min != b.min || a.max != b.max)
            return false;
    }
    return true;
}

std::string_view to_string(VarKind k) {
    switch (k) {
        case VarKind::Scalar: return "scalar";
        case VarKind::Port: return "port";
        case VarKind::EdgeSet: return "edgeset";
    }
    return "scalar";
}

VarKind var_kind_from_string(std::string_view s) {
    if (s == "scalar") return VarKind::Scalar;
    if (s == "port") return VarKind::Port;
    if (s == "edgeset") return VarKind::EdgeSet;
    throw MemoryError("unknown variable kind: " + std::string(s));
}

std::int32_t pack_edge(PortEdge e) {
    const int q = e.node.q + kCoordBias;
    const int r = e.node.r + kCoordBias;
    if (q < 0 || q >= kCoordLimit || r < 0 || r >= kCoordLimit || e.dir < 0 || e.dir > 5)
        throw MemoryError("edge outside representable range");
    return (q << 17) | (r << 3) | e.dir;
}

PortEdge unpack_edge(std::int32_t packed) {
    return {{((packed >> 17) & 0x3fff) - kCoordBias, ((packed >> 3) & 0x3fff) - kCoordBias}, packed & 7};
}

int edgeset_bit(NodeRole role, int dir) { return static_cast<int>(role) * 6 + dir; }

Configuration::Configuration(std::shared_ptr<const Schema> schema) : schema_(std::move(schema)) {}

std::size_t Configuration::index(AmoebotId id, int var) const {
    return static_cast<std::size_t>(id) * schema_->size() + static_cast<std::size_t>(var);
}

AmoebotId Configuration::add_amoebot(NodeCoord node, Orientation o) {
    validate(o);
    if (occupied(node)) throw MoveError(MoveError::Kind::TargetOccupied, "node already occupied");
    const auto id = static_cast<AmoebotId>(amoebots_.size());
    amoebots_.push_back({id, node, std::nullopt, o});
    for (const auto& v : schema_->vars()) memory_.push_back(v.initial);
    place(id);
    return id;
}

AmoebotId Configuration::add_expanded(NodeCoord head, NodeCoord tail, Orientation o) {
    validate(o);
    if (!direction_between(head, tail)) throw MoveError(MoveError::Kind::NotAdjacent, "head and tail not adjacent");
    if (occupied(head) || occupied(tail)) throw MoveError(MoveError::Kind::TargetOccupied, "node already occupied");
    const auto id = static_cast<AmoebotId>(amoebots_.size());
    amoebots_.push_back({id, head, tail, o});
    for (const auto& v : schema_->vars()) memory_.push_back(v.initial);
    place(id);
    return id;
}

std::optional<Occupant> Configuration::occupant(NodeCoord v) const {
    auto it = occupancy_.find(v);
    if (it == occupancy_.end()) return std::nullopt;
    return it->second;
}

void Configuration::check_value(int var, std::int32_t v) const {
    const auto& d = schema_->at(var);
    switch (d.kind) {
        case VarKind::Scalar:
            if (v < d.min || v > d.max)
                throw MemoryError("value " + std::to_string(v) + " out of range for " + d.name);
            break;
        case VarKind::Port:
            if (v < kNullPort) throw MemoryError("bad port value for " + d.name);
            break;
        case VarKind::EdgeSet:
            if (v < 0 || v >= (1 << 12)) throw MemoryError("bad edge set for " + d.name);
            break;
    }
}

void Configuration::set_value(AmoebotId id, int var, std::int32_t v) {
    if (id >= amoebots_.size()) throw MemoryError("unknown amoebot");
    check_value(var, v);
    memory_[index(id, var)] = v;
}

std::span<const std::int32_t> Configuration::memory(AmoebotId id) const {
    return {memory_.data() + index(id, 0), schema_->size()};
}

PortEdge Configuration::port_edge(AmoebotId id, int label) const {
    const auto& a = amoebots_.at(id);
    if (!a.expanded()) return {a.head, label_to_direction(a.orientation, label)};
    if (label < 0 || label > 9) throw LatticeError("expanded port label out of range: " + std::to_string(label));
    return expanded_port_layout(a.head, *a.tail, a.orientation)[static_cast<std::size_t>(label)];
}

std::vector<PortEdge> Configuration::perimeter(AmoebotId id) const {
    const auto& a = amoebots_.at(id);
    std::vector<PortEdge> out;
    if (!a.expanded()) {
        for (int l = 0; l < 6; ++l) out.push_back({a.head, label_to_direction(a.orientation, l)});
    } else {
        auto lay = expanded_port_layout(a.head, *a.tail, a.orientation);
        out.assign(lay.begin(), lay.end());
    }
    return out;
}

std::optional<int> Configuration::label_of_edge(AmoebotId id, PortEdge e) const {
    const auto& a = amoebots_.at(id);
    if (!a.expanded()) {
        if (e.node != a.head) return std::nullopt;
        return direction_to_label(a.orientation, e.dir);
    }
    if (e.node != a.head && e.node != *a.tail) return std::nullopt;
    auto lay = expanded_port_layout(a.head, *a.tail, a.orientation);
    for (int l = 0; l < 10; ++l)
        if (lay[static_cast<std::size_t>(l)] == e) return l;
    return std::nullopt;
}

std::optional<Occupant> Configuration::across(AmoebotId id, int label) const {
    return occupant(port_edge(id, label).target());
}

std::optional<PortEdge> Configuration::port_value(AmoebotId id, int var) const {
    const auto v = value(id, var);
    if (v == kNullPort) return std::nullopt;
    const PortEdge e = unpack_edge(v);
    const auto& a = amoebots_[id];
    if (e.node == a.head) {
        if (a.expanded() && e.target() == *a.tail) return std::nullopt;
        return e;
    }
    if (a.expanded() && e.node == *a.tail) {
        if (e.target() == a.head) return std::nullopt;
        return e;
    }
    return std::nullopt;
}

std::optional<Occupant> Configuration::port_target(AmoebotId id, int var) const {
    auto e = port_value(id, var);
    if (!e) return std::nullopt;
    return occupant(e->target());
}

void Configuration::place(AmoebotId id) {
    const auto& a = amoebots_[id];
    occupancy_[a.head] = {id, NodeRole::Head};
    if (a.tail) occupancy_[*a.tail] = {id, NodeRole::Tail};
}

void Configuration::unplace(AmoebotId id) {
    const auto& a = amoebots_[id];
    occupancy_.erase(a.head);
    if (a.tail) occupancy_.erase(*a.tail);
}

std::vector<std::pair<int, std::vector<PortEdge>>> Configuration::capture_edgesets(AmoebotId id) const {
    std::vector<std::pair<int, std::vector<PortEdge>>> out;
    const auto& a = amoebots_[id];
    for (std::size_t var = 0; var < schema_->size(); ++var) {
        if (schema_->vars()[var].kind != VarKind::EdgeSet) continue;
        const int mask = value(id, static_cast<int>(var));
        std::vector<PortEdge> edges;
        for (int bit = 0; bit < 12; ++bit) {
            if (!(mask & (1 << bit))) continue;
            const NodeRole role = bit < 6 ? NodeRole::Head : NodeRole::Tail;
            if (role == NodeRole::Tail && !a.tail) continue;
            edges.push_back({a.node(role), bit % 6});
        }
        out.emplace_back(static_cast<int>(var), std::move(edges));
    }
    return out;
}

void Configuration::restore_edgesets(AmoebotId id, const std::vector<std::pair<int, std::vector<PortEdge>>>& saved) {
    const auto& a = amoebots_[id];
    for (const auto& [var, edges] : saved) {
        int mask = 0;
        for (const auto& e : edges) {
            if (e.node == a.head && !(a.tail && e.target() == *a.tail))
                mask |= 1 << edgeset_bit(NodeRole::Head, e.dir);
            else if (a.tail && e.node == *a.tail && e.target() != a.head)
                mask |= 1 << edgeset_bit(NodeRole::Tail, e.dir);
        }
        memory_[index(id, var)] = mask;
    }
}

void Configuration::expand(AmoebotId id, int label) {
    auto& a = amoebots_.at(id);
    if (a.expanded()) throw MoveError(MoveError::Kind::AlreadyExpanded, "expand: amoebot already expanded");
    const NodeCoord target = port_edge(id, label).target();
    if (occupied(target)) throw MoveError(MoveError::Kind::TargetOccupied, "expand: target node occupied");
    auto saved = capture_edgesets(id);
    unplace(id);
    a.tail = a.head;
    a.head = target;
    place(id);
    restore_edgesets(id, saved);
}

void Configuration::contract(AmoebotId id, NodeRole keep) {
    auto& a = amoebots_.at(id);
    if (!a.expanded()) throw MoveError(MoveError::Kind::NotExpanded, "contract: amoebot already contracted");
    auto saved = capture_edgesets(id);
    unplace(id);
    a.head = a.node(keep);
    a.tail.reset();
    place(id);
    restore_edgesets(id, saved);
}

AmoebotId Configuration::push(AmoebotId id, int label) {
    auto& a = amoebots_.at(id);
    if (a.expanded()) throw MoveError(MoveError::Kind::ShapeMismatch, "push: pusher must be contracted");
    const NodeCoord x = port_edge(id, label).target();
    auto occ = occupant(x);
    if (!occ) throw MoveError(MoveError::Kind::NoNeighbor, "push: no neighbor on port");
    auto& b = amoebots_[occ->id];
    if (!b.expanded()) throw MoveError(MoveError::Kind::ShapeMismatch, "push: neighbor must be expanded");
    const NodeCoord y = occ->role == NodeRole::Head ? *b.tail : b.head;
    auto saved_a = capture_edgesets(id);
    auto saved_b = capture_edgesets(occ->id);
    unplace(occ->id);
    unplace(id);
    b.head = y;
    b.tail.reset();
    a.tail = a.head;
    a.head = x;
    place(occ->id);
    place(id);
    restore_edgesets(id, saved_a);
    restore_edgesets(occ->id, saved_b);
    return occ->id;
}

AmoebotId Configuration::pull(AmoebotId id, int label) {
    auto& a = amoebots_.at(id);
    if (!a.expanded()) throw MoveError(MoveError::Kind::ShapeMismatch, "pull: puller must be expanded");
    const PortEdge e = port_edge(id, label);
    auto occ = occupant(e.target());
    if (!occ) throw MoveError(MoveError::Kind::NoNeighbor, "pull: no neighbor on port");
    auto& b = amoebots_[occ->id];
    if (b.expanded()) throw MoveError(MoveError::Kind::ShapeMismatch, "pull: neighbor must be contracted");
    const NodeCoord u = e.node;
    const NodeCoord w = (u == a.head) ? *a.tail : a.head;
    auto saved_a = capture_edgesets(id);
    auto saved_b = capture_edgesets(occ->id);
    unplace(occ->id);
    unplace(id);
    a.head = w;
    a.tail.reset();
    b.tail = b.head;
    b.head = u;
    place(id);
    place(occ->id);
    restore_edgesets(id, saved_a);
    restore_edgesets(occ->id, saved_b);
    return occ->id;
}

bool Configuration::is_connected() const {
    if (occupancy_.empty()) return true;
    std::unordered_set<NodeCoord> seen;
    std::deque<NodeCoord> queue;
    const NodeCoord start = occupancy_.begin()->first;
    seen.insert(start);
    queue.push_back(start);
    while (!queue.empty()) {
        const NodeCoord v = queue.front();
        queue.pop_front();
        for (int d = 0; d < 6; ++d) {
            const NodeCoord w = neighbor(v, d);
            if (occupancy_.count(w) && seen.insert(w).second) queue.push_back(w);
        }
    }
    return seen.size() == occupancy_.size();
}

std::string Configuration::legality_error() const {
    std::size_t nodes = 0;
    for (const auto& a : amoebots_) {
        auto h = occupant(a.head);
        if (!h || h->id != a.id || h->role != NodeRole::Head) return "occupancy mismatch at head of " + std::to_string(a.id);
        ++nodes;
        if (a.tail) {
            if (!direction_between(a.head, *a.tail)) return "non-adjacent expanded amoebot " + std::to_string(a.id);
            auto t = occupant(*a.tail);
            if (!t || t->id != a.id || t->role != NodeRole::Tail) return "occupancy mismatch at tail of " + std::to_string(a.id);
            ++nodes;
        }
    }
    if (nodes != occupancy_.size()) return "stale occupancy entries";
    return {};
}

Configuration Configuration::rebased(std::shared_ptr<const Schema> schema) const {
    Configuration out(std::move(schema));
    out.amoebots_ = amoebots_;
    out.occupancy_ = occupancy_;
    const auto& ns = *out.schema_;
    out.memory_.reserve(amoebots_.size() * ns.size());
    for (const auto& a : amoebots_) {
        for (const auto& v : ns.vars()) {
            auto old = schema_->find(v.name);
            if (old && schema_->at(*old).kind == v.kind)
                out.memory_.push_back(value(a.id, *old));
            else
                out.memory_.push_back(v.initial);
        }
    }
    return out;
}

std::uint64_t Configuration::digest() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::int64_t x) {
        for (int i = 0; i < 8; ++i) {
            h ^= static_cast<std::uint64_t>(x >> (8 * i)) & 0xffU;
            h *= 1099511628211ULL;
        }
    };
    mix(static_cast<std::int64_t>(amoebots_.size()));
    for (const auto& a : amoebots_) {
        mix(a.head.q);
        mix(a.head.r);
        mix(a.tail ? 1 : 0);
        if (a.tail) {
            mix(a.tail->q);
            mix(a.tail->r);
        }
        mix(a.orientation.offset);
        mix(a.orientation.chirality);
    }
    for (auto v : memory_) mix(v);
    return h;
}

bool Configuration::operator==(const Configuration& other) const {
    return *schema_ == *other.schema_ && amoebots_ == other.amoebots_ && memory_ == other.memory_;
}

namespace {

std::string value_text(VarKind kind, std::int32_t v) {
    if (kind == VarKind::Port) {
        if (v == kNullPort) return "-";
        const auto e = unpack_edge(v);
        return std::to_string(e.node.q) + ":" + std::to_string(e.node.r) + ":" + std::to_string(e.dir);
    }
    return std::to_string(v);
}

std::int32_t value_parse(VarKind kind, const std::string& s) {
    if (kind == VarKind::Port) {
        if (s == "-") return kNullPort;
        int q = 0, r = 0, d = 0;
        char c1 = 0, c2 = 0;
        std::istringstream in(s);
        in >> q >> c1 >> r >> c2 >> d;
        if (!in || c1 != ':' || c2 != ':') throw MemoryError("bad port value: " + s);
        return pack_edge({{q, r}, d});
    }
    return static_cast<std::int32_t>(std::stol(s));
}

}  // namespace

void write_configuration(std::ostream& os, const Configuration& cfg) {
    const auto& schema = cfg.schema();
    os << "amoebot-configuration 1\n";
    os << "vars " << schema.size() << "\n";
    for (const auto& v : schema.vars())
        os << "var " << v.name << " " << to_string(v.kind) << " " << v.initial << " " << v.min << " " << v.max << "\n";
    os << "amoebots " << cfg.size() << "\n";
    for (const auto& a : cfg.amoebots()) {
        os << "a " << a.id << " " << a.head.q << " " << a.head.r << " ";
        if (a.tail)
            os << a.tail->q << " " << a.tail->r;
        else
            os << "- -";
        os << " " << a.orientation.offset << " " << a.orientation.chirality;
        for (std::size_t var = 0; var < schema.size(); ++var)
            os << " " << value_text(schema.vars()[var].kind, cfg.value(a.id, static_cast<int>(var)));
        os << "\n";
    }
    os << "end\n";
}

Configuration read_configuration(std::istream& is) {
    std::string word;
    int version = 0;
    is >> word >> version;
    if (word != "amoebot-configuration" || version != 1) throw MemoryError("not a configuration (version 1) stream");
    std::size_t nvars = 0;
    is >> word >> nvars;
    if (word != "vars") throw MemoryError("expected vars");
    auto schema = std::make_shared<Schema>();
    for (std::size_t i = 0; i < nvars; ++i) {
        VarDecl d;
        std::string kind;
        is >> word >> d.name >> kind >> d.initial >> d.min >> d.max;
        if (word != "var") throw MemoryError("expected var");
        d.kind = var_kind_from_string(kind);
        schema->add(d);
    }
    std::size_t n = 0;
    is >> word >> n;
    if (word != "amoebots") throw MemoryError("expected amoebots");
    Configuration cfg(schema);
    for (std::size_t i = 0; i < n; ++i) {
        AmoebotId id = 0;
        int hq = 0, hr = 0, off = 0, chir = 0;
        std::string tq, tr;
        is >> word >> id >> hq >> hr >> tq >> tr >> off >> chir;
        if (word != "a" || id != i) throw MemoryError("bad amoebot record");
        AmoebotId got = 0;
        if (tq == "-")
            got = cfg.add_amoebot({hq, hr}, {off, chir});
        else
            got = cfg.add_expanded({hq, hr}, {std::stoi(tq), std::stoi(tr)}, {off, chir});
        for (std::size_t var = 0; var < nvars; ++var) {
            std::string s;
            is >> s;
            cfg.set_value(got, static_cast<int>(var), value_parse(schema->vars()[var].kind, s));
        }
    }
    is >> word;
    if (word != "end") throw MemoryError("expected end");
    return cfg;
}

std::string to_text(const Configuration& cfg) {
    std::ostringstream os;
    write_configuration(os, cfg);
    return os.str();
}

Configuration configuration_from_text(const std::string& text) {
    std::istringstream is(text);
    return read_configuration(is);
}

}  // namespace amoebot
