#include "holoquench/graph.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>

namespace holo {

namespace {

using LevelTable = std::vector<std::vector<NodeId>>; // [R][k] -> id, empty rows below the first kept level

std::pair<NodeId, NodeId> ordered(NodeId a, NodeId b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

DiskCoordinates level_coords(int level, std::size_t k) {
    const double n = std::ldexp(1.0, level);
    return {static_cast<double>(level), 2.0 * std::numbers::pi * static_cast<double>(k) / n};
}

// Nodes of levels [lo, hi] for one side; the hi level gets `outer_role`.
LevelTable add_levels(CouplingGraph &g, int lo, int hi, int side, ModeRole outer_role) {
    LevelTable table(static_cast<std::size_t>(hi + 1));
    for(int r = lo; r <= hi; ++r) {
        const std::size_t n = std::size_t{1} << r;
        for(std::size_t k = 0; k < n; ++k)
            table[r].push_back(g.add_node(r == hi ? outer_role : ModeRole::bulk, level_coords(r, k), side));
    }
    return table;
}

void add_ring(CouplingGraph &g, const std::vector<NodeId> &level) {
    const auto n = level.size();
    if(n == 2) {
        if(!g.has_edge(level[0], level[1])) g.add_edge(level[0], level[1]);
    } else if(n >= 3) {
        for(std::size_t k = 0; k < n; ++k) {
            const auto a = level[k], b = level[(k + 1) % n];
            if(!g.has_edge(a, b)) g.add_edge(a, b);
        }
    }
}

// Tree edges from level r to r-1 (for r > lo) followed by the ring of level r.
void add_level_edges(CouplingGraph &g, const LevelTable &t, int lo, int hi) {
    for(int r = lo; r <= hi; ++r) {
        if(r > lo)
            for(std::size_t k = 0; k < t[r].size(); ++k) g.add_edge(t[r][k], t[r - 1][k / 2]);
        add_ring(g, t[r]);
    }
}

DiskCoordinates midpoint(const DiskCoordinates &a, const DiskCoordinates &b) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double d = std::fmod(b.theta - a.theta, two_pi);
    if(d < 0) d += two_pi;
    if(d > std::numbers::pi) d -= two_pi; // shorter arc; antipodal pairs go counter-clockwise
    double theta = std::fmod(a.theta + 0.5 * d, two_pi);
    if(theta < 0) theta += two_pi;
    return {0.5 * (a.depth + b.depth), theta};
}

} // namespace

NodeId CouplingGraph::add_node(ModeRole role, std::optional<DiskCoordinates> coords, int side) {
    const NodeId id = nodes_.size();
    nodes_.push_back(Node{id, role, coords, side});
    return id;
}

void CouplingGraph::add_edge(NodeId a, NodeId b, int weight) {
    if(a >= nodes_.size() || b >= nodes_.size()) throw std::invalid_argument("edge endpoint out of range");
    if(a == b) throw std::invalid_argument("self-loop on node " + std::to_string(a));
    if(weight != 1 && weight != -1) throw std::invalid_argument("edge weight must be +1 or -1");
    const auto key = ordered(a, b);
    if(edge_index_.count(key))
        throw std::invalid_argument("duplicate edge " + std::to_string(a) + "-" + std::to_string(b));
    edge_index_.emplace(key, edges_.size());
    edges_.push_back(Edge{a, b, weight});
}

bool CouplingGraph::has_edge(NodeId a, NodeId b) const { return edge_index_.count(ordered(a, b)) > 0; }

int CouplingGraph::degree(NodeId id) const {
    int d = 0;
    for(const auto &e : edges_)
        if(e.a == id || e.b == id) ++d;
    return d;
}

std::vector<NodeId> CouplingGraph::nodes_with_role(ModeRole role) const {
    std::vector<NodeId> out;
    for(const auto &n : nodes_)
        if(n.role == role) out.push_back(n.id);
    return out;
}

std::vector<NodeId> CouplingGraph::measured_nodes() const {
    std::vector<NodeId> out;
    for(const auto &n : nodes_)
        if(is_measured(n.role)) out.push_back(n.id);
    return out;
}

Matrix CouplingGraph::coupling_matrix() const {
    const auto n = static_cast<Eigen::Index>(nodes_.size());
    Matrix     j = Matrix::Zero(n, n);
    for(const auto &e : edges_) {
        j(e.a, e.b) = e.weight;
        j(e.b, e.a) = e.weight;
    }
    return j;
}

QuadratureLayout CouplingGraph::layout() const {
    std::vector<ModeRole> roles;
    std::vector<std::size_t> labels;
    for(const auto &n : nodes_) {
        roles.push_back(n.role);
        labels.push_back(n.id);
    }
    return QuadratureLayout(std::move(roles), std::move(labels));
}

void CouplingGraph::set_boundary_rings(std::vector<std::vector<NodeId>> rings) {
    std::set<NodeId> seen;
    for(const auto &ring : rings)
        for(auto id : ring) {
            if(id >= nodes_.size() || nodes_[id].role != ModeRole::boundary)
                throw std::invalid_argument("ring member " + std::to_string(id) + " is not a boundary node");
            if(!seen.insert(id).second) throw std::invalid_argument("node " + std::to_string(id) + " in two rings");
        }
    rings_ = std::move(rings);
}

std::string_view to_string(WormholeInterior interior) {
    return interior == WormholeInterior::identify ? "identify" : "ring-bridge";
}

WormholeInterior parse_wormhole_interior(std::string_view text) {
    if(text == "ring-bridge" || text == "ring_bridge") return WormholeInterior::ring_bridge;
    if(text == "identify") return WormholeInterior::identify;
    throw std::invalid_argument("unknown wormhole interior '" + std::string(text) + "'");
}

CouplingGraph build_disk_graph(const DiskSpec &spec) {
    if(spec.depth < 2) throw std::invalid_argument("disk depth must be at least 2");
    if(spec.depth > 20) throw std::invalid_argument("disk depth too large");
    CouplingGraph g;
    const auto    t = add_levels(g, 0, spec.depth, 0, ModeRole::boundary);
    add_level_edges(g, t, 0, spec.depth);
    g.set_boundary_rings({t[spec.depth]});
    g.set_descriptor("disk(" + std::to_string(spec.depth) + ")");
    return g;
}

CouplingGraph build_wormhole_graph(const WormholeSpec &spec) {
    if(spec.throat_depth < 1 || spec.throat_depth >= spec.depth)
        throw std::invalid_argument("wormhole needs 1 <= throat_depth < depth");
    if(spec.depth > 20) throw std::invalid_argument("wormhole depth too large");
    const int lo = spec.throat_depth, hi = spec.depth;

    CouplingGraph g;
    const auto    left = add_levels(g, lo, hi, 0, ModeRole::boundary);
    LevelTable    right;
    if(spec.interior == WormholeInterior::identify) {
        right = LevelTable(static_cast<std::size_t>(hi + 1));
        right[lo] = left[lo];
        const auto rest = add_levels(g, lo + 1, hi, 1, ModeRole::boundary);
        for(int r = lo + 1; r <= hi; ++r) right[r] = rest[r];
    } else {
        right = add_levels(g, lo, hi, 1, ModeRole::boundary);
    }
    add_level_edges(g, left, lo, hi);
    add_level_edges(g, right, lo, hi); // shared throat ring is skipped as already present
    if(spec.interior == WormholeInterior::ring_bridge)
        for(std::size_t k = 0; k < left[lo].size(); ++k) g.add_edge(left[lo][k], right[lo][k]);

    g.set_boundary_rings({left[hi], right[hi]});
    g.set_descriptor("wormhole(" + std::to_string(spec.depth) + "," + std::to_string(spec.throat_depth) + "," +
                     std::string(to_string(spec.interior)) + ")");
    return g;
}

CouplingGraph decorate(const DecorationSpec &spec) {
    const auto &base = spec.base;
    if(spec.boundary_attach.empty()) throw std::invalid_argument("decoration needs at least one attach vertex");
    for(const auto &n : base.nodes())
        if(n.role != ModeRole::bulk) throw std::invalid_argument("decoration base must contain only bulk nodes");

    CouplingGraph g;
    for(const auto &n : base.nodes()) g.add_node(ModeRole::bulk, n.coords, n.side);

    for(const auto &e : base.edges()) {
        const auto [lo, hi] = ordered(e.a, e.b);
        std::optional<DiskCoordinates> c;
        if(base.node(lo).coords && base.node(hi).coords) c = midpoint(*base.node(lo).coords, *base.node(hi).coords);
        const NodeId s = g.add_node(ModeRole::split, c, base.node(lo).side);
        g.add_edge(lo, s, +1);
        g.add_edge(s, hi, -1);
    }

    std::vector<NodeId> ring;
    std::set<NodeId>    seen;
    for(auto v : spec.boundary_attach) {
        if(v >= base.num_nodes()) throw std::invalid_argument("attach vertex " + std::to_string(v) + " not in base graph");
        if(!seen.insert(v).second) throw std::invalid_argument("attach vertex " + std::to_string(v) + " listed twice");
        std::optional<DiskCoordinates> c;
        if(const auto &bc = base.node(v).coords) c = DiskCoordinates{bc->depth + 1.0, bc->theta};
        const NodeId b = g.add_node(ModeRole::boundary, c, base.node(v).side);
        g.add_edge(v, b, +1);
        ring.push_back(b);
    }
    g.set_boundary_rings({ring});
    g.set_descriptor("decorated(" + base.descriptor() + ")");
    return g;
}

CouplingGraph build_decorated_disk(int depth) {
    if(depth < 2) throw std::invalid_argument("decorated disk depth must be at least 2");
    if(depth > 20) throw std::invalid_argument("decorated disk depth too large");
    const int     outer = depth - 1;
    CouplingGraph base;
    const auto    t = add_levels(base, 0, outer, 0, ModeRole::bulk);
    add_level_edges(base, t, 0, outer);
    base.set_descriptor("disk_bulk(" + std::to_string(depth) + ")");

    auto g = decorate(DecorationSpec{std::move(base), t[outer]});
    g.set_descriptor("decorated_disk(" + std::to_string(depth) + ")");
    return g;
}

CouplingGraph attach_probe(const CouplingGraph &graph, NodeId bulk_node) {
    if(bulk_node >= graph.num_nodes() || graph.node(bulk_node).role != ModeRole::bulk)
        throw std::invalid_argument("probe target " + std::to_string(bulk_node) + " is not a bulk node");
    CouplingGraph g = graph;
    const NodeId  p = g.add_node(ModeRole::probe, std::nullopt, graph.node(bulk_node).side);
    g.add_edge(bulk_node, p, +1);
    g.set_descriptor(graph.descriptor() + "+probe(" + std::to_string(bulk_node) + ")");
    return g;
}

std::map<NodeId, PoincarePoint> poincare_coordinates(const CouplingGraph &graph) {
    double r_max = 0.0;
    for(const auto &n : graph.nodes()) {
        if(n.role == ModeRole::probe) continue;
        if(!n.coords) throw std::invalid_argument("node " + std::to_string(n.id) + " has no disk coordinates");
        r_max = std::max(r_max, n.coords->depth);
    }
    if(r_max <= 0.0) throw std::invalid_argument("graph has no radial extent");
    const double half_ln2 = 0.5 * std::numbers::ln2;
    const double norm     = std::tanh(r_max * half_ln2);

    std::map<NodeId, PoincarePoint> out;
    for(const auto &n : graph.nodes()) {
        if(!n.coords) continue;
        const double u = 0.95 * std::tanh(n.coords->depth * half_ln2) / norm;
        out[n.id]      = {u * std::cos(n.coords->theta), u * std::sin(n.coords->theta)};
    }
    return out;
}

} // namespace holo
