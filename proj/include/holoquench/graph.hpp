#pragma once

#include "holoquench/phase_space.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

// Coupling graphs for the quench Hamiltonian. Node ids are dense (0..N-1) and
// double as mode indices; the coupling matrix is the signed adjacency matrix.

namespace holo {

using NodeId = std::size_t;

/// Layer depth R (tree level, R ln2 in units of the AdS radius) and angle theta.
/// Split nodes carry fractional depth (midpoint of the split edge).
struct DiskCoordinates {
    double depth = 0.0;
    double theta = 0.0;
};

struct Node {
    NodeId                         id = 0;
    ModeRole                       role = ModeRole::bulk;
    std::optional<DiskCoordinates> coords;
    int                            side = 0; ///< 0 for single disks / left wormhole side, 1 for the right side
};

struct Edge {
    NodeId a      = 0;
    NodeId b      = 0;
    int    weight = 1;
};

class CouplingGraph {
  public:
    CouplingGraph() = default;

    NodeId add_node(ModeRole role, std::optional<DiskCoordinates> coords = std::nullopt, int side = 0);

    /// Rejects self-loops, repeated pairs, unknown endpoints and weights other than +-1.
    void add_edge(NodeId a, NodeId b, int weight = 1);

    std::size_t              num_nodes() const { return nodes_.size(); }
    const std::vector<Node> &nodes() const { return nodes_; }
    const std::vector<Edge> &edges() const { return edges_; }
    const Node              &node(NodeId id) const { return nodes_.at(id); }

    bool has_edge(NodeId a, NodeId b) const;
    int  degree(NodeId id) const;

    std::vector<NodeId> nodes_with_role(ModeRole role) const;
    std::vector<NodeId> measured_nodes() const;

    Matrix           coupling_matrix() const;
    QuadratureLayout layout() const;

    /// Ordered boundary rings: one for a disk, two (left, right) for a wormhole.
    const std::vector<std::vector<NodeId>> &boundary_rings() const { return rings_; }
    void                                    set_boundary_rings(std::vector<std::vector<NodeId>> rings);

    const std::string &descriptor() const { return descriptor_; }
    void               set_descriptor(std::string d) { descriptor_ = std::move(d); }

  private:
    std::vector<Node>                  nodes_;
    std::vector<Edge>                  edges_;
    std::vector<std::vector<NodeId>>   rings_;
    std::map<std::pair<NodeId, NodeId>, std::size_t> edge_index_;
    std::string                        descriptor_;
};

struct DiskSpec {
    int depth = 5;
};

enum class WormholeInterior { ring_bridge, identify };

std::string_view to_string(WormholeInterior interior);
WormholeInterior parse_wormhole_interior(std::string_view text);

struct WormholeSpec {
    int              depth        = 6;
    int              throat_depth = 4;
    WormholeInterior interior     = WormholeInterior::ring_bridge;
};

struct DecorationSpec {
    CouplingGraph       base;
    std::vector<NodeId> boundary_attach;
};

/// Binary tree of depth R_b with rings on every level; level R_b is the boundary.
CouplingGraph build_disk_graph(const DiskSpec &spec);

/// Two disks with levels below the throat removed, glued at the throat level.
/// Boundary rings are left then right; in identify mode the throat nodes are shared.
CouplingGraph build_wormhole_graph(const WormholeSpec &spec);

/// Splits every base edge with a new split node (lower-id half +1, other half -1)
/// and hangs one boundary node (+1) off each attach vertex, in the given order.
CouplingGraph decorate(const DecorationSpec &spec);

/// Decorated disk of depth D: the bulk of disk(D) (levels 0..D-1 with rings) is
/// decorated, with boundary nodes attached to level D-1. Boundary size 2^(D-1).
CouplingGraph build_decorated_disk(int depth);

/// Adds one probe node coupled (+1) to a bulk node. The probe is never measured.
CouplingGraph attach_probe(const CouplingGraph &graph, NodeId bulk_node);

struct PoincarePoint {
    double x = 0.0;
    double y = 0.0;
};

/// Display embedding: radius 0.95 tanh(R ln2/2) / tanh(R_max ln2/2), angle theta.
/// R_max is the largest depth present, so the outermost level lands at 0.95.
std::map<NodeId, PoincarePoint> poincare_coordinates(const CouplingGraph &graph);

/// Edge-list text format: "nodes <count>", then "id role R theta" per node
/// (nan for missing coordinates), then "a b weight" per edge.
void          write_edge_list(std::ostream &out, const CouplingGraph &graph);
std::string   edge_list_string(const CouplingGraph &graph);
CouplingGraph read_edge_list(std::istream &in);

} // namespace holo
