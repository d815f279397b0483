#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ggk/vcgroup.hpp"

namespace ggk {

// Connected graph with oriented edges.  Every geometric edge is stored as a
// pair of oriented edges e, ē with bar(e) = e^1; iota(ē) = tau(e).  Loops and
// multi-edges are allowed.
class Graph {
 public:
  // edges given once per geometric edge as (id, from, to)
  static Graph make(
      const std::vector<std::string>& vertex_ids,
      const std::vector<std::tuple<std::string, std::string, std::string>>&
          edges);

  int vertex_count() const { return static_cast<int>(vertex_ids_.size()); }
  int oriented_edge_count() const { return static_cast<int>(iota_.size()); }
  int geometric_edge_count() const { return oriented_edge_count() / 2; }

  const std::string& vertex_id(int v) const { return vertex_ids_[check_v(v)]; }
  const std::string& edge_id(int e) const { return edge_ids_[check_e(e)]; }
  bool is_forward(int e) const {
    check_e(e);
    return (e & 1) == 0;
  }

  int bar(int e) const {
    check_e(e);
    return e ^ 1;
  }
  int iota(int e) const { return iota_[check_e(e)]; }
  int tau(int e) const { return tau_[check_e(e)]; }

  int vertex_index(const std::string& id) const;          // UnknownVertex
  int oriented_edge(const std::string& id, bool forward) const;  // UnknownEdge

  // oriented edges with iota(e) == v, sorted by (edge id, direction)
  const std::vector<int>& out_edges(int v) const { return out_[check_v(v)]; }

  bool connected() const;

 private:
  int check_v(int v) const {
    if (v < 0 || v >= vertex_count())
      fail(ErrorCode::UnknownVertex, "vertex index " + std::to_string(v));
    return v;
  }
  int check_e(int e) const {
    if (e < 0 || e >= oriented_edge_count())
      fail(ErrorCode::UnknownEdge, "oriented edge index " + std::to_string(e));
    return e;
  }

  std::vector<std::string> vertex_ids_;
  std::vector<std::string> edge_ids_;  // per oriented edge (same for e, ē)
  std::vector<int> iota_, tau_;        // per oriented edge
  std::vector<std::vector<int>> out_;  // per vertex
};

// Graph of groups: a group per vertex, a group per geometric edge, and an
// injective homomorphism from each edge group into the vertex group at the
// initial vertex of each orientation.
struct GraphOfGroups {
  Graph graph;
  std::vector<VCGroupPtr> vertex_groups;  // per vertex index
  std::vector<VCGroupPtr> edge_groups;    // per oriented edge; [e] == [bar e]
  std::vector<VCHom> monos;               // per oriented edge e, into iota(e)

  const VCGroupPtr& vertex_group(int v) const { return vertex_groups[v]; }
  const VCGroupPtr& edge_group(int e) const { return edge_groups[e]; }
  const VCHom& mono(int e) const { return monos[e]; }
};

struct GeometricEdgeData {
  std::string id;
  std::string from, to;
  VCGroupPtr group;
  VCHom mono_from;  // group -> vertex group of `from` (the map of e)
  VCHom mono_to;    // group -> vertex group of `to`   (the map of ē)
};

// Assembles and structurally checks a graph of groups.  Monos must have been
// built with exactly the supplied group objects.  Injectivity of the monos is
// NOT enforced here; validate() reports it.
GraphOfGroups make_graph_of_groups(
    const std::vector<std::pair<std::string, VCGroupPtr>>& vertices,
    const std::vector<GeometricEdgeData>& edges);

// Renders an element in the word syntax used by presentations and the
// command-line tools: [f] for finite groups, [f,n] for semidirect models,
// [f,n,eps] for the two-reflection models.
std::string element_text(const VCGroup& g, const VCElement& x);

struct ValidationProblem {
  ErrorCode code;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationProblem> problems;
  bool valid() const { return problems.empty(); }
};

// Reports every violated invariant (non-injective monos with a witness,
// disconnection with the stranded vertices, mismatched edge data).  With
// strict = true the first problem is raised as an Error instead.
ValidationReport validate(const GraphOfGroups& gog, bool strict = false);

// Deterministic BFS spanning tree rooted at the lexicographically least
// vertex id, edges tried in (edge id, direction) order.
struct SpanningTree {
  int root = 0;
  std::vector<char> in_tree;      // per oriented edge
  std::vector<int> parent_edge;   // per vertex: tree edge with tau == v; -1 at root
  std::vector<int> depth;         // per vertex

  bool contains(int e) const { return in_tree[static_cast<size_t>(e)] != 0; }
  // oriented tree edges traversed from u to v (geodesic in the tree)
  std::vector<int> path(const Graph& g, int u, int v) const;
};

SpanningTree spanning_tree(const Graph& g);  // Disconnected on failure

// One instance of the relation  e·α_ē(s)·ē = α_e(s)  for an edge-group
// generator s.
struct RelationInstance {
  int edge;             // oriented edge index e
  VCElement s;          // generator of the edge group
  VCElement lhs_inner;  // α_ē(s), element of the vertex group at tau(e)
  VCElement rhs;        // α_e(s), element of the vertex group at iota(e)
};

// One instance per geometric edge per edge-group generator (forward
// orientation only).
std::vector<RelationInstance> relation_instances(const GraphOfGroups& gog);

struct Presentation {
  std::vector<std::string> generators;
  std::vector<std::string> relations;
  std::string text;  // ⟨generators | relations⟩ rendering
};

// Deterministic presentation of the fundamental group relative to T: vertex
// group generator symbols plus one symbol per non-tree edge orbit; one
// relation per edge orbit per edge-group generator, with tree-edge symbols
// deleted and reversed edges written as inverses.
Presentation presentation(const GraphOfGroups& gog, const SpanningTree& t);

// Splitting off one finite-edge-group geometric edge: an amalgam when the
// edge disconnects the graph, an HNN datum otherwise.
struct SplitResult {
  bool is_amalgam = false;
  GraphOfGroups part1;  // contains iota(e); the whole rest for HNN
  GraphOfGroups part2;  // tau(e) side; meaningful only for amalgams
  VCGroupPtr edge_group;
  std::string edge_id;
  std::string iota_vertex, tau_vertex;  // endpoint vertex ids of the split edge
};

SplitResult split_along_finite_edge(const GraphOfGroups& gog,
                                    const std::string& edge_id);

// Full reduction to leaves with all edge groups infinite, recording the
// amalgam/HNN steps for the certificate engine.
struct DecompositionNode {
  enum class Kind { Leaf, Amalgam, Hnn } kind = Kind::Leaf;
  int leaf_index = -1;           // for leaves
  std::string edge_id;           // split edge for Amalgam/Hnn
  VCGroupPtr edge_group;         // its (finite) group
  std::vector<int> children;     // 2 for Amalgam, 1 for Hnn
};

struct DecompositionTree {
  std::vector<DecompositionNode> nodes;
  int root = -1;
};

struct EdgeReduction {
  std::vector<GraphOfGroups> leaves;
  DecompositionTree tree;
};

EdgeReduction infinite_edge_reduction(const GraphOfGroups& gog);

}  // namespace ggk
