#pragma once

#include <string>
#include <vector>

#include "ggk/pi1.hpp"

namespace ggk {

// Vertex of the tree the fundamental group acts on: the coset (rep)·G_label,
// stored as the canonical normal form of a path from the spanning-tree root
// to `label` whose trailing label is the identity.  Two tree vertices are
// equal iff their structures coincide.
struct TreeVertex {
  int label = -1;  // vertex of the underlying graph
  NormalForm rep;

  bool operator==(const TreeVertex& o) const {
    return label == o.label && rep == o.rep;
  }
  bool operator!=(const TreeVertex& o) const { return !(*this == o); }
};

// Canonical tree vertex for the coset (path)·G_label, where the word is read
// as a path from the spanning-tree root to `label`.
TreeVertex tree_vertex(const GraphOfGroups& gog, const SpanningTree& t,
                       int label, const Pi1Word& path_from_root);

// Edge of the tree: the coset (rep with trailing label h)·image(mono(edge)),
// joining `from` (at iota(edge)) to `to` (at tau(edge)).
struct TreeBallEdge {
  int from = -1, to = -1;  // indices into TreeBall::vertices
  int edge = -1;           // oriented edge of the underlying graph
  NormalForm coset;
};

// Radius-r piece of the tree around a base vertex.  Vertices appear in
// breadth-first discovery order (base first, children ordered by oriented
// edge index, then by coset representative key).  `truncated[i]` is set when
// a coset enumeration at vertex i stopped at the cap, so vertex i may have
// fewer children than its true degree.
struct TreeBall {
  GraphOfGroups gog;
  SpanningTree tree;
  int radius = 0;
  long long coset_cap = 0;
  std::vector<TreeVertex> vertices;
  std::vector<int> depth;        // per vertex
  std::vector<char> truncated;   // per vertex
  std::vector<int> parent;       // BFS parent index; -1 at the base
  std::vector<TreeBallEdge> edges;

  const TreeVertex& base_vertex() const { return vertices.front(); }
};

// Cap applied to each per-vertex coset enumeration: the GGK_COSET_CAP
// environment variable when set to an integer, 10000 otherwise.
long long default_coset_cap();

// Breadth-first ball of the tree.  coset_cap = -1 uses default_coset_cap();
// a cap below 1 cannot produce even a radius-1 ball and is rejected loudly.
TreeBall ball(const GraphOfGroups& gog, int base_vertex, int radius,
              long long coset_cap = -1);

// Left action of the group element represented by w: w·(rep·G_v).
TreeVertex act(const GraphOfGroups& gog, const SpanningTree& t,
               const Pi1Word& w, const TreeVertex& x);

// Conjugation datum for a vertex stabilizer: Stab(x) = g·G_vertex·g⁻¹ with
// g the group element of `conjugator`.
struct StabilizerWitness {
  Pi1Word conjugator;
  int vertex = -1;
};

StabilizerWitness stabilizer_witness(const TreeBall& b, const TreeVertex& x);

struct StabilizerCheckReport {
  bool ok = true;
  std::string detail;  // first discrepancy, empty when ok
};

// Samples the witness: conjugated vertex-group elements must fix x, and for
// random words, fixing x must coincide with membership of the conjugated
// word in the vertex group.
StabilizerCheckReport check_stabilizer_witness(const TreeBall& b,
                                               const TreeVertex& x,
                                               int samples, unsigned seed);

// Image of a ball in the quotient of the tree by the kernel of an induced
// map.  Vertices are keyed by the invariant of the image coset: the image in
// the free group on non-tree edges (free retraction), or the canonical
// normal form of the image coset in the target (quotient datum, identifying
// two cosets when their images lie in the same coset of the target vertex
// group).  Edges carry the matching invariant for the edge coset, always
// expressed on the forward orientation.
struct QuotientBall {
  struct Node {
    int label = -1;   // vertex of the underlying graph
    std::string key;  // invariant of the image coset
  };
  struct Arc {
    int from = -1, to = -1;  // node indices; from sits at iota(edge)
    int edge = -1;           // forward oriented edge index
    std::string key;
  };
  int base = 0;
  std::vector<Node> nodes;
  std::vector<Arc> arcs;
  std::vector<int> depth;  // distance from the base image
};

QuotientBall quotient_ball_by_kernel(const TreeBall& b, const InducedHom& h);

// Restriction of a quotient ball to the nodes within the given distance of
// the base image (the image of a radius-r ball can exceed the quotient's own
// radius-r ball, so comparisons truncate both sides).
QuotientBall truncate_to_radius(const QuotientBall& qb, int radius);

// Radius-r ball of the universal cover of the underlying graph alone,
// unfolded from backtrack-free edge paths — no group data involved.
struct UnfoldedBall {
  struct Arc {
    int from = -1, to = -1, edge = -1;
  };
  int base = 0;
  std::vector<int> labels;  // graph vertex per node, BFS order
  std::vector<Arc> arcs;
  std::vector<int> depth;
};

UnfoldedBall unfold_universal_cover(const Graph& g, int base_vertex,
                                    int radius);

bool is_tree(const TreeBall& b);
bool is_tree(const QuotientBall& qb);

// Label-preserving graph isomorphism between a truncated quotient ball and
// an independently unfolded universal-cover ball, matching oriented edge
// labels.  Exact for graphs whose vertices have at most one neighbor per
// oriented edge label (true for trees unfolded from a graph).
bool quotient_matches_unfolding(const QuotientBall& qb, const UnfoldedBall& ub);

// DOT exports: vertices labeled "vertex/representative"; vertices whose
// coset enumeration was truncated are drawn dashed.
std::string to_dot(const TreeBall& b);
std::string to_dot(const QuotientBall& qb, const GraphOfGroups& gog);

}  // namespace ggk
