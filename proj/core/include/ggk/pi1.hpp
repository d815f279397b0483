#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ggk/gog.hpp"

namespace ggk {

// Words in the fundamental group relative to a spanning tree: vertex-group
// elements and oriented edge symbols in any order.  Any token sequence is a
// legal word; tree geodesics are inserted implicitly during reduction.
struct Pi1Token {
  enum class Kind { Vertex, Edge };
  Kind kind = Kind::Vertex;
  int index = -1;   // vertex index (Vertex) or oriented edge index (Edge)
  VCElement elt{};  // Vertex tokens only

  static Pi1Token vertex(int v, const VCElement& x) {
    return Pi1Token{Kind::Vertex, v, x};
  }
  static Pi1Token edge(int e) { return Pi1Token{Kind::Edge, e, VCElement{}}; }

  bool operator==(const Pi1Token& o) const {
    return kind == o.kind && index == o.index &&
           (kind == Kind::Edge || elt == o.elt);
  }
};

struct Pi1Word {
  std::vector<Pi1Token> tokens;
};

Pi1Word concat(const Pi1Word& u, const Pi1Word& v);
Pi1Word inverse_word(const GraphOfGroups& gog, const Pi1Word& w);

// Word syntax used by the tools: semicolon-separated tokens
//   g(VERTEX,ELT)  vertex-group element, ELT as rendered by element_text
//   e(EDGE)        edge symbol, forward orientation
//   E(EDGE)        edge symbol, reversed orientation
// The empty word is written "1".
Pi1Word parse_word(const GraphOfGroups& gog, const std::string& text);
std::string token_text(const GraphOfGroups& gog, const Pi1Token& t);
std::string word_text(const GraphOfGroups& gog,
                      const std::vector<Pi1Token>& tokens);

// Canonical form of a word: a based loop g0·e1·g1···en·gn in which every
// label left of an edge is the minimal coset representative for that edge's
// image subgroup, no pinch e·g·ē with removable g remains, and the trailing
// label is arbitrary.  Two words are equal in the group iff their normal
// forms are identical.
struct NormalForm {
  int base = -1;   // vertex the loop is based at
  VCElement lead;  // label before the first edge, in the base vertex group

  struct Step {
    int edge = -1;
    VCElement label;  // element of the vertex group at tau(edge)
    bool operator==(const Step& o) const {
      return edge == o.edge && label == o.label;
    }
  };
  std::vector<Step> steps;

  bool operator==(const NormalForm& o) const {
    return base == o.base && lead == o.lead && steps == o.steps;
  }
  bool operator!=(const NormalForm& o) const { return !(*this == o); }
};

bool is_identity(const GraphOfGroups& gog, const NormalForm& nf);

// Reduces a word to its normal form based at the spanning-tree root.
// Raises TokenTypeMismatch for tokens that do not name a vertex group
// element or an edge of the graph.
NormalForm reduce(const GraphOfGroups& gog, const SpanningTree& t,
                  const Pi1Word& w);

// Normal form of the same word read as a path based at the given vertex
// (conjugating the based loop by the tree geodesic).  reduce() is the
// root-based case.
NormalForm reduce_based_at(const GraphOfGroups& gog, const SpanningTree& t,
                           int base_vertex, const Pi1Word& w);

// Normal form of the word read as a groupoid path from `from` to `to`
// (geodesics inserted implicitly; base = from, the path ends at `to`).
NormalForm reduce_path(const GraphOfGroups& gog, const SpanningTree& t,
                       int from, int to, const Pi1Word& w);

// The token sequence of a normal form: the lead label followed by the
// alternating edge/label tokens.  Reducing it as a path from nf.base
// reproduces nf.
Pi1Word to_word(const GraphOfGroups& gog, const NormalForm& nf);

bool pi1_eq(const GraphOfGroups& gog, const SpanningTree& t, const Pi1Word& u,
            const Pi1Word& v);

// Display form of a normal form: tree-edge symbols and identity labels are
// dropped; reparsing the display tokens reproduces the normal form.
std::vector<Pi1Token> display_tokens(const GraphOfGroups& gog,
                                     const SpanningTree& t,
                                     const NormalForm& nf);

// Decides membership of the word in the vertex group at v (as a subgroup of
// the fundamental group relative to the tree) and returns the element of
// G_v; raises NotMember otherwise.
VCElement membership_in_vertex_group(const GraphOfGroups& gog,
                                     const SpanningTree& t, const Pi1Word& w,
                                     int v);
std::optional<VCElement> try_membership_in_vertex_group(
    const GraphOfGroups& gog, const SpanningTree& t, const Pi1Word& w, int v);

// ---------------------------------------------------------------------------
// Induced maps out of the fundamental group.

// Freely reduced word in the free group on the non-tree edge orbits; letters
// are oriented edge indices (forward orientation is the positive letter).
struct FreeWord {
  std::vector<int> letters;
  bool empty() const { return letters.empty(); }
  bool operator==(const FreeWord& o) const { return letters == o.letters; }
};

FreeWord free_mul(const Graph& g, const FreeWord& u, const FreeWord& v);
FreeWord free_inverse(const Graph& g, const FreeWord& u);

// Retraction onto the free group on non-tree edges: vertex elements and tree
// edges die, non-tree edge symbols survive.
FreeWord apply_phi(const GraphOfGroups& gog, const SpanningTree& t,
                   const Pi1Word& w);

// Map induced on fundamental groups by a vertex-wise homomorphism onto a
// graph of groups over the same graph (a quotient datum), or the free
// retraction.  Both carry an exact kernel membership predicate.
struct InducedHom {
  enum class Kind { PhiFree, QQuotient };
  Kind kind = Kind::PhiFree;
  GraphOfGroups source;
  GraphOfGroups target;             // QQuotient only
  std::vector<VCHom> vertex_maps;   // QQuotient only, one per vertex

  static InducedHom phi_free(GraphOfGroups source);
  static InducedHom quotient(GraphOfGroups source, GraphOfGroups target,
                             std::vector<VCHom> vertex_maps);
};

// Token-wise image of a word under a quotient datum (ProjectionMismatch for
// a PhiFree datum or a word that does not live in the source).
Pi1Word apply_q(const InducedHom& h, const Pi1Word& w);

bool in_kernel(const InducedHom& h, const SpanningTree& t, const Pi1Word& w);

// ---------------------------------------------------------------------------
// Exact coset representatives (used by the reducer and the tree module).

// Canonical representative of g·image(mono) in the vertex group at iota(e),
// minimal under element_key, together with the edge-group factor:
// g = rep · mono(factor).  Exact for finite and infinite edge groups alike.
struct CosetFactorization {
  VCElement rep;
  VCElement factor;  // element of the edge group
};

CosetFactorization coset_rep(const VCGroup& vertex_group, const VCHom& mono,
                             const VCElement& g);

}  // namespace ggk
