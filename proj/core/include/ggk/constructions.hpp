#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ggk/tree.hpp"

namespace ggk {

// ---------------------------------------------------------------------------
// Quotient constructions on graphs of groups.

struct QuotientResult {
  GraphOfGroups quotient;                 // over the same underlying graph
  std::vector<VCHom> vertex_projections;  // per vertex, G_v -> G'_v
  std::vector<VCHom> edge_projections;    // per oriented edge, G_e -> G'_e
  InducedHom induced;                     // the quotient datum on pi1
};

// Quotients every vertex group by its maximal finite normal subgroup and
// every edge group by the mono preimage of that subgroup (verified to equal
// the edge group's own maximal finite normal subgroup).  The resulting
// vertex groups are the canonical Z / D-infinity models and every induced
// edge mono is verified injective.  Requires a valid input whose edge groups
// are all infinite; split finite-group edges off first.
QuotientResult quotient_by_max_finite_normal(const GraphOfGroups& gog);

// Quotients every vertex group — required to be infinite with trivial finite
// part, i.e. a Z or D-infinity model — by its maximal infinite cyclic
// subgroup.  The resulting vertex groups are trivial or Z/2 and every
// induced edge map is verified injective.  Requires all edge groups
// infinite.
QuotientResult quotient_by_max_infinite_cyclic(const GraphOfGroups& gog);

struct CheckReport {
  bool ok = true;
  std::string detail;
};

// Checks, for the oriented edge e, that the mono preimage of the maximal
// finite normal subgroup of the vertex group at iota(e) equals the edge
// group's own maximal finite normal subgroup (computed independently).  A
// mismatch raises ClaimViolated with witnesses: it would break the
// well-definedness of quotient_by_max_finite_normal.
CheckReport verify_edge_kernel_is_max_finite_normal(const GraphOfGroups& gog,
                                                    int e);

// Exact kernel of a quotient datum's vertex map: the elements of G_v sent to
// the identity, classified as a finite subgroup (with its elements) or an
// infinite cyclic group of translations (with its generator).  Any other
// shape raises KernelClassMismatch.
struct StabilizerClass {
  enum class Kind { FiniteEqualTo, InfiniteCyclic };
  Kind kind = Kind::FiniteEqualTo;
  std::vector<VCElement> finite_elements;  // FiniteEqualTo only
  VCElement generator{};                   // InfiniteCyclic only
};

StabilizerClass kernel_vertex_stabilizer_class(const InducedHom& q, int v);

// ---------------------------------------------------------------------------
// Embedding of an infinite virtually cyclic group into Z wr S_m.

// A normal infinite cyclic subgroup of finite index: generated by a pure
// translation, with normality verified by conjugating by every generator.
struct NormalCyclicSubgroup {
  VCElement generator;
  long long index = 1;  // [G : <generator>]
};

// Raises GroupFinite for finite input.
NormalCyclicSubgroup normal_cyclic_finder(const VCGroupPtr& g);

// Element of Z wr S_m = Z^m x| S_m acting on cosets: perm[j] is the slot the
// j-th coset is sent to; vec[j] is the translation exponent picked up at
// input slot j.  (x*y).vec[j] = x.vec[y.perm[j]] + y.vec[j].
struct WreathElement {
  std::vector<long long> vec;
  std::vector<int> perm;

  bool operator==(const WreathElement& o) const {
    return vec == o.vec && perm == o.perm;
  }
  bool operator!=(const WreathElement& o) const { return !(*this == o); }
};

WreathElement wreath_identity(int m);
WreathElement wreath_mul(const WreathElement& x, const WreathElement& y);
WreathElement wreath_inverse(const WreathElement& x);

// The induced-representation embedding G -> Z wr S_m along a normal cyclic
// subgroup <t> of index m: fix the coset transversal {r_1..r_m}; an element
// g maps to the permutation sigma and exponents a with g r_j =
// r_{sigma(j)} t^{a_j}.
struct WreathEmbedding {
  VCGroupPtr source;
  VCElement t;
  long long index = 1;
  std::vector<VCElement> transversal;
  std::vector<std::pair<VCElement, WreathElement>> generator_images;
};

// Raises NotNormalCyclic if <t> is not normal or its index differs from m.
WreathEmbedding wreath_embed(const VCGroupPtr& g, const VCElement& t,
                             long long m);

// Image of an arbitrary element under the embedding.
WreathElement wreath_image(const WreathEmbedding& emb, const VCElement& x);

// ---------------------------------------------------------------------------
// Inheritance-rule certificates.
//
// A certificate is a DAG of claims, each justified by an inheritance rule
// with premises, or by an axiom leaf whose side conditions were machine
// checked when the certificate was produced.  Node content is hashed so a
// checker can detect tampering; premises always point to earlier nodes.

struct CertificateNode {
  std::string claim;
  std::string rule;
  std::vector<int> premises;  // indices of earlier nodes
  std::string side;           // canonical JSON text of side-condition data
  std::string hash;           // FNV-1a 64 hex of the other four fields
};

struct Certificate {
  std::vector<CertificateNode> nodes;
  int root = -1;
};

// Hash of a node's content (claim, rule, premises, side), ignoring n.hash.
std::string certificate_node_hash(const CertificateNode& n);

// Emits the derivation for the fundamental group of the graph of groups:
// finite-edge splittings, the two quotient constructions, and axiom leaves
// whose side conditions (kernel classes, edge-kernel identities, ball
// stabilizer data, quotient-ball tree checks) are machine-checked here.
Certificate certify_fjcw(const GraphOfGroups& gog);

// Validates structure only (no group theory): hashes, DAG shape, rule
// arities, claim plumbing between rules and premises, and the recorded side
// conditions.  Problems are reported per node, never thrown.
ValidationReport check_certificate(const Certificate& c);

// Canonical JSON serialization (stable key order, no whitespace).
std::string certificate_to_json(const Certificate& c);
Certificate certificate_from_json(const std::string& text);  // SchemaError

}  // namespace ggk
