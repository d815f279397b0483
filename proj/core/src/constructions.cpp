#include "ggk/constructions.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ggk {
namespace {

using json = nlohmann::json;  // sorted keys, so dump() is a canonical form

std::string fnv_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

// Short structural digest of a group: variant, multiplication table and the
// twisting data.  Distinguishes non-isomorphic (and differently presented)
// groups of equal order inside claim strings.
std::string group_digest(const VCGroup& g) {
  std::ostringstream os;
  const FiniteGroupPtr& f = g.finite_part();
  os << static_cast<int>(g.variant()) << '|' << f->order() << '|';
  for (Elt x : f->flat_table()) os << x << ',';
  if (g.variant() == VCClass::Orientable) {
    os << "alpha:";
    for (Elt x = 0; x < f->order(); ++x) os << g.alpha()(x) << ',';
  } else if (g.variant() == VCClass::Nonorientable) {
    os << "phi:";
    for (Elt c = 0; c < f->order(); ++c) os << g.phi_a(c) << ',' << g.phi_b(c) << ';';
    os << "sq:" << g.sq_a() << ',' << g.sq_b() << '|';
    for (Elt x : g.amalgam_a()->flat_table()) os << x << ',';
    os << '|';
    for (Elt x : g.amalgam_b()->flat_table()) os << x << ',';
  }
  return fnv_hex(os.str()).substr(8);
}

std::string group_term(const VCGroup& g) {
  const int fo = g.finite_part()->order();
  switch (g.variant()) {
    case VCClass::Finite:
      if (fo == 1) return "1";
      return "F" + std::to_string(fo) + "#" + group_digest(g);
    case VCClass::Orientable:
      if (fo == 1) return "Z";
      return "Z~F" + std::to_string(fo) + "#" + group_digest(g);
    case VCClass::Nonorientable:
      if (fo == 1) return "Dinf";
      return "Dinf~C" + std::to_string(fo) + "#" + group_digest(g);
  }
  return "?";
}

std::string hom_digest(const VCHom& f) {
  std::ostringstream os;
  for (const VCElement& gx : f.source->generator_elts()) {
    const VCElement y = f(gx);
    os << gx.f << ',' << gx.n << ',' << gx.eps << ">" << y.f << ',' << y.n
       << ',' << y.eps << ';';
  }
  return fnv_hex(os.str()).substr(8);
}

// Canonical text of a graph of groups: vertices with their group terms, then
// geometric edges with endpoints, edge group term and digests of both monos.
std::string gog_term(const GraphOfGroups& gog) {
  const Graph& gr = gog.graph;
  std::ostringstream os;
  os << '{';
  for (int v = 0; v < gr.vertex_count(); ++v) {
    if (v) os << ',';
    os << gr.vertex_id(v) << '=' << group_term(*gog.vertex_group(v));
  }
  os << '|';
  for (int e = 0; e < gr.oriented_edge_count(); e += 2) {
    if (e) os << ',';
    os << gr.edge_id(e) << '(' << gr.vertex_id(gr.iota(e)) << ','
       << gr.vertex_id(gr.tau(e)) << ")=" << group_term(*gog.edge_group(e))
       << ':' << hom_digest(gog.mono(e)) << ':' << hom_digest(gog.mono(e ^ 1));
  }
  os << '}';
  return os.str();
}

std::string fjcw_claim(const GraphOfGroups& gog) {
  return "FJCw(pi1" + gog_term(gog) + ")";
}

std::string kernel_claim(const GraphOfGroups& src, const GraphOfGroups& tgt) {
  return "FJCw(Ker(q:pi1" + gog_term(src) + "->pi1" + gog_term(tgt) + "))";
}

std::string preimage_claim(const GraphOfGroups& src, const GraphOfGroups& tgt) {
  return "FJCw(q^{-1}(C), q:pi1" + gog_term(src) + "->pi1" + gog_term(tgt) +
         ")";
}

// Projection of G onto G / max finite normal subgroup as a checked hom onto
// the canonical model: the finite part dies, translation data survives.
VCHom projection_mod_finite_hom(const VCGroupPtr& g, const VCGroupPtr& model) {
  std::vector<VCElement> fin(g->finite_part()->generators_or_all().size(),
                             model->identity_elt());
  std::vector<VCElement> extra;
  if (g->variant() == VCClass::Orientable) {
    extra.push_back(project_mod_finite(*g, g->t_elt()));
  } else if (g->variant() == VCClass::Nonorientable) {
    extra.push_back(project_mod_finite(*g, g->a_elt()));
    extra.push_back(project_mod_finite(*g, g->b_elt()));
  }
  return VCHom::make(g, model, fin, extra);
}

// Projection of a Z / D-infinity model onto its quotient by the maximal
// infinite cyclic subgroup (the trivial group or Z/2), wrapped as a VCHom.
VCHom projection_mod_cyclic_hom(const VCGroupPtr& g, const VCGroupPtr& target) {
  std::vector<VCElement> extra;
  if (g->variant() == VCClass::Orientable) {
    extra.push_back(target->from_finite(project_mod_max_cyclic(*g, g->t_elt())));
  } else {
    extra.push_back(target->from_finite(project_mod_max_cyclic(*g, g->a_elt())));
    extra.push_back(target->from_finite(project_mod_max_cyclic(*g, g->b_elt())));
  }
  return VCHom::make(g, target, {}, extra);
}

// Rebuilds an induced quotient map over the caller's chosen model objects so
// the resulting graph of groups shares group pointers with its monos.
VCHom rebuild_model_mono(const VCHom& induced, const VCGroupPtr& src_model,
                         const VCGroupPtr& tgt_model) {
  require_internal(src_model->is_infinite(),
                   "induced edge mono must start at an infinite model");
  std::vector<VCElement> extra;
  if (src_model->variant() == VCClass::Orientable) {
    extra.push_back(induced.t_img);
  } else {
    extra.push_back(induced.a_img);
    extra.push_back(induced.b_img);
  }
  return VCHom::make(src_model, tgt_model, {}, extra);
}

int eccentricity_from(const Graph& g, int base) {
  std::vector<int> dist(static_cast<size_t>(g.vertex_count()), -1);
  std::deque<int> queue{base};
  dist[static_cast<size_t>(base)] = 0;
  int ecc = 0;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    ecc = std::max(ecc, dist[static_cast<size_t>(v)]);
    for (int e : g.out_edges(v)) {
      const int w = g.tau(e);
      if (dist[static_cast<size_t>(w)] < 0) {
        dist[static_cast<size_t>(w)] = dist[static_cast<size_t>(v)] + 1;
        queue.push_back(w);
      }
    }
  }
  return ecc;
}

}  // namespace

// ---------------------------------------------------------------------------
// Quotient constructions.

CheckReport verify_edge_kernel_is_max_finite_normal(const GraphOfGroups& gog,
                                                    int e) {
  const Graph& gr = gog.graph;
  if (e < 0 || e >= gr.oriented_edge_count())
    fail(ErrorCode::UnknownEdge,
         "oriented edge index " + std::to_string(e) + " out of range");
  const VCGroupPtr& ge = gog.edge_group(e);
  if (!ge->is_infinite())
    fail(ErrorCode::EdgeGroupFinite,
         "edge " + gr.edge_id(e) +
             " has a finite group; the kernel identity only concerns "
             "infinite edge groups");
  const VCGroupPtr& gv = gog.vertex_group(gr.iota(e));
  const FiniteSubgroup lhs =
      preimage_of_subgroup(gog.mono(e), max_finite_normal(*gv).subgroup);
  const FiniteSubgroup rhs = max_finite_normal(*ge).subgroup;
  if (lhs == rhs) {
    return CheckReport{true,
                       "edge " + gr.edge_id(e) +
                           ": the mono preimage of the vertex maximal finite "
                           "normal subgroup equals the edge group's own "
                           "(order " + std::to_string(rhs.order()) + ")"};
  }
  std::ostringstream os;
  os << "edge " << gr.edge_id(e)
     << ": mono preimage of the vertex maximal finite normal subgroup has "
        "order "
     << lhs.order() << " {";
  for (size_t i = 0; i < lhs.members.size(); ++i)
    os << (i ? "," : "") << lhs.members[i];
  os << "} but the edge group's maximal finite normal subgroup has order "
     << rhs.order() << " {";
  for (size_t i = 0; i < rhs.members.size(); ++i)
    os << (i ? "," : "") << rhs.members[i];
  os << "}";
  fail(ErrorCode::ClaimViolated, os.str());
}

QuotientResult quotient_by_max_finite_normal(const GraphOfGroups& gog) {
  validate(gog, /*strict=*/true);
  const Graph& gr = gog.graph;
  for (int e = 0; e < gr.oriented_edge_count(); ++e)
    if (!gog.edge_group(e)->is_infinite())
      fail(ErrorCode::EdgeGroupFinite,
           "edge " + gr.edge_id(e) +
               " has a finite group; split finite edges off before taking "
               "the quotient by maximal finite normal subgroups");
  // Well-definedness of the edge quotients, from both endpoints.
  for (int e = 0; e < gr.oriented_edge_count(); ++e)
    verify_edge_kernel_is_max_finite_normal(gog, e);

  std::vector<std::pair<std::string, VCGroupPtr>> vertices;
  std::vector<VCGroupPtr> vq(static_cast<size_t>(gr.vertex_count()));
  std::vector<VCHom> vproj;
  for (int v = 0; v < gr.vertex_count(); ++v) {
    vq[static_cast<size_t>(v)] =
        quotient_by_max_finite(gog.vertex_group(v)).model_group;
    vproj.push_back(projection_mod_finite_hom(gog.vertex_group(v),
                                              vq[static_cast<size_t>(v)]));
    vertices.emplace_back(gr.vertex_id(v), vq[static_cast<size_t>(v)]);
  }

  std::vector<GeometricEdgeData> edges;
  std::vector<VCHom> eproj;
  eproj.reserve(static_cast<size_t>(gr.oriented_edge_count()));
  for (int e = 0; e < gr.oriented_edge_count(); ++e) eproj.push_back(vproj[0]);
  for (int e = 0; e < gr.oriented_edge_count(); e += 2) {
    const VCGroupPtr eq = quotient_by_max_finite(gog.edge_group(e)).model_group;

    const InducedQuotientHom from = induced_hom_on_quotients(gog.mono(e));
    const InducedQuotientHom to = induced_hom_on_quotients(gog.mono(e ^ 1));
    VCHom m_from = rebuild_model_mono(
        from.hom, eq, vq[static_cast<size_t>(gr.iota(e))]);
    VCHom m_to =
        rebuild_model_mono(to.hom, eq, vq[static_cast<size_t>(gr.tau(e))]);
    if (!from.injective || !vc_hom_is_injective(m_from))
      fail(ErrorCode::InducedMapNotInjective,
           "edge " + gr.edge_id(e) + ": induced map on quotients by maximal "
                                     "finite normal subgroups is not injective");
    if (!to.injective || !vc_hom_is_injective(m_to))
      fail(ErrorCode::InducedMapNotInjective,
           "edge " + gr.edge_id(e) + " (reversed): induced map on quotients "
                                     "by maximal finite normal subgroups is "
                                     "not injective");

    edges.push_back(GeometricEdgeData{gr.edge_id(e),
                                      gr.vertex_id(gr.iota(e)),
                                      gr.vertex_id(gr.tau(e)), eq, m_from,
                                      m_to});
    const VCHom pe = projection_mod_finite_hom(gog.edge_group(e), eq);
    eproj[static_cast<size_t>(e)] = pe;
    eproj[static_cast<size_t>(e ^ 1)] = pe;
  }

  GraphOfGroups q = make_graph_of_groups(vertices, edges);
  InducedHom ind = InducedHom::quotient(gog, q, vproj);
  return QuotientResult{std::move(q), std::move(vproj), std::move(eproj),
                        std::move(ind)};
}

QuotientResult quotient_by_max_infinite_cyclic(const GraphOfGroups& gog) {
  validate(gog, /*strict=*/true);
  const Graph& gr = gog.graph;
  for (int v = 0; v < gr.vertex_count(); ++v) {
    const VCGroupPtr& g = gog.vertex_group(v);
    if (!g->is_infinite() || g->finite_part()->order() != 1)
      fail(ErrorCode::VertexNotZorDinfty,
           "vertex " + gr.vertex_id(v) +
               " must carry an infinite group with trivial finite part; take "
               "the quotient by maximal finite normal subgroups first");
  }
  for (int e = 0; e < gr.oriented_edge_count(); ++e) {
    const VCGroupPtr& g = gog.edge_group(e);
    if (!g->is_infinite())
      fail(ErrorCode::EdgeGroupFinite,
           "edge " + gr.edge_id(e) + " has a finite group");
    if (g->finite_part()->order() != 1)
      fail(ErrorCode::NotZorDinfty,
           "edge " + gr.edge_id(e) +
               " carries an infinite group with nontrivial finite part; it "
               "cannot embed in a vertex group with trivial finite part");
  }

  std::vector<std::pair<std::string, VCGroupPtr>> vertices;
  std::vector<VCGroupPtr> vq(static_cast<size_t>(gr.vertex_count()));
  std::vector<VCHom> vproj;
  for (int v = 0; v < gr.vertex_count(); ++v) {
    const VCGroupPtr& g = gog.vertex_group(v);
    vq[static_cast<size_t>(v)] =
        VCGroup::finite(quotient_by_max_infinite_cyclic_group(*g).group);
    vproj.push_back(projection_mod_cyclic_hom(g, vq[static_cast<size_t>(v)]));
    vertices.emplace_back(gr.vertex_id(v), vq[static_cast<size_t>(v)]);
  }

  std::vector<GeometricEdgeData> edges;
  std::vector<VCHom> eproj;
  for (int e = 0; e < gr.oriented_edge_count(); ++e) eproj.push_back(vproj[0]);
  for (int e = 0; e < gr.oriented_edge_count(); e += 2) {
    const VCGroupPtr& ge = gog.edge_group(e);
    const VCGroupPtr eq =
        VCGroup::finite(quotient_by_max_infinite_cyclic_group(*ge).group);

    auto induced_mono = [&](int oe) {
      const InducedCyclicQuotientHom ind =
          induced_hom_mod_max_cyclic(gog.mono(oe));
      const VCGroupPtr& tgt = vq[static_cast<size_t>(gr.iota(oe))];
      std::vector<VCElement> fin;
      for (Elt gen : eq->finite_part()->generators_or_all())
        fin.push_back(tgt->from_finite(ind.hom.images[static_cast<size_t>(gen)]));
      VCHom m = VCHom::make(eq, tgt, fin, {});
      if (!ind.injective || !vc_hom_is_injective(m))
        fail(ErrorCode::InducedMapNotInjective,
             "edge " + gr.edge_id(oe) +
                 ": induced map on quotients by maximal infinite cyclic "
                 "subgroups is not injective");
      return m;
    };
    VCHom m_from = induced_mono(e);
    VCHom m_to = induced_mono(e ^ 1);
    edges.push_back(GeometricEdgeData{gr.edge_id(e),
                                      gr.vertex_id(gr.iota(e)),
                                      gr.vertex_id(gr.tau(e)), eq, m_from,
                                      m_to});
    const VCHom pe = projection_mod_cyclic_hom(ge, eq);
    eproj[static_cast<size_t>(e)] = pe;
    eproj[static_cast<size_t>(e ^ 1)] = pe;
  }

  GraphOfGroups q = make_graph_of_groups(vertices, edges);
  InducedHom ind = InducedHom::quotient(gog, q, vproj);
  return QuotientResult{std::move(q), std::move(vproj), std::move(eproj),
                        std::move(ind)};
}

// ---------------------------------------------------------------------------
// Kernel classification.

StabilizerClass kernel_vertex_stabilizer_class(const InducedHom& q, int v) {
  if (q.kind != InducedHom::Kind::QQuotient)
    fail(ErrorCode::ProjectionMismatch,
         "kernel classification needs a quotient datum, not the free "
         "retraction");
  const Graph& gr = q.source.graph;
  if (v < 0 || v >= gr.vertex_count())
    fail(ErrorCode::UnknownVertex,
         "vertex index " + std::to_string(v) + " out of range");
  const VCGroupPtr& g = q.source.vertex_group(v);
  const VCHom& m = q.vertex_maps[static_cast<size_t>(v)];
  const VCElement target_id = m.target->identity_elt();

  StabilizerClass out;
  if (!g->is_infinite()) {
    out.kind = StabilizerClass::Kind::FiniteEqualTo;
    for (Elt f = 0; f < g->finite_part()->order(); ++f)
      if (m(g->from_finite(f)) == target_id)
        out.finite_elements.push_back(g->from_finite(f));
    return out;
  }

  const VCElement t = g->t_elt();
  const std::optional<int> image_order = vc_order(*m.target, m(t));
  if (!image_order) {
    // The translation generator survives with infinite order, so no element
    // with a nonzero translation or a reflection can die: conjugating the
    // translation by a kernel reflection would force m(t) to finite order.
    // The kernel therefore sits inside the maximal finite normal subgroup.
    out.kind = StabilizerClass::Kind::FiniteEqualTo;
    for (const VCElement& x : max_finite_normal_elements(*g))
      if (m(x) == target_id) out.finite_elements.push_back(x);
    return out;
  }

  // m(t) has finite order k, so t^k dies and the kernel meets every coset of
  // <t^k> in at most one residue.  The class is infinite cyclic exactly when
  // the identity residue is the only one that dies.
  const long long k = *image_order;
  out.kind = StabilizerClass::Kind::InfiniteCyclic;
  out.generator = g->pow(t, k);
  require_internal(m(out.generator) == target_id,
                   "power of the translation by its image order must die");
  const Elt id = g->finite_part()->identity();
  const int max_eps = g->variant() == VCClass::Nonorientable ? 1 : 0;
  for (Elt f = 0; f < g->finite_part()->order(); ++f)
    for (long long n = 0; n < k; ++n)
      for (int eps = 0; eps <= max_eps; ++eps) {
        const VCElement x{f, n, eps};
        g->check_elt(x);
        const bool dies = m(x) == target_id;
        const bool is_identity_residue = (f == id && n == 0 && eps == 0);
        if (dies && !is_identity_residue)
          fail(ErrorCode::KernelClassMismatch,
               "kernel at vertex " + gr.vertex_id(v) +
                   " contains the residue " + element_text(*g, x) +
                   " outside the translation subgroup, so it is not "
                   "infinite cyclic");
      }
  return out;
}

// ---------------------------------------------------------------------------
// Normal cyclic subgroups and the wreath embedding.

NormalCyclicSubgroup normal_cyclic_finder(const VCGroupPtr& g) {
  if (!g->is_infinite())
    fail(ErrorCode::GroupFinite,
         "a finite group has no finite-index infinite cyclic subgroup");
  const Elt id = g->finite_part()->identity();
  const long long fo = g->finite_part()->order();

  auto stable_under_conjugation = [&](const VCElement& t) {
    for (const VCElement& s : g->generator_elts()) {
      const VCElement c = g->conj(s, t);
      if (!(c.f == id && c.eps == 0 && (c.n == t.n || c.n == -t.n)))
        return false;
    }
    return true;
  };
  auto checked = [&](const VCElement& t, long long index) {
    // Independent cross-check of the index through the image-index machinery.
    const VCHom emb = VCHom::make(VCGroup::z_model(), g, {}, {t});
    const std::optional<long long> idx = vc_image_index(emb);
    require_internal(idx && *idx == index,
                     "normal cyclic subgroup index cross-check failed");
    return NormalCyclicSubgroup{t, index};
  };

  if (g->variant() == VCClass::Orientable) {
    const long long k = g->alpha_order();
    const VCElement t = g->pow(g->t_elt(), k);
    if (!stable_under_conjugation(t))
      fail(ErrorCode::NotNormalCyclic,
           "the translation power by the twisting order is not "
           "conjugation-stable");
    return checked(t, k * fo);
  }

  // Two-reflection model: start from the power that acts trivially on the
  // core and grow until the reflections conjugate it to its exact inverse.
  const long long k0 = g->phi_tau_order();
  for (long long d = 1; d <= 4 * fo * fo + 4; ++d) {
    const VCElement t = g->pow(g->t_elt(), k0 * d);
    if (stable_under_conjugation(t)) return checked(t, 2 * fo * k0 * d);
  }
  fail(ErrorCode::NotNormalCyclic,
       "no conjugation-stable translation power found within the search "
       "bound");
}

namespace {

void check_wreath(const WreathElement& x) {
  if (x.vec.size() != x.perm.size())
    fail(ErrorCode::ElementOutOfRange,
         "wreath element has mismatched vector and permutation sizes");
  std::vector<char> seen(x.perm.size(), 0);
  for (int p : x.perm) {
    if (p < 0 || p >= static_cast<int>(x.perm.size()) || seen[static_cast<size_t>(p)])
      fail(ErrorCode::ElementOutOfRange,
           "wreath element permutation is not a bijection");
    seen[static_cast<size_t>(p)] = 1;
  }
}

}  // namespace

WreathElement wreath_identity(int m) {
  WreathElement e;
  e.vec.assign(static_cast<size_t>(m), 0);
  e.perm.resize(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) e.perm[static_cast<size_t>(j)] = j;
  return e;
}

WreathElement wreath_mul(const WreathElement& x, const WreathElement& y) {
  check_wreath(x);
  check_wreath(y);
  if (x.perm.size() != y.perm.size())
    fail(ErrorCode::ElementOutOfRange,
         "wreath elements live in different wreath products");
  const size_t m = x.perm.size();
  WreathElement r;
  r.vec.resize(m);
  r.perm.resize(m);
  for (size_t j = 0; j < m; ++j) {
    const size_t mid = static_cast<size_t>(y.perm[j]);
    r.perm[j] = x.perm[mid];
    r.vec[j] = x.vec[mid] + y.vec[j];
  }
  return r;
}

WreathElement wreath_inverse(const WreathElement& x) {
  check_wreath(x);
  const size_t m = x.perm.size();
  WreathElement r;
  r.vec.resize(m);
  r.perm.resize(m);
  for (size_t i = 0; i < m; ++i) {
    const size_t j = static_cast<size_t>(x.perm[i]);
    r.perm[j] = static_cast<int>(i);
    r.vec[j] = -x.vec[i];
  }
  return r;
}

namespace {

// g = r_i · t^a for a transversal member r_i: returns (i, a) and demands the
// decomposition be unique across the transversal.
std::pair<int, long long> decompose_over_transversal(
    const VCGroup& g, const std::vector<VCElement>& transversal,
    const VCElement& t, const VCElement& x) {
  int slot = -1;
  long long exponent = 0;
  for (size_t i = 0; i < transversal.size(); ++i) {
    const VCElement z = g.mul(g.inv(transversal[i]), x);
    if (z.f != g.finite_part()->identity() || z.eps != 0) continue;
    if (z.n % t.n != 0) continue;
    require_internal(slot < 0, "coset transversal members must be disjoint");
    slot = static_cast<int>(i);
    exponent = z.n / t.n;
  }
  require_internal(slot >= 0, "element escaped the coset transversal");
  return {slot, exponent};
}

}  // namespace

WreathEmbedding wreath_embed(const VCGroupPtr& g, const VCElement& t,
                             long long m) {
  if (!g->is_infinite())
    fail(ErrorCode::GroupFinite,
         "only infinite groups embed along a finite-index cyclic subgroup");
  g->check_elt(t);
  const Elt id = g->finite_part()->identity();
  if (t.f != id || t.eps != 0 || t.n == 0)
    fail(ErrorCode::NotNormalCyclic,
         "the subgroup generator must be a nontrivial pure translation, got " +
             element_text(*g, t));
  for (const VCElement& s : g->generator_elts()) {
    const VCElement c = g->conj(s, t);
    if (c != t && c != g->inv(t))
      fail(ErrorCode::NotNormalCyclic,
           "conjugation by " + element_text(*g, s) + " sends " +
               element_text(*g, t) + " to " + element_text(*g, c) +
               ", which leaves the cyclic subgroup");
  }

  const long long k = t.n < 0 ? -t.n : t.n;
  const int max_eps = g->variant() == VCClass::Nonorientable ? 1 : 0;
  const long long count =
      static_cast<long long>(g->finite_part()->order()) * k * (max_eps + 1);
  if (count != m)
    fail(ErrorCode::NotNormalCyclic,
         "the cyclic subgroup has index " + std::to_string(count) + ", not " +
             std::to_string(m));

  WreathEmbedding emb;
  emb.source = g;
  emb.t = t;
  emb.index = m;
  for (Elt f = 0; f < g->finite_part()->order(); ++f)
    for (long long n = 0; n < k; ++n)
      for (int eps = 0; eps <= max_eps; ++eps) {
        const VCElement rep{f, n, eps};
        g->check_elt(rep);
        emb.transversal.push_back(rep);
      }
  require_internal(static_cast<long long>(emb.transversal.size()) == m,
                   "transversal size must equal the subgroup index");
  for (const VCElement& s : g->generator_elts())
    emb.generator_images.emplace_back(s, wreath_image(emb, s));
  return emb;
}

WreathElement wreath_image(const WreathEmbedding& emb, const VCElement& x) {
  const VCGroup& g = *emb.source;
  g.check_elt(x);
  WreathElement r;
  r.vec.resize(emb.transversal.size());
  r.perm.resize(emb.transversal.size());
  for (size_t j = 0; j < emb.transversal.size(); ++j) {
    const VCElement moved = g.mul(x, emb.transversal[j]);
    const auto [slot, exponent] =
        decompose_over_transversal(g, emb.transversal, emb.t, moved);
    r.perm[j] = slot;
    r.vec[j] = exponent;
  }
  check_wreath(r);
  return r;
}

// ---------------------------------------------------------------------------
// Certificates.

std::string certificate_node_hash(const CertificateNode& n) {
  std::ostringstream os;
  os << n.claim << '\n' << n.rule << '\n';
  for (size_t i = 0; i < n.premises.size(); ++i)
    os << (i ? "," : "") << n.premises[i];
  os << '\n' << n.side;
  return fnv_hex(os.str());
}

namespace {

struct CertBuilder {
  Certificate cert;
  std::map<std::string, int> dedup;  // exact content key -> node index

  int add(std::string claim, std::string rule, std::vector<int> premises,
          const json& side) {
    CertificateNode n;
    n.claim = std::move(claim);
    n.rule = std::move(rule);
    n.premises = std::move(premises);
    n.side = side.dump();
    for (int p : n.premises)
      require_internal(p >= 0 && p < static_cast<int>(cert.nodes.size()),
                       "certificate premises must point at earlier nodes");
    std::string key = n.claim + '\0' + n.rule + '\0';
    for (int p : n.premises) key += std::to_string(p) + ',';
    key += '\0' + n.side;
    const auto it = dedup.find(key);
    if (it != dedup.end()) return it->second;
    n.hash = certificate_node_hash(n);
    cert.nodes.push_back(std::move(n));
    const int idx = static_cast<int>(cert.nodes.size()) - 1;
    dedup.emplace(std::move(key), idx);
    return idx;
  }
};

// Side-condition data for the tree test: the free-retraction quotient of a
// ball must reproduce the unfolded universal cover of the underlying graph.
json tree_check_side(const GraphOfGroups& gog, int radius) {
  const TreeBall bl = ball(gog, 0, radius);
  const QuotientBall qb = truncate_to_radius(
      quotient_ball_by_kernel(bl, InducedHom::phi_free(gog)), radius);
  const UnfoldedBall ub = unfold_universal_cover(gog.graph, 0, radius);
  if (!is_tree(qb) || !quotient_matches_unfolding(qb, ub))
    fail(ErrorCode::SideConditionFailed,
         "the free-retraction quotient of the radius-" +
             std::to_string(radius) +
             " ball does not match the unfolded universal cover");
  return json{{"radius", radius},
              {"quotient_is_tree", true},
              {"matches_unfolding", true}};
}

// Side-condition data for a proper cocompact action: finite vertex groups
// and a ball deep enough to cover every orbit of vertices and edges.
json proper_cocompact_side(const GraphOfGroups& gog) {
  const Graph& gr = gog.graph;
  for (int v = 0; v < gr.vertex_count(); ++v)
    if (gog.vertex_group(v)->is_infinite())
      fail(ErrorCode::SideConditionFailed,
           "proper cocompact leaf needs finite vertex groups, but vertex " +
               gr.vertex_id(v) + " is infinite");
  const int radius = std::max(3, eccentricity_from(gr, 0) + 1);
  const TreeBall bl = ball(gog, 0, radius);
  std::set<int> stab_orders, vseen, eseen;
  json vertex_orders = json::array();
  for (int v = 0; v < gr.vertex_count(); ++v)
    vertex_orders.push_back(gog.vertex_group(v)->finite_part()->order());
  for (const TreeVertex& x : bl.vertices) {
    vseen.insert(x.label);
    stab_orders.insert(gog.vertex_group(x.label)->finite_part()->order());
  }
  for (const TreeBallEdge& e : bl.edges) eseen.insert(e.edge >> 1);
  if (static_cast<int>(vseen.size()) != gr.vertex_count() ||
      static_cast<int>(eseen.size()) != gr.geometric_edge_count())
    fail(ErrorCode::SideConditionFailed,
         "the radius-" + std::to_string(radius) +
             " ball does not cover every vertex and edge orbit");
  json orders = json::array();
  for (int o : stab_orders) orders.push_back(o);
  return json{{"kind", "proper-cocompact"},
              {"ball_radius", radius},
              {"ball_vertices", static_cast<int>(bl.vertices.size())},
              {"stabilizer_orders", orders},
              {"vertex_group_orders", vertex_orders},
              {"all_stabilizers_finite", true},
              {"quotient_covers_graph", true}};
}

// Derivation for a graph of groups whose vertex groups are Z / D-infinity
// models: quotient by the maximal infinite cyclic subgroups, certify the
// finite-vertex quotient by its tree action, and record the kernel and
// preimage classes.
int cert_case_models(CertBuilder& b, const GraphOfGroups& gz) {
  const Graph& gr = gz.graph;
  QuotientResult qr = quotient_by_max_infinite_cyclic(gz);

  const int cocompact = b.add(fjcw_claim(qr.quotient), "R5", {},
                              proper_cocompact_side(qr.quotient));

  json vclasses = json::array();
  for (int v = 0; v < gr.vertex_count(); ++v) {
    const StabilizerClass sc = kernel_vertex_stabilizer_class(qr.induced, v);
    if (sc.kind != StabilizerClass::Kind::InfiniteCyclic)
      fail(ErrorCode::SideConditionFailed,
           "kernel at vertex " + gr.vertex_id(v) +
               " is not infinite cyclic");
    vclasses.push_back(
        json{{"vertex", gr.vertex_id(v)},
             {"class", "infinite-cyclic"},
             {"generator", element_text(*gz.vertex_group(v), sc.generator)}});
  }
  const int kernel_leaf =
      b.add(kernel_claim(gz, qr.quotient), "R7", {},
            json{{"kind", "kernel-graph-of-infinite-cyclic"},
                 {"vertex_classes", vclasses}});

  json orders = json::array();
  for (int v = 0; v < qr.quotient.graph.vertex_count(); ++v) {
    const VCGroupPtr& g = qr.quotient.vertex_group(v);
    if (g->is_infinite())
      fail(ErrorCode::SideConditionFailed,
           "preimage leaf needs finite target vertex groups");
    orders.push_back(g->finite_part()->order());
  }
  const int preimage_leaf = b.add(preimage_claim(gz, qr.quotient), "R7", {},
                                  json{{"kind", "preimage-cyclic"},
                                       {"vertex_groups_finite", true},
                                       {"vertex_group_orders", orders}});

  return b.add(fjcw_claim(gz), "R4", {cocompact, kernel_leaf, preimage_leaf},
               json{{"kind", "max-infinite-cyclic-quotient"},
                    {"q_claim", b.cert.nodes[static_cast<size_t>(cocompact)].claim},
                    {"kernel_claim",
                     b.cert.nodes[static_cast<size_t>(kernel_leaf)].claim},
                    {"preimage_claim",
                     b.cert.nodes[static_cast<size_t>(preimage_leaf)].claim},
                    {"induced_monos_injective", true}});
}

// Derivation for a reduction leaf: all edge groups infinite.
int cert_leaf(CertBuilder& b, const GraphOfGroups& leaf) {
  const Graph& gr = leaf.graph;
  if (gr.vertex_count() == 1 && gr.geometric_edge_count() == 0) {
    const VCGroupPtr& g = leaf.vertex_group(0);
    if (!g->is_infinite())
      return b.add(fjcw_claim(leaf), "Axiom(Finite)", {},
                   json{{"kind", "finite-group"},
                        {"order", g->finite_part()->order()}});
    return b.add(
        fjcw_claim(leaf), "Axiom(VirtuallyCyclic)", {},
        json{{"kind", "virtually-cyclic"},
             {"variant", g->variant() == VCClass::Orientable
                             ? "orientable"
                             : "nonorientable"},
             {"finite_part_order", g->finite_part()->order()}});
  }
  for (int e = 0; e < gr.oriented_edge_count(); ++e)
    require_internal(leaf.edge_group(e)->is_infinite(),
                     "edge reduction must leave only infinite edge groups");

  bool models = true;
  for (int v = 0; v < gr.vertex_count(); ++v) {
    const VCGroupPtr& g = leaf.vertex_group(v);
    if (!g->is_infinite() || g->finite_part()->order() != 1) models = false;
  }
  if (models) return cert_case_models(b, leaf);

  // Quotient away the maximal finite normal subgroups, certify the model
  // quotient, and attach the machine-checked kernel and preimage leaves.
  QuotientResult qr = quotient_by_max_finite_normal(leaf);
  const int quotient_node = cert_case_models(b, qr.quotient);

  json vclasses = json::array();
  for (int v = 0; v < gr.vertex_count(); ++v) {
    const StabilizerClass sc = kernel_vertex_stabilizer_class(qr.induced, v);
    if (sc.kind != StabilizerClass::Kind::FiniteEqualTo)
      fail(ErrorCode::SideConditionFailed,
           "kernel at vertex " + gr.vertex_id(v) + " is not finite");
    std::vector<VCElement> expect =
        max_finite_normal_elements(*leaf.vertex_group(v));
    std::vector<VCElement> got = sc.finite_elements;
    std::sort(expect.begin(), expect.end());
    std::sort(got.begin(), got.end());
    require_internal(expect == got,
                     "kernel of the finite-part projection must be the "
                     "maximal finite normal subgroup");
    vclasses.push_back(json{{"vertex", gr.vertex_id(v)},
                            {"class", "finite-equal-to-max-finite-normal"},
                            {"order", static_cast<int>(got.size())}});
  }
  json echecks = json::array();
  for (int e = 0; e < gr.oriented_edge_count(); ++e) {
    const CheckReport cr = verify_edge_kernel_is_max_finite_normal(leaf, e);
    echecks.push_back(json{{"edge", gr.edge_id(e)},
                           {"direction", gr.is_forward(e) ? "forward" : "reverse"},
                           {"ok", cr.ok}});
  }
  const int kernel_leaf =
      b.add(kernel_claim(leaf, qr.quotient), "Axiom(ColimitOfCat0)", {},
            json{{"kind", "kernel-graph-of-finite"},
                 {"vertex_classes", vclasses},
                 {"edge_kernel_checks", echecks}});

  const int preimage_leaf =
      b.add(preimage_claim(leaf, qr.quotient), "Axiom(PreimageBranches)", {},
            json{{"kind", "preimage-branches"},
                 {"tree_check", tree_check_side(leaf, 3)},
                 {"stabilizers", "finite-or-virtually-cyclic"}});

  return b.add(
      fjcw_claim(leaf), "R4", {quotient_node, kernel_leaf, preimage_leaf},
      json{{"kind", "max-finite-normal-quotient"},
           {"q_claim", b.cert.nodes[static_cast<size_t>(quotient_node)].claim},
           {"kernel_claim", b.cert.nodes[static_cast<size_t>(kernel_leaf)].claim},
           {"preimage_claim",
            b.cert.nodes[static_cast<size_t>(preimage_leaf)].claim},
           {"induced_monos_injective", true}});
}

int cert_decomp(CertBuilder& b, const GraphOfGroups& cur,
                const EdgeReduction& red, int node_index) {
  const DecompositionNode& dn =
      red.tree.nodes[static_cast<size_t>(node_index)];
  if (dn.kind == DecompositionNode::Kind::Leaf) {
    require_internal(
        gog_term(red.leaves[static_cast<size_t>(dn.leaf_index)]) ==
            gog_term(cur),
        "decomposition replay must arrive at the recorded leaf");
    return cert_leaf(b, cur);
  }
  require_internal(!dn.edge_group->is_infinite(),
                   "splitting steps happen along finite edge groups");
  const SplitResult sr = split_along_finite_edge(cur, dn.edge_id);
  if (dn.kind == DecompositionNode::Kind::Amalgam) {
    require_internal(sr.is_amalgam, "recorded amalgam step must disconnect");
    const int left = cert_decomp(b, sr.part1, red, dn.children[0]);
    const int right = cert_decomp(b, sr.part2, red, dn.children[1]);
    return b.add(
        fjcw_claim(cur), "R8", {left, right},
        json{{"kind", "amalgam"},
             {"edge", dn.edge_id},
             {"edge_group_order", dn.edge_group->finite_part()->order()},
             {"edge_group_finite", true},
             {"left_claim", b.cert.nodes[static_cast<size_t>(left)].claim},
             {"right_claim", b.cert.nodes[static_cast<size_t>(right)].claim}});
  }
  require_internal(!sr.is_amalgam, "recorded stable-letter step must keep "
                                   "the graph connected");
  const int inner = cert_decomp(b, sr.part1, red, dn.children[0]);
  return b.add(
      fjcw_claim(cur), "R8", {inner},
      json{{"kind", "hnn"},
           {"edge", dn.edge_id},
           {"edge_group_order", dn.edge_group->finite_part()->order()},
           {"edge_group_finite", true},
           {"inner_claim", b.cert.nodes[static_cast<size_t>(inner)].claim}});
}

}  // namespace

Certificate certify_fjcw(const GraphOfGroups& gog) {
  validate(gog, /*strict=*/true);
  CertBuilder b;
  const EdgeReduction red = infinite_edge_reduction(gog);
  b.cert.root = cert_decomp(b, gog, red, red.tree.root);
  return std::move(b.cert);
}

// ---------------------------------------------------------------------------
// Certificate checking: structure, hashes, rule shapes and recorded side
// conditions.  No group theory is recomputed here.

namespace {

bool flag_true(const json& side, const char* key) {
  return side.contains(key) && side[key].is_boolean() && side[key].get<bool>();
}

bool int_at_least(const json& side, const char* key, long long minimum) {
  return side.contains(key) && side[key].is_number_integer() &&
         side[key].get<long long>() >= minimum;
}

}  // namespace

ValidationReport check_certificate(const Certificate& c) {
  ValidationReport rep;
  auto bad = [&rep](ErrorCode code, int i, const std::string& msg) {
    rep.problems.push_back(
        ValidationProblem{code, "node " + std::to_string(i) + ": " + msg});
  };
  const int n = static_cast<int>(c.nodes.size());
  if (n == 0) {
    rep.problems.push_back(
        ValidationProblem{ErrorCode::RuleShapeMismatch,
                          "certificate has no nodes"});
    return rep;
  }
  if (c.root < 0 || c.root >= n)
    rep.problems.push_back(ValidationProblem{
        ErrorCode::RuleShapeMismatch,
        "root index " + std::to_string(c.root) + " out of range"});

  for (int i = 0; i < n; ++i) {
    const CertificateNode& node = c.nodes[static_cast<size_t>(i)];
    if (certificate_node_hash(node) != node.hash)
      bad(ErrorCode::HashMismatch, i,
          "recorded hash does not match the node content");
    if (node.claim.empty())
      bad(ErrorCode::RuleShapeMismatch, i, "empty claim");

    bool premises_ok = true;
    for (int p : node.premises) {
      if (p < 0 || p >= n) {
        bad(ErrorCode::RuleShapeMismatch, i,
            "premise index " + std::to_string(p) + " out of range");
        premises_ok = false;
      } else if (p >= i) {
        bad(ErrorCode::CycleDetected, i,
            "premise " + std::to_string(p) + " does not precede the node");
        premises_ok = false;
      }
    }

    const json side = json::parse(node.side, nullptr, false);
    if (side.is_discarded() || !side.is_object()) {
      bad(ErrorCode::SideConditionFailed, i, "side data is not a JSON object");
      continue;
    }
    const std::string kind = side.value("kind", "");
    auto premise_claim_is = [&](const char* key, size_t which) {
      if (!premises_ok || which >= node.premises.size()) return false;
      if (!side.contains(key) || !side[key].is_string()) return false;
      const int p = node.premises[which];
      return side[key].get<std::string>() ==
             c.nodes[static_cast<size_t>(p)].claim;
    };

    if (node.rule == "R4") {
      if (node.premises.size() != 3) {
        bad(ErrorCode::RuleShapeMismatch, i,
            "quotient steps take exactly three premises");
        continue;
      }
      if (kind != "max-finite-normal-quotient" &&
          kind != "max-infinite-cyclic-quotient") {
        bad(ErrorCode::RuleShapeMismatch, i,
            "unexpected side kind '" + kind + "' for a quotient step");
        continue;
      }
      if (!premise_claim_is("q_claim", 0))
        bad(ErrorCode::RuleShapeMismatch, i,
            "q_claim does not match the first premise");
      if (!premise_claim_is("kernel_claim", 1))
        bad(ErrorCode::RuleShapeMismatch, i,
            "kernel_claim does not match the second premise");
      if (!premise_claim_is("preimage_claim", 2))
        bad(ErrorCode::RuleShapeMismatch, i,
            "preimage_claim does not match the third premise");
      if (!flag_true(side, "induced_monos_injective"))
        bad(ErrorCode::SideConditionFailed, i,
            "induced edge maps are not recorded injective");
    } else if (node.rule == "R8") {
      if (kind == "amalgam") {
        if (node.premises.size() != 2) {
          bad(ErrorCode::RuleShapeMismatch, i,
              "amalgam steps take exactly two premises");
          continue;
        }
        if (!premise_claim_is("left_claim", 0) ||
            !premise_claim_is("right_claim", 1))
          bad(ErrorCode::RuleShapeMismatch, i,
              "amalgam side claims do not match the premises");
      } else if (kind == "hnn") {
        if (node.premises.size() != 1) {
          bad(ErrorCode::RuleShapeMismatch, i,
              "stable-letter steps take exactly one premise");
          continue;
        }
        if (!premise_claim_is("inner_claim", 0))
          bad(ErrorCode::RuleShapeMismatch, i,
              "inner claim does not match the premise");
      } else {
        bad(ErrorCode::RuleShapeMismatch, i,
            "unexpected side kind '" + kind + "' for a splitting step");
        continue;
      }
      if (!flag_true(side, "edge_group_finite"))
        bad(ErrorCode::SideConditionFailed, i,
            "splitting steps need a finite edge group");
      if (!int_at_least(side, "edge_group_order", 1))
        bad(ErrorCode::SideConditionFailed, i,
            "splitting steps record a positive edge group order");
    } else if (node.rule == "R5") {
      if (!node.premises.empty()) {
        bad(ErrorCode::RuleShapeMismatch, i, "tree-action leaves take no premises");
        continue;
      }
      if (kind != "proper-cocompact") {
        bad(ErrorCode::RuleShapeMismatch, i,
            "unexpected side kind '" + kind + "' for a tree-action leaf");
        continue;
      }
      if (!flag_true(side, "all_stabilizers_finite") ||
          !flag_true(side, "quotient_covers_graph"))
        bad(ErrorCode::SideConditionFailed, i,
            "tree-action leaf side conditions are not recorded true");
      if (!int_at_least(side, "ball_radius", 1))
        bad(ErrorCode::SideConditionFailed, i,
            "tree-action leaf records a positive ball radius");
    } else if (node.rule == "R7") {
      if (!node.premises.empty()) {
        bad(ErrorCode::RuleShapeMismatch, i,
            "cyclic-class leaves take no premises");
        continue;
      }
      if (kind == "kernel-graph-of-infinite-cyclic") {
        const auto it = side.find("vertex_classes");
        if (it == side.end() || !it->is_array()) {
          bad(ErrorCode::RuleShapeMismatch, i, "missing vertex class list");
          continue;
        }
        for (const json& cls : *it)
          if (!cls.is_object() || cls.value("class", "") != "infinite-cyclic")
            bad(ErrorCode::SideConditionFailed, i,
                "every kernel vertex class must be infinite cyclic");
      } else if (kind == "preimage-cyclic") {
        if (!flag_true(side, "vertex_groups_finite"))
          bad(ErrorCode::SideConditionFailed, i,
              "preimage leaf needs finite target vertex groups");
      } else {
        bad(ErrorCode::RuleShapeMismatch, i,
            "unexpected side kind '" + kind + "' for a cyclic-class leaf");
      }
    } else if (node.rule == "Axiom(Finite)") {
      if (!node.premises.empty())
        bad(ErrorCode::RuleShapeMismatch, i, "axiom leaves take no premises");
      if (kind != "finite-group")
        bad(ErrorCode::RuleShapeMismatch, i,
            "finite-group axiom has side kind '" + kind + "'");
      else if (!int_at_least(side, "order", 1))
        bad(ErrorCode::SideConditionFailed, i,
            "finite-group axiom records a positive order");
    } else if (node.rule == "Axiom(VirtuallyCyclic)") {
      if (!node.premises.empty())
        bad(ErrorCode::RuleShapeMismatch, i, "axiom leaves take no premises");
      if (kind != "virtually-cyclic")
        bad(ErrorCode::RuleShapeMismatch, i,
            "virtually-cyclic axiom has side kind '" + kind + "'");
    } else if (node.rule == "Axiom(ColimitOfCat0)") {
      if (!node.premises.empty())
        bad(ErrorCode::RuleShapeMismatch, i, "axiom leaves take no premises");
      if (kind != "kernel-graph-of-finite") {
        bad(ErrorCode::RuleShapeMismatch, i,
            "kernel axiom has side kind '" + kind + "'");
        continue;
      }
      const auto vit = side.find("vertex_classes");
      if (vit == side.end() || !vit->is_array()) {
        bad(ErrorCode::RuleShapeMismatch, i, "missing vertex class list");
      } else {
        for (const json& cls : *vit)
          if (!cls.is_object() ||
              cls.value("class", "") != "finite-equal-to-max-finite-normal")
            bad(ErrorCode::SideConditionFailed, i,
                "every kernel vertex class must be the maximal finite "
                "normal subgroup");
      }
      const auto eit = side.find("edge_kernel_checks");
      if (eit == side.end() || !eit->is_array()) {
        bad(ErrorCode::RuleShapeMismatch, i, "missing edge kernel checks");
      } else {
        for (const json& chk : *eit)
          if (!chk.is_object() || !chk.contains("ok") ||
              !chk["ok"].is_boolean() || !chk["ok"].get<bool>())
            bad(ErrorCode::SideConditionFailed, i,
                "every edge kernel check must be recorded ok");
      }
    } else if (node.rule == "Axiom(PreimageBranches)") {
      if (!node.premises.empty())
        bad(ErrorCode::RuleShapeMismatch, i, "axiom leaves take no premises");
      if (kind != "preimage-branches") {
        bad(ErrorCode::RuleShapeMismatch, i,
            "preimage axiom has side kind '" + kind + "'");
        continue;
      }
      const auto it = side.find("tree_check");
      if (it == side.end() || !it->is_object()) {
        bad(ErrorCode::RuleShapeMismatch, i, "missing tree check data");
      } else if (!flag_true(*it, "quotient_is_tree") ||
                 !flag_true(*it, "matches_unfolding") ||
                 !int_at_least(*it, "radius", 1)) {
        bad(ErrorCode::SideConditionFailed, i,
            "the recorded tree check did not pass");
      }
    } else {
      bad(ErrorCode::UnknownRule, i,
          "rule '" + node.rule + "' is not in the vocabulary");
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Certificate serialization.

std::string certificate_to_json(const Certificate& c) {
  json doc;
  doc["format"] = "ggk-certificate-v1";
  doc["root"] = c.root;
  json nodes = json::array();
  for (const CertificateNode& n : c.nodes) {
    const json side = json::parse(n.side, nullptr, false);
    if (side.is_discarded())
      fail(ErrorCode::SchemaError,
           "certificate node side data is not valid JSON");
    nodes.push_back(json{{"claim", n.claim},
                         {"rule", n.rule},
                         {"premises", n.premises},
                         {"side", side},
                         {"hash", n.hash}});
  }
  doc["nodes"] = nodes;
  return doc.dump();
}

Certificate certificate_from_json(const std::string& text) {
  const json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded())
    fail(ErrorCode::ParseError, "certificate file is not valid JSON");
  if (!doc.is_object())
    fail(ErrorCode::SchemaError, "certificate: top level must be an object");
  if (doc.value("format", "") != "ggk-certificate-v1")
    fail(ErrorCode::SchemaError,
         "certificate: format must be \"ggk-certificate-v1\"");
  if (!doc.contains("root") || !doc["root"].is_number_integer())
    fail(ErrorCode::SchemaError, "certificate: root must be an integer");
  if (!doc.contains("nodes") || !doc["nodes"].is_array())
    fail(ErrorCode::SchemaError, "certificate: nodes must be an array");

  Certificate c;
  c.root = doc["root"].get<int>();
  int index = 0;
  for (const json& el : doc["nodes"]) {
    const std::string where = "certificate: nodes[" + std::to_string(index) + "]";
    if (!el.is_object()) fail(ErrorCode::SchemaError, where + " must be an object");
    if (!el.contains("claim") || !el["claim"].is_string())
      fail(ErrorCode::SchemaError, where + ".claim must be a string");
    if (!el.contains("rule") || !el["rule"].is_string())
      fail(ErrorCode::SchemaError, where + ".rule must be a string");
    if (!el.contains("premises") || !el["premises"].is_array())
      fail(ErrorCode::SchemaError, where + ".premises must be an array");
    if (!el.contains("side") || !el["side"].is_object())
      fail(ErrorCode::SchemaError, where + ".side must be an object");
    if (!el.contains("hash") || !el["hash"].is_string())
      fail(ErrorCode::SchemaError, where + ".hash must be a string");
    CertificateNode node;
    node.claim = el["claim"].get<std::string>();
    node.rule = el["rule"].get<std::string>();
    for (const json& p : el["premises"]) {
      if (!p.is_number_integer())
        fail(ErrorCode::SchemaError, where + ".premises must hold integers");
      node.premises.push_back(p.get<int>());
    }
    node.side = el["side"].dump();
    node.hash = el["hash"].get<std::string>();
    c.nodes.push_back(std::move(node));
    ++index;
  }
  return c;
}

}  // namespace ggk
