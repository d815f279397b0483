#pragma once

// Broad corpus used by the construction tests and the acceptance suite:
// several dozen virtually cyclic groups across all three shapes, plus
// graph-of-groups inputs whose edge groups are all infinite (the inputs the
// quotient constructions accept).

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ggk/gog.hpp"
#include "fixtures.hpp"

namespace corpus {

using ggk::Elt;
using ggk::FiniteGroup;
using ggk::FiniteGroupPtr;
using ggk::FiniteHom;
using ggk::GeometricEdgeData;
using ggk::GraphOfGroups;
using ggk::VCElement;
using ggk::VCGroup;
using ggk::VCGroupPtr;
using ggk::VCHom;

struct NamedGroup {
  std::string name;
  VCGroupPtr group;
};

// Automorphism given elementwise on a cyclic group: k -> unit*k mod n.
inline FiniteHom cyclic_scaling(const FiniteGroupPtr& zn, int unit) {
  std::vector<Elt> images(static_cast<size_t>(zn->order()));
  for (Elt k = 0; k < zn->order(); ++k)
    images[static_cast<size_t>(k)] =
        static_cast<Elt>((static_cast<long long>(unit) * k) % zn->order());
  return FiniteHom::make(zn, zn, images);
}

// Inner automorphism x -> g x g^-1.
inline FiniteHom conjugation_auto(const FiniteGroupPtr& g, Elt by) {
  std::vector<Elt> images(static_cast<size_t>(g->order()));
  for (Elt x = 0; x < g->order(); ++x)
    images[static_cast<size_t>(x)] = g->conj(by, x);
  return FiniteHom::make(g, g, images);
}

// Embeds the cyclic group onto the powers of a chosen order-n element of a
// group of order 2n, giving an index-two image.
inline FiniteHom embed_cyclic_on(const FiniteGroupPtr& c,
                                 const FiniteGroupPtr& a, Elt generator) {
  std::vector<Elt> images(static_cast<size_t>(c->order()));
  images[0] = a->identity();
  for (Elt k = 1; k < c->order(); ++k)
    images[static_cast<size_t>(k)] =
        a->mul(images[static_cast<size_t>(k - 1)], generator);
  return FiniteHom::make(c, a, images);
}

// Finds some order-n element in a group of order 2n and embeds Z/n onto its
// powers; n = 1 embeds trivially.
inline FiniteHom embed_cyclic_search(const FiniteGroupPtr& c,
                                     const FiniteGroupPtr& a) {
  for (Elt r = 0; r < a->order(); ++r)
    if (a->element_order(r) == c->order()) return embed_cyclic_on(c, a, r);
  throw std::runtime_error("corpus: no element of the required order");
}

inline Elt element_outside_image(const FiniteGroupPtr& a,
                                 const FiniteHom& emb) {
  std::set<Elt> image;
  for (Elt k = 0; k < emb.source->order(); ++k) image.insert(emb(k));
  for (Elt x = 0; x < a->order(); ++x)
    if (!image.count(x)) return x;
  throw std::runtime_error("corpus: embedding is surjective");
}

// Two-reflection group A *_C B from cyclic core order n and two groups of
// order 2n, choosing embeddings and reflection representatives by search.
inline VCGroupPtr reflective(int core_order, const FiniteGroupPtr& a,
                             const FiniteGroupPtr& b) {
  FiniteGroupPtr c = FiniteGroup::cyclic(core_order);
  FiniteHom emb_a = embed_cyclic_search(c, a);
  FiniteHom emb_b = embed_cyclic_search(c, b);
  return VCGroup::nonorientable(c, a, b, emb_a, emb_b,
                                element_outside_image(a, emb_a),
                                element_outside_image(b, emb_b));
}

inline std::vector<NamedGroup> finite_corpus() {
  const FiniteGroupPtr c2 = FiniteGroup::cyclic(2);
  return {
      {"fin_trivial", VCGroup::finite(FiniteGroup::trivial())},
      {"fin_z2", VCGroup::finite(FiniteGroup::cyclic(2))},
      {"fin_z3", VCGroup::finite(FiniteGroup::cyclic(3))},
      {"fin_z4", VCGroup::finite(FiniteGroup::cyclic(4))},
      {"fin_z5", VCGroup::finite(FiniteGroup::cyclic(5))},
      {"fin_z6", VCGroup::finite(FiniteGroup::cyclic(6))},
      {"fin_z8", VCGroup::finite(FiniteGroup::cyclic(8))},
      {"fin_z9", VCGroup::finite(FiniteGroup::cyclic(9))},
      {"fin_z12", VCGroup::finite(FiniteGroup::cyclic(12))},
      {"fin_klein", VCGroup::finite(FiniteGroup::direct_product(c2, c2))},
      {"fin_z2xz4",
       VCGroup::finite(FiniteGroup::direct_product(c2, FiniteGroup::cyclic(4)))},
      {"fin_z3xz3",
       VCGroup::finite(FiniteGroup::direct_product(FiniteGroup::cyclic(3),
                                                   FiniteGroup::cyclic(3)))},
      {"fin_d3", VCGroup::finite(FiniteGroup::dihedral(3))},
      {"fin_d4", VCGroup::finite(FiniteGroup::dihedral(4))},
      {"fin_d5", VCGroup::finite(FiniteGroup::dihedral(5))},
      {"fin_d8", VCGroup::finite(FiniteGroup::dihedral(8))},
      {"fin_q8", VCGroup::finite(FiniteGroup::quaternion())},
      {"fin_s3", VCGroup::finite(FiniteGroup::symmetric(3))},
      {"fin_q8xz2",
       VCGroup::finite(FiniteGroup::direct_product(FiniteGroup::quaternion(),
                                                   c2))},
  };
}

inline std::vector<NamedGroup> orientable_corpus() {
  std::vector<NamedGroup> out;
  out.push_back({"z", VCGroup::z_model()});

  auto untwisted = [&](const std::string& name, const FiniteGroupPtr& f) {
    out.push_back({"zx_" + name,
                   VCGroup::orientable(f, FiniteHom::identity(f))});
  };
  const FiniteGroupPtr c2 = FiniteGroup::cyclic(2);
  untwisted("z2", FiniteGroup::cyclic(2));
  untwisted("z3", FiniteGroup::cyclic(3));
  untwisted("z4", FiniteGroup::cyclic(4));
  untwisted("z5", FiniteGroup::cyclic(5));
  untwisted("z6", FiniteGroup::cyclic(6));
  untwisted("z8", FiniteGroup::cyclic(8));
  untwisted("klein", FiniteGroup::direct_product(c2, c2));
  untwisted("z2xz4", FiniteGroup::direct_product(c2, FiniteGroup::cyclic(4)));
  untwisted("d3", FiniteGroup::dihedral(3));
  untwisted("d4", FiniteGroup::dihedral(4));
  untwisted("d8", FiniteGroup::dihedral(8));
  untwisted("q8", FiniteGroup::quaternion());
  untwisted("s3", FiniteGroup::symmetric(3));

  auto scaled = [&](const std::string& name, int n, int unit) {
    FiniteGroupPtr zn = FiniteGroup::cyclic(n);
    out.push_back({name, VCGroup::orientable(zn, cyclic_scaling(zn, unit))});
  };
  scaled("semi_z3_inv", 3, 2);
  scaled("semi_z4_inv", 4, 3);
  scaled("semi_z5_x2", 5, 2);
  scaled("semi_z5_inv", 5, 4);
  scaled("semi_z7_x2", 7, 2);
  scaled("semi_z8_x3", 8, 3);
  scaled("semi_z9_x2", 9, 2);
  scaled("semi_z16_x3", 16, 3);

  {
    FiniteGroupPtr k4 = FiniteGroup::direct_product(c2, c2);
    // swap the two factors: (a,b) -> (b,a) in the product enumeration
    std::vector<Elt> images(4);
    for (Elt x = 0; x < 4; ++x) images[static_cast<size_t>(x)] =
        static_cast<Elt>((x % 2) * 2 + x / 2);
    out.push_back({"semi_klein_swap",
                   VCGroup::orientable(k4, FiniteHom::make(k4, k4, images))});
  }
  {
    FiniteGroupPtr s3 = FiniteGroup::symmetric(3);
    Elt flip = 1;
    for (Elt x = 0; x < s3->order(); ++x)
      if (s3->element_order(x) == 2) {
        flip = x;
        break;
      }
    out.push_back({"semi_s3_conj",
                   VCGroup::orientable(s3, conjugation_auto(s3, flip))});
  }
  {
    FiniteGroupPtr q8 = FiniteGroup::quaternion();
    Elt i_like = 1;
    for (Elt x = 0; x < q8->order(); ++x)
      if (q8->element_order(x) == 4) {
        i_like = x;
        break;
      }
    out.push_back({"semi_q8_conj",
                   VCGroup::orientable(q8, conjugation_auto(q8, i_like))});
  }
  {
    FiniteGroupPtr d4 = FiniteGroup::dihedral(4);
    Elt rot = 1;
    for (Elt x = 0; x < d4->order(); ++x)
      if (d4->element_order(x) == 4) {
        rot = x;
        break;
      }
    out.push_back({"semi_d4_conj",
                   VCGroup::orientable(d4, conjugation_auto(d4, rot))});
  }
  return out;
}

inline std::vector<NamedGroup> nonorientable_corpus() {
  const FiniteGroupPtr c2 = FiniteGroup::cyclic(2);
  const FiniteGroupPtr k4 = FiniteGroup::direct_product(c2, c2);
  return {
      {"dinfty", VCGroup::dinfty_model()},
      {"refl_z4_z4", reflective(2, FiniteGroup::cyclic(4), FiniteGroup::cyclic(4))},
      {"refl_z4_klein", fx::z4_klein_amalgam()},
      {"refl_klein_klein", reflective(2, k4, k4)},
      {"refl_z4_d2", reflective(2, FiniteGroup::cyclic(4), FiniteGroup::dihedral(2))},
      {"refl_z6_z6", reflective(3, FiniteGroup::cyclic(6), FiniteGroup::cyclic(6))},
      {"refl_z6_d3", reflective(3, FiniteGroup::cyclic(6), FiniteGroup::dihedral(3))},
      {"refl_d3_d3", reflective(3, FiniteGroup::dihedral(3), FiniteGroup::dihedral(3))},
      {"refl_z8_z8", reflective(4, FiniteGroup::cyclic(8), FiniteGroup::cyclic(8))},
      {"refl_z8_d4", reflective(4, FiniteGroup::cyclic(8), FiniteGroup::dihedral(4))},
      {"refl_d4_d4", reflective(4, FiniteGroup::dihedral(4), FiniteGroup::dihedral(4))},
      {"refl_z8_z2xz4",
       reflective(4, FiniteGroup::cyclic(8),
                  FiniteGroup::direct_product(c2, FiniteGroup::cyclic(4)))},
      {"refl_z10_z10",
       reflective(5, FiniteGroup::cyclic(10), FiniteGroup::cyclic(10))},
      {"refl_z10_d5", reflective(5, FiniteGroup::cyclic(10), FiniteGroup::dihedral(5))},
      {"refl_z12_d6", reflective(6, FiniteGroup::cyclic(12), FiniteGroup::dihedral(6))},
  };
}

inline std::vector<NamedGroup> all_vc_groups() {
  std::vector<NamedGroup> out = finite_corpus();
  for (auto& g : orientable_corpus()) out.push_back(g);
  for (auto& g : nonorientable_corpus()) out.push_back(g);
  return out;
}

inline std::vector<NamedGroup> infinite_vc_groups() {
  std::vector<NamedGroup> out;
  for (auto& g : all_vc_groups())
    if (g.group->is_infinite()) out.push_back(g);
  return out;
}

// ---------------------------------------------------------------------------
// Graphs of groups whose edge groups are all infinite: valid inputs for the
// quotient by maximal finite normal subgroups.

// Loop on Z x Z/2 with edge group Z mapped to (torsion, t) on one side and
// t^2 on the other; the quotient is a Baumslag-Solitar style loop on Z.
inline GraphOfGroups bs12_torsion_loop() {
  VCGroupPtr v = fx::z_cross_z2();
  VCGroupPtr z = VCGroup::z_model();
  VCHom twisted = VCHom::make(z, v, {}, {VCElement{1, 1, 0}});
  VCHom squared = VCHom::make(z, v, {}, {VCElement{0, 2, 0}});
  GeometricEdgeData edge{"l", "v", "v", z, twisted, squared};
  return ggk::make_graph_of_groups({{"v", v}}, {edge});
}

// Two Z vertices glued along an edge group Z by t -> t^2 and t -> t^3.
inline GraphOfGroups trefoil_amalgam() {
  VCGroupPtr z = VCGroup::z_model();
  VCHom sq = VCHom::make(z, z, {}, {VCElement{0, 2, 0}});
  VCHom cube = VCHom::make(z, z, {}, {VCElement{0, 3, 0}});
  GeometricEdgeData edge{"e", "u", "w", z, sq, cube};
  return ggk::make_graph_of_groups({{"u", z}, {"w", z}}, {edge});
}

// Z x Z/2 glued to the infinite dihedral model along an edge group Z.
inline GraphOfGroups torsion_dihedral_edge() {
  VCGroupPtr u = fx::z_cross_z2();
  VCGroupPtr w = VCGroup::dinfty_model();
  VCGroupPtr z = VCGroup::z_model();
  VCHom into_u = VCHom::make(z, u, {}, {VCElement{0, 1, 0}});
  VCHom into_w = VCHom::make(z, w, {}, {VCElement{0, 2, 0}});
  GeometricEdgeData edge{"e", "u", "w", z, into_u, into_w};
  return ggk::make_graph_of_groups({{"u", u}, {"w", w}}, {edge});
}

// Loop on a two-reflection vertex group with edge group Z landing on the
// translations, with opposite orientations on the two ends.
inline GraphOfGroups reflective_loop() {
  VCGroupPtr v = reflective(2, FiniteGroup::cyclic(4), FiniteGroup::cyclic(4));
  VCGroupPtr z = VCGroup::z_model();
  VCHom fwd = VCHom::make(z, v, {}, {VCElement{0, 1, 0}});
  VCHom bwd = VCHom::make(z, v, {}, {VCElement{0, -1, 0}});
  GeometricEdgeData edge{"l", "v", "v", z, fwd, bwd};
  return ggk::make_graph_of_groups({{"v", v}}, {edge});
}

// Two parallel infinite edges between Z x Z/2 vertices: one edge group Z,
// one the whole Z x Z/2.
inline GraphOfGroups torsion_theta() {
  VCGroupPtr u = fx::z_cross_z2();
  VCGroupPtr w = fx::z_cross_z2();
  VCGroupPtr z = VCGroup::z_model();
  VCGroupPtr eg = fx::z_cross_z2();
  VCHom z_in_u = VCHom::make(z, u, {}, {VCElement{0, 1, 0}});
  VCHom z_in_w = VCHom::make(z, w, {}, {VCElement{0, 1, 0}});
  VCHom eg_in_u =
      VCHom::make(eg, u, {VCElement{1, 0, 0}}, {VCElement{0, 1, 0}});
  VCHom eg_in_w =
      VCHom::make(eg, w, {VCElement{1, 0, 0}}, {VCElement{1, 1, 0}});
  GeometricEdgeData p{"p", "u", "w", z, z_in_u, z_in_w};
  GeometricEdgeData q{"q", "u", "w", eg, eg_in_u, eg_in_w};
  return ggk::make_graph_of_groups({{"u", u}, {"w", w}}, {p, q});
}

// Theta graph on Z vertices with both edge groups Z (no trivial edge).
inline GraphOfGroups models_theta() {
  VCGroupPtr z = VCGroup::z_model();
  VCHom id = VCHom::identity(z);
  VCHom sq = VCHom::make(z, z, {}, {VCElement{0, 2, 0}});
  VCHom cube = VCHom::make(z, z, {}, {VCElement{0, 3, 0}});
  GeometricEdgeData p{"p", "u", "w", z, id, id};
  GeometricEdgeData q{"q", "u", "w", z, sq, cube};
  return ggk::make_graph_of_groups({{"u", z}, {"w", z}}, {p, q});
}

// Z vertex glued to a D-infinity vertex along edge group Z (t -> tau^2).
inline GraphOfGroups z_dinfty_edge() {
  VCGroupPtr u = VCGroup::z_model();
  VCGroupPtr w = VCGroup::dinfty_model();
  VCHom into_u = VCHom::identity(u);
  VCHom into_w = VCHom::make(u, w, {}, {VCElement{0, 2, 0}});
  GeometricEdgeData edge{"e", "u", "w", u, into_u, into_w};
  return ggk::make_graph_of_groups({{"u", u}, {"w", w}}, {edge});
}

// Inputs accepted by the quotient by maximal finite normal subgroups.
inline std::vector<fx::NamedGog> quotient_eligible_gogs() {
  return {{"bs23_loop", fx::bs23_loop()},
          {"dinfty_loop", fx::dinfty_loop()},
          {"mixed_torsion", fx::mixed_torsion()},
          {"bs12_torsion_loop", bs12_torsion_loop()},
          {"trefoil_amalgam", trefoil_amalgam()},
          {"torsion_dihedral_edge", torsion_dihedral_edge()},
          {"reflective_loop", reflective_loop()},
          {"torsion_theta", torsion_theta()},
          {"models_theta", models_theta()},
          {"z_dinfty_edge", z_dinfty_edge()}};
}

// The subset whose vertex groups are already Z / D-infinity models: valid
// inputs for the quotient by maximal infinite cyclic subgroups.
inline std::vector<fx::NamedGog> model_gogs() {
  return {{"bs23_loop", fx::bs23_loop()},
          {"dinfty_loop", fx::dinfty_loop()},
          {"trefoil_amalgam", trefoil_amalgam()},
          {"models_theta", models_theta()},
          {"z_dinfty_edge", z_dinfty_edge()}};
}

}  // namespace corpus
