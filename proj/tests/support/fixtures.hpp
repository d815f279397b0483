#pragma once

// Shared graph-of-groups fixtures used across the test binaries: a
// Baumslag-Solitar style loop, a free product of small torsion groups, a
// two-reflection vertex with a self-embedding loop, a theta graph, and a
// mixed-torsion edge between a semidirect and an amalgam vertex.

#include <string>
#include <vector>

#include "ggk/gog.hpp"

namespace fx {

using ggk::FiniteGroup;
using ggk::FiniteGroupPtr;
using ggk::FiniteHom;
using ggk::GeometricEdgeData;
using ggk::GraphOfGroups;
using ggk::VCElement;
using ggk::VCGroup;
using ggk::VCGroupPtr;
using ggk::VCHom;

// Z x Z/2 with trivial twist.
inline VCGroupPtr z_cross_z2() {
  auto z2 = FiniteGroup::cyclic(2);
  return VCGroup::orientable(z2, FiniteHom::identity(z2));
}

// Index-two amalgam Z/4 *_{Z/2} (Z/2 x Z/2): nontrivial square on the Z/4
// side, trivial twist on the core.
inline VCGroupPtr z4_klein_amalgam() {
  auto c = FiniteGroup::cyclic(2);
  auto a = FiniteGroup::cyclic(4);
  auto b = FiniteGroup::direct_product(FiniteGroup::cyclic(2),
                                       FiniteGroup::cyclic(2));
  FiniteHom emb_a = FiniteHom::make(c, a, {0, 2});  // 1 -> 2 in Z/4
  FiniteHom emb_b = FiniteHom::make(c, b, {0, 3});  // 1 -> (1,1)
  return VCGroup::nonorientable(c, a, b, emb_a, emb_b, /*refl_a=*/1,
                                /*refl_b=*/1);
}

// Loop on Z with the two edge monos t -> t^2 and t -> t^3.
inline GraphOfGroups bs23_loop() {
  VCGroupPtr z = VCGroup::z_model();
  VCHom sq = VCHom::make(z, z, {}, {VCElement{0, 2, 0}});
  VCHom cube = VCHom::make(z, z, {}, {VCElement{0, 3, 0}});
  GeometricEdgeData edge{"l", "v", "v", z, sq, cube};
  return ggk::make_graph_of_groups({{"v", z}}, {edge});
}

// Free product Z/2 * Z/3 over a trivial edge group.
inline GraphOfGroups free_product_z2_z3() {
  VCGroupPtr z2 = VCGroup::finite(FiniteGroup::cyclic(2));
  VCGroupPtr z3 = VCGroup::finite(FiniteGroup::cyclic(3));
  VCGroupPtr triv = VCGroup::trivial_model();
  VCHom into_u = VCHom::make(triv, z2, {}, {});
  VCHom into_w = VCHom::make(triv, z3, {}, {});
  GeometricEdgeData edge{"a", "u", "w", triv, into_u, into_w};
  return ggk::make_graph_of_groups({{"u", z2}, {"w", z3}}, {edge});
}

// Two Z/2 vertices joined over a trivial edge group; the fundamental group
// is the infinite dihedral group and its tree is a line.
inline GraphOfGroups z2_star_z2() {
  VCGroupPtr z2 = VCGroup::finite(FiniteGroup::cyclic(2));
  VCGroupPtr triv = VCGroup::trivial_model();
  VCHom into_u = VCHom::make(triv, z2, {}, {});
  VCHom into_w = VCHom::make(triv, z2, {}, {});
  GeometricEdgeData edge{"a", "u", "w", triv, into_u, into_w};
  return ggk::make_graph_of_groups({{"u", z2}, {"w", z2}}, {edge});
}

// Loop on the infinite dihedral group: one side the identity, the other the
// index-two self-embedding a -> tau·a, b -> b (so tau -> tau^2).
inline GraphOfGroups dinfty_loop() {
  VCGroupPtr d = VCGroup::dinfty_model();
  VCHom doubling =
      VCHom::make(d, d, {}, {VCElement{0, 1, 1}, VCElement{0, -1, 1}});
  VCHom id = VCHom::identity(d);
  GeometricEdgeData edge{"l", "v", "v", d, doubling, id};
  return ggk::make_graph_of_groups({{"v", d}}, {edge});
}

// Theta graph: two Z vertices joined by three edges — an identity/identity
// edge, a t^2/t^3 edge, and a trivial-group edge.
inline GraphOfGroups theta_graph() {
  VCGroupPtr z = VCGroup::z_model();
  VCGroupPtr triv = VCGroup::trivial_model();
  VCHom id = VCHom::identity(z);
  VCHom sq = VCHom::make(z, z, {}, {VCElement{0, 2, 0}});
  VCHom cube = VCHom::make(z, z, {}, {VCElement{0, 3, 0}});
  VCHom triv_in = VCHom::make(triv, z, {}, {});
  GeometricEdgeData p{"p", "u", "w", z, id, id};
  GeometricEdgeData q{"q", "u", "w", z, sq, cube};
  GeometricEdgeData r{"r", "u", "w", triv, triv_in, triv_in};
  return ggk::make_graph_of_groups({{"u", z}, {"w", z}}, {p, q, r});
}

// Mixed-torsion edge: Z x Z/2 vertex joined to a Z/4 * Z/2x2 amalgam vertex
// along an edge group Z x Z/2 (mono into the amalgam sends the torsion
// generator to the core reflectionless element and t to tau).
inline GraphOfGroups mixed_torsion() {
  VCGroupPtr u = z_cross_z2();
  VCGroupPtr w = z4_klein_amalgam();
  VCGroupPtr eg = z_cross_z2();
  VCHom into_u =
      VCHom::make(eg, u, {VCElement{1, 0, 0}}, {VCElement{0, 1, 0}});
  VCHom into_w =
      VCHom::make(eg, w, {VCElement{1, 0, 0}}, {VCElement{0, 1, 0}});
  GeometricEdgeData edge{"e", "u", "w", eg, into_u, into_w};
  return ggk::make_graph_of_groups({{"u", u}, {"w", w}}, {edge});
}

struct NamedGog {
  std::string name;
  GraphOfGroups gog;
};

inline std::vector<NamedGog> all_gog_fixtures() {
  return {{"bs23_loop", bs23_loop()},
          {"free_product_z2_z3", free_product_z2_z3()},
          {"z2_star_z2", z2_star_z2()},
          {"dinfty_loop", dinfty_loop()},
          {"theta_graph", theta_graph()},
          {"mixed_torsion", mixed_torsion()}};
}

}  // namespace fx
