#pragma once

#include <string>

#include "ggk/gog.hpp"

namespace ggk {

// Document format for a graph of groups, used by the command-line tools.
//
//   {
//     "vertices": [ {"id": "v", "group": GROUP}, ... ],
//     "edges":    [ {"id": "l", "from": "u", "to": "w", "group": GROUP,
//                    "mono_from": HOM, "mono_to": HOM}, ... ]
//   }
//
// Each edge is given once; the reversed orientation is synthesized with the
// monos swapped.  GROUP is one of
//
//   {"kind": "finite", "table": [[...]]}            multiplication table
//   {"kind": "finite", "perm_gens": [[...]]}        permutation generators
//   {"kind": "orientable", "finite_part": F, "alpha": [...]}
//   {"kind": "nonorientable", "C": F, "A": F, "B": F,
//    "C_in_A": [...], "C_in_B": [...], "refl_a": i, "refl_b": j}
//
// where F is a finite-group object ({"table": ...} or {"perm_gens": ...}),
// "alpha" is the twisting automorphism as an image array, and "C_in_A",
// "C_in_B" are the embedding image arrays of the two index-two overgroups of
// the core.  Elements are encoded per group kind: a finite element is a bare
// integer, an orientable element is [f,n], a nonorientable element is
// [c,[n,eps]].  HOM is {"finite_images": [ELT,...], "extra": [ELT,...]} with
// one image per source finite-part element and the distinguished images
// (none | [t] | [a,b]) in "extra"; all images use the target encoding.
//
// Malformed documents raise SchemaError naming the offending path; group-
// and graph-level validation errors are raised by the constructions they
// delegate to.  Serialization is canonical (sorted keys, two-space indent),
// so parse -> serialize -> parse is the identity and serializing a parsed
// canonical document reproduces it byte for byte.

GraphOfGroups gog_from_json(const std::string& text, bool validated = true);
std::string gog_to_json(const GraphOfGroups& gog);

// Single-group object, same GROUP schema.
VCGroupPtr vcgroup_from_json(const std::string& text);
std::string vcgroup_to_json(const VCGroup& g);

}  // namespace ggk
