#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "ggk/finite_group.hpp"

namespace ggk {

// Element of the infinite dihedral group Z ⋊ Z/2 with inversion action:
// (n1,e1)(n2,e2) = (n1 + (-1)^{e1} n2, e1 xor e2).
struct DihedralWord {
  long long n = 0;
  int eps = 0;

  static DihedralWord mul(DihedralWord x, DihedralWord y) {
    return DihedralWord{x.n + (x.eps ? -y.n : y.n), x.eps ^ y.eps};
  }
  static DihedralWord inverse(DihedralWord x) {
    return x.eps ? x : DihedralWord{-x.n, 0};
  }
  bool operator==(const DihedralWord& o) const {
    return n == o.n && eps == o.eps;
  }
};

// One element of a virtually cyclic group in canonical form.
//   Finite variant:        f                  (index into F)
//   Orientable variant:    f * t^n            stored as (f, n)
//   Nonorientable variant: c * tau^n * a^eps  stored as (c, (n, eps))
// Unused fields stay zero so that equality is plain member comparison.
struct VCElement {
  Elt f = 0;
  long long n = 0;
  int eps = 0;

  bool operator==(const VCElement& o) const {
    return f == o.f && n == o.n && eps == o.eps;
  }
  bool operator!=(const VCElement& o) const { return !(*this == o); }
  bool operator<(const VCElement& o) const {
    if (f != o.f) return f < o.f;
    if (n != o.n) return n < o.n;
    return eps < o.eps;
  }
  DihedralWord dihedral() const { return DihedralWord{n, eps}; }
};

enum class VCClass { Finite, Orientable, Nonorientable };

class VCGroup;
using VCGroupPtr = std::shared_ptr<const VCGroup>;

// A virtually cyclic group in one of the three canonical shapes:
//   Finite:        F itself
//   Orientable:    F ⋊_alpha Z, generated by F and t with t f t^-1 = alpha(f)
//   Nonorientable: A ∗_C B with [A:C] = [B:C] = 2; elements are written
//                  c tau^n a^eps with tau = a·b for the chosen reflection
//                  representatives a ∈ A∖C, b ∈ B∖C.
class VCGroup {
 public:
  static VCGroupPtr finite(FiniteGroupPtr f);
  static VCGroupPtr orientable(FiniteGroupPtr f, FiniteHom alpha);
  // embA: C -> A and embB: C -> B must be injective with index-2 image;
  // refl_a, refl_b are elements outside the images.
  static VCGroupPtr nonorientable(FiniteGroupPtr c, FiniteGroupPtr a,
                                  FiniteGroupPtr b, FiniteHom emb_a,
                                  FiniteHom emb_b, Elt refl_a, Elt refl_b);

  // Canonical models used as quotient targets.
  static VCGroupPtr trivial_model();  // trivial group
  static VCGroupPtr z_model();        // Z = Orientable(trivial, id)
  static VCGroupPtr dinfty_model();   // D∞ = Nonorientable(trivial; Z/2, Z/2)

  VCClass variant() const { return variant_; }
  bool is_infinite() const { return variant_ != VCClass::Finite; }
  // F (Finite/Orientable) or C (Nonorientable).
  const FiniteGroupPtr& finite_part() const { return fpart_; }

  // Orientable accessors.
  const FiniteHom& alpha() const;
  int alpha_order() const;
  Elt alpha_pow(Elt f, long long k) const;  // alpha^k(f)

  // Nonorientable accessors.
  const FiniteGroupPtr& amalgam_a() const;
  const FiniteGroupPtr& amalgam_b() const;
  const FiniteHom& emb_a() const;
  const FiniteHom& emb_b() const;
  Elt refl_a() const;
  Elt refl_b() const;
  // conjugation of C by a, b, tau = a b, and the squares a², b² in C
  Elt phi_a(Elt c) const;
  Elt phi_b(Elt c) const;
  Elt phi_tau_pow(Elt c, long long k) const;  // phi_tau^k(c)
  Elt sq_a() const;
  Elt sq_b() const;
  int phi_tau_order() const;

  // ---- element arithmetic ----
  VCElement identity_elt() const { return VCElement{fpart_->identity(), 0, 0}; }
  void check_elt(const VCElement& x) const;
  VCElement mul(const VCElement& x, const VCElement& y) const;
  VCElement inv(const VCElement& x) const;
  VCElement pow(const VCElement& x, long long k) const;
  VCElement conj(const VCElement& g, const VCElement& x) const {
    return mul(mul(g, x), inv(g));
  }

  // embedding of the finite part
  VCElement from_finite(Elt c) const {
    fpart_->check_elt(c);
    return VCElement{c, 0, 0};
  }

  // canonical infinite-order generator: t (Orientable) or tau = a·b
  // (Nonorientable); throws BadVariant on a finite group.
  VCElement t_elt() const;
  // reflection generators of a nonorientable group as elements
  VCElement a_elt() const;  // (id, (0,1))
  VCElement b_elt() const;  // (sq_b, (-1,1))

  // canonical generating set: finite-part generators embedded, plus t or a,b
  std::vector<VCElement> generator_elts() const;

  // translation part in the quotient model (n; 0 for finite groups)
  long long translation(const VCElement& x) const { return x.n; }

 private:
  VCGroup() = default;
  void precompute_nonorientable();

  VCClass variant_ = VCClass::Finite;
  FiniteGroupPtr fpart_;

  // orientable data
  std::optional<FiniteHom> alpha_;
  int alpha_order_ = 1;
  std::vector<std::vector<Elt>> alpha_pows_;  // alpha^k images, k in [0, order)

  // nonorientable data
  FiniteGroupPtr a_, b_;
  std::optional<FiniteHom> emb_a_, emb_b_;
  Elt refl_a_ = 0, refl_b_ = 0;
  std::vector<Elt> phi_a_, phi_b_;            // C -> C tables
  std::vector<std::vector<Elt>> phi_tau_pows_;  // phi_tau^k tables
  int phi_tau_order_ = 1;
  Elt sq_a_ = 0, sq_b_ = 0;  // a², b² pulled back to C
  Elt y_a_ = 0;              // C-part of a tau a^-1 (= sq_a·sq_b)

  // mu(n) = C-part of the relation a · tau^n = mu(n) · tau^{-n} · a
  Elt mu(long long n) const;
};

// Exact order of x in G; nullopt means infinite.  Computed by iteration
// with the bound 2·|finite part|·max(1, automorphism order of the cyclic
// conjugation action); exceeding the bound is an internal error.
std::optional<int> vc_order(const VCGroup& g, const VCElement& x);

struct MaxFiniteNormal {
  FiniteSubgroup subgroup;  // subgroup of finite_part (always the whole part)
  VCClass cls;
};

// The unique maximum normal finite subgroup together with the trichotomy
// class of G (finite / infinite orientable / infinite nonorientable).
MaxFiniteNormal max_finite_normal(const VCGroup& g);

// Same subgroup as a set of elements of G, for oracle comparisons.
std::vector<VCElement> max_finite_normal_elements(const VCGroup& g);

enum class QuotientModel { Trivial, Z, Dinfty };

struct FiniteQuotient {
  QuotientModel model;
  VCGroupPtr model_group;  // trivial_model / z_model / dinfty_model
};

// G / max_finite_normal(G) as a canonical model group.
FiniteQuotient quotient_by_max_finite(const VCGroupPtr& g);
// The projection G -> model group: kills the finite part, keeps (n) or (n,eps).
VCElement project_mod_finite(const VCGroup& g, const VCElement& x);

struct CyclicSubgroupDescriptor {
  VCElement generator;      // t for Z, tau for D∞
  bool whole_group;         // true for Z
};

// The maximal infinite cyclic subgroup of the Z or D∞ model.
// Throws NotZorDinfty if G has a nontrivial finite part or is finite.
CyclicSubgroupDescriptor max_infinite_cyclic(const VCGroup& g);
bool in_max_infinite_cyclic(const VCGroup& g, const VCElement& x);

// Homomorphism between virtually cyclic groups.  Images are supplied for the
// canonical generating set and extended to the whole finite part; all
// defining relations of the canonical presentation are checked exactly.
struct VCHom {
  VCGroupPtr source, target;
  std::vector<VCElement> finite_images;  // image of every finite-part element
  VCElement t_img;                        // orientable: t; nonorientable: tau
  VCElement a_img, b_img;                 // nonorientable only

  // extra: {} for finite source, {t image} for orientable,
  // {a image, b image} for nonorientable.
  static VCHom make(VCGroupPtr source, VCGroupPtr target,
                    const std::vector<VCElement>& finite_gen_images,
                    const std::vector<VCElement>& extra);
  static VCHom identity(const VCGroupPtr& g);

  VCElement operator()(const VCElement& x) const;
};

bool vc_hom_is_injective(const VCHom& f);

// Solve f(x) = y exactly; nullopt if y is not in the image.
std::optional<VCElement> hom_preimage(const VCHom& f, const VCElement& y);

// Index of image(f) in the target group; nullopt means infinite index.
std::optional<long long> vc_image_index(const VCHom& f);

// f^{-1}(S) for S = max_finite_normal(target), as a subgroup of the source's
// finite part.  Requires f injective and the exact maximal S; a broken
// precondition raises PreimageNotFinite.  For an infinite source the result
// is asserted to be the whole finite part.
FiniteSubgroup preimage_of_subgroup(const VCHom& f, const FiniteSubgroup& s);

struct InducedQuotientHom {
  VCHom hom;
  bool injective;
};

// The map induced by f between the quotients by the maximal finite normal
// subgroups (source/f^{-1}(F) -> target/F).
InducedQuotientHom induced_hom_on_quotients(const VCHom& f);

struct InducedCyclicQuotientHom {
  FiniteHom hom;  // between quotient_by_max_infinite_cyclic groups
  bool injective;
};

// The map induced by f between the quotients by the maximal infinite cyclic
// subgroups; source and target must be Z or D∞ models (Z -> trivial group,
// D∞ -> Z/2).
InducedCyclicQuotientHom induced_hom_mod_max_cyclic(const VCHom& f);

// Quotient of a Z or D∞ model by its maximal infinite cyclic subgroup.
struct CyclicQuotient {
  FiniteGroupPtr group;  // trivial or Z/2
};
CyclicQuotient quotient_by_max_infinite_cyclic_group(const VCGroup& g);
// The projection onto that quotient: Z -> 0, D∞ -> eps.
Elt project_mod_max_cyclic(const VCGroup& g, const VCElement& x);

// Total order key used for canonical coset representatives downstream:
// (finite part index, |translation|, sign bit, dihedral bit), lexicographic.
std::array<long long, 4> element_key(const VCElement& x);
bool key_less(const VCElement& x, const VCElement& y);

}  // namespace ggk
