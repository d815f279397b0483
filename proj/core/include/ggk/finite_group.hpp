#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ggk/errors.hpp"

namespace ggk {

// Elements of a finite group are indices into its multiplication table.
using Elt = int;

class FiniteGroup;
using FiniteGroupPtr = std::shared_ptr<const FiniteGroup>;

// A finite group given by its full multiplication table.  Instances are
// immutable and shared; identity and inverses are computed on construction,
// associativity is checked exhaustively.
class FiniteGroup {
 public:
  // table[a][b] = a*b.  Throws BadTable / NotAssociative / NoIdentity /
  // NoInverse with a witness in the message.
  static FiniteGroupPtr from_table(const std::vector<std::vector<Elt>>& table);

  // Closure of a set of permutations of {0..k-1} under composition.
  // Elements are numbered in BFS discovery order starting from the identity,
  // so index 0 is always the identity.  The generator set is recorded.
  static FiniteGroupPtr from_perm_gens(const std::vector<std::vector<int>>& gens);

  // Common small groups, used throughout tests and corpora.
  static FiniteGroupPtr trivial();
  static FiniteGroupPtr cyclic(int n);
  static FiniteGroupPtr dihedral(int n);   // order 2n, n >= 1
  static FiniteGroupPtr quaternion();      // Q8
  static FiniteGroupPtr symmetric(int n);  // n <= 5
  static FiniteGroupPtr direct_product(const FiniteGroupPtr& a,
                                       const FiniteGroupPtr& b);

  int order() const { return n_; }
  Elt identity() const { return id_; }

  Elt mul(Elt a, Elt b) const {
    check_elt(a);
    check_elt(b);
    return table_[static_cast<size_t>(a) * n_ + b];
  }
  Elt inv(Elt a) const {
    check_elt(a);
    return inv_[a];
  }
  Elt pow(Elt a, long long k) const;
  int element_order(Elt a) const;

  Elt conj(Elt g, Elt x) const { return mul(mul(g, x), inv(g)); }

  // Optional distinguished generating set (recorded by from_perm_gens, or
  // set explicitly).  Empty means "use all elements".
  const std::vector<Elt>& generators() const { return gens_; }
  std::vector<Elt> generators_or_all() const;
  void set_generators(std::vector<Elt> g);  // validated

  const std::vector<Elt>& flat_table() const { return table_; }
  std::vector<std::vector<Elt>> table_rows() const;

  void check_elt(Elt a) const {
    if (a < 0 || a >= n_)
      fail(ErrorCode::ElementOutOfRange,
           "element " + std::to_string(a) + " out of range [0," +
               std::to_string(n_) + ")");
  }

  bool same_table(const FiniteGroup& other) const {
    return n_ == other.n_ && table_ == other.table_;
  }

 private:
  FiniteGroup() = default;
  int n_ = 0;
  Elt id_ = 0;
  std::vector<Elt> table_;  // row-major n*n
  std::vector<Elt> inv_;
  std::vector<Elt> gens_;
};

// Subgroup of a fixed parent group, stored as a sorted member list.
struct FiniteSubgroup {
  FiniteGroupPtr parent;
  std::vector<Elt> members;  // sorted, contains identity, closed

  static FiniteSubgroup trivial_in(const FiniteGroupPtr& g);
  static FiniteSubgroup whole(const FiniteGroupPtr& g);
  // Closure of the given elements; throws if parent is null.
  static FiniteSubgroup generated_by(const FiniteGroupPtr& g,
                                     const std::vector<Elt>& elts);
  // Validates closure/identity/inverses; throws NotSubgroup with a witness.
  static FiniteSubgroup from_members(const FiniteGroupPtr& g,
                                     std::vector<Elt> members);

  int order() const { return static_cast<int>(members.size()); }
  bool contains(Elt a) const;
  bool operator==(const FiniteSubgroup& o) const {
    return parent.get() == o.parent.get() && members == o.members;
  }
};

bool is_normal(const FiniteSubgroup& h);

// All subgroups of g, sorted by (order, member list).  Throws
// OrderBoundExceeded if |g| > order_bound.
std::vector<FiniteSubgroup> all_subgroups(const FiniteGroupPtr& g,
                                          int order_bound = 48);

// Homomorphism between finite groups, given by images of every element.
struct FiniteHom {
  FiniteGroupPtr source;
  FiniteGroupPtr target;
  std::vector<Elt> images;  // images[a] for every a in source

  // Validates f(ab) = f(a)f(b) for all pairs; throws NotHomomorphism
  // naming a witness pair.
  static FiniteHom make(FiniteGroupPtr source, FiniteGroupPtr target,
                        std::vector<Elt> images);
  static FiniteHom identity(const FiniteGroupPtr& g);

  Elt operator()(Elt a) const {
    source->check_elt(a);
    return images[a];
  }
  FiniteHom after(const FiniteHom& inner) const;  // this ∘ inner
};

struct HomProperties {
  bool injective = false;
  bool surjective = false;
  FiniteSubgroup kernel;
  FiniteSubgroup image;
};

HomProperties hom_properties(const FiniteHom& f);

// Order of a bijective endomorphism under composition.  Throws
// NotAutomorphism if f is not a bijective self-map homomorphism.
int automorphism_order(const FiniteHom& f);

// Inverse of an automorphism.
FiniteHom automorphism_inverse(const FiniteHom& f);

// Quotient of g by a normal subgroup.  Cosets are represented by their
// minimal-index element; the quotient group's element i corresponds to
// coset_reps[i], with reps sorted ascending.
struct QuotientGroup {
  FiniteGroupPtr group;
  FiniteHom projection;         // g -> group
  std::vector<Elt> coset_reps;  // indexed by quotient element
};

QuotientGroup quotient(const FiniteGroupPtr& g, const FiniteSubgroup& n);

}  // namespace ggk
