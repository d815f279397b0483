#include "ggk/finite_group.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ggk {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::BadTable: return "BadTable";
    case ErrorCode::NotAssociative: return "NotAssociative";
    case ErrorCode::NoIdentity: return "NoIdentity";
    case ErrorCode::NoInverse: return "NoInverse";
    case ErrorCode::ElementOutOfRange: return "ElementOutOfRange";
    case ErrorCode::NotBijective: return "NotBijective";
    case ErrorCode::NotHomomorphism: return "NotHomomorphism";
    case ErrorCode::NotSubgroup: return "NotSubgroup";
    case ErrorCode::NotNormal: return "NotNormal";
    case ErrorCode::OrderBoundExceeded: return "OrderBoundExceeded";
    case ErrorCode::NotAutomorphism: return "NotAutomorphism";
    case ErrorCode::BadVariant: return "BadVariant";
    case ErrorCode::RelationViolated: return "RelationViolated";
    case ErrorCode::NotZorDinfty: return "NotZorDinfty";
    case ErrorCode::NotInjective: return "NotInjective";
    case ErrorCode::PreimageNotFinite: return "PreimageNotFinite";
    case ErrorCode::NotWellDefined: return "NotWellDefined";
    case ErrorCode::GraphInvariantViolated: return "GraphInvariantViolated";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::UnknownEdge: return "UnknownEdge";
    case ErrorCode::MonoNotInjective: return "MonoNotInjective";
    case ErrorCode::EdgeGroupNotFinite: return "EdgeGroupNotFinite";
    case ErrorCode::EdgeGroupFinite: return "EdgeGroupFinite";
    case ErrorCode::VertexGroupFinite: return "VertexGroupFinite";
    case ErrorCode::VertexNotZorDinfty: return "VertexNotZorDinfty";
    case ErrorCode::TokenTypeMismatch: return "TokenTypeMismatch";
    case ErrorCode::EdgeCosetEnumerationCapExceeded:
      return "EdgeCosetEnumerationCapExceeded";
    case ErrorCode::NotMember: return "NotMember";
    case ErrorCode::ProjectionMismatch: return "ProjectionMismatch";
    case ErrorCode::InducedMapNotInjective: return "InducedMapNotInjective";
    case ErrorCode::KernelClassMismatch: return "KernelClassMismatch";
    case ErrorCode::ClaimViolated: return "ClaimViolated";
    case ErrorCode::GroupFinite: return "GroupFinite";
    case ErrorCode::NotNormalCyclic: return "NotNormalCyclic";
    case ErrorCode::RuleShapeMismatch: return "RuleShapeMismatch";
    case ErrorCode::SideConditionFailed: return "SideConditionFailed";
    case ErrorCode::HashMismatch: return "HashMismatch";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::UnknownRule: return "UnknownRule";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

FiniteGroupPtr FiniteGroup::from_table(
    const std::vector<std::vector<Elt>>& table) {
  auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
  const int n = static_cast<int>(table.size());
  if (n == 0) fail(ErrorCode::BadTable, "empty table");
  g->n_ = n;
  g->table_.resize(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(table[a].size()) != n)
      fail(ErrorCode::BadTable,
           "row " + std::to_string(a) + " has length " +
               std::to_string(table[a].size()) + ", expected " +
               std::to_string(n));
    for (int b = 0; b < n; ++b) {
      Elt v = table[a][b];
      if (v < 0 || v >= n)
        fail(ErrorCode::BadTable, "entry (" + std::to_string(a) + "," +
                                      std::to_string(b) + ") = " +
                                      std::to_string(v) + " out of range");
      g->table_[static_cast<size_t>(a) * n + b] = v;
    }
  }
  auto tab = [&](Elt a, Elt b) {
    return g->table_[static_cast<size_t>(a) * n + b];
  };
  // exhaustive associativity check
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (tab(tab(a, b), c) != tab(a, tab(b, c)))
          fail(ErrorCode::NotAssociative,
               "witness (" + std::to_string(a) + "," + std::to_string(b) +
                   "," + std::to_string(c) + ")");
  // two-sided identity
  int id = -1;
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      ok = tab(e, a) == a && tab(a, e) == a;
    if (ok) { id = e; break; }
  }
  if (id < 0) fail(ErrorCode::NoIdentity, "no two-sided identity");
  g->id_ = id;
  // two-sided inverses
  g->inv_.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (tab(a, b) == id && tab(b, a) == id) { g->inv_[a] = b; break; }
    }
    if (g->inv_[a] < 0)
      fail(ErrorCode::NoInverse, "element " + std::to_string(a));
  }
  return g;
}

FiniteGroupPtr FiniteGroup::from_perm_gens(
    const std::vector<std::vector<int>>& gens) {
  if (gens.empty()) fail(ErrorCode::BadTable, "no permutation generators");
  const size_t k = gens[0].size();
  if (k == 0) fail(ErrorCode::BadTable, "empty permutation");
  for (const auto& p : gens) {
    if (p.size() != k)
      fail(ErrorCode::BadTable, "permutation length mismatch");
    std::vector<bool> seen(k, false);
    for (int v : p) {
      if (v < 0 || static_cast<size_t>(v) >= k || seen[v])
        fail(ErrorCode::BadTable, "not a permutation");
      seen[v] = true;
    }
  }
  std::vector<int> idp(k);
  for (size_t i = 0; i < k; ++i) idp[i] = static_cast<int>(i);
  auto compose = [&](const std::vector<int>& p, const std::vector<int>& q) {
    // (p*q)(i) = p(q(i))
    std::vector<int> r(k);
    for (size_t i = 0; i < k; ++i) r[i] = p[q[i]];
    return r;
  };
  // BFS closure from the identity; discovery order fixes element numbering.
  std::vector<std::vector<int>> elems{idp};
  std::map<std::vector<int>, Elt> index{{idp, 0}};
  for (size_t head = 0; head < elems.size(); ++head) {
    for (const auto& gperm : gens) {
      auto nxt = compose(elems[head], gperm);
      if (!index.count(nxt)) {
        index[nxt] = static_cast<Elt>(elems.size());
        elems.push_back(nxt);
      }
    }
  }
  const int n = static_cast<int>(elems.size());
  std::vector<std::vector<Elt>> table(n, std::vector<Elt>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      table[a][b] = index.at(compose(elems[a], elems[b]));
  auto g = from_table(table);
  std::vector<Elt> gidx;
  for (const auto& p : gens) gidx.push_back(index.at(p));
  std::sort(gidx.begin(), gidx.end());
  gidx.erase(std::unique(gidx.begin(), gidx.end()), gidx.end());
  const_cast<FiniteGroup*>(g.get())->gens_ = gidx;
  return g;
}

FiniteGroupPtr FiniteGroup::trivial() { return cyclic(1); }

FiniteGroupPtr FiniteGroup::cyclic(int n) {
  if (n < 1) fail(ErrorCode::BadTable, "cyclic order must be >= 1");
  std::vector<std::vector<Elt>> t(n, std::vector<Elt>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  auto g = from_table(t);
  if (n > 1) const_cast<FiniteGroup*>(g.get())->gens_ = {1};
  return g;
}

FiniteGroupPtr FiniteGroup::dihedral(int n) {
  if (n < 1) fail(ErrorCode::BadTable, "dihedral parameter must be >= 1");
  // rotation r = i -> i+1 mod n, reflection s = i -> -i mod n
  std::vector<int> rot(n), refl(n);
  for (int i = 0; i < n; ++i) {
    rot[i] = (i + 1) % n;
    refl[i] = (n - i) % n;
  }
  if (n == 1) {
    // degenerate: act on 2 points to keep the reflection visible
    return from_perm_gens({{1, 0}});
  }
  if (n == 2) {
    // r and s both have order 2 on 2 points; act on 4 points instead
    return from_perm_gens({{1, 0, 3, 2}, {2, 3, 0, 1}});
  }
  return from_perm_gens({rot, refl});
}

FiniteGroupPtr FiniteGroup::quaternion() {
  // Q8 as {1,-1,i,-i,j,-j,k,-k} with indices 0..7
  // encode via the regular multiplication rules
  auto idx = [](int sign, int axis) { return axis * 2 + (sign < 0 ? 1 : 0); };
  // axis: 0=1, 1=i, 2=j, 3=k
  auto mulq = [&](int a, int b) {
    int ax = a / 2, bx = b / 2;
    int as = (a % 2) ? -1 : 1, bs = (b % 2) ? -1 : 1;
    static const int axtab[4][4] = {
        {0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static const int sgtab[4][4] = {
        {1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
    return idx(as * bs * sgtab[ax][bx], axtab[ax][bx]);
  };
  std::vector<std::vector<Elt>> t(8, std::vector<Elt>(8));
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) t[a][b] = mulq(a, b);
  auto g = from_table(t);
  const_cast<FiniteGroup*>(g.get())->gens_ = {2, 4};  // i, j
  return g;
}

FiniteGroupPtr FiniteGroup::symmetric(int n) {
  if (n < 1 || n > 5) fail(ErrorCode::BadTable, "symmetric: n in [1,5]");
  if (n == 1) return trivial();
  std::vector<int> cyc(n), swp(n);
  for (int i = 0; i < n; ++i) { cyc[i] = (i + 1) % n; swp[i] = i; }
  std::swap(swp[0], swp[1]);
  return from_perm_gens({cyc, swp});
}

FiniteGroupPtr FiniteGroup::direct_product(const FiniteGroupPtr& a,
                                           const FiniteGroupPtr& b) {
  const int na = a->order(), nb = b->order();
  const int n = na * nb;
  std::vector<std::vector<Elt>> t(n, std::vector<Elt>(n));
  auto enc = [&](Elt x, Elt y) { return x * nb + y; };
  for (int x1 = 0; x1 < na; ++x1)
    for (int y1 = 0; y1 < nb; ++y1)
      for (int x2 = 0; x2 < na; ++x2)
        for (int y2 = 0; y2 < nb; ++y2)
          t[enc(x1, y1)][enc(x2, y2)] = enc(a->mul(x1, x2), b->mul(y1, y2));
  return from_table(t);
}

Elt FiniteGroup::pow(Elt a, long long k) const {
  check_elt(a);
  Elt base = k >= 0 ? a : inv(a);
  unsigned long long e = k >= 0 ? static_cast<unsigned long long>(k)
                                : static_cast<unsigned long long>(-(k + 1)) + 1;
  Elt acc = id_;
  while (e) {
    if (e & 1) acc = mul(acc, base);
    base = mul(base, base);
    e >>= 1;
  }
  return acc;
}

int FiniteGroup::element_order(Elt a) const {
  check_elt(a);
  Elt x = a;
  int k = 1;
  while (x != id_) {
    x = mul(x, a);
    ++k;
    require_internal(k <= n_, "element order exceeds group order");
  }
  return k;
}

std::vector<Elt> FiniteGroup::generators_or_all() const {
  if (!gens_.empty()) return gens_;
  std::vector<Elt> all;
  all.reserve(static_cast<size_t>(n_ > 0 ? n_ - 1 : 0));
  for (int i = 0; i < n_; ++i)
    if (i != id_) all.push_back(i);  // the identity generates nothing
  return all;
}

void FiniteGroup::set_generators(std::vector<Elt> g) {
  for (Elt a : g) check_elt(a);
  // must actually generate
  std::set<Elt> closure{id_};
  std::vector<Elt> frontier{id_};
  while (!frontier.empty()) {
    std::vector<Elt> next;
    for (Elt x : frontier)
      for (Elt s : g) {
        Elt y = mul(x, s);
        if (closure.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  if (static_cast<int>(closure.size()) != n_)
    fail(ErrorCode::NotSubgroup, "set does not generate the group");
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  gens_ = std::move(g);
}

std::vector<std::vector<Elt>> FiniteGroup::table_rows() const {
  std::vector<std::vector<Elt>> rows(n_, std::vector<Elt>(n_));
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b)
      rows[a][b] = table_[static_cast<size_t>(a) * n_ + b];
  return rows;
}

FiniteSubgroup FiniteSubgroup::trivial_in(const FiniteGroupPtr& g) {
  return FiniteSubgroup{g, {g->identity()}};
}

FiniteSubgroup FiniteSubgroup::whole(const FiniteGroupPtr& g) {
  std::vector<Elt> m(g->order());
  for (int i = 0; i < g->order(); ++i) m[i] = i;
  return FiniteSubgroup{g, m};
}

FiniteSubgroup FiniteSubgroup::generated_by(const FiniteGroupPtr& g,
                                            const std::vector<Elt>& elts) {
  require_internal(g != nullptr, "null parent group");
  std::set<Elt> closure{g->identity()};
  std::vector<Elt> frontier{g->identity()};
  std::vector<Elt> seeds;
  for (Elt a : elts) {
    g->check_elt(a);
    seeds.push_back(a);
    seeds.push_back(g->inv(a));
  }
  while (!frontier.empty()) {
    std::vector<Elt> next;
    for (Elt x : frontier)
      for (Elt s : seeds) {
        Elt y = g->mul(x, s);
        if (closure.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  return FiniteSubgroup{g, std::vector<Elt>(closure.begin(), closure.end())};
}

FiniteSubgroup FiniteSubgroup::from_members(const FiniteGroupPtr& g,
                                            std::vector<Elt> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  FiniteSubgroup h{g, members};
  if (!h.contains(g->identity()))
    fail(ErrorCode::NotSubgroup, "missing identity");
  for (Elt a : members) {
    g->check_elt(a);
    if (!h.contains(g->inv(a)))
      fail(ErrorCode::NotSubgroup,
           "missing inverse of " + std::to_string(a));
    for (Elt b : members)
      if (!h.contains(g->mul(a, b)))
        fail(ErrorCode::NotSubgroup, "not closed at (" + std::to_string(a) +
                                         "," + std::to_string(b) + ")");
  }
  return h;
}

bool FiniteSubgroup::contains(Elt a) const {
  return std::binary_search(members.begin(), members.end(), a);
}

bool is_normal(const FiniteSubgroup& h) {
  const auto& g = *h.parent;
  for (Elt x = 0; x < g.order(); ++x)
    for (Elt m : h.members)
      if (!h.contains(g.conj(x, m))) return false;
  return true;
}

std::vector<FiniteSubgroup> all_subgroups(const FiniteGroupPtr& g,
                                          int order_bound) {
  if (g->order() > order_bound)
    fail(ErrorCode::OrderBoundExceeded,
         "group order " + std::to_string(g->order()) + " exceeds bound " +
             std::to_string(order_bound));
  // Grow subgroups by adjoining one element at a time until saturation.
  std::set<std::vector<Elt>> seen;
  std::vector<FiniteSubgroup> out;
  std::vector<std::vector<Elt>> frontier;
  auto triv = FiniteSubgroup::trivial_in(g);
  seen.insert(triv.members);
  out.push_back(triv);
  frontier.push_back(triv.members);
  while (!frontier.empty()) {
    std::vector<std::vector<Elt>> next;
    for (const auto& base : frontier) {
      for (Elt a = 0; a < g->order(); ++a) {
        if (std::binary_search(base.begin(), base.end(), a)) continue;
        auto seeds = base;
        seeds.push_back(a);
        auto h = FiniteSubgroup::generated_by(g, seeds);
        if (seen.insert(h.members).second) {
          out.push_back(h);
          next.push_back(h.members);
        }
      }
    }
    frontier = std::move(next);
  }
  std::sort(out.begin(), out.end(),
            [](const FiniteSubgroup& a, const FiniteSubgroup& b) {
              if (a.members.size() != b.members.size())
                return a.members.size() < b.members.size();
              return a.members < b.members;
            });
  return out;
}

FiniteHom FiniteHom::make(FiniteGroupPtr source, FiniteGroupPtr target,
                          std::vector<Elt> images) {
  require_internal(source && target, "null group in hom");
  if (static_cast<int>(images.size()) != source->order())
    fail(ErrorCode::NotHomomorphism,
         "image list has length " + std::to_string(images.size()) +
             ", expected " + std::to_string(source->order()));
  for (Elt v : images) target->check_elt(v);
  for (Elt a = 0; a < source->order(); ++a)
    for (Elt b = 0; b < source->order(); ++b) {
      Elt lhs = images[source->mul(a, b)];
      Elt rhs = target->mul(images[a], images[b]);
      if (lhs != rhs)
        fail(ErrorCode::NotHomomorphism,
             "witness pair (" + std::to_string(a) + "," + std::to_string(b) +
                 ")");
    }
  return FiniteHom{std::move(source), std::move(target), std::move(images)};
}

FiniteHom FiniteHom::identity(const FiniteGroupPtr& g) {
  std::vector<Elt> ims(g->order());
  for (int i = 0; i < g->order(); ++i) ims[i] = i;
  return FiniteHom{g, g, std::move(ims)};
}

FiniteHom FiniteHom::after(const FiniteHom& inner) const {
  require_internal(inner.target.get() == source.get() ||
                       inner.target->same_table(*source),
                   "hom composition type mismatch");
  std::vector<Elt> ims(inner.source->order());
  for (int i = 0; i < inner.source->order(); ++i) ims[i] = images[inner.images[i]];
  return FiniteHom{inner.source, target, std::move(ims)};
}

HomProperties hom_properties(const FiniteHom& f) {
  HomProperties p;
  std::vector<Elt> ker, img;
  for (Elt a = 0; a < f.source->order(); ++a) {
    if (f.images[a] == f.target->identity()) ker.push_back(a);
    img.push_back(f.images[a]);
  }
  std::sort(img.begin(), img.end());
  img.erase(std::unique(img.begin(), img.end()), img.end());
  p.kernel = FiniteSubgroup{f.source, ker};
  p.image = FiniteSubgroup{f.target, img};
  p.injective = ker.size() == 1;
  p.surjective = static_cast<int>(img.size()) == f.target->order();
  return p;
}

int automorphism_order(const FiniteHom& f) {
  if (f.source.get() != f.target.get() && !f.source->same_table(*f.target))
    fail(ErrorCode::NotAutomorphism, "not an endomorphism");
  auto p = hom_properties(f);
  if (!p.injective || !p.surjective)
    fail(ErrorCode::NotAutomorphism, "not bijective");
  const int n = f.source->order();
  std::vector<Elt> cur = f.images;
  auto is_id = [&]() {
    for (int i = 0; i < n; ++i)
      if (cur[i] != i) return false;
    return true;
  };
  int k = 1;
  while (!is_id()) {
    std::vector<Elt> nxt(n);
    for (int i = 0; i < n; ++i) nxt[i] = f.images[cur[i]];
    cur = std::move(nxt);
    ++k;
    require_internal(k <= 1 << 20, "automorphism order runaway");
  }
  return k;
}

FiniteHom automorphism_inverse(const FiniteHom& f) {
  auto p = hom_properties(f);
  if (!p.injective || !p.surjective ||
      (f.source.get() != f.target.get() && !f.source->same_table(*f.target)))
    fail(ErrorCode::NotAutomorphism, "not an automorphism");
  std::vector<Elt> inv(f.source->order());
  for (Elt a = 0; a < f.source->order(); ++a) inv[f.images[a]] = a;
  return FiniteHom{f.target, f.source, std::move(inv)};
}

QuotientGroup quotient(const FiniteGroupPtr& g, const FiniteSubgroup& n) {
  require_internal(n.parent.get() == g.get(), "subgroup of a different group");
  if (!is_normal(n)) {
    // name a witness
    for (Elt x = 0; x < g->order(); ++x)
      for (Elt m : n.members)
        if (!n.contains(g->conj(x, m)))
          fail(ErrorCode::NotNormal, "conjugate of " + std::to_string(m) +
                                         " by " + std::to_string(x) +
                                         " leaves the subgroup");
  }
  const int go = g->order();
  // coset of a = minimal element of a*N
  std::vector<Elt> coset_min(go, -1);
  for (Elt a = 0; a < go; ++a) {
    Elt mn = a;
    for (Elt m : n.members) mn = std::min(mn, g->mul(a, m));
    coset_min[a] = mn;
  }
  std::vector<Elt> reps;
  for (Elt a = 0; a < go; ++a)
    if (coset_min[a] == a) reps.push_back(a);
  std::sort(reps.begin(), reps.end());
  std::map<Elt, Elt> rep_index;
  for (size_t i = 0; i < reps.size(); ++i)
    rep_index[reps[i]] = static_cast<Elt>(i);
  const int qn = static_cast<int>(reps.size());
  std::vector<std::vector<Elt>> t(qn, std::vector<Elt>(qn));
  for (int i = 0; i < qn; ++i)
    for (int j = 0; j < qn; ++j)
      t[i][j] = rep_index.at(coset_min[g->mul(reps[i], reps[j])]);
  auto q = FiniteGroup::from_table(t);
  std::vector<Elt> proj(go);
  for (Elt a = 0; a < go; ++a) proj[a] = rep_index.at(coset_min[a]);
  return QuotientGroup{q, FiniteHom::make(g, q, std::move(proj)), reps};
}

}  // namespace ggk
