#include "ggk/vcgroup.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <string>

namespace ggk {

namespace {

int pos_mod(long long n, int m) {
  long long r = n % m;
  if (r < 0) r += m;
  return static_cast<int>(r);
}

std::string elt_str(const VCElement& x) {
  return "(" + std::to_string(x.f) + ",(" + std::to_string(x.n) + "," +
         std::to_string(x.eps) + "))";
}

}  // namespace

// ---------------------------------------------------------------------------
// construction

VCGroupPtr VCGroup::finite(FiniteGroupPtr f) {
  require_internal(f != nullptr, "finite variant: null finite group");
  auto g = std::shared_ptr<VCGroup>(new VCGroup());
  g->variant_ = VCClass::Finite;
  g->fpart_ = std::move(f);
  return g;
}

VCGroupPtr VCGroup::orientable(FiniteGroupPtr f, FiniteHom alpha) {
  require_internal(f != nullptr, "orientable variant: null finite group");
  if (!alpha.source || !alpha.target || !alpha.source->same_table(*f) ||
      !alpha.target->same_table(*f))
    fail(ErrorCode::NotAutomorphism,
         "conjugation action must be a self-map of the finite part");
  auto g = std::shared_ptr<VCGroup>(new VCGroup());
  g->variant_ = VCClass::Orientable;
  g->fpart_ = std::move(f);
  g->alpha_order_ = automorphism_order(alpha);
  const int n = g->fpart_->order();
  g->alpha_pows_.assign(static_cast<size_t>(g->alpha_order_),
                        std::vector<Elt>(static_cast<size_t>(n)));
  for (Elt x = 0; x < n; ++x) g->alpha_pows_[0][x] = x;
  for (int k = 1; k < g->alpha_order_; ++k)
    for (Elt x = 0; x < n; ++x)
      g->alpha_pows_[k][x] = alpha(g->alpha_pows_[k - 1][x]);
  g->alpha_ = std::move(alpha);
  return g;
}

VCGroupPtr VCGroup::nonorientable(FiniteGroupPtr c, FiniteGroupPtr a,
                                  FiniteGroupPtr b, FiniteHom emb_a,
                                  FiniteHom emb_b, Elt refl_a, Elt refl_b) {
  require_internal(c && a && b, "nonorientable variant: null group");
  auto check_side = [&](const FiniteHom& emb, const FiniteGroupPtr& ambient,
                        Elt refl, const char* side) {
    if (!emb.source || !emb.source->same_table(*c))
      fail(ErrorCode::NotHomomorphism,
           std::string("side ") + side + ": embedding source is not C");
    if (!emb.target || !emb.target->same_table(*ambient))
      fail(ErrorCode::NotHomomorphism,
           std::string("side ") + side + ": embedding target mismatch");
    if (!hom_properties(emb).injective)
      fail(ErrorCode::NotInjective,
           std::string("side ") + side + ": embedding of C is not injective");
    if (ambient->order() != 2 * c->order())
      fail(ErrorCode::BadVariant,
           std::string("side ") + side + ": C must have index 2, got |ambient|=" +
               std::to_string(ambient->order()) + " |C|=" +
               std::to_string(c->order()));
    ambient->check_elt(refl);
    for (Elt x = 0; x < c->order(); ++x)
      if (emb(x) == refl)
        fail(ErrorCode::BadVariant, std::string("side ") + side +
                                        ": reflection representative " +
                                        std::to_string(refl) +
                                        " lies in the embedded copy of C");
  };
  check_side(emb_a, a, refl_a, "A");
  check_side(emb_b, b, refl_b, "B");

  auto g = std::shared_ptr<VCGroup>(new VCGroup());
  g->variant_ = VCClass::Nonorientable;
  g->fpart_ = std::move(c);
  g->a_ = std::move(a);
  g->b_ = std::move(b);
  g->emb_a_ = std::move(emb_a);
  g->emb_b_ = std::move(emb_b);
  g->refl_a_ = refl_a;
  g->refl_b_ = refl_b;
  g->precompute_nonorientable();
  return g;
}

void VCGroup::precompute_nonorientable() {
  const FiniteGroup& C = *fpart_;
  const int nc = C.order();

  auto pull_back = [&](const FiniteHom& emb, const FiniteGroupPtr& ambient,
                       Elt ambient_elt) -> Elt {
    for (Elt x = 0; x < nc; ++x)
      if (emb(x) == ambient_elt) return x;
    // An index-2 subgroup is normal, so conjugates and coset squares land in
    // the embedded copy of C; a miss here is a library bug.
    require_internal(false, "element expected inside the embedded copy of C");
    return 0;
  };

  phi_a_.resize(static_cast<size_t>(nc));
  phi_b_.resize(static_cast<size_t>(nc));
  for (Elt x = 0; x < nc; ++x) {
    phi_a_[x] = pull_back(*emb_a_, a_, a_->conj(refl_a_, (*emb_a_)(x)));
    phi_b_[x] = pull_back(*emb_b_, b_, b_->conj(refl_b_, (*emb_b_)(x)));
  }
  sq_a_ = pull_back(*emb_a_, a_, a_->mul(refl_a_, refl_a_));
  sq_b_ = pull_back(*emb_b_, b_, b_->mul(refl_b_, refl_b_));
  // C-part of (a b) conjugated by a: a·(ab)·a⁻¹ = a²·(b·a⁻¹) = a²b²·(ab)⁻¹.
  y_a_ = C.mul(sq_a_, sq_b_);

  // phi_tau = phi_a ∘ phi_b; find its order and tabulate all powers
  std::vector<Elt> tau(static_cast<size_t>(nc)), cur(static_cast<size_t>(nc));
  for (Elt x = 0; x < nc; ++x) tau[x] = phi_a_[phi_b_[x]];
  phi_tau_pows_.clear();
  for (Elt x = 0; x < nc; ++x) cur[x] = x;
  phi_tau_pows_.push_back(cur);
  for (;;) {
    bool is_id = true;
    for (Elt x = 0; x < nc; ++x) {
      cur[x] = tau[cur[x]];
      if (cur[x] != x) is_id = false;
    }
    if (is_id) break;
    phi_tau_pows_.push_back(cur);
    require_internal(static_cast<int>(phi_tau_pows_.size()) <= nc * nc + 1,
                     "conjugation by tau is not a finite-order permutation");
  }
  phi_tau_order_ = static_cast<int>(phi_tau_pows_.size());
}

VCGroupPtr VCGroup::trivial_model() {
  static VCGroupPtr m = VCGroup::finite(FiniteGroup::trivial());
  return m;
}

VCGroupPtr VCGroup::z_model() {
  static VCGroupPtr m = [] {
    FiniteGroupPtr t = FiniteGroup::trivial();
    return VCGroup::orientable(t, FiniteHom::identity(t));
  }();
  return m;
}

VCGroupPtr VCGroup::dinfty_model() {
  static VCGroupPtr m = [] {
    FiniteGroupPtr c = FiniteGroup::trivial();
    FiniteGroupPtr z2a = FiniteGroup::cyclic(2);
    FiniteGroupPtr z2b = FiniteGroup::cyclic(2);
    FiniteHom ea = FiniteHom::make(c, z2a, {z2a->identity()});
    FiniteHom eb = FiniteHom::make(c, z2b, {z2b->identity()});
    return VCGroup::nonorientable(c, z2a, z2b, ea, eb, 1, 1);
  }();
  return m;
}

// ---------------------------------------------------------------------------
// accessors

const FiniteHom& VCGroup::alpha() const {
  if (variant_ != VCClass::Orientable)
    fail(ErrorCode::BadVariant, "alpha: not an orientable group");
  return *alpha_;
}

int VCGroup::alpha_order() const {
  if (variant_ != VCClass::Orientable)
    fail(ErrorCode::BadVariant, "alpha_order: not an orientable group");
  return alpha_order_;
}

Elt VCGroup::alpha_pow(Elt f, long long k) const {
  if (variant_ != VCClass::Orientable)
    fail(ErrorCode::BadVariant, "alpha_pow: not an orientable group");
  fpart_->check_elt(f);
  return alpha_pows_[static_cast<size_t>(pos_mod(k, alpha_order_))][f];
}

const FiniteGroupPtr& VCGroup::amalgam_a() const {
  if (variant_ != VCClass::Nonorientable)
    fail(ErrorCode::BadVariant, "amalgam_a: not a nonorientable group");
  return a_;
}

const FiniteGroupPtr& VCGroup::amalgam_b() const {
  if (variant_ != VCClass::Nonorientable)
    fail(ErrorCode::BadVariant, "amalgam_b: not a nonorientable group");
  return b_;
}

const FiniteHom& VCGroup::emb_a() const {
  if (variant_ != VCClass::Nonorientable)
    fail(ErrorCode::BadVariant, "emb_a: not a nonorientable group");
  return *emb_a_;
}

const FiniteHom& VCGroup::emb_b() const {
  if (variant_ != VCClass::Nonorientable)
    fail(ErrorCode::BadVariant, "emb_b: not a nonorientable group");
  return *emb_b_;
}

Elt VCGroup::refl_a() const {
  if (variant_ != VCClass::Nonorientable)
    fail(ErrorCode::BadVariant, "refl_a: not a nonorientable group");
  return refl_a_;
}

Elt VCGroup::refl_b() const {
  if (variant_ != VCClass::Nonorientable)
    fail(ErrorCode::BadVariant, "refl_b: not a nonorientable group");
  return refl_b_;
}

Elt VCGroup::phi_a(Elt c) const {
  if (variant_ != VCClass::Nonorientable)
    fail(ErrorCode::BadVariant, "phi_a: not a nonorientable group");
  fpart_->check_elt(c);
  return phi_a_[c];
}

Elt VCGroup::phi_b(Elt c) const {
  if (variant_ != VCClass::Nonorientable)
    fail(ErrorCode::BadVariant, "phi_b: not a nonorientable group");
  fpart_->check_elt(c);
  return phi_b_[c];
}

Elt VCGroup::phi_tau_pow(Elt c, long long k) const {
  if (variant_ != VCClass::Nonorientable)
    fail(ErrorCode::BadVariant, "phi_tau_pow: not a nonorientable group");
  fpart_->check_elt(c);
  return phi_tau_pows_[static_cast<size_t>(pos_mod(k, phi_tau_order_))][c];
}

Elt VCGroup::sq_a() const {
  if (variant_ != VCClass::Nonorientable)
    fail(ErrorCode::BadVariant, "sq_a: not a nonorientable group");
  return sq_a_;
}

Elt VCGroup::sq_b() const {
  if (variant_ != VCClass::Nonorientable)
    fail(ErrorCode::BadVariant, "sq_b: not a nonorientable group");
  return sq_b_;
}

int VCGroup::phi_tau_order() const {
  if (variant_ != VCClass::Nonorientable)
    fail(ErrorCode::BadVariant, "phi_tau_order: not a nonorientable group");
  return phi_tau_order_;
}

// ---------------------------------------------------------------------------
// element arithmetic

void VCGroup::check_elt(const VCElement& x) const {
  fpart_->check_elt(x.f);
  switch (variant_) {
    case VCClass::Finite:
      if (x.n != 0 || x.eps != 0)
        fail(ErrorCode::BadVariant,
             "finite-group element carries a translation part " + elt_str(x));
      break;
    case VCClass::Orientable:
      if (x.eps != 0)
        fail(ErrorCode::BadVariant,
             "orientable element carries a dihedral bit " + elt_str(x));
      break;
    case VCClass::Nonorientable:
      if (x.eps != 0 && x.eps != 1)
        fail(ErrorCode::BadVariant,
             "dihedral bit must be 0 or 1 in " + elt_str(x));
      break;
  }
}

// C-part of the relation a·tau^n = mu(n)·tau^{-n}·a, i.e. the cocycle of the
// twisted power (y_a·tau^{-1})^n.  For |n| beyond two periods of phi_tau the
// product telescopes into prefix · shifted block-power.
Elt VCGroup::mu(long long n) const {
  const FiniteGroup& C = *fpart_;
  const int p = phi_tau_order_;
  auto phi = [&](Elt c, long long k) {
    return phi_tau_pows_[static_cast<size_t>(pos_mod(k, p))][c];
  };
  if (n >= 0) {
    if (n <= 2LL * p) {
      Elt acc = C.identity();
      for (long long i = 0; i < n; ++i) acc = C.mul(acc, phi(y_a_, -i));
      return acc;
    }
    const long long q = n / p;
    const int r = static_cast<int>(n % p);
    Elt pref = C.identity();
    for (int i = 0; i < r; ++i) pref = C.mul(pref, phi(y_a_, -i));
    Elt block = C.identity();
    for (int i = 0; i < p; ++i) block = C.mul(block, phi(y_a_, -i));
    return C.mul(pref, phi(C.pow(block, q), -r));
  }
  const long long m = -n;
  const Elt yi = C.inv(y_a_);
  if (m <= 2LL * p) {
    Elt acc = C.identity();
    for (long long i = 0; i < m; ++i) acc = C.mul(acc, phi(yi, i + 1));
    return acc;
  }
  const long long q = m / p;
  const int r = static_cast<int>(m % p);
  Elt pref = C.identity();
  for (int i = 0; i < r; ++i) pref = C.mul(pref, phi(yi, i + 1));
  Elt block = C.identity();
  for (int i = 0; i < p; ++i) block = C.mul(block, phi(yi, i + 1));
  return C.mul(pref, phi(C.pow(block, q), r));
}

VCElement VCGroup::mul(const VCElement& x, const VCElement& y) const {
  check_elt(x);
  check_elt(y);
  switch (variant_) {
    case VCClass::Finite:
      return VCElement{fpart_->mul(x.f, y.f), 0, 0};
    case VCClass::Orientable:
      return VCElement{fpart_->mul(x.f, alpha_pow(y.f, x.n)), x.n + y.n, 0};
    case VCClass::Nonorientable:
      break;
  }
  const FiniteGroup& C = *fpart_;
  // x = c1·tau^{n1}·a^{e1}, y = c2·tau^{n2}·a^{e2}: push c2 left through
  // x's section, then absorb the a–tau crossings into C.
  Elt c = C.mul(x.f, phi_tau_pow(x.eps ? phi_a_[y.f] : y.f, x.n));
  DihedralWord d = DihedralWord::mul(x.dihedral(), y.dihedral());
  if (x.eps) {
    c = C.mul(c, phi_tau_pow(mu(y.n), x.n));
    if (y.eps) c = C.mul(c, phi_tau_pow(sq_a_, x.n - y.n));
  }
  return VCElement{c, d.n, d.eps};
}

VCElement VCGroup::inv(const VCElement& x) const {
  check_elt(x);
  switch (variant_) {
    case VCClass::Finite:
      return VCElement{fpart_->inv(x.f), 0, 0};
    case VCClass::Orientable:
      return VCElement{alpha_pow(fpart_->inv(x.f), -x.n), -x.n, 0};
    case VCClass::Nonorientable:
      break;
  }
  const FiniteGroup& C = *fpart_;
  if (x.eps == 0)
    return VCElement{phi_tau_pow(C.inv(x.f), -x.n), -x.n, 0};
  // (c·tau^n·a)^{-1} = a^{-1}·tau^{-n}·c^{-1} with a^{-1} = a²^{-1}·a
  Elt c = C.mul(C.mul(C.inv(sq_a_), mu(-x.n)),
                phi_tau_pow(phi_a_[C.inv(x.f)], x.n));
  return VCElement{c, x.n, 1};
}

VCElement VCGroup::pow(const VCElement& x, long long k) const {
  check_elt(x);
  VCElement base = x;
  unsigned long long m;
  if (k < 0) {
    base = inv(x);
    m = static_cast<unsigned long long>(-(k + 1)) + 1ULL;
  } else {
    m = static_cast<unsigned long long>(k);
  }
  VCElement acc = identity_elt();
  while (m) {
    if (m & 1ULL) acc = mul(acc, base);
    base = mul(base, base);
    m >>= 1ULL;
  }
  return acc;
}

VCElement VCGroup::t_elt() const {
  if (variant_ == VCClass::Finite)
    fail(ErrorCode::BadVariant, "finite group has no infinite-order generator");
  return VCElement{fpart_->identity(), 1, 0};
}

VCElement VCGroup::a_elt() const {
  if (variant_ != VCClass::Nonorientable)
    fail(ErrorCode::BadVariant, "a_elt: not a nonorientable group");
  return VCElement{fpart_->identity(), 0, 1};
}

VCElement VCGroup::b_elt() const {
  if (variant_ != VCClass::Nonorientable)
    fail(ErrorCode::BadVariant, "b_elt: not a nonorientable group");
  // b = b²·(ab)^{-1}·a
  return VCElement{sq_b_, -1, 1};
}

std::vector<VCElement> VCGroup::generator_elts() const {
  std::vector<VCElement> out;
  for (Elt g : fpart_->generators_or_all()) out.push_back(from_finite(g));
  if (variant_ == VCClass::Orientable) out.push_back(t_elt());
  if (variant_ == VCClass::Nonorientable) {
    out.push_back(a_elt());
    out.push_back(b_elt());
  }
  return out;
}

// ---------------------------------------------------------------------------
// classification

std::optional<int> vc_order(const VCGroup& g, const VCElement& x) {
  g.check_elt(x);
  if (g.variant() == VCClass::Orientable && x.n != 0) return std::nullopt;
  if (g.variant() == VCClass::Nonorientable && x.eps == 0 && x.n != 0)
    return std::nullopt;
  long long bound = 2LL * g.finite_part()->order();
  if (g.variant() == VCClass::Orientable)
    bound *= std::max(1, g.alpha_order());
  if (g.variant() == VCClass::Nonorientable)
    bound *= std::max(1, g.phi_tau_order());
  VCElement acc = x;
  const VCElement e = g.identity_elt();
  for (long long k = 1; k <= bound; ++k) {
    if (acc == e) return static_cast<int>(k);
    acc = g.mul(acc, x);
  }
  require_internal(false, "order iteration exceeded the structural bound");
  return std::nullopt;
}

MaxFiniteNormal max_finite_normal(const VCGroup& g) {
  return MaxFiniteNormal{FiniteSubgroup::whole(g.finite_part()), g.variant()};
}

std::vector<VCElement> max_finite_normal_elements(const VCGroup& g) {
  std::vector<VCElement> out;
  for (Elt c = 0; c < g.finite_part()->order(); ++c)
    out.push_back(g.from_finite(c));
  return out;
}

FiniteQuotient quotient_by_max_finite(const VCGroupPtr& g) {
  require_internal(g != nullptr, "quotient_by_max_finite: null group");
  switch (g->variant()) {
    case VCClass::Finite:
      return FiniteQuotient{QuotientModel::Trivial, VCGroup::trivial_model()};
    case VCClass::Orientable:
      return FiniteQuotient{QuotientModel::Z, VCGroup::z_model()};
    case VCClass::Nonorientable:
      return FiniteQuotient{QuotientModel::Dinfty, VCGroup::dinfty_model()};
  }
  require_internal(false, "unreachable variant");
  return FiniteQuotient{QuotientModel::Trivial, VCGroup::trivial_model()};
}

VCElement project_mod_finite(const VCGroup& g, const VCElement& x) {
  g.check_elt(x);
  switch (g.variant()) {
    case VCClass::Finite:
      return VCElement{0, 0, 0};
    case VCClass::Orientable:
      return VCElement{0, x.n, 0};
    case VCClass::Nonorientable:
      return VCElement{0, x.n, x.eps};
  }
  require_internal(false, "unreachable variant");
  return VCElement{};
}

CyclicSubgroupDescriptor max_infinite_cyclic(const VCGroup& g) {
  if (!g.is_infinite() || g.finite_part()->order() != 1)
    fail(ErrorCode::NotZorDinfty,
         "maximal infinite cyclic subgroup requires the Z or D-infinity model");
  return CyclicSubgroupDescriptor{g.t_elt(),
                                  g.variant() == VCClass::Orientable};
}

bool in_max_infinite_cyclic(const VCGroup& g, const VCElement& x) {
  (void)max_infinite_cyclic(g);
  g.check_elt(x);
  return g.variant() == VCClass::Orientable || x.eps == 0;
}

// ---------------------------------------------------------------------------
// homomorphisms

VCHom VCHom::make(VCGroupPtr source, VCGroupPtr target,
                  const std::vector<VCElement>& finite_gen_images,
                  const std::vector<VCElement>& extra) {
  require_internal(source && target, "vc_hom: null group");
  const FiniteGroupPtr& F = source->finite_part();
  const std::vector<Elt> gens = F->generators_or_all();
  if (finite_gen_images.size() != gens.size())
    fail(ErrorCode::RelationViolated,
         "expected " + std::to_string(gens.size()) +
             " finite-part generator images, got " +
             std::to_string(finite_gen_images.size()));
  for (const VCElement& im : finite_gen_images) target->check_elt(im);
  const size_t extra_needed =
      source->variant() == VCClass::Finite
          ? 0
          : (source->variant() == VCClass::Orientable ? 1 : 2);
  if (extra.size() != extra_needed)
    fail(ErrorCode::RelationViolated,
         "expected " + std::to_string(extra_needed) +
             " infinite-generator images, got " + std::to_string(extra.size()));
  for (const VCElement& im : extra) target->check_elt(im);

  // extend generator images over the whole finite part
  const int n = F->order();
  std::vector<VCElement> fimg(static_cast<size_t>(n));
  std::vector<char> known(static_cast<size_t>(n), 0);
  fimg[F->identity()] = target->identity_elt();
  known[F->identity()] = 1;
  std::deque<Elt> queue{F->identity()};
  while (!queue.empty()) {
    Elt x = queue.front();
    queue.pop_front();
    for (size_t i = 0; i < gens.size(); ++i) {
      Elt y = F->mul(gens[i], x);
      if (known[y]) continue;
      fimg[y] = target->mul(finite_gen_images[i], fimg[x]);
      known[y] = 1;
      queue.push_back(y);
    }
  }
  for (Elt x = 0; x < n; ++x)
    require_internal(known[x], "generator set does not generate the finite part");

  // every finite-part product relation
  for (Elt p = 0; p < n; ++p)
    for (Elt q = 0; q < n; ++q)
      if (!(fimg[F->mul(p, q)] == target->mul(fimg[p], fimg[q])))
        fail(ErrorCode::RelationViolated,
             "finite-part product relation fails at (" + std::to_string(p) +
                 "," + std::to_string(q) + ")");

  VCHom h;
  h.source = source;
  h.target = target;
  h.finite_images = std::move(fimg);

  if (source->variant() == VCClass::Orientable) {
    h.t_img = extra[0];
    for (Elt x = 0; x < n; ++x) {
      VCElement lhs = target->conj(h.t_img, h.finite_images[x]);
      VCElement rhs = h.finite_images[source->alpha()(x)];
      if (!(lhs == rhs))
        fail(ErrorCode::RelationViolated,
             "conjugation by t disagrees with the twisting action at f=" +
                 std::to_string(x));
    }
  } else if (source->variant() == VCClass::Nonorientable) {
    h.a_img = extra[0];
    h.b_img = extra[1];
    for (Elt x = 0; x < n; ++x) {
      if (!(target->conj(h.a_img, h.finite_images[x]) ==
            h.finite_images[source->phi_a(x)]))
        fail(ErrorCode::RelationViolated,
             "conjugation by a disagrees with its action on C at c=" +
                 std::to_string(x));
      if (!(target->conj(h.b_img, h.finite_images[x]) ==
            h.finite_images[source->phi_b(x)]))
        fail(ErrorCode::RelationViolated,
             "conjugation by b disagrees with its action on C at c=" +
                 std::to_string(x));
    }
    if (!(target->mul(h.a_img, h.a_img) == h.finite_images[source->sq_a()]))
      fail(ErrorCode::RelationViolated, "a² relation fails");
    if (!(target->mul(h.b_img, h.b_img) == h.finite_images[source->sq_b()]))
      fail(ErrorCode::RelationViolated, "b² relation fails");
    h.t_img = target->mul(h.a_img, h.b_img);
  }
  return h;
}

VCHom VCHom::identity(const VCGroupPtr& g) {
  require_internal(g != nullptr, "identity hom: null group");
  std::vector<VCElement> fg;
  for (Elt x : g->finite_part()->generators_or_all())
    fg.push_back(g->from_finite(x));
  std::vector<VCElement> extra;
  if (g->variant() == VCClass::Orientable) extra.push_back(g->t_elt());
  if (g->variant() == VCClass::Nonorientable) {
    extra.push_back(g->a_elt());
    extra.push_back(g->b_elt());
  }
  return make(g, g, fg, extra);
}

VCElement VCHom::operator()(const VCElement& x) const {
  source->check_elt(x);
  VCElement r = finite_images[x.f];
  if (source->variant() == VCClass::Finite) return r;
  if (x.n != 0) r = target->mul(r, target->pow(t_img, x.n));
  if (x.eps) r = target->mul(r, a_img);
  return r;
}

bool vc_hom_is_injective(const VCHom& f) {
  std::set<VCElement> distinct(f.finite_images.begin(), f.finite_images.end());
  if (distinct.size() != f.finite_images.size()) return false;
  if (!f.source->is_infinite()) return true;
  return !vc_order(*f.target, f.t_img).has_value();
}

namespace {

// Solve base^k = rhs exactly.  Infinite-order base: divide translations and
// verify; finite-order base: scan one period.
std::optional<long long> solve_power(const VCGroup& g, const VCElement& base,
                                     const VCElement& rhs) {
  auto ord = vc_order(g, base);
  if (!ord) {
    if (rhs.eps != 0) return std::nullopt;
    const long long m = base.n;
    if (m == 0) return std::nullopt;  // unreachable for infinite order
    if (rhs.n % m != 0) return std::nullopt;
    const long long k = rhs.n / m;
    if (g.pow(base, k) == rhs) return k;
    return std::nullopt;
  }
  VCElement acc = g.identity_elt();
  for (long long k = 0; k < *ord; ++k) {
    if (acc == rhs) return k;
    acc = g.mul(acc, base);
  }
  return std::nullopt;
}

}  // namespace

std::optional<VCElement> hom_preimage(const VCHom& f, const VCElement& y) {
  f.target->check_elt(y);
  const FiniteGroupPtr& F = f.source->finite_part();
  switch (f.source->variant()) {
    case VCClass::Finite: {
      for (Elt c = 0; c < F->order(); ++c)
        if (f.finite_images[c] == y) return f.source->from_finite(c);
      return std::nullopt;
    }
    case VCClass::Orientable: {
      for (Elt c = 0; c < F->order(); ++c) {
        VCElement rhs = f.target->mul(f.target->inv(f.finite_images[c]), y);
        if (auto k = solve_power(*f.target, f.t_img, rhs)) {
          VCElement cand{c, *k, 0};
          if (f(cand) == y) return cand;
        }
      }
      return std::nullopt;
    }
    case VCClass::Nonorientable: {
      for (int eps = 0; eps <= 1; ++eps) {
        for (Elt c = 0; c < F->order(); ++c) {
          VCElement rhs = f.target->mul(f.target->inv(f.finite_images[c]), y);
          if (eps) rhs = f.target->mul(rhs, f.target->inv(f.a_img));
          if (auto k = solve_power(*f.target, f.t_img, rhs)) {
            VCElement cand{c, *k, eps};
            if (f(cand) == y) return cand;
          }
        }
      }
      return std::nullopt;
    }
  }
  require_internal(false, "unreachable variant");
  return std::nullopt;
}

namespace {

long long gcd_ll(long long a, long long b) {
  return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
}

}  // namespace

std::optional<long long> vc_image_index(const VCHom& f) {
  const VCGroupPtr& T = f.target;
  // image generators
  std::vector<VCElement> img_gens;
  for (const VCElement& g : f.source->generator_elts()) img_gens.push_back(f(g));

  if (T->variant() == VCClass::Finite) {
    std::vector<Elt> flat;
    for (const VCElement& w : img_gens) flat.push_back(w.f);
    FiniteSubgroup im = FiniteSubgroup::generated_by(T->finite_part(), flat);
    return T->finite_part()->order() / im.order();
  }

  // index in the quotient model of the target
  long long qindex = 0;  // 0 encodes "infinite"
  if (T->variant() == VCClass::Orientable) {
    long long d = 0;
    for (const VCElement& w : img_gens) d = gcd_ll(d, w.n);
    qindex = d;  // [Z : dZ] = d, infinite when d = 0
  } else {
    long long d = 0;
    bool have_refl = false;
    long long refl0 = 0;
    for (const VCElement& w : img_gens) {
      if (w.eps == 0) {
        d = gcd_ll(d, w.n);
      } else if (!have_refl) {
        have_refl = true;
        refl0 = w.n;
      } else {
        d = gcd_ll(d, w.n - refl0);
      }
    }
    if (!have_refl)
      qindex = d == 0 ? 0 : 2 * d;  // translations only
    else
      qindex = d;  // dZ together with reflections over one coset
  }
  if (qindex == 0) return std::nullopt;

  // index of (finite part of target) ∩ image inside the finite part
  int meet = 0;
  for (Elt w = 0; w < T->finite_part()->order(); ++w)
    if (hom_preimage(f, T->from_finite(w))) ++meet;
  require_internal(meet > 0 && T->finite_part()->order() % meet == 0,
                   "intersection with the finite part is not a subgroup");
  return qindex * (T->finite_part()->order() / meet);
}

FiniteSubgroup preimage_of_subgroup(const VCHom& f, const FiniteSubgroup& s) {
  const FiniteGroupPtr& FT = f.target->finite_part();
  if (!s.parent || !s.parent->same_table(*FT))
    fail(ErrorCode::PreimageNotFinite,
         "S must be a subgroup of the target's finite part");
  if (s.order() != FT->order())
    fail(ErrorCode::PreimageNotFinite,
         "S must be the maximal normal finite subgroup of the target");
  if (!vc_hom_is_injective(f))
    fail(ErrorCode::PreimageNotFinite,
         "preimage under a non-injective map need not be finite");

  const FiniteGroupPtr& FS = f.source->finite_part();
  std::vector<Elt> mem;
  for (Elt c = 0; c < FS->order(); ++c) {
    const VCElement& y = f.finite_images[c];
    if (y.n == 0 && y.eps == 0 && s.contains(y.f)) mem.push_back(c);
  }
  FiniteSubgroup out = FiniteSubgroup::from_members(FS, std::move(mem));
  if (f.source->is_infinite())
    require_internal(
        out.order() == FS->order(),
        "preimage of the maximal finite normal subgroup must be the whole "
        "finite part of the source");
  return out;
}

InducedQuotientHom induced_hom_on_quotients(const VCHom& f) {
  if (!vc_hom_is_injective(f))
    fail(ErrorCode::NotWellDefined,
         "induced quotient map requires an injective source map");
  VCGroupPtr srcq = quotient_by_max_finite(f.source).model_group;
  VCGroupPtr tgtq = quotient_by_max_finite(f.target).model_group;

  std::vector<VCElement> fg(srcq->finite_part()->generators_or_all().size(),
                            tgtq->identity_elt());
  std::vector<VCElement> extra;
  if (f.source->variant() == VCClass::Orientable)
    extra.push_back(project_mod_finite(*f.target, f.t_img));
  if (f.source->variant() == VCClass::Nonorientable) {
    extra.push_back(project_mod_finite(*f.target, f.a_img));
    extra.push_back(project_mod_finite(*f.target, f.b_img));
  }
  VCHom h = [&] {
    try {
      return VCHom::make(srcq, tgtq, fg, extra);
    } catch (const Error& e) {
      fail(ErrorCode::NotWellDefined,
           std::string("induced quotient map is not well defined: ") +
               e.what());
    }
  }();
  return InducedQuotientHom{h, vc_hom_is_injective(h)};
}

CyclicQuotient quotient_by_max_infinite_cyclic_group(const VCGroup& g) {
  CyclicSubgroupDescriptor d = max_infinite_cyclic(g);
  if (d.whole_group) return CyclicQuotient{FiniteGroup::trivial()};
  return CyclicQuotient{FiniteGroup::cyclic(2)};
}

Elt project_mod_max_cyclic(const VCGroup& g, const VCElement& x) {
  (void)max_infinite_cyclic(g);
  g.check_elt(x);
  if (g.variant() == VCClass::Orientable) return 0;
  return x.eps;
}

InducedCyclicQuotientHom induced_hom_mod_max_cyclic(const VCHom& f) {
  (void)max_infinite_cyclic(*f.source);
  (void)max_infinite_cyclic(*f.target);
  if (!in_max_infinite_cyclic(*f.target, f.t_img))
    fail(ErrorCode::NotWellDefined,
         "image of the translation generator leaves the maximal infinite "
         "cyclic subgroup");
  CyclicQuotient srcq = quotient_by_max_infinite_cyclic_group(*f.source);
  CyclicQuotient tgtq = quotient_by_max_infinite_cyclic_group(*f.target);
  std::vector<Elt> images(static_cast<size_t>(srcq.group->order()));
  images[srcq.group->identity()] = tgtq.group->identity();
  if (f.source->variant() == VCClass::Nonorientable) {
    Elt cls = project_mod_max_cyclic(*f.target, f.a_img);
    // element 1 of Z/2 is the reflection class
    images[1] = tgtq.group->order() == 1 ? 0 : cls;
  }
  FiniteHom h = FiniteHom::make(srcq.group, tgtq.group, std::move(images));
  return InducedCyclicQuotientHom{h, hom_properties(h).injective};
}

std::array<long long, 4> element_key(const VCElement& x) {
  return {static_cast<long long>(x.f), x.n < 0 ? -x.n : x.n,
          x.n < 0 ? 1LL : 0LL, static_cast<long long>(x.eps)};
}

bool key_less(const VCElement& x, const VCElement& y) {
  return element_key(x) < element_key(y);
}

}  // namespace ggk
