#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "ggk/pi1.hpp"
#include "support/fixtures.hpp"

using namespace ggk;

namespace {

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;  // sentinel: nothing was thrown
}

// Two finite vertex groups glued over a Z/2 edge group: exercises coset
// representatives with a nontrivial finite image subgroup.
GraphOfGroups finite_edge_pair() {
  auto z6 = VCGroup::finite(FiniteGroup::cyclic(6));
  auto s3 = VCGroup::finite(FiniteGroup::symmetric(3));
  auto z2 = VCGroup::finite(FiniteGroup::cyclic(2));
  Elt flip = -1;
  for (Elt x = 0; x < s3->finite_part()->order(); ++x)
    if (s3->finite_part()->element_order(x) == 2) {
      flip = x;
      break;
    }
  VCHom into_u = VCHom::make(z2, z6, {VCElement{3, 0, 0}}, {});
  VCHom into_w = VCHom::make(z2, s3, {VCElement{flip, 0, 0}}, {});
  GeometricEdgeData edge{"c", "u", "w", z2, into_u, into_w};
  return make_graph_of_groups({{"u", z6}, {"w", s3}}, {edge});
}

std::vector<fx::NamedGog> reduction_fixtures() {
  auto out = fx::all_gog_fixtures();
  out.push_back({"finite_edge_pair", finite_edge_pair()});
  return out;
}

VCElement random_elt(std::mt19937& rng, const VCGroup& g) {
  std::uniform_int_distribution<int> fdist(0, g.finite_part()->order() - 1);
  VCElement x;
  x.f = fdist(rng);
  if (g.is_infinite()) {
    std::uniform_int_distribution<long long> ndist(-6, 6);
    x.n = ndist(rng);
  }
  if (g.variant() == VCClass::Nonorientable) {
    std::uniform_int_distribution<int> edist(0, 1);
    x.eps = edist(rng);
  }
  return x;
}

Pi1Word random_word(std::mt19937& rng, const GraphOfGroups& gog, int max_len) {
  std::uniform_int_distribution<int> len_dist(0, max_len);
  std::uniform_int_distribution<int> kind_dist(0, 2);
  std::uniform_int_distribution<int> vdist(0, gog.graph.vertex_count() - 1);
  std::uniform_int_distribution<int> edist(0,
                                           gog.graph.oriented_edge_count() - 1);
  Pi1Word w;
  int len = len_dist(rng);
  for (int i = 0; i < len; ++i) {
    if (kind_dist(rng) == 0) {
      int v = vdist(rng);
      w.tokens.push_back(
          Pi1Token::vertex(v, random_elt(rng, *gog.vertex_groups[v])));
    } else {
      w.tokens.push_back(Pi1Token::edge(edist(rng)));
    }
  }
  return w;
}

// ---------------------------------------------------------------------------
// Independent reducer: explicit alternating words, rightmost-first pinch
// elimination, then a single representative sweep.  Representatives are found
// by brute-force enumeration over a window wide enough to contain the
// minimum.

VCElement oracle_rep(const VCGroup& gv, const VCHom& mono, const VCElement& g) {
  const VCGroup& eg = *mono.source;
  if (hom_preimage(mono, g)) return gv.identity_elt();

  VCElement best{};
  bool have = false;
  auto consider = [&](const VCElement& cand) {
    if (!have || key_less(cand, best)) {
      best = cand;
      have = true;
    }
  };
  if (!eg.is_infinite()) {
    for (const VCElement& img : mono.finite_images)
      consider(gv.mul(g, img));
    return best;
  }
  long long spread = std::abs(g.n);
  for (const VCElement& img : mono.finite_images)
    spread = std::max(spread, std::abs(img.n));
  spread = std::max(spread, std::abs(mono.t_img.n));
  if (eg.variant() == VCClass::Nonorientable)
    spread = std::max(spread, std::abs(mono.a_img.n));
  const long long window = 4 * spread + 16;

  std::vector<VCElement> rights{gv.identity_elt()};
  if (eg.variant() == VCClass::Nonorientable) rights.push_back(mono.a_img);
  for (const VCElement& img : mono.finite_images) {
    VCElement base = gv.mul(g, img);
    for (const VCElement& right : rights)
      for (long long k = -window; k <= window; ++k)
        consider(gv.mul(gv.mul(base, gv.pow(mono.t_img, k)), right));
  }
  return best;
}

NormalForm oracle_reduce(const GraphOfGroups& gog, const SpanningTree& t,
                         const Pi1Word& w) {
  const Graph& g = gog.graph;
  auto group = [&](int v) -> const VCGroup& { return *gog.vertex_groups[v]; };
  auto ident = [&](int v) { return group(v).identity_elt(); };

  // 1. explicit alternating loop word
  NormalForm form;
  form.base = t.root;
  form.lead = ident(t.root);
  int cur = t.root;
  auto tail = [&]() -> VCElement& {
    return form.steps.empty() ? form.lead : form.steps.back().label;
  };
  auto raw_edge = [&](int e) {
    form.steps.push_back({e, ident(g.tau(e))});
    cur = g.tau(e);
  };
  auto goto_v = [&](int v) {
    for (int e : t.path(g, cur, v)) raw_edge(e);
  };
  for (const Pi1Token& tok : w.tokens) {
    if (tok.kind == Pi1Token::Kind::Vertex) {
      goto_v(tok.index);
      tail() = group(cur).mul(tail(), tok.elt);
    } else {
      goto_v(g.iota(tok.index));
      raw_edge(tok.index);
    }
  }
  goto_v(t.root);

  // 2. rightmost-first pinch elimination
  for (;;) {
    bool contracted = false;
    for (int i = static_cast<int>(form.steps.size()) - 2; i >= 0; --i) {
      const int e = form.steps[i].edge;
      const int f = form.steps[i + 1].edge;
      if (f != g.bar(e)) continue;
      auto s = hom_preimage(gog.mono(f), form.steps[i].label);
      if (!s) continue;
      // e · label · ē  ->  mono(e)(s), merged with both neighbours
      VCElement merged = group(g.iota(e)).mul(gog.mono(e)(*s),
                                              form.steps[i + 1].label);
      VCElement& before = i == 0 ? form.lead : form.steps[i - 1].label;
      before = group(g.iota(e)).mul(before, merged);
      form.steps.erase(form.steps.begin() + i, form.steps.begin() + i + 2);
      contracted = true;
      break;
    }
    if (!contracted) break;
  }

  // 3. one left-to-right representative sweep
  for (size_t i = 0; i < form.steps.size(); ++i) {
    const int e = form.steps[i].edge;
    const VCGroup& at = group(g.iota(e));
    VCElement& before = i == 0 ? form.lead : form.steps[i - 1].label;
    VCElement rep = oracle_rep(at, gog.mono(e), before);
    VCElement diff = at.mul(at.inv(rep), before);
    auto s = hom_preimage(gog.mono(e), diff);
    REQUIRE(s.has_value());
    before = rep;
    form.steps[i].label = group(g.tau(e)).mul(gog.mono(g.bar(e))(*s),
                                              form.steps[i].label);
  }
  return form;
}

}  // namespace

TEST_CASE("coset representatives: exactness and minimality") {
  std::mt19937 rng(2026);
  for (const auto& [name, gog] : reduction_fixtures()) {
    CAPTURE(name);
    for (int e = 0; e < gog.graph.oriented_edge_count(); ++e) {
      const VCGroup& gv = *gog.vertex_groups[gog.graph.iota(e)];
      const VCHom& mono = gog.mono(e);
      const VCGroup& ge = *mono.source;
      for (int trial = 0; trial < 40; ++trial) {
        VCElement g = random_elt(rng, gv);
        CosetFactorization cf = coset_rep(gv, mono, g);
        // g = rep · mono(factor)
        CHECK(gv.mul(cf.rep, mono(cf.factor)) == g);
        // representative function is constant on the coset
        VCElement s = random_elt(rng, ge);
        CosetFactorization cf2 = coset_rep(gv, mono, gv.mul(g, mono(s)));
        CHECK(cf2.rep == cf.rep);
        // representing the representative is a fixed point
        CosetFactorization cf3 = coset_rep(gv, mono, cf.rep);
        CHECK(cf3.rep == cf.rep);
        CHECK(mono(cf3.factor) == gv.identity_elt());
        // minimality against brute force
        CHECK(cf.rep == oracle_rep(gv, mono, g));
        // identity coset is represented by the identity
        CHECK(coset_rep(gv, mono, mono(s)).rep == gv.identity_elt());
      }
    }
  }
}

TEST_CASE("reduce: conjugation across a loop of index two and three") {
  GraphOfGroups bs = fx::bs23_loop();
  SpanningTree t = spanning_tree(bs.graph);

  NormalForm nf = reduce(bs, t, parse_word(bs, "e(l);g(v,[0,3]);E(l)"));
  CHECK(word_text(bs, display_tokens(bs, t, nf)) == "g(v,[0,2])");

  NormalForm nf2 = reduce(bs, t, parse_word(bs, "e(l);g(v,[0,6]);E(l)"));
  CHECK(word_text(bs, display_tokens(bs, t, nf2)) == "g(v,[0,4])");

  CHECK(is_identity(
      bs, reduce(bs, t, parse_word(bs, "e(l);g(v,[0,3]);E(l);g(v,[0,-2])"))));

  // a non-pinchable crossing keeps its stable letters
  NormalForm nf3 = reduce(bs, t, parse_word(bs, "e(l);g(v,[0,1]);E(l)"));
  CHECK(word_text(bs, display_tokens(bs, t, nf3)) ==
        "e(l);g(v,[0,1]);E(l)");
  CHECK_FALSE(is_identity(bs, nf3));

  // the empty word and the identity label reduce to the identity
  CHECK(is_identity(bs, reduce(bs, t, parse_word(bs, "1"))));
  CHECK(is_identity(bs, reduce(bs, t, parse_word(bs, "g(v,[0,0])"))));
}

TEST_CASE("reduce: every defining relation dies") {
  for (const auto& [name, gog] : reduction_fixtures()) {
    CAPTURE(name);
    SpanningTree t = spanning_tree(gog.graph);
    for (const RelationInstance& inst : relation_instances(gog)) {
      // e · α_ē(s) · ē · α_e(s)⁻¹
      Pi1Word w;
      w.tokens.push_back(Pi1Token::edge(inst.edge));
      w.tokens.push_back(
          Pi1Token::vertex(gog.graph.tau(inst.edge), inst.lhs_inner));
      w.tokens.push_back(Pi1Token::edge(gog.graph.bar(inst.edge)));
      const VCGroup& at_iota = *gog.vertex_groups[gog.graph.iota(inst.edge)];
      w.tokens.push_back(Pi1Token::vertex(gog.graph.iota(inst.edge),
                                          at_iota.inv(inst.rhs)));
      CHECK(is_identity(gog, reduce(gog, t, w)));
    }
  }
}

TEST_CASE("reduce: presentation relations parse and hold") {
  for (const auto& [name, gog] : reduction_fixtures()) {
    CAPTURE(name);
    SpanningTree t = spanning_tree(gog.graph);
    Presentation p = presentation(gog, t);
    for (const std::string& rel : p.relations) {
      CAPTURE(rel);
      size_t eq = rel.find(" = ");
      REQUIRE(eq != std::string::npos);
      Pi1Word lhs = parse_word(gog, rel.substr(0, eq));
      Pi1Word rhs = parse_word(gog, rel.substr(eq + 3));
      CHECK(pi1_eq(gog, t, lhs, rhs));
    }
  }
}

TEST_CASE("reduce agrees with the rightmost-strategy reducer") {
  std::mt19937 rng(99173);
  for (const auto& [name, gog] : reduction_fixtures()) {
    CAPTURE(name);
    SpanningTree t = spanning_tree(gog.graph);
    for (int trial = 0; trial < 400; ++trial) {
      Pi1Word w = random_word(rng, gog, 12);
      NormalForm left = reduce(gog, t, w);
      NormalForm right = oracle_reduce(gog, t, w);
      REQUIRE(left == right);
    }
  }
}

TEST_CASE("reduce: idempotence and multiplicativity on random words") {
  std::mt19937 rng(5511);
  for (const auto& [name, gog] : reduction_fixtures()) {
    CAPTURE(name);
    SpanningTree t = spanning_tree(gog.graph);
    for (int trial = 0; trial < 120; ++trial) {
      Pi1Word u = random_word(rng, gog, 10);
      Pi1Word v = random_word(rng, gog, 10);
      NormalForm nu = reduce(gog, t, u);

      // reparsing the display tokens reproduces the normal form
      Pi1Word redisplayed{display_tokens(gog, t, nu)};
      CHECK(reduce(gog, t, redisplayed) == nu);

      // reduction is multiplicative
      NormalForm nv = reduce(gog, t, v);
      Pi1Word uv_display{display_tokens(gog, t, nu)};
      std::vector<Pi1Token> v_shown = display_tokens(gog, t, nv);
      uv_display.tokens.insert(uv_display.tokens.end(), v_shown.begin(),
                               v_shown.end());
      CHECK(reduce(gog, t, concat(u, v)) == reduce(gog, t, uv_display));

      // w · w⁻¹ reduces to the identity
      CHECK(is_identity(
          gog, reduce(gog, t, concat(u, inverse_word(gog, u)))));
      CHECK(pi1_eq(gog, t, u, u));
    }
  }
}

TEST_CASE("membership: inclusion followed by membership is the identity") {
  std::mt19937 rng(8080);
  for (const auto& [name, gog] : reduction_fixtures()) {
    CAPTURE(name);
    SpanningTree t = spanning_tree(gog.graph);
    int checked = 0;
    for (int v = 0; v < gog.graph.vertex_count(); ++v) {
      const VCGroup& gv = *gog.vertex_groups[v];
      for (int trial = 0; trial < 40; ++trial) {
        VCElement x = random_elt(rng, gv);
        Pi1Word w;
        w.tokens.push_back(Pi1Token::vertex(v, x));
        CHECK(membership_in_vertex_group(gog, t, w, v) == x);
        ++checked;
      }
    }
    CHECK(checked >= 40);
  }
}

TEST_CASE("membership: tree identifications are honoured") {
  GraphOfGroups theta = fx::theta_graph();
  SpanningTree t = spanning_tree(theta.graph);
  int u = theta.graph.vertex_index("u");
  int w = theta.graph.vertex_index("w");

  // the tree edge identifies the two copies of the infinite cyclic group
  Pi1Word at_w;
  at_w.tokens.push_back(Pi1Token::vertex(w, VCElement{0, 1, 0}));
  CHECK(membership_in_vertex_group(theta, t, at_w, u) ==
        (VCElement{0, 1, 0}));

  // a stable letter is in no vertex group
  Pi1Word q_loop = parse_word(theta, "e(q)");
  CHECK_FALSE(try_membership_in_vertex_group(theta, t, q_loop, u));
  CHECK(code_of([&] {
          membership_in_vertex_group(theta, t, q_loop, u);
        }) == ErrorCode::NotMember);
}

TEST_CASE("membership: conjugated torsion leaves the vertex groups") {
  GraphOfGroups fp = fx::free_product_z2_z3();
  SpanningTree t = spanning_tree(fp.graph);
  int u = fp.graph.vertex_index("u");
  int w = fp.graph.vertex_index("w");

  Pi1Word aba = parse_word(fp, "g(u,[1]);g(w,[1]);g(u,[1])");
  CHECK_FALSE(try_membership_in_vertex_group(fp, t, aba, u));
  CHECK_FALSE(try_membership_in_vertex_group(fp, t, aba, w));

  // but an honest product inside one factor stays there
  Pi1Word sq = parse_word(fp, "g(w,[1]);g(w,[2])");
  CHECK(membership_in_vertex_group(fp, t, sq, w) == (VCElement{0, 0, 0}));

  GraphOfGroups bs = fx::bs23_loop();
  SpanningTree tb = spanning_tree(bs.graph);
  Pi1Word conj = parse_word(bs, "e(l);g(v,[0,3]);E(l)");
  CHECK(membership_in_vertex_group(bs, tb, conj, 0) == (VCElement{0, 2, 0}));
}

TEST_CASE("free retraction kills vertex groups and the tree") {
  GraphOfGroups theta = fx::theta_graph();
  SpanningTree t = spanning_tree(theta.graph);
  int q = theta.graph.oriented_edge("q", true);
  int r = theta.graph.oriented_edge("r", true);

  CHECK(apply_phi(theta, t, parse_word(theta, "e(p)")).empty());
  CHECK(apply_phi(theta, t, parse_word(theta, "g(u,[0,5])")).empty());
  CHECK(apply_phi(theta, t, parse_word(theta, "e(q)")).letters ==
        std::vector<int>{q});
  CHECK(apply_phi(theta, t, parse_word(theta, "e(q);E(q);e(r)")).letters ==
        std::vector<int>{r});

  // the retraction only depends on the group element
  std::mt19937 rng(31007);
  for (int trial = 0; trial < 200; ++trial) {
    Pi1Word u = random_word(rng, theta, 10);
    Pi1Word v = random_word(rng, theta, 10);
    FreeWord fu = apply_phi(theta, t, u);
    FreeWord fv = apply_phi(theta, t, v);
    CHECK(apply_phi(theta, t, concat(u, v)) ==
          free_mul(theta.graph, fu, fv));
    NormalForm nu = reduce(theta, t, u);
    Pi1Word redisplayed{display_tokens(theta, t, nu)};
    CHECK(apply_phi(theta, t, redisplayed) == fu);
    CHECK(free_mul(theta.graph, fu, free_inverse(theta.graph, fu)).empty());
  }
}

TEST_CASE("quotient datum: token-wise images and kernels") {
  GraphOfGroups theta = fx::theta_graph();
  SpanningTree t = spanning_tree(theta.graph);

  // collapse both vertex groups; the quotient is free on the stable letters
  VCGroupPtr triv = VCGroup::trivial_model();
  VCHom kill_u = VCHom::make(theta.vertex_groups[0], triv, {},
                             {triv->identity_elt()});
  VCHom kill_w = VCHom::make(theta.vertex_groups[1], triv, {},
                             {triv->identity_elt()});
  VCHom tt = VCHom::make(triv, triv, {}, {});
  GraphOfGroups target = make_graph_of_groups(
      {{"u", triv}, {"w", triv}},
      {{"p", "u", "w", triv, tt, tt},
       {"q", "u", "w", triv, tt, tt},
       {"r", "u", "w", triv, tt, tt}});
  InducedHom q =
      InducedHom::quotient(theta, target, {kill_u, kill_w});

  CHECK(in_kernel(q, t, parse_word(theta, "g(u,[0,7])")));
  CHECK(in_kernel(q, t, parse_word(theta, "e(q);g(w,[0,2]);E(q)")));
  CHECK_FALSE(in_kernel(q, t, parse_word(theta, "e(q)")));
  CHECK(in_kernel(q, t, parse_word(theta, "e(p)")));  // tree edge

  Pi1Word img = apply_q(q, parse_word(theta, "g(u,[0,3]);e(q)"));
  REQUIRE(img.tokens.size() == 2);
  CHECK(img.tokens[0].elt == triv->identity_elt());

  // the free retraction kernel predicate
  InducedHom phi = InducedHom::phi_free(theta);
  CHECK(in_kernel(phi, t, parse_word(theta, "g(w,[0,4])")));
  CHECK(in_kernel(phi, t, parse_word(theta, "e(p)")));
  CHECK_FALSE(in_kernel(phi, t, parse_word(theta, "e(q)")));
  CHECK(in_kernel(phi, t, parse_word(theta, "e(r);E(r)")));

  // mismatches are rejected
  CHECK(code_of([&] { apply_q(phi, Pi1Word{}); }) ==
        ErrorCode::ProjectionMismatch);
  CHECK(code_of([&] {
          InducedHom::quotient(theta, target, {kill_u});
        }) == ErrorCode::ProjectionMismatch);
  CHECK(code_of([&] {
          InducedHom::quotient(theta, target, {tt, kill_w});
        }) == ErrorCode::ProjectionMismatch);
  GraphOfGroups fp = fx::free_product_z2_z3();
  CHECK(code_of([&] {
          InducedHom::quotient(theta, fp, {kill_u, kill_w});
        }) == ErrorCode::ProjectionMismatch);
}

TEST_CASE("word syntax: parse/print round trip and errors") {
  GraphOfGroups mixed = fx::mixed_torsion();
  SpanningTree t = spanning_tree(mixed.graph);
  std::mt19937 rng(4242);
  for (int trial = 0; trial < 150; ++trial) {
    Pi1Word w = random_word(rng, mixed, 10);
    NormalForm nf = reduce(mixed, t, w);
    std::vector<Pi1Token> shown = display_tokens(mixed, t, nf);
    Pi1Word back = parse_word(mixed, word_text(mixed, shown));
    CHECK(back.tokens == shown);
  }
  CHECK(parse_word(mixed, "1").tokens.empty());
  CHECK(parse_word(mixed, "").tokens.empty());
  CHECK(parse_word(mixed, " g(u,[1,2]) ; e(e) ").tokens.size() == 2);

  CHECK(code_of([&] { parse_word(mixed, "x(u,[0])"); }) ==
        ErrorCode::ParseError);
  CHECK(code_of([&] { parse_word(mixed, "g(u,[0,zz])"); }) ==
        ErrorCode::ParseError);
  CHECK(code_of([&] { parse_word(mixed, "g(u,[0])"); }) ==
        ErrorCode::ParseError);  // wrong arity for an infinite vertex group
  CHECK(code_of([&] { parse_word(mixed, "g(zz,[0,0])"); }) ==
        ErrorCode::UnknownVertex);
  CHECK(code_of([&] { parse_word(mixed, "e(zz)"); }) ==
        ErrorCode::UnknownEdge);
  CHECK(code_of([&] { parse_word(mixed, "g(u,[0,0]"); }) ==
        ErrorCode::ParseError);
}

TEST_CASE("reduce: malformed tokens are rejected") {
  GraphOfGroups fp = fx::free_product_z2_z3();
  SpanningTree t = spanning_tree(fp.graph);

  Pi1Word bad_vertex;
  bad_vertex.tokens.push_back(Pi1Token::vertex(7, VCElement{0, 0, 0}));
  CHECK(code_of([&] { reduce(fp, t, bad_vertex); }) ==
        ErrorCode::TokenTypeMismatch);

  Pi1Word bad_elt;
  bad_elt.tokens.push_back(Pi1Token::vertex(0, VCElement{5, 0, 0}));
  CHECK(code_of([&] { reduce(fp, t, bad_elt); }) ==
        ErrorCode::TokenTypeMismatch);

  Pi1Word trans;
  trans.tokens.push_back(Pi1Token::vertex(0, VCElement{0, 3, 0}));
  CHECK(code_of([&] { reduce(fp, t, trans); }) ==
        ErrorCode::TokenTypeMismatch);

  Pi1Word bad_edge;
  bad_edge.tokens.push_back(Pi1Token::edge(99));
  CHECK(code_of([&] { reduce(fp, t, bad_edge); }) ==
        ErrorCode::TokenTypeMismatch);
}

TEST_CASE("reduce: free product normal forms alternate") {
  GraphOfGroups fp = fx::free_product_z2_z3();
  SpanningTree t = spanning_tree(fp.graph);

  Pi1Word w = parse_word(fp, "g(u,[1]);g(w,[1]);g(u,[1]);g(w,[2])");
  NormalForm nf = reduce(fp, t, w);
  std::vector<Pi1Token> shown = display_tokens(fp, t, nf);
  CHECK(word_text(fp, shown) == "g(u,[1]);g(w,[1]);g(u,[1]);g(w,[2])");

  // torsion collapses
  Pi1Word sq = parse_word(fp, "g(u,[1]);g(u,[1])");
  CHECK(is_identity(fp, reduce(fp, t, sq)));
  Pi1Word cube = parse_word(fp, "g(w,[1]);g(w,[1]);g(w,[1])");
  CHECK(is_identity(fp, reduce(fp, t, cube)));

  // x b x b x b ... has the shape of an honest alternating word
  Pi1Word alt = parse_word(fp, "g(u,[1]);g(w,[2]);g(u,[1]);g(w,[1])");
  NormalForm na = reduce(fp, t, alt);
  CHECK(display_tokens(fp, t, na).size() == 4);
}
