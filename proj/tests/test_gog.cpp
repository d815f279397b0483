#include <algorithm>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "ggk/gog.hpp"
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

bool has_problem(const ValidationReport& r, ErrorCode code) {
  return std::any_of(r.problems.begin(), r.problems.end(),
                     [&](const ValidationProblem& p) { return p.code == code; });
}

GraphOfGroups single_z_vertex() {
  return make_graph_of_groups({{"v", VCGroup::z_model()}}, {});
}

// Loop on Z whose forward mono kills the generator.
GraphOfGroups collapsing_loop() {
  VCGroupPtr z = VCGroup::z_model();
  VCHom kill = VCHom::make(z, z, {}, {VCElement{0, 0, 0}});
  VCHom id = VCHom::identity(z);
  GeometricEdgeData edge{"l", "v", "v", z, kill, id};
  return make_graph_of_groups({{"v", z}}, {edge});
}

GraphOfGroups trivial_loop() {
  VCGroupPtr triv = VCGroup::trivial_model();
  VCHom id = VCHom::identity(triv);
  GeometricEdgeData edge{"l", "v", "v", triv, id, id};
  return make_graph_of_groups({{"v", triv}}, {edge});
}

}  // namespace

TEST_CASE("graph structure: bar involution and incidences") {
  GraphOfGroups theta = fx::theta_graph();
  const Graph& g = theta.graph;
  CHECK(g.vertex_count() == 2);
  CHECK(g.geometric_edge_count() == 3);
  for (int e = 0; e < g.oriented_edge_count(); ++e) {
    CHECK(g.bar(e) != e);
    CHECK(g.bar(g.bar(e)) == e);
    CHECK(g.iota(g.bar(e)) == g.tau(e));
    CHECK(g.tau(g.bar(e)) == g.iota(e));
    CHECK(g.edge_id(g.bar(e)) == g.edge_id(e));
  }
  int p = g.oriented_edge("p", true);
  CHECK(g.is_forward(p));
  CHECK_FALSE(g.is_forward(g.bar(p)));
  CHECK(g.vertex_id(g.iota(p)) == "u");
  CHECK(g.vertex_id(g.tau(p)) == "w");

  // out-edge lists are sorted by (edge id, direction)
  for (int v = 0; v < g.vertex_count(); ++v) {
    const auto& out = g.out_edges(v);
    for (size_t i = 0; i + 1 < out.size(); ++i) {
      auto key = [&](int e) {
        return std::make_pair(g.edge_id(e), e & 1);
      };
      CHECK(key(out[i]) < key(out[i + 1]));
    }
    for (int e : out) CHECK(g.iota(e) == v);
  }

  CHECK(code_of([&] { g.vertex_index("nope"); }) == ErrorCode::UnknownVertex);
  CHECK(code_of([&] { g.oriented_edge("nope", true); }) ==
        ErrorCode::UnknownEdge);
}

TEST_CASE("graph construction rejects malformed input") {
  auto z = VCGroup::z_model();
  CHECK(code_of([&] {
          Graph::make({"v", "v"}, {});
        }) == ErrorCode::GraphInvariantViolated);
  CHECK(code_of([&] {
          Graph::make({"v"}, {{"l", "v", "v"}, {"l", "v", "v"}});
        }) == ErrorCode::GraphInvariantViolated);
  CHECK(code_of([&] {
          Graph::make({"v"}, {{"l", "v", "x"}});
        }) == ErrorCode::UnknownVertex);
  CHECK(code_of([&] { Graph::make({}, {}); }) ==
        ErrorCode::GraphInvariantViolated);

  // mono built on a structurally equal but distinct group object
  auto tf = FiniteGroup::trivial();
  VCGroupPtr z_clone = VCGroup::orientable(tf, FiniteHom::identity(tf));
  VCHom alien = VCHom::identity(z_clone);
  GeometricEdgeData edge{"l", "v", "v", z, alien, VCHom::identity(z)};
  CHECK(code_of([&] {
          make_graph_of_groups({{"v", z}}, {edge});
        }) == ErrorCode::GraphInvariantViolated);
}

TEST_CASE("element_text renders each variant") {
  auto zx = fx::z_cross_z2();
  CHECK(element_text(*zx, VCElement{1, -3, 0}) == "[1,-3]");
  auto fin = VCGroup::finite(FiniteGroup::cyclic(6));
  CHECK(element_text(*fin, VCElement{4, 0, 0}) == "[4]");
  auto d = VCGroup::dinfty_model();
  CHECK(element_text(*d, VCElement{0, 2, 1}) == "[0,2,1]");
}

TEST_CASE("validate: clean fixtures pass") {
  for (const auto& [name, gog] : fx::all_gog_fixtures()) {
    CAPTURE(name);
    ValidationReport report = validate(gog);
    for (const auto& p : report.problems) CAPTURE(p.message);
    CHECK(report.valid());
  }
  CHECK(validate(single_z_vertex()).valid());
}

TEST_CASE("validate: non-injective mono is reported with a witness") {
  GraphOfGroups bad = collapsing_loop();
  ValidationReport report = validate(bad);
  CHECK_FALSE(report.valid());
  REQUIRE(report.problems.size() == 1);
  CHECK(report.problems[0].code == ErrorCode::MonoNotInjective);
  // the kernel witness is t itself (its image has order 1)
  CHECK(report.problems[0].message.find("[0,1]") != std::string::npos);
  CHECK(report.problems[0].message.find("'l'") != std::string::npos);

  CHECK(code_of([&] { validate(bad, /*strict=*/true); }) ==
        ErrorCode::MonoNotInjective);
}

TEST_CASE("validate: disconnection lists stranded vertices") {
  auto z2 = VCGroup::finite(FiniteGroup::cyclic(2));
  GraphOfGroups gog = make_graph_of_groups({{"a", z2}, {"b", z2}}, {});
  ValidationReport report = validate(gog);
  CHECK(has_problem(report, ErrorCode::Disconnected));
  bool names_stranded = false;
  for (const auto& p : report.problems)
    if (p.message.find("'b'") != std::string::npos) names_stranded = true;
  CHECK(names_stranded);
}

TEST_CASE("validate: mismatched orientation groups are caught") {
  GraphOfGroups gog = fx::bs23_loop();
  gog.edge_groups[1] = VCGroup::trivial_model();  // break ē's group by hand
  ValidationReport report = validate(gog);
  CHECK(has_problem(report, ErrorCode::GraphInvariantViolated));
}

TEST_CASE("spanning tree: base cases") {
  // single vertex: empty tree
  SpanningTree t0 = spanning_tree(single_z_vertex().graph);
  CHECK(t0.root == 0);
  CHECK(std::count(t0.in_tree.begin(), t0.in_tree.end(), 1) == 0);

  // loop: the tree is still empty
  SpanningTree t1 = spanning_tree(fx::bs23_loop().graph);
  CHECK(std::count(t1.in_tree.begin(), t1.in_tree.end(), 1) == 0);

  // disconnected graph: error
  Graph g2 = Graph::make({"a", "b"}, {});
  CHECK(code_of([&] { spanning_tree(g2); }) == ErrorCode::Disconnected);
}

TEST_CASE("spanning tree: theta keeps only the least edge") {
  GraphOfGroups theta = fx::theta_graph();
  const Graph& g = theta.graph;
  SpanningTree t = spanning_tree(g);
  CHECK(g.vertex_id(t.root) == "u");
  CHECK(t.contains(g.oriented_edge("p", true)));
  CHECK(t.contains(g.oriented_edge("p", false)));
  CHECK_FALSE(t.contains(g.oriented_edge("q", true)));
  CHECK_FALSE(t.contains(g.oriented_edge("r", true)));

  // determinism
  SpanningTree t2 = spanning_tree(g);
  CHECK(t.in_tree == t2.in_tree);
  CHECK(t.parent_edge == t2.parent_edge);
}

TEST_CASE("spanning tree: root is the lexicographically least vertex") {
  Graph g = Graph::make({"w", "u"}, {{"x", "w", "u"}});
  SpanningTree t = spanning_tree(g);
  CHECK(g.vertex_id(t.root) == "u");
  CHECK(t.depth[static_cast<size_t>(g.vertex_index("u"))] == 0);
  CHECK(t.depth[static_cast<size_t>(g.vertex_index("w"))] == 1);
}

TEST_CASE("spanning tree: geodesic paths") {
  Graph chain = Graph::make({"a", "b", "c", "d"},
                            {{"e1", "a", "b"}, {"e2", "b", "c"}, {"e3", "c", "d"}});
  SpanningTree t = spanning_tree(chain);
  int a = chain.vertex_index("a"), d = chain.vertex_index("d");
  int b = chain.vertex_index("b");

  auto walk = [&](const std::vector<int>& path, int from) {
    int at = from;
    for (int e : path) {
      CHECK(chain.iota(e) == at);
      at = chain.tau(e);
    }
    return at;
  };

  std::vector<int> p_ad = t.path(chain, a, d);
  CHECK(p_ad.size() == 3);
  CHECK(walk(p_ad, a) == d);

  std::vector<int> p_db = t.path(chain, d, b);
  CHECK(p_db.size() == 2);
  CHECK(walk(p_db, d) == b);

  CHECK(t.path(chain, a, a).empty());

  // path through the root from one branch to another
  Graph star = Graph::make({"r", "x", "y"}, {{"e1", "r", "x"}, {"e2", "r", "y"}});
  SpanningTree ts = spanning_tree(star);
  std::vector<int> p_xy =
      ts.path(star, star.vertex_index("x"), star.vertex_index("y"));
  CHECK(p_xy.size() == 2);
  int at = star.vertex_index("x");
  for (int e : p_xy) {
    CHECK(star.iota(e) == at);
    at = star.tau(e);
  }
  CHECK(at == star.vertex_index("y"));
}

TEST_CASE("relation instances carry both mono images") {
  GraphOfGroups bs = fx::bs23_loop();
  auto rels = relation_instances(bs);
  REQUIRE(rels.size() == 1);
  CHECK(rels[0].s == (VCElement{0, 1, 0}));
  CHECK(rels[0].lhs_inner == (VCElement{0, 3, 0}));
  CHECK(rels[0].rhs == (VCElement{0, 2, 0}));

  // edge group Z x Z/2 has two generators -> two instances
  auto rels_mixed = relation_instances(fx::mixed_torsion());
  CHECK(rels_mixed.size() == 2);

  // trivial edge groups contribute nothing
  CHECK(relation_instances(fx::free_product_z2_z3()).empty());
}

TEST_CASE("presentation: free cases") {
  GraphOfGroups zv = single_z_vertex();
  Presentation pz = presentation(zv, spanning_tree(zv.graph));
  CHECK(pz.generators == std::vector<std::string>{"g(v,[0,1])"});
  CHECK(pz.relations.empty());
  CHECK(pz.text == "< g(v,[0,1]) | >");

  GraphOfGroups loop = trivial_loop();
  Presentation pl = presentation(loop, spanning_tree(loop.graph));
  CHECK(pl.generators == std::vector<std::string>{"e(l)"});
  CHECK(pl.relations.empty());
  CHECK(pl.text == "< e(l) | >");
}

TEST_CASE("presentation: one conjugation relation per edge generator") {
  GraphOfGroups bs = fx::bs23_loop();
  Presentation p = presentation(bs, spanning_tree(bs.graph));
  CHECK(p.generators ==
        std::vector<std::string>{"g(v,[0,1])", "e(l)"});
  REQUIRE(p.relations.size() == 1);
  CHECK(p.relations[0] == "e(l);g(v,[0,3]);E(l) = g(v,[0,2])");

  // byte-identical determinism across runs
  Presentation p2 = presentation(fx::bs23_loop(), spanning_tree(bs.graph));
  CHECK(p.text == p2.text);
  CHECK(p.generators == p2.generators);
  CHECK(p.relations == p2.relations);
}

TEST_CASE("presentation: tree edges lose their symbol") {
  GraphOfGroups theta = fx::theta_graph();
  SpanningTree t = spanning_tree(theta.graph);
  Presentation p = presentation(theta, t);
  CHECK(p.generators ==
        std::vector<std::string>{"g(u,[0,1])", "g(w,[0,1])", "e(q)", "e(r)"});
  REQUIRE(p.relations.size() == 2);
  // tree edge p: bare identification of the two generator images
  CHECK(p.relations[0] == "g(w,[0,1]) = g(u,[0,1])");
  // non-tree edge q keeps its stable letter
  CHECK(p.relations[1] == "e(q);g(w,[0,3]);E(q) = g(u,[0,2])");
}

TEST_CASE("presentation: free product of torsion groups") {
  GraphOfGroups fp = fx::free_product_z2_z3();
  Presentation p = presentation(fp, spanning_tree(fp.graph));
  // the only edge is in the tree and its group is trivial: no relations
  CHECK(p.generators ==
        std::vector<std::string>{"g(u,[1])", "g(w,[1])"});
  CHECK(p.relations.empty());
}

TEST_CASE("split along a finite edge: amalgam case") {
  GraphOfGroups fp = fx::free_product_z2_z3();
  SplitResult s = split_along_finite_edge(fp, "a");
  CHECK(s.is_amalgam);
  CHECK(s.edge_id == "a");
  CHECK(s.iota_vertex == "u");
  CHECK(s.tau_vertex == "w");
  CHECK(s.edge_group->variant() == VCClass::Finite);
  CHECK(s.part1.graph.vertex_count() == 1);
  CHECK(s.part1.graph.vertex_id(0) == "u");
  CHECK(s.part1.graph.geometric_edge_count() == 0);
  CHECK(s.part2.graph.vertex_count() == 1);
  CHECK(s.part2.graph.vertex_id(0) == "w");
  // groups are inherited as the same objects
  CHECK(s.part1.vertex_groups[0] == fp.vertex_groups[0]);
  CHECK(s.part2.vertex_groups[0] == fp.vertex_groups[1]);
}

TEST_CASE("split along a finite edge: stable letter case") {
  GraphOfGroups theta = fx::theta_graph();
  SplitResult s = split_along_finite_edge(theta, "r");
  CHECK_FALSE(s.is_amalgam);
  CHECK(s.part1.graph.vertex_count() == 2);
  CHECK(s.part1.graph.geometric_edge_count() == 2);
  CHECK(validate(s.part1).valid());

  // a loop with a finite group also yields a stable letter datum
  GraphOfGroups loop = trivial_loop();
  SplitResult sl = split_along_finite_edge(loop, "l");
  CHECK_FALSE(sl.is_amalgam);
  CHECK(sl.part1.graph.vertex_count() == 1);
  CHECK(sl.part1.graph.geometric_edge_count() == 0);
}

TEST_CASE("split along a finite edge: errors") {
  CHECK(code_of([&] {
          split_along_finite_edge(fx::theta_graph(), "p");
        }) == ErrorCode::EdgeGroupNotFinite);
  CHECK(code_of([&] {
          split_along_finite_edge(fx::bs23_loop(), "l");
        }) == ErrorCode::EdgeGroupNotFinite);
  CHECK(code_of([&] {
          split_along_finite_edge(fx::theta_graph(), "zz");
        }) == ErrorCode::UnknownEdge);
}

TEST_CASE("edge reduction: all-infinite data are already leaves") {
  for (const char* name : {"bs23_loop", "dinfty_loop", "mixed_torsion"}) {
    CAPTURE(name);
    GraphOfGroups gog = [&] {
      if (std::string(name) == "bs23_loop") return fx::bs23_loop();
      if (std::string(name) == "dinfty_loop") return fx::dinfty_loop();
      return fx::mixed_torsion();
    }();
    EdgeReduction red = infinite_edge_reduction(gog);
    REQUIRE(red.leaves.size() == 1);
    REQUIRE(red.tree.nodes.size() == 1);
    CHECK(red.tree.nodes[static_cast<size_t>(red.tree.root)].kind ==
          DecompositionNode::Kind::Leaf);
    CHECK(red.leaves[0].graph.vertex_count() == gog.graph.vertex_count());
  }
}

TEST_CASE("edge reduction: free product splits into two leaves") {
  EdgeReduction red = infinite_edge_reduction(fx::free_product_z2_z3());
  CHECK(red.leaves.size() == 2);
  REQUIRE(red.tree.nodes.size() == 3);
  const DecompositionNode& root =
      red.tree.nodes[static_cast<size_t>(red.tree.root)];
  CHECK(root.kind == DecompositionNode::Kind::Amalgam);
  CHECK(root.edge_id == "a");
  CHECK(root.edge_group->variant() == VCClass::Finite);
  REQUIRE(root.children.size() == 2);
  for (int c : root.children)
    CHECK(red.tree.nodes[static_cast<size_t>(c)].kind ==
          DecompositionNode::Kind::Leaf);
}

TEST_CASE("edge reduction: theta loses only its finite edge") {
  EdgeReduction red = infinite_edge_reduction(fx::theta_graph());
  REQUIRE(red.leaves.size() == 1);
  REQUIRE(red.tree.nodes.size() == 2);
  const DecompositionNode& root =
      red.tree.nodes[static_cast<size_t>(red.tree.root)];
  CHECK(root.kind == DecompositionNode::Kind::Hnn);
  CHECK(root.edge_id == "r");
  CHECK(red.leaves[0].graph.geometric_edge_count() == 2);
}

TEST_CASE("edge reduction: leaves partition the vertex set") {
  auto z2 = VCGroup::finite(FiniteGroup::cyclic(2));
  auto z3 = VCGroup::finite(FiniteGroup::cyclic(3));
  auto z = VCGroup::z_model();
  auto triv = VCGroup::trivial_model();
  VCHom t_u = VCHom::make(triv, z2, {}, {});
  VCHom t_w = VCHom::make(triv, z3, {}, {});
  VCHom t_x = VCHom::make(triv, z, {}, {});
  GraphOfGroups chain = make_graph_of_groups(
      {{"u", z2}, {"w", z3}, {"x", z}},
      {{"d", "u", "w", triv, t_u, t_w}, {"c", "w", "x", triv, t_w, t_x}});

  EdgeReduction red = infinite_edge_reduction(chain);
  CHECK(red.leaves.size() == 3);
  CHECK(red.tree.nodes.size() == 5);

  std::multiset<std::string> seen;
  for (const auto& leaf : red.leaves) {
    for (int v = 0; v < leaf.graph.vertex_count(); ++v)
      seen.insert(leaf.graph.vertex_id(v));
    for (int e = 0; e < leaf.graph.oriented_edge_count(); e += 2)
      CHECK(leaf.edge_groups[static_cast<size_t>(e)]->is_infinite());
  }
  CHECK(seen == std::multiset<std::string>{"u", "w", "x"});

  for (const auto& [name, gog] : fx::all_gog_fixtures()) {
    CAPTURE(name);
    EdgeReduction r = infinite_edge_reduction(gog);
    std::multiset<std::string> ids;
    for (const auto& leaf : r.leaves)
      for (int v = 0; v < leaf.graph.vertex_count(); ++v)
        ids.insert(leaf.graph.vertex_id(v));
    std::multiset<std::string> expect;
    for (int v = 0; v < gog.graph.vertex_count(); ++v)
      expect.insert(gog.graph.vertex_id(v));
    CHECK(ids == expect);
  }
}
