#include "ggk/gog.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace ggk {

namespace {

// Undirected reachability over oriented edges, optionally skipping one
// geometric edge (given as a forward oriented index, -1 for none).
std::vector<char> reachable_from(const Graph& g, int start, int skip_edge) {
  std::vector<char> seen(static_cast<size_t>(g.vertex_count()), 0);
  std::deque<int> queue{start};
  seen[static_cast<size_t>(start)] = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int e : g.out_edges(v)) {
      if (skip_edge >= 0 && (e == skip_edge || e == (skip_edge ^ 1))) continue;
      int w = g.tau(e);
      if (!seen[static_cast<size_t>(w)]) {
        seen[static_cast<size_t>(w)] = 1;
        queue.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace

Graph Graph::make(
    const std::vector<std::string>& vertex_ids,
    const std::vector<std::tuple<std::string, std::string, std::string>>&
        edges) {
  if (vertex_ids.empty())
    fail(ErrorCode::GraphInvariantViolated, "graph needs at least one vertex");
  Graph g;
  g.vertex_ids_ = vertex_ids;
  std::map<std::string, int> vidx;
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (!vidx.emplace(vertex_ids[static_cast<size_t>(v)], v).second)
      fail(ErrorCode::GraphInvariantViolated,
           "duplicate vertex id '" + vertex_ids[static_cast<size_t>(v)] + "'");
  }
  std::set<std::string> eids;
  for (const auto& [id, from, to] : edges) {
    if (!eids.insert(id).second)
      fail(ErrorCode::GraphInvariantViolated, "duplicate edge id '" + id + "'");
    auto fi = vidx.find(from);
    if (fi == vidx.end())
      fail(ErrorCode::UnknownVertex,
           "edge '" + id + "' starts at unknown vertex '" + from + "'");
    auto ti = vidx.find(to);
    if (ti == vidx.end())
      fail(ErrorCode::UnknownVertex,
           "edge '" + id + "' ends at unknown vertex '" + to + "'");
    g.edge_ids_.push_back(id);
    g.edge_ids_.push_back(id);
    g.iota_.push_back(fi->second);
    g.tau_.push_back(ti->second);
    g.iota_.push_back(ti->second);
    g.tau_.push_back(fi->second);
  }
  g.out_.assign(static_cast<size_t>(g.vertex_count()), {});
  for (int e = 0; e < g.oriented_edge_count(); ++e)
    g.out_[static_cast<size_t>(g.iota_[static_cast<size_t>(e)])].push_back(e);
  for (auto& list : g.out_)
    std::sort(list.begin(), list.end(), [&](int a, int b) {
      return std::make_pair(g.edge_ids_[static_cast<size_t>(a)], a & 1) <
             std::make_pair(g.edge_ids_[static_cast<size_t>(b)], b & 1);
    });
  return g;
}

int Graph::vertex_index(const std::string& id) const {
  for (int v = 0; v < vertex_count(); ++v)
    if (vertex_ids_[static_cast<size_t>(v)] == id) return v;
  fail(ErrorCode::UnknownVertex, "no vertex with id '" + id + "'");
}

int Graph::oriented_edge(const std::string& id, bool forward) const {
  for (int e = 0; e < oriented_edge_count(); e += 2)
    if (edge_ids_[static_cast<size_t>(e)] == id) return forward ? e : e + 1;
  fail(ErrorCode::UnknownEdge, "no edge with id '" + id + "'");
}

bool Graph::connected() const {
  auto seen = reachable_from(*this, 0, -1);
  return std::find(seen.begin(), seen.end(), 0) == seen.end();
}

std::string element_text(const VCGroup& g, const VCElement& x) {
  std::ostringstream out;
  out << "[" << x.f;
  if (g.is_infinite()) out << "," << x.n;
  if (g.variant() == VCClass::Nonorientable) out << "," << x.eps;
  out << "]";
  return out.str();
}

GraphOfGroups make_graph_of_groups(
    const std::vector<std::pair<std::string, VCGroupPtr>>& vertices,
    const std::vector<GeometricEdgeData>& edges) {
  std::vector<std::string> vids;
  vids.reserve(vertices.size());
  for (const auto& [id, grp] : vertices) {
    if (!grp)
      fail(ErrorCode::GraphInvariantViolated,
           "vertex '" + id + "' has no group");
    vids.push_back(id);
  }
  std::vector<std::tuple<std::string, std::string, std::string>> skel;
  skel.reserve(edges.size());
  for (const auto& e : edges) skel.emplace_back(e.id, e.from, e.to);

  GraphOfGroups gog;
  gog.graph = Graph::make(vids, skel);
  gog.vertex_groups.reserve(vertices.size());
  for (const auto& [id, grp] : vertices) gog.vertex_groups.push_back(grp);

  for (const auto& e : edges) {
    if (!e.group)
      fail(ErrorCode::GraphInvariantViolated,
           "edge '" + e.id + "' has no group");
    int from = gog.graph.vertex_index(e.from);
    int to = gog.graph.vertex_index(e.to);
    if (e.mono_from.source != e.group)
      fail(ErrorCode::GraphInvariantViolated,
           "edge '" + e.id + "': mono into '" + e.from +
               "' is not defined on the edge group");
    if (e.mono_to.source != e.group)
      fail(ErrorCode::GraphInvariantViolated,
           "edge '" + e.id + "': mono into '" + e.to +
               "' is not defined on the edge group");
    if (e.mono_from.target != gog.vertex_groups[static_cast<size_t>(from)])
      fail(ErrorCode::GraphInvariantViolated,
           "edge '" + e.id + "': mono target is not the group at '" + e.from +
               "'");
    if (e.mono_to.target != gog.vertex_groups[static_cast<size_t>(to)])
      fail(ErrorCode::GraphInvariantViolated,
           "edge '" + e.id + "': mono target is not the group at '" + e.to +
               "'");
    gog.edge_groups.push_back(e.group);
    gog.edge_groups.push_back(e.group);
    gog.monos.push_back(e.mono_from);
    gog.monos.push_back(e.mono_to);
  }
  return gog;
}

ValidationReport validate(const GraphOfGroups& gog, bool strict) {
  ValidationReport report;
  auto add = [&](ErrorCode code, const std::string& message) {
    if (strict) fail(code, message);
    report.problems.push_back({code, message});
  };

  const Graph& g = gog.graph;
  if (gog.vertex_groups.size() != static_cast<size_t>(g.vertex_count()) ||
      gog.edge_groups.size() != static_cast<size_t>(g.oriented_edge_count()) ||
      gog.monos.size() != static_cast<size_t>(g.oriented_edge_count())) {
    add(ErrorCode::GraphInvariantViolated,
        "group/mono tables do not match the graph size");
    return report;  // nothing else is safe to inspect
  }

  auto seen = reachable_from(g, 0, -1);
  std::vector<std::string> stranded;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (!seen[static_cast<size_t>(v)]) stranded.push_back(g.vertex_id(v));
  if (!stranded.empty()) {
    std::string msg = "graph is disconnected; unreachable from '" +
                      g.vertex_id(0) + "':";
    for (const auto& id : stranded) msg += " '" + id + "'";
    add(ErrorCode::Disconnected, msg);
  }

  for (int e = 0; e < g.oriented_edge_count(); e += 2) {
    const std::string& id = g.edge_id(e);
    if (gog.edge_groups[static_cast<size_t>(e)] !=
        gog.edge_groups[static_cast<size_t>(e + 1)])
      add(ErrorCode::GraphInvariantViolated,
          "edge '" + id + "': the two orientations carry different groups");
  }

  for (int e = 0; e < g.oriented_edge_count(); ++e) {
    const std::string& id = g.edge_id(e);
    std::string side =
        "edge '" + id + "' into '" + g.vertex_id(g.iota(e)) + "'";
    const VCHom& mono = gog.monos[static_cast<size_t>(e)];
    if (mono.source != gog.edge_groups[static_cast<size_t>(e)]) {
      add(ErrorCode::GraphInvariantViolated,
          side + ": mono is not defined on the edge group");
      continue;
    }
    if (mono.target !=
        gog.vertex_groups[static_cast<size_t>(g.iota(e))]) {
      add(ErrorCode::GraphInvariantViolated,
          side + ": mono does not land in the vertex group");
      continue;
    }
    if (!vc_hom_is_injective(mono)) {
      // Produce a concrete nontrivial kernel element as the witness.
      const VCGroup& src = *mono.source;
      std::string witness;
      const FiniteGroup& fp = *src.finite_part();
      for (int x = 0; x < fp.order() && witness.empty(); ++x)
        for (int y = x + 1; y < fp.order() && witness.empty(); ++y)
          if (mono.finite_images[static_cast<size_t>(x)] ==
              mono.finite_images[static_cast<size_t>(y)]) {
            Elt k = fp.mul(x, fp.inv(y));
            witness = element_text(src, src.from_finite(k));
          }
      if (witness.empty() && src.is_infinite()) {
        auto ord = vc_order(*mono.target, mono.t_img);
        if (ord) {
          VCElement tk = src.pow(src.t_elt(), *ord);
          witness = element_text(src, tk);
        }
      }
      add(ErrorCode::MonoNotInjective,
          side + ": mono has nontrivial kernel, witness " +
              (witness.empty() ? std::string("unavailable") : witness));
    }
  }
  return report;
}

SpanningTree spanning_tree(const Graph& g) {
  int root = 0;
  for (int v = 1; v < g.vertex_count(); ++v)
    if (g.vertex_id(v) < g.vertex_id(root)) root = v;

  SpanningTree t;
  t.root = root;
  t.in_tree.assign(static_cast<size_t>(g.oriented_edge_count()), 0);
  t.parent_edge.assign(static_cast<size_t>(g.vertex_count()), -1);
  t.depth.assign(static_cast<size_t>(g.vertex_count()), -1);
  t.depth[static_cast<size_t>(root)] = 0;

  std::deque<int> queue{root};
  int visited = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int e : g.out_edges(v)) {
      int w = g.tau(e);
      if (t.depth[static_cast<size_t>(w)] >= 0) continue;
      t.depth[static_cast<size_t>(w)] = t.depth[static_cast<size_t>(v)] + 1;
      t.parent_edge[static_cast<size_t>(w)] = e;
      t.in_tree[static_cast<size_t>(e)] = 1;
      t.in_tree[static_cast<size_t>(e ^ 1)] = 1;
      queue.push_back(w);
      ++visited;
    }
  }
  if (visited != g.vertex_count())
    fail(ErrorCode::Disconnected,
         "graph is disconnected; no spanning tree exists");
  return t;
}

std::vector<int> SpanningTree::path(const Graph& g, int u, int v) const {
  std::vector<int> up;    // edges walked from u toward the meeting point
  std::vector<int> down;  // edges walked from v toward the meeting point
  int a = u, b = v;
  while (depth[static_cast<size_t>(a)] > depth[static_cast<size_t>(b)]) {
    int e = parent_edge[static_cast<size_t>(a)];
    up.push_back(e ^ 1);  // parent edge points into a; reverse it to climb
    a = g.iota(e);
  }
  while (depth[static_cast<size_t>(b)] > depth[static_cast<size_t>(a)]) {
    int e = parent_edge[static_cast<size_t>(b)];
    down.push_back(e);
    b = g.iota(e);
  }
  while (a != b) {
    int ea = parent_edge[static_cast<size_t>(a)];
    up.push_back(ea ^ 1);
    a = g.iota(ea);
    int eb = parent_edge[static_cast<size_t>(b)];
    down.push_back(eb);
    b = g.iota(eb);
  }
  up.insert(up.end(), down.rbegin(), down.rend());
  return up;
}

std::vector<RelationInstance> relation_instances(const GraphOfGroups& gog) {
  const Graph& g = gog.graph;
  std::vector<int> order;
  for (int e = 0; e < g.oriented_edge_count(); e += 2) order.push_back(e);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return g.edge_id(a) < g.edge_id(b); });

  std::vector<RelationInstance> out;
  for (int e : order) {
    const VCGroup& eg = *gog.edge_groups[static_cast<size_t>(e)];
    for (const VCElement& s : eg.generator_elts()) {
      RelationInstance inst;
      inst.edge = e;
      inst.s = s;
      inst.lhs_inner = gog.monos[static_cast<size_t>(e ^ 1)](s);
      inst.rhs = gog.monos[static_cast<size_t>(e)](s);
      out.push_back(inst);
    }
  }
  return out;
}

Presentation presentation(const GraphOfGroups& gog, const SpanningTree& t) {
  const Graph& g = gog.graph;

  std::vector<int> vorder;
  for (int v = 0; v < g.vertex_count(); ++v) vorder.push_back(v);
  std::sort(vorder.begin(), vorder.end(),
            [&](int a, int b) { return g.vertex_id(a) < g.vertex_id(b); });

  Presentation p;
  for (int v : vorder) {
    const VCGroup& vg = *gog.vertex_groups[static_cast<size_t>(v)];
    for (const VCElement& x : vg.generator_elts())
      p.generators.push_back("g(" + g.vertex_id(v) + "," +
                             element_text(vg, x) + ")");
  }
  std::vector<int> eorder;
  for (int e = 0; e < g.oriented_edge_count(); e += 2) eorder.push_back(e);
  std::sort(eorder.begin(), eorder.end(),
            [&](int a, int b) { return g.edge_id(a) < g.edge_id(b); });
  for (int e : eorder)
    if (!t.contains(e)) p.generators.push_back("e(" + g.edge_id(e) + ")");

  for (const RelationInstance& inst : relation_instances(gog)) {
    int e = inst.edge;
    const std::string& id = g.edge_id(e);
    const VCGroup& at_tau = *gog.vertex_groups[static_cast<size_t>(g.tau(e))];
    const VCGroup& at_iota =
        *gog.vertex_groups[static_cast<size_t>(g.iota(e))];
    std::string inner =
        "g(" + g.vertex_id(g.tau(e)) + "," + element_text(at_tau, inst.lhs_inner) + ")";
    std::string lhs = t.contains(e)
                          ? inner
                          : "e(" + id + ");" + inner + ";E(" + id + ")";
    std::string rhs = "g(" + g.vertex_id(g.iota(e)) + "," +
                      element_text(at_iota, inst.rhs) + ")";
    p.relations.push_back(lhs + " = " + rhs);
  }

  std::string text = "<";
  for (size_t i = 0; i < p.generators.size(); ++i)
    text += (i ? ", " : " ") + p.generators[i];
  text += " |";
  for (size_t i = 0; i < p.relations.size(); ++i)
    text += (i ? ", " : " ") + p.relations[i];
  text += " >";
  p.text = text;
  return p;
}

namespace {

// Extracts the full sub-graph-of-groups spanned by a vertex subset, skipping
// one geometric edge.  Every surviving edge must have both endpoints inside
// the subset.
GraphOfGroups restrict_to(const GraphOfGroups& gog,
                          const std::vector<char>& keep, int skip_edge) {
  const Graph& g = gog.graph;
  std::vector<std::pair<std::string, VCGroupPtr>> vertices;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (keep[static_cast<size_t>(v)])
      vertices.emplace_back(g.vertex_id(v),
                            gog.vertex_groups[static_cast<size_t>(v)]);

  std::vector<GeometricEdgeData> edges;
  for (int e = 0; e < g.oriented_edge_count(); e += 2) {
    if (e == skip_edge) continue;
    if (!keep[static_cast<size_t>(g.iota(e))]) continue;
    require_internal(keep[static_cast<size_t>(g.tau(e))],
                     "severed edge must stay within one component");
    GeometricEdgeData data{g.edge_id(e),
                           g.vertex_id(g.iota(e)),
                           g.vertex_id(g.tau(e)),
                           gog.edge_groups[static_cast<size_t>(e)],
                           gog.monos[static_cast<size_t>(e)],
                           gog.monos[static_cast<size_t>(e ^ 1)]};
    edges.push_back(std::move(data));
  }
  return make_graph_of_groups(vertices, edges);
}

}  // namespace

SplitResult split_along_finite_edge(const GraphOfGroups& gog,
                                    const std::string& edge_id) {
  const Graph& g = gog.graph;
  int e = g.oriented_edge(edge_id, true);
  const VCGroupPtr& eg = gog.edge_groups[static_cast<size_t>(e)];
  if (eg->is_infinite())
    fail(ErrorCode::EdgeGroupNotFinite,
         "edge '" + edge_id + "' has an infinite edge group");

  SplitResult result;
  result.edge_group = eg;
  result.edge_id = edge_id;
  result.iota_vertex = g.vertex_id(g.iota(e));
  result.tau_vertex = g.vertex_id(g.tau(e));

  auto side = reachable_from(g, g.iota(e), e);
  if (side[static_cast<size_t>(g.tau(e))]) {
    result.is_amalgam = false;
    std::vector<char> all(static_cast<size_t>(g.vertex_count()), 1);
    result.part1 = restrict_to(gog, all, e);
  } else {
    result.is_amalgam = true;
    result.part1 = restrict_to(gog, side, e);
    std::vector<char> other(static_cast<size_t>(g.vertex_count()), 0);
    for (int v = 0; v < g.vertex_count(); ++v)
      other[static_cast<size_t>(v)] = side[static_cast<size_t>(v)] ? 0 : 1;
    result.part2 = restrict_to(gog, other, e);
  }
  return result;
}

namespace {

int reduce_rec(const GraphOfGroups& gog, EdgeReduction& out) {
  const Graph& g = gog.graph;
  int pick = -1;
  for (int e = 0; e < g.oriented_edge_count(); e += 2) {
    if (gog.edge_groups[static_cast<size_t>(e)]->is_infinite()) continue;
    if (pick < 0 || g.edge_id(e) < g.edge_id(pick)) pick = e;
  }
  if (pick < 0) {
    DecompositionNode node;
    node.kind = DecompositionNode::Kind::Leaf;
    node.leaf_index = static_cast<int>(out.leaves.size());
    out.leaves.push_back(gog);
    out.tree.nodes.push_back(std::move(node));
    return static_cast<int>(out.tree.nodes.size()) - 1;
  }

  SplitResult split = split_along_finite_edge(gog, g.edge_id(pick));
  DecompositionNode node;
  node.edge_id = split.edge_id;
  node.edge_group = split.edge_group;
  if (split.is_amalgam) {
    node.kind = DecompositionNode::Kind::Amalgam;
    node.children.push_back(reduce_rec(split.part1, out));
    node.children.push_back(reduce_rec(split.part2, out));
  } else {
    node.kind = DecompositionNode::Kind::Hnn;
    node.children.push_back(reduce_rec(split.part1, out));
  }
  out.tree.nodes.push_back(std::move(node));
  return static_cast<int>(out.tree.nodes.size()) - 1;
}

}  // namespace

EdgeReduction infinite_edge_reduction(const GraphOfGroups& gog) {
  EdgeReduction out;
  out.tree.root = reduce_rec(gog, out);
  return out;
}

}  // namespace ggk
