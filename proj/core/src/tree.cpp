#include "ggk/tree.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <string>

namespace ggk {

namespace {

std::string elt_key(const VCElement& x) {
  return std::to_string(x.f) + "," + std::to_string(x.n) + "," +
         std::to_string(x.eps);
}

std::string nf_key(const NormalForm& nf) {
  std::string s = std::to_string(nf.base) + ":" + elt_key(nf.lead);
  for (const NormalForm::Step& st : nf.steps)
    s += "|" + std::to_string(st.edge) + ":" + elt_key(st.label);
  return s;
}

std::string free_key(const FreeWord& fw) {
  std::string s;
  for (size_t i = 0; i < fw.letters.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(fw.letters[i]);
  }
  return s;
}

VCElement& trailing_label(NormalForm& nf) {
  return nf.steps.empty() ? nf.lead : nf.steps.back().label;
}

// All canonical representatives of cosets h·image(mono) in gv, sorted by the
// representative key; truncated when the enumeration stopped at the cap.
struct CosetEnum {
  std::vector<VCElement> reps;
  bool truncated = false;
};

CosetEnum enumerate_cosets(const VCGroup& gv, const VCHom& mono,
                           long long cap) {
  std::optional<long long> index = vc_image_index(mono);
  const long long want = index ? std::min(*index, cap) : cap;

  CosetEnum out;
  out.truncated = !index || *index > cap;

  std::set<std::array<long long, 4>> seen;
  auto add = [&](const VCElement& g) {
    if (static_cast<long long>(out.reps.size()) >= want) return;
    VCElement rep = coset_rep(gv, mono, g).rep;
    if (seen.insert(element_key(rep)).second) out.reps.push_back(rep);
  };

  const int fcount = gv.finite_part()->order();
  if (!gv.is_infinite()) {
    for (Elt f = 0;
         f < fcount && static_cast<long long>(out.reps.size()) < want; ++f)
      add(VCElement{f, 0, 0});
  } else {
    // every coset contains an element within this translation range
    long long offsets = 0;
    for (const VCElement& img : mono.finite_images)
      offsets = std::max(offsets, std::abs(img.n));
    offsets = std::max(offsets, std::abs(mono.t_img.n));
    offsets = std::max(offsets, std::abs(mono.a_img.n));
    const long long edge_order =
        mono.source->is_infinite() ? 1 : mono.source->finite_part()->order();
    const long long shell_bound =
        index ? std::abs(mono.t_img.n) + offsets + 4
              : cap * std::max<long long>(1, edge_order) + offsets + 4;

    const bool dihedral = gv.variant() == VCClass::Nonorientable;
    for (long long s = 0;
         s <= shell_bound && static_cast<long long>(out.reps.size()) < want;
         ++s) {
      for (long long n : s == 0 ? std::vector<long long>{0}
                                : std::vector<long long>{s, -s}) {
        for (int eps = 0; eps <= (dihedral ? 1 : 0); ++eps)
          for (Elt f = 0; f < fcount; ++f)
            add(VCElement{f, n, eps});
      }
    }
  }

  require_internal(static_cast<long long>(out.reps.size()) == want,
                   "coset enumeration must reach its target count");
  std::sort(out.reps.begin(), out.reps.end(), key_less);
  return out;
}

std::string vertex_dedup_key(const TreeVertex& x) {
  return std::to_string(x.label) + "#" + nf_key(x.rep);
}

VCElement random_elt_of(std::mt19937& rng, const VCGroup& g) {
  std::uniform_int_distribution<int> fdist(0, g.finite_part()->order() - 1);
  VCElement x;
  x.f = fdist(rng);
  if (g.is_infinite()) {
    std::uniform_int_distribution<long long> ndist(-4, 4);
    x.n = ndist(rng);
  }
  if (g.variant() == VCClass::Nonorientable) {
    std::uniform_int_distribution<int> edist(0, 1);
    x.eps = edist(rng);
  }
  return x;
}

Pi1Word random_word_over(std::mt19937& rng, const GraphOfGroups& gog,
                         int max_len) {
  std::uniform_int_distribution<int> len_dist(0, max_len);
  std::uniform_int_distribution<int> kind_dist(0, 2);
  std::uniform_int_distribution<int> vdist(0, gog.graph.vertex_count() - 1);
  std::uniform_int_distribution<int> edist(0,
                                           gog.graph.oriented_edge_count() - 1);
  Pi1Word w;
  const int len = len_dist(rng);
  for (int i = 0; i < len; ++i) {
    if (kind_dist(rng) == 0) {
      int v = vdist(rng);
      w.tokens.push_back(
          Pi1Token::vertex(v, random_elt_of(rng, *gog.vertex_groups[v])));
    } else {
      w.tokens.push_back(Pi1Token::edge(edist(rng)));
    }
  }
  return w;
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

bool connected_with_tree_count(size_t vertex_count,
                               const std::vector<std::pair<int, int>>& edges) {
  if (vertex_count == 0) return false;
  if (edges.size() != vertex_count - 1) return false;
  std::vector<std::vector<int>> adj(vertex_count);
  for (const auto& [a, b] : edges) {
    adj[static_cast<size_t>(a)].push_back(b);
    adj[static_cast<size_t>(b)].push_back(a);
  }
  std::vector<char> seen(vertex_count, 0);
  std::deque<int> q{0};
  seen[0] = 1;
  size_t visited = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int n : adj[static_cast<size_t>(v)])
      if (!seen[static_cast<size_t>(n)]) {
        seen[static_cast<size_t>(n)] = 1;
        ++visited;
        q.push_back(n);
      }
  }
  return visited == vertex_count;
}

void require_matching_source(const GraphOfGroups& ball_gog,
                             const GraphOfGroups& hom_source) {
  const Graph& a = ball_gog.graph;
  const Graph& b = hom_source.graph;
  bool same = a.vertex_count() == b.vertex_count() &&
              a.oriented_edge_count() == b.oriented_edge_count();
  for (int v = 0; same && v < a.vertex_count(); ++v)
    same = a.vertex_id(v) == b.vertex_id(v) &&
           ball_gog.vertex_groups[static_cast<size_t>(v)] ==
               hom_source.vertex_groups[static_cast<size_t>(v)];
  for (int e = 0; same && e < a.oriented_edge_count(); ++e)
    same = a.edge_id(e) == b.edge_id(e) && a.iota(e) == b.iota(e) &&
           a.tau(e) == b.tau(e);
  if (!same)
    fail(ErrorCode::ProjectionMismatch,
         "induced map does not live over the ball's graph of groups");
}

}  // namespace

TreeVertex tree_vertex(const GraphOfGroups& gog, const SpanningTree& t,
                       int label, const Pi1Word& path_from_root) {
  NormalForm nf = reduce_path(gog, t, t.root, label, path_from_root);
  trailing_label(nf) =
      gog.vertex_groups[static_cast<size_t>(label)]->identity_elt();
  return TreeVertex{label, std::move(nf)};
}

long long default_coset_cap() {
  if (const char* s = std::getenv("GGK_COSET_CAP")) {
    try {
      size_t used = 0;
      long long v = std::stoll(s, &used);
      if (used == std::string(s).size()) return v;
    } catch (const std::exception&) {
      // unparsable: fall through to the default
    }
  }
  return 10000;
}

TreeBall ball(const GraphOfGroups& gog, int base_vertex, int radius,
              long long coset_cap) {
  const Graph& g = gog.graph;
  if (base_vertex < 0 || base_vertex >= g.vertex_count())
    fail(ErrorCode::UnknownVertex,
         "ball base index " + std::to_string(base_vertex) + " is out of range");
  if (radius < 0)
    fail(ErrorCode::GraphInvariantViolated, "ball radius must be nonnegative");

  TreeBall b;
  b.gog = gog;
  b.tree = spanning_tree(g);
  b.radius = radius;
  b.coset_cap = coset_cap == -1 ? default_coset_cap() : coset_cap;
  if (radius >= 1 && b.coset_cap < 1)
    fail(ErrorCode::EdgeCosetEnumerationCapExceeded,
         "coset cap " + std::to_string(b.coset_cap) +
             " cannot produce even a radius-1 ball");

  b.vertices.push_back(tree_vertex(gog, b.tree, base_vertex, Pi1Word{}));
  b.depth.push_back(0);
  b.truncated.push_back(0);
  b.parent.push_back(-1);

  std::map<std::string, size_t> seen;
  seen.emplace(vertex_dedup_key(b.vertices[0]), 0);
  std::map<int, CosetEnum> cosets_at;  // per oriented edge

  for (size_t i = 0; i < b.vertices.size(); ++i) {
    if (b.depth[i] >= radius) continue;
    const TreeVertex x = b.vertices[i];  // the vector grows while expanding
    const VCGroup& gv = *gog.vertex_groups[static_cast<size_t>(x.label)];
    for (int e : g.out_edges(x.label)) {
      auto cached = cosets_at.find(e);
      if (cached == cosets_at.end())
        cached = cosets_at
                     .emplace(e, enumerate_cosets(gv, gog.mono(e), b.coset_cap))
                     .first;
      const CosetEnum& ce = cached->second;
      if (ce.truncated) b.truncated[i] = 1;
      for (const VCElement& h : ce.reps) {
        Pi1Word w = to_word(gog, x.rep);
        w.tokens.push_back(Pi1Token::vertex(x.label, h));
        w.tokens.push_back(Pi1Token::edge(e));
        TreeVertex child = tree_vertex(gog, b.tree, g.tau(e), w);
        if (b.parent[i] >= 0 &&
            child == b.vertices[static_cast<size_t>(b.parent[i])])
          continue;
        auto [it, fresh] =
            seen.emplace(vertex_dedup_key(child), b.vertices.size());
        require_internal(fresh, "ball expansion must not revisit a vertex");
        NormalForm coset = x.rep;
        trailing_label(coset) = h;
        b.edges.push_back({static_cast<int>(i),
                           static_cast<int>(b.vertices.size()), e,
                           std::move(coset)});
        b.vertices.push_back(std::move(child));
        b.depth.push_back(b.depth[i] + 1);
        b.truncated.push_back(0);
        b.parent.push_back(static_cast<int>(i));
      }
    }
  }
  return b;
}

TreeVertex act(const GraphOfGroups& gog, const SpanningTree& t,
               const Pi1Word& w, const TreeVertex& x) {
  return tree_vertex(gog, t, x.label, concat(w, to_word(gog, x.rep)));
}

StabilizerWitness stabilizer_witness(const TreeBall& b, const TreeVertex& x) {
  NormalForm loop = reduce(b.gog, b.tree, to_word(b.gog, x.rep));
  return {Pi1Word{display_tokens(b.gog, b.tree, loop)}, x.label};
}

StabilizerCheckReport check_stabilizer_witness(const TreeBall& b,
                                               const TreeVertex& x,
                                               int samples, unsigned seed) {
  const GraphOfGroups& gog = b.gog;
  const StabilizerWitness sw = stabilizer_witness(b, x);
  const Pi1Word conj_inv = inverse_word(gog, sw.conjugator);
  const VCGroup& gv = *gog.vertex_groups[static_cast<size_t>(sw.vertex)];
  std::mt19937 rng(seed);

  for (int i = 0; i < samples; ++i) {
    Pi1Word member = sw.conjugator;
    member.tokens.push_back(
        Pi1Token::vertex(sw.vertex, random_elt_of(rng, gv)));
    member = concat(member, conj_inv);
    if (act(gog, b.tree, member, x) != x)
      return {false,
              "conjugated vertex-group element moved the tree vertex: " +
                  word_text(gog, member.tokens)};
  }

  for (int i = 0; i < samples; ++i) {
    Pi1Word w = random_word_over(rng, gog, 8);
    const bool fixes = act(gog, b.tree, w, x) == x;
    Pi1Word pulled = concat(conj_inv, concat(w, sw.conjugator));
    const bool member =
        try_membership_in_vertex_group(gog, b.tree, pulled, sw.vertex)
            .has_value();
    if (fixes != member)
      return {false, std::string(fixes ? "fixing" : "moving") +
                         " word disagrees with conjugated membership: " +
                         word_text(gog, w.tokens)};
  }
  return {true, ""};
}

QuotientBall quotient_ball_by_kernel(const TreeBall& b, const InducedHom& h) {
  require_matching_source(b.gog, h.source);
  const bool phi = h.kind == InducedHom::Kind::PhiFree;
  const Graph& g = b.gog.graph;

  QuotientBall qb;
  std::map<std::string, int> node_of;
  std::vector<int> src2node(b.vertices.size(), -1);
  for (size_t i = 0; i < b.vertices.size(); ++i) {
    const TreeVertex& x = b.vertices[i];
    std::string key;
    if (phi) {
      key = "f|" +
            free_key(apply_phi(b.gog, b.tree, to_word(b.gog, x.rep)));
    } else {
      NormalForm nf = reduce_path(h.target, b.tree, b.tree.root, x.label,
                                  apply_q(h, to_word(b.gog, x.rep)));
      trailing_label(nf) =
          h.target.vertex_groups[static_cast<size_t>(x.label)]->identity_elt();
      key = "q|" + nf_key(nf);
    }
    auto [it, fresh] = node_of.emplace(std::to_string(x.label) + "#" + key,
                                       static_cast<int>(qb.nodes.size()));
    if (fresh) qb.nodes.push_back({x.label, key});
    src2node[i] = it->second;
  }

  std::map<std::string, int> arc_of;
  for (const TreeBallEdge& e : b.edges) {
    const int fwd = e.edge & ~1;
    Pi1Word coset_word = to_word(b.gog, e.coset);
    int from_node, to_node;
    if (e.edge == fwd) {
      from_node = src2node[static_cast<size_t>(e.from)];
      to_node = src2node[static_cast<size_t>(e.to)];
    } else {
      // re-express the edge coset on the forward orientation
      coset_word.tokens.push_back(Pi1Token::edge(e.edge));
      from_node = src2node[static_cast<size_t>(e.to)];
      to_node = src2node[static_cast<size_t>(e.from)];
    }
    std::string key;
    if (phi) {
      key = "f|" + free_key(apply_phi(b.gog, b.tree, coset_word));
    } else {
      const int iv = g.iota(fwd);
      NormalForm nf = reduce_path(h.target, b.tree, b.tree.root, iv,
                                  apply_q(h, coset_word));
      trailing_label(nf) =
          coset_rep(*h.target.vertex_groups[static_cast<size_t>(iv)],
                    h.target.mono(fwd), trailing_label(nf))
              .rep;
      key = "q|" + nf_key(nf);
    }
    auto [it, fresh] = arc_of.emplace(g.edge_id(fwd) + "#" + key,
                                      static_cast<int>(qb.arcs.size()));
    if (fresh) {
      qb.arcs.push_back({from_node, to_node, fwd, key});
    } else {
      const QuotientBall::Arc& a = qb.arcs[static_cast<size_t>(it->second)];
      require_internal(a.from == from_node && a.to == to_node,
                       "identified edges must join identified endpoints");
    }
  }

  qb.base = src2node[0];
  qb.depth.assign(qb.nodes.size(), -1);
  std::vector<std::vector<int>> adj(qb.nodes.size());
  for (const QuotientBall::Arc& a : qb.arcs) {
    adj[static_cast<size_t>(a.from)].push_back(a.to);
    adj[static_cast<size_t>(a.to)].push_back(a.from);
  }
  std::deque<int> q{qb.base};
  qb.depth[static_cast<size_t>(qb.base)] = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int n : adj[static_cast<size_t>(v)])
      if (qb.depth[static_cast<size_t>(n)] < 0) {
        qb.depth[static_cast<size_t>(n)] = qb.depth[static_cast<size_t>(v)] + 1;
        q.push_back(n);
      }
  }
  return qb;
}

QuotientBall truncate_to_radius(const QuotientBall& qb, int radius) {
  QuotientBall out;
  std::vector<int> remap(qb.nodes.size(), -1);
  for (size_t i = 0; i < qb.nodes.size(); ++i) {
    if (qb.depth[i] < 0 || qb.depth[i] > radius) continue;
    remap[i] = static_cast<int>(out.nodes.size());
    out.nodes.push_back(qb.nodes[i]);
    out.depth.push_back(qb.depth[i]);
  }
  for (const QuotientBall::Arc& a : qb.arcs) {
    int f = remap[static_cast<size_t>(a.from)];
    int t = remap[static_cast<size_t>(a.to)];
    if (f >= 0 && t >= 0) out.arcs.push_back({f, t, a.edge, a.key});
  }
  out.base = remap[static_cast<size_t>(qb.base)];
  require_internal(out.base >= 0, "quotient base survives truncation");
  return out;
}

UnfoldedBall unfold_universal_cover(const Graph& g, int base_vertex,
                                    int radius) {
  if (base_vertex < 0 || base_vertex >= g.vertex_count())
    fail(ErrorCode::UnknownVertex, "unfolding base index " +
                                       std::to_string(base_vertex) +
                                       " is out of range");
  UnfoldedBall u;
  u.labels.push_back(base_vertex);
  u.depth.push_back(0);
  std::vector<int> incoming{-1};
  for (size_t i = 0; i < u.labels.size(); ++i) {
    if (u.depth[i] >= radius) continue;
    for (int e : g.out_edges(u.labels[i])) {
      if (incoming[i] != -1 && e == g.bar(incoming[i])) continue;
      u.arcs.push_back(
          {static_cast<int>(i), static_cast<int>(u.labels.size()), e});
      u.labels.push_back(g.tau(e));
      u.depth.push_back(u.depth[i] + 1);
      incoming.push_back(e);
    }
  }
  return u;
}

bool is_tree(const TreeBall& b) {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(b.edges.size());
  for (const TreeBallEdge& e : b.edges) edges.emplace_back(e.from, e.to);
  return connected_with_tree_count(b.vertices.size(), edges);
}

bool is_tree(const QuotientBall& qb) {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(qb.arcs.size());
  for (const QuotientBall::Arc& a : qb.arcs) edges.emplace_back(a.from, a.to);
  return connected_with_tree_count(qb.nodes.size(), edges);
}

bool quotient_matches_unfolding(const QuotientBall& qb,
                                const UnfoldedBall& ub) {
  if (qb.nodes.size() != ub.labels.size()) return false;
  if (qb.nodes.empty()) return true;

  auto neighbors = [](size_t count, auto&& arcs,
                      std::vector<std::map<int, int>>& nb) {
    nb.assign(count, {});
    for (const auto& a : arcs) {
      if (!nb[static_cast<size_t>(a.from)].emplace(a.edge, a.to).second)
        return false;
      if (!nb[static_cast<size_t>(a.to)].emplace(a.edge ^ 1, a.from).second)
        return false;
    }
    return true;
  };
  std::vector<std::map<int, int>> nq, nu;
  if (!neighbors(qb.nodes.size(), qb.arcs, nq)) return false;
  if (!neighbors(ub.labels.size(), ub.arcs, nu)) return false;

  std::vector<int> match(qb.nodes.size(), -1);
  std::vector<char> hit(ub.labels.size(), 0);
  if (qb.nodes[static_cast<size_t>(qb.base)].label !=
      ub.labels[static_cast<size_t>(ub.base)])
    return false;
  match[static_cast<size_t>(qb.base)] = ub.base;
  hit[static_cast<size_t>(ub.base)] = 1;
  std::deque<int> queue{qb.base};
  size_t matched = 1;
  while (!queue.empty()) {
    int a = queue.front();
    queue.pop_front();
    int bnode = match[static_cast<size_t>(a)];
    const auto& ma = nq[static_cast<size_t>(a)];
    const auto& mb = nu[static_cast<size_t>(bnode)];
    if (ma.size() != mb.size()) return false;
    for (const auto& [edge, qn] : ma) {
      auto it = mb.find(edge);
      if (it == mb.end()) return false;
      int un = it->second;
      if (qb.nodes[static_cast<size_t>(qn)].label !=
          ub.labels[static_cast<size_t>(un)])
        return false;
      if (match[static_cast<size_t>(qn)] >= 0) {
        if (match[static_cast<size_t>(qn)] != un) return false;
      } else {
        if (hit[static_cast<size_t>(un)]) return false;
        match[static_cast<size_t>(qn)] = un;
        hit[static_cast<size_t>(un)] = 1;
        ++matched;
        queue.push_back(qn);
      }
    }
  }
  return matched == qb.nodes.size();
}

std::string to_dot(const TreeBall& b) {
  std::string out = "graph tree_ball {\n";
  for (size_t i = 0; i < b.vertices.size(); ++i) {
    const TreeVertex& x = b.vertices[i];
    std::string rep =
        word_text(b.gog, display_tokens(b.gog, b.tree, x.rep));
    out += "  n" + std::to_string(i) + " [label=\"" +
           dot_escape(b.gog.graph.vertex_id(x.label) + "/" + rep) + "\"";
    if (b.truncated[i]) out += ", style=dashed";
    out += "];\n";
  }
  for (const TreeBallEdge& e : b.edges)
    out += "  n" + std::to_string(e.from) + " -- n" + std::to_string(e.to) +
           " [label=\"" + dot_escape(b.gog.graph.edge_id(e.edge)) + "\"];\n";
  out += "}\n";
  return out;
}

std::string to_dot(const QuotientBall& qb, const GraphOfGroups& gog) {
  std::string out = "graph quotient_ball {\n";
  for (size_t i = 0; i < qb.nodes.size(); ++i)
    out += "  n" + std::to_string(i) + " [label=\"" +
           dot_escape(gog.graph.vertex_id(qb.nodes[i].label) + "/" +
                      qb.nodes[i].key) +
           "\"];\n";
  for (const QuotientBall::Arc& a : qb.arcs)
    out += "  n" + std::to_string(a.from) + " -- n" + std::to_string(a.to) +
           " [label=\"" + dot_escape(gog.graph.edge_id(a.edge)) + "\"];\n";
  out += "}\n";
  return out;
}

}  // namespace ggk
