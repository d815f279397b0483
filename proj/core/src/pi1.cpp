#include "ggk/pi1.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <utility>

namespace ggk {

namespace {

long long floor_div(long long a, long long b) {
  long long q = a / b, r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

// ---------------------------------------------------------------------------
// coset representatives

CosetFactorization coset_rep(const VCGroup& vertex_group, const VCHom& mono,
                             const VCElement& g) {
  vertex_group.check_elt(g);
  const VCGroup& eg = *mono.source;

  // Identity coset: the representative is the identity element itself.
  if (auto direct = hom_preimage(mono, g))
    return {vertex_group.identity_elt(), *direct};

  VCElement best{};
  bool have_best = false;
  auto consider = [&](const VCElement& cand) {
    if (!have_best || key_less(cand, best)) {
      best = cand;
      have_best = true;
    }
  };

  if (!eg.is_infinite()) {
    for (size_t c = 0; c < mono.finite_images.size(); ++c)
      consider(vertex_group.mul(g, mono.finite_images[c]));
  } else {
    const VCElement big_t = mono.t_img;
    if (big_t.n == 0)
      fail(ErrorCode::MonoNotInjective,
           "coset reduction requires monos that keep the translation "
           "generator of infinite order");
    // modulus that controls how the finite part twists under translations
    const long long twist = vertex_group.variant() == VCClass::Orientable
                                ? vertex_group.alpha_order()
                                : vertex_group.phi_tau_order();
    const long long state_bound =
        static_cast<long long>(vertex_group.finite_part()->order()) * twist + 2;

    std::vector<VCElement> rights;  // id, and a's image for two-sided cosets
    rights.push_back(vertex_group.identity_elt());
    if (eg.variant() == VCClass::Nonorientable) rights.push_back(mono.a_img);

    for (size_t c = 0; c < mono.finite_images.size(); ++c) {
      const VCElement base =
          vertex_group.mul(g, mono.finite_images[c]);
      for (const VCElement& right : rights) {
        // candidates x(k) = base · T^k · right, k ranging over all integers
        std::vector<VCElement> cycle;  // y_k = base · T^k for one period
        VCElement y = base;
        auto state = [&](const VCElement& w) {
          long long nm = ((w.n % twist) + twist) % twist;
          return std::make_pair(w.f, nm);
        };
        const auto start = state(y);
        do {
          cycle.push_back(y);
          y = vertex_group.mul(y, big_t);
          require_internal(static_cast<long long>(cycle.size()) <= state_bound,
                           "translation orbit state must recur");
        } while (state(y) != start);

        const long long p = static_cast<long long>(cycle.size());
        // translation advance across one full period
        const long long d =
            vertex_group.mul(cycle[0], vertex_group.pow(big_t, p)).n -
            cycle[0].n;
        require_internal(d != 0, "periodic block must translate");
        for (long long r = 0; r < p; ++r) {
          const long long n_r = vertex_group.mul(cycle[static_cast<size_t>(r)], right).n;
          const long long q0 = floor_div(-n_r, d);
          for (long long q = q0 - 1; q <= q0 + 2; ++q) {
            const long long k = r + p * q;
            VCElement cand = vertex_group.mul(
                vertex_group.mul(base, vertex_group.pow(big_t, k)), right);
            consider(cand);
          }
        }
      }
    }
  }

  require_internal(have_best, "coset has at least one candidate");
  // g = rep · mono(factor)
  VCElement diff = vertex_group.mul(vertex_group.inv(best), g);
  auto s = hom_preimage(mono, diff);
  require_internal(s.has_value(),
                   "representative must lie in the same coset as g");
  return {best, *s};
}

// ---------------------------------------------------------------------------
// the reducer

namespace {

class Scanner {
 public:
  Scanner(const GraphOfGroups& gog, const SpanningTree& t, int base)
      : gog_(gog), t_(t), cur_(base) {
    nf_.base = base;
    nf_.lead = group(base).identity_elt();
  }

  void label(const VCElement& x) { tail() = group(cur_).mul(tail(), x); }

  void goto_vertex(int v) {
    if (v == cur_) return;
    for (int e : t_.path(gog_.graph, cur_, v)) edge(e);
  }

  void edge(int e) {
    require_internal(gog_.graph.iota(e) == cur_,
                     "edge token must start at the current vertex");
    const int back = gog_.graph.bar(e);
    if (!nf_.steps.empty() && nf_.steps.back().edge == back) {
      if (auto s = hom_preimage(gog_.mono(e), tail())) {
        nf_.steps.pop_back();
        cur_ = gog_.graph.iota(back);
        label(gog_.mono(back)(*s));
        return;
      }
    }
    CosetFactorization cf = coset_rep(group(cur_), gog_.mono(e), tail());
    tail() = cf.rep;
    VCElement carried = gog_.mono(back)(cf.factor);
    cur_ = gog_.graph.tau(e);
    nf_.steps.push_back({e, carried});
  }

  NormalForm take(int end_vertex) {
    goto_vertex(end_vertex);
    return std::move(nf_);
  }

  int cur() const { return cur_; }

 private:
  VCElement& tail() {
    return nf_.steps.empty() ? nf_.lead : nf_.steps.back().label;
  }
  const VCGroup& group(int v) const {
    return *gog_.vertex_groups[static_cast<size_t>(v)];
  }

  const GraphOfGroups& gog_;
  const SpanningTree& t_;
  int cur_;
  NormalForm nf_;
};

}  // namespace

NormalForm reduce_path(const GraphOfGroups& gog, const SpanningTree& t,
                       int from, int to, const Pi1Word& w) {
  const Graph& g = gog.graph;
  if (from < 0 || from >= g.vertex_count())
    fail(ErrorCode::UnknownVertex,
         "path start index " + std::to_string(from) + " is out of range");
  if (to < 0 || to >= g.vertex_count())
    fail(ErrorCode::UnknownVertex,
         "path end index " + std::to_string(to) + " is out of range");
  Scanner sc(gog, t, from);
  for (const Pi1Token& tok : w.tokens) {
    if (tok.kind == Pi1Token::Kind::Vertex) {
      if (tok.index < 0 || tok.index >= g.vertex_count())
        fail(ErrorCode::TokenTypeMismatch,
             "vertex token index " + std::to_string(tok.index) +
                 " is out of range");
      try {
        gog.vertex_groups[static_cast<size_t>(tok.index)]->check_elt(tok.elt);
      } catch (const Error& e) {
        fail(ErrorCode::TokenTypeMismatch,
             std::string("vertex token carries a malformed element: ") +
                 e.what());
      }
      sc.goto_vertex(tok.index);
      sc.label(tok.elt);
    } else {
      if (tok.index < 0 || tok.index >= g.oriented_edge_count())
        fail(ErrorCode::TokenTypeMismatch,
             "edge token index " + std::to_string(tok.index) +
                 " is out of range");
      sc.goto_vertex(g.iota(tok.index));
      sc.edge(tok.index);
    }
  }
  return sc.take(to);
}

NormalForm reduce_based_at(const GraphOfGroups& gog, const SpanningTree& t,
                           int base_vertex, const Pi1Word& w) {
  return reduce_path(gog, t, base_vertex, base_vertex, w);
}

NormalForm reduce(const GraphOfGroups& gog, const SpanningTree& t,
                  const Pi1Word& w) {
  return reduce_based_at(gog, t, t.root, w);
}

Pi1Word to_word(const GraphOfGroups& gog, const NormalForm& nf) {
  Pi1Word out;
  out.tokens.reserve(1 + 2 * nf.steps.size());
  out.tokens.push_back(Pi1Token::vertex(nf.base, nf.lead));
  for (const NormalForm::Step& st : nf.steps) {
    out.tokens.push_back(Pi1Token::edge(st.edge));
    out.tokens.push_back(Pi1Token::vertex(gog.graph.tau(st.edge), st.label));
  }
  return out;
}

bool is_identity(const GraphOfGroups& gog, const NormalForm& nf) {
  return nf.steps.empty() &&
         nf.lead ==
             gog.vertex_groups[static_cast<size_t>(nf.base)]->identity_elt();
}

bool pi1_eq(const GraphOfGroups& gog, const SpanningTree& t, const Pi1Word& u,
            const Pi1Word& v) {
  return is_identity(gog, reduce(gog, t, concat(u, inverse_word(gog, v))));
}

std::vector<Pi1Token> display_tokens(const GraphOfGroups& gog,
                                     const SpanningTree& t,
                                     const NormalForm& nf) {
  std::vector<Pi1Token> out;
  auto push_label = [&](int v, const VCElement& x) {
    if (x != gog.vertex_groups[static_cast<size_t>(v)]->identity_elt())
      out.push_back(Pi1Token::vertex(v, x));
  };
  push_label(nf.base, nf.lead);
  for (const NormalForm::Step& st : nf.steps) {
    if (!t.contains(st.edge)) out.push_back(Pi1Token::edge(st.edge));
    push_label(gog.graph.tau(st.edge), st.label);
  }
  return out;
}

VCElement membership_in_vertex_group(const GraphOfGroups& gog,
                                     const SpanningTree& t, const Pi1Word& w,
                                     int v) {
  auto x = try_membership_in_vertex_group(gog, t, w, v);
  if (!x)
    fail(ErrorCode::NotMember,
         "word does not lie in the vertex group at '" +
             gog.graph.vertex_id(v) + "'");
  return *x;
}

std::optional<VCElement> try_membership_in_vertex_group(
    const GraphOfGroups& gog, const SpanningTree& t, const Pi1Word& w, int v) {
  NormalForm nf = reduce_based_at(gog, t, v, w);
  if (!nf.steps.empty()) return std::nullopt;
  return nf.lead;
}

// ---------------------------------------------------------------------------
// word assembly and syntax

Pi1Word concat(const Pi1Word& u, const Pi1Word& v) {
  Pi1Word out = u;
  out.tokens.insert(out.tokens.end(), v.tokens.begin(), v.tokens.end());
  return out;
}

Pi1Word inverse_word(const GraphOfGroups& gog, const Pi1Word& w) {
  Pi1Word out;
  out.tokens.reserve(w.tokens.size());
  for (auto it = w.tokens.rbegin(); it != w.tokens.rend(); ++it) {
    if (it->kind == Pi1Token::Kind::Edge) {
      out.tokens.push_back(Pi1Token::edge(gog.graph.bar(it->index)));
    } else {
      const VCGroup& gv = *gog.vertex_groups[static_cast<size_t>(it->index)];
      out.tokens.push_back(Pi1Token::vertex(it->index, gv.inv(it->elt)));
    }
  }
  return out;
}

std::string token_text(const GraphOfGroups& gog, const Pi1Token& t) {
  const Graph& g = gog.graph;
  if (t.kind == Pi1Token::Kind::Edge) {
    const std::string& id = g.edge_id(t.index);
    return (g.is_forward(t.index) ? "e(" : "E(") + id + ")";
  }
  const VCGroup& gv = *gog.vertex_groups[static_cast<size_t>(t.index)];
  return "g(" + g.vertex_id(t.index) + "," + element_text(gv, t.elt) + ")";
}

std::string word_text(const GraphOfGroups& gog,
                      const std::vector<Pi1Token>& tokens) {
  if (tokens.empty()) return "1";
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ";";
    out += token_text(gog, tokens[i]);
  }
  return out;
}

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<long long> parse_elt_list(const std::string& text) {
  std::string body = trim(text);
  if (body.size() < 2 || body.front() != '[' || body.back() != ']')
    fail(ErrorCode::ParseError,
         "element must be a bracketed integer list, got '" + text + "'");
  body = body.substr(1, body.size() - 2);
  std::vector<long long> out;
  std::istringstream in(body);
  std::string piece;
  while (std::getline(in, piece, ',')) {
    piece = trim(piece);
    try {
      size_t used = 0;
      out.push_back(std::stoll(piece, &used));
      if (used != piece.size()) throw std::invalid_argument(piece);
    } catch (const std::exception&) {
      fail(ErrorCode::ParseError, "bad integer '" + piece + "' in element");
    }
  }
  if (out.empty())
    fail(ErrorCode::ParseError, "element list must not be empty");
  return out;
}

// Accepts both element spellings: the flat display form ([f] / [f,n] /
// [f,n,eps]) and the document encodings (a bare integer for finite groups,
// [f,[n,eps]] for the two-reflection models).
std::vector<long long> parse_elt_spelling(const std::string& text) {
  std::string body = trim(text);
  if (!body.empty() && body.front() != '[') body = "[" + body + "]";
  if (body.size() >= 2 && body.front() == '[' && body.back() == ']') {
    std::string flat;
    flat.reserve(body.size());
    flat += body.front();
    for (size_t i = 1; i + 1 < body.size(); ++i)
      if (body[i] != '[' && body[i] != ']') flat += body[i];
    flat += body.back();
    body.swap(flat);
  }
  return parse_elt_list(body);
}

VCElement elt_from_list(const VCGroup& gv, const std::vector<long long>& v) {
  size_t arity = gv.variant() == VCClass::Finite
                     ? 1
                     : (gv.variant() == VCClass::Orientable ? 2 : 3);
  if (v.size() != arity)
    fail(ErrorCode::ParseError,
         "element has " + std::to_string(v.size()) + " components, expected " +
             std::to_string(arity) + " for this vertex group");
  VCElement x;
  x.f = static_cast<Elt>(v[0]);
  if (arity >= 2) x.n = v[1];
  if (arity >= 3) x.eps = static_cast<int>(v[2]);
  return x;
}

}  // namespace

Pi1Word parse_word(const GraphOfGroups& gog, const std::string& text) {
  Pi1Word out;
  std::istringstream in(text);
  std::string piece;
  while (std::getline(in, piece, ';')) {
    piece = trim(piece);
    if (piece.empty() || piece == "1") continue;
    if (piece.size() < 4 || piece[1] != '(' || piece.back() != ')')
      fail(ErrorCode::ParseError, "bad token '" + piece + "'");
    const char kind = piece[0];
    const std::string inner = piece.substr(2, piece.size() - 3);
    if (kind == 'e' || kind == 'E') {
      int e = gog.graph.oriented_edge(trim(inner), kind == 'e');
      out.tokens.push_back(Pi1Token::edge(e));
    } else if (kind == 'g') {
      size_t comma = inner.find(',');
      if (comma == std::string::npos)
        fail(ErrorCode::ParseError,
             "vertex token needs 'g(VERTEX,ELT)', got '" + piece + "'");
      int v = gog.graph.vertex_index(trim(inner.substr(0, comma)));
      const VCGroup& gv = *gog.vertex_groups[static_cast<size_t>(v)];
      VCElement x =
          elt_from_list(gv, parse_elt_spelling(inner.substr(comma + 1)));
      out.tokens.push_back(Pi1Token::vertex(v, x));
    } else {
      fail(ErrorCode::ParseError, "unknown token kind in '" + piece + "'");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// induced maps

FreeWord free_inverse(const Graph& g, const FreeWord& u) {
  FreeWord out;
  out.letters.reserve(u.letters.size());
  for (auto it = u.letters.rbegin(); it != u.letters.rend(); ++it)
    out.letters.push_back(g.bar(*it));
  return out;
}

namespace {

void push_letter(const Graph& g, std::vector<int>& word, int letter) {
  if (!word.empty() && word.back() == g.bar(letter))
    word.pop_back();
  else
    word.push_back(letter);
}

}  // namespace

FreeWord free_mul(const Graph& g, const FreeWord& u, const FreeWord& v) {
  FreeWord out = u;
  for (int l : v.letters) push_letter(g, out.letters, l);
  return out;
}

FreeWord apply_phi(const GraphOfGroups& gog, const SpanningTree& t,
                   const Pi1Word& w) {
  FreeWord out;
  for (const Pi1Token& tok : w.tokens) {
    if (tok.kind != Pi1Token::Kind::Edge) continue;
    if (tok.index < 0 || tok.index >= gog.graph.oriented_edge_count())
      fail(ErrorCode::TokenTypeMismatch, "edge token index out of range");
    if (t.contains(tok.index)) continue;
    push_letter(gog.graph, out.letters, tok.index);
  }
  return out;
}

InducedHom InducedHom::phi_free(GraphOfGroups source) {
  InducedHom h;
  h.kind = Kind::PhiFree;
  h.source = std::move(source);
  return h;
}

InducedHom InducedHom::quotient(GraphOfGroups source, GraphOfGroups target,
                                std::vector<VCHom> vertex_maps) {
  if (source.graph.vertex_count() != target.graph.vertex_count() ||
      source.graph.oriented_edge_count() != target.graph.oriented_edge_count())
    fail(ErrorCode::ProjectionMismatch,
         "quotient datum must live over the same graph");
  for (int e = 0; e < source.graph.oriented_edge_count(); ++e)
    if (source.graph.edge_id(e) != target.graph.edge_id(e) ||
        source.graph.iota(e) != target.graph.iota(e) ||
        source.graph.tau(e) != target.graph.tau(e))
      fail(ErrorCode::ProjectionMismatch,
           "quotient datum must preserve the underlying graph");
  if (vertex_maps.size() != static_cast<size_t>(source.graph.vertex_count()))
    fail(ErrorCode::ProjectionMismatch,
         "need exactly one vertex map per vertex");
  for (int v = 0; v < source.graph.vertex_count(); ++v) {
    const VCHom& m = vertex_maps[static_cast<size_t>(v)];
    if (m.source != source.vertex_groups[static_cast<size_t>(v)] ||
        m.target != target.vertex_groups[static_cast<size_t>(v)])
      fail(ErrorCode::ProjectionMismatch,
           "vertex map at '" + source.graph.vertex_id(v) +
               "' does not match the quotient datum");
  }
  InducedHom h;
  h.kind = Kind::QQuotient;
  h.source = std::move(source);
  h.target = std::move(target);
  h.vertex_maps = std::move(vertex_maps);
  return h;
}

Pi1Word apply_q(const InducedHom& h, const Pi1Word& w) {
  if (h.kind != InducedHom::Kind::QQuotient)
    fail(ErrorCode::ProjectionMismatch,
         "token-wise image needs a quotient datum");
  Pi1Word out;
  out.tokens.reserve(w.tokens.size());
  for (const Pi1Token& tok : w.tokens) {
    if (tok.kind == Pi1Token::Kind::Edge) {
      if (tok.index < 0 ||
          tok.index >= h.source.graph.oriented_edge_count())
        fail(ErrorCode::ProjectionMismatch, "edge token index out of range");
      out.tokens.push_back(tok);
      continue;
    }
    if (tok.index < 0 || tok.index >= h.source.graph.vertex_count())
      fail(ErrorCode::ProjectionMismatch, "vertex token index out of range");
    const VCHom& m = h.vertex_maps[static_cast<size_t>(tok.index)];
    try {
      m.source->check_elt(tok.elt);
    } catch (const Error& e) {
      fail(ErrorCode::ProjectionMismatch,
           std::string("vertex token is not in the source group: ") +
               e.what());
    }
    out.tokens.push_back(Pi1Token::vertex(tok.index, m(tok.elt)));
  }
  return out;
}

bool in_kernel(const InducedHom& h, const SpanningTree& t, const Pi1Word& w) {
  if (h.kind == InducedHom::Kind::PhiFree)
    return apply_phi(h.source, t, w).empty();
  return is_identity(h.target, reduce(h.target, t, apply_q(h, w)));
}

}  // namespace ggk
