#include "ggk/json_io.hpp"

#include <map>
#include <utility>
#include <vector>

#include "ggk/errors.hpp"
#include "json.hpp"

namespace ggk {
namespace {

using nlohmann::json;

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
  fail(ErrorCode::SchemaError, path + ": " + what);
}

const json& member(const json& o, const char* key, const std::string& path) {
  if (!o.is_object()) schema_fail(path, "expected an object");
  const auto it = o.find(key);
  if (it == o.end())
    schema_fail(path, std::string("missing member \"") + key + "\"");
  return *it;
}

std::string string_member(const json& o, const char* key,
                          const std::string& path) {
  const json& j = member(o, key, path);
  if (!j.is_string()) schema_fail(path + "." + key, "expected a string");
  return j.get<std::string>();
}

long long int_value(const json& j, const std::string& path) {
  if (!j.is_number_integer()) schema_fail(path, "expected an integer");
  return j.get<long long>();
}

std::vector<Elt> int_array(const json& j, const std::string& path) {
  if (!j.is_array()) schema_fail(path, "expected an array of integers");
  std::vector<Elt> out;
  out.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(static_cast<Elt>(
        int_value(j[i], path + "[" + std::to_string(i) + "]")));
  return out;
}

// --------------------------------------------------------------------------
// Finite groups and their homs.

FiniteGroupPtr parse_finite_group(const json& j, const std::string& path) {
  if (!j.is_object()) schema_fail(path, "expected a finite-group object");
  const bool has_table = j.contains("table");
  const bool has_perms = j.contains("perm_gens");
  if (has_table == has_perms)
    schema_fail(path, "exactly one of \"table\" and \"perm_gens\" is required");
  if (has_table) {
    const json& t = j["table"];
    if (!t.is_array()) schema_fail(path + ".table", "expected an array of rows");
    std::vector<std::vector<Elt>> rows;
    rows.reserve(t.size());
    for (size_t i = 0; i < t.size(); ++i)
      rows.push_back(
          int_array(t[i], path + ".table[" + std::to_string(i) + "]"));
    return FiniteGroup::from_table(rows);
  }
  const json& p = j["perm_gens"];
  if (!p.is_array())
    schema_fail(path + ".perm_gens", "expected an array of permutations");
  std::vector<std::vector<int>> gens;
  gens.reserve(p.size());
  for (size_t i = 0; i < p.size(); ++i) {
    std::vector<int> perm;
    for (const Elt e :
         int_array(p[i], path + ".perm_gens[" + std::to_string(i) + "]"))
      perm.push_back(static_cast<int>(e));
    gens.push_back(std::move(perm));
  }
  return FiniteGroup::from_perm_gens(gens);
}

json finite_group_json(const FiniteGroup& g) {
  json rows = json::array();
  for (const auto& row : g.table_rows()) rows.push_back(row);
  return json{{"table", std::move(rows)}};
}

FiniteHom parse_auto_or_embedding(const json& j, const FiniteGroupPtr& src,
                                  const FiniteGroupPtr& dst,
                                  const std::string& path) {
  std::vector<Elt> images = int_array(j, path);
  if (static_cast<int>(images.size()) != src->order())
    schema_fail(path, "expected " + std::to_string(src->order()) +
                          " images, got " + std::to_string(images.size()));
  return FiniteHom::make(src, dst, std::move(images));
}

// --------------------------------------------------------------------------
// Virtually cyclic groups.

VCGroupPtr parse_vcgroup(const json& j, const std::string& path) {
  const std::string kind = string_member(j, "kind", path);
  if (kind == "finite") return VCGroup::finite(parse_finite_group(j, path));
  if (kind == "orientable") {
    FiniteGroupPtr f =
        parse_finite_group(member(j, "finite_part", path), path + ".finite_part");
    FiniteHom alpha =
        parse_auto_or_embedding(member(j, "alpha", path), f, f, path + ".alpha");
    return VCGroup::orientable(std::move(f), std::move(alpha));
  }
  if (kind == "nonorientable") {
    FiniteGroupPtr c = parse_finite_group(member(j, "C", path), path + ".C");
    FiniteGroupPtr a = parse_finite_group(member(j, "A", path), path + ".A");
    FiniteGroupPtr b = parse_finite_group(member(j, "B", path), path + ".B");
    FiniteHom emb_a = parse_auto_or_embedding(member(j, "C_in_A", path), c, a,
                                              path + ".C_in_A");
    FiniteHom emb_b = parse_auto_or_embedding(member(j, "C_in_B", path), c, b,
                                              path + ".C_in_B");
    const Elt ra = static_cast<Elt>(
        int_value(member(j, "refl_a", path), path + ".refl_a"));
    const Elt rb = static_cast<Elt>(
        int_value(member(j, "refl_b", path), path + ".refl_b"));
    return VCGroup::nonorientable(std::move(c), std::move(a), std::move(b),
                                  std::move(emb_a), std::move(emb_b), ra, rb);
  }
  schema_fail(path + ".kind", "unknown group kind \"" + kind + "\"");
}

json vcgroup_json(const VCGroup& g) {
  switch (g.variant()) {
    case VCClass::Finite: {
      json out = finite_group_json(*g.finite_part());
      out["kind"] = "finite";
      return out;
    }
    case VCClass::Orientable:
      return json{{"kind", "orientable"},
                  {"finite_part", finite_group_json(*g.finite_part())},
                  {"alpha", g.alpha().images}};
    case VCClass::Nonorientable:
      return json{{"kind", "nonorientable"},
                  {"C", finite_group_json(*g.finite_part())},
                  {"A", finite_group_json(*g.amalgam_a())},
                  {"B", finite_group_json(*g.amalgam_b())},
                  {"C_in_A", g.emb_a().images},
                  {"C_in_B", g.emb_b().images},
                  {"refl_a", g.refl_a()},
                  {"refl_b", g.refl_b()}};
  }
  require_internal(false, "unreachable group variant");
}

// --------------------------------------------------------------------------
// Elements and homs.

VCElement parse_element(const json& j, const VCGroup& g,
                        const std::string& path) {
  VCElement x{};
  switch (g.variant()) {
    case VCClass::Finite:
      x.f = static_cast<Elt>(int_value(j, path));
      break;
    case VCClass::Orientable: {
      if (!j.is_array() || j.size() != 2)
        schema_fail(path, "expected [f,n]");
      x.f = static_cast<Elt>(int_value(j[0], path + "[0]"));
      x.n = int_value(j[1], path + "[1]");
      break;
    }
    case VCClass::Nonorientable: {
      if (!j.is_array() || j.size() != 2 || !j[1].is_array() ||
          j[1].size() != 2)
        schema_fail(path, "expected [c,[n,eps]]");
      x.f = static_cast<Elt>(int_value(j[0], path + "[0]"));
      x.n = int_value(j[1][0], path + "[1][0]");
      x.eps = static_cast<int>(int_value(j[1][1], path + "[1][1]"));
      break;
    }
  }
  g.check_elt(x);
  return x;
}

json element_json(const VCGroup& g, const VCElement& x) {
  switch (g.variant()) {
    case VCClass::Finite:
      return json(x.f);
    case VCClass::Orientable:
      return json::array({x.f, x.n});
    case VCClass::Nonorientable:
      return json::array({x.f, json::array({x.n, x.eps})});
  }
  require_internal(false, "unreachable group variant");
}

VCHom parse_vchom(const json& j, const VCGroupPtr& src, const VCGroupPtr& tgt,
                  const std::string& path) {
  const json& fin = member(j, "finite_images", path);
  if (!fin.is_array() ||
      static_cast<int>(fin.size()) != src->finite_part()->order())
    schema_fail(path + ".finite_images",
                "expected one image per source finite-part element (" +
                    std::to_string(src->finite_part()->order()) + ")");
  std::vector<VCElement> claimed;
  claimed.reserve(fin.size());
  for (size_t i = 0; i < fin.size(); ++i)
    claimed.push_back(parse_element(
        fin[i], *tgt, path + ".finite_images[" + std::to_string(i) + "]"));

  std::vector<VCElement> extra;
  if (j.contains("extra")) {
    const json& ex = j["extra"];
    if (!ex.is_array()) schema_fail(path + ".extra", "expected an array");
    for (size_t i = 0; i < ex.size(); ++i)
      extra.push_back(parse_element(
          ex[i], *tgt, path + ".extra[" + std::to_string(i) + "]"));
  }
  const size_t want = src->variant() == VCClass::Finite
                          ? 0
                          : (src->variant() == VCClass::Orientable ? 1 : 2);
  if (extra.size() != want)
    schema_fail(path + ".extra", "expected " + std::to_string(want) +
                                     " distinguished images, got " +
                                     std::to_string(extra.size()));

  std::vector<VCElement> gen_images;
  for (const Elt s : src->finite_part()->generators_or_all())
    gen_images.push_back(claimed[static_cast<size_t>(s)]);
  VCHom h = VCHom::make(src, tgt, gen_images, extra);
  for (size_t i = 0; i < claimed.size(); ++i)
    if (!(h.finite_images[i] == claimed[i]))
      fail(ErrorCode::NotWellDefined,
           path + ".finite_images[" + std::to_string(i) +
               "]: claimed image disagrees with the extension of the "
               "generator images");
  return h;
}

json vchom_json(const VCHom& h) {
  json fin = json::array();
  for (const VCElement& y : h.finite_images)
    fin.push_back(element_json(*h.target, y));
  json extra = json::array();
  if (h.source->variant() == VCClass::Orientable) {
    extra.push_back(element_json(*h.target, h.t_img));
  } else if (h.source->variant() == VCClass::Nonorientable) {
    extra.push_back(element_json(*h.target, h.a_img));
    extra.push_back(element_json(*h.target, h.b_img));
  }
  return json{{"finite_images", std::move(fin)}, {"extra", std::move(extra)}};
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ParseError, e.what());
  }
}

}  // namespace

GraphOfGroups gog_from_json(const std::string& text, bool validated) {
  const json doc = parse_document(text);
  if (!doc.is_object()) schema_fail("$", "expected an object");

  const json& vs = member(doc, "vertices", "$");
  if (!vs.is_array()) schema_fail("$.vertices", "expected an array");
  std::vector<std::pair<std::string, VCGroupPtr>> vertices;
  std::map<std::string, VCGroupPtr> by_id;
  for (size_t i = 0; i < vs.size(); ++i) {
    const std::string path = "$.vertices[" + std::to_string(i) + "]";
    const std::string id = string_member(vs[i], "id", path);
    VCGroupPtr g = parse_vcgroup(member(vs[i], "group", path), path + ".group");
    by_id.emplace(id, g);
    vertices.emplace_back(id, std::move(g));
  }

  std::vector<GeometricEdgeData> edges;
  if (doc.contains("edges")) {
    const json& es = doc["edges"];
    if (!es.is_array()) schema_fail("$.edges", "expected an array");
    for (size_t i = 0; i < es.size(); ++i) {
      const std::string path = "$.edges[" + std::to_string(i) + "]";
      GeometricEdgeData e;
      e.id = string_member(es[i], "id", path);
      e.from = string_member(es[i], "from", path);
      e.to = string_member(es[i], "to", path);
      const auto fit = by_id.find(e.from);
      if (fit == by_id.end())
        schema_fail(path + ".from", "unknown vertex \"" + e.from + "\"");
      const auto tit = by_id.find(e.to);
      if (tit == by_id.end())
        schema_fail(path + ".to", "unknown vertex \"" + e.to + "\"");
      e.group = parse_vcgroup(member(es[i], "group", path), path + ".group");
      e.mono_from = parse_vchom(member(es[i], "mono_from", path), e.group,
                                fit->second, path + ".mono_from");
      e.mono_to = parse_vchom(member(es[i], "mono_to", path), e.group,
                              tit->second, path + ".mono_to");
      edges.push_back(std::move(e));
    }
  }

  GraphOfGroups gog = make_graph_of_groups(vertices, edges);
  if (validated) validate(gog, /*strict=*/true);
  return gog;
}

std::string gog_to_json(const GraphOfGroups& gog) {
  json vs = json::array();
  for (int v = 0; v < gog.graph.vertex_count(); ++v)
    vs.push_back(json{{"id", gog.graph.vertex_id(v)},
                      {"group", vcgroup_json(*gog.vertex_group(v))}});
  json es = json::array();
  for (int e = 0; e < gog.graph.oriented_edge_count(); e += 2)
    es.push_back(json{{"id", gog.graph.edge_id(e)},
                      {"from", gog.graph.vertex_id(gog.graph.iota(e))},
                      {"to", gog.graph.vertex_id(gog.graph.tau(e))},
                      {"group", vcgroup_json(*gog.edge_group(e))},
                      {"mono_from", vchom_json(gog.mono(e))},
                      {"mono_to", vchom_json(gog.mono(e + 1))}});
  const json doc{{"vertices", std::move(vs)}, {"edges", std::move(es)}};
  return doc.dump(2) + "\n";
}

VCGroupPtr vcgroup_from_json(const std::string& text) {
  return parse_vcgroup(parse_document(text), "$");
}

std::string vcgroup_to_json(const VCGroup& g) {
  return vcgroup_json(g).dump(2) + "\n";
}

}  // namespace ggk
