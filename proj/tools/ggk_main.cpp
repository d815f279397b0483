// Command-line front end: validation, classification, presentations, word
// reduction, tree balls, the two quotient constructions, the desk checks,
// and certificate emission/verification for graphs of virtually cyclic
// groups.  Documents are JSON (see ggk/json_io.hpp); graph exports are DOT.
//
// Exit codes: 0 success, 1 input/validation error, 2 a check ran and failed.

#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ggk/constructions.hpp"
#include "ggk/json_io.hpp"
#include "ggk/tree.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kCheckFailed = 2;

bool json_mode = false;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    ggk::fail(ggk::ErrorCode::ParseError, "cannot open \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    ggk::fail(ggk::ErrorCode::ParseError, "cannot write \"" + path + "\"");
  out << text;
}

ggk::GraphOfGroups load(const std::string& path, bool validated = true) {
  return ggk::gog_from_json(read_file(path), validated);
}

// Primary report of a subcommand: human text or one JSON object.
void report(const json& machine, const std::string& human) {
  if (json_mode)
    std::cout << machine.dump() << "\n";
  else
    std::cout << human;
}

int cmd_validate(const std::string& file) {
  const ggk::GraphOfGroups gog = load(file, /*validated=*/false);
  const ggk::ValidationReport rep = ggk::validate(gog);
  json problems = json::array();
  std::ostringstream human;
  for (const ggk::ValidationProblem& p : rep.problems) {
    problems.push_back(json{{"code", ggk::error_code_name(p.code)},
                            {"message", p.message}});
    human << "problem[" << ggk::error_code_name(p.code) << "]: " << p.message
          << "\n";
  }
  if (rep.valid()) human << "valid\n";
  report(json{{"valid", rep.valid()}, {"problems", problems}}, human.str());
  return rep.valid() ? kOk : kInputError;
}

int cmd_classify(const std::string& file) {
  const ggk::GraphOfGroups gog = load(file);
  json rows = json::array();
  std::ostringstream human;
  for (int v = 0; v < gog.graph.vertex_count(); ++v) {
    const ggk::VCGroupPtr& g = gog.vertex_group(v);
    const int fo = g->finite_part()->order();
    const int nfo = ggk::max_finite_normal(*g).subgroup.order();
    std::string cls;
    switch (g->variant()) {
      case ggk::VCClass::Finite:
        cls = "finite";
        human << gog.graph.vertex_id(v) << ": finite of order " << fo;
        break;
      case ggk::VCClass::Orientable:
        cls = "finite-by-Z";
        human << gog.graph.vertex_id(v) << ": finite-by-Z (finite part of order "
              << fo << ")";
        break;
      case ggk::VCClass::Nonorientable:
        cls = "finite-by-Dinfty";
        human << gog.graph.vertex_id(v)
              << ": finite-by-Dinfty (finite part of order " << fo << ")";
        break;
    }
    human << ", maximal finite normal subgroup of order " << nfo << "\n";
    rows.push_back(json{{"vertex", gog.graph.vertex_id(v)},
                        {"class", cls},
                        {"finite_part_order", fo},
                        {"max_finite_normal_order", nfo}});
  }
  report(json{{"vertices", rows}}, human.str());
  return kOk;
}

int cmd_present(const std::string& file) {
  const ggk::GraphOfGroups gog = load(file);
  const ggk::Presentation p =
      ggk::presentation(gog, ggk::spanning_tree(gog.graph));
  report(json{{"generators", p.generators},
              {"relations", p.relations},
              {"text", p.text}},
         p.text + "\n");
  return kOk;
}

int cmd_reduce(const std::string& file, const std::string& word) {
  const ggk::GraphOfGroups gog = load(file);
  const ggk::SpanningTree t = ggk::spanning_tree(gog.graph);
  const ggk::NormalForm nf = ggk::reduce(gog, t, ggk::parse_word(gog, word));
  const std::string text =
      ggk::word_text(gog, ggk::display_tokens(gog, t, nf));
  report(json{{"word", text},
              {"base", gog.graph.vertex_id(nf.base)},
              {"identity", ggk::is_identity(gog, nf)}},
         text + "\n");
  return kOk;
}

int cmd_tree_ball(const std::string& file, int radius, const std::string& base,
                  const std::string& dot_out) {
  const ggk::GraphOfGroups gog = load(file);
  const int base_vertex = base.empty() ? ggk::spanning_tree(gog.graph).root
                                       : gog.graph.vertex_index(base);
  const ggk::TreeBall b = ggk::ball(gog, base_vertex, radius);
  bool truncated = false;
  for (const char t : b.truncated) truncated = truncated || t != 0;
  if (!dot_out.empty()) {
    const std::string dot = ggk::to_dot(b);
    if (dot_out == "-")
      std::cout << dot;
    else
      write_file(dot_out, dot);
  }
  std::ostringstream human;
  human << "ball of radius " << radius << " at "
        << gog.graph.vertex_id(base_vertex) << ": " << b.vertices.size()
        << " vertices, " << b.edges.size() << " edges";
  if (truncated) human << " (truncated at the coset cap " << b.coset_cap << ")";
  human << "\n";
  report(json{{"radius", radius},
              {"base", gog.graph.vertex_id(base_vertex)},
              {"vertices", b.vertices.size()},
              {"edges", b.edges.size()},
              {"truncated", truncated},
              {"coset_cap", b.coset_cap}},
         human.str());
  return kOk;
}

int cmd_quotient(const std::string& file, bool by_finite_normal,
                 const std::string& out) {
  const ggk::GraphOfGroups gog = load(file);
  const ggk::QuotientResult qr =
      by_finite_normal ? ggk::quotient_by_max_finite_normal(gog)
                       : ggk::quotient_by_max_infinite_cyclic(gog);
  const std::string text = ggk::gog_to_json(qr.quotient);
  if (out.empty())
    std::cout << text;
  else
    write_file(out, text);
  return kOk;
}

int cmd_check_tree(const ggk::GraphOfGroups& gog, int radius) {
  const int base = ggk::spanning_tree(gog.graph).root;
  const ggk::TreeBall b = ggk::ball(gog, base, radius);
  const ggk::QuotientBall qb = ggk::truncate_to_radius(
      ggk::quotient_ball_by_kernel(b, ggk::InducedHom::phi_free(gog)), radius);
  const ggk::UnfoldedBall ub =
      ggk::unfold_universal_cover(gog.graph, base, radius);
  const bool tree_ok = ggk::is_tree(qb);
  const bool match = tree_ok && ggk::quotient_matches_unfolding(qb, ub);
  std::ostringstream human;
  if (tree_ok && match)
    human << "quotient ball is a tree, matches universal cover (radius "
          << radius << ", " << qb.nodes.size() << " vertices)\n";
  else if (!tree_ok)
    human << "check failed: the quotient ball is not a tree (radius " << radius
          << ")\n";
  else
    human << "check failed: the quotient ball does not match the unfolded "
             "universal cover (radius "
          << radius << ")\n";
  report(json{{"lemma", "tree"},
              {"radius", radius},
              {"quotient_vertices", qb.nodes.size()},
              {"quotient_is_tree", tree_ok},
              {"matches_unfolding", match},
              {"ok", tree_ok && match}},
         human.str());
  return tree_ok && match ? kOk : kCheckFailed;
}

int cmd_check_edge_kernel(const ggk::GraphOfGroups& gog) {
  json checks = json::array();
  std::ostringstream human;
  bool all_ok = true;
  for (int e = 0; e < gog.graph.oriented_edge_count(); ++e) {
    bool ok = true;
    std::string detail;
    try {
      detail = ggk::verify_edge_kernel_is_max_finite_normal(gog, e).detail;
    } catch (const ggk::Error& err) {
      if (err.code() != ggk::ErrorCode::ClaimViolated) throw;
      ok = false;
      detail = err.what();
    }
    all_ok = all_ok && ok;
    checks.push_back(json{{"edge", gog.graph.edge_id(e)},
                          {"direction", e % 2 == 0 ? "forward" : "reverse"},
                          {"ok", ok},
                          {"detail", detail}});
    human << (ok ? "ok: " : "FAILED: ") << detail << "\n";
  }
  report(json{{"lemma", "edge-kernel"}, {"checks", checks}, {"ok", all_ok}},
         human.str());
  return all_ok ? kOk : kCheckFailed;
}

int cmd_check_stabilizers(const ggk::GraphOfGroups& gog, int radius) {
  const int base = ggk::spanning_tree(gog.graph).root;
  const ggk::TreeBall b = ggk::ball(gog, base, radius);
  std::set<int> vertices_seen;
  std::set<int> edges_seen;
  std::set<int> orders;
  std::string first_failure;
  for (size_t i = 0; i < b.vertices.size(); ++i) {
    const ggk::TreeVertex& x = b.vertices[i];
    vertices_seen.insert(x.label);
    const ggk::VCGroupPtr& g = gog.vertex_group(x.label);
    if (g->is_infinite()) {
      if (first_failure.empty())
        first_failure = "vertex " + gog.graph.vertex_id(x.label) +
                        " has an infinite stabilizer";
      continue;
    }
    orders.insert(g->finite_part()->order());
    const ggk::StabilizerCheckReport rep =
        ggk::check_stabilizer_witness(b, x, /*samples=*/6, /*seed=*/1729);
    if (!rep.ok && first_failure.empty())
      first_failure = "stabilizer witness at ball vertex " +
                      std::to_string(i) + ": " + rep.detail;
  }
  for (const ggk::TreeBallEdge& e : b.edges) edges_seen.insert(e.edge / 2);
  const bool covers =
      static_cast<int>(vertices_seen.size()) == gog.graph.vertex_count() &&
      static_cast<int>(edges_seen.size()) == gog.graph.geometric_edge_count();
  if (!covers && first_failure.empty())
    first_failure =
        "the radius-" + std::to_string(radius) +
        " ball does not cover every vertex and edge of the quotient graph";
  std::ostringstream human;
  if (first_failure.empty()) {
    human << "all stabilizers finite (orders:";
    for (const int o : orders) human << " " << o;
    human << "); the ball covers the quotient graph\n";
  } else {
    human << "check failed: " << first_failure << "\n";
  }
  report(json{{"lemma", "stabilizers"},
              {"radius", radius},
              {"stabilizer_orders", orders},
              {"covers_quotient_graph", covers},
              {"failure", first_failure},
              {"ok", first_failure.empty()}},
         human.str());
  return first_failure.empty() ? kOk : kCheckFailed;
}

int cmd_certify(const std::string& file, const std::string& out) {
  const ggk::GraphOfGroups gog = load(file);
  const std::string text =
      ggk::certificate_to_json(ggk::certify_fjcw(gog)) + "\n";
  if (out.empty())
    std::cout << text;
  else
    write_file(out, text);
  return kOk;
}

int cmd_check_cert(const std::string& file) {
  const ggk::Certificate cert = ggk::certificate_from_json(read_file(file));
  const ggk::ValidationReport rep = ggk::check_certificate(cert);
  json problems = json::array();
  std::ostringstream human;
  for (const ggk::ValidationProblem& p : rep.problems) {
    problems.push_back(json{{"code", ggk::error_code_name(p.code)},
                            {"message", p.message}});
    human << "problem[" << ggk::error_code_name(p.code) << "]: " << p.message
          << "\n";
  }
  if (rep.valid())
    human << "certificate valid: " << cert.nodes.size() << " nodes, proves "
          << cert.nodes[static_cast<size_t>(cert.root)].claim << "\n";
  report(json{{"valid", rep.valid()},
              {"nodes", cert.nodes.size()},
              {"problems", problems}},
         human.str());
  return rep.valid() ? kOk : kCheckFailed;
}

int dispatch(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ggk::Error& e) {
    if (json_mode)
      std::cerr << json{{"error",
                         {{"code", ggk::error_code_name(e.code())},
                          {"message", e.what()}}}}
                       .dump()
                << "\n";
    else
      std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    if (json_mode)
      std::cerr << json{{"error", {{"code", "Internal"}, {"message", e.what()}}}}
                       .dump()
                << "\n";
    else
      std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symbolic computation on graphs of virtually cyclic groups"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", json_mode, "machine-readable reports and diagnostics");

  std::string file, word, base, out, dot_out, lemma;
  int radius = -1;

  CLI::App* validate = app.add_subcommand("validate", "structural validation");
  validate->add_option("FILE", file)->required();

  CLI::App* classify =
      app.add_subcommand("classify", "per-vertex trichotomy of vertex groups");
  classify->add_option("FILE", file)->required();

  CLI::App* present = app.add_subcommand(
      "present", "presentation of the fundamental group relative to the "
                 "spanning tree");
  present->add_option("FILE", file)->required();

  CLI::App* reduce =
      app.add_subcommand("reduce", "normal form of a word (pinch reduction)");
  reduce->add_option("FILE", file)->required();
  reduce->add_option("--word", word, "semicolon-separated tokens g(v,ELT), e(ID), E(ID)")
      ->required();

  CLI::App* tree_ball =
      app.add_subcommand("tree-ball", "ball of the tree the group acts on");
  tree_ball->add_option("FILE", file)->required();
  tree_ball->add_option("--radius", radius)->required()
      ->check(CLI::NonNegativeNumber);
  tree_ball->add_option("--base", base, "base vertex id (default: tree root)");
  tree_ball->add_option("--dot", dot_out, "write DOT to this file ('-' = stdout)");

  CLI::App* qfin = app.add_subcommand(
      "quotient-fin",
      "quotient by the maximal finite normal subgroups (emits a document)");
  qfin->add_option("FILE", file)->required();
  qfin->add_option("--out", out, "write the document here instead of stdout");

  CLI::App* qcyc = app.add_subcommand(
      "quotient-cyc",
      "quotient by the maximal infinite cyclic subgroups (emits a document)");
  qcyc->add_option("FILE", file)->required();
  qcyc->add_option("--out", out, "write the document here instead of stdout");

  CLI::App* check = app.add_subcommand("check", "desk checks");
  check->add_option("FILE", file)->required();
  check->add_option("--lemma", lemma, "tree | edge-kernel | stabilizers")
      ->required()
      ->check(CLI::IsMember({"tree", "edge-kernel", "stabilizers"}));
  check->add_option("--radius", radius,
                    "ball radius (default 4 for tree, 3 for stabilizers)")
      ->check(CLI::NonNegativeNumber);

  CLI::App* certify = app.add_subcommand(
      "certify", "emit a checkable derivation certificate for the input");
  certify->add_option("FILE", file)->required();
  certify->add_option("--out", out, "write the certificate here instead of stdout");

  CLI::App* check_cert =
      app.add_subcommand("check-cert", "verify a derivation certificate");
  check_cert->add_option("CERT", file)->required();

  CLI11_PARSE(app, argc, argv);

  if (validate->parsed()) return dispatch([&] { return cmd_validate(file); });
  if (classify->parsed()) return dispatch([&] { return cmd_classify(file); });
  if (present->parsed()) return dispatch([&] { return cmd_present(file); });
  if (reduce->parsed())
    return dispatch([&] { return cmd_reduce(file, word); });
  if (tree_ball->parsed())
    return dispatch([&] { return cmd_tree_ball(file, radius, base, dot_out); });
  if (qfin->parsed())
    return dispatch([&] { return cmd_quotient(file, true, out); });
  if (qcyc->parsed())
    return dispatch([&] { return cmd_quotient(file, false, out); });
  if (check->parsed())
    return dispatch([&] {
      const ggk::GraphOfGroups gog = load(file);
      if (lemma == "tree") return cmd_check_tree(gog, radius < 0 ? 4 : radius);
      if (lemma == "edge-kernel") return cmd_check_edge_kernel(gog);
      return cmd_check_stabilizers(gog, radius < 0 ? 3 : radius);
    });
  if (certify->parsed())
    return dispatch([&] { return cmd_certify(file, out); });
  if (check_cert->parsed())
    return dispatch([&] { return cmd_check_cert(file); });
  return kInputError;
}
