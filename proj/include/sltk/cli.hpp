#pragma once

#include "sltk/galois.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <chrono>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

namespace sltk::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* kDocumentSchema = "sltk.document/1";
inline constexpr const char* kReportSchema = "sltk.report/1";

// ------------------------------------------------------------ documents

struct NamedAction {
  std::string groupoid;
  DiscreteAction action;
};

struct CheckSpec {
  std::string id;
  std::string kind;
  json params;
};

struct Document {
  std::map<std::string, LatticePtr> lattices;
  std::map<std::string, LRelation> relations;
  std::map<std::string, GroupoidPtr> groupoids;
  std::map<std::string, NamedAction> actions;
  std::vector<CheckSpec> checks;
  std::vector<std::string> order;  // declarations in document order

  std::size_t declarations() const { return order.size(); }
};

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline const json& field(const json& obj, const char* key, const std::string& ctx) {
  if (!obj.is_object() || !obj.contains(key)) throw Error(Errc::ParseError, "missing-field", ctx + "." + key);
  return obj.at(key);
}

inline std::string str(const json& obj, const char* key, const std::string& ctx) {
  const auto& v = field(obj, key, ctx);
  if (!v.is_string()) throw Error(Errc::ParseError, "field-type", ctx + "." + key + " must be a string");
  return v.get<std::string>();
}

inline std::size_t num(const json& v, const std::string& ctx) {
  if (!v.is_number_unsigned()) throw Error(Errc::ParseError, "field-type", ctx + " must be a non-negative integer");
  return v.get<std::size_t>();
}

inline std::size_t num(const json& obj, const char* key, const std::string& ctx) {
  return num(field(obj, key, ctx), ctx + "." + key);
}

inline const json& array(const json& obj, const char* key, const std::string& ctx) {
  const auto& v = field(obj, key, ctx);
  if (!v.is_array()) throw Error(Errc::ParseError, "field-type", ctx + "." + key + " must be an array");
  return v;
}

template <class Map>
const auto& lookup(const Map& m, const std::string& name, const char* what) {
  auto it = m.find(name);
  if (it == m.end()) throw Error(Errc::UnresolvedReference, what, name);
  return it->second;
}

// Validator failures on declared structures become ValidationError naming the structure.
template <class Fn>
auto validated(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == Errc::ParseError || e.code() == Errc::UnresolvedReference) throw;
    throw Error(Errc::ValidationError, e.check(), name + ": " + e.witness());
  }
}

inline elem element_named(const SupLattice& L, const std::string& nm, const std::string& ctx) {
  const elem e = L.find(nm);
  if (e == no_elem) throw Error(Errc::UnresolvedReference, "element", ctx + ": " + nm);
  return e;
}

inline LatticePtr parse_lattice(const json& j, const std::string& name) {
  const std::string ctx = "lattice " + name;
  if (j.contains("builtin")) {
    const auto b = str(j, "builtin", ctx);
    if (b == "two") return two();
    if (b == "chain") return chain(num(j, "size", ctx));
    if (b == "powerset") return powerset(num(j, "size", ctx));
    if (b == "m3") return m3();
    if (b == "n5") return n5();
    throw Error(Errc::UnresolvedReference, "builtin-lattice", b);
  }
  std::vector<std::string> names;
  for (const auto& e : array(j, "elements", ctx)) {
    if (!e.is_string()) throw Error(Errc::ParseError, "field-type", ctx + ".elements must hold strings");
    names.push_back(e.get<std::string>());
  }
  std::vector<std::pair<elem, elem>> covers;
  auto index = [&](const json& v) {
    if (!v.is_string()) throw Error(Errc::ParseError, "field-type", ctx + ".covers must hold names");
    auto it = std::find(names.begin(), names.end(), v.get<std::string>());
    if (it == names.end()) throw Error(Errc::UnresolvedReference, "element", ctx + ": " + v.get<std::string>());
    return static_cast<elem>(it - names.begin());
  };
  for (const auto& c : array(j, "covers", ctx)) {
    if (!c.is_array() || c.size() != 2) throw Error(Errc::ParseError, "field-type", ctx + ".covers must hold pairs");
    covers.push_back({index(c[0]), index(c[1])});
  }
  const bool locale = j.value("locale", false);
  return validated(name, [&]() -> LatticePtr {
    auto l = SupLattice::from_pairs(names, covers);
    if (locale) return std::make_shared<const Locale>(std::move(l));
    return std::make_shared<const SupLattice>(std::move(l));
  });
}

inline LRelation parse_relation(const json& j, const std::string& name, const Document& doc) {
  const std::string ctx = "relation " + name;
  const auto& H = lookup(doc.lattices, str(j, "lattice", ctx), "lattice");
  const auto& rows = array(j, "table", ctx);
  const std::size_t nx = num(j, "rows", ctx), ny = num(j, "cols", ctx);
  if (rows.size() != nx) throw Error(Errc::ValidationError, "relation-shape", name + ": row count");
  LRelation r(H, nx, ny);
  for (std::size_t x = 0; x < nx; ++x) {
    if (!rows[x].is_array() || rows[x].size() != ny) throw Error(Errc::ValidationError, "relation-shape", name + ": row " + std::to_string(x + 1));
    for (std::size_t y = 0; y < ny; ++y) {
      if (!rows[x][y].is_string()) throw Error(Errc::ParseError, "field-type", ctx + ".table entries must be element names");
      r.at(x, y) = element_named(*H, rows[x][y].get<std::string>(), ctx);
    }
  }
  return r;
}

inline GroupoidPtr parse_groupoid(const json& j, const std::string& name) {
  const std::string ctx = "groupoid " + name;
  if (j.contains("fixture")) return groupoid_fixture(str(j, "fixture", ctx));
  FiniteGroupoid G;
  G.name = name;
  G.objects = num(j, "objects", ctx);
  std::map<std::string, std::size_t> idx;
  for (const auto& a : array(j, "arrows", ctx)) {
    const auto an = str(a, "name", ctx + ".arrows");
    if (!idx.emplace(an, G.size()).second) throw Error(Errc::ValidationError, "distinct-arrows", name + ": " + an);
    G.names.push_back(an);
    G.src.push_back(num(a, "src", ctx + "." + an));
    G.dst.push_back(num(a, "dst", ctx + "." + an));
  }
  const std::size_t n = G.size();
  auto arrow = [&](const json& v) {
    if (!v.is_string()) throw Error(Errc::ParseError, "field-type", ctx + " arrows are referenced by name");
    return lookup(idx, v.get<std::string>(), "arrow");
  };
  for (const auto& u : array(j, "units", ctx)) G.unit.push_back(arrow(u));
  G.comp.assign(n * n, npos);
  for (const auto& c : array(j, "compose", ctx)) {
    if (!c.is_array() || c.size() != 3) throw Error(Errc::ParseError, "field-type", ctx + ".compose holds [g, f, g o f]");
    G.comp[arrow(c[0]) * n + arrow(c[1])] = arrow(c[2]);
  }
  G.inv.assign(n, npos);
  for (std::size_t g = 0; g < n && G.unit.size() == G.objects; ++g)
    for (std::size_t i = 0; i < n; ++i)
      if (G.src[g] < G.objects && G.comp[i * n + g] == G.unit[G.src[g]]) G.inv[g] = i;
  for (std::size_t g = 0; g < n; ++g)
    if (G.inv[g] == npos) throw Error(Errc::ValidationError, "inverse", name + ": " + G.names[g]);
  return validated(name, [&] { return require_groupoid(std::move(G)); });
}

inline NamedAction parse_action(const json& j, const std::string& name, const Document& doc) {
  const std::string ctx = "action " + name;
  NamedAction out;
  out.groupoid = str(j, "groupoid", ctx);
  const auto& G = *lookup(doc.groupoids, out.groupoid, "groupoid");
  auto& A = out.action;
  A.name = name;
  for (const auto& a : array(j, "anchor", ctx)) A.anchor.push_back(num(a, ctx + ".anchor"));
  const auto& act = field(j, "act", ctx);
  if (!act.is_object()) throw Error(Errc::ParseError, "field-type", ctx + ".act maps arrow names to point lists");
  A.act.assign(G.size() * A.size(), npos);
  for (std::size_t g = 0; g < G.size(); ++g) {
    const auto& row = field(act, G.names[g].c_str(), ctx + ".act");
    if (!row.is_array() || row.size() != A.size()) throw Error(Errc::ValidationError, "action-shape", name + ": " + G.names[g]);
    for (std::size_t x = 0; x < A.size(); ++x)
      if (!row[x].is_null()) A.act[g * A.size() + x] = num(row[x], ctx + ".act");
  }
  validated(name, [&] {
    require_action(G, A);
    return 0;
  });
  return out;
}

inline const std::vector<std::string>& check_kinds() {
  static const std::vector<std::string> k = {"axioms", "frame", "duality", "diagram", "equivariant",
                                             "coend", "reconstruct", "equivalence", "factorization"};
  return k;
}

// References named by a check, resolved at load time.
inline void resolve_check(const CheckSpec& c, const Document& doc) {
  const std::string ctx = "check " + c.id;
  const auto& p = c.params;
  if (std::find(check_kinds().begin(), check_kinds().end(), c.kind) == check_kinds().end())
    throw Error(Errc::ValidationError, "check-kind", c.id + ": " + c.kind);
  auto rel = [&](const char* key) { lookup(doc.relations, str(p, key, ctx), "relation"); };
  if (c.kind == "axioms") {
    rel("relation");
    static const std::vector<std::string> expects = {"bijection", "function", "opfunction", "ed", "uv", "su", "in"};
    const auto e = p.value("expect", "bijection");
    if (std::find(expects.begin(), expects.end(), e) == expects.end()) throw Error(Errc::ValidationError, "axioms-expect", c.id + ": " + e);
  }
  if (c.kind == "frame") lookup(doc.lattices, str(p, "lattice", ctx), "lattice");
  if (c.kind == "duality") {
    lookup(doc.lattices, str(p, "lattice", ctx), "lattice");
    num(p, "size", ctx);
  }
  if (c.kind == "diagram") {
    rel("r");
    rel("r2");
    const auto d = str(p, "diagram", ctx);
    if (d == "diamond") {
      rel("R");
      rel("S");
    } else if (d == "triangle" || d == "diamond1" || d == "diamond2") {
      array(p, "f", ctx);
      array(p, "g", ctx);
    } else {
      throw Error(Errc::ValidationError, "diagram-kind", c.id + ": " + d);
    }
  }
  if (c.kind == "equivariant") {
    const auto& a = lookup(doc.actions, str(p, "from", ctx), "action");
    const auto& b = lookup(doc.actions, str(p, "to", ctx), "action");
    if (a.groupoid != b.groupoid) throw Error(Errc::ValidationError, "equivariant", c.id + ": actions of different groupoids");
    array(p, "map", ctx);
  }
  if (c.kind == "coend" || c.kind == "reconstruct" || c.kind == "equivalence" || c.kind == "factorization")
    lookup(doc.groupoids, str(p, "groupoid", ctx), "groupoid");
}

template <class Fn>
void each_named(const json& root, const char* key, Fn&& fn) {
  if (!root.contains(key)) return;
  const auto& arr = root.at(key);
  if (!arr.is_array()) throw Error(Errc::ParseError, "field-type", std::string(key) + " must be an array");
  for (const auto& j : arr) fn(str(j, "name", key), j);
}

}  // namespace detail

inline Document parse_document(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw Error(Errc::ParseError, "json", "line " + std::to_string(line) + ", column " + std::to_string(col));
  }
  if (!root.is_object()) throw Error(Errc::ParseError, "document", "top level must be an object");
  if (detail::str(root, "schema", "document") != kDocumentSchema)
    throw Error(Errc::ParseError, "schema", root.at("schema").get<std::string>());
  Document doc;
  auto declare = [&](const std::string& name) {
    if (std::find(doc.order.begin(), doc.order.end(), name) != doc.order.end())
      throw Error(Errc::ValidationError, "distinct-names", name);
    doc.order.push_back(name);
  };
  detail::each_named(root, "lattices", [&](const std::string& n, const json& j) {
    declare(n);
    doc.lattices[n] = detail::parse_lattice(j, n);
  });
  detail::each_named(root, "relations", [&](const std::string& n, const json& j) {
    declare(n);
    doc.relations.emplace(n, detail::parse_relation(j, n, doc));
  });
  detail::each_named(root, "groupoids", [&](const std::string& n, const json& j) {
    declare(n);
    doc.groupoids[n] = detail::parse_groupoid(j, n);
  });
  detail::each_named(root, "actions", [&](const std::string& n, const json& j) {
    declare(n);
    doc.actions.emplace(n, detail::parse_action(j, n, doc));
  });
  if (root.contains("checks")) {
    if (!root.at("checks").is_array()) throw Error(Errc::ParseError, "field-type", "checks must be an array");
    std::size_t k = 0;
    for (const auto& j : root.at("checks")) {
      CheckSpec c{j.value("id", "check" + std::to_string(++k)), detail::str(j, "kind", "check"), j};
      detail::resolve_check(c, doc);
      doc.checks.push_back(std::move(c));
    }
  }
  return doc;
}

inline Document load_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ParseError, "input", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str());
}

// ------------------------------------------------------------ reports

struct CheckResult {
  std::string id, kind;
  bool pass = false;
  std::string check, witness;
  json details = json::object();
  double ms = 0;

  bool operator==(const CheckResult& o) const {
    return id == o.id && kind == o.kind && pass == o.pass && check == o.check && witness == o.witness && details == o.details;
  }
};

struct Report {
  std::string command;
  std::uint64_t seed = 0;
  std::size_t max_size = 4;
  std::vector<CheckResult> results;

  std::size_t failed() const {
    return static_cast<std::size_t>(std::count_if(results.begin(), results.end(), [](const CheckResult& r) { return !r.pass; }));
  }
  bool passed() const { return failed() == 0; }
  bool operator==(const Report& o) const {
    return command == o.command && seed == o.seed && max_size == o.max_size && results == o.results;
  }
};

// Timings sit in their own object so the rest of the report is byte-stable.
inline json to_json(const Report& r, bool timings = true) {
  json j;
  j["schema"] = kReportSchema;
  j["command"] = r.command;
  j["seed"] = r.seed;
  j["max_size"] = r.max_size;
  j["passed"] = r.passed();
  j["summary"] = {{"total", r.results.size()}, {"passed", r.results.size() - r.failed()}, {"failed", r.failed()}};
  j["checks"] = json::array();
  for (const auto& c : r.results) {
    json e;
    e["id"] = c.id;
    e["kind"] = c.kind;
    e["status"] = c.pass ? "pass" : "fail";
    if (!c.pass) {
      e["check"] = c.check;
      e["witness"] = c.witness;
    }
    e["details"] = c.details;
    j["checks"].push_back(std::move(e));
  }
  if (timings) {
    json t = json::object();
    for (const auto& c : r.results) t[c.id] = std::round(c.ms * 1000.0) / 1000.0;
    j["timings_ms"] = t;
  }
  return j;
}

inline Report report_from_json(const json& j) {
  if (detail::str(j, "schema", "report") != kReportSchema) throw Error(Errc::ParseError, "schema", j.at("schema").dump());
  Report r;
  r.command = detail::str(j, "command", "report");
  r.seed = j.at("seed").get<std::uint64_t>();
  r.max_size = detail::num(j, "max_size", "report");
  for (const auto& e : detail::array(j, "checks", "report")) {
    CheckResult c;
    c.id = detail::str(e, "id", "report.checks");
    c.kind = detail::str(e, "kind", "report.checks");
    c.pass = detail::str(e, "status", "report.checks") == "pass";
    c.check = e.value("check", "");
    c.witness = e.value("witness", "");
    c.details = e.value("details", json::object());
    if (j.contains("timings_ms") && j.at("timings_ms").contains(c.id)) c.ms = j.at("timings_ms").at(c.id).get<double>();
    r.results.push_back(std::move(c));
  }
  const bool claimed = j.at("passed").get<bool>();
  if (claimed != r.passed()) throw Error(Errc::Inconsistent, "report-passed", "status disagrees with checks");
  return r;
}

inline std::string to_text(const Report& r) {
  std::ostringstream out;
  out << "sltk " << r.command << ": " << r.results.size() << " checks, " << r.results.size() - r.failed() << " passed, "
      << r.failed() << " failed\n";
  std::size_t w = 2;
  for (const auto& c : r.results) w = std::max(w, c.id.size());
  for (const auto& c : r.results) {
    out << (c.pass ? "PASS  " : "FAIL  ") << c.id << std::string(w - c.id.size() + 2, ' ') << c.kind;
    if (!c.pass) out << "  " << c.check << " " << c.witness;
    if (!c.details.empty()) out << "  " << c.details.dump();
    out << "\n";
  }
  return out.str();
}

// ------------------------------------------------------------ running checks

struct Options {
  std::size_t max_size = 4;
  std::uint64_t seed = 0;
  std::size_t parallel = 1;
};

using Task = std::function<CheckResult()>;

namespace detail {

inline CheckResult from_verdict(std::string id, std::string kind, const Verdict& v, json details = json::object()) {
  return {std::move(id), std::move(kind), v.ok, v.check, v.witness, std::move(details), 0};
}

// First failing axiom among those `expect` asks for: one axiom id, function, opfunction or bijection.
inline Verdict expected_axioms(const AxiomReport& a, const std::string& expect) {
  const std::map<std::string, std::string> groups = {{"function", "ed uv"}, {"opfunction", "su in"}, {"bijection", "ed uv su in"}};
  const auto it = groups.find(expect);
  const std::string wanted = it == groups.end() ? expect : it->second;
  Verdict out;
  for (const auto& [id, v] : {std::pair{"ed", &a.ed}, std::pair{"uv", &a.uv}, std::pair{"su", &a.su}, std::pair{"in", &a.in}})
    if (wanted.find(id) != std::string::npos) out = both(out, *v);
  return out;
}

inline std::vector<std::size_t> index_list(const json& a) {
  std::vector<std::size_t> v;
  for (const auto& x : a) v.push_back(num(x, "index list"));
  return v;
}


}  // namespace detail

inline CheckResult run_check(const CheckSpec& c, const Document& doc, const Options& opt) {
  const auto& p = c.params;
  if (c.kind == "axioms") {
    const auto& r = doc.relations.at(p.at("relation").get<std::string>());
    const auto expect = p.value("expect", "bijection");
    const auto a = check_axioms(r);
    return detail::from_verdict(c.id, c.kind, detail::expected_axioms(a, expect),
                                {{"class", std::string(to_string(classify(r)))}, {"ed", a.ed.ok}, {"uv", a.uv.ok}, {"su", a.su.ok}, {"in", a.in.ok}});
  }
  if (c.kind == "frame") {
    const auto& L = doc.lattices.at(p.at("lattice").get<std::string>());
    return detail::from_verdict(c.id, c.kind, is_frame(*L), {{"size", L->size()}});
  }
  if (c.kind == "duality") {
    auto H = require_locale(doc.lattices.at(p.at("lattice").get<std::string>()), "duality");
    auto sd = selfduality(H, p.at("size").get<std::size_t>());
    return detail::from_verdict(c.id, c.kind, check_duality(sd.duality), {{"size", sd.HX.carrier->size()}});
  }
  if (c.kind == "diagram") {
    const auto& r = doc.relations.at(p.at("r").get<std::string>());
    const auto& r2 = doc.relations.at(p.at("r2").get<std::string>());
    const auto name = p.at("diagram").get<std::string>();
    DiagramData d;
    Diagram kind = Diagram::diamond;
    if (name == "diamond") {
      d.R = doc.relations.at(p.at("R").get<std::string>());
      d.S = doc.relations.at(p.at("S").get<std::string>());
    } else {
      kind = name == "triangle" ? Diagram::triangle : name == "diamond1" ? Diagram::diamond1 : Diagram::diamond2;
      d.f = detail::index_list(p.at("f"));
      d.g = detail::index_list(p.at("g"));
    }
    return detail::from_verdict(c.id, c.kind, check_diagram(kind, d, r, r2));
  }
  if (c.kind == "equivariant") {
    const auto& A = doc.actions.at(p.at("from").get<std::string>());
    const auto& B = doc.actions.at(p.at("to").get<std::string>());
    const auto& G = *doc.groupoids.at(A.groupoid);
    auto rep = check_action_morphism(G, A.action, B.action, detail::index_list(p.at("map")));
    Verdict v = rep.am;
    if (!rep.agree()) v = Verdict::fail("diamond2-agreement", rep.diamond2.check);
    return detail::from_verdict(c.id, c.kind, v, {{"equivariant", rep.am.ok}, {"diamond2", rep.diamond2.ok}});
  }
  const auto& G = doc.groupoids.at(p.at("groupoid").get<std::string>());
  if (c.kind == "coend") {
    auto gh = groupoid_to_hopf(G);
    auto site = default_site(G, gh.B);
    auto L = nat_predual(site.T, site.T);
    Verdict v = check_cogebroide(end_wedge(L));
    if (v && L.L->size() != (std::size_t{1} << G->size())) v = Verdict::fail("coend-size", std::to_string(L.L->size()));
    return detail::from_verdict(c.id, c.kind, v,
                                {{"objects", site.actions.size()}, {"arrows", site.arrows.size()}, {"generators", L.generators()},
                                 {"size", L.L->size()}});
  }
  if (c.kind == "reconstruct") {
    auto r = reconstruct(G);
    json maps = json::object();
    Verdict v = r.laws;
    for (auto& [n, m] : r.matches) {
      maps[n] = m.ok;
      v = both(v, m);
    }
    return detail::from_verdict(c.id, c.kind, v,
                                {{"size", r.coend.L->size()}, {"expected", std::size_t{1} << G->size()}, {"bijective", r.bijective}, {"maps", maps}});
  }
  if (c.kind == "equivalence") {
    auto gh = groupoid_to_hopf(G);
    auto rep = equivalence_check(gh, p.value("max_size", opt.max_size));
    Verdict v = rep.ok() ? Verdict::pass() : Verdict::fail("equivalence", rep.witness);
    return detail::from_verdict(c.id, c.kind, v,
                                {{"actions", rep.actions}, {"comodules", rep.comodules}, {"representatives", rep.representatives},
                                 {"relation_homs", rep.rel_homs}, {"comodule_homs", rep.cmd_homs}});
  }
  if (c.kind == "factorization") {
    auto r = reconstruct(G);
    auto f = universal_factorization(r, p.value("max_locale", std::size_t{8}));
    Verdict v = f.ok() ? Verdict::pass() : Verdict::fail("factorization", f.witness);
    return detail::from_verdict(c.id, c.kind, v, {{"locales", f.locales}, {"cones", f.cones}, {"unique", f.unique}});
  }
  throw Error(Errc::ValidationError, "check-kind", c.kind);
}

// Tasks run on up to `parallel` threads; results keep task order.
inline std::vector<CheckResult> run_tasks(const std::vector<std::pair<std::pair<std::string, std::string>, Task>>& tasks,
                                          std::size_t parallel) {
  std::vector<CheckResult> out(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < tasks.size();) {
      const auto& [name, task] = tasks[i];
      const auto t0 = std::chrono::steady_clock::now();
      try {
        out[i] = task();
      } catch (const Error& e) {
        out[i] = CheckResult{name.first, name.second, false, e.check(), std::string(to_string(e.code())) + ": " + e.witness(), json::object(), 0};
      }
      out[i].id = name.first;
      out[i].kind = name.second;
      out[i].ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  const std::size_t n = std::max<std::size_t>(1, std::min(parallel, tasks.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

inline Report run_document(const Document& doc, const Options& opt, const std::string& command = "check") {
  std::vector<std::pair<std::pair<std::string, std::string>, Task>> tasks;
  for (const auto& c : doc.checks) tasks.push_back({{c.id, c.kind}, [&doc, &opt, c] { return run_check(c, doc, opt); }});
  return Report{command, opt.seed, opt.max_size, run_tasks(tasks, opt.parallel)};
}

// One check of the given kind per groupoid.
inline Report run_groupoids(const std::string& kind, const std::vector<std::pair<std::string, GroupoidPtr>>& groupoids,
                            const Options& opt) {
  Document doc;
  for (const auto& [n, G] : groupoids) {
    doc.groupoids[n] = G;
    doc.checks.push_back({kind + ":" + n, kind, json{{"groupoid", n}}});
  }
  return run_document(doc, opt, kind);
}

// ------------------------------------------------------------ selftest

// Built-in fixtures; the sampled check draws its relations from `seed`.
inline Report selftest(const Options& opt) {
  std::vector<std::pair<std::pair<std::string, std::string>, Task>> tasks;
  auto add = [&](std::string id, std::string kind, Task t) { tasks.push_back({{std::move(id), std::move(kind)}, std::move(t)}); };
  add("frames", "frame", [] {
    Verdict v;
    for (auto L : {two(), chain(3), powerset(2)}) v = both(v, is_frame(*L));
    if (v && (is_frame(*m3()).ok || is_frame(*n5()).ok)) v = Verdict::fail("frame-law", "M3 or N5 accepted");
    return detail::from_verdict("", "", v);
  });
  add("functions-tabulate", "axioms", [] {
    std::size_t functions = 0;
    Verdict v;
    for (std::size_t nx = 0; nx <= 2; ++nx)
      for (std::size_t ny = 0; ny <= 2; ++ny)
        for (std::size_t code = 0; code < (std::size_t{1} << (nx * ny)); ++code) {
          LRelation r(two(), nx, ny);
          for (std::size_t i = 0; i < nx * ny; ++i) r.table[i] = code >> i & 1U;
          if (!check_axioms(r).function()) continue;
          ++functions;
          if (!(graph(tabulate(r), ny) == r)) v = Verdict::fail("graph-tabulate", std::to_string(code));
        }
    return detail::from_verdict("", "", v, {{"functions", functions}});
  });
  add("sampled-inverse-image", "axioms", [seed = opt.seed] {
    std::mt19937_64 rng(seed);
    auto H = powerset(2);
    Verdict v;
    for (int k = 0; k < 64 && v.ok; ++k) {
      LRelation r(H, 2, 2);
      for (auto& e : r.table) e = static_cast<elem>(rng() % H->size());
      auto im = images(r);
      const auto& HX = *im.HX.carrier;
      const auto& HY = *im.HY.carrier;
      const bool top = im.inverse(HY.top()) == HX.top();
      bool meets = true;
      for (elem a = 0; a < HY.size(); ++a)
        for (elem b = 0; b < HY.size(); ++b) meets = meets && im.inverse(HY.meet(a, b)) == HX.meet(im.inverse(a), im.inverse(b));
      auto ax = check_axioms(r);
      if (ax.ed.ok != top || ax.uv.ok != meets) v = Verdict::fail("inverse-image", "sample " + std::to_string(k));
    }
    return detail::from_verdict("", "", v);
  });
  add("self-duality", "duality", [] {
    Verdict v;
    for (auto H : {two(), chain(3), powerset(2)})
      for (std::size_t n = 0; n <= 2; ++n) v = both(v, check_duality(selfduality(H, n).duality));
    return detail::from_verdict("", "", v);
  });
  add("tensor-powersets", "tensor", [] {
    Verdict v;
    for (std::size_t a = 1; a <= 2; ++a)
      for (std::size_t b = 1; b <= 2; ++b) {
        auto t = tensor(powerset(a), powerset(b));
        if (t.q->size() != (std::size_t{1} << (a * b))) v = Verdict::fail("tensor-size", std::to_string(a) + "x" + std::to_string(b));
      }
    return detail::from_verdict("", "", v);
  });
  for (const char* g : {"trivial", "Z2", "codiscrete2"}) {
    add(std::string("hopf:") + g, "hopf", [g] { return detail::from_verdict("", "", check_hopf(groupoid_to_hopf(groupoid_fixture(g)).H)); });
    add(std::string("reconstruct:") + g, "reconstruct", [g, &opt] {
      Document doc;
      doc.groupoids[g] = groupoid_fixture(g);
      return run_check({g, "reconstruct", json{{"groupoid", g}}}, doc, opt);
    });
  }
  add("equivalence:Z2", "equivalence", [&opt] {
    Document doc;
    doc.groupoids["Z2"] = cyclic_group(2);
    return run_check({"", "equivalence", json{{"groupoid", "Z2"}, {"max_size", std::min<std::size_t>(opt.max_size, 4)}}}, doc, opt);
  });
  return Report{"selftest", opt.seed, opt.max_size, run_tasks(tasks, opt.parallel)};
}

}  // namespace sltk::cli
