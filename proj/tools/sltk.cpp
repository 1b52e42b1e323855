#include "sltk/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace sltk;
using namespace sltk::cli;

namespace {

struct Flags {
  std::string input, report, format = "text";
  std::vector<std::string> groupoids;
  Options opt;
};

int emit(const Report& r, const Flags& f) {
  const std::string out = f.format == "json" ? to_json(r).dump(2) + "\n" : to_text(r);
  if (f.report.empty()) {
    std::cout << out;
  } else {
    std::ofstream file(f.report, std::ios::binary);
    if (!file) throw Error(Errc::ParseError, "report", "cannot write " + f.report);
    file << out;
    std::cout << to_text(r);
  }
  return r.passed() ? 0 : 1;
}

// Groupoids named on the command line, else those declared in the input.
std::vector<std::pair<std::string, GroupoidPtr>> groupoids(const Flags& f) {
  std::vector<std::pair<std::string, GroupoidPtr>> out;
  for (const auto& g : f.groupoids) out.push_back({g, groupoid_fixture(g)});
  if (!f.input.empty()) {
    auto doc = load_document(f.input);
    for (const auto& [n, G] : doc.groupoids) out.push_back({n, G});
  }
  if (out.empty()) throw Error(Errc::UnresolvedReference, "groupoid", "pass --groupoid or an --input declaring groupoids");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite sup-lattice, relation and groupoid reconstruction checker"};
  app.require_subcommand(1);
  Flags f;
  auto common = [&](CLI::App* sub, bool needs_input) {
    auto* in = sub->add_option("--input", f.input, "document (" + std::string(kDocumentSchema) + ")");
    if (needs_input) in->required();
    sub->add_option("--report", f.report, "write the report to this path");
    sub->add_option("--format", f.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--max-size", f.opt.max_size, "largest action carrier for enumerations")->capture_default_str();
    sub->add_option("--seed", f.opt.seed, "seed for sampled properties")->capture_default_str();
    sub->add_option("--parallel", f.opt.parallel, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  };
  auto* validate = app.add_subcommand("validate", "parse and validate a document");
  common(validate, true);
  auto* check = app.add_subcommand("check", "run the checks declared in a document");
  common(check, true);
  std::vector<CLI::App*> per_groupoid;
  for (const char* name : {"coend", "reconstruct", "equivalence"}) {
    auto* sub = app.add_subcommand(name, std::string(name) + " check for each groupoid");
    common(sub, false);
    sub->add_option("--groupoid", f.groupoids, "fixture: trivial, Z2, Z3, codiscrete2, discrete2");
    per_groupoid.push_back(sub);
  }
  auto* self = app.add_subcommand("selftest", "run the built-in fixtures");
  common(self, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (validate->parsed()) {
      auto doc = load_document(f.input);
      Report r{"validate", f.opt.seed, f.opt.max_size, {}};
      for (const auto& n : doc.order) r.results.push_back({n, "declaration", true, "", "", json::object(), 0});
      return emit(r, f);
    }
    if (check->parsed()) return emit(run_document(load_document(f.input), f.opt), f);
    for (auto* sub : per_groupoid)
      if (sub->parsed()) return emit(run_groupoids(sub->get_name(), groupoids(f), f.opt), f);
    if (self->parsed()) return emit(selftest(f.opt), f);
  } catch (const Error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
