#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "closurium/doctrine.hpp"
#include "closurium/eval.hpp"
#include "closurium/parser.hpp"
#include "closurium/pgm.hpp"
#include "closurium/sequent.hpp"
#include "closurium/spaces.hpp"
#include "closurium/version.hpp"

namespace closurium::cli {

// exit codes: 0 ok, 2 bad input, 3 resource or unsupported, 4 proof failure
inline constexpr int exit_ok = 0;
inline constexpr int exit_input = 2;
inline constexpr int exit_resource = 3;
inline constexpr int exit_proof = 4;

struct run_config {
  std::vector<std::string> model_paths;
  std::string formula_text;
  std::string formula_file;
  std::string format = "table";
  std::string output_path;
  std::string context_spec;
  std::string derivation_path;
  std::string law_selection;
  std::string mode = "exhaustive";
  std::uint32_t samples = 256;
  std::uint64_t seed = 0;
  caps limits;
};

namespace detail {

inline json envelope(const std::string& command, const run_config& cfg) {
  return json{{"schema", 1},
              {"tool", "closurium"},
              {"version", version},
              {"command", command},
              {"seed", cfg.seed},
              {"caps",
               {{"enumeration", cfg.limits.enumeration},
                {"until", cfg.limits.until},
                {"paths", cfg.limits.paths},
                {"context_vars", cfg.limits.context_vars}}}};
}

inline void emit(const std::string& text, const run_config& cfg, std::ostream& out) {
  if (cfg.output_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.output_path, std::ios::binary);
  if (!f) throw validation_error("cannot write " + cfg.output_path);
  f << text;
}

inline formula load_formula(const run_config& cfg) {
  std::string text = cfg.formula_text;
  if (!cfg.formula_file.empty()) {
    std::ifstream in(cfg.formula_file);
    if (!in) throw validation_error("cannot open " + cfg.formula_file);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  }
  if (text.empty()) throw validation_error("no formula given");
  return parse_formula(text);
}

inline context parse_context(const std::string& spec,
                             const std::vector<const point_model*>& models) {
  context ctx;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos)
      throw validation_error("context entries must look like var:sort");
    std::string var = item.substr(0, colon), sort = item.substr(colon + 1);
    const point_model* found = nullptr;
    for (auto* m : models)
      if (m->name == sort) found = m;
    if (!found) throw unknown_sort(sort);
    ctx.emplace_back(var, found);
  }
  if (ctx.empty()) throw validation_error("empty context");
  return ctx;
}

inline std::string dot_output(const point_model& m, const bitset& result,
                              const run_config& cfg) {
  std::ostringstream os;
  os << "digraph \"" << m.name << "\" {\n";
  os << "  // closurium " << version << " seed=" << cfg.seed << "\n";
  os << "  rankdir=LR;\n";
  for (std::size_t i = 0; i < m.space.size(); ++i) {
    os << "  \"" << m.space.points().name(i) << "\"";
    if (result.test(i)) os << " [style=filled, fillcolor=\"gray25\", fontcolor=\"white\"]";
    os << ";\n";
  }
  for (std::size_t i = 0; i < m.space.size(); ++i)
    for (auto t : m.space.steps()[i])
      os << "  \"" << m.space.points().name(i) << "\" -> \"" << m.space.points().name(t)
         << "\";\n";
  os << "}\n";
  return os.str();
}

inline std::string pgm_output(const point_model& m, const bitset& result,
                              const run_config& cfg) {
  if (m.space.kind() != space_kind::grid)
    throw unsupported("pgm output is only defined for grid models");
  pgm_image img;
  img.width = m.space.grid_width();
  img.height = m.space.grid_height();
  img.maxval = 255;
  img.pixels.assign(img.width * img.height, 0);
  for (std::size_t i = 0; i < m.space.size(); ++i)
    if (result.test(i)) img.pixels[i] = 255;
  std::ostringstream os;
  write_pgm(os, img, "closurium " + std::string(version) + " seed=" + std::to_string(cfg.seed));
  return os.str();
}

inline int cmd_check(const run_config& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.model_paths.empty()) throw validation_error("check needs at least one model");
  std::vector<model> models;
  for (const auto& p : cfg.model_paths) models.push_back(load_model_file(p));
  formula f = load_formula(cfg);

  if (std::holds_alternative<fuzzy_model>(models[0])) {
    const auto& fm = std::get<fuzzy_model>(models[0]);
    auto result = eval(fm, f, cfg.limits);
    if (cfg.format == "json") {
      json doc = envelope("check", cfg);
      doc["model"] = fm.name;
      doc["formula"] = to_string(f);
      doc["result"] = {{"valuation", fm.space.algebra().element_to_json(result)}};
      emit(doc.dump(2) + "\n", cfg, out);
    } else if (cfg.format == "table") {
      std::ostringstream os;
      os << "model: " << fm.name << " (fuzzy, " << fm.space.size() << " points)\n";
      os << "formula: " << to_string(f) << "\n";
      for (std::size_t i = 0; i < fm.space.size(); ++i)
        os << "  " << fm.space.points().name(i) << ": "
           << to_string(rational(result.val[i], fm.space.algebra().chain().resolution()))
           << "\n";
      emit(os.str(), cfg, out);
    } else {
      throw unsupported("format '" + cfg.format + "' is not defined for fuzzy models");
    }
    return exit_ok;
  }

  std::vector<const point_model*> pms;
  for (const auto& m : models) {
    if (!std::holds_alternative<point_model>(m))
      throw unsupported("mixing fuzzy and point models in one run");
    pms.push_back(&std::get<point_model>(m));
  }
  point_evaluator ev(pms, cfg.limits);
  context ctx = cfg.context_spec.empty() ? context{{"x", pms[0]}}
                                         : parse_context(cfg.context_spec, pms);
  bitset result = ev.eval(ctx, f);

  // the context product carrier, for naming result points
  const point_model& principal = *ctx[0].second;
  std::vector<std::string> names;
  if (ctx.size() == 1) {
    names = principal.space.points().names();
  } else {
    carrier prod = principal.space.points();
    for (std::size_t i = 1; i < ctx.size(); ++i)
      prod = product_carrier(prod, ctx[i].second->space.points());
    names = prod.names();
  }

  if (cfg.format == "json") {
    json doc = envelope("check", cfg);
    doc["model"] = principal.name;
    doc["formula"] = to_string(f);
    json sat = json::array();
    for (auto i = result.find_first(); i != bitset::npos; i = result.find_next(i))
      sat.push_back(names[i]);
    doc["result"] = {{"satisfying", sat}};
    emit(doc.dump(2) + "\n", cfg, out);
  } else if (cfg.format == "table") {
    std::ostringstream os;
    os << "model: " << principal.name << " (" << to_string(principal.space.kind()) << ", "
       << principal.space.size() << " points)\n";
    os << "formula: " << to_string(f) << "\n";
    os << "satisfying (" << result.count() << "/" << result.size() << "):";
    for (auto i = result.find_first(); i != bitset::npos; i = result.find_next(i))
      os << " " << names[i];
    os << "\n";
    emit(os.str(), cfg, out);
  } else if (cfg.format == "dot") {
    if (ctx.size() != 1) throw unsupported("dot output needs a single-variable context");
    emit(dot_output(principal, result, cfg), cfg, out);
  } else if (cfg.format == "pgm") {
    if (ctx.size() != 1) throw unsupported("pgm output needs a single-variable context");
    emit(pgm_output(principal, result, cfg), cfg, out);
  } else {
    throw validation_error("unknown format: " + cfg.format);
  }
  (void)err;
  return exit_ok;
}

inline int cmd_laws(const run_config& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.model_paths.size() != 1) throw validation_error("laws needs exactly one model");
  model m = load_model_file(cfg.model_paths[0]);

  check_mode mode = cfg.mode == "sampled" ? check_mode::sampled(cfg.samples, cfg.seed)
                                          : check_mode::exhaustive_mode(cfg.limits.enumeration);
  law_report report = std::visit(
      [&](const auto& pm) { return check_closure_laws(pm.space.as_operator(), mode); }, m);

  json doc = envelope("laws", cfg);
  doc["model"] = model_name(m);
  json laws = report.to_json();
  if (!cfg.law_selection.empty()) {
    json filtered = json::object();
    std::stringstream ss(cfg.law_selection);
    std::string name;
    while (std::getline(ss, name, ',')) {
      if (!laws["laws"].contains(name)) throw validation_error("unknown law: " + name);
      filtered[name] = laws["laws"][name];
    }
    laws["laws"] = filtered;
  }
  doc["report"] = laws;
  emit(doc.dump(2) + "\n", cfg, out);
  (void)err;
  return exit_ok;
}

inline int cmd_prove(const run_config& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.derivation_path.empty()) throw validation_error("prove needs a derivation file");
  std::ifstream in(cfg.derivation_path);
  if (!in) throw validation_error("cannot open " + cfg.derivation_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw validation_error("malformed JSON in " + cfg.derivation_path + ": " + e.what());
  }
  derivation d = derivation_from_json(j);
  check_derivation(d); // throws rule_violation -> exit 4

  out << "derivation: valid (" << d.rule << " at the root)\n";
  if (cfg.model_paths.empty()) return exit_ok;

  std::vector<model> models;
  std::vector<const point_model*> pms;
  for (const auto& p : cfg.model_paths) {
    models.push_back(load_model_file(p));
    if (!std::holds_alternative<point_model>(models.back()))
      throw unsupported("soundness checks run on point models only");
  }
  for (const auto& m : models) pms.push_back(&std::get<point_model>(m));

  auto entries = soundness_check(d, pms, cfg.limits);
  bool all = true;
  out << "conclusion: " << to_string(d.conclusion) << "\n";
  for (const auto& e : entries) {
    out << "  " << e.model << ": " << (e.satisfied ? "satisfied" : "VIOLATED") << "\n";
    all &= e.satisfied;
  }
  if (!all) {
    err << "soundness violation: a derivable sequent is unsatisfied\n";
    return exit_proof;
  }
  return exit_ok;
}

} // namespace detail

// Parses argv-style arguments and runs one subcommand. Streams are injected
// so tests can run the CLI in-process.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  run_config cfg;
  if (const char* env = std::getenv("CLOSURIUM_CAP")) {
    try {
      cfg.limits.enumeration = std::stoull(env);
    } catch (const std::exception&) {
      err << "error: CLOSURIUM_CAP is not a number\n";
      return exit_input;
    }
  }

  CLI::App app{"closurium: a model checker and proof checker for closure spaces"};
  app.set_version_flag("--version", std::string("closurium ") + version);
  app.require_subcommand(1);

  auto add_caps = [&](CLI::App* sub) {
    sub->add_option("--enum-cap", cfg.limits.enumeration, "enumeration cap");
    sub->add_option("--until-cap", cfg.limits.until, "until-oracle candidate cap");
    sub->add_option("--path-cap", cfg.limits.paths, "surrounded-oracle walk cap");
    sub->add_option("--seed", cfg.seed, "seed recorded in outputs");
    sub->add_option("-o,--output", cfg.output_path, "write the artifact to a file");
  };

  CLI::App* check = app.add_subcommand("check", "evaluate a formula on a model");
  check->add_option("-m,--model", cfg.model_paths, "model file(s)")->expected(-1);
  check->add_option("-f,--formula", cfg.formula_text, "formula text");
  check->add_option("--formula-file", cfg.formula_file, "file holding the formula");
  check->add_option("--format", cfg.format, "output format: table|json|dot|pgm");
  check->add_option("--context", cfg.context_spec, "evaluation context, e.g. x:m1,y:m2");
  add_caps(check);

  CLI::App* laws = app.add_subcommand("laws", "run the closure-law suite on a model");
  laws->add_option("-m,--model", cfg.model_paths, "model file")->expected(-1);
  laws->add_option("--select", cfg.law_selection, "comma-separated law names to report");
  laws->add_option("--mode", cfg.mode, "exhaustive|sampled");
  laws->add_option("--samples", cfg.samples, "sample count in sampled mode");
  add_caps(laws);

  CLI::App* prove = app.add_subcommand("prove", "check a derivation file");
  prove->add_option("-d,--derivation", cfg.derivation_path, "derivation file");
  prove->add_option("-m,--model", cfg.model_paths, "models for the soundness table")
      ->expected(-1);
  add_caps(prove);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForVersion& e) {
    out << app.version() << "\n";
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_input;
  }

  try {
    if (app.got_subcommand(check)) return detail::cmd_check(cfg, out, err);
    if (app.got_subcommand(laws)) return detail::cmd_laws(cfg, out, err);
    if (app.got_subcommand(prove)) return detail::cmd_prove(cfg, out, err);
    err << "error: no subcommand\n";
    return exit_input;
  } catch (const rule_violation& e) {
    err << "error: " << e.what() << "\n";
    return exit_proof;
  } catch (const too_large& e) {
    err << "error: " << e.what() << "\n";
    return exit_resource;
  } catch (const unsupported& e) {
    err << "error: " << e.what() << "\n";
    return exit_resource;
  } catch (const error& e) {
    err << "error: " << e.what() << "\n";
    return exit_input;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_input;
  }
}

} // namespace closurium::cli
