// Command-line front end. Results are written to stdout as data; exit code 2
// is reserved for malformed input and internal errors.
#pragma once

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "intgc/algebra.hpp"
#include "intgc/closure.hpp"
#include "intgc/filtration.hpp"
#include "intgc/io.hpp"
#include "intgc/kripke.hpp"
#include "intgc/parser.hpp"
#include "intgc/search.hpp"

namespace intgc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 2;

namespace detail {

class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline std::string read_source(const std::string& path, std::istream& in) {
  if (path == "-") return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::ifstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot open " + path);
  return {std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>()};
}

inline Json read_json(const std::string& path, std::istream& in) {
  const std::string text = read_source(path, in);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

inline void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

struct ModelArgs {
  std::string path;
  LoadOptions load;

  void attach(CLI::App* cmd) {
    cmd->add_option("model", path, "model JSON file ('-' for stdin)")->required();
    cmd->add_flag("--close-r", load.close_r, "close r under the frame condition instead of rejecting it");
    cmd->add_flag("--close-valuation", load.close_valuation, "up-close valuation sets instead of rejecting them");
  }
  KripkeModel load_model(std::istream& in) const { return model_from_json(read_json(path, in), load); }
};

}  // namespace detail

/// Runs one command. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  using detail::emit;
  CLI::App app{"Decision procedures for intuitionistic logic with a Galois connection", "intgc"};
  app.require_subcommand(1);

  std::string formula_text;
  std::function<void()> action;

  auto* parse_cmd = app.add_subcommand("parse", "print the syntax tree of a formula as JSON");
  parse_cmd->add_option("formula", formula_text)->required();
  parse_cmd->callback([&] {
    action = [&] {
      const Formula f = parse(formula_text);
      emit(out, {{"formula", render(f)}, {"ast", formula_to_json(f)}});
    };
  });

  auto* closure_cmd = app.add_subcommand("closure", "print Sub(A) and Gamma");
  closure_cmd->add_option("formula", formula_text)->required();
  closure_cmd->callback([&] {
    action = [&] {
      const auto b = closure_basis(parse(formula_text));
      emit(out, {{"formula", render(b.root)}, {"sub", formula_list_json(b.sub)}, {"gamma", formula_list_json(b.gamma)}});
    };
  });

  detail::ModelArgs model_args;
  std::string world;

  auto* mc_cmd = app.add_subcommand("mc", "model-check a formula");
  model_args.attach(mc_cmd);
  mc_cmd->add_option("formula", formula_text)->required();
  mc_cmd->add_option("--world", world, "report satisfaction at a single world");
  mc_cmd->callback([&] {
    action = [&] {
      const auto m = model_args.load_model(in);
      const Formula f = parse(formula_text);
      const WorldSet ext = extension(m, f);
      Json j{{"formula", render(f)}};
      if (!world.empty()) {
        j["world"] = world;
        j["satisfied"] = ext.test(m.frame.index_of(world));
      } else {
        j["extension"] = world_set_json(m.frame, ext);
        j["valid"] = ext.all();
      }
      emit(out, j);
    };
  });

  auto* valid_cmd = app.add_subcommand("valid", "check validity of a formula in a model");
  model_args.attach(valid_cmd);
  valid_cmd->add_option("formula", formula_text)->required();
  valid_cmd->callback([&] {
    action = [&] {
      const auto m = model_args.load_model(in);
      const Formula f = parse(formula_text);
      const auto w = failing_world(m, f);
      emit(out, {{"formula", render(f)},
                 {"valid", !w.has_value()},
                 {"failing_world", w ? Json(m.frame.worlds[*w]) : Json(nullptr)}});
    };
  });

  bool verify = false;
  auto* filter_cmd = app.add_subcommand("filter", "filtrate a model through the closure set of a formula");
  model_args.attach(filter_cmd);
  filter_cmd->add_option("formula", formula_text)->required();
  filter_cmd->add_flag("--verify", verify, "append a report that re-checks each property of the quotient");
  filter_cmd->callback([&] {
    action = [&] {
      const auto m = model_args.load_model(in);
      const Filtration f = build_filtration(m, parse(formula_text));
      Json j = filtration_to_json(f);
      if (verify) j["report"] = report_to_json(verify_filtration(f));
      emit(out, j);
    };
  });

  SearchBudget budget;
  bool emit_filtration = false;
  auto* decide_cmd = app.add_subcommand("decide", "search for a countermodel up to a size bound");
  decide_cmd->add_option("formula", formula_text)->required();
  decide_cmd->add_option("--max-worlds", budget.max_worlds)->capture_default_str();
  decide_cmd->add_option("--max-models", budget.max_models)->capture_default_str();
  decide_cmd->add_option("--timeout-ms", budget.max_millis)->capture_default_str();
  decide_cmd->add_option("--seed", budget.seed)->capture_default_str();
  decide_cmd->add_flag("--emit-filtration", emit_filtration, "attach the verified filtration certificate");
  decide_cmd->callback([&] {
    action = [&] {
      const Formula f = parse(formula_text);
      const Decision d = decide_bounded(f, budget);
      emit(out, decision_to_json(f, budget, d, emit_filtration));
    };
  });

  std::string alg_path;
  auto* alg_check_cmd = app.add_subcommand("alg-check", "validate a finite algebra with operators");
  alg_check_cmd->add_option("algebra", alg_path)->required();
  alg_check_cmd->callback([&] {
    action = [&] {
      const Json j = detail::read_json(alg_path, in);
      try {
        emit(out, gc_report_json(algebra_from_json(j)));
      } catch (const AlgebraError& e) {
        if (e.kind() == AlgebraError::Kind::BadTable) throw;
        static const char* kinds[] = {"not_a_partial_order", "not_a_lattice", "not_distributive", "bad_table"};
        emit(out, {{"passed", false},
                   {"error", {{"kind", kinds[static_cast<int>(e.kind())]}, {"witness", e.witness()}, {"message", e.what()}}}});
      }
    };
  });

  auto* alg_valid_cmd = app.add_subcommand("alg-valid", "evaluate a formula under all assignments");
  alg_valid_cmd->add_option("algebra", alg_path)->required();
  alg_valid_cmd->add_option("formula", formula_text)->required();
  alg_valid_cmd->callback([&] {
    action = [&] {
      const GCAlgebra a = algebra_from_json(detail::read_json(alg_path, in));
      const Formula f = parse(formula_text);
      emit(out, {{"formula", render(f)}, {"valid", valid_in_algebra(a, f)}});
    };
  });

  auto* complex_cmd = app.add_subcommand("complex", "complex algebra of up-sets of a model's frame");
  model_args.attach(complex_cmd);
  complex_cmd->callback([&] {
    action = [&] {
      const auto m = model_args.load_model(in);
      std::vector<WorldSet> elements;
      const GCAlgebra a = complex_algebra(m.frame, &elements);
      Json j = algebra_to_json(a);
      Json els = Json::array();
      for (const auto& e : elements) els.push_back(world_set_json(m.frame, e));
      j["elements"] = std::move(els);
      j["report"] = gc_report_json(a);
      emit(out, j);
    };
  });

  auto* dot_cmd = app.add_subcommand("export-dot", "render a model in Graphviz DOT");
  model_args.attach(dot_cmd);
  dot_cmd->callback([&] {
    action = [&] { out << model_to_dot(model_args.load_model(in)); };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  try {
    if (action) action();
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitError;
}

}  // namespace intgc::cli
