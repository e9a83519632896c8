// JSON and DOT serialisation.
//
// Model JSON:
//   {"worlds": ["a", "b"], "leq": [["a","b"]], "r": [["b","a"]], "val": {"p": ["b"]}}
// `leq` is a seed closed reflexively and transitively on load. `r` must
// satisfy the frame condition unless LoadOptions::close_r is set, and each
// valuation set must be upward closed unless LoadOptions::close_valuation is
// set.
//
// Algebra JSON:
//   {"leq": [[1,1],[0,1]], "f": [0,1], "g": [0,1]}
#pragma once

#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "intgc/algebra.hpp"
#include "intgc/filtration.hpp"
#include "intgc/formula.hpp"
#include "intgc/kripke.hpp"
#include "intgc/search.hpp"

namespace intgc {

using Json = nlohmann::ordered_json;

struct LoadOptions {
  bool close_r = false;
  bool close_valuation = false;
};

namespace detail {
inline std::string world_name(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw ModelError("world identifiers must be strings or integers");
}

inline BitMatrix read_pairs(const Json& j, const KripkeFrame& frame, const char* field) {
  BitMatrix m(frame.size());
  if (j.is_null()) return m;
  if (!j.is_array()) throw ModelError(std::string("'") + field + "' must be an array of pairs");
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) throw ModelError(std::string("'") + field + "' entries must be pairs");
    try {
      m.set(frame.index_of(world_name(p[0])), frame.index_of(world_name(p[1])));
    } catch (const UnknownWorld& e) {
      throw ModelError(std::string(field) + ": " + e.what());
    }
  }
  return m;
}

inline Json pairs_json(const KripkeFrame& frame, const BitMatrix& m) {
  Json out = Json::array();
  for (std::size_t x = 0; x < m.size(); ++x)
    for (std::size_t y : m.row(x).members()) out.push_back(Json::array({frame.worlds[x], frame.worlds[y]}));
  return out;
}
}  // namespace detail

inline KripkeModel model_from_json(const Json& j, const LoadOptions& opt = {}) {
  if (!j.is_object()) throw ModelError("model must be a JSON object");
  if (!j.contains("worlds") || !j["worlds"].is_array() || j["worlds"].empty())
    throw ModelError("'worlds' must be a non-empty array");
  KripkeModel m;
  for (const auto& w : j["worlds"]) {
    std::string name = detail::world_name(w);
    if (std::find(m.frame.worlds.begin(), m.frame.worlds.end(), name) != m.frame.worlds.end())
      throw ModelError("duplicate world: " + name);
    m.frame.worlds.push_back(std::move(name));
  }
  const std::size_t n = m.size();
  const Json null;
  m.frame.leq = reflexive_transitive_closure(detail::read_pairs(j.value("leq", null), m.frame, "leq"));
  const BitMatrix r = detail::read_pairs(j.value("r", null), m.frame, "r");
  if (opt.close_r) {
    m.frame.r = close_relation(m.frame.leq, r);
  } else {
    m.frame.r = r;
    auto v = check_frame(m.frame);
    if (!v.empty()) throw ModelError("r violates the frame condition: " + describe(m.frame, v.front()));
  }
  if (j.contains("val")) {
    if (!j["val"].is_object()) throw ModelError("'val' must be an object");
    for (const auto& [name, worlds] : j["val"].items()) {
      if (!worlds.is_array()) throw ModelError("valuation of '" + name + "' must be an array");
      WorldSet s(n);
      for (const auto& w : worlds) {
        try {
          s.set(m.frame.index_of(detail::world_name(w)));
        } catch (const UnknownWorld& e) {
          throw ModelError("val." + name + ": " + e.what());
        }
      }
      if (!is_up_closed(m.frame, s)) {
        if (!opt.close_valuation) throw ModelError("valuation of '" + name + "' is not upward closed");
        s = up_closure(m.frame, s);
      }
      m.valuation.emplace(name, std::move(s));
    }
  }
  return m;
}

inline Json model_to_json(const KripkeModel& m) {
  Json j;
  j["worlds"] = m.frame.worlds;
  j["leq"] = detail::pairs_json(m.frame, m.frame.leq);
  j["r"] = detail::pairs_json(m.frame, m.frame.r);
  Json val = Json::object();
  for (const auto& [name, set] : m.valuation) {
    Json ws = Json::array();
    for (std::size_t x : set.members()) ws.push_back(m.frame.worlds[x]);
    val[name] = std::move(ws);
  }
  j["val"] = std::move(val);
  return j;
}

inline Json world_set_json(const KripkeFrame& frame, const WorldSet& s) {
  Json out = Json::array();
  for (std::size_t x : s.members()) out.push_back(frame.worlds[x]);
  return out;
}

// ---------------------------------------------------------------------------
// Formulas

inline const char* op_name(Op op) {
  switch (op) {
    case Op::Var: return "var";
    case Op::Top: return "true";
    case Op::Bot: return "false";
    case Op::Not: return "not";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Imp: return "imp";
    case Op::Up: return "up";
    case Op::Down: return "down";
  }
  return "?";
}

inline Json formula_to_json(const Formula& f) {
  Json j;
  j["op"] = op_name(f.op());
  if (f.is(Op::Var)) {
    j["name"] = f.name();
  } else if (is_unary(f.op())) {
    j["child"] = formula_to_json(f.child());
  } else if (is_binary(f.op())) {
    j["left"] = formula_to_json(f.left());
    j["right"] = formula_to_json(f.right());
  }
  return j;
}

inline Json formula_list_json(const FormulaList& l) {
  Json out = Json::array();
  for (const auto& f : l) out.push_back(render(f));
  return out;
}

// ---------------------------------------------------------------------------
// Filtrations

inline Json report_to_json(const FiltrationReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"violations", c.violations}, {"witnesses", c.witnesses}});
  return {{"passed", r.passed()}, {"checks", std::move(checks)}};
}

/// Quotient model in the model schema plus "class_of" and "gamma".
inline Json filtration_to_json(const Filtration& f) {
  Json j = model_to_json(f.quotient());
  Json class_of = Json::object();
  for (std::size_t x = 0; x < f.source.size(); ++x)
    class_of[f.source.frame.worlds[x]] = Filtration::class_name(f.class_of[x]);
  j["class_of"] = std::move(class_of);
  j["gamma"] = formula_list_json(f.basis.gamma);
  Json sigs = Json::array();
  for (const auto& s : f.classes) {
    std::string bits;
    for (bool b : s) bits += b ? '1' : '0';
    sigs.push_back(bits);
  }
  j["signatures"] = std::move(sigs);
  return j;
}

// ---------------------------------------------------------------------------
// Algebras

inline GCAlgebra algebra_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("leq") || !j.contains("f") || !j.contains("g"))
    throw AlgebraError(AlgebraError::Kind::BadTable, {}, "algebra needs 'leq', 'f' and 'g'");
  OrderMatrix leq;
  for (const auto& row : j["leq"]) {
    if (!row.is_array()) throw AlgebraError(AlgebraError::Kind::BadTable, {}, "'leq' rows must be arrays");
    std::vector<bool> r;
    for (const auto& v : row) {
      if (v.is_boolean())
        r.push_back(v.get<bool>());
      else if (v.is_number_integer())
        r.push_back(v.get<long long>() != 0);
      else
        throw AlgebraError(AlgebraError::Kind::BadTable, {}, "'leq' entries must be 0/1 or booleans");
    }
    leq.push_back(std::move(r));
  }
  auto table = [&](const char* key) {
    std::vector<std::size_t> t;
    for (const auto& v : j[key]) {
      if (!v.is_number_integer() || v.get<long long>() < 0)
        throw AlgebraError(AlgebraError::Kind::BadTable, {}, std::string("'") + key + "' entries must be element indices");
      t.push_back(v.get<std::size_t>());
    }
    return t;
  };
  return make_gc_algebra(leq, table("f"), table("g"));
}

inline Json algebra_to_json(const GCAlgebra& a) {
  Json leq = Json::array();
  for (const auto& row : a.lattice.leq) {
    Json r = Json::array();
    for (bool b : row) r.push_back(b ? 1 : 0);
    leq.push_back(std::move(r));
  }
  return {{"leq", std::move(leq)}, {"f", a.f}, {"g", a.g}};
}

inline Json gc_report_json(const GCAlgebra& a) {
  const auto v = check_gc_operators(a);
  Json list = Json::array();
  for (const auto& x : v) list.push_back({{"kind", to_string(x.kind)}, {"witness", x.witness}});
  return {{"size", a.size()},
          {"bottom", a.lattice.bottom},
          {"top", a.lattice.top},
          {"passed", v.empty()},
          {"violations", std::move(list)}};
}

// ---------------------------------------------------------------------------
// Search outcomes

inline Json decision_to_json(const Formula& a, const SearchBudget& budget, const Decision& d, bool emit_filtration) {
  const auto& o = d.outcome;
  Json j;
  j["formula"] = render(a);
  j["verdict"] = to_string(o.verdict);
  j["max_worlds"] = budget.max_worlds;
  j["gamma_size"] = d.gamma_size;
  j["class_bound"] = "2^" + std::to_string(d.gamma_size);
  j["stats"] = {{"frames", o.stats.frames}, {"models", o.stats.models}, {"sizes_completed", o.stats.sizes_completed}};
  switch (o.verdict) {
    case SearchOutcome::Verdict::CountermodelFound: {
      Json cm = model_to_json(*o.model);
      cm["world"] = o.model->frame.worlds[o.world];
      j["countermodel"] = std::move(cm);
      if (emit_filtration && d.certificate) {
        Json cert = filtration_to_json(*d.certificate);
        cert["world"] = Filtration::class_name(d.certificate->class_of[o.world]);
        cert["refutes"] = d.certificate_refutes;
        cert["report"] = report_to_json(*d.report);
        j["certificate"] = std::move(cert);
      }
      break;
    }
    case SearchOutcome::Verdict::NoCountermodelUpTo:
      j["bound"] = o.bound;
      j["note"] = "no countermodel with at most " + std::to_string(o.bound) +
                  " worlds; this is a validity proof only for bounds reaching 2^" + std::to_string(d.gamma_size);
      break;
    case SearchOutcome::Verdict::BudgetExhausted: j["exhausted"] = o.exhausted; break;
  }
  return j;
}

// ---------------------------------------------------------------------------
// DOT

namespace detail {
inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}
}  // namespace detail

/// Solid edges for the covering relation of <= (double-headed between
/// distinct equivalent worlds), dashed edges for R, labels listing the
/// variables true at each world.
inline std::string model_to_dot(const KripkeModel& m) {
  const auto& fr = m.frame;
  const std::size_t n = m.size();
  auto strict = [&](std::size_t x, std::size_t y) { return fr.leq.test(x, y) && !fr.leq.test(y, x); };
  std::ostringstream os;
  os << "digraph model {\n  node [shape=box];\n";
  for (std::size_t x = 0; x < n; ++x) {
    std::string label = fr.worlds[x];
    std::string vars;
    for (const auto& [name, set] : m.valuation)
      if (set.test(x)) vars += (vars.empty() ? "" : ",") + name;
    if (!vars.empty()) label += "\\n" + vars;
    os << "  " << detail::dot_quote(fr.worlds[x]) << " [label=\"";
    for (char c : label) os << (c == '"' ? std::string("\\\"") : std::string(1, c));
    os << "\"];\n";
  }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y || !fr.leq.test(x, y)) continue;
      if (fr.leq.test(y, x)) {
        if (x < y)
          os << "  " << detail::dot_quote(fr.worlds[x]) << " -> " << detail::dot_quote(fr.worlds[y])
             << " [dir=both];\n";
        continue;
      }
      bool covering = true;
      for (std::size_t z = 0; z < n && covering; ++z)
        if (strict(x, z) && strict(z, y)) covering = false;
      if (covering) os << "  " << detail::dot_quote(fr.worlds[x]) << " -> " << detail::dot_quote(fr.worlds[y]) << ";\n";
    }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y : fr.r.row(x).members())
      os << "  " << detail::dot_quote(fr.worlds[x]) << " -> " << detail::dot_quote(fr.worlds[y])
         << " [style=dashed];\n";
  os << "}\n";
  return os.str();
}

}  // namespace intgc
