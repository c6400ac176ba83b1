// homkit: exact toolkit for weighted graph homomorphism partition functions,
// edge-gadget algebra, interpolation reductions, and dichotomy classification.

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "homkit/classify.hpp"
#include "homkit/errors.hpp"
#include "homkit/gadgets.hpp"
#include "homkit/interpolation.hpp"
#include "homkit/json_io.hpp"
#include "homkit/matrix.hpp"
#include "homkit/multigraph.hpp"
#include "homkit/partition.hpp"

using namespace homkit;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_precondition("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

WeightMatrix load_matrix(const std::string& path) {
  return matrix_from_json(parse_json(read_file(path), path));
}

std::pair<MultiGraph, std::optional<RotationSystem>> load_graph(
    const std::string& path) {
  return graph_from_json(parse_json(read_file(path), path));
}

EdgeGadget load_gadget(const std::string& path) {
  return gadget_from_json(parse_json(read_file(path), path));
}

std::vector<Rat> parse_z(const std::string& csv) {
  std::vector<Rat> z;
  std::string tok;
  std::istringstream ss(csv);
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) z.push_back(parse_rat(tok));
  }
  return z;
}

EdgeGadget family_gadget(const std::string& family, int n) {
  if (family == "thicken") return thicken(n);
  if (family == "stretch") return stretch(n);
  if (family == "bridge") return bridge(n);
  if (family == "loop") return loop_gadget(n);
  throw_precondition("unknown gadget family '" + family +
                     "' (thicken|stretch|bridge|loop)");
}

EvalOptions global_options() {
  EvalOptions opt;
  if (const char* ms = std::getenv("HOMKIT_BUDGET_MS")) {
    long budget = std::strtol(ms, nullptr, 10);
    if (budget > 0)
      opt.deadline = std::chrono::steady_clock::now() +
                     std::chrono::milliseconds(budget);
  }
  return opt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "homkit: exact graph-homomorphism partition functions, edge gadgets, "
      "interpolation reductions, and the tractable/#P-hard classifier"};
  app.require_subcommand(1);

  unsigned long long seed = 0;
  app.add_option("--seed", seed,
                 "seed for randomized helpers (reserved; outputs are "
                 "deterministic for fixed inputs)");

  std::string matrix_path, graph_path, gadget_path;
  std::string family, construction, kind;
  int n_param = 1, ring_m = 1, ring_n = 1, sep_i = 0, sep_j = 1;
  std::string z_csv;
  double theta = 0.0;
  bool use_float = false, require_decided = false, emit_gadget = false;
  int budget_depth = 6;
  long budget_bits = 4096, budget_states = 2000;

  std::function<json()> runner;
  int exit_unknown = 0;  // set to 4 when --require-decided sees UNKNOWN

  auto* c_eval = app.add_subcommand("eval", "evaluate Z_M(G) with strategy tag");
  c_eval->add_option("-m,--matrix", matrix_path)->required();
  c_eval->add_option("-g,--graph", graph_path)->required();
  c_eval->callback([&] {
    runner = [&]() -> json {
      EvalResult r =
          eval_auto(load_matrix(matrix_path), load_graph(graph_path).first,
                    global_options());
      return json{{"value", rat_to_string(r.value)},
                  {"strategy", strategy_name(r.strategy)}};
    };
  });

  auto* c_count = app.add_subcommand(
      "count", "count profile by enumeration and by the Vandermonde reduction");
  c_count->add_option("-m,--matrix", matrix_path)->required();
  c_count->add_option("-g,--graph", graph_path)->required();
  c_count->callback([&] {
    runner = [&]() -> json {
      WeightMatrix m = load_matrix(matrix_path);
      MultiGraph g = load_graph(graph_path).first;
      EvalOptions opt = global_options();
      CountProfile direct = count_enumerate(m, g, opt);
      CountProfile via = count_via_vandermonde(
          m, g, [&](const MultiGraph& h) { return eval_bruteforce(m, h, opt); });
      json out = profile_to_json(direct);
      out["methods_agree"] = direct == via;
      return out;
    };
  });

  auto* c_gadget =
      app.add_subcommand("gadget", "construct a family gadget and its signature");
  c_gadget->add_option("family", family, "thicken|stretch|bridge|loop")
      ->required();
  c_gadget->add_option("n", n_param, "family parameter")->required();
  c_gadget->add_option("-m,--matrix", matrix_path)->required();
  c_gadget->add_flag("--emit-gadget", emit_gadget, "include the gadget JSON");
  c_gadget->callback([&] {
    runner = [&]() -> json {
      EdgeGadget k = family_gadget(family, n_param);
      WeightMatrix m = load_matrix(matrix_path);
      json out{{"family", family},
               {"n", n_param},
               {"signature", ratmatrix_to_json(signature(k, m, global_options()))}};
      if (emit_gadget) out["gadget"] = gadget_to_json(k);
      return out;
    };
  });

  auto* c_transform = app.add_subcommand(
      "transform", "replace_edges (KG) or the ring transform R_{m,n}");
  c_transform->add_option("kind", kind, "replace|ring")->required();
  c_transform->add_option("-g,--graph", graph_path)->required();
  c_transform->add_option("--family", family, "gadget family for 'replace'");
  c_transform->add_option("-n,--n", n_param, "family parameter");
  c_transform->add_option("--gadget", gadget_path, "gadget JSON for 'replace'");
  c_transform->add_option("--ring-m", ring_m, "path length per ring edge");
  c_transform->add_option("--ring-n", ring_n, "parallel edges per path edge");
  c_transform->callback([&] {
    runner = [&]() -> json {
      auto [g, rot] = load_graph(graph_path);
      EmbeddedGraph eg{std::move(g), std::move(rot)};
      if (kind == "replace") {
        EdgeGadget k = gadget_path.empty() ? family_gadget(family, n_param)
                                           : load_gadget(gadget_path);
        EmbeddedGraph out = replace_edges(eg, k);
        return graph_to_json(out.graph, out.rotation);
      }
      if (kind == "ring") {
        EmbeddedGraph out = ring_transform(eg, ring_m, ring_n);
        return graph_to_json(out.graph, out.rotation);
      }
      throw_precondition("transform kind must be replace|ring");
    };
  });

  auto* c_reduce = app.add_subcommand(
      "reduce", "interpolation reductions with replayable transcripts");
  c_reduce->add_option("construction", construction,
                       "thicken|loop|stretch|bridge")
      ->required();
  c_reduce->add_option("-m,--matrix", matrix_path)->required();
  c_reduce->add_option("-g,--graph", graph_path)->required();
  c_reduce->add_option("-z,--z", z_csv, "comma-separated rational parameters");
  c_reduce->add_option("-n,--n", n_param, "integer parameter (stretch|bridge)");
  c_reduce->add_option("--theta", theta, "real parameter (floating mode only)");
  c_reduce->add_flag("--float", use_float,
                     "opt into the approximate floating mode");
  c_reduce->callback([&] {
    runner = [&]() -> json {
      WeightMatrix m = load_matrix(matrix_path);
      MultiGraph g = load_graph(graph_path).first;
      EvalOptions opt = global_options();
      ZOracle oracle = [&m, &opt](const MultiGraph& h) {
        return eval_bruteforce(m, h, opt);
      };
      if (construction == "thicken" || construction == "loop") {
        std::vector<Rat> z = parse_z(z_csv);
        ReduceOutput out = construction == "thicken"
                               ? thicken_reduce(m, g, z, oracle)
                               : loop_reduce(m, g, z, oracle);
        json j = transcript_to_json(out.transcript);
        j["value"] = rat_to_string(out.value);
        return j;
      }
      if (construction == "stretch" || construction == "bridge") {
        if (use_float) {
          double v = construction == "stretch"
                         ? stretch_reduce_float(m, g, theta, true, opt)
                         : bridge_reduce_float(m, g, theta, true, opt);
          return json{{"construction", construction},
                      {"theta", theta},
                      {"value", v},
                      {"exact", false}};
        }
        Rat v = construction == "stretch" ? stretch_reduce(m, g, n_param, opt)
                                          : bridge_reduce(m, g, n_param, opt);
        return json{{"construction", construction},
                    {"n", n_param},
                    {"value", rat_to_string(v)}};
      }
      throw_precondition("reduce construction must be thicken|loop|stretch|bridge");
    };
  });

  auto* c_classify =
      app.add_subcommand("classify", "tractable/#P-hard dichotomy verdict");
  c_classify->add_option("-m,--matrix", matrix_path)->required();
  c_classify->add_option("--budget-depth", budget_depth);
  c_classify->add_option("--budget-bits", budget_bits);
  c_classify->add_option("--budget-states", budget_states);
  c_classify->add_flag("--require-decided", require_decided,
                       "exit 4 when the verdict is UNKNOWN");
  c_classify->callback([&] {
    runner = [&]() -> json {
      SeparatorBudget budget{budget_depth, budget_bits, budget_states};
      Verdict v = classify_general(load_matrix(matrix_path), budget);
      if (require_decided && v.outcome == Outcome::Unknown) exit_unknown = 4;
      return verdict_to_json(v);
    };
  });

  auto* c_orbits =
      app.add_subcommand("orbits", "orbits of the automorphism group of M");
  c_orbits->add_option("-m,--matrix", matrix_path)->required();
  c_orbits->callback([&] {
    runner = [&]() -> json {
      return orbits_to_json(aut_orbits(load_matrix(matrix_path)));
    };
  });

  auto* c_separate = app.add_subcommand(
      "separate", "search for a planar gadget separating diagonal entries");
  c_separate->add_option("-m,--matrix", matrix_path)->required();
  c_separate->add_option("-i", sep_i)->required();
  c_separate->add_option("-j", sep_j)->required();
  c_separate->add_option("--budget-depth", budget_depth);
  c_separate->add_option("--budget-bits", budget_bits);
  c_separate->add_option("--budget-states", budget_states);
  c_separate->add_flag("--require-decided", require_decided,
                       "exit 4 when the search is UNKNOWN");
  c_separate->callback([&] {
    runner = [&]() -> json {
      SeparatorBudget budget{budget_depth, budget_bits, budget_states};
      SeparatorResult r =
          find_separator(load_matrix(matrix_path), sep_i, sep_j, budget);
      if (require_decided && r.status == SeparatorStatus::Unknown)
        exit_unknown = 4;
      return separator_to_json(r);
    };
  });

  auto* c_pred = app.add_subcommand(
      "predicates", "distinctness predicates, rank, definiteness, aleph");
  c_pred->add_option("-m,--matrix", matrix_path)->required();
  c_pred->callback([&] {
    runner = [&]() -> json {
      return predicates_to_json(predicates(load_matrix(matrix_path)));
    };
  });

  CLI11_PARSE(app, argc, argv);

  try {
    json out = runner();
    std::cout << out.dump(2) << "\n";
    return exit_unknown;
  } catch (const Error& e) {
    const char* kind_name = "internal";
    int code = 1;
    switch (e.kind()) {
      case ErrorKind::Precondition:
        kind_name = "precondition";
        code = 2;
        break;
      case ErrorKind::Budget:
        kind_name = "budget";
        code = 3;
        break;
      case ErrorKind::Parse:
        kind_name = "parse";
        code = 2;
        break;
      case ErrorKind::Internal:
        kind_name = "internal";
        code = 1;
        break;
    }
    std::cerr << "homkit: " << kind_name << ": " << e.what() << "\n";
    return code;
  } catch (const std::exception& e) {
    std::cerr << "homkit: internal: " << e.what() << "\n";
    return 1;
  }
}
