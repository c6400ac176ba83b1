#include "homkit/json_io.hpp"

#include "homkit/errors.hpp"

namespace homkit {

json graph_to_json(const MultiGraph& g, const std::optional<RotationSystem>& rot) {
  json j;
  j["n"] = g.n;
  j["edges"] = json::array();
  for (const auto& [u, v] : g.edges) j["edges"].push_back({u, v});
  if (rot) {
    json r = json::object();
    for (int v = 0; v < g.n; ++v) r[std::to_string(v)] = rot->cycles[v];
    j["rotation"] = std::move(r);
  }
  return j;
}

std::pair<MultiGraph, std::optional<RotationSystem>> graph_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
    throw_parse("graph JSON must carry 'n' and 'edges'");
  MultiGraph g;
  g.n = j.at("n").get<int>();
  if (g.n < 0) throw_parse("graph JSON: negative vertex count");
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2)
      throw_parse("graph JSON: each edge must be a pair");
    g.add_edge(e[0].get<int>(), e[1].get<int>());
  }
  std::optional<RotationSystem> rot;
  if (j.contains("rotation") && !j.at("rotation").is_null()) {
    RotationSystem r;
    r.cycles.resize(g.n);
    for (const auto& [key, cyc] : j.at("rotation").items()) {
      int v = std::stoi(key);
      if (v < 0 || v >= g.n) throw_parse("graph JSON: rotation vertex out of range");
      r.cycles[v] = cyc.get<std::vector<int>>();
    }
    validate_rotation(g, r);
    rot = std::move(r);
  }
  return {std::move(g), std::move(rot)};
}

json matrix_to_json(const WeightMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.q(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.q(); ++j) row.push_back(rat_to_string(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return json{{"q", m.q()}, {"entries", std::move(rows)}};
}

WeightMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("q") || !j.contains("entries"))
    throw_parse("matrix JSON must carry 'q' and 'entries'");
  int q = j.at("q").get<int>();
  const json& rows = j.at("entries");
  if (static_cast<int>(rows.size()) != q)
    throw_parse("matrix JSON: row count does not match q");
  std::vector<Rat> entries;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != q)
      throw_parse("matrix JSON: column count does not match q");
    for (const auto& cell : row) {
      if (cell.is_number_integer())
        entries.push_back(Rat(cell.get<long>()));
      else
        entries.push_back(parse_rat(cell.get<std::string>()));
    }
  }
  return WeightMatrix::from_entries(q, std::move(entries));
}

json ratmatrix_to_json(const RatMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows; ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols; ++j) row.push_back(rat_to_string(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json profile_to_json(const CountProfile& p) {
  json counts = json::array();
  for (const auto& [x, c] : p.entries)
    counts.push_back({rat_to_string(x), int_to_string(c)});
  return json{{"counts", std::move(counts)}, {"total", int_to_string(p.total)}};
}

json gadget_to_json(const EdgeGadget& k) {
  json j = graph_to_json(k.graph, k.rotation);
  j["l1"] = k.l1;
  j["l2"] = k.l2;
  j["planar_certified"] = k.planar_certified;
  return j;
}

EdgeGadget gadget_from_json(const json& j) {
  EdgeGadget k;
  auto [g, rot] = graph_from_json(j);
  k.graph = std::move(g);
  k.rotation = std::move(rot);
  if (!j.contains("l1") || !j.contains("l2"))
    throw_parse("gadget JSON must carry 'l1' and 'l2'");
  k.l1 = j.at("l1").get<int>();
  k.l2 = j.at("l2").get<int>();
  if (k.l1 < 0 || k.l1 >= k.graph.n || k.l2 < 0 || k.l2 >= k.graph.n)
    throw_parse("gadget JSON: label out of range");
  certify_planar(k);
  return k;
}

json transcript_to_json(const ReductionTranscript& t) {
  json queries = json::array();
  for (const auto& [g, v] : t.queries)
    queries.push_back({{"graph", graph_to_json(g)}, {"value", rat_to_string(v)}});
  json z = json::array();
  for (const auto& zi : t.z) z.push_back(rat_to_string(zi));
  json nodes = json::array();
  for (const auto& x : t.solve_nodes) nodes.push_back(rat_to_string(x));
  json rhs = json::array();
  for (const auto& x : t.solve_rhs) rhs.push_back(rat_to_string(x));
  json sol = json::array();
  for (const auto& x : t.solve_solution) sol.push_back(rat_to_string(x));
  return json{{"construction", t.construction},
              {"matrix", matrix_to_json(t.base)},
              {"z", std::move(z)},
              {"queries", std::move(queries)},
              {"nodes", std::move(nodes)},
              {"rhs", std::move(rhs)},
              {"solution", std::move(sol)},
              {"result", rat_to_string(t.result)},
              {"scale", rat_to_string(t.scale)}};
}

ReductionTranscript transcript_from_json(const json& j) {
  ReductionTranscript t;
  t.construction = j.at("construction").get<std::string>();
  t.base = matrix_from_json(j.at("matrix"));
  for (const auto& zi : j.at("z")) t.z.push_back(parse_rat(zi.get<std::string>()));
  for (const auto& qj : j.at("queries")) {
    auto [g, rot] = graph_from_json(qj.at("graph"));
    (void)rot;
    t.queries.emplace_back(std::move(g),
                           parse_rat(qj.at("value").get<std::string>()));
  }
  for (const auto& x : j.at("nodes"))
    t.solve_nodes.push_back(parse_rat(x.get<std::string>()));
  for (const auto& x : j.at("rhs"))
    t.solve_rhs.push_back(parse_rat(x.get<std::string>()));
  for (const auto& x : j.at("solution"))
    t.solve_solution.push_back(parse_rat(x.get<std::string>()));
  t.result = parse_rat(j.at("result").get<std::string>());
  t.scale = parse_rat(j.at("scale").get<std::string>());
  return t;
}

json verdict_to_json(const Verdict& v) {
  json j;
  j["outcome"] = outcome_name(v.outcome);
  j["criterion"] = v.criterion;
  if (!v.detail.empty()) j["detail"] = v.detail;
  if (v.evaluator) j["evaluator"] = strategy_name(*v.evaluator);
  if (!v.blocks.empty()) {
    json blocks = json::array();
    for (const auto& b : v.blocks)
      blocks.push_back({{"vertices", b.vertices},
                        {"rank", b.rank},
                        {"bipartite", b.bipartite},
                        {"zero_diagonal", b.zero_diagonal}});
    j["blocks"] = std::move(blocks);
  }
  if (!v.pairs.empty()) {
    json pairs = json::array();
    for (const auto& p : v.pairs)
      pairs.push_back(
          {{"i", p.i}, {"j", p.j}, {"status", separator_status_name(p.status)}});
    j["pairs"] = std::move(pairs);
  }
  return j;
}

json separator_to_json(const SeparatorResult& r) {
  json j;
  j["status"] = separator_status_name(r.status);
  j["states_explored"] = r.states_explored;
  j["depth_reached"] = r.depth_reached;
  if (r.witness) j["witness"] = gadget_to_json(*r.witness);
  if (r.witness_signature)
    j["witness_signature"] = ratmatrix_to_json(*r.witness_signature);
  return j;
}

json orbits_to_json(const OrbitResult& r) {
  json j;
  j["orbits"] = r.orbits;
  j["generators"] = r.generators;
  return j;
}

json predicates_to_json(const PredicateReport& r) {
  json j;
  j["phi_mag"] = rat_to_string(r.phi_mag);
  j["phi_diag"] = rat_to_string(r.phi_diag);
  j["psi_diag"] = rat_to_string(r.psi_diag);
  j["phi_row"] = rat_to_string(r.phi_row);
  j["diagonal_dominant"] = r.diagonal_dominant;
  j["i_close"] = r.i_close;
  j["rank"] = r.rank;
  j["positive_definite"] = r.positive_definite;
  j["full_rank"] = r.full_rank;
  if (r.aleph) {
    j["aleph"] = {{"value", r.aleph->value},
                  {"exact_zero", r.aleph->exact_zero},
                  {"numeric_zero_warning", r.aleph->numeric_zero_warning}};
  } else {
    j["aleph"] = nullptr;
    j["aleph_skipped"] = r.aleph_skip_reason;
  }
  return j;
}

json parse_json(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw_parse(where + ": JSON parse error at byte " + std::to_string(e.byte) +
                ": " + e.what());
  }
}

}  // namespace homkit
