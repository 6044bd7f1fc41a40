#include "qslab/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "qslab/errors.hpp"

namespace qslab {

using nlohmann::json;

namespace {

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json reals(const RealVector& v) {
  json a = json::array();
  for (double x : v) a.push_back(finite_or_null(x));
  return a;
}

json real_matrix(const std::vector<RealVector>& m) {
  json a = json::array();
  for (const auto& row : m) a.push_back(reals(row));
  return a;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ArgumentError("matrix: expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != cols)
      throw ArgumentError("matrix: ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& e = j[i][c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw ArgumentError("matrix: entries must be [re, im] pairs");
      m(i, c) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

json to_json(const ConditionReport& r) {
  json out = json::object();
  out["tolerance"] = r.tolerance;
  out["passed"] = r.all_passed();
  json items = json::array();
  for (const auto& c : r.results)
    items.push_back({{"condition", c.condition.name()}, {"residual", finite_or_null(c.residual)}, {"passed", c.passed}});
  out["conditions"] = std::move(items);
  return out;
}

json to_json(const KStructure& s) {
  json kind = json::array();
  for (const auto& c : s.kind.conditions) kind.push_back(c.name());
  json ops = json::array();
  for (const auto& a : s.ops) ops.push_back(matrix_to_json(a.matrix()));
  json out = {{"labels", s.labels},
              {"kind", kind},
              {"tolerance", s.kind.tolerance},
              {"state_dependent", s.state_dependent},
              {"operators", std::move(ops)}};
  if (!s.groups.empty()) out["groups"] = s.groups;
  if (s.state_hash) out["state_hash"] = *s.state_hash;
  if (s.frame) {
    out["frame"] = {{"factor_dims", s.frame->factor_dims()}, {"iso", matrix_to_json(s.frame->iso().matrix())}};
  }
  return out;
}

namespace {

Condition parse_condition(const std::string& name) {
  const auto open = name.find('(');
  if (open == std::string::npos) return Condition{condition_tag_from_string(name)};
  const auto close = name.find(')', open);
  if (close == std::string::npos) throw ArgumentError("kstructure: malformed condition '" + name + "'");
  return Condition{condition_tag_from_string(name.substr(0, open)), std::stoi(name.substr(open + 1, close - open - 1))};
}

}  // namespace

KStructure kstructure_from_json(const json& j) {
  KStructure s;
  s.labels = j.at("labels").get<std::vector<std::string>>();
  for (const auto& c : j.at("kind")) s.kind.conditions.push_back(parse_condition(c.get<std::string>()));
  s.kind.tolerance = j.at("tolerance").get<double>();
  s.state_dependent = j.value("state_dependent", false);
  for (const auto& m : j.at("operators")) s.ops.emplace_back(matrix_from_json(m), 1e-9);
  if (j.contains("groups")) s.groups = j.at("groups").get<std::vector<int>>();
  if (j.contains("state_hash")) s.state_hash = j.at("state_hash").get<std::uint64_t>();
  if (j.contains("frame"))
    s.frame = Tps(j.at("frame").at("factor_dims").get<std::vector<int>>(),
                  UnitaryOp(matrix_from_json(j.at("frame").at("iso"))));
  if (s.labels.size() != s.ops.size()) throw ArgumentError("kstructure: labels and operators differ in length");
  return s;
}

json to_json(const Certificate& c, bool full) {
  json kind = json::array();
  for (const auto& cond : c.structure_kind) kind.push_back(cond.name());
  json out = {{"model", c.model_id},
              {"kind", std::move(kind)},
              {"witness_class", c.witness_class.to_string()},
              {"gap", finite_or_null(c.max_invariant_gap)},
              {"tolerance", c.tolerance},
              {"verdict", to_string(c.verdict)},
              {"invariants", {{"original", reals(c.invariant_original)}, {"rival", reals(c.invariant_rival)}}},
              {"kind_check", {{"original", to_json(c.kind_check_original)}, {"rival", to_json(c.kind_check_rival)}}}};
  if (!c.note.empty()) out["note"] = c.note;
  if (full && c.witness) out["witness"] = matrix_to_json(c.witness->matrix());
  return out;
}

json to_json(const ErgodicityReport& r) {
  return {{"degenerate", r.degenerate},
          {"min_gap", finite_or_null(r.min_gap)},
          {"relations", r.relations_found},
          {"coefficient_bound", r.coefficient_bound},
          {"tolerance", r.tolerance},
          {"eigenvalues", reals(r.eigenvalues)},
          {"verdict", to_string(r.verdict)}};
}

json to_json(const SpaceGraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges) edges.push_back({{"a", e.a}, {"b", e.b}, {"weight", e.weight}});
  json verts = json::array();
  for (int v = 0; v < g.vertices; ++v) verts.push_back(v);
  return {{"vertices", std::move(verts)},
          {"edges", std::move(edges)},
          {"mi_matrix", real_matrix(g.mi_matrix)},
          {"dist_matrix", real_matrix(g.dist_matrix)},
          {"i_max", g.i_max},
          {"mi_floor", g.mi_floor},
          {"distance_monotone", g.distance_monotone()}};
}

json to_json(const DecoherenceTrace& t) {
  return {{"times", reals(t.times)},
          {"offdiag", reals(t.offdiag)},
          {"oracle", reals(t.oracle)},
          {"max_dev", t.max_dev}};
}

std::string to_dot(const SpaceGraph& g, const std::string& name) {
  std::ostringstream os;
  os << "graph " << name << " {\n";
  for (int v = 0; v < g.vertices; ++v) os << "  " << v << ";\n";
  for (const auto& e : g.edges) os << "  " << e.a << " -- " << e.b << " [label=\"" << fmt(e.weight) << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string to_csv(const DecoherenceTrace& t) {
  std::ostringstream os;
  os << "t,offdiag,oracle\n";
  for (std::size_t i = 0; i < t.times.size(); ++i)
    os << fmt(t.times[i]) << ',' << fmt(t.offdiag[i]) << ',' << fmt(t.oracle[i]) << '\n';
  return os.str();
}

}  // namespace qslab
