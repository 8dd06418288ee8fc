#include "nemem/serialize.hpp"

#include <charconv>
#include <cmath>

namespace nemem {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Json to_json_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

Json to_json(const Eigen::MatrixXd& M) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(to_json_number(M(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {
Json vec_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json_number(v(i)));
  return out;
}
}  // namespace

Json to_json(const DiscreteYoungMeasure& nu) {
  Json out;
  out["barycenter"] = to_json(Eigen::MatrixXd(nu.barycenter()));
  out["atoms"] = Json::array();
  for (const Atom& atom : nu.atoms)
    out["atoms"].push_back({{"weight", atom.weight}, {"matrix", to_json(Eigen::MatrixXd(atom.matrix))}});
  out["tree"] = Json::array();
  for (const Split& s : nu.tree) {
    out["tree"].push_back({{"level", s.level},
                           {"theta", s.theta},
                           {"a", vec_json(s.a)},
                           {"b", vec_json(s.b)},
                           {"magnitude", s.magnitude},
                           {"plus", to_json(Eigen::MatrixXd(s.plus))},
                           {"minus", to_json(Eigen::MatrixXd(s.minus))}});
  }
  return out;
}

Json to_json(const OracleResult& res) {
  Json out;
  out["value"] = to_json_number(res.value);
  out["closed_form"] = to_json_number(res.closed_form);
  out["gap"] = to_json_number(res.gap);
  out["depth_used"] = res.depth_used;
  out["best_measure"] = to_json(res.best_measure);
  return out;
}

Json to_json(const StressState& st) {
  Json out;
  out["region"] = std::string(to_string(st.region));
  out["kind"] = std::string(to_string(st.kind));
  out["principal_values"] = {st.principal_values[0], st.principal_values[1]};
  out["principal_directions"] = {vec_json(st.principal_dirs[0]), vec_json(st.principal_dirs[1])};
  out["sigma"] = to_json(Eigen::MatrixXd(st.sigma));
  return out;
}

Json to_json(const CheckResult& c) {
  Json out;
  out["id"] = c.id;
  out["pass"] = c.pass;
  out["samples"] = c.samples;
  out["worst_violation"] = to_json_number(c.worst_violation);
  out["tolerance"] = c.tolerance;
  out["worst_point"] = c.worst_point;
  return out;
}

Json to_json(const SuiteReport& rep) {
  Json out;
  out["suite"] = rep.suite_name;
  out["pass"] = rep.pass;
  out["samples"] = rep.samples;
  out["worst_violation"] = to_json_number(rep.worst_violation);
  out["tolerance"] = rep.tolerance;
  out["worst_check"] = rep.worst_check;
  out["worst_point"] = rep.worst_point;
  out["checks"] = Json::array();
  for (const CheckResult& c : rep.checks) out["checks"].push_back(to_json(c));
  out["coverage"] = rep.coverage;
  return out;
}

}  // namespace nemem
