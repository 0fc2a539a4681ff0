#include "nearopt/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace nearopt {

using nlohmann::json;

int LinearProgram::variable_index(const std::string& var_name) const {
  for (int i = 0; i < num_vars(); ++i)
    if (variables[i].name == var_name) return i;
  return -1;
}

double LinearProgram::objective_coeff(int var) const {
  for (const auto& [i, c] : objective)
    if (i == var) return c;
  return 0.0;
}

namespace {

void prune_and_check_row(SparseRow& row, int n_vars, const char* kind,
                         const std::string& model_name) {
  std::vector<std::pair<int, double>> kept;
  std::set<int> seen;
  for (auto& [i, c] : row.coeffs) {
    if (i < 0 || i >= n_vars)
      throw InputError("model '" + model_name + "': " + kind + " row '" +
                       row.name + "' references variable index out of range");
    if (!seen.insert(i).second)
      throw InputError("model '" + model_name + "': " + kind + " row '" +
                       row.name + "' has a duplicate coefficient");
    if (std::abs(c) > kCoeffZeroTol) kept.emplace_back(i, c);
  }
  std::sort(kept.begin(), kept.end());
  row.coeffs = std::move(kept);
  if (row.coeffs.empty())
    throw InputError("model '" + model_name + "': " + kind + " row '" +
                     row.name + "' is empty after pruning");
}

}  // namespace

void LinearProgram::validate_and_normalize() {
  std::set<std::string> names;
  for (const auto& v : variables) {
    if (v.name.empty()) throw InputError("model '" + name + "': unnamed variable");
    if (v.name.find_first_of(",\n\r") != std::string::npos)
      throw InputError("model '" + name + "': variable name '" + v.name +
                       "' contains a CSV delimiter");
    if (!names.insert(v.name).second)
      throw InputError("model '" + name + "': duplicate variable '" + v.name + "'");
    if (v.lower > v.upper)
      throw InputError("model '" + name + "': variable '" + v.name +
                       "' has lower > upper bound");
  }
  std::vector<std::pair<int, double>> obj;
  std::set<int> seen;
  for (auto& [i, c] : objective) {
    if (i < 0 || i >= num_vars())
      throw InputError("model '" + name + "': objective references unknown variable");
    if (!seen.insert(i).second)
      throw InputError("model '" + name + "': duplicate objective coefficient");
    if (std::abs(c) > kCoeffZeroTol) obj.emplace_back(i, c);
  }
  std::sort(obj.begin(), obj.end());
  objective = std::move(obj);
  for (auto& r : inequalities) prune_and_check_row(r, num_vars(), "inequality", name);
  for (auto& r : equalities) prune_and_check_row(r, num_vars(), "equality", name);
}

bool models_equal(const LinearProgram& a, const LinearProgram& b) {
  auto rows_equal = [](const std::vector<SparseRow>& x, const std::vector<SparseRow>& y) {
    if (x.size() != y.size()) return false;
    for (size_t i = 0; i < x.size(); ++i) {
      if (x[i].name != y[i].name || x[i].rhs != y[i].rhs ||
          x[i].coeffs != y[i].coeffs)
        return false;
    }
    return true;
  };
  if (a.name != b.name || a.variables.size() != b.variables.size()) return false;
  for (size_t i = 0; i < a.variables.size(); ++i) {
    const auto& u = a.variables[i];
    const auto& v = b.variables[i];
    if (u.name != v.name || u.lower != v.lower || u.upper != v.upper) return false;
  }
  return a.objective == b.objective && rows_equal(a.inequalities, b.inequalities) &&
         rows_equal(a.equalities, b.equalities);
}

namespace {

double bound_from_json(const json& j, const char* which, const std::string& var) {
  if (j.is_null()) {
    return std::string(which) == "lb" ? -kInf : kInf;
  }
  if (!j.is_number())
    throw InputError("variable '" + var + "': " + which + " must be a number or null");
  return j.get<double>();
}

json bound_to_json(double b) {
  if (std::isinf(b)) return nullptr;
  return b;
}

}  // namespace

LinearProgram parse_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("model syntax error at byte " + std::to_string(e.byte) + ": " +
                     e.what());
  }
  LinearProgram m;
  try {
    m.name = doc.value("name", "model");
    if (!doc.contains("vars") || !doc["vars"].is_array())
      throw InputError("model document missing 'vars' array");
    for (const auto& v : doc["vars"]) {
      Variable var;
      var.name = v.at("name").get<std::string>();
      var.lower = bound_from_json(v.value("lb", json(0.0)), "lb", var.name);
      var.upper = bound_from_json(v.value("ub", json()), "ub", var.name);
      m.variables.push_back(var);
    }
    auto resolve = [&](const std::string& n) {
      int i = m.variable_index(n);
      if (i < 0) throw InputError("reference to undeclared variable '" + n + "'");
      return i;
    };
    if (doc.contains("objective")) {
      for (auto it = doc["objective"].begin(); it != doc["objective"].end(); ++it)
        m.objective.emplace_back(resolve(it.key()), it.value().get<double>());
    }
    int auto_row = 0;
    for (const auto& c : doc.value("constraints", json::array())) {
      SparseRow row;
      row.name = c.value("name", "row" + std::to_string(auto_row));
      ++auto_row;
      const std::string sense = c.at("sense").get<std::string>();
      row.rhs = c.at("rhs").get<double>();
      for (auto it = c.at("coeffs").begin(); it != c.at("coeffs").end(); ++it)
        row.coeffs.emplace_back(resolve(it.key()), it.value().get<double>());
      if (sense == "<=") {
        m.inequalities.push_back(std::move(row));
      } else if (sense == ">=") {
        for (auto& [i, v] : row.coeffs) v = -v;
        row.rhs = -row.rhs;
        m.inequalities.push_back(std::move(row));
      } else if (sense == "=") {
        m.equalities.push_back(std::move(row));
      } else {
        throw InputError("constraint '" + row.name + "': unknown sense '" + sense + "'");
      }
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("model document: ") + e.what());
  }
  m.validate_and_normalize();
  return m;
}

std::string serialize_model(const LinearProgram& m) {
  json doc;
  doc["name"] = m.name;
  doc["vars"] = json::array();
  for (const auto& v : m.variables)
    doc["vars"].push_back({{"name", v.name}, {"lb", bound_to_json(v.lower)},
                           {"ub", bound_to_json(v.upper)}});
  json obj = json::object();
  for (const auto& [i, c] : m.objective) obj[m.variables[i].name] = c;
  doc["objective"] = obj;
  doc["constraints"] = json::array();
  auto emit = [&](const SparseRow& r, const char* sense) {
    json coeffs = json::object();
    for (const auto& [i, c] : r.coeffs) coeffs[m.variables[i].name] = c;
    doc["constraints"].push_back(
        {{"name", r.name}, {"coeffs", coeffs}, {"sense", sense}, {"rhs", r.rhs}});
  };
  for (const auto& r : m.inequalities) emit(r, "<=");
  for (const auto& r : m.equalities) emit(r, "=");
  return doc.dump(2) + "\n";
}

ExplorationSpec parse_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("spec syntax error at byte " + std::to_string(e.byte) + ": " +
                     e.what());
  }
  ExplorationSpec s;
  try {
    if (doc.contains("explore")) {
      for (const auto& n : doc["explore"]) s.explore.push_back(n.get<std::string>());
    }
    if (doc.contains("projection")) {
      for (const auto& t : doc["projection"]) {
        s.projection.push_back({t.at("row").get<int>(),
                                t.at("var").get<std::string>(),
                                t.at("coeff").get<double>()});
      }
    }
    if (s.explore.empty() && s.projection.empty())
      throw InputError("spec needs 'explore' or 'projection'");
    if (!s.explore.empty() && !s.projection.empty())
      throw InputError("spec must not set both 'explore' and 'projection'");
    s.epsilon = doc.at("epsilon").get<double>();
    if (s.epsilon < 0) throw InputError("spec: epsilon must be nonnegative");
    if (doc.contains("epsilon_abs")) s.epsilon_abs = doc["epsilon_abs"].get<double>();
    s.tolerance = doc.value("tolerance", 1e-2);
    if (s.tolerance <= 0) throw InputError("spec: tolerance must be positive");
  } catch (const json::exception& e) {
    throw InputError(std::string("spec document: ") + e.what());
  }
  return s;
}

std::string serialize_spec(const ExplorationSpec& s) {
  json doc;
  if (!s.explore.empty()) doc["explore"] = s.explore;
  if (!s.projection.empty()) {
    json arr = json::array();
    for (const auto& e : s.projection)
      arr.push_back({{"row", e.row}, {"var", e.var}, {"coeff", e.coeff}});
    doc["projection"] = arr;
  }
  doc["epsilon"] = s.epsilon;
  if (s.epsilon_abs) doc["epsilon_abs"] = *s.epsilon_abs;
  doc["tolerance"] = s.tolerance;
  return doc.dump(2) + "\n";
}

std::vector<ProjectionRow> resolve_projection(const LinearProgram& m,
                                              const ExplorationSpec& s) {
  std::vector<ProjectionRow> rows;
  if (!s.explore.empty()) {
    std::set<std::string> seen;
    for (const auto& n : s.explore) {
      if (!seen.insert(n).second)
        throw InputError("spec explores variable '" + n + "' twice");
      int i = m.variable_index(n);
      if (i < 0) throw InputError("spec explores undeclared variable '" + n + "'");
      rows.push_back({n, {{i, 1.0}}});
    }
    return rows;
  }
  std::map<int, ProjectionRow> by_row;
  for (const auto& e : s.projection) {
    if (e.row < 0) throw InputError("projection row index must be nonnegative");
    int i = m.variable_index(e.var);
    if (i < 0)
      throw InputError("projection references undeclared variable '" + e.var + "'");
    auto& pr = by_row[e.row];
    pr.label = "z" + std::to_string(e.row);
    pr.coeffs.emplace_back(i, e.coeff);
  }
  for (auto& [r, pr] : by_row) {
    if (pr.coeffs.empty()) throw InputError("projection row with no coefficients");
    std::sort(pr.coeffs.begin(), pr.coeffs.end());
    rows.push_back(std::move(pr));
  }
  // Linear independence of the projection rows.
  {
    const int nz = static_cast<int>(rows.size());
    std::vector<std::vector<double>> dense(nz, std::vector<double>(m.num_vars(), 0.0));
    for (int r = 0; r < nz; ++r)
      for (auto& [i, c] : rows[r].coeffs) dense[r][i] = c;
    // Gaussian elimination rank check
    int rank = 0;
    for (int col = 0; col < m.num_vars() && rank < nz; ++col) {
      int piv = -1;
      double best = 1e-12;
      for (int r = rank; r < nz; ++r)
        if (std::abs(dense[r][col]) > best) { best = std::abs(dense[r][col]); piv = r; }
      if (piv < 0) continue;
      std::swap(dense[rank], dense[piv]);
      for (int r = 0; r < nz; ++r) {
        if (r == rank) continue;
        double f = dense[r][col] / dense[rank][col];
        if (f == 0.0) continue;
        for (int c2 = col; c2 < m.num_vars(); ++c2) dense[r][c2] -= f * dense[rank][c2];
      }
      ++rank;
    }
    if (rank < nz) throw InputError("projection rows are linearly dependent");
  }
  return rows;
}

std::pair<std::vector<double>, std::vector<double>> derive_z_bounds(
    const LinearProgram& m, const std::vector<ProjectionRow>& projection) {
  std::vector<double> lo, hi;
  for (const auto& row : projection) {
    double l = 0.0, h = 0.0;
    for (const auto& [i, c] : row.coeffs) {
      const auto& v = m.variables[i];
      if (c > 0) {
        l += c * v.lower;
        h += c * v.upper;
      } else {
        l += c * v.upper;
        h += c * v.lower;
      }
    }
    lo.push_back(l);
    hi.push_back(h);
  }
  return {lo, hi};
}

double near_optimal_budget(double v_star, const ExplorationSpec& s) {
  if (v_star > 0) return v_star * (1.0 + s.epsilon);
  if (!s.epsilon_abs)
    throw InputError(
        "optimal value is nonpositive; the relative budget degenerates, supply "
        "epsilon_abs");
  return v_star + *s.epsilon_abs;
}

ExplorationProblem build_exploration(const LinearProgram& m,
                                     const ExplorationSpec& s, double v_star) {
  ExplorationProblem p;
  p.model = m;
  p.spec = s;
  p.projection = resolve_projection(m, s);
  for (const auto& r : p.projection) p.z_names.push_back(r.label);
  p.v_star = v_star;
  p.budget = near_optimal_budget(v_star, s);
  std::tie(p.z_lower, p.z_upper) = derive_z_bounds(m, p.projection);
  return p;
}

std::vector<double> ExplorationProblem::project(const std::vector<double>& x) const {
  std::vector<double> z(projection.size(), 0.0);
  for (size_t r = 0; r < projection.size(); ++r)
    for (const auto& [i, c] : projection[r].coeffs) z[r] += c * x[i];
  return z;
}

}  // namespace nearopt
