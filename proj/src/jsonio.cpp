#include "ccvar/jsonio.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ccvar/hash.hpp"

namespace ccvar {

nlohmann::json orbital_set_to_json(OrbitalMask set) {
  nlohmann::json arr = nlohmann::json::array();
  for (int v : mask_members(set)) arr.push_back(v);
  return arr;
}

nlohmann::json coefficient_vector_to_json(const IndexTable& table, const Eigen::VectorXcd& values) {
  if (values.size() != table.size()) throw InvalidInput("coefficient vector length does not match C(n,d)");
  nlohmann::json j = nlohmann::json::object();
  for (int i = 0; i < table.size(); ++i) {
    Complex c = values[i];
    if (c == Complex(0, 0)) continue;
    j[orbital_set_to_json(table.set_at(i)).dump()] = {c.real(), c.imag()};
  }
  return j;
}

Eigen::VectorXcd coefficient_vector_from_json(const IndexTable& table, const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidInput("coefficient vector must be a JSON object");
  Eigen::VectorXcd values = Eigen::VectorXcd::Zero(table.size());
  for (const auto& [key, cell] : j.items()) {
    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(key);
    } catch (const nlohmann::json::exception&) {
      throw InvalidInput("coefficient key is not an index array: " + key);
    }
    if (!parsed.is_array()) throw InvalidInput("coefficient key is not an index array: " + key);
    std::vector<int> members;
    for (const auto& m : parsed) members.push_back(m.get<int>());
    int index = table.index_of(mask_from_members(members));
    if (cell.is_number()) {
      values[index] = Complex(cell.get<double>(), 0);
    } else if (cell.is_array() && cell.size() == 2) {
      values[index] = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
    } else {
      throw InvalidInput("coefficient value must be a number or [re, im]: " + key);
    }
  }
  return values;
}

namespace {

nlohmann::json complex_to_json(const Complex& c) { return {c.real(), c.imag()}; }

Complex complex_from_json(const nlohmann::json& j) {
  return Complex(j.at(0).get<double>(), j.at(1).get<double>());
}

}  // namespace

nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXcd matrix_from_json(const nlohmann::json& j) {
  Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = rows == 0 ? 0 : static_cast<Eigen::Index>(j.at(0).size());
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(j.at(i).at(k));
  return m;
}

nlohmann::json solution_to_json(const Solution& sol, const Complex* lambda_override) {
  nlohmann::json j;
  nlohmann::json z = nlohmann::json::array();
  Eigen::Index zlen = lambda_override != nullptr ? sol.y.size() : sol.y.size() - 1;
  for (Eigen::Index i = 0; i < zlen; ++i) z.push_back(complex_to_json(sol.y[i]));
  j["z"] = std::move(z);
  j["lambda"] = complex_to_json(lambda_override != nullptr ? *lambda_override : sol.y[sol.y.size() - 1]);
  j["residual"] = sol.residual;
  j["condition"] = sol.condition;
  j["class"] = to_string(sol.cls);
  j["real"] = sol.is_real;
  return j;
}

nlohmann::json solution_set_to_json(const SolutionSet& set,
                                    const std::vector<Complex>* lambda_overrides) {
  nlohmann::json j;
  nlohmann::json sols = nlohmann::json::array();
  for (std::size_t i = 0; i < set.solutions.size(); ++i)
    sols.push_back(solution_to_json(set.solutions[i],
                                    lambda_overrides != nullptr ? &(*lambda_overrides)[i] : nullptr));
  j["solutions"] = std::move(sols);
  j["meta"] = {{"seed", set.seed},
               {"loops", set.loops},
               {"quiet_loops", set.quiet_loops},
               {"stabilized", set.stabilized},
               {"stop_rule", set.stop_rule},
               {"failed_paths", set.failed_paths},
               {"system_hash", hash_string(set.system_hash)}};
  return j;
}

SolutionSet solution_set_from_json(const nlohmann::json& j, bool lambda_is_unknown) {
  SolutionSet set;
  for (const auto& cell : j.at("solutions")) {
    Solution sol;
    const auto& z = cell.at("z");
    sol.y.resize(z.size() + (lambda_is_unknown ? 1 : 0));
    for (std::size_t i = 0; i < z.size(); ++i) sol.y[static_cast<Eigen::Index>(i)] = complex_from_json(z.at(i));
    if (lambda_is_unknown) sol.y[sol.y.size() - 1] = complex_from_json(cell.at("lambda"));
    sol.residual = cell.at("residual").get<double>();
    sol.condition = cell.at("condition").get<double>();
    sol.is_real = cell.at("real").get<bool>();
    std::string cls = cell.at("class").get<std::string>();
    sol.cls = cls == "nonsingular" ? SolutionClass::Nonsingular
              : cls == "singular"  ? SolutionClass::Singular
                                   : SolutionClass::Failed;
    set.solutions.push_back(std::move(sol));
  }
  const auto& meta = j.at("meta");
  set.seed = meta.at("seed").get<std::uint64_t>();
  set.loops = meta.at("loops").get<int>();
  set.quiet_loops = meta.value("quiet_loops", 0);
  set.stabilized = meta.at("stabilized").get<bool>();
  set.stop_rule = meta.value("stop_rule", "");
  set.failed_paths = meta.value("failed_paths", 0);
  return set;
}

std::uint64_t hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::string data = buffer.str();
  return fnv1a(data.data(), data.size());
}

std::string hash_string(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

bool type_matches(const std::string& type, const nlohmann::json& value) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "number") return value.is_number();
  if (type == "integer") return value.is_number_integer() || value.is_number_unsigned();
  if (type == "boolean") return value.is_boolean();
  if (type == "null") return value.is_null();
  return false;
}

void validate_inner(const nlohmann::json& schema, const nlohmann::json& value,
                    const std::string& where, std::vector<std::string>& errors) {
  if (schema.contains("type")) {
    const auto& t = schema["type"];
    bool ok = t.is_array() ? std::any_of(t.begin(), t.end(),
                                         [&](const nlohmann::json& one) {
                                           return type_matches(one.get<std::string>(), value);
                                         })
                           : type_matches(t.get<std::string>(), value);
    if (!ok) {
      errors.push_back(where + ": expected type " + t.dump());
      return;
    }
  }
  if (schema.contains("enum")) {
    bool ok = false;
    for (const auto& candidate : schema["enum"]) ok = ok || candidate == value;
    if (!ok) errors.push_back(where + ": value not in enum");
  }
  if (value.is_object()) {
    if (schema.contains("required"))
      for (const auto& key : schema["required"])
        if (!value.contains(key.get<std::string>()))
          errors.push_back(where + ": missing required key '" + key.get<std::string>() + "'");
    if (schema.contains("properties"))
      for (const auto& [key, sub] : schema["properties"].items())
        if (value.contains(key)) validate_inner(sub, value.at(key), where + "/" + key, errors);
    if (schema.contains("patternProperties"))
      for (const auto& [pattern, sub] : schema["patternProperties"].items()) {
        (void)pattern;  // single catch-all pattern in the shipped schemas
        for (const auto& [key, item] : value.items()) validate_inner(sub, item, where + "/" + key, errors);
      }
  }
  if (value.is_array() && schema.contains("items"))
    for (std::size_t i = 0; i < value.size(); ++i)
      validate_inner(schema["items"], value.at(i), where + "[" + std::to_string(i) + "]", errors);
}

}  // namespace

std::vector<std::string> validate_schema(const nlohmann::json& schema, const nlohmann::json& value) {
  std::vector<std::string> errors;
  validate_inner(schema, value, "$", errors);
  return errors;
}

}  // namespace ccvar
