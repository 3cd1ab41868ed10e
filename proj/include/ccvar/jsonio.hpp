#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "ccvar/homotopy.hpp"
#include "ccvar/indexing.hpp"
#include "nlohmann/json.hpp"

namespace ccvar {

/// Coefficient vectors travel as JSON maps {"[1,2,4]": [re, im], ...} keyed by
/// the sorted 1-based orbital set. Entries absent from the map are zero.
nlohmann::json coefficient_vector_to_json(const IndexTable& table, const Eigen::VectorXcd& values);
Eigen::VectorXcd coefficient_vector_from_json(const IndexTable& table, const nlohmann::json& j);

nlohmann::json orbital_set_to_json(OrbitalMask set);

nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_json(const nlohmann::json& j);

/// Serializes a solution as separate z and lambda records. When
/// `lambda_override` is set (traditional formulation, where the energy is not
/// an unknown), the whole vector is z and lambda comes from the override.
nlohmann::json solution_to_json(const Solution& sol, const Complex* lambda_override = nullptr);
nlohmann::json solution_set_to_json(const SolutionSet& set,
                                    const std::vector<Complex>* lambda_overrides = nullptr);
/// `lambda_is_unknown`: append the serialized lambda back onto z (rank
/// formulation layout).
SolutionSet solution_set_from_json(const nlohmann::json& j, bool lambda_is_unknown = true);

std::uint64_t hash_file(const std::string& path);
std::string hash_string(std::uint64_t h);

/// Validator for the subset of JSON Schema the shipped schemas use
/// (type/properties/required/items/enum/patternProperties). Returns
/// human-readable violations, empty when the document conforms.
std::vector<std::string> validate_schema(const nlohmann::json& schema, const nlohmann::json& value);

}  // namespace ccvar
