#pragma once

#include <string>

#include "json.hpp"

#include "crg/model/cascade.hpp"

namespace crg::model {

// Model files are JSON with an explicit schema marker:
//
//   {
//     "schema": "cascade-model/1",
//     "subsystems": [
//       {
//         "A": [[...], ...],  "B": [[...], ...],
//         "C": [[...], ...],  "E": [[...], ...],
//         "coupling": { "<j>": [[...], ...], ... },
//         "X": { "F": [[...], ...], "g": [...] },
//         "U": { ... },  "W": { ... }
//       },
//       ...
//     ]
//   }
//
// Matrices are row-by-row nested arrays; constraint polytopes are given as
// half-space descriptions F x <= g; topology edges are implied by the
// "coupling" keys (upstream neighbor index, 0-based).  Loading derives the
// topology and validates it, throwing with the full violation list if the
// file describes an inconsistent cascade.
nlohmann::json cascade_model_to_json(const CascadeModel& model);
CascadeModel cascade_model_from_json(const nlohmann::json& j);

void save_cascade_model(const std::string& path, const CascadeModel& model);
CascadeModel load_cascade_model(const std::string& path);

// Shared helpers for other JSON-backed formats in this project.
nlohmann::json matrix_to_json(const Eigen::MatrixXd& M);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, const std::string& what);
nlohmann::json polytope_to_json(const geometry::Polytope& P);
geometry::Polytope polytope_from_json(const nlohmann::json& j, const std::string& what);

}  // namespace crg::model
