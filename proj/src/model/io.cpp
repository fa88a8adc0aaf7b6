#include "crg/model/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace crg::model {

namespace {

constexpr const char* kSchema = "cascade-model/1";

[[noreturn]] void fail(const std::string& fn, const std::string& message) {
  throw std::runtime_error(fn + "(): " + message);
}

}  // namespace

nlohmann::json matrix_to_json(const Eigen::MatrixXd& M) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array() || j.empty())
    fail("matrix_from_json", what + " must be a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty())
    fail("matrix_from_json", what + " rows must be non-empty arrays of numbers");
  const std::size_t cols = j[0].size();
  Eigen::MatrixXd M(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      fail("matrix_from_json", what + " has ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number())
        fail("matrix_from_json", what + " has a non-numeric entry");
      M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
    }
  }
  return M;
}

nlohmann::json polytope_to_json(const geometry::Polytope& P) {
  nlohmann::json j;
  j["F"] = matrix_to_json(P.F);
  nlohmann::json g = nlohmann::json::array();
  for (Eigen::Index r = 0; r < P.g.size(); ++r) g.push_back(P.g(r));
  j["g"] = std::move(g);
  return j;
}

geometry::Polytope polytope_from_json(const nlohmann::json& j, const std::string& what) {
  if (!j.is_object() || !j.contains("F") || !j.contains("g"))
    fail("polytope_from_json", what + " must be an object with \"F\" and \"g\"");
  const Eigen::MatrixXd F = matrix_from_json(j["F"], what + ".F");
  const nlohmann::json& gj = j["g"];
  if (!gj.is_array() || static_cast<Eigen::Index>(gj.size()) != F.rows())
    fail("polytope_from_json", what + ".g must list one offset per row of F");
  Eigen::VectorXd g(F.rows());
  for (Eigen::Index r = 0; r < F.rows(); ++r) {
    if (!gj[r].is_number())
      fail("polytope_from_json", what + ".g has a non-numeric entry");
    g(r) = gj[r].get<double>();
  }
  return geometry::make_polytope(F, g);
}

nlohmann::json cascade_model_to_json(const CascadeModel& model) {
  nlohmann::json j;
  j["schema"] = kSchema;
  nlohmann::json subs = nlohmann::json::array();
  for (const OpenLoopSubsystem& sub : model.subsystems) {
    nlohmann::json s;
    s["A"] = matrix_to_json(sub.A);
    s["B"] = matrix_to_json(sub.B);
    s["C"] = matrix_to_json(sub.C);
    s["E"] = matrix_to_json(sub.E);
    nlohmann::json coupling = nlohmann::json::object();
    for (const auto& [neighbor, A_ij] : sub.A_in)
      coupling[std::to_string(neighbor)] = matrix_to_json(A_ij);
    s["coupling"] = std::move(coupling);
    s["X"] = polytope_to_json(sub.X);
    s["U"] = polytope_to_json(sub.U);
    s["W"] = polytope_to_json(sub.W);
    subs.push_back(std::move(s));
  }
  j["subsystems"] = std::move(subs);
  return j;
}

CascadeModel cascade_model_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail("cascade_model_from_json", "top level must be an object");
  if (!j.contains("schema") || !j["schema"].is_string() ||
      j["schema"].get<std::string>() != kSchema)
    fail("cascade_model_from_json",
         std::string("expected schema \"") + kSchema + "\"");
  if (!j.contains("subsystems") || !j["subsystems"].is_array() || j["subsystems"].empty())
    fail("cascade_model_from_json", "\"subsystems\" must be a non-empty array");

  std::vector<OpenLoopSubsystem> subsystems;
  int index = 0;
  for (const nlohmann::json& s : j["subsystems"]) {
    std::ostringstream tag_stream;
    tag_stream << "subsystems[" << index << "]";
    const std::string tag = tag_stream.str();
    if (!s.is_object()) fail("cascade_model_from_json", tag + " must be an object");
    for (const char* key : {"A", "B", "C", "E", "X", "U", "W"})
      if (!s.contains(key))
        fail("cascade_model_from_json", tag + " is missing \"" + key + "\"");

    OpenLoopSubsystem sub;
    sub.A = matrix_from_json(s["A"], tag + ".A");
    sub.B = matrix_from_json(s["B"], tag + ".B");
    sub.C = matrix_from_json(s["C"], tag + ".C");
    sub.E = matrix_from_json(s["E"], tag + ".E");
    if (s.contains("coupling")) {
      if (!s["coupling"].is_object())
        fail("cascade_model_from_json", tag + ".coupling must map neighbor indices to matrices");
      for (const auto& [key, value] : s["coupling"].items()) {
        std::size_t consumed = 0;
        int neighbor = 0;
        try {
          neighbor = std::stoi(key, &consumed);
        } catch (const std::exception&) {
          consumed = 0;
        }
        if (consumed != key.size())
          fail("cascade_model_from_json",
               tag + ".coupling key \"" + key + "\" is not a subsystem index");
        sub.A_in.emplace(neighbor, matrix_from_json(value, tag + ".coupling[" + key + "]"));
      }
    }
    sub.X = polytope_from_json(s["X"], tag + ".X");
    sub.U = polytope_from_json(s["U"], tag + ".U");
    sub.W = polytope_from_json(s["W"], tag + ".W");
    subsystems.push_back(std::move(sub));
    ++index;
  }

  CascadeModel model = make_cascade_model(std::move(subsystems));
  const TopologyReport report = validate_topology(model);
  if (!report.ok) {
    std::ostringstream os;
    os << "cascade_model_from_json(): the file describes an inconsistent cascade:";
    for (const auto& violation : report.violations) os << "\n  - " << violation;
    throw std::runtime_error(os.str());
  }
  return model;
}

void save_cascade_model(const std::string& path, const CascadeModel& model) {
  std::ofstream out(path);
  if (!out) fail("save_cascade_model", "cannot open " + path + " for writing");
  out << cascade_model_to_json(model).dump(2) << "\n";
  if (!out) fail("save_cascade_model", "write to " + path + " failed");
}

CascadeModel load_cascade_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("load_cascade_model", "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    fail("load_cascade_model", path + " is not valid JSON: " + e.what());
  }
  return cascade_model_from_json(j);
}

}  // namespace crg::model
