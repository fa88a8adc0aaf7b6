#include "crg/geometry/serialization.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace crg::geometry {
namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string to_text(const Polytope& P) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < P.F.rows(); ++i) {
    for (Eigen::Index j = 0; j < P.F.cols(); ++j) {
      out << format_double(P.F(i, j)) << ' ';
    }
    out << format_double(P.g(i)) << '\n';
  }
  return out.str();
}

Polytope from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  size_t width = 0;
  while (std::getline(in, line)) {
    const size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::vector<double> row;
    std::string token;
    while (ls >> token) {
      size_t consumed = 0;
      double value = 0.0;
      try {
        value = std::stod(token, &consumed);
      } catch (const std::exception&) {
        throw std::runtime_error("from_text(): unparsable token '" + token + "'");
      }
      if (consumed != token.size()) {
        throw std::runtime_error("from_text(): unparsable token '" + token + "'");
      }
      row.push_back(value);
    }
    if (row.size() < 2) {
      throw std::runtime_error("from_text(): row needs coefficients and offset");
    }
    if (width == 0) {
      width = row.size();
    } else if (row.size() != width) {
      throw std::runtime_error("from_text(): ragged rows");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw std::runtime_error("from_text(): no rows");
  }
  const Eigen::Index m = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index n = static_cast<Eigen::Index>(width) - 1;
  Eigen::MatrixXd F(m, n);
  Eigen::VectorXd g(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      F(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
    g(i) = rows[static_cast<size_t>(i)][width - 1];
  }
  return make_polytope(F, g);
}

}  // namespace crg::geometry
