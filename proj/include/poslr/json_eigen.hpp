#pragma once

#include <Eigen/Dense>

#include <json.hpp>

namespace poslr {

inline nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k) + 0.0);  // no "-0.0"
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename Derived>
nlohmann::json vector_to_json(const Eigen::DenseBase<Derived>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace poslr
