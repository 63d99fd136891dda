#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "poslr/problem.hpp"

namespace poslr {

/// Parses a problem document (JSON object with keys A, B, F, H, E, G, s, r,
/// gamma, delta, x0, horizon). Missing disturbance keys give zero-width
/// blocks; a missing x0 defaults to zeros.
Problem load_problem(std::string_view text);
Problem load_problem_file(const std::filesystem::path& path);

/// Serializes with shortest round-trip decimal doubles, so
/// load_problem(save_problem(p)) == p exactly.
std::string save_problem(const Problem& spec);
void save_problem_file(const Problem& spec, const std::filesystem::path& path);

/// Gain documents are {"K": [[...], ...]} with K of size m×n.
Eigen::MatrixXd load_gain(std::string_view text);
Eigen::MatrixXd load_gain_file(const std::filesystem::path& path);
std::string save_gain(const Eigen::MatrixXd& K);

}  // namespace poslr
