#pragma once

namespace poslr::tol {

// Elementwise sign gates on user data.
inline constexpr double metzler = 1e-12;
// Eigenvalue/eigenvector residuals and Hurwitz margin.
inline constexpr double eig = 1e-9;
// Post-hoc gates on computed quantities.
inline constexpr double sol = 1e-7;
// Value-iteration step criterion (relative).
inline constexpr double fixed_point = 1e-10;
// Simplex feasibility and optimality.
inline constexpr double lp = 1e-9;

}  // namespace poslr::tol
