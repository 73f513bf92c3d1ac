#pragma once

#include <complex>

#include <Eigen/Dense>

namespace metasymp {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;

double max_abs(const Mat& X);

/// Symmetric part ½(X + Xᵀ).
Mat sym_part(const Mat& X);

/// σ_min(X) / max(1, σ_max(X)): how far X is from singular, independent of
/// its scale once that exceeds 1.
double singularity_margin(const Mat& X);

/// Every "det ≠ 0" precondition: det nonzero and singularity_margin above
/// tol::det. A bound on |det| alone misjudges squeezed symplectic matrices,
/// whose singular values come in pairs σ, 1/σ.
bool det_clears(double det, const Mat& X);

/// Number of singular values above rel_tol · σ_max.
int numerical_rank(const Mat& X, double rel_tol = 1e-9);

}  // namespace metasymp
