#include "metasymp/linalg.hpp"

#include <algorithm>

#include "metasymp/tolerances.hpp"

namespace metasymp {

double max_abs(const Mat& X) { return X.size() == 0 ? 0.0 : X.cwiseAbs().maxCoeff(); }

Mat sym_part(const Mat& X) { return 0.5 * (X + X.transpose()); }

double singularity_margin(const Mat& X) {
  if (X.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(X);
  const Vec& s = svd.singularValues();
  return s(s.size() - 1) / std::max(1.0, s(0));
}

bool det_clears(double det, const Mat& X) { return det != 0.0 && singularity_margin(X) > tol::det; }

int numerical_rank(const Mat& X, double rel_tol) {
  if (X.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(X);
  const Vec& s = svd.singularValues();
  const double cut = rel_tol * s(0);
  int r = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > cut) ++r;
  return r;
}

}  // namespace metasymp
