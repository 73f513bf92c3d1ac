#include "metasymp/symplectic.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "metasymp/errors.hpp"

namespace metasymp {

namespace {

Mat J_matrix(int n) {
  Mat J = Mat::Zero(2 * n, 2 * n);
  J.topRightCorner(n, n) = Mat::Identity(n, n);
  J.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
  return J;
}

void require_square_even(const Mat& S, const char* what) {
  if (S.rows() != S.cols() || S.rows() == 0 || S.rows() % 2 != 0) {
    std::ostringstream os;
    os << what << ": expected a square matrix of even size, got " << S.rows() << "x" << S.cols();
    throw DimensionError(os.str());
  }
}

double scaled(double tol, const Mat& X) {
  const double s = std::max(1.0, max_abs(X));
  return tol * s * s;
}

IndexMod4 smallest_m(const Mat& L) { return L.determinant() > 0 ? IndexMod4(0) : IndexMod4(1); }

Mat block_matrix(const Mat& A, const Mat& B, const Mat& C, const Mat& D) {
  const auto n = A.rows();
  Mat S(2 * n, 2 * n);
  S << A, B, C, D;
  return S;
}

}  // namespace

double symplectic_residual(const Mat& S) {
  require_square_even(S, "symplectic_residual");
  const Mat J = J_matrix(static_cast<int>(S.rows() / 2));
  return max_abs(S.transpose() * J * S - J);
}

bool is_symplectic(const Mat& S, double tol) { return symplectic_residual(S) <= tol; }

SymplecticMatrix::SymplecticMatrix(Mat entries, double tol) : n_(0) {
  const double r = symplectic_residual(entries);
  if (!(r <= scaled(tol, entries))) {
    std::ostringstream os;
    os << "matrix is not symplectic: |S^T J S - J|_max = " << r;
    throw NotSymplectic(os.str());
  }
  n_ = static_cast<int>(entries.rows() / 2);
  m_ = std::move(entries);
}

SymplecticMatrix::SymplecticMatrix(Mat entries, Unchecked)
    : n_(static_cast<int>(entries.rows() / 2)), m_(std::move(entries)) {}

SymplecticMatrix SymplecticMatrix::identity(int n) {
  if (n < 1) throw DimensionError("n must be positive");
  return SymplecticMatrix(Mat::Identity(2 * n, 2 * n), Unchecked{});
}

SymplecticMatrix SymplecticMatrix::inverse() const {
  const Mat J = J_matrix(n_);
  return SymplecticMatrix(Mat(-J * m_.transpose() * J), Unchecked{});
}

SymplecticMatrix SymplecticMatrix::operator*(const SymplecticMatrix& o) const {
  if (o.n_ != n_) throw DimensionError("product of symplectic matrices of different size");
  return SymplecticMatrix(Mat(m_ * o.m_), Unchecked{});
}

double SymplecticMatrix::det_minus_identity() const {
  return (m_ - Mat::Identity(2 * n_, 2 * n_)).determinant();
}

bool SymplecticMatrix::is_free() const {
  const Mat b = B();
  return det_clears(b.determinant(), b);
}

SymplecticMatrix standard_J(int n) {
  if (n < 1) throw DimensionError("n must be positive");
  return SymplecticMatrix(J_matrix(n));
}

SymplecticMatrix rotation(double theta) {
  Mat S(2, 2);
  S << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  return SymplecticMatrix(S);
}

FreeGenerator::FreeGenerator(Mat P, Mat L, Mat Q, std::optional<IndexMod4> m) : m_(m) {
  const auto n = P.rows();
  if (n == 0 || P.cols() != n || L.rows() != n || L.cols() != n || Q.rows() != n || Q.cols() != n)
    throw DimensionError("generator blocks must be square of equal size");
  if (max_abs(P - P.transpose()) > tol::symplectic * std::max(1.0, max_abs(P)))
    throw InvalidGenerator("P is not symmetric");
  if (max_abs(Q - Q.transpose()) > tol::symplectic * std::max(1.0, max_abs(Q)))
    throw InvalidGenerator("Q is not symmetric");
  const double dL = L.determinant();
  if (!det_clears(dL, L)) throw InvalidGenerator("L is singular");
  if (m && (m->parity() == 0) != (dL > 0))
    throw InvalidGenerator("m must be even when det L > 0 and odd when det L < 0");
  P_ = sym_part(P);
  L_ = std::move(L);
  Q_ = sym_part(Q);
}

FreeGenerator FreeGenerator::with_m(IndexMod4 m) const { return FreeGenerator(P_, L_, Q_, m); }

FreeGenerator FreeGenerator::without_m() const { return FreeGenerator(P_, L_, Q_); }

CayleySymmetric::CayleySymmetric(Mat M) {
  if (M.rows() != M.cols() || M.rows() == 0 || M.rows() % 2 != 0)
    throw DimensionError("Cayley matrix must be square of even size");
  if (max_abs(M - M.transpose()) > 1e-8 * std::max(1.0, max_abs(M)))
    throw SymmetryError("Cayley matrix is not symmetric");
  M_ = sym_part(M);
}

MWDescriptor::MWDescriptor(SymplecticMatrix S, IndexMod4 nu)
    : S_(std::move(S)), nu_(nu), M_(cayley_M(S_)), det_(S_.det_minus_identity()) {}

FreeGenerator generator_from_free(const SymplecticMatrix& S) {
  const Mat B = S.B();
  Eigen::PartialPivLU<Mat> lu(B);
  if (!det_clears(lu.determinant(), B)) throw NotFree("S is not free: det B = 0");
  const Mat Binv = lu.inverse();
  Mat P = S.D() * Binv;
  Mat Q = Binv * S.A();
  return FreeGenerator(sym_part(P), Binv, sym_part(Q), smallest_m(Binv));
}

SymplecticMatrix matrix_from_generator(const FreeGenerator& W) {
  Eigen::PartialPivLU<Mat> lu(W.L());
  const Mat Linv = lu.inverse();
  const Mat LinvQ = Linv * W.Q();
  const Mat PLinv = W.P() * Linv;
  return SymplecticMatrix(block_matrix(LinvQ, Linv, W.P() * LinvQ - W.L().transpose(), PLinv));
}

FreeGenerator generator_inverse(const FreeGenerator& W) {
  if (!W.m()) throw InvalidGenerator("generator_inverse needs the Maslov index m");
  return FreeGenerator(-W.Q(), -W.L().transpose(), -W.P(), IndexMod4(W.n()) - *W.m());
}

namespace {

// (S + I)(S − I)⁻¹ via an LU solve of the transposed system.
Mat cayley_raw(const SymplecticMatrix& S) {
  const int n = S.n();
  const Mat I = Mat::Identity(2 * n, 2 * n);
  const Mat SmI = S.matrix() - I;
  Eigen::PartialPivLU<Mat> lu(SmI.transpose());
  const double d = lu.determinant();
  if (!det_clears(d, SmI)) {
    std::ostringstream os;
    os << "S has eigenvalue 1 (det(S - I) = " << d << ")";
    throw FixedPointError(os.str());
  }
  const Mat X = lu.solve(Mat((S.matrix() + I).transpose())).transpose();
  return 0.5 * J_matrix(n) * X;
}

}  // namespace

CayleySymmetric cayley_M(const SymplecticMatrix& S) { return CayleySymmetric(cayley_raw(S)); }

double cayley_asymmetry(const SymplecticMatrix& S) {
  const Mat X = cayley_raw(S);
  return max_abs(X - X.transpose()) / std::max(1.0, max_abs(X));
}

SymplecticMatrix inverse_cayley(const CayleySymmetric& M) {
  const int n = M.n();
  const Mat halfJ = 0.5 * J_matrix(n);
  const Mat K = M.matrix() - halfJ;
  Eigen::PartialPivLU<Mat> lu(K);
  if (!det_clears(lu.determinant(), K)) throw CayleyDomainError("M - J/2 is singular");
  return SymplecticMatrix(Mat(lu.solve(Mat(M.matrix() + halfJ))), tol::symplectic_property);
}

Mat hessian_Wxx(const FreeGenerator& W) { return W.P() + W.Q() - W.L() - W.L().transpose(); }

double det_S_minus_I(const FreeGenerator& W) {
  const double sign = (W.n() % 2 == 0) ? 1.0 : -1.0;
  return sign * hessian_Wxx(W).determinant() / W.L().determinant();
}

double det_S_minus_I_blocks(const SymplecticMatrix& S) {
  const Mat B = S.B();
  Eigen::PartialPivLU<Mat> lu(B);
  const double dB = lu.determinant();
  if (!det_clears(dB, B)) throw NotFree("S is not free: det B = 0");
  const Mat Binv = lu.inverse();
  const Mat K = Binv * S.A() + S.D() * Binv - Binv - Binv.transpose();
  const double sign = (S.n() % 2 == 0) ? 1.0 : -1.0;
  return sign * dB * K.determinant();
}

double det_S_minus_I_factored(const SymplecticMatrix& S) {
  const int n = S.n();
  const Mat I = Mat::Identity(n, n);
  const Mat B = S.B();
  Eigen::PartialPivLU<Mat> lu(B);
  if (!det_clears(lu.determinant(), B)) throw NotFree("S is not free: det B = 0");
  const Mat schur = S.C() - (S.D() - I) * lu.solve(Mat(S.A() - I));
  return Mat(-B).determinant() * schur.determinant();
}

PairingSides hessian_pairing(const SymplecticMatrix& S, const Vec& p0) {
  const int n = S.n();
  if (p0.size() != n) throw DimensionError("p0 must have n components");
  const FreeGenerator W = generator_from_free(S);
  const Mat Wxx = hessian_Wxx(W);
  Eigen::PartialPivLU<Mat> lu(Wxx);
  if (!det_clears(lu.determinant(), Wxx)) throw DegenerateHessian("W_xx is singular");
  const CayleySymmetric M = cayley_M(S);
  Vec z = Vec::Zero(2 * n);
  z.tail(n) = p0;
  return {z.dot(M.matrix() * z), -p0.dot(lu.solve(p0))};
}

std::array<SymplecticMatrix, 4> free_factorization(const FreeGenerator& W) {
  const int n = W.n();
  const Mat I = Mat::Identity(n, n);
  const Mat Z = Mat::Zero(n, n);
  const Mat Linv = W.L().inverse();
  return {SymplecticMatrix(block_matrix(I, Z, W.P(), I)),
          SymplecticMatrix(block_matrix(Linv, Z, Z, W.L().transpose())), standard_J(n),
          SymplecticMatrix(block_matrix(I, Z, W.Q(), I))};
}

FreePair split_into_free_pair(const SymplecticMatrix& S, const SplitOptions& opts) {
  // Seed generators (aI, I, bI) and the shift sweep. Every S₀ here is free
  // and the left factor S·S₀⁻¹ is free for all but a null set of S.
  static constexpr std::pair<double, double> seeds[] = {
      {0.0, 0.0},  {0.5, 0.0},  {0.0, 0.5},  {-0.5, 0.0}, {0.0, -0.5}, {1.0, 0.3},
      {-1.0, -0.3}, {0.3, 1.0}, {-0.3, -1.0}, {1.5, -0.7}, {-0.7, 1.5}, {2.0, 1.1},
  };
  static constexpr double lambdas[] = {0.0, 0.5, -0.5, 1.0, -1.0, 1.7, -1.7, 2.3, -2.3, 2.9, -2.9};

  const int n = S.n();
  const Mat I = Mat::Identity(n, n);
  std::size_t attempts = 0;
  for (std::size_t s = opts.first_candidate; s < std::size(seeds); ++s) {
    const FreeGenerator W0(seeds[s].first * I, I, seeds[s].second * I);
    const SymplecticMatrix S0 = matrix_from_generator(W0);
    const SymplecticMatrix left = S * S0.inverse();
    if (++attempts > opts.max_attempts) break;
    if (!left.is_free()) continue;
    const FreeGenerator W1 = generator_from_free(left);
    for (double lambda : lambdas) {
      if (lambda != 0.0 && ++attempts > opts.max_attempts) break;
      const FreeGenerator A(W1.P(), W1.L(), W1.Q() - lambda * I);
      const FreeGenerator B(W0.P() + lambda * I, W0.L(), W0.Q());
      const SymplecticMatrix SA = matrix_from_generator(A);
      const SymplecticMatrix SB = matrix_from_generator(B);
      const Mat I2 = Mat::Identity(2 * n, 2 * n);
      const Mat dA = SA.matrix() - I2, dB = SB.matrix() - I2;
      if (!det_clears(dA.determinant(), dA) || !det_clears(dB.determinant(), dB)) continue;
      const double scale = std::max(1.0, max_abs(SA.matrix()) * max_abs(SB.matrix()));
      if (max_abs((SA * SB).matrix() - S.matrix()) > tol::split_product * scale) continue;
      return {A.with_m(smallest_m(A.L())), B.with_m(smallest_m(B.L())), lambda, attempts};
    }
    if (attempts > opts.max_attempts) break;
  }
  throw DecompositionError("no admissible free pair found within the attempt budget");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ (stream * 0xD1B54A32D192ED03ULL));
}

FreeGenerator random_free(int n, std::uint64_t seed) {
  if (n < 1) throw DimensionError("n must be positive");
  std::mt19937_64 rng(splitmix64(seed));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto symmetric = [&] {
    Mat X(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) X(i, j) = X(j, i) = u(rng);
    return X;
  };
  Mat P = symmetric();
  Mat Q = symmetric();
  Mat L;
  do {
    L = Mat::Identity(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) L(i, j) += u(rng);
    if (u(rng) < 0.0) L.row(0) *= -1.0;
  } while (std::abs(L.determinant()) <= 0.1);
  return FreeGenerator(P, L, Q, smallest_m(L));
}

SymplecticMatrix random_symplectic(int n, std::uint64_t seed, int k) {
  if (k < 1) throw DimensionError("k must be positive");
  SymplecticMatrix S = matrix_from_generator(random_free(n, derive_seed(seed, 0)));
  for (int i = 1; i < k; ++i) S = S * matrix_from_generator(random_free(n, derive_seed(seed, i)));
  return S;
}

}  // namespace metasymp
