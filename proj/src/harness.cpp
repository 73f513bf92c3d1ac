#include "metasymp/harness.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>

#include "metasymp/basis.hpp"
#include "metasymp/errors.hpp"
#include "metasymp/fresnel.hpp"
#include "metasymp/index.hpp"
#include "metasymp/io.hpp"
#include "metasymp/twisted.hpp"

namespace metasymp {

using nlohmann::json;

namespace {

constexpr int kMaxDraws = 1000;

class Draws {
 public:
  explicit Draws(std::uint64_t seed) : rng_(splitmix64(seed)) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }
  std::uint64_t seed() { return rng_(); }

 private:
  std::mt19937_64 rng_;
};

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

std::string hex16(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json gaussian_json(const GaussianState& g) {
  return {{"x0", g.x0}, {"p0", g.p0}, {"width", complex_json(g.width)}, {"log_amplitude", complex_json(g.log_amplitude)}};
}

json grid_json(const GridSpec& g) { return {{"x_max", g.x_max}, {"N", g.N}}; }

/// Precondition not met; the trial input is re-drawn.
struct Reject {
  std::string why;
};

struct Outcome {
  json inputs;
  double residual = 0.0;
  bool pass = false;
  std::string note;
};

class Context {
 public:
  Context(const SuiteConfig& cfg, SuiteReport& rep, std::map<std::string, double> defaults)
      : cfg_(cfg), rep_(rep) {
    for (auto& [k, v] : defaults) rep_.tolerances[k] = v;
    for (auto& [k, v] : cfg.tolerances) {
      if (!rep_.tolerances.contains(k)) throw DimensionError("suite " + cfg.suite_name + " has no tolerance '" + k + "'");
      if (!(v > 0.0)) throw DimensionError("tolerances must be positive");
      rep_.tolerances[k] = v;
    }
    if (!(cfg.tol_scale > 0.0)) throw DimensionError("tolerance scale must be positive");
    for (auto& [k, v] : rep_.tolerances) v *= cfg.tol_scale;
  }

  double tol(const std::string& name) const { return rep_.tolerances.at(name); }
  const SuiteConfig& config() const { return cfg_; }

  int trials(int fallback) const {
    const int t = cfg_.trials.value_or(fallback);
    if (t < 1) throw DimensionError("trials must be at least 1");
    return t;
  }

  std::vector<int> n_range(std::vector<int> fallback, int max_n) const {
    std::vector<int> r = cfg_.n_range.empty() ? std::move(fallback) : cfg_.n_range;
    for (int n : r)
      if (n < 1 || n > max_n) {
        std::ostringstream os;
        os << "suite " << cfg_.suite_name << " supports n in 1.." << max_n;
        throw DimensionError(os.str());
      }
    return r;
  }

  /// Runs one trial, re-drawing its input (fresh sub-seed) on Reject.
  void run(int trial, const std::function<Outcome(Draws&)>& body) {
    const std::uint64_t trial_seed = derive_seed(cfg_.seed ^ fnv1a(cfg_.suite_name), static_cast<std::uint64_t>(trial));
    TrialRecord rec;
    rec.trial = trial;
    rec.seed = trial_seed;
    for (int attempt = 0;; ++attempt) {
      if (attempt == kMaxDraws) {
        rec.pass = false;
        rec.residual = std::numeric_limits<double>::infinity();
        rec.note = "no admissible input after " + std::to_string(kMaxDraws) + " draws";
        break;
      }
      Draws d(derive_seed(trial_seed, static_cast<std::uint64_t>(attempt)));
      try {
        Outcome o = body(d);
        rec.inputs = std::move(o.inputs);
        rec.inputs["draw"] = attempt;
        rec.residual = o.residual;
        rec.pass = o.pass && std::isfinite(o.residual);
        rec.note = std::move(o.note);
        break;
      } catch (const Reject&) {
        ++rep_.rejections;
      } catch (const std::exception& e) {
        rec.pass = false;
        rec.residual = std::numeric_limits<double>::infinity();
        rec.note = std::string("error: ") + e.what();
        rec.inputs["draw"] = attempt;
        break;
      }
    }
    rec.inputs["trial_seed"] = std::to_string(trial_seed);
    rec.digest = hex16(fnv1a(rec.inputs.dump()));
    rep_.trials.push_back(std::move(rec));
  }

 private:
  const SuiteConfig& cfg_;
  SuiteReport& rep_;
};

double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0}); }

// Randomized inputs must clear a margin well above tol::det.
void require_margin(const Mat& X, double margin, const char* what) {
  if (singularity_margin(X) <= margin) throw Reject{what};
}

// Re-draws S with S − I close to singular, or |det(S − I)| below a floor.
void require_fixed_point_free(const SymplecticMatrix& S, double margin, double floor = 0.0) {
  const Mat X = S.matrix() - Mat::Identity(2 * S.n(), 2 * S.n());
  if (std::abs(X.determinant()) <= floor || singularity_margin(X) <= margin) throw Reject{"det(S - I) too small"};
}

Mat random_symmetric(Draws& d, int n, double a) {
  Mat X(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) X(i, j) = X(j, i) = d.uniform(-a, a);
  return X;
}

/// Rotation · squeeze · shear with θ ∈ [π/4, 7π/4], |r|, |c| ≤ 0.25.
SymplecticMatrix mild_symplectic(Draws& d) {
  const double theta = d.uniform(0.25 * kPi, 1.75 * kPi);
  const double r = d.uniform(-0.25, 0.25);
  const double c = d.uniform(-0.25, 0.25);
  Mat squeeze(2, 2), shear(2, 2);
  squeeze << std::exp(r), 0.0, 0.0, std::exp(-r);
  shear << 1.0, 0.0, c, 1.0;
  return SymplecticMatrix(Mat(rotation(theta).matrix() * squeeze * shear));
}

GaussianState random_gaussian(Draws& d, double spread) {
  GaussianState g;
  g.x0 = d.uniform(-spread, spread);
  g.p0 = d.uniform(-spread, spread);
  g.width = Complex(d.uniform(0.6, 1.6), d.uniform(-0.4, 0.4));
  g.log_amplitude = 0.0;
  return g.scaled(1.0 / g.norm());
}

GridSpec suite_grid(const Context& ctx, GridSpec fallback) {
  GridSpec g = fallback;
  if (ctx.config().grid_n) g.N = *ctx.config().grid_n;
  if (ctx.config().grid_xmax) g.x_max = *ctx.config().grid_xmax;
  g.validate();
  return g;
}

std::size_t suite_basis(const Context& ctx, std::size_t fallback) {
  const std::size_t b = ctx.config().n_basis.value_or(fallback);
  if (b < 4 || b > 256) throw DimensionError("basis size must lie in [4, 256]");
  return b;
}

// ---------------------------------------------------------------- suites

void suite_lemma1(Context& ctx) {
  const double tol = ctx.tol("lemma1_rel");
  const double tol_pair = ctx.tol("pairing_rel");
  const int per_n = ctx.trials(1000);
  int trial = 0;
  for (int n : ctx.n_range({1, 2, 3, 4}, 8)) {
    for (int t = 0; t < per_n; ++t) {
      ctx.run(trial++, [&](Draws& d) {
        const FreeGenerator W = random_free(n, d.seed());
        const SymplecticMatrix S = matrix_from_generator(W);
        const double direct = S.det_minus_identity();
        double r = std::max({rel_diff(det_S_minus_I(W), direct), rel_diff(det_S_minus_I_blocks(S), direct),
                             rel_diff(det_S_minus_I_factored(S), direct)});
        json in = {{"n", n}, {"W", io::to_json(W)}};
        bool ok = r <= tol;
        const Mat Wxx = hessian_Wxx(W);
        const Mat X = S.matrix() - Mat::Identity(2 * n, 2 * n);
        if (std::abs(Wxx.determinant()) > 0.1 && singularity_margin(X) > tol::det_margin) {
          Vec p0(n);
          for (int i = 0; i < n; ++i) p0(i) = d.uniform(-1.0, 1.0);
          const PairingSides ps = hessian_pairing(S, p0);
          const double rp = rel_diff(ps.lhs, ps.rhs);
          ok = ok && rp <= tol_pair;
          r = std::max(r, rp);
          in["p0"] = std::vector<double>(p0.data(), p0.data() + n);
        }
        return Outcome{in, r, ok, ""};
      });
    }
  }
}

void suite_cayley(Context& ctx) {
  const double tol_sym = ctx.tol("cayley_symmetry");
  const double tol_rt = ctx.tol("cayley_roundtrip");
  const std::vector<int> ns = ctx.n_range({1, 2, 3, 4}, 8);
  const int trials = ctx.trials(1000);
  for (int t = 0; t < trials; ++t) {
    const int n = ns[static_cast<std::size_t>(t) % ns.size()];
    ctx.run(t, [&](Draws& d) {
      const SymplecticMatrix S = random_symplectic(n, d.seed(), 2);
      require_fixed_point_free(S, tol::det_margin);
      const double asym = cayley_asymmetry(S);
      const CayleySymmetric M = cayley_M(S);
      const SymplecticMatrix S2 = inverse_cayley(M);
      const double rt_S = max_abs(S2.matrix() - S.matrix()) / std::max(1.0, max_abs(S.matrix()));
      // the other direction, from a random symmetric M
      Mat R = random_symmetric(d, 2 * n, 1.0);
      const Mat K = R - 0.5 * standard_J(n).matrix();
      require_margin(K, tol::det_margin, "det(M - J/2) too small");
      const CayleySymmetric MR(R);
      const SymplecticMatrix SR = inverse_cayley(MR);
      require_fixed_point_free(SR, tol::det_margin);
      const CayleySymmetric MR2 = cayley_M(SR);
      const double rt_M = max_abs(MR2.matrix() - R) / std::max(1.0, max_abs(R));
      const double rt = std::max(rt_S, rt_M);
      std::ostringstream note;
      note << "asymmetry " << asym << ", round trip " << rt;
      return Outcome{{{"n", n}, {"S", io::to_json(S)}, {"M", io::to_json(R)}},
                     std::max(asym, rt),
                     asym <= tol_sym && rt <= tol_rt,
                     note.str()};
    });
  }
}

void suite_maslov(Context& ctx) {
  const double tol_op = ctx.tol("maslov_operator");
  const std::vector<int> ns = ctx.n_range({1, 2, 3, 4}, 8);
  const int trials = ctx.trials(500);
  const int op_trials = std::max(1, trials / 10);
  const GridSpec grid = suite_grid(ctx, GridSpec{12.0, 1024});
  for (int t = 0; t < trials; ++t) {
    const int n = ns[static_cast<std::size_t>(t) % ns.size()];
    ctx.run(t, [&](Draws& d) {
      const FreeGenerator W0 = random_free(n, d.seed());
      const Mat Wxx = hessian_Wxx(W0);
      require_margin(Wxx, tol::det_margin, "W_xx nearly singular");
      const SymplecticMatrix S = matrix_from_generator(W0);
      require_fixed_point_free(S, tol::det_margin);
      const auto [m1, m2] = maslov_choices(W0.L());
      int bad = 0;
      json nus = json::array();
      for (IndexMod4 m : {m1, m2}) {
        const IndexMod4 nu = nu_from_generator(W0.with_m(m));
        nus.push_back(nu.value());
        if (!check_arg_det_relation(S, nu)) ++bad;
      }
      if (nu_from_generator(W0.with_m(m2)) != nu_from_generator(W0.with_m(m1)) + IndexMod4(2)) ++bad;
      return Outcome{{{"n", n}, {"W", io::to_json(W0)}, {"nu", nus}}, static_cast<double>(bad), bad == 0,
                     bad ? "sign det(S - I) contradicts nu" : ""};
    });
  }
  // Operator level: R̂_ν(S_W) = Ŝ_{W,m} for ν = m − Inert W_xx, n = 1.
  for (int t = 0; t < op_trials; ++t) {
    ctx.run(trials + t, [&](Draws& d) {
      const FreeGenerator W0 = random_free(1, d.seed());
      const IndexMod4 m = d.integer(0, 1) ? maslov_choices(W0.L()).second : maslov_choices(W0.L()).first;
      const FreeGenerator W = W0.with_m(m);
      const SymplecticMatrix S = matrix_from_generator(W);
      require_fixed_point_free(S, tol::det_margin, 0.05);
      const MWDescriptor D(S, nu_from_generator(W));
      const GaussianState g = random_gaussian(d, 1.0);
      double r_grid = 0.0;
      try {
        const GridFunction f = g.sample(grid);
        r_grid = quad_fourier_apply(W, f).distance(mw_apply_grid(D, f)) / f.norm();
      } catch (const GridOverflow& e) {
        throw Reject{e.what()};
      } catch (const NumericalFailure& e) {
        throw Reject{e.what()};
      }
      const double r_closed = l2_distance(quad_fourier_gaussian(W, g), mw_apply_gaussian(D, g)) / g.norm();
      // the other sheet flips the sign
      const MWDescriptor D2(S, D.nu() + IndexMod4(2));
      const double r_sheet =
          l2_distance(quad_fourier_gaussian(W.with_m(m + IndexMod4(2)), g), mw_apply_gaussian(D2, g)) / g.norm();
      const double r = std::max({r_grid, r_closed, r_sheet});
      return Outcome{{{"n", 1}, {"W", io::to_json(W)}, {"nu", D.nu().value()}, {"g", gaussian_json(g)},
                      {"grid", grid_json(grid)}},
                     r, r <= tol_op, "operator level"};
    });
  }
}

void suite_czparity(Context& ctx) {
  const std::vector<int> ns = ctx.n_range({1, 2, 3, 4}, 8);
  const int trials = ctx.trials(500);
  for (int t = 0; t < trials; ++t) {
    const int n = ns[static_cast<std::size_t>(t) % ns.size()];
    ctx.run(t, [&](Draws& d) {
      FreeGenerator W = random_free(n, d.seed());
      require_margin(hessian_Wxx(W), tol::det_margin, "W_xx nearly singular");
      if (d.integer(0, 1)) W = W.with_m(maslov_choices(W.L()).second);
      const SymplecticMatrix S = matrix_from_generator(W);
      require_fixed_point_free(S, tol::det_margin);
      const IndexMod4 nu = nu_from_generator(W);
      const CzParity cz = cz_parity(S, nu);
      const bool ok = cz.matches_nu && cz.mu_mod2 == cz_parity_from_generator(W);
      return Outcome{{{"n", n}, {"W", io::to_json(W)}, {"nu", nu.value()}, {"mu_mod2", cz.mu_mod2}},
                     ok ? 0.0 : 1.0, ok, ok ? "" : "parity mismatch"};
    });
  }
}

void suite_altforms(Context& ctx) {
  const double tol = ctx.tol("alt_forms");
  ctx.n_range({1}, 1);
  const int trials = ctx.trials(50);
  for (int t = 0; t < trials; ++t) {
    ctx.run(t, [&](Draws& d) {
      const SymplecticMatrix S = random_symplectic(1, d.seed(), 2);
      require_fixed_point_free(S, 1e-2);
      const MWDescriptor D(S, IndexMod4(d.integer(0, 3)));
      const GaussianState g = random_gaussian(d, 2.0);
      const AltFormsResidual r = alt_forms_residual(D, g);
      const double res = std::max(r.sigma_form, r.product_form);
      return Outcome{{{"n", 1}, {"descriptor", io::to_json(D)}, {"g", gaussian_json(g)}}, res, res <= tol, ""};
    });
  }
}

void suite_covariance(Context& ctx) {
  const double tol = ctx.tol("covariance");
  ctx.n_range({1}, 1);
  const int trials = ctx.trials(100);
  const GridSpec grid = suite_grid(ctx, GridSpec{12.0, 1024});
  for (int t = 0; t < trials; ++t) {
    ctx.run(t, [&](Draws& d) {
      json in = {{"n", 1}, {"grid", grid_json(grid)}};
      std::optional<KernelOperator> K;
      std::optional<SymplecticMatrix> S;
      try {
        if (t % 2 == 0) {
          FreeGenerator W = random_free(1, d.seed());
          S = matrix_from_generator(W);
          if (max_abs(S->matrix()) > 3.0) throw Reject{"matrix too large for the grid"};
          K = quad_fourier_kernel(W, grid);
          in["W"] = io::to_json(W);
          in["operator"] = "quadratic Fourier transform";
        } else {
          S = mild_symplectic(d);
          const MWDescriptor D(*S, IndexMod4(d.integer(0, 3)));
          K = mw_kernel(D, grid);
          in["descriptor"] = io::to_json(D);
          in["operator"] = "Mehlig-Wilkinson";
        }
        const long long k = d.integer(-static_cast<int>(2.0 / grid.dx()), static_cast<int>(2.0 / grid.dx()));
        const PhasePoint z{static_cast<double>(k) * grid.dx(), d.uniform(-2.0, 2.0)};
        const GaussianState g = random_gaussian(d, 1.0);
        in["z"] = {z.x, z.p};
        in["g"] = gaussian_json(g);
        // S f must be contained well below the tolerance: T(Sz) moves its tail across the edge
        const double r = covariance_residual(K->applier(1e-12), *S, z, g.sample(grid));
        return Outcome{in, r, r <= tol, ""};
      } catch (const GridOverflow& e) {
        throw Reject{e.what()};
      } catch (const NumericalFailure& e) {
        throw Reject{e.what()};
      }
    });
  }
}

void suite_hw(Context& ctx) {
  const double tol = ctx.tol("heisenberg");
  ctx.n_range({1}, 1);
  const int trials = ctx.trials(100);
  const GridSpec grid = suite_grid(ctx, GridSpec{12.0, 1024});
  const int span = static_cast<int>(2.5 / grid.dx());
  for (int t = 0; t < trials; ++t) {
    ctx.run(t, [&](Draws& d) {
      const PhasePoint z0{d.integer(-span, span) * grid.dx(), d.uniform(-3.0, 3.0)};
      PhasePoint z1{d.integer(-span, span) * grid.dx(), d.uniform(-3.0, 3.0)};
      if (t % 10 == 0) z1 = {-z0.x, -z0.p};  // collinear: the operators commute
      const GaussianState g = random_gaussian(d, 1.0);
      const HwResiduals r = hw_commutation_check(z0, z1, g.sample(grid));
      const double res = std::max(r.commutation, r.composition);
      return Outcome{{{"n", 1}, {"z0", {z0.x, z0.p}}, {"z1", {z1.x, z1.p}}, {"g", gaussian_json(g)},
                      {"grid", grid_json(grid)}},
                     res, res <= tol, ""};
    });
  }
}

void suite_fresnel(Context& ctx) {
  const double tol = ctx.tol("fresnel");
  const std::vector<int> ns = ctx.n_range({1, 2}, 2);
  const int trials = ctx.trials(50);
  for (int t = 0; t < trials; ++t) {
    const int m = ns[static_cast<std::size_t>(t) % ns.size()];
    ctx.run(t, [&](Draws& d) {
      Vec lambda(m);
      for (int i = 0; i < m; ++i) lambda(i) = (d.integer(0, 1) ? 1.0 : -1.0) * d.uniform(0.5, 3.0);
      Mat Q = Mat::Identity(m, m);
      if (m == 2) {
        const double a = d.uniform(0.0, kPi);
        Q << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
      }
      const Mat M = sym_part(Q * lambda.asDiagonal() * Q.transpose());
      Vec v(m);
      for (int i = 0; i < m; ++i) v(i) = d.uniform(-3.0, 3.0);
      if (v.norm() > 3.0) v *= 3.0 / v.norm();
      const Complex closed = fresnel_closed(M, v);
      const FresnelNumeric num = fresnel_numeric(M, v);
      const double r = std::abs(closed - num.value);
      return Outcome{{{"m", m}, {"M", io::to_json(M)}, {"v", std::vector<double>(v.data(), v.data() + m)},
                      {"closed", complex_json(closed)}, {"numeric", complex_json(num.value)}},
                     r, r <= tol, ""};
    });
  }
}

void suite_trace(Context& ctx) {
  const double tol = ctx.tol("trace_abs");
  const double tol_pi = ctx.tol("trace_at_pi");
  ctx.n_range({1}, 1);
  const int points = ctx.trials(8);
  const std::size_t basis = suite_basis(ctx, 128);
  const GridSpec grid = suite_grid(ctx, basis_grid(basis));
  auto one = [&](int trial, double theta, double limit) {
    ctx.run(trial, [&, theta, limit](Draws&) {
      const MWDescriptor D(rotation(theta), IndexMod4(3));
      const TraceResult r = trace_mw(D, basis, grid);
      std::ostringstream note;
      note << std::setprecision(12) << "trace " << r.trace.real() << (r.trace.imag() < 0 ? "-" : "+")
           << std::abs(r.trace.imag()) << "i, plain partial sum error " << std::abs(r.partial_sum - r.expected);
      return Outcome{{{"theta", theta}, {"nu", 3}, {"n_basis", basis}, {"grid", grid_json(grid)},
                      {"trace", complex_json(r.trace)}, {"expected", complex_json(r.expected)}},
                     r.error, r.elliptic && r.error <= limit, note.str()};
    });
  };
  // θ_k spread over [π/4, 7π/4]
  for (int k = 0; k < points; ++k) {
    const double theta = points == 1 ? 0.25 * kPi : 0.25 * kPi + k * 1.5 * kPi / (points - 1);
    one(k, theta, tol);
  }
  one(points, kPi, tol_pi);
}

void suite_compose(Context& ctx) {
  const double tol_res = ctx.tol("compose_residual");
  const double tol_cl1 = ctx.tol("cl1_rel");
  const double tol_unit = ctx.tol("unitarity_quarter");
  ctx.n_range({1, 2, 3}, 3);
  const std::vector<int> cl1_ns = ctx.n_range({1, 2, 3}, 8);
  const int trials = ctx.trials(20);
  const std::size_t basis = suite_basis(ctx, 64);
  const GridSpec grid = suite_grid(ctx, basis_grid(basis));
  for (int t = 0; t < trials; ++t) {
    ctx.run(t, [&](Draws& d) {
      const SymplecticMatrix S1 = mild_symplectic(d);
      const SymplecticMatrix S2 = mild_symplectic(d);
      const Mat I = Mat::Identity(2, 2);
      for (const Mat& X : {Mat(S1.matrix() - I), Mat(S2.matrix() - I), Mat((S1 * S2).matrix() - I)})
        if (std::abs(X.determinant()) < 0.05) throw Reject{"det(S - I) too small"};
      const MWDescriptor D1(S1, IndexMod4(d.integer(0, 3)));
      const MWDescriptor D2(S2, IndexMod4(d.integer(0, 3)));
      CompositionResult r;
      try {
        r = composition_oracle(D1, D2, basis, grid);
      } catch (const GridOverflow& e) {
        throw Reject{e.what()};
      } catch (const NumericalFailure& e) {
        throw Reject{e.what()};
      }
      if (r.unitarity_defect > tol_unit) throw Reject{"truncated product not unitary on the quarter block"};
      std::ostringstream note;
      note << "oracle nu* = " << r.best_nu << ", compose_nu = " << r.predicted;
      return Outcome{{{"n", 1}, {"D1", io::to_json(D1)}, {"D2", io::to_json(D2)}, {"n_basis", basis},
                      {"grid", grid_json(grid)}, {"residuals", r.residuals}},
                     r.best_residual(), r.agrees() && r.best_residual() <= tol_res, note.str()};
    });
  }
  const int cl1_trials = 50 * trials;
  for (int t = 0; t < cl1_trials; ++t) {
    const int n = cl1_ns[static_cast<std::size_t>(t) % cl1_ns.size()];
    ctx.run(trials + t, [&](Draws& d) {
      const FreeGenerator W1 = random_free(n, d.seed());
      const FreeGenerator W2 = random_free(n, d.seed());
      const Mat I = Mat::Identity(2 * n, 2 * n);
      const SymplecticMatrix S1 = matrix_from_generator(W1), S2 = matrix_from_generator(W2);
      require_margin(S1.matrix() - I, tol::det_margin, "det(S_W - I) too small");
      require_margin(S2.matrix() - I, tol::det_margin, "det(S_W' - I) too small");
      require_margin((S1 * S2).matrix() - I, tol::det_margin, "det(S_W S_W' - I) too small");
      const Cl1Sides s = cl1_sides(W1, W2);
      const double r = rel_diff(s.lhs, s.rhs);
      return Outcome{{{"n", n}, {"W1", io::to_json(W1)}, {"W2", io::to_json(W2)}}, r, r <= tol_cl1,
                     "determinant identity"};
    });
  }
}

void suite_split(Context& ctx) {
  const double tol = ctx.tol("split_product");
  const double tol_op = ctx.tol("split_operator");
  const std::vector<int> ns = ctx.n_range({1, 2, 3}, 8);
  const int trials = ctx.trials(100);
  for (int t = 0; t < trials; ++t) {
    const int n = ns[static_cast<std::size_t>(t) % ns.size()];
    ctx.run(t, [&](Draws& d) {
      const SymplecticMatrix S = n == 1 ? mild_symplectic(d) : random_symplectic(n, d.seed(), 3);
      const FreePair A = split_into_free_pair(S);
      const SymplecticMatrix SA = matrix_from_generator(A.first), SB = matrix_from_generator(A.second);
      const Mat I = Mat::Identity(2 * n, 2 * n);
      const double scale = std::max(1.0, max_abs(SA.matrix()) * max_abs(SB.matrix()));
      double res = max_abs((SA * SB).matrix() - S.matrix()) / scale;
      bool ok = res <= tol && SA.is_free() && SB.is_free() && det_clears((SA.matrix() - I).determinant(), SA.matrix() - I) &&
                det_clears((SB.matrix() - I).determinant(), SB.matrix() - I);
      json in = {{"n", n}, {"S", io::to_json(S)}, {"W1", io::to_json(A.first)}, {"W2", io::to_json(A.second)},
                 {"lambda", A.lambda}};
      std::string note;
      if (n == 1 && ok) {
        // A second split of the same S. Each product is compared with R̂_ν(S) on
        // Gaussians in closed form; the sheet of the second split's last factor
        // is the one reproducing the first product, and ν(S) must then agree.
        FreePair B = split_into_free_pair(S, SplitOptions{1});
        for (std::size_t c = 2; max_abs(matrix_from_generator(B.first).matrix() - SA.matrix()) < 1e-12; ++c)
          B = split_into_free_pair(S, SplitOptions{c});
        auto descriptor = [](const FreeGenerator& W) { return MWDescriptor(matrix_from_generator(W), nu_from_generator(W)); };
        const MWDescriptor A1 = descriptor(A.first), A2 = descriptor(A.second), B1 = descriptor(B.first);
        const SymplecticMatrix SB2 = matrix_from_generator(B.second);
        const IndexMod4 nu_A = compose_nu(A1.nu(), A2.nu(), A1.M(), A2.M(), 1);
        std::vector<GaussianState> probes;
        for (int k = 0; k < 3; ++k) probes.push_back(random_gaussian(d, 1.0));

        double law = 0.0;  // R̂₁R̂₂ against R̂_ν(S), split A
        const MWDescriptor DS(S, nu_A);
        for (const GaussianState& g : probes)
          law = std::max(law, l2_distance(mw_apply_gaussian(A1, mw_apply_gaussian(A2, g)), mw_apply_gaussian(DS, g)) /
                                  g.norm());
        int best = 0;
        double best_res = std::numeric_limits<double>::infinity();
        for (int nu2 = 0; nu2 < 4; ++nu2) {
          const MWDescriptor B2(SB2, IndexMod4(nu2));
          double r = 0.0;
          for (const GaussianState& g : probes)
            r = std::max(r, l2_distance(mw_apply_gaussian(B1, mw_apply_gaussian(B2, g)),
                                        mw_apply_gaussian(A1, mw_apply_gaussian(A2, g))) /
                                g.norm());
          if (r < best_res) best_res = r, best = nu2;
        }
        const MWDescriptor B2(SB2, IndexMod4(best));
        const IndexMod4 nu_B = compose_nu(B1.nu(), B2.nu(), B1.M(), B2.M(), 1);
        in["W1_alt"] = io::to_json(B.first);
        in["W2_alt"] = io::to_json(B.second);
        in["nu_split_a"] = nu_A.value();
        in["nu_split_b"] = nu_B.value();
        const double op = std::max(law, best_res);
        ok = ok && op <= tol_op && nu_A == nu_B;
        res = std::max(res, op);
        std::ostringstream os;
        os << "nu(S) = " << nu_A << " from split A, " << nu_B << " from split B (operator residual " << op << ")";
        note = os.str();
      }
      return Outcome{in, res, ok, note};
    });
  }
}

void suite_twisted(Context& ctx) {
  const double tol = ctx.tol("twisted");
  ctx.n_range({1}, 1);
  const int trials = ctx.trials(10);
  const std::size_t count = 64;
  const double h = 0.25;
  const GridSpec grid = suite_grid(ctx, GridSpec{8.0, 256});
  for (int t = 0; t < trials; ++t) {
    ctx.run(t, [&](Draws& d) {
      auto symbol = [&] {
        PhaseGaussian s;
        s.A = CMat(2, 2);
        const double off = d.uniform(-0.3, 0.3), off_i = d.uniform(-0.2, 0.2);
        s.A << Complex(d.uniform(0.8, 1.5), d.uniform(-0.2, 0.2)), Complex(off, off_i), Complex(off, off_i),
            Complex(d.uniform(0.8, 1.5), d.uniform(-0.2, 0.2));
        s.b = CVec(2);
        s.b << Complex(d.uniform(-0.5, 0.5), d.uniform(-0.5, 0.5)), Complex(d.uniform(-0.5, 0.5), d.uniform(-0.5, 0.5));
        s.c = 0.0;
        return s;
      };
      const PhaseGaussian a = symbol(), b = symbol();
      const PhaseSpaceGrid ag = sample_symbol(count, h, [&](double x, double p) { return a(x, p); });
      const PhaseSpaceGrid bg = sample_symbol(count, h, [&](double x, double p) { return b(x, p); });
      const PhaseSpaceGrid cg = twisted_convolution(ag, bg);
      const PhaseGaussian c = twisted_convolution_gaussian(a, b);
      const PhaseSpaceGrid cc = sample_symbol(count, h, [&](double x, double p) { return c(x, p); });
      double peak = 0.0;
      for (const Complex& v : cc.values()) peak = std::max(peak, std::abs(v));
      const double r_closed = cg.max_abs_difference(cc) / peak;

      // composition law: a^w b^w f = c^w f with c_σ = (1/2π) a_σ ∗_σ b_σ
      PhaseSpaceGrid cw(count, h);
      for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = 0; j < count; ++j) cw.at(i, j) = cg.at(i, j) / (2.0 * kPi);
      const GridFunction f = random_gaussian(d, 1.0).sample(grid);
      const GridFunction lhs = weyl_apply(ag, weyl_apply(bg, f));
      const GridFunction rhs = weyl_apply(cw, f);
      const double r_op = lhs.distance(rhs) / std::max(lhs.norm(), 1e-300);
      const double r = std::max(r_closed, r_op);
      auto sym_json = [](const PhaseGaussian& s) {
        json A = json::array();
        for (int i = 0; i < 2; ++i) A.push_back({complex_json(s.A(i, 0)), complex_json(s.A(i, 1))});
        return json{{"A", A}, {"b", {complex_json(s.b(0)), complex_json(s.b(1))}}, {"c", complex_json(s.c)}};
      };
      std::ostringstream note;
      note << "closed form " << r_closed << ", operator " << r_op;
      return Outcome{{{"a", sym_json(a)}, {"b", sym_json(b)}, {"count", count}, {"h", h}}, r, r <= tol, note.str()};
    });
  }
}

struct SuiteEntry {
  SuiteInfo info;
  std::map<std::string, double> tolerances;
  void (*run)(Context&);
};

const std::vector<SuiteEntry>& registry() {
  static const std::vector<SuiteEntry> r = {
      {{"lemma1", "det(S_W - I) = (-1)^n det(L^-1) det(P + Q - L - L^T), its block form "
                  "(-1)^n det B det(B^-1 A + D B^-1 - B^-1 - B^-T), the Schur factorisation of S - I, and "
                  "<M_S(0,p),(0,p)> = -<W_xx^-1 p, p>"},
       {{"lemma1_rel", tol::lemma1_rel}, {"pairing_rel", tol::pairing_rel}},
       suite_lemma1},
      {{"cayley", "M_S = (1/2) J (S + I)(S - I)^-1 is symmetric and S = (M - J/2)^-1 (M + J/2) inverts it"},
       {{"cayley_symmetry", tol::cayley_symmetry}, {"cayley_roundtrip", tol::cayley_roundtrip}},
       suite_cayley},
      {{"maslov", "nu = m - Inert W_xx (mod 4) gives sign det(S - I) = (-1)^(n - nu), and R_nu(S_W) equals the "
                  "quadratic Fourier transform S_{W,m} including its phase"},
       {{"maslov_operator", tol::maslov_operator}},
       suite_maslov},
      {{"czparity", "nu = mu_CZ (mod 2) with sign det(S - I) = (-1)^(n - mu_CZ), and mu_CZ = m - Inert W_xx "
                    "(mod 2)"},
       {},
       suite_czparity},
      {{"altforms", "the phase-space integrals of exp((i/2)<M_S z,z>) T(z), exp(-(i/2) sigma(Sz,z)) T((S-I)z) "
                    "and T(Sz) T(-z) define the same operator"},
       {{"alt_forms", tol::alt_forms}},
       suite_altforms},
      {{"covariance", "S T(z) = T(Sz) S for metaplectic operators S projecting onto S"},
       {{"covariance", tol::covariance}},
       suite_covariance},
      {{"hw", "T(z0) T(z1) = exp(i sigma(z0,z1)) T(z1) T(z0) and T(z0 + z1) = exp(-(i/2) sigma(z0,z1)) T(z0) T(z1)"},
       {{"heisenberg", tol::heisenberg}},
       suite_hw},
      {{"fresnel", "(2 pi)^(-m/2) int exp(-i<v,u>) exp((i/2)<Mu,u>) du = |det M|^(-1/2) exp((i pi/4) sgn M) "
                   "exp(-(i/2)<M^-1 v,v>)"},
       {{"fresnel", tol::fresnel}},
       suite_fresnel},
      {{"trace", "Tr R_nu(S) = i^nu / sqrt|det(S - I)| for elliptic S"},
       {{"trace_abs", tol::trace_abs}, {"trace_at_pi", tol::trace_at_pi}},
       suite_trace},
      {{"compose", "R_nu(S) R_nu'(S') = R_nu''(SS') with nu'' = nu + nu' + n - Inert(M + M'), and "
                   "det[(S_W - I)(S_W' - I)(M + M')] = det(S_W S_W' - I)"},
       {{"compose_residual", tol::compose_residual}, {"cl1_rel", tol::cl1_rel},
        {"unitarity_quarter", tol::unitarity_quarter}},
       suite_compose},
      {{"split", "every S is a product S_W1 S_W2 of free, fixed-point-free factors (shift P2 + lambda, "
                 "Q1 - lambda), and the composed nu does not depend on the split"},
       {{"split_product", tol::split_product}, {"split_operator", tol::split_operator}},
       suite_split},
      {{"twisted", "a_sigma *_sigma b_sigma (z) = int exp((i/2) sigma(z,u)) a_sigma(z - u) b_sigma(u) du is the "
                   "twisted symbol of a^w b^w up to the factor 1/2 pi"},
       {{"twisted", tol::twisted}},
       suite_twisted},
  };
  return r;
}

}  // namespace

const std::vector<SuiteInfo>& registered_suites() {
  static const std::vector<SuiteInfo> infos = [] {
    std::vector<SuiteInfo> v;
    for (const SuiteEntry& e : registry()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

SuiteReport run_suite(const SuiteConfig& config) {
  const SuiteEntry* entry = nullptr;
  for (const SuiteEntry& e : registry())
    if (e.info.name == config.suite_name) entry = &e;
  if (!entry) {
    std::string names;
    for (const SuiteInfo& s : registered_suites()) names += (names.empty() ? "" : ", ") + s.name;
    throw UnknownSuite("unknown suite '" + config.suite_name + "'; registered suites: " + names);
  }
  SuiteReport rep;
  rep.suite_name = entry->info.name;
  rep.claim = entry->info.claim;
  Context ctx(config, rep, entry->tolerances);
  rep.config = {{"suite", config.suite_name}, {"seed", config.seed}, {"tol_scale", config.tol_scale}};
  if (!config.n_range.empty()) rep.config["n"] = config.n_range;
  if (config.trials) rep.config["trials"] = *config.trials;
  if (config.n_basis) rep.config["basis"] = *config.n_basis;
  if (config.grid_n) rep.config["grid_n"] = *config.grid_n;
  if (config.grid_xmax) rep.config["grid_xmax"] = *config.grid_xmax;

  const auto start = std::chrono::steady_clock::now();
  entry->run(ctx);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  for (const TrialRecord& r : rep.trials) {
    if (r.pass) ++rep.passes;
    rep.max_residual = std::max(rep.max_residual, r.residual);
  }
  return rep;
}

std::vector<SuiteReport> run_all(std::uint64_t seed, double tol_scale) {
  std::vector<SuiteReport> out;
  for (const SuiteInfo& s : registered_suites()) {
    SuiteConfig c;
    c.suite_name = s.name;
    c.seed = seed;
    c.tol_scale = tol_scale;
    out.push_back(run_suite(c));
  }
  return out;
}

json SuiteReport::to_json(bool timing) const {
  json t = json::array();
  for (const TrialRecord& r : trials) {
    json j = {{"trial", r.trial}, {"seed", std::to_string(r.seed)}, {"digest", r.digest}, {"pass", r.pass}};
    j["residual"] = std::isfinite(r.residual) ? json(r.residual) : json(nullptr);
    if (!r.note.empty()) j["note"] = r.note;
    if (!r.pass) j["inputs"] = r.inputs;  // failing trials carry their reproducer
    t.push_back(std::move(j));
  }
  json j = {{"suite", suite_name},
            {"claim", claim},
            {"config", config},
            {"tolerances", tolerances},
            {"trials", std::move(t)},
            {"aggregate",
             {{"trials", trials.size()},
              {"passes", passes},
              {"rejections", rejections},
              {"max_residual", std::isfinite(max_residual) ? json(max_residual) : json(nullptr)},
              {"passed", passed()}}}};
  if (timing) j["aggregate"]["seconds"] = seconds;
  return j;
}

std::string csv_summary(const std::vector<SuiteReport>& reports) {
  std::ostringstream os;
  os << "suite,trials,passes,max_residual,seconds\n";
  os << std::setprecision(12);
  for (const SuiteReport& r : reports)
    os << r.suite_name << ',' << r.trials.size() << ',' << r.passes << ',' << r.max_residual << ',' << r.seconds << '\n';
  return os.str();
}

}  // namespace metasymp
