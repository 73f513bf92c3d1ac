#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "metasymp/basis.hpp"
#include "metasymp/errors.hpp"
#include "metasymp/harness.hpp"
#include "metasymp/index.hpp"
#include "metasymp/io.hpp"

namespace metasymp::cli {

namespace {

using io::json;

struct Options {
  std::string suite;
  std::vector<std::string> files;
  std::string n_spec;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> tol;
  std::optional<std::size_t> basis;
  std::optional<std::size_t> grid_n;
  std::optional<double> grid_xmax;
  std::string out_path;
  std::string csv_path;
  bool as_json = false;
  bool no_timing = false;
  std::optional<int> m;
  bool inverse = false;
  double theta = 0.5 * kPi;
  int nu = 3;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<int> parse_n(const std::string& s) {
  std::vector<int> out;
  auto num = [&](const std::string& t) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != t.size()) throw UsageError("bad --n value '" + s + "' (use 2, 1..4 or 1,3)");
    return v;
  };
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(num(part));
    } else {
      const int a = num(part.substr(0, dots)), b = num(part.substr(dots + 2));
      if (b < a) throw UsageError("empty --n range '" + part + "'");
      for (int k = a; k <= b; ++k) out.push_back(k);
    }
  }
  if (out.empty()) throw UsageError("empty --n");
  return out;
}

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("METASYMP_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') throw UsageError(std::string("METASYMP_SEED is not an integer: ") + env);
    return v;
  }
  return 1;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !(v > 0.0)) throw UsageError("bad tolerance '" + s + "'");
  return v;
}

// --tol NAME=VALUE overrides one tolerance; a bare number scales all of them
// (verify) or sets the pass threshold (other commands).
void apply_tol(const std::vector<std::string>& items, SuiteConfig& c) {
  for (const std::string& t : items) {
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      c.tol_scale = parse_double(t);
    else
      c.tolerances[t.substr(0, eq)] = parse_double(t.substr(eq + 1));
  }
}

double single_tol(const Options& o, double fallback) {
  if (o.tol.empty()) return fallback;
  if (o.tol.size() > 1 || o.tol[0].find('=') != std::string::npos)
    throw UsageError("this command takes a single --tol VALUE");
  return parse_double(o.tol[0]);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::string fmt(Complex z) {
  std::ostringstream os;
  os << std::setprecision(12) << z.real() << (z.imag() < 0 || std::signbit(z.imag()) ? " - " : " + ")
     << std::abs(z.imag()) << "i";
  return os.str();
}

std::string fmt(const Mat& X, const std::string& indent = "  ") {
  std::ostringstream os;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    os << indent << "[";
    for (Eigen::Index j = 0; j < X.cols(); ++j) os << (j ? ", " : "") << std::setw(16) << std::setprecision(12) << X(i, j);
    os << "]\n";
  }
  return os.str();
}

json cjson(Complex z) { return json::array({z.real(), z.imag()}); }

void emit(const Options& o, std::ostream& out, const std::string& text, const json& j) {
  const std::string body = o.as_json ? j.dump(2) + "\n" : text;
  if (o.out_path.empty())
    out << body;
  else
    io::write_text(o.out_path, body);
}

const std::string& one_file(const Options& o) {
  if (o.files.size() != 1) throw UsageError("expected exactly one input file");
  return o.files[0];
}

SymplecticMatrix read_matrix(const std::string& path) {
  const json j = io::read_json(path);
  const io::MatrixInput in = io::matrix_input_from_json(j);
  if (const auto* W = std::get_if<FreeGenerator>(&in)) return matrix_from_generator(*W);
  return std::get<SymplecticMatrix>(in);
}

void require_no_fixed_point(const SymplecticMatrix& S) {
  const Mat X = S.matrix() - Mat::Identity(2 * S.n(), 2 * S.n());
  const double d = X.determinant();
  if (!det_clears(d, X))
    throw FixedPointError("S has eigenvalue 1: det(S - I) = " + fmt(d) + ", sigma_min/sigma_max of S - I = " +
                          fmt(singularity_margin(X)) + ", so no index or Cayley matrix is defined");
}

// ------------------------------------------------------------------ verify

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<std::string> names;
  if (o.suite == "all") {
    if (!o.n_spec.empty()) throw UsageError("--n applies to a single suite");
    for (const std::string& t : o.tol)
      if (t.find('=') != std::string::npos) throw UsageError("named tolerances apply to a single suite");
    for (const SuiteInfo& s : registered_suites()) names.push_back(s.name);
  } else {
    names.push_back(o.suite);
  }
  const std::uint64_t seed = resolve_seed(o);
  std::vector<SuiteReport> reports;
  for (const std::string& name : names) {
    SuiteConfig c;
    c.suite_name = name;
    c.seed = seed;
    if (!o.n_spec.empty()) c.n_range = parse_n(o.n_spec);
    c.trials = o.trials;
    apply_tol(o.tol, c);
    c.n_basis = o.basis;
    c.grid_n = o.grid_n;
    c.grid_xmax = o.grid_xmax;
    reports.push_back(run_suite(c));
    const SuiteReport& r = reports.back();
    err << (r.passed() ? "PASS " : "FAIL ") << std::left << std::setw(11) << r.suite_name << std::right << r.passes
        << "/" << r.trials.size() << " trials, max residual " << fmt(r.max_residual) << ", " << r.rejections
        << " re-draws, " << std::fixed << std::setprecision(2) << r.seconds << std::defaultfloat << " s\n";
  }
  json j;
  if (reports.size() == 1) {
    j = reports[0].to_json(!o.no_timing);
  } else {
    j = json::array();
    for (const SuiteReport& r : reports) j.push_back(r.to_json(!o.no_timing));
  }
  if (o.out_path.empty())
    out << j.dump(2) << "\n";
  else
    io::write_text(o.out_path, j.dump(2) + "\n");
  if (!o.csv_path.empty()) io::write_text(o.csv_path, csv_summary(reports));
  for (const SuiteReport& r : reports)
    if (!r.passed()) return kFailure;
  return kPass;
}

// ------------------------------------------------------------------- index

struct GeneratorIndex {
  FreeGenerator W;
  std::pair<IndexMod4, IndexMod4> choices;
  InertiaData inert;
  IndexMod4 nu;
};

GeneratorIndex index_of(const FreeGenerator& W0, std::optional<int> m) {
  GeneratorIndex g{W0, maslov_choices(W0.L()), {}, IndexMod4(0)};
  if (m) {
    try {
      g.W = W0.with_m(IndexMod4(*m));
    } catch (const InvalidGenerator& e) {
      throw UsageError(e.what());
    }
  } else if (!W0.m()) {
    g.W = W0.with_m(g.choices.first);
  }
  g.inert = inertia(hessian_Wxx(g.W));
  g.nu = nu_from_generator(g.W);
  return g;
}

json index_json(const GeneratorIndex& g) {
  return {{"W", io::to_json(g.W)},
          {"m_choices", {g.choices.first.value(), g.choices.second.value()}},
          {"m", g.W.m()->value()},
          {"inert_Wxx", g.inert.negatives},
          {"nu", g.nu.value()}};
}

int cmd_index(const Options& o, std::ostream& out) {
  const json j = io::read_json(one_file(o));
  const io::MatrixInput in = io::matrix_input_from_json(j);
  const SymplecticMatrix S =
      std::holds_alternative<FreeGenerator>(in) ? matrix_from_generator(std::get<FreeGenerator>(in)) : std::get<SymplecticMatrix>(in);
  require_no_fixed_point(S);
  const double det = S.det_minus_identity();
  const int n = S.n();

  std::ostringstream t;
  json r = {{"n", n}, {"det_S_minus_I", det}};
  t << "n = " << n << "\n";
  IndexMod4 nu(0);
  if (std::holds_alternative<FreeGenerator>(in) || S.is_free()) {
    const FreeGenerator W0 =
        std::holds_alternative<FreeGenerator>(in) ? std::get<FreeGenerator>(in) : generator_from_free(S);
    const GeneratorIndex g = index_of(W0, o.m);
    nu = g.nu;
    r["free"] = true;
    r["generator"] = index_json(g);
    t << "free generator W = (P, L, Q)\n"
      << "m choices (m pi = arg det L mod 2 pi): {" << g.choices.first << ", " << g.choices.second << "}\n"
      << "m = " << *g.W.m() << "\n"
      << "Inert W_xx = " << g.inert.negatives << "\n"
      << "nu = m - Inert W_xx (mod 4) = " << nu << "\n";
  } else {
    if (o.m) throw UsageError("--m applies to free generators only");
    const FreePair P = split_into_free_pair(S);
    const GeneratorIndex g1 = index_of(P.first, std::nullopt), g2 = index_of(P.second, std::nullopt);
    const MWDescriptor D1(matrix_from_generator(g1.W), g1.nu), D2(matrix_from_generator(g2.W), g2.nu);
    nu = compose_nu(g1.nu, g2.nu, D1.M(), D2.M(), n);
    r["free"] = false;
    r["split"] = {{"first", index_json(g1)}, {"second", index_json(g2)}, {"lambda", P.lambda}};
    r["inert_M_sum"] = inertia(D1.M().matrix() + D2.M().matrix()).negatives;
    t << "S is not free; split S = S_W1 S_W2 (shift lambda = " << fmt(P.lambda) << ")\n"
      << "W1: m = " << *g1.W.m() << ", Inert W_xx = " << g1.inert.negatives << ", nu1 = " << g1.nu << "\n"
      << "W2: m = " << *g2.W.m() << ", Inert W_xx = " << g2.inert.negatives << ", nu2 = " << g2.nu << "\n"
      << "nu = nu1 + nu2 + n - Inert(M1 + M2) (mod 4) = " << nu << " (the other lift has nu + 2)\n";
  }
  const bool ok = check_arg_det_relation(S, nu);
  r["nu"] = nu.value();
  r["sign_det"] = det > 0 ? 1 : -1;
  r["sign_relation_holds"] = ok;
  t << "det(S - I) = " << fmt(det) << "\n"
    << "sign det(S - I) = (-1)^(n - nu): " << (ok ? "ok" : "VIOLATED") << "\n";
  emit(o, out, t.str(), r);
  return ok ? kPass : kFailure;
}

// ------------------------------------------------------------------ factor

int cmd_factor(const Options& o, std::ostream& out) {
  const SymplecticMatrix S = read_matrix(one_file(o));
  const int n = S.n();
  std::ostringstream t;
  json r = {{"n", n}, {"free", S.is_free()}};
  double worst = 0.0;
  if (S.is_free()) {
    const FreeGenerator W = generator_from_free(S);
    const auto F = free_factorization(W);
    const Mat prod = (F[0] * F[1] * F[2] * F[3]).matrix();
    const double res = max_abs(prod - S.matrix()) / std::max(1.0, max_abs(S.matrix()));
    worst = std::max(worst, res);
    json fs = json::array();
    for (const auto& f : F) fs.push_back(io::to_json(f));
    r["generator"] = io::to_json(W);
    r["factors"] = fs;
    r["factorization_residual"] = res;
    t << "S is free, generator W = (P, L, Q):\nP =\n" << fmt(W.P()) << "L =\n" << fmt(W.L()) << "Q =\n" << fmt(W.Q())
      << "S = V_-P M_L J V_-Q (four factors), relative residual " << fmt(res) << "\n";
  }
  const FreePair P = split_into_free_pair(S);
  const SymplecticMatrix S1 = matrix_from_generator(P.first), S2 = matrix_from_generator(P.second);
  const double scale = std::max(1.0, max_abs(S1.matrix()) * max_abs(S2.matrix()));
  const double res = max_abs((S1 * S2).matrix() - S.matrix()) / scale;
  worst = std::max(worst, res);
  r["split"] = {{"first", io::to_json(P.first)},
                {"second", io::to_json(P.second)},
                {"lambda", P.lambda},
                {"attempts", P.attempts},
                {"det_first_minus_I", S1.det_minus_identity()},
                {"det_second_minus_I", S2.det_minus_identity()},
                {"product_residual", res}};
  t << "split S = S_W1 S_W2 with shift lambda = " << fmt(P.lambda) << " (" << P.attempts << " candidates tried)\n"
    << "W1: P =\n" << fmt(P.first.P(), "    ") << "    L =\n" << fmt(P.first.L(), "    ") << "    Q =\n"
    << fmt(P.first.Q(), "    ") << "W2: P =\n" << fmt(P.second.P(), "    ") << "    L =\n"
    << fmt(P.second.L(), "    ") << "    Q =\n" << fmt(P.second.Q(), "    ")
    << "det(S_W1 - I) = " << fmt(S1.det_minus_identity()) << ", det(S_W2 - I) = " << fmt(S2.det_minus_identity())
    << "\nproduct residual " << fmt(res) << "\n";
  emit(o, out, t.str(), r);
  return worst <= single_tol(o, tol::split_product) ? kPass : kFailure;
}

// ------------------------------------------------------------------ cayley

int cmd_cayley(const Options& o, std::ostream& out) {
  const json j = io::read_json(one_file(o));
  std::ostringstream t;
  json r;
  double res = 0.0;
  if (o.inverse) {
    if (!j.contains("n") || !j.contains("rows")) throw DimensionError("expected {\"n\": ..., \"rows\": ...}");
    const Mat Mraw = io::matrix_from_rows(j["rows"]);
    if (Mraw.rows() != 2 * j["n"].get<int>() || Mraw.cols() != Mraw.rows()) throw DimensionError("M must be 2n x 2n");
    const CayleySymmetric M(Mraw);
    const SymplecticMatrix S = inverse_cayley(M);
    res = max_abs(cayley_M(S).matrix() - M.matrix()) / std::max(1.0, max_abs(M.matrix()));
    r = {{"S", io::to_json(S)}, {"symplectic_residual", symplectic_residual(S.matrix())}, {"round_trip", res}};
    t << "S = (M - J/2)^-1 (M + J/2) =\n"
      << fmt(S.matrix()) << "symplectic residual " << fmt(symplectic_residual(S.matrix())) << "\nround trip "
      << fmt(res) << "\n";
    emit(o, out, t.str(), r);
    return res <= single_tol(o, tol::cayley_roundtrip) ? kPass : kFailure;
  }
  const SymplecticMatrix S = read_matrix(one_file(o));
  require_no_fixed_point(S);
  const double asym = cayley_asymmetry(S);
  const CayleySymmetric M = cayley_M(S);
  res = max_abs(inverse_cayley(M).matrix() - S.matrix()) / std::max(1.0, max_abs(S.matrix()));
  r = {{"M", {{"n", S.n()}, {"rows", io::to_json(M.matrix())}}}, {"asymmetry", asym}, {"round_trip", res}};  // readable by --inverse
  t << "M_S = (1/2) J (S + I)(S - I)^-1 =\n"
    << fmt(M.matrix()) << "asymmetry " << fmt(asym) << "\nround trip " << fmt(res) << "\n";
  emit(o, out, t.str(), r);
  return asym <= tol::cayley_symmetry && res <= single_tol(o, tol::cayley_roundtrip) ? kPass : kFailure;
}

// ------------------------------------------------------------- trace-check

int cmd_trace(const Options& o, std::ostream& out) {
  const std::size_t basis = o.basis.value_or(128);
  GridSpec grid = basis_grid(basis);
  if (o.grid_n) grid.N = *o.grid_n;
  if (o.grid_xmax) grid.x_max = *o.grid_xmax;
  grid.validate();
  const MWDescriptor D(rotation(o.theta), IndexMod4(o.nu));
  const TraceResult tr = trace_mw(D, basis, grid);
  const double limit = single_tol(o, tol::trace_abs);
  json r = {{"theta", o.theta},     {"nu", o.nu},
            {"n_basis", basis},     {"grid", {{"x_max", grid.x_max}, {"N", grid.N}}},
            {"trace", cjson(tr.trace)}, {"partial_sum", cjson(tr.partial_sum)},
            {"expected", cjson(tr.expected)}, {"error", tr.error},
            {"elliptic", tr.elliptic}};
  std::ostringstream t;
  t << "theta = " << fmt(o.theta) << ", nu = " << o.nu << ", " << basis << " Hermite functions\n"
    << "trace    " << fmt(tr.trace) << "\n"
    << "expected " << fmt(tr.expected) << " = i^nu / sqrt|det(S - I)|\n"
    << "error    " << fmt(tr.error) << " (plain partial sum " << fmt(std::abs(tr.partial_sum - tr.expected)) << ")\n";
  if (!tr.elliptic) t << "note: S is not elliptic, the trace series need not converge\n";
  emit(o, out, t.str(), r);
  return tr.error <= limit ? kPass : kFailure;
}

// ----------------------------------------------------------------- compose

int cmd_compose(const Options& o, std::ostream& out) {
  if (o.files.size() != 2) throw UsageError("compose takes two descriptor files");
  const MWDescriptor D1 = io::descriptor_from_json(io::read_json(o.files[0]));
  const MWDescriptor D2 = io::descriptor_from_json(io::read_json(o.files[1]));
  if (D1.S().n() != D2.S().n()) throw DimensionError("descriptors differ in dimension");
  const int n = D1.S().n();
  const IndexMod4 nu = compose_nu(D1.nu(), D2.nu(), D1.M(), D2.M(), n);
  const SymplecticMatrix S12 = D1.S() * D2.S();
  require_no_fixed_point(S12);
  const int inert = inertia(D1.M().matrix() + D2.M().matrix()).negatives;
  json r = {{"n", n}, {"nu", nu.value()}, {"inert_M_sum", inert}, {"S", io::to_json(S12)}};
  std::ostringstream t;
  t << "nu'' = nu + nu' + n - Inert(M + M') = " << D1.nu() << " + " << D2.nu() << " + " << n << " - " << inert
    << " = " << nu << " (mod 4)\n";
  bool ok = true;
  if (n == 1) {
    const std::size_t basis = o.basis.value_or(64);
    const CompositionResult c = composition_oracle(D1, D2, basis);
    const double limit = single_tol(o, tol::compose_residual);
    ok = c.agrees() && c.best_residual() <= limit;
    r["oracle"] = {{"n_basis", basis},
                   {"best_nu", c.best_nu.value()},
                   {"residuals", c.residuals},
                   {"unitarity_defect", c.unitarity_defect},
                   {"agrees", c.agrees()}};
    t << "basis oracle (" << basis << " Hermite functions): best nu* = " << c.best_nu << ", residual "
      << fmt(c.best_residual()) << "\n  residuals by nu*:";
    for (double x : c.residuals) t << " " << fmt(x);
    t << "\n  unitarity defect " << fmt(c.unitarity_defect) << "\n" << (ok ? "agrees" : "DISAGREES") << "\n";
  } else {
    t << "operator oracle available for n = 1 only\n";
  }
  emit(o, out, t.str(), r);
  return ok ? kPass : kFailure;
}

int dispatch_errors(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UnknownSuite& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const FixedPointError& e) {
    err << "error: " << e.what() << "\n";
    return kDomain;
  } catch (const CayleyDomainError& e) {
    err << "error: " << e.what() << "\n";
    return kDomain;
  } catch (const DegenerateHessian& e) {
    err << "error: " << e.what() << "\n";
    return kDomain;
  } catch (const CompositionDegenerate& e) {
    err << "error: " << e.what() << "\n";
    return kDomain;
  } catch (const DecompositionError& e) {
    err << "error: " << e.what() << "\n";
    return kDomain;
  } catch (const NotFree& e) {
    err << "error: " << e.what() << "\n";
    return kDomain;
  } catch (const GridOverflow& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kFailure;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    // malformed input: dimensions, symmetry, non-symplectic matrices, unreadable files
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weyl-representation metaplectic operators: indices, factorizations and verification suites",
               "metasymp"};
  app.require_subcommand(1);
  Options o;

  auto add_io = [&](CLI::App* c) {
    c->add_option("--out", o.out_path, "write output to this file");
    c->add_flag("--json", o.as_json, "print JSON instead of text");
  };

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite, or all of them");
  verify->add_option("suite", o.suite, "suite name or 'all'")->required();
  verify->add_option("--n", o.n_spec, "dimensions, e.g. 2, 1..4 or 1,3");
  verify->add_option("--trials", o.trials, "trial count");
  verify->add_option("--seed", o.seed, "master seed (default $METASYMP_SEED, else 1)");
  verify->add_option("--tol", o.tol, "NAME=VALUE overrides a tolerance; a bare VALUE scales all")->take_all();
  verify->add_option("--basis", o.basis, "Hermite basis size");
  verify->add_option("--grid-n", o.grid_n, "grid points");
  verify->add_option("--grid-xmax", o.grid_xmax, "grid half-width");
  verify->add_option("--out", o.out_path, "write the JSON report to this file");
  verify->add_option("--csv", o.csv_path, "write a CSV summary to this file");
  verify->add_flag("--no-timing", o.no_timing, "omit wall times (byte-identical reports per seed)");

  CLI::App* index = app.add_subcommand("index", "Maslov-type index nu of a matrix or generator file");
  index->add_option("file", o.files, "matrix or generator JSON")->required();
  index->add_option("--m", o.m, "sheet index m of the generator");
  add_io(index);

  CLI::App* factor = app.add_subcommand("factor", "free factorization and split into two free factors");
  factor->add_option("file", o.files, "matrix or generator JSON")->required();
  factor->add_option("--tol", o.tol, "product residual threshold");
  add_io(factor);

  CLI::App* cayley = app.add_subcommand("cayley", "Cayley matrix M_S, or S from M with --inverse");
  cayley->add_option("file", o.files, "matrix JSON")->required();
  cayley->add_flag("--inverse", o.inverse, "input is the symmetric M");
  cayley->add_option("--tol", o.tol, "round trip threshold");
  add_io(cayley);

  CLI::App* trace = app.add_subcommand("trace-check", "tapered Hermite trace of a rotation");
  trace->add_option("--theta", o.theta, "rotation angle");
  trace->add_option("--nu", o.nu, "index nu (mod 4)");
  trace->add_option("--basis", o.basis, "Hermite basis size (default 128)");
  trace->add_option("--grid-n", o.grid_n, "grid points");
  trace->add_option("--grid-xmax", o.grid_xmax, "grid half-width");
  trace->add_option("--tol", o.tol, "absolute error threshold");
  add_io(trace);

  CLI::App* compose = app.add_subcommand("compose", "composition index nu'' and its basis oracle");
  compose->add_option("files", o.files, "two descriptor JSON files")->required()->expected(2);
  compose->add_option("--basis", o.basis, "Hermite basis size (default 64)");
  compose->add_option("--tol", o.tol, "oracle residual threshold");
  add_io(compose);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  if (verify->parsed()) return dispatch_errors([&] { return cmd_verify(o, out, err); }, err);
  if (index->parsed()) return dispatch_errors([&] { return cmd_index(o, out); }, err);
  if (factor->parsed()) return dispatch_errors([&] { return cmd_factor(o, out); }, err);
  if (cayley->parsed()) return dispatch_errors([&] { return cmd_cayley(o, out); }, err);
  if (trace->parsed()) return dispatch_errors([&] { return cmd_trace(o, out); }, err);
  return dispatch_errors([&] { return cmd_compose(o, out); }, err);
}

}  // namespace metasymp::cli
