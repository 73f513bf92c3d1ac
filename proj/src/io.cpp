#include "metasymp/io.hpp"

#include <fstream>
#include <sstream>

#include "metasymp/errors.hpp"

namespace metasymp::io {

namespace {

int read_n(const json& j) {
  if (!j.contains("n") || !j["n"].is_number_integer()) throw DimensionError("missing integer field \"n\"");
  const int n = j["n"].get<int>();
  if (n < 1) throw DimensionError("\"n\" must be positive");
  return n;
}

Mat sized(const json& rows, Eigen::Index r, Eigen::Index c, const char* what) {
  Mat X = matrix_from_rows(rows);
  if (X.rows() != r || X.cols() != c) {
    std::ostringstream os;
    os << what << ": expected " << r << "x" << c << ", got " << X.rows() << "x" << X.cols();
    throw DimensionError(os.str());
  }
  return X;
}

}  // namespace

json to_json(const Mat& X) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < X.cols(); ++j) row.push_back(X(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat matrix_from_rows(const json& rows) {
  if (!rows.is_array() || rows.empty()) throw DimensionError("matrix rows must be a non-empty array");
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows[0].size());
  Mat X(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c) throw DimensionError("ragged matrix rows");
    for (Eigen::Index j = 0; j < c; ++j) X(i, j) = row[static_cast<std::size_t>(j)].get<double>();
  }
  return X;
}

json to_json(const SymplecticMatrix& S) { return {{"n", S.n()}, {"rows", to_json(S.matrix())}}; }

json to_json(const FreeGenerator& W) {
  json j = {{"n", W.n()}, {"P", to_json(W.P())}, {"L", to_json(W.L())}, {"Q", to_json(W.Q())}};
  j["m"] = W.m() ? json(W.m()->value()) : json(nullptr);
  return j;
}

json to_json(const MWDescriptor& D) {
  json j = to_json(D.S());
  j["nu"] = D.nu().value();
  return j;
}

json to_json(const GridFunction& f) {
  json re = json::array(), im = json::array();
  for (const Complex& v : f.values()) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  return {{"x_max", f.grid().x_max}, {"N", f.grid().N}, {"re", std::move(re)}, {"im", std::move(im)}};
}

json to_json(const OperatorMatrix& O) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < O.entries.rows(); ++i) {
    json rr = json::array(), ri = json::array();
    for (Eigen::Index j = 0; j < O.entries.cols(); ++j) {
      rr.push_back(O.entries(i, j).real());
      ri.push_back(O.entries(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return {{"n_basis", O.entries.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

SymplecticMatrix symplectic_from_json(const json& j) {
  const int n = read_n(j);
  if (!j.contains("rows")) throw DimensionError("missing field \"rows\"");
  return SymplecticMatrix(sized(j["rows"], 2 * n, 2 * n, "rows"));
}

FreeGenerator generator_from_json(const json& j) {
  const int n = read_n(j);
  for (const char* key : {"P", "L", "Q"})
    if (!j.contains(key)) throw DimensionError(std::string("missing field \"") + key + "\"");
  std::optional<IndexMod4> m;
  if (j.contains("m") && !j["m"].is_null()) m = IndexMod4(j["m"].get<int>());
  return FreeGenerator(sized(j["P"], n, n, "P"), sized(j["L"], n, n, "L"), sized(j["Q"], n, n, "Q"), m);
}

MWDescriptor descriptor_from_json(const json& j) {
  if (!j.contains("nu") || !j["nu"].is_number_integer()) throw DimensionError("missing integer field \"nu\"");
  return MWDescriptor(symplectic_from_json(j), IndexMod4(j["nu"].get<int>()));
}

GridFunction grid_function_from_json(const json& j) {
  GridSpec g{j.at("x_max").get<double>(), j.at("N").get<std::size_t>()};
  const json& re = j.at("re");
  const json& im = j.at("im");
  if (re.size() != g.N || im.size() != g.N) throw DimensionError("grid function needs N real and N imaginary parts");
  std::vector<Complex> v(g.N);
  for (std::size_t k = 0; k < g.N; ++k) v[k] = {re[k].get<double>(), im[k].get<double>()};
  return GridFunction(g, std::move(v));
}

CMat cmat_from_json(const json& j) {
  const Mat re = matrix_from_rows(j.at("re"));
  const Mat im = matrix_from_rows(j.at("im"));
  if (re.rows() != im.rows() || re.cols() != im.cols()) throw DimensionError("real and imaginary parts differ");
  CMat X(re.rows(), re.cols());
  X.real() = re;
  X.imag() = im;
  return X;
}

MatrixInput matrix_input_from_json(const json& j) {
  if (j.contains("rows")) return symplectic_from_json(j);
  if (j.contains("L")) return generator_from_json(j);
  throw DimensionError("input is neither a matrix (\"rows\") nor a generator (\"P\", \"L\", \"Q\")");
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw DimensionError(path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace metasymp::io
