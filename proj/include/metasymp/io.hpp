#pragma once

// JSON encodings shared by the CLI and the reports.
//   matrix:     {"n": int, "rows": [[...], ...]}
//   generator:  {"n": int, "P": rows, "L": rows, "Q": rows, "m": int | null}
//   descriptor: matrix fields plus "nu": int
//   grid:       {"x_max": real, "N": int, "re": [...], "im": [...]}

#include <filesystem>
#include <string>
#include <variant>

#include <json.hpp>

#include "metasymp/basis.hpp"
#include "metasymp/grid.hpp"
#include "metasymp/symplectic.hpp"

namespace metasymp::io {

using nlohmann::json;

json to_json(const Mat& X);
Mat matrix_from_rows(const json& rows);

json to_json(const SymplecticMatrix& S);
json to_json(const FreeGenerator& W);
json to_json(const MWDescriptor& D);
json to_json(const GridFunction& f);
json to_json(const OperatorMatrix& O);

SymplecticMatrix symplectic_from_json(const json& j);
FreeGenerator generator_from_json(const json& j);
MWDescriptor descriptor_from_json(const json& j);
GridFunction grid_function_from_json(const json& j);
CMat cmat_from_json(const json& j);

/// A matrix file holds either a symplectic matrix or a generator.
using MatrixInput = std::variant<SymplecticMatrix, FreeGenerator>;
MatrixInput matrix_input_from_json(const json& j);

json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace metasymp::io
