#pragma once

#include "latentbench/graph.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace latentbench {

/// Locale-independent rendering with 17 significant digits.
std::string format_double(double value);
/// Throws InvalidRange when the text is not a complete floating-point literal.
double parse_double(std::string_view text);

/// Dense matrix as CSV without a header, `\n` line endings.
std::string format_matrix_csv(const Matrix& m);
/// Reads a headerless numeric CSV produced by format_matrix_csv.
Matrix parse_matrix_csv(std::string_view text);

/// Data table with a header row of column names.
std::string format_table_csv(const std::vector<std::string>& names, const Matrix& values);

}  // namespace latentbench
