#pragma once

// CSV format used for every matrix and vector file: first line `rows,cols`,
// then one comma-separated line per row, printed with 17 significant digits.
// Vectors are stored as a single column.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "ripkit/linalg.hpp"

namespace ripkit {

void write_matrix_csv(std::ostream& os, const Matrix& m);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix_csv(std::istream& is);
Matrix read_matrix_csv(const std::filesystem::path& path);

void write_vector_csv(std::ostream& os, const Vector& v);
void write_vector_csv(const std::filesystem::path& path, const Vector& v);
// Accepts either n x 1 or 1 x n.
Vector read_vector_csv(std::istream& is);
Vector read_vector_csv(const std::filesystem::path& path);

std::string format_double(double x);

}  // namespace ripkit
