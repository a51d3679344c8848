#pragma once

#include <string>

#include "odeident/dynamics.hpp"
#include "odeident/realjordan.hpp"

namespace odeident {

// Doubles as text with 17 significant digits (round-trips exactly).
std::string format_double(double x);

// Headerless numeric grid, one matrix row per line.
Mat read_matrix_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const Mat& M);
std::string matrix_to_csv(const Mat& M);
Mat parse_matrix_csv(const std::string& text);

// A single row or a single column.
Vec read_vector_csv(const std::string& path);

// Long format with header time,dim,value; dims are 1-indexed and every
// (time, dim) pair appears exactly once.
Observations read_long_csv(const std::string& path);
void write_long_csv(const std::string& path, const TimeGrid& grid, const Mat& Y);
std::string long_to_csv(const TimeGrid& grid, const Mat& Y);
Observations parse_long_csv(const std::string& text);

}  // namespace odeident
