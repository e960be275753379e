// CSV exchange formats: matrices with a v1..vd header (one row per ensemble
// member or per observation) and simple table writing for results.
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace verif::io {

// Reads a CSV with header v1,...,vd; one numeric row per line. Errors name
// the offending 1-based line.
Eigen::MatrixXd read_matrix(const std::string& path);

void write_matrix(const std::string& path, const Eigen::MatrixXd& m);

// Generic table writer: optional comment lines (emitted as "# ..."), a header
// row, and string cells. Used for the experiment outputs.
void write_table(const std::string& path, const std::vector<std::string>& comments,
                 const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows);

std::string format_double(double v);

} // namespace verif::io
