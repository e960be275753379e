#include "verif/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace verif::io {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

[[noreturn]] void fail(const std::string& path, std::size_t line, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

} // namespace

Eigen::MatrixXd read_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::size_t lineno = 0;
    // Header: v1,...,vd (comment lines starting with # are skipped).
    std::size_t d = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto cells = split(line);
        for (std::size_t i = 0; i < cells.size(); ++i)
            if (cells[i] != "v" + std::to_string(i + 1))
                fail(path, lineno, "expected header v1..vd, got '" + cells[i] + "'");
        d = cells.size();
        break;
    }
    if (d == 0) throw std::runtime_error(path + ": missing v1..vd header");

    std::vector<double> values;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto cells = split(line);
        if (cells.size() != d)
            fail(path, lineno, "expected " + std::to_string(d) + " columns, got " +
                                   std::to_string(cells.size()));
        for (const auto& cell : cells) {
            double v = 0.0;
            auto begin = cell.data();
            auto end = cell.data() + cell.size();
            while (begin != end && *begin == ' ') ++begin;
            auto [ptr, ec] = std::from_chars(begin, end, v);
            if (ec != std::errc{} || ptr != end)
                fail(path, lineno, "malformed number '" + cell + "'");
            if (!std::isfinite(v)) fail(path, lineno, "non-finite value");
            values.push_back(v);
        }
        ++rows;
    }
    if (rows == 0) throw std::runtime_error(path + ": no data rows");
    Eigen::MatrixXd m(rows, d);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < d; ++c) m(r, c) = values[r * d + c];
    return m;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_matrix(const std::string& path, const Eigen::MatrixXd& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (int c = 0; c < m.cols(); ++c) out << (c ? "," : "") << "v" << c + 1;
    out << "\n";
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c)
            out << (c ? "," : "") << format_double(m(r, c));
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_table(const std::string& path, const std::vector<std::string>& comments,
                 const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& c : comments) out << "# " << c << "\n";
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("write_table: row width mismatch");
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace verif::io
