#pragma once

#include <Eigen/Dense>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace verif {

// Regular grid of sites. Sites are addressed 1-based as (row, col); the flat
// layout is row-major starting at (1,1), matching the v1..vd CSV column order.
struct GridDomain {
    int width = 1;   // columns
    int height = 1;  // rows

    GridDomain() = default;
    GridDomain(int w, int h) : width(w), height(h) {
        if (w < 1 || h < 1) throw std::invalid_argument("GridDomain: width and height must be >= 1");
    }

    int size() const { return width * height; }

    // (row, col) 1-based -> 0-based flat index.
    int flat(int row, int col) const {
        if (row < 1 || row > height || col < 1 || col > width)
            throw std::out_of_range("GridDomain::flat: site outside grid");
        return (row - 1) * width + (col - 1);
    }

    bool contains(int row, int col) const {
        return row >= 1 && row <= height && col >= 1 && col <= width;
    }

    std::pair<int, int> site(int flat_index) const {
        if (flat_index < 0 || flat_index >= size())
            throw std::out_of_range("GridDomain::site: flat index outside grid");
        return {flat_index / width + 1, flat_index % width + 1};
    }
};

using Observation = Eigen::VectorXd;

// Ensemble forecast: M equally weighted members, one d-vector per row.
struct EnsembleForecast {
    Eigen::MatrixXd members;  // M x d

    int size() const { return static_cast<int>(members.rows()); }
    int dim() const { return static_cast<int>(members.cols()); }

    void validate() const {
        if (members.rows() < 1) throw std::invalid_argument("EnsembleForecast: M >= 1 required");
        if (!members.allFinite()) throw std::invalid_argument("EnsembleForecast: non-finite member value");
    }
};

// Per-observation score values for one (score, forecast) pair.
struct ScoreSeries {
    std::string score_name;
    std::string forecast_name;
    std::vector<double> values;

    int n() const { return static_cast<int>(values.size()); }
    double mean() const;
    double std_error() const;  // sample s.e. of the mean
};

// Named scoring rule plus parameters, validated at evaluation time.
struct ScoringRuleSpec {
    std::string name;
    std::map<std::string, double> params;
    std::map<std::string, std::string> options;

    double param(const std::string& key, double fallback) const {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    }
    double required(const std::string& key) const {
        auto it = params.find(key);
        if (it == params.end())
            throw std::invalid_argument("rule '" + name + "' missing parameter '" + key + "'");
        return it->second;
    }
    std::string option(const std::string& key, const std::string& fallback) const {
        auto it = options.find(key);
        return it == options.end() ? fallback : it->second;
    }
};

} // namespace verif
