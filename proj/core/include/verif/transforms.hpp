#pragma once

#include "verif/grid.hpp"

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace verif::tf {

// A set of grid sites (0-based flat indices) acting as the locality unit for
// patched scores.
struct Patch {
    std::vector<int> sites;

    int size() const { return static_cast<int>(sites.size()); }
    void validate(int d) const;
};

// Square patches of side s with full support, anchors advancing by `stride`.
std::vector<Patch> square_patches(const GridDomain& grid, int side, int stride = 1);

// Deterministic map from d-vectors to k-vectors, applied memberwise to
// ensembles and pointwise to observations.
struct Transformation {
    std::string name;
    int input_dim = 0;
    int output_dim = 0;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply;

    Eigen::VectorXd operator()(const Eigen::VectorXd& x) const { return apply(x); }
    // Row-wise application to an ensemble (the empirical pushforward).
    Eigen::MatrixXd push(const Eigen::MatrixXd& members) const;
};

struct LagVector {
    int drow = 0;
    int dcol = 0;
};

enum class PatchStat { Mean, Total, Min, Max, Variance, Moment };
enum class IsotropyAxes { Grid, Diagonal };
enum class ChainingKind { Identity, ThresholdClamp, Indicator };

Transformation projection(std::vector<int> indices, int d);
Transformation patch_statistic(const Patch& p, PatchStat stat, int d, int moment_order = 1);
Transformation fte(const Patch& p, double t, int d);
Transformation variogram_pair(int i, int j, double p, int d);
Transformation directed_variogram(const GridDomain& grid, LagVector h, double p);
Transformation isotropy_statistic(const GridDomain& grid, int h, IsotropyAxes axes);
// Second difference at the cell anchored at (row, col); requires all four
// corners inside the grid.
Transformation p_variation_cell(const GridDomain& grid, int row, int col, double p);
Transformation chaining(ChainingKind kind, int d, double t = 0.0);
Transformation chaining_custom(std::function<double(double)> v, int d, std::string name = "custom");

// Number of sites i with i + h inside the grid.
int lag_domain_size(const GridDomain& grid, LagVector h);
// gamma_X(h) = (1 / 2|D(h)|) sum over D(h) of |x_i - x_{i+h}|^p.
double directed_variogram_value(const GridDomain& grid, LagVector h, double p,
                                const Eigen::VectorXd& x);

} // namespace verif::tf
