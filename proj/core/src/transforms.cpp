#include "verif/transforms.hpp"

#include "verif/multivariate.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace verif::tf {

void Patch::validate(int d) const {
    if (sites.empty()) throw std::invalid_argument("Patch: empty");
    std::set<int> seen;
    for (int s : sites) {
        if (s < 0 || s >= d) throw std::out_of_range("Patch: site outside grid");
        if (!seen.insert(s).second) throw std::invalid_argument("Patch: duplicate site");
    }
}

std::vector<Patch> square_patches(const GridDomain& grid, int side, int stride) {
    if (side < 1 || side > std::min(grid.width, grid.height))
        throw std::invalid_argument("square_patches: side outside grid");
    if (stride < 1) throw std::invalid_argument("square_patches: stride >= 1 required");
    std::vector<Patch> patches;
    for (int r = 1; r + side - 1 <= grid.height; r += stride) {
        for (int c = 1; c + side - 1 <= grid.width; c += stride) {
            Patch p;
            p.sites.reserve(side * side);
            for (int dr = 0; dr < side; ++dr)
                for (int dc = 0; dc < side; ++dc)
                    p.sites.push_back(grid.flat(r + dr, c + dc));
            patches.push_back(std::move(p));
        }
    }
    return patches;
}

Eigen::MatrixXd Transformation::push(const Eigen::MatrixXd& members) const {
    if (members.cols() != input_dim)
        throw std::invalid_argument("Transformation::push: dimension mismatch");
    Eigen::MatrixXd out(members.rows(), output_dim);
    for (int m = 0; m < members.rows(); ++m)
        out.row(m) = apply(members.row(m).transpose()).transpose();
    return out;
}

Transformation projection(std::vector<int> indices, int d) {
    std::set<int> seen;
    for (int i : indices) {
        if (i < 0 || i >= d) throw std::out_of_range("projection: index out of range");
        if (!seen.insert(i).second) throw std::invalid_argument("projection: duplicate index");
    }
    int k = static_cast<int>(indices.size());
    return Transformation{
        "projection", d, k,
        [idx = std::move(indices), k](const Eigen::VectorXd& x) {
            Eigen::VectorXd out(k);
            for (int i = 0; i < k; ++i) out(i) = x(idx[i]);
            return out;
        }};
}

Transformation patch_statistic(const Patch& p, PatchStat stat, int d, int moment_order) {
    p.validate(d);
    if (stat == PatchStat::Moment && moment_order < 1)
        throw std::invalid_argument("patch_statistic: moment order >= 1 required");
    auto sites = p.sites;
    auto fn = [sites, stat, moment_order](const Eigen::VectorXd& x) {
        const double n = static_cast<double>(sites.size());
        Eigen::VectorXd out(1);
        switch (stat) {
            case PatchStat::Mean:
            case PatchStat::Total: {
                double s = 0.0;
                for (int i : sites) s += x(i);
                out(0) = stat == PatchStat::Mean ? s / n : s;
                break;
            }
            case PatchStat::Min: {
                double v = x(sites[0]);
                for (int i : sites) v = std::min(v, x(i));
                out(0) = v;
                break;
            }
            case PatchStat::Max: {
                double v = x(sites[0]);
                for (int i : sites) v = std::max(v, x(i));
                out(0) = v;
                break;
            }
            case PatchStat::Variance: {
                double mu = 0.0;
                for (int i : sites) mu += x(i);
                mu /= n;
                double ss = 0.0;
                for (int i : sites) ss += (x(i) - mu) * (x(i) - mu);
                out(0) = ss / n;  // 1/|P| normalizer
                break;
            }
            case PatchStat::Moment: {
                double s = 0.0;
                for (int i : sites) s += std::pow(x(i), moment_order);
                out(0) = s / n;
                break;
            }
        }
        return out;
    };
    return Transformation{"patch_statistic", d, 1, std::move(fn)};
}

Transformation fte(const Patch& p, double t, int d) {
    p.validate(d);
    auto sites = p.sites;
    return Transformation{
        "fte", d, 1,
        [sites, t](const Eigen::VectorXd& x) {
            double c = 0.0;
            for (int i : sites)
                if (x(i) >= t) c += 1.0;
            Eigen::VectorXd out(1);
            out(0) = c / static_cast<double>(sites.size());
            return out;
        }};
}

Transformation variogram_pair(int i, int j, double p, int d) {
    if (i < 0 || i >= d || j < 0 || j >= d) throw std::out_of_range("variogram_pair: site out of range");
    if (!(p > 0.0)) throw std::invalid_argument("variogram_pair: p > 0 required");
    return Transformation{
        "variogram_pair", d, 1,
        [i, j, p](const Eigen::VectorXd& x) {
            Eigen::VectorXd out(1);
            out(0) = mv::abs_pow(x(i) - x(j), p);
            return out;
        }};
}

int lag_domain_size(const GridDomain& grid, LagVector h) {
    int n = 0;
    for (int r = 1; r <= grid.height; ++r)
        for (int c = 1; c <= grid.width; ++c)
            if (grid.contains(r + h.drow, c + h.dcol)) ++n;
    return n;
}

double directed_variogram_value(const GridDomain& grid, LagVector h, double p,
                                const Eigen::VectorXd& x) {
    double sum = 0.0;
    int n = 0;
    for (int r = 1; r <= grid.height; ++r) {
        for (int c = 1; c <= grid.width; ++c) {
            if (!grid.contains(r + h.drow, c + h.dcol)) continue;
            sum += mv::abs_pow(x(grid.flat(r, c)) - x(grid.flat(r + h.drow, c + h.dcol)), p);
            ++n;
        }
    }
    if (n == 0) throw std::invalid_argument("directed_variogram: empty lag domain");
    return sum / (2.0 * n);
}

Transformation directed_variogram(const GridDomain& grid, LagVector h, double p) {
    if (lag_domain_size(grid, h) == 0)
        throw std::invalid_argument("directed_variogram: empty lag domain");
    return Transformation{
        "directed_variogram", grid.size(), 1,
        [grid, h, p](const Eigen::VectorXd& x) {
            Eigen::VectorXd out(1);
            out(0) = directed_variogram_value(grid, h, p, x);
            return out;
        }};
}

Transformation isotropy_statistic(const GridDomain& grid, int h, IsotropyAxes axes) {
    if (h < 1) throw std::invalid_argument("isotropy_statistic: h >= 1 required");
    LagVector a, b;
    if (axes == IsotropyAxes::Grid) {
        a = {h, 0};
        b = {0, h};
    } else {
        a = {h, h};
        b = {-h, h};
    }
    double na = lag_domain_size(grid, a);
    double nb = lag_domain_size(grid, b);
    if (na == 0 || nb == 0) throw std::invalid_argument("isotropy_statistic: empty lag domain");
    return Transformation{
        "isotropy_statistic", grid.size(), 1,
        [grid, a, b, na, nb](const Eigen::VectorXd& x) {
            double ga = directed_variogram_value(grid, a, 2.0, x);
            double gb = directed_variogram_value(grid, b, 2.0, x);
            double denom = 2.0 * ga * ga / na + 2.0 * gb * gb / nb;
            Eigen::VectorXd out(1);
            // Constant fields give 0/0; perfectly isotropic by convention.
            out(0) = denom == 0.0 ? 0.0 : -(ga - gb) * (ga - gb) / denom;
            return out;
        }};
}

Transformation p_variation_cell(const GridDomain& grid, int row, int col, double p) {
    if (row < 1 || row >= grid.height || col < 1 || col >= grid.width)
        throw std::out_of_range("p_variation_cell: cell corner outside restricted domain");
    int i00 = grid.flat(row, col);
    int i10 = grid.flat(row + 1, col);
    int i01 = grid.flat(row, col + 1);
    int i11 = grid.flat(row + 1, col + 1);
    return Transformation{
        "p_variation_cell", grid.size(), 1,
        [i00, i10, i01, i11, p](const Eigen::VectorXd& x) {
            Eigen::VectorXd out(1);
            out(0) = mv::abs_pow(x(i11) - x(i10) - x(i01) + x(i00), p);
            return out;
        }};
}

Transformation chaining_custom(std::function<double(double)> v, int d, std::string name) {
    return Transformation{
        std::move(name), d, d,
        [v = std::move(v)](const Eigen::VectorXd& x) {
            Eigen::VectorXd out(x.size());
            for (int i = 0; i < x.size(); ++i) out(i) = v(x(i));
            return out;
        }};
}

Transformation chaining(ChainingKind kind, int d, double t) {
    switch (kind) {
        case ChainingKind::Identity:
            return chaining_custom([](double x) { return x; }, d, "identity");
        case ChainingKind::ThresholdClamp:
            return chaining_custom([t](double x) { return std::max(x, t); }, d, "threshold_clamp");
        case ChainingKind::Indicator:
            return chaining_custom([t](double x) { return x >= t ? 1.0 : 0.0; }, d, "indicator");
    }
    throw std::invalid_argument("chaining: unknown kind");
}

} // namespace verif::tf
