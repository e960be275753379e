#include "verif/rng.hpp"
#include "verif/transforms.hpp"

#include <doctest.h>

#include <cmath>

using namespace verif;

namespace {

Eigen::VectorXd field(std::initializer_list<double> v) {
    Eigen::VectorXd x(static_cast<int>(v.size()));
    int i = 0;
    for (double e : v) x(i++) = e;
    return x;
}

} // namespace

TEST_CASE("square patch enumeration") {
    GridDomain grid(3, 3);
    auto patches = tf::square_patches(grid, 2);
    CHECK(patches.size() == 4);
    CHECK(patches[0].sites == std::vector<int>{0, 1, 3, 4});
    auto all = tf::square_patches(grid, 3);
    CHECK(all.size() == 1);
    CHECK(all[0].size() == 9);
    auto strided = tf::square_patches(GridDomain(4, 4), 2, 2);
    CHECK(strided.size() == 4);
    CHECK_THROWS(tf::square_patches(grid, 4));
}

TEST_CASE("projection") {
    Eigen::VectorXd x = field({5, 6, 7});
    auto t = tf::projection({2}, 3);
    CHECK(t(x)(0) == 7.0);
    auto pair = tf::projection({0, 1}, 3);
    Eigen::VectorXd out = pair(x);
    CHECK(out(0) == 5.0);
    CHECK(out(1) == 6.0);
    CHECK_THROWS(tf::projection({3}, 3));
}

TEST_CASE("patch statistics") {
    tf::Patch p{{0, 1}};
    Eigen::VectorXd x = field({1, 3, 9});
    CHECK(tf::patch_statistic(p, tf::PatchStat::Mean, 3)(x)(0) == 2.0);
    CHECK(tf::patch_statistic(p, tf::PatchStat::Total, 3)(x)(0) == 4.0);
    // biased normalizer: ((1-2)^2 + (3-2)^2)/2
    CHECK(tf::patch_statistic(p, tf::PatchStat::Variance, 3)(x)(0) == 1.0);
    tf::Patch whole{{0, 1, 2}};
    Eigen::VectorXd c = field({4, 4, 4});
    CHECK(tf::patch_statistic(whole, tf::PatchStat::Min, 3)(c)(0) == 4.0);
    CHECK(tf::patch_statistic(whole, tf::PatchStat::Max, 3)(c)(0) == 4.0);
}

TEST_CASE("mean is shift equivariant") {
    tf::Patch p{{0, 1, 2}};
    auto mean = tf::patch_statistic(p, tf::PatchStat::Mean, 3);
    Eigen::VectorXd x = field({1, 2, 6});
    Eigen::VectorXd shifted = x.array() + 5.0;
    CHECK(mean(shifted)(0) == doctest::Approx(mean(x)(0) + 5.0).epsilon(1e-14));
}

TEST_CASE("fraction of threshold exceedance") {
    tf::Patch all{{0, 1, 2, 3}};
    Eigen::VectorXd x = field({0, 2, 3, -1});
    CHECK(tf::fte(all, 1.0, 4)(x)(0) == 0.5);
    CHECK(tf::fte(all, -5.0, 4)(x)(0) == 1.0);
    CHECK(tf::fte(all, 10.0, 4)(x)(0) == 0.0);
}

TEST_CASE("variogram pair transform") {
    Eigen::VectorXd x = field({0, 2});
    CHECK(tf::variogram_pair(0, 1, 0.5, 2)(x)(0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    Eigen::VectorXd eq = field({1.5, 1.5});
    CHECK(tf::variogram_pair(0, 1, 2.0, 2)(eq)(0) == 0.0);
    Eigen::VectorXd shifted = x.array() + 4.2;
    CHECK(tf::variogram_pair(0, 1, 1.0, 2)(shifted)(0) ==
          tf::variogram_pair(0, 1, 1.0, 2)(x)(0));
}

TEST_CASE("directed variogram") {
    GridDomain grid(2, 1);  // one row, two columns
    Eigen::VectorXd x = field({0, 2});
    CHECK(tf::directed_variogram_value(grid, {0, 1}, 2.0, x) == 2.0);
    CHECK(tf::lag_domain_size(grid, {0, 1}) == 1);
    CHECK(tf::lag_domain_size(grid, {1, 0}) == 0);

    GridDomain g33(3, 3);
    StreamRng rng(3, 7);
    Eigen::VectorXd f(9);
    for (int i = 0; i < 9; ++i) f(i) = rng.normal();
    tf::LagVector h{1, 1};
    double manual = 0.0;
    int n = 0;
    for (int r = 1; r <= 2; ++r)
        for (int c = 1; c <= 2; ++c) {
            manual += std::abs(f(g33.flat(r, c)) - f(g33.flat(r + 1, c + 1)));
            ++n;
        }
    CHECK(tf::directed_variogram_value(g33, h, 1.0, f) ==
          doctest::Approx(manual / (2.0 * n)).epsilon(1e-14));
    CHECK(tf::directed_variogram_value(g33, h, 1.0, Eigen::VectorXd::Ones(9)) == 0.0);
}

TEST_CASE("isotropy statistic") {
    GridDomain grid(4, 4);
    // values equal the row index: no variation along rows, strong across rows
    Eigen::VectorXd rowfield(16);
    for (int i = 0; i < 16; ++i) rowfield(i) = grid.site(i).first;
    auto t = tf::isotropy_statistic(grid, 1, tf::IsotropyAxes::Grid);
    int na = tf::lag_domain_size(grid, {1, 0});
    CHECK(t(rowfield)(0) == doctest::Approx(-na / 2.0).epsilon(1e-12));

    // symmetric field: statistic zero
    CHECK(t(Eigen::VectorXd::Zero(16))(0) == 0.0);

    StreamRng rng(5, 5);
    auto diag = tf::isotropy_statistic(grid, 2, tf::IsotropyAxes::Diagonal);
    for (int rep = 0; rep < 100; ++rep) {
        Eigen::VectorXd f(16);
        for (int i = 0; i < 16; ++i) f(i) = rng.normal();
        CHECK(t(f)(0) <= 0.0);
        CHECK(diag(f)(0) <= 0.0);
    }
}

TEST_CASE("p-variation cell") {
    GridDomain grid(2, 2);
    // [[0,1],[2,4]] row-major
    Eigen::VectorXd x = field({0, 1, 2, 4});
    CHECK(tf::p_variation_cell(grid, 1, 1, 2.0)(x)(0) == 1.0);
    // additively separable field vanishes
    Eigen::VectorXd sep(4);
    for (int i = 0; i < 4; ++i) {
        auto [r, c] = grid.site(i);
        sep(i) = 3.0 * r + 0.5 * c * c;
    }
    CHECK(tf::p_variation_cell(grid, 1, 1, 1.0)(sep)(0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(tf::p_variation_cell(grid, 1, 1, 0.5)(Eigen::VectorXd::Ones(4))(0) == 0.0);
    CHECK_THROWS(tf::p_variation_cell(grid, 2, 2, 1.0));
}

TEST_CASE("chaining functions") {
    auto ident = tf::chaining(tf::ChainingKind::Identity, 2);
    Eigen::VectorXd x = field({0, 2});
    CHECK(ident(x).isApprox(x, 0.0));
    auto ind = tf::chaining(tf::ChainingKind::Indicator, 2, 1.0);
    Eigen::VectorXd b = ind(x);
    CHECK(b(0) == 0.0);
    CHECK(b(1) == 1.0);
    auto clamp = tf::chaining(tf::ChainingKind::ThresholdClamp, 2, 1.0);
    Eigen::VectorXd cl = clamp(x);
    CHECK(cl(0) == 1.0);
    CHECK(cl(1) == 2.0);
}

TEST_CASE("transformations are deterministic") {
    GridDomain grid(3, 3);
    auto t = tf::isotropy_statistic(grid, 1, tf::IsotropyAxes::Diagonal);
    StreamRng rng(1, 1);
    Eigen::VectorXd f(9);
    for (int i = 0; i < 9; ++i) f(i) = rng.normal();
    CHECK(t(f)(0) == t(f)(0));
}
