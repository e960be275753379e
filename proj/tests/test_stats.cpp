#include "verif/rng.hpp"
#include "verif/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace verif;

TEST_CASE("dm test on identical series") {
    std::vector<double> a{1.0, 2.0, 3.0, 4.0};
    auto r = stats::dm_test(a, a);
    CHECK(r.dm_statistic == 0.0);
    CHECK(r.p_value == 1.0);
    CHECK(r.n == 4);
    CHECK(r.better == '=');
}

TEST_CASE("dm test with a constant nonzero difference") {
    // zero variance, positive mean difference: A is worse with certainty
    std::vector<double> a(100, 2.0), b(100, 1.0);
    auto r = stats::dm_test(a, b);
    CHECK(r.p_value == 0.0);
    CHECK(r.better == 'B');
    auto r2 = stats::dm_test(b, a);
    CHECK(r2.better == 'A');
}

TEST_CASE("dm test on a synthetic shifted sample") {
    StreamRng rng(41, 0);
    const int n = 400;
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
        double common = rng.normal();
        a[i] = common + 0.5 + rng.normal();
        b[i] = common;
    }
    auto r = stats::dm_test(a, b);
    // mean difference 0.5, sd of difference 1: statistic near 0.5*sqrt(400) = 10
    CHECK(r.dm_statistic == doctest::Approx(10.0).epsilon(0.25));
    CHECK(r.p_value < 0.05);
    CHECK(r.better == 'B');

    // antisymmetry
    auto rs = stats::dm_test(b, a);
    CHECK(rs.dm_statistic == doctest::Approx(-r.dm_statistic).epsilon(1e-12));
    CHECK(rs.p_value == doctest::Approx(r.p_value).epsilon(1e-12));

    // adding the same constant to both series changes nothing
    std::vector<double> a2 = a, b2 = b;
    for (int i = 0; i < n; ++i) {
        a2[i] += 7.0;
        b2[i] += 7.0;
    }
    auto rc = stats::dm_test(a2, b2);
    CHECK(rc.dm_statistic == doctest::Approx(r.dm_statistic).epsilon(1e-10));
}

TEST_CASE("dm test input validation") {
    std::vector<double> a{1.0, 2.0}, b{1.0};
    CHECK_THROWS(stats::dm_test(a, b));
    CHECK_THROWS(stats::dm_test(std::vector<double>{1.0}, std::vector<double>{2.0}));
}

TEST_CASE("summaries") {
    // two repetitions with means 1 and 3
    std::vector<std::vector<double>> reps{{0.0, 2.0}, {2.0, 4.0}};
    auto s = stats::summarize(reps, 4.0);
    CHECK(s.mean == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(s.rescaled_mean == doctest::Approx(0.5).epsilon(1e-13));
    REQUIRE(s.repetition_means.size() == 2);
    CHECK(s.repetition_means[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(s.repetition_means[1] == doctest::Approx(3.0).epsilon(1e-13));
    // pooled standard error over 4 values {0,2,2,4}: sd = sqrt(8/3), se = sd/2
    CHECK(s.std_error == doctest::Approx(std::sqrt(8.0 / 3.0) / 2.0).epsilon(1e-12));

    auto flat = stats::summarize({{5.0, 5.0, 5.0}}, 5.0);
    CHECK(flat.mean == 5.0);
    CHECK(flat.std_error == 0.0);
    CHECK(flat.rescaled_mean == 1.0);
}
