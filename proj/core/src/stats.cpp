#include "verif/stats.hpp"

#include "verif/quadrature.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace verif::stats {

ComparisonResult dm_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dm_test: length mismatch");
    const std::size_t n = a.size();
    if (n < 2) throw std::invalid_argument("dm_test: n >= 2 required");
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = a[i] - b[i] - mean;
        var += d * d;
    }
    var /= static_cast<double>(n - 1);

    ComparisonResult r;
    r.n = static_cast<int>(n);
    if (var == 0.0) {
        if (mean == 0.0) {
            r.dm_statistic = 0.0;
            r.p_value = 1.0;
            r.better = '=';
        } else {
            r.dm_statistic = mean > 0.0 ? std::numeric_limits<double>::infinity()
                                        : -std::numeric_limits<double>::infinity();
            r.p_value = 0.0;
            r.better = mean > 0.0 ? 'B' : 'A';  // lower score is better
        }
        return r;
    }
    r.dm_statistic = mean / std::sqrt(var / static_cast<double>(n));
    r.p_value = 2.0 * norm_cdf(-std::abs(r.dm_statistic));
    if (r.p_value < 0.05) r.better = r.dm_statistic > 0.0 ? 'B' : 'A';
    return r;
}

ComparisonResult dm_test(const ScoreSeries& a, const ScoreSeries& b) {
    return dm_test(a.values, b.values);
}

ScoreSummary summarize(const std::vector<std::vector<double>>& repetitions,
                       double ideal_mean) {
    if (repetitions.empty()) throw std::invalid_argument("summarize: no repetitions");
    if (ideal_mean == 0.0) throw std::invalid_argument("summarize: ideal mean is zero");
    ScoreSummary s;
    double total = 0.0;
    std::size_t count = 0;
    for (const auto& rep : repetitions) {
        if (rep.empty()) throw std::invalid_argument("summarize: empty repetition");
        double m = 0.0;
        for (double v : rep) m += v;
        total += m;
        count += rep.size();
        s.repetition_means.push_back(m / static_cast<double>(rep.size()));
    }
    s.mean = total / static_cast<double>(count);
    double var = 0.0;
    for (const auto& rep : repetitions)
        for (double v : rep) var += (v - s.mean) * (v - s.mean);
    if (count > 1)
        s.std_error = std::sqrt(var / static_cast<double>(count - 1) /
                                static_cast<double>(count));
    s.rescaled_mean = s.mean / ideal_mean;
    return s;
}

} // namespace verif::stats
