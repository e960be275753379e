// Score comparison statistics: Diebold-Mariano tests and summaries.
#pragma once

#include "verif/grid.hpp"

#include <string>
#include <vector>

namespace verif::stats {

struct ComparisonResult {
    double dm_statistic = 0.0;
    double p_value = 1.0;
    int n = 0;
    char better = '=';  // 'A', 'B' or '=' at the 95% level
};

// Paired Diebold-Mariano test on scores for the same observations. Lag-0
// variance only: the simulated observations are independent draws, so no
// serial-correlation correction is applied.
ComparisonResult dm_test(const std::vector<double>& a, const std::vector<double>& b);
ComparisonResult dm_test(const ScoreSeries& a, const ScoreSeries& b);

struct ScoreSummary {
    double mean = 0.0;
    double std_error = 0.0;
    double rescaled_mean = 0.0;  // mean divided by the ideal-forecast mean
    std::vector<double> repetition_means;
};

ScoreSummary summarize(const std::vector<std::vector<double>>& repetitions,
                       double ideal_mean);

} // namespace verif::stats
