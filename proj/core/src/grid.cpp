#include "verif/grid.hpp"

#include <cmath>
#include <numeric>

namespace verif {

double ScoreSeries::mean() const {
    if (values.empty()) return 0.0;
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double ScoreSeries::std_error() const {
    const auto m = static_cast<double>(values.size());
    if (m < 2) return 0.0;
    double mu = mean();
    double ss = 0.0;
    for (double v : values) ss += (v - mu) * (v - mu);
    return std::sqrt(ss / (m - 1.0) / m);
}

} // namespace verif
