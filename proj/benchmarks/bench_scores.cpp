#include "verif/compose.hpp"
#include "verif/grf.hpp"
#include "verif/oracles.hpp"
#include "verif/rng.hpp"
#include "verif/univariate.hpp"

#include <benchmark/benchmark.h>

using namespace verif;

namespace {

struct Fixture {
    GridDomain grid{20, 20};
    grf::FieldSampler field{grf::PowerExpCovariance{}, grid};
    Eigen::VectorXd y;
    Eigen::MatrixXd members;

    Fixture() {
        StreamRng rng(7, 0);
        y = field.sample(rng);
        grf::FieldForecastSpec spec;
        grf::ForecastModel model(spec, grid);
        auto inst = model.instance(rng);
        members = model.sample_members(inst, 100, rng);
    }
};

Fixture& fixture() {
    static Fixture f;
    return f;
}

void bm_crps_ensemble(benchmark::State& state) {
    auto& f = fixture();
    std::vector<double> col(f.members.rows());
    for (Eigen::Index k = 0; k < f.members.rows(); ++k) col[k] = f.members(k, 0);
    uni::UnivariateEnsemble e(col);
    for (auto _ : state) benchmark::DoNotOptimize(uni::crps_ensemble(e, f.y(0)));
}
BENCHMARK(bm_crps_ensemble);

void bm_energy_score(benchmark::State& state) {
    auto& f = fixture();
    for (auto _ : state)
        benchmark::DoNotOptimize(mv::energy_score(verif::EnsembleForecast{f.members}, f.y, 1.0));
}
BENCHMARK(bm_energy_score);

void bm_patched_es(benchmark::State& state) {
    auto& f = fixture();
    const int s = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(compose::patched_energy_score(f.members, f.y, f.grid, s));
}
BENCHMARK(bm_patched_es)->Arg(2)->Arg(5);

void bm_closed_vs(benchmark::State& state) {
    auto& f = fixture();
    auto w = mv::PairWeights::uniform(f.grid.size());
    for (auto _ : state)
        benchmark::DoNotOptimize(
            oracle::closed_vs_from_cov(f.field.covariance(), 0.5, w, f.y));
}
BENCHMARK(bm_closed_vs);

void bm_variogram_score_ensemble(benchmark::State& state) {
    auto& f = fixture();
    auto w = mv::PairWeights::uniform(f.grid.size());
    for (auto _ : state)
        benchmark::DoNotOptimize(mv::variogram_score(verif::EnsembleForecast{f.members}, f.y, 0.5, w));
}
BENCHMARK(bm_variogram_score_ensemble);

void bm_field_sampling(benchmark::State& state) {
    auto& f = fixture();
    grf::FieldForecastSpec spec;
    grf::ForecastModel model(spec, f.grid);
    StreamRng rng(11, 1);
    auto inst = model.instance(rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(model.sample_members(inst, 100, rng));
}
BENCHMARK(bm_field_sampling);

} // namespace

BENCHMARK_MAIN();
