// The four simulation studies: marginal misspecification, dependence
// structure, anisotropy, and the double-penalty effect.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace verif::exp {

struct ExperimentConfig {
    std::string name;  // marginals | dependence | anisotropy | double_penalty
    int grid_side = 20;
    int n_obs = 500;
    int members = 100;
    int reps = 10;
    std::uint64_t seed = 1;
    int threads = 0;  // 0: VERIF_THREADS env var, then hardware concurrency

    void validate() const;
};

struct ExperimentResult {
    std::vector<std::string> scores;
    std::vector<std::string> forecasts;  // index 0 is always "ideal"
    // values[score][forecast][rep][obs]
    std::vector<std::vector<std::vector<std::vector<double>>>> values;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Writes scores.csv, summary.csv and dm_tests.csv into out_dir (which must
// exist). Output is deterministic given the seed, independent of threads.
void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& res,
                   const std::string& out_dir);

int default_threads();

} // namespace verif::exp
