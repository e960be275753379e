#include "verif/experiment.hpp"

#include "verif/compose.hpp"
#include "verif/csv.hpp"
#include "verif/grf.hpp"
#include "verif/oracles.hpp"
#include "verif/quadrature.hpp"
#include "verif/rng.hpp"
#include "verif/stats.hpp"
#include "verif/univariate.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace verif::exp {

void ExperimentConfig::validate() const {
    if (name != "marginals" && name != "dependence" && name != "anisotropy" &&
        name != "double_penalty")
        throw std::invalid_argument("unknown experiment '" + name + "'");
    if (grid_side < 2) throw std::invalid_argument("experiment: grid side >= 2 required");
    if (n_obs < 1 || members < 2 || reps < 1)
        throw std::invalid_argument("experiment: positive counts required (members >= 2)");
}

int default_threads() {
    if (const char* env = std::getenv("VERIF_THREADS")) {
        int t = std::atoi(env);
        if (t > 0) return t;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

// One task per (repetition, observation); scores_x_forecasts output cell.
using CaseFn = std::function<void(int rep, int obs, Eigen::MatrixXd& cell)>;

ExperimentResult run_cases(const ExperimentConfig& cfg, std::vector<std::string> scores,
                           std::vector<std::string> forecasts, const CaseFn& case_fn) {
    const int n_scores = static_cast<int>(scores.size());
    const int n_forecasts = static_cast<int>(forecasts.size());
    const long total = static_cast<long>(cfg.reps) * cfg.n_obs;
    std::vector<Eigen::MatrixXd> cells(total);

    int threads = cfg.threads > 0 ? cfg.threads : default_threads();
    threads = std::min<long>(threads, total);
    std::atomic<long> next{0};
    std::atomic<bool> failed{false};
    std::string error;
    std::mutex error_mutex;
    auto worker = [&] {
        long k;
        while (!failed.load(std::memory_order_relaxed) &&
               (k = next.fetch_add(1)) < total) {
            try {
                cells[k].setZero(n_scores, n_forecasts);
                case_fn(static_cast<int>(k / cfg.n_obs), static_cast<int>(k % cfg.n_obs),
                        cells[k]);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                error = e.what();
                failed = true;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads - 1; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failed) throw std::runtime_error("experiment case failed: " + error);

    ExperimentResult res;
    res.scores = std::move(scores);
    res.forecasts = std::move(forecasts);
    res.values.assign(n_scores, std::vector<std::vector<std::vector<double>>>(
                                    n_forecasts, std::vector<std::vector<double>>(
                                                     cfg.reps, std::vector<double>(cfg.n_obs))));
    for (long k = 0; k < total; ++k) {
        int rep = static_cast<int>(k / cfg.n_obs), obs = static_cast<int>(k % cfg.n_obs);
        for (int s = 0; s < n_scores; ++s)
            for (int f = 0; f < n_forecasts; ++f)
                res.values[s][f][rep][obs] = cells[k](s, f);
    }
    return res;
}

// ---- exact aggregated univariate scores for constant Gaussian marginals ----

struct SiteGaussian {
    Eigen::VectorXd mu;  // per site
    Eigen::VectorXd sd;

    static SiteGaussian constant(int d, double mu, double sd) {
        return {Eigen::VectorXd::Constant(d, mu), Eigen::VectorXd::Constant(d, sd)};
    }
};

double exact_crps(const SiteGaussian& g, const Eigen::VectorXd& y) {
    double total = 0.0;
    for (int i = 0; i < y.size(); ++i)
        total += uni::crps_gaussian({g.mu(i), g.sd(i)}, y(i));
    return total / y.size();
}

double exact_qs(double alpha, const SiteGaussian& g, const Eigen::VectorXd& y) {
    double z = norm_quantile(alpha);
    double total = 0.0;
    for (int i = 0; i < y.size(); ++i)
        total += uni::qs(alpha, g.mu(i) + g.sd(i) * z, y(i));
    return total / y.size();
}

double exact_bs(double t, const SiteGaussian& g, const Eigen::VectorXd& y) {
    double total = 0.0;
    for (int i = 0; i < y.size(); ++i)
        total += uni::bs(t, norm_cdf((t - g.mu(i)) / g.sd(i)), y(i));
    return total / y.size();
}

double exact_se(const SiteGaussian& g, const Eigen::VectorXd& y) {
    return (g.mu - y).squaredNorm() / y.size();
}

double exact_dss(const SiteGaussian& g, const Eigen::VectorXd& y) {
    double total = 0.0;
    for (int i = 0; i < y.size(); ++i)
        total += uni::dss(g.mu(i), g.sd(i) * g.sd(i), y(i));
    return total / y.size();
}

// ---- pair machinery shared by the closed variogram-score paths ----

struct PairTable {
    std::vector<int> i, j;
    int d = 0;

    explicit PairTable(int dim) : d(dim) {
        i.reserve(dim * (dim - 1) / 2);
        j.reserve(dim * (dim - 1) / 2);
        for (int a = 0; a < dim; ++a)
            for (int b = a + 1; b < dim; ++b) {
                i.push_back(a);
                j.push_back(b);
            }
    }
    std::size_t size() const { return i.size(); }

    // E|X_i - X_j|^p per pair, for a zero-pair-mean Gaussian covariance.
    std::vector<double> forecast_means(const Eigen::MatrixXd& cov, double p) const {
        std::vector<double> m(size());
        for (std::size_t k = 0; k < size(); ++k) {
            double v = cov(i[k], i[k]) + cov(j[k], j[k]) - 2.0 * cov(i[k], j[k]);
            m[k] = v > 0.0 ? oracle::gaussian_abs_moment(p, std::sqrt(v)) : 0.0;
        }
        return m;
    }

    std::vector<double> obs_values(const Eigen::VectorXd& y, double p) const {
        std::vector<double> g(size());
        for (std::size_t k = 0; k < size(); ++k)
            g[k] = mv::abs_pow(y(i[k]) - y(j[k]), p);
        return g;
    }

    // Symmetric weights from a normalized d x d matrix, doubled because the
    // score sums over ordered pairs.
    std::vector<double> weights_from(const Eigen::MatrixXd& w) const {
        std::vector<double> out(size());
        for (std::size_t k = 0; k < size(); ++k) out[k] = w(i[k], j[k]) + w(j[k], i[k]);
        return out;
    }
};

double weighted_vs(const std::vector<double>& means, const std::vector<double>& obs,
                   const std::vector<double>& weights) {
    double total = 0.0;
    for (std::size_t k = 0; k < means.size(); ++k) {
        double d = means[k] - obs[k];
        total += weights[k] * d * d;
    }
    return total;
}

double uniform_vs(const std::vector<double>& means, const std::vector<double>& obs, int d) {
    double total = 0.0;
    for (std::size_t k = 0; k < means.size(); ++k) {
        double diff = means[k] - obs[k];
        total += diff * diff;
    }
    return total * 2.0 / (static_cast<double>(d) * (d - 1));
}

// ---- patched energy score for several sizes sharing integral images ----

// sizes must be increasing; a size equal to the grid side gives the plain ES.
void patch_norm_sums(const Eigen::VectorXd& sq, const GridDomain& grid,
                     const std::vector<int>& sizes, std::vector<double>& acc,
                     Eigen::MatrixXd& img) {
    for (int r = 1; r <= grid.height; ++r)
        for (int c = 1; c <= grid.width; ++c)
            img(r, c) = sq(grid.flat(r, c)) + img(r - 1, c) + img(r, c - 1) - img(r - 1, c - 1);
    for (std::size_t si = 0; si < sizes.size(); ++si) {
        const int s = sizes[si];
        double total = 0.0;
        for (int r = 1; r + s - 1 <= grid.height; ++r)
            for (int c = 1; c + s - 1 <= grid.width; ++c) {
                double v = img(r + s - 1, c + s - 1) - img(r - 1, c + s - 1) -
                           img(r + s - 1, c - 1) + img(r - 1, c - 1);
                total += std::sqrt(std::max(v, 0.0));
            }
        acc[si] += total;
    }
}

std::vector<double> patched_es_sizes(const Eigen::MatrixXd& members, const Eigen::VectorXd& y,
                                     const GridDomain& grid, const std::vector<int>& sizes) {
    const int M = static_cast<int>(members.rows());
    std::vector<double> term1(sizes.size(), 0.0), term2(sizes.size(), 0.0);
    Eigen::MatrixXd img = Eigen::MatrixXd::Zero(grid.height + 1, grid.width + 1);
    Eigen::VectorXd sq(grid.size());
    for (int m = 0; m < M; ++m) {
        sq = (members.row(m).transpose() - y).array().square();
        patch_norm_sums(sq, grid, sizes, term1, img);
    }
    for (int m = 0; m < M; ++m)
        for (int k = m + 1; k < M; ++k) {
            sq = (members.row(m) - members.row(k)).array().square();
            patch_norm_sums(sq, grid, sizes, term2, img);
        }
    std::vector<double> out(sizes.size());
    for (std::size_t si = 0; si < sizes.size(); ++si) {
        double n_patches = static_cast<double>(grid.height - sizes[si] + 1) *
                           (grid.width - sizes[si] + 1);
        out[si] = term1[si] / (M * n_patches) -
                  term2[si] / (static_cast<double>(M) * M * n_patches);
    }
    return out;
}

// ---- isotropy statistics for scales 1..max_h ----

std::vector<double> iso_stats(const Eigen::VectorXd& x, const GridDomain& grid, int max_h) {
    std::vector<double> out(max_h);
    for (int h = 1; h <= max_h; ++h) {
        double ga = 0.0, gb = 0.0;
        int na = 0, nb = 0;
        for (int r = 1; r <= grid.height; ++r) {
            for (int c = 1; c <= grid.width; ++c) {
                double v = x(grid.flat(r, c));
                if (r + h <= grid.height && c + h <= grid.width) {
                    double d = v - x(grid.flat(r + h, c + h));
                    ga += d * d;
                    ++na;
                }
                if (r - h >= 1 && c + h <= grid.width) {
                    double d = v - x(grid.flat(r - h, c + h));
                    gb += d * d;
                    ++nb;
                }
            }
        }
        ga /= 2.0 * na;
        gb /= 2.0 * nb;
        double denom = 2.0 * ga * ga / na + 2.0 * gb * gb / nb;
        out[h - 1] = denom == 0.0 ? 0.0 : -(ga - gb) * (ga - gb) / denom;
    }
    return out;
}

// ---- the four experiments ----

constexpr std::uint64_t kTruthStream = 0;

ExperimentResult run_marginals(const ExperimentConfig& cfg) {
    const GridDomain grid(cfg.grid_side, cfg.grid_side);
    const int d = grid.size();
    grf::PowerExpCovariance truth_cov{1.0, 3.0, 1.0, std::nullopt};
    auto truth = std::make_shared<grf::FieldSampler>(truth_cov, grid);

    struct GaussianEntry {
        std::string name;
        SiteGaussian marginal;
    };
    std::vector<GaussianEntry> gaussians = {
        {"ideal", SiteGaussian::constant(d, 0.0, 1.0)},
        {"biased", SiteGaussian::constant(d, 0.255, 1.0)},
        {"underdispersed", SiteGaussian::constant(d, 0.0, 2.0 / 3.0)},
        {"overdispersed", SiteGaussian::constant(d, 0.0, 1.4)},
    };
    grf::FieldForecastSpec student_spec;
    student_spec.kind = grf::ForecastKind::StudentLocationScale;
    student_spec.cov = truth_cov;
    auto student = std::make_shared<grf::ForecastModel>(student_spec, grid);

    std::vector<std::string> scores = {"crps",  "qs_0.5", "qs_0.75", "qs_0.95",
                                       "bs_0.5", "bs_1",   "se",      "dss"};
    std::vector<std::string> forecasts = {"ideal", "biased", "underdispersed",
                                          "overdispersed", "student"};
    const int members = cfg.members;

    auto case_fn = [=](int rep, int obs, Eigen::MatrixXd& cell) {
        StreamRng rng0(cfg.seed, stream_id(rep, obs, kTruthStream));
        Eigen::VectorXd y = truth->sample(rng0);
        for (std::size_t f = 0; f < gaussians.size(); ++f) {
            const SiteGaussian& g = gaussians[f].marginal;
            cell(0, f) = exact_crps(g, y);
            cell(1, f) = exact_qs(0.5, g, y);
            cell(2, f) = exact_qs(0.75, g, y);
            cell(3, f) = exact_qs(0.95, g, y);
            cell(4, f) = exact_bs(0.5, g, y);
            cell(5, f) = exact_bs(1.0, g, y);
            cell(6, f) = exact_se(g, y);
            cell(7, f) = exact_dss(g, y);
        }
        // The Student forecast has no Gaussian closed form for the
        // quantile-type rules, so those are scored from its ensemble. Its
        // marginal mean and variance are known, so se and dss — which depend
        // on the forecast only through those two moments — are scored
        // exactly, like the Gaussian entries.
        StreamRng rngf(cfg.seed, stream_id(rep, obs, 5));
        auto inst = student->instance(rngf);
        Eigen::MatrixXd m = student->sample_members(inst, members, rngf);
        const int fs = 4;
        double crps = 0.0, q50 = 0.0, q75 = 0.0, q95 = 0.0, b05 = 0.0, b1 = 0.0;
        std::vector<double> col(members);
        for (int i = 0; i < d; ++i) {
            for (int k = 0; k < members; ++k) col[k] = m(k, i);
            uni::UnivariateEnsemble e(col);
            crps += uni::crps_ensemble(e, y(i));
            q50 += uni::qs(0.5, e.quantile(0.5), y(i));
            q75 += uni::qs(0.75, e.quantile(0.75), y(i));
            q95 += uni::qs(0.95, e.quantile(0.95), y(i));
            b05 += uni::bs(0.5, e.cdf(0.5), y(i));
            b1 += uni::bs(1.0, e.cdf(1.0), y(i));
        }
        cell(0, fs) = crps / d;
        cell(1, fs) = q50 / d;
        cell(2, fs) = q75 / d;
        cell(3, fs) = q95 / d;
        cell(4, fs) = b05 / d;
        cell(5, fs) = b1 / d;
        SiteGaussian stu_two =
            SiteGaussian::constant(d, 0.0, student_spec.student_target_sd);
        cell(6, fs) = exact_se(stu_two, y);
        cell(7, fs) = exact_dss(stu_two, y);
    };
    return run_cases(cfg, scores, forecasts, case_fn);
}

ExperimentResult run_dependence(const ExperimentConfig& cfg) {
    const GridDomain grid(cfg.grid_side, cfg.grid_side);
    const std::vector<double> orders = {0.5, 1.0, 2.0};
    struct Entry {
        std::string name;
        grf::PowerExpCovariance cov;
    };
    std::vector<Entry> entries = {
        {"ideal", {1.0, 3.0, 1.0, std::nullopt}},
        {"small_range", {1.0, 1.0, 1.0, std::nullopt}},
        {"large_range", {1.0, 5.0, 1.0, std::nullopt}},
        {"under_smooth", {1.0, 3.0, 0.5, std::nullopt}},
        {"over_smooth", {1.0, 3.0, 2.0, std::nullopt}},
    };
    auto truth = std::make_shared<grf::FieldSampler>(entries[0].cov, grid);
    auto pairs = std::make_shared<PairTable>(grid.size());

    // vs_means[f][p], pvs_mean[f][p] are observation-independent.
    auto vs_means = std::make_shared<std::vector<std::vector<std::vector<double>>>>();
    auto pvs_mean = std::make_shared<std::vector<std::vector<double>>>();
    std::vector<std::shared_ptr<grf::ForecastModel>> models;
    for (const auto& e : entries) {
        grf::FieldForecastSpec spec;
        spec.cov = e.cov;
        models.push_back(std::make_shared<grf::ForecastModel>(spec, grid));
        const Eigen::MatrixXd& cov = models.back()->field().covariance();
        std::vector<std::vector<double>> per_p;
        std::vector<double> pvs_p;
        double sz2 = oracle::pvs_increment_variance(e.cov);
        for (double p : orders) {
            per_p.push_back(pairs->forecast_means(cov, p));
            pvs_p.push_back(sz2 > 0.0 ? oracle::gaussian_abs_moment(p, std::sqrt(sz2)) : 0.0);
        }
        vs_means->push_back(std::move(per_p));
        pvs_mean->push_back(std::move(pvs_p));
    }

    std::vector<std::string> scores = {"vs_0.5", "vs_1",  "vs_2",         "pvs_0.5",
                                       "pvs_1",  "pvs_2", "crps",         "patched_es_2",
                                       "patched_es_5", "es"};
    std::vector<std::string> forecasts;
    for (const auto& e : entries) forecasts.push_back(e.name);
    const std::vector<int> es_sizes = {2, 5, cfg.grid_side};
    const int d = grid.size();
    const int members = cfg.members;
    const SiteGaussian marginal = SiteGaussian::constant(d, 0.0, 1.0);

    auto case_fn = [=](int rep, int obs, Eigen::MatrixXd& cell) {
        StreamRng rng0(cfg.seed, stream_id(rep, obs, kTruthStream));
        Eigen::VectorXd y = truth->sample(rng0);
        std::vector<std::vector<double>> obs_pairs;
        for (double p : orders) obs_pairs.push_back(pairs->obs_values(y, p));
        // Every forecast here has N(0,1) marginals, so the exact aggregated
        // CRPS is common to all of them.
        double crps = exact_crps(marginal, y);
        for (std::size_t f = 0; f < models.size(); ++f) {
            for (std::size_t pi = 0; pi < orders.size(); ++pi) {
                cell(pi, f) = uniform_vs((*vs_means)[f][pi], obs_pairs[pi], d);
                cell(3 + pi, f) = compose::p_variation_score_from_mean(
                    (*pvs_mean)[f][pi], y, grid, orders[pi]);
            }
            cell(6, f) = crps;
            StreamRng rngf(cfg.seed, stream_id(rep, obs, f + 1));
            auto inst = models[f]->instance(rngf);
            Eigen::MatrixXd m = models[f]->sample_members(inst, members, rngf);
            auto es = patched_es_sizes(m, y, grid, es_sizes);
            cell(7, f) = es[0];
            cell(8, f) = es[1];
            cell(9, f) = es[2];
        }
    };
    return run_cases(cfg, scores, forecasts, case_fn);
}

ExperimentResult run_anisotropy(const ExperimentConfig& cfg) {
    const GridDomain grid(cfg.grid_side, cfg.grid_side);
    const double p = 0.5;
    const int max_h = 5;
    struct Entry {
        std::string name;
        grf::Anisotropy aniso;
    };
    const double th0 = M_PI / 4.0;
    std::vector<Entry> entries = {
        {"ideal", {th0, 2.0}},
        {"small_angle", {0.0, 2.0}},
        {"large_angle", {M_PI / 2.0, 2.0}},
        {"isotropic", {th0, 1.0}},
        {"over_anisotropic", {th0, 3.0}},
    };
    auto make_cov = [](const grf::Anisotropy& a) {
        return grf::PowerExpCovariance{1.0, 3.0, 1.0, a};
    };
    auto truth = std::make_shared<grf::FieldSampler>(make_cov(entries[0].aniso), grid);
    auto pairs = std::make_shared<PairTable>(grid.size());
    auto w_std = std::make_shared<std::vector<double>>(
        pairs->weights_from(mv::PairWeights::inverse_distance(grid).w));
    auto w_informed = std::make_shared<std::vector<double>>(pairs->weights_from(
        mv::PairWeights::inverse_aniso_distance(grid, entries[0].aniso.form()).w));

    std::vector<std::shared_ptr<grf::ForecastModel>> models;
    auto vs_means = std::make_shared<std::vector<std::vector<double>>>();
    for (const auto& e : entries) {
        grf::FieldForecastSpec spec;
        spec.cov = make_cov(e.aniso);
        models.push_back(std::make_shared<grf::ForecastModel>(spec, grid));
        vs_means->push_back(pairs->forecast_means(models.back()->field().covariance(), p));
    }

    std::vector<std::string> scores = {"vs_std_0.5", "vs_informed_0.5", "as_h1", "as_h2",
                                       "as_h3",      "as_h4",           "as_h5", "as_agg"};
    std::vector<std::string> forecasts;
    for (const auto& e : entries) forecasts.push_back(e.name);
    const int members = cfg.members;

    auto case_fn = [=](int rep, int obs, Eigen::MatrixXd& cell) {
        StreamRng rng0(cfg.seed, stream_id(rep, obs, kTruthStream));
        Eigen::VectorXd y = truth->sample(rng0);
        auto obs_pairs = pairs->obs_values(y, p);
        auto obs_iso = iso_stats(y, grid, max_h);
        for (std::size_t f = 0; f < models.size(); ++f) {
            cell(0, f) = weighted_vs((*vs_means)[f], obs_pairs, *w_std);
            cell(1, f) = weighted_vs((*vs_means)[f], obs_pairs, *w_informed);
            StreamRng rngf(cfg.seed, stream_id(rep, obs, f + 1));
            auto inst = models[f]->instance(rngf);
            Eigen::MatrixXd m = models[f]->sample_members(inst, members, rngf);
            std::vector<double> mean_iso(max_h, 0.0);
            for (int k = 0; k < members; ++k) {
                auto ts = iso_stats(m.row(k).transpose(), grid, max_h);
                for (int h = 0; h < max_h; ++h) mean_iso[h] += ts[h];
            }
            double agg = 0.0;
            for (int h = 0; h < max_h; ++h) {
                mean_iso[h] /= members;
                double diff = mean_iso[h] - obs_iso[h];
                cell(2 + h, f) = diff * diff;
                agg += diff * diff / (h + 1.0);
            }
            cell(7, f) = agg;
        }
    };
    return run_cases(cfg, scores, forecasts, case_fn);
}

ExperimentResult run_double_penalty(const ExperimentConfig& cfg) {
    const GridDomain grid(cfg.grid_side, cfg.grid_side);
    const int d = grid.size();
    grf::PowerExpCovariance truth_cov{1.0, 3.0, 1.0, std::nullopt};
    auto truth = std::make_shared<grf::FieldSampler>(truth_cov, grid);

    struct Entry {
        std::string name;
        grf::ForecastKind kind;
        double r;
    };
    std::vector<Entry> entries = {
        {"ideal", grf::ForecastKind::Gaussian, 0.0},
        {"additive_0.1", grf::ForecastKind::AdditiveNoised, 0.1},
        {"additive_0.25", grf::ForecastKind::AdditiveNoised, 0.25},
        {"additive_0.5", grf::ForecastKind::AdditiveNoised, 0.5},
        {"multiplicative_0.1", grf::ForecastKind::MultiplicativeNoised, 0.1},
        {"multiplicative_0.25", grf::ForecastKind::MultiplicativeNoised, 0.25},
        {"multiplicative_0.5", grf::ForecastKind::MultiplicativeNoised, 0.5},
    };
    std::vector<std::shared_ptr<grf::ForecastModel>> models;
    for (const auto& e : entries) {
        grf::FieldForecastSpec spec;
        spec.kind = e.kind;
        spec.cov = truth_cov;
        spec.noise_range = e.r;
        models.push_back(std::make_shared<grf::ForecastModel>(spec, grid));
    }
    const std::vector<int> sizes = {2, 3, 5};

    // Patch site lists per size, shared by the closed CRPS-of-mean path.
    struct PatchSet {
        int size;
        std::vector<std::vector<int>> sites;
    };
    auto patch_sets = std::make_shared<std::vector<PatchSet>>();
    for (int s : sizes) {
        PatchSet ps;
        ps.size = s;
        for (const auto& patch : tf::square_patches(grid, s)) ps.sites.push_back(patch.sites);
        patch_sets->push_back(std::move(ps));
    }
    auto base_cov =
        std::make_shared<Eigen::MatrixXd>(models[0]->field().covariance());

    std::vector<std::string> scores = {"crps",        "crps_mean_2", "crps_mean_3",
                                       "crps_mean_5", "bs_1",        "se_fte_2",
                                       "se_fte_3",    "se_fte_5"};
    std::vector<std::string> forecasts;
    for (const auto& e : entries) forecasts.push_back(e.name);
    const int members = cfg.members;
    const double threshold = 1.0;

    auto case_fn = [=](int rep, int obs, Eigen::MatrixXd& cell) {
        StreamRng rng0(cfg.seed, stream_id(rep, obs, kTruthStream));
        Eigen::VectorXd y = truth->sample(rng0);
        for (std::size_t f = 0; f < models.size(); ++f) {
            StreamRng rngf(cfg.seed, stream_id(rep, obs, f + 1));
            auto inst = models[f]->instance(rngf);
            SiteGaussian g{inst.mean, inst.scale};  // sigma = 1
            cell(0, f) = exact_crps(g, y);
            cell(4, f) = exact_bs(threshold, g, y);
            // CRPS of the spatial mean: patch means stay Gaussian.
            for (std::size_t si = 0; si < patch_sets->size(); ++si) {
                const auto& ps = (*patch_sets)[si];
                double total = 0.0;
                for (const auto& sites : ps.sites) {
                    double mu_p = 0.0, y_p = 0.0, var_p = 0.0;
                    for (int a : sites) {
                        mu_p += inst.mean(a);
                        y_p += y(a);
                        for (int b : sites)
                            var_p += inst.scale(a) * inst.scale(b) * (*base_cov)(a, b);
                    }
                    double n = static_cast<double>(sites.size());
                    total += uni::crps_gaussian({mu_p / n, std::sqrt(var_p) / n}, y_p / n);
                }
                cell(1 + si, f) = total / ps.sites.size();
            }
            // SE of the FTE uses the sampled ensemble.
            Eigen::MatrixXd m = models[f]->sample_members(inst, members, rngf);
            for (std::size_t si = 0; si < sizes.size(); ++si)
                cell(5 + si, f) = compose::se_fte(m, y, grid, sizes[si], threshold);
        }
    };
    return run_cases(cfg, scores, forecasts, case_fn);
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.name == "marginals") return run_marginals(cfg);
    if (cfg.name == "dependence") return run_dependence(cfg);
    if (cfg.name == "anisotropy") return run_anisotropy(cfg);
    return run_double_penalty(cfg);
}

void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& res,
                   const std::string& out_dir) {
    const std::vector<std::string> comments = {
        "schema_version: 1", "experiment: " + cfg.name,
        "seed: " + std::to_string(cfg.seed)};
    const int S = static_cast<int>(res.scores.size());
    const int F = static_cast<int>(res.forecasts.size());

    {
        std::vector<std::vector<std::string>> rows;
        for (int rep = 0; rep < cfg.reps; ++rep)
            for (int obs = 0; obs < cfg.n_obs; ++obs)
                for (int s = 0; s < S; ++s)
                    for (int f = 0; f < F; ++f)
                        rows.push_back({std::to_string(rep + 1), std::to_string(obs + 1),
                                        res.scores[s], res.forecasts[f],
                                        io::format_double(res.values[s][f][rep][obs])});
        io::write_table(out_dir + "/scores.csv", comments,
                        {"rep", "obs", "score", "forecast", "value"}, rows);
    }
    {
        std::vector<std::vector<std::string>> rows;
        for (int s = 0; s < S; ++s) {
            double ideal_mean = stats::summarize(res.values[s][0], 1.0).mean;
            for (int f = 0; f < F; ++f) {
                auto summary = stats::summarize(res.values[s][f], ideal_mean);
                for (int rep = 0; rep < cfg.reps; ++rep) {
                    auto rep_summary =
                        stats::summarize({res.values[s][f][rep]}, ideal_mean);
                    rows.push_back({res.scores[s], res.forecasts[f],
                                    std::to_string(rep + 1),
                                    io::format_double(rep_summary.mean),
                                    io::format_double(rep_summary.std_error),
                                    io::format_double(rep_summary.rescaled_mean)});
                }
                rows.push_back({res.scores[s], res.forecasts[f], "overall",
                                io::format_double(summary.mean),
                                io::format_double(summary.std_error),
                                io::format_double(summary.rescaled_mean)});
            }
        }
        io::write_table(
            out_dir + "/summary.csv", comments,
            {"score", "forecast", "repetition", "mean", "std_error", "rescaled_mean"}, rows);
    }
    {
        auto dm_comments = comments;
        dm_comments.push_back(
            "dm test: paired, lag-0 variance, two-sided normal p; scope pooled uses all "
            "repetitions, scope rep_k uses repetition k only");
        std::vector<std::vector<std::string>> rows;
        for (int s = 0; s < S; ++s) {
            for (int f = 1; f < F; ++f) {
                std::vector<double> a, b;
                for (int rep = 0; rep < cfg.reps; ++rep) {
                    a.insert(a.end(), res.values[s][0][rep].begin(),
                             res.values[s][0][rep].end());
                    b.insert(b.end(), res.values[s][f][rep].begin(),
                             res.values[s][f][rep].end());
                }
                auto pooled = stats::dm_test(a, b);
                rows.push_back({res.scores[s], res.forecasts[0], res.forecasts[f], "pooled",
                                io::format_double(pooled.dm_statistic),
                                io::format_double(pooled.p_value),
                                pooled.p_value < 0.05 ? "1" : "0"});
                for (int rep = 0; rep < cfg.reps; ++rep) {
                    auto r = stats::dm_test(res.values[s][0][rep], res.values[s][f][rep]);
                    rows.push_back({res.scores[s], res.forecasts[0], res.forecasts[f],
                                    "rep_" + std::to_string(rep + 1),
                                    io::format_double(r.dm_statistic),
                                    io::format_double(r.p_value),
                                    r.p_value < 0.05 ? "1" : "0"});
                }
            }
        }
        io::write_table(out_dir + "/dm_tests.csv", dm_comments,
                        {"score", "forecast_a", "forecast_b", "scope", "dm_stat", "p_value",
                         "significant"},
                        rows);
    }
}

} // namespace verif::exp
