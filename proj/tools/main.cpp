// Configuration-driven experiment runner. One subcommand per artifact; every
// output CSV embeds the config hash, seed and version so a run can be
// reproduced exactly from its own files.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "amcmc/chain.hpp"
#include "amcmc/csv.hpp"
#include "amcmc/diagnostics.hpp"
#include "amcmc/errors.hpp"
#include "amcmc/finite_exact.hpp"
#include "amcmc/measures.hpp"
#include "amcmc/stats.hpp"
#include "amcmc/targets.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace amcmc;

namespace {

struct RunContext {
    fs::path out_dir;
    std::uint64_t config_hash = 0;
    std::uint64_t base_seed = 0;
    int threads = 1;
};

[[noreturn]] void fail(const std::string& message) {
    throw ConfigError(message);
}

json load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) fail("cannot read config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail("config parse error: " + std::string(e.what()));
    }
    return j;
}

template <typename T>
T require(const json& j, const std::string& key) {
    if (!j.contains(key)) fail("missing config field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        fail("config field '" + key + "' has the wrong type");
    }
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        fail("config field '" + key + "' has the wrong type");
    }
}

DiscretePmf make_pmf(const json& j, int k) {
    const std::string kind = require<std::string>(j, "kind");
    if (kind == "uniform") return DiscretePmf(ProbVector::uniform(k));
    if (kind == "linear") {
        std::vector<double> w(k);
        for (int i = 0; i < k; ++i) w[i] = i + 1.0;
        return DiscretePmf(ProbVector::from_unnormalized(std::move(w)));
    }
    if (kind == "weights") {
        auto w = require<std::vector<double>>(j, "weights");
        if (static_cast<int>(w.size()) != k)
            fail("pmf.weights must have K entries");
        return DiscretePmf(ProbVector::from_unnormalized(std::move(w)));
    }
    fail("pmf.kind must be uniform | linear | weights");
}

PSchedule make_p_schedule(const json& j) {
    const std::string kind = require<std::string>(j, "kind");
    if (kind == "constant") {
        const double value = require<double>(j, "value");
        return [value](std::size_t) { return value; };
    }
    if (kind == "one_over_n") {
        const double scale = get_or(j, "scale", 1.0);
        const double offset = get_or(j, "offset", 0.0);
        const double power = get_or(j, "power", 1.0);
        return [=](std::size_t n) {
            return scale / std::pow(static_cast<double>(n) + offset, power);
        };
    }
    fail("p_schedule.kind must be constant | one_over_n");
}

PSchedule make_theta_schedule(const json& j) {
    const std::string kind = require<std::string>(j, "kind");
    const double scale = get_or(j, "scale", 1.0);
    const double offset = get_or(j, "offset", 0.0);
    if (kind == "constant") {
        const double value = require<double>(j, "value");
        return [value](std::size_t) { return value; };
    }
    if (kind == "harmonic")
        return [=](std::size_t n) { return scale / (static_cast<double>(n) + offset); };
    if (kind == "inverse_square")
        return [=](std::size_t n) {
            const double d = static_cast<double>(n) + offset;
            return scale / (d * d);
        };
    fail("schedule.kind must be constant | harmonic | inverse_square");
}

std::vector<double> make_lattice_f(const json& j, int k) {
    const std::string kind = require<std::string>(j, "kind");
    if (kind == "indicator") {
        const int x = require<int>(j, "x");
        if (x < 1 || x > k) fail("f.x outside {1..K}");
        std::vector<double> f(k, 0.0);
        f[x - 1] = 1.0;
        return f;
    }
    if (kind == "values") {
        auto f = require<std::vector<double>>(j, "values");
        if (static_cast<int>(f.size()) != k) fail("f.values must have K entries");
        return f;
    }
    fail("f.kind must be indicator | values");
}

using StateFunction = std::function<double(std::span<const double>)>;

StateFunction make_state_f(const json& j) {
    const std::string kind = require<std::string>(j, "kind");
    if (kind == "abs") return [](std::span<const double> x) { return std::fabs(x[0]); };
    if (kind == "one") return [](std::span<const double>) { return 1.0; };
    if (kind == "coordinate") {
        const std::size_t index = require<std::size_t>(j, "index");
        return [index](std::span<const double> x) { return x.size() > index ? x[index] : 0.0; };
    }
    if (kind == "indicator_leq") {
        const double cut = require<double>(j, "value");
        return [cut](std::span<const double> x) { return x[0] <= cut ? 1.0 : 0.0; };
    }
    fail("f.kind must be abs | one | coordinate | indicator_leq");
}

Matrix make_matrix(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) fail("matrix must be non-empty");
    Matrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size()) fail("matrix rows differ in length");
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

std::unique_ptr<TargetDensity> make_target(const json& j) {
    const std::string kind = require<std::string>(j, "kind");
    if (kind == "smoothed_weibull")
        return std::make_unique<SmoothedWeibullTarget>(require<double>(j, "m"),
                                                       require<double>(j, "beta"));
    if (kind == "gaussian")
        return std::make_unique<GaussianTarget>(
            require<std::vector<double>>(j, "mean"),
            make_matrix(require<std::vector<std::vector<double>>>(j, "covariance")));
    fail("target.kind must be smoothed_weibull | gaussian");
}

ThetaSpace make_theta_space(const json& j) {
    ThetaSpace space;
    space.mu_lower = require<std::vector<double>>(j, "mu_lower");
    space.mu_upper = require<std::vector<double>>(j, "mu_upper");
    space.eig_floor = get_or(j, "eig_floor", 1e-3);
    space.schur_cap = get_or(j, "schur_cap", 1e3);
    space.kappa_lower = get_or(j, "kappa_lower", -10.0);
    space.kappa_upper = get_or(j, "kappa_upper", 10.0);
    space.target_accept = get_or(j, "target_accept", 0.35);
    space.validate();
    return space;
}

RwmParameter make_rwm_parameter(const json& j) {
    RwmParameter theta;
    theta.mu = require<std::vector<double>>(j, "mu");
    theta.sigma = make_matrix(require<std::vector<std::vector<double>>>(j, "sigma"));
    theta.log_scale = get_or(j, "c", 0.0);
    return theta;
}

std::vector<std::uint64_t> seeds_from_config(const json& j, const RunContext& ctx,
                                             bool seed_overridden) {
    std::vector<std::uint64_t> seeds;
    if (j.contains("seeds"))
        seeds = require<std::vector<std::uint64_t>>(j, "seeds");
    else
        seeds = {get_or<std::uint64_t>(j, "seed", 0)};
    if (seeds.empty()) fail("config field 'seeds' must be non-empty");
    if (seed_overridden)
        for (std::size_t i = 0; i < seeds.size(); ++i)
            seeds[i] = ctx.base_seed + i;
    return seeds;
}

// Deterministic seed-parallel map: results land in input order; the first
// worker exception is rethrown on the caller after all threads join.
template <typename Fn>
void parallel_over_seeds(const std::vector<std::uint64_t>& seeds, int threads,
                         Fn&& fn) {
    if (threads <= 1 || seeds.size() <= 1) {
        for (std::size_t i = 0; i < seeds.size(); ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const int width = std::min<int>(threads, static_cast<int>(seeds.size()));
    for (int t = 0; t < width; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < seeds.size();
                 i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    std::scoped_lock lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

// --------------------------------------------------------------------------

int run_toy_exact(const json& cfg, const RunContext& ctx) {
    const int k = require<int>(cfg, "K");
    const int m = require<int>(cfg, "M");
    const ToyJointChain chain(make_pmf(require<json>(cfg, "pmf"), k), m);
    const PSchedule p_sched = make_p_schedule(require<json>(cfg, "p_schedule"));
    const std::size_t horizon = require<std::size_t>(cfg, "horizon");
    const json start = require<json>(cfg, "start");
    const int x0 = require<int>(start, "x");
    const int theta0 = require<int>(start, "theta");
    if (x0 < 1 || x0 > k) fail("start.x outside {1..K}");
    if (theta0 < 1 || theta0 > m) fail("start.theta outside {1..M}");

    std::vector<double> init(static_cast<std::size_t>(chain.pair_count()), 0.0);
    init[static_cast<std::size_t>(chain.pair_index(x0, theta0))] = 1.0;
    const auto result =
        chain.propagate({ProbVector(std::move(init)), 0}, p_sched, horizon);

    CsvWriter tv(ctx.out_dir / "tv_to_pi.csv", ctx.config_hash, ctx.base_seed,
                 {"n", "tv_l1"});
    for (std::size_t n = 0; n < result.tv_to_pi.size(); ++n)
        tv.write_row({static_cast<double>(n), result.tv_to_pi[n]});

    if (get_or(cfg, "exact_d", true)) {
        CsvWriter d(ctx.out_dir / "exact_d.csv", ctx.config_hash, ctx.base_seed,
                    {"theta1", "theta2", "d_l1"});
        for (int t1 = 1; t1 <= m; ++t1)
            for (int t2 = 1; t2 <= m; ++t2)
                d.write_row({static_cast<double>(t1), static_cast<double>(t2),
                             chain.exact_d(t1, t2)});
    }

    if (cfg.contains("power_profile")) {
        const json pp = cfg.at("power_profile");
        const auto thetas = require<std::vector<int>>(pp, "theta");
        const double beta = get_or(pp, "beta", 0.0);
        const double kappa = get_or(pp, "kappa", 1.0);
        const double alpha = get_or(pp, "alpha", 0.5);
        const int n_max = require<int>(pp, "n_max");
        std::vector<double> v_values(k, 1.0);
        if (pp.contains("V")) {
            const json vj = pp.at("V");
            if (require<std::string>(vj, "kind") == "values")
                v_values = require<std::vector<double>>(vj, "values");
        }
        const WeightFunction v(v_values);
        CsvWriter prof(ctx.out_dir / "power_profile.csv", ctx.config_hash,
                       ctx.base_seed,
                       {"theta", "n", "sup_vnorm", "rate_ratio"});
        for (int theta : thetas) {
            const PowerProfile p = chain.power_profile(theta, v, beta, kappa,
                                                       alpha, n_max);
            for (int n = 0; n <= n_max; ++n)
                prof.write_row({static_cast<double>(theta), static_cast<double>(n),
                                p.sup_vnorm[n], p.rate_ratio[n]});
        }
    }
    return 0;
}

int run_toy_simulate(const json& cfg, const RunContext& ctx,
                     const std::vector<std::uint64_t>& seeds) {
    const int k = require<int>(cfg, "K");
    const int m = require<int>(cfg, "M");
    const DiscretePmf pmf = make_pmf(require<json>(cfg, "pmf"), k);
    const PSchedule p_sched = make_p_schedule(require<json>(cfg, "p_schedule"));
    const std::size_t n_steps = require<std::size_t>(cfg, "n_steps");
    const json start = require<json>(cfg, "start");
    const std::vector<double> f = make_lattice_f(require<json>(cfg, "f"), k);

    // Exact reference: pi is stationary for every P_theta.
    double reference = 0.0;
    for (int x = 1; x <= k; ++x) reference += f[x - 1] * pmf.at(x);

    std::vector<double> averages(seeds.size());
    parallel_over_seeds(seeds, ctx.threads, [&](std::size_t i) {
        ToyRunConfig run;
        run.pmf = &pmf;
        run.x0 = require<int>(start, "x");
        run.theta0 = require<int>(start, "theta");
        run.m_max = m;
        run.p_schedule = p_sched;
        run.n_steps = n_steps;
        run.seed = seeds[i];
        const Trajectory traj = run_adaptive(run);
        const auto avg = running_average(traj, [&](std::span<const double> x) {
            return f[static_cast<std::size_t>(x[0]) - 1];
        });
        averages[i] = avg.back();
    });

    CsvWriter lln(ctx.out_dir / "lln.csv", ctx.config_hash, ctx.base_seed,
                  {"seed", "n_steps", "average", "reference", "abs_error"});
    double mean = 0.0;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        lln.write_row({static_cast<double>(seeds[i]), static_cast<double>(n_steps),
                       averages[i], reference, std::fabs(averages[i] - reference)});
        mean += averages[i];
    }
    mean /= static_cast<double>(seeds.size());
    CsvWriter summary(ctx.out_dir / "summary.csv", ctx.config_hash, ctx.base_seed,
                      {"reference", "pooled_average", "pooled_error"});
    summary.write_row({reference, mean, std::fabs(mean - reference)});
    return 0;
}

int run_am(const json& cfg, const RunContext& ctx,
           const std::vector<std::uint64_t>& seeds) {
    const auto target = make_target(require<json>(cfg, "target"));
    const ThetaSpace space = make_theta_space(require<json>(cfg, "theta_space"));
    const RwmParameter theta0 = make_rwm_parameter(require<json>(cfg, "theta0"));
    const std::vector<double> x0 = require<std::vector<double>>(cfg, "x0");
    const std::size_t n_steps = require<std::size_t>(cfg, "n_steps");
    const StateFunction f = make_state_f(require<json>(cfg, "f"));
    const std::size_t compare_at = get_or<std::size_t>(cfg, "compare_at", 0);

    double reference = 0.0;
    const json ref_cfg = require<json>(cfg, "reference");
    const std::string ref_kind = require<std::string>(ref_cfg, "kind");
    if (ref_kind == "value") {
        reference = require<double>(ref_cfg, "value");
    } else if (ref_kind == "quadrature") {
        if (target->dimension() != 1) fail("quadrature reference requires a 1-D target");
        reference = quadrature_expectation(
            *target, [&](double x) { return f(std::span<const double>(&x, 1)); },
            get_or(ref_cfg, "abs_tol", 1e-8));
    } else {
        fail("reference.kind must be value | quadrature");
    }

    // Optional covariance yardstick: |Sigma_n - Sigma_target|_s.
    const Matrix* sigma_target = nullptr;
    Matrix sigma_target_storage;
    if (const auto* g = dynamic_cast<const GaussianTarget*>(target.get())) {
        sigma_target_storage = g->covariance();
        sigma_target = &sigma_target_storage;
    }

    struct SeedResult {
        double average = 0.0;
        double average_at_compare = 0.0;
        double acc_rate_last_half = 0.0;
        double sigma_err = -1.0;
        std::vector<DiminishingWindow> windows;
        bool diminishing_pass = false;
        double return_cycles = -1.0;
        double mean_r_tau = -1.0;
    };
    std::vector<SeedResult> results(seeds.size());

    const bool want_return_time = cfg.contains("return_time");
    ReturnTimeSpec rt_spec;
    if (want_return_time) {
        const json rt = cfg.at("return_time");
        rt_spec.radius = require<double>(rt, "radius");
        rt_spec.eta = require<double>(rt, "eta");
        rt_spec.validate();
    }

    parallel_over_seeds(seeds, ctx.threads, [&](std::size_t i) {
        AmRunConfig run;
        run.target = target.get();
        run.x0 = x0;
        run.theta0 = theta0;
        run.space = space;
        run.adapt = get_or(cfg, "adapt", true);
        run.n_steps = n_steps;
        run.seed = seeds[i];
        const Trajectory traj = run_adaptive(run);

        SeedResult& out = results[i];
        const auto avg = running_average(traj, f);
        out.average = avg.back();
        if (compare_at >= 1 && compare_at <= avg.size())
            out.average_at_compare = avg[compare_at - 1];

        std::size_t accepted = 0;
        for (std::size_t n = n_steps / 2; n < n_steps; ++n)
            accepted += traj.accepted[n];
        out.acc_rate_last_half =
            static_cast<double>(accepted) / static_cast<double>(n_steps - n_steps / 2);

        if (sigma_target != nullptr && !traj.snapshots.empty())
            out.sigma_err =
                schur_norm_diff(traj.snapshots.back().theta.sigma, *sigma_target);

        const DiminishingReport dim = diminishing_adaptation_report(traj);
        out.windows = dim.windows;
        out.diminishing_pass = dim.pass;

        if (want_return_time) {
            const ReturnTimeReport rt = return_time_moments(traj, rt_spec);
            out.return_cycles = static_cast<double>(rt.cycles);
            out.mean_r_tau = rt.mean_r_tau;
        }
    });

    CsvWriter lln(ctx.out_dir / "lln.csv", ctx.config_hash, ctx.base_seed,
                  {"seed", "n_steps", "average", "reference", "abs_error",
                   "acc_rate_last_half", "sigma_err_schur"});
    double mean = 0.0, mean_compare = 0.0;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        lln.write_row({static_cast<double>(seeds[i]), static_cast<double>(n_steps),
                       results[i].average, reference,
                       std::fabs(results[i].average - reference),
                       results[i].acc_rate_last_half, results[i].sigma_err});
        mean += results[i].average;
        mean_compare += results[i].average_at_compare;
    }
    mean /= static_cast<double>(seeds.size());
    mean_compare /= static_cast<double>(seeds.size());

    CsvWriter summary(ctx.out_dir / "summary.csv", ctx.config_hash, ctx.base_seed,
                      {"reference", "pooled_error", "compare_at",
                       "pooled_error_at_compare"});
    summary.write_row({reference, std::fabs(mean - reference),
                       static_cast<double>(compare_at),
                       compare_at >= 1 ? std::fabs(mean_compare - reference) : -1.0});

    CsvWriter dim(ctx.out_dir / "diminishing.csv", ctx.config_hash, ctx.base_seed,
                  {"seed", "window_begin", "window_end", "median_n_delta", "pass"});
    for (std::size_t i = 0; i < seeds.size(); ++i)
        for (const auto& w : results[i].windows)
            dim.write_row({static_cast<double>(seeds[i]),
                           static_cast<double>(w.n_begin),
                           static_cast<double>(w.n_end), w.median_n_delta,
                           results[i].diminishing_pass ? 1.0 : 0.0});

    if (want_return_time) {
        CsvWriter rt(ctx.out_dir / "return_time.csv", ctx.config_hash, ctx.base_seed,
                     {"seed", "cycles", "mean_r_tau"});
        for (std::size_t i = 0; i < seeds.size(); ++i)
            rt.write_row({static_cast<double>(seeds[i]), results[i].return_cycles,
                          results[i].mean_r_tau});
    }
    return 0;
}

int run_drift_check(const json& cfg, const RunContext& ctx) {
    const auto target_json = require<json>(cfg, "target");
    if (require<std::string>(target_json, "kind") != "smoothed_weibull")
        fail("drift-check requires a smoothed_weibull target");
    const SmoothedWeibullTarget target(require<double>(target_json, "m"),
                                       require<double>(target_json, "beta"));
    const json dj = require<json>(cfg, "drift");
    DriftSpec spec;
    spec.s = get_or(dj, "s", 0.05);
    spec.alpha = get_or(dj, "alpha", 0.5);
    spec.c = get_or(dj, "c", 1e-4);
    spec.b = get_or(dj, "b", 1.0);
    spec.c_bound = get_or(dj, "c_bound", 5.0);

    const auto variances = require<std::vector<double>>(cfg, "proposal_variances");
    const auto x_grid = require<std::vector<double>>(cfg, "x_grid");
    const double quad_tol = get_or(cfg, "quad_tol", 1e-8);

    std::vector<RwmParameter> thetas;
    for (double v : variances)
        thetas.push_back({{0.0}, Matrix::identity(1), std::log(v)});

    const DriftReport rep = drift_check(target, spec, thetas, x_grid, quad_tol);

    CsvWriter margins(ctx.out_dir / "margins.csv", ctx.config_hash, ctx.base_seed,
                      {"proposal_variance", "x", "v_s", "p_theta_v", "margin",
                       "c_max", "skipped"});
    for (const DriftPoint& p : rep.points)
        margins.write_row({p.proposal_variance, p.x, p.v_s, p.p_theta_v, p.margin,
                           p.c_max, p.skipped ? 1.0 : 0.0});
    CsvWriter summary(ctx.out_dir / "summary.csv", ctx.config_hash, ctx.base_seed,
                      {"worst_margin", "c_star", "pass"});
    summary.write_row({rep.worst_margin, rep.c_star, rep.pass ? 1.0 : 0.0});
    return 0;
}

int run_resolvent_check(const json& cfg, const RunContext& ctx) {
    const int k = require<int>(cfg, "K");
    const int m = require<int>(cfg, "M");
    const ToyJointChain chain(make_pmf(require<json>(cfg, "pmf"), k), m);
    const PSchedule p_sched = make_p_schedule(require<json>(cfg, "p_schedule"));
    ResolventSpec spec;
    spec.f = make_lattice_f(require<json>(cfg, "f"), k);
    spec.start_offset = get_or<std::size_t>(cfg, "start_offset", 0);
    spec.truncation_tol = get_or(cfg, "truncation_tol", 1e-12);
    const auto a_grid = require<std::vector<double>>(cfg, "a_grid");
    const bool residuals = get_or(cfg, "residual", true);

    CsvWriter res(ctx.out_dir / "resolvent.csv", ctx.config_hash, ctx.base_seed,
                  {"a", "x", "theta", "g_hat", "abs_a_g"});
    std::optional<CsvWriter> rcsv;
    if (residuals)
        rcsv.emplace(ctx.out_dir / "residuals.csv", ctx.config_hash, ctx.base_seed,
                     std::vector<std::string>{"a", "x", "theta", "residual"});
    CsvWriter summary(ctx.out_dir / "summary.csv", ctx.config_hash, ctx.base_seed,
                      {"a", "max_abs_a_g", "max_residual"});

    for (double a : a_grid) {
        spec.discount = a;
        const auto g = chain.resolvent(spec, p_sched);
        std::vector<double> residual;
        if (residuals) residual = chain.poisson_residual(spec, p_sched);
        double max_ag = 0.0, max_res = 0.0;
        for (int x = 1; x <= k; ++x)
            for (int theta = 1; theta <= m; ++theta) {
                const auto idx =
                    static_cast<std::size_t>(chain.pair_index(x, theta));
                res.write_row({a, static_cast<double>(x),
                               static_cast<double>(theta), g[idx],
                               std::fabs(a * g[idx])});
                max_ag = std::max(max_ag, std::fabs(a * g[idx]));
                if (residuals) {
                    rcsv->write_row({a, static_cast<double>(x),
                                     static_cast<double>(theta), residual[idx]});
                    max_res = std::max(max_res, residual[idx]);
                }
            }
        summary.write_row({a, max_ag, residuals ? max_res : -1.0});
    }
    return 0;
}

int run_winkler(const json& cfg, const RunContext& ctx) {
    const PSchedule schedule = make_theta_schedule(require<json>(cfg, "schedule"));
    const std::size_t horizon = require<std::size_t>(cfg, "horizon");
    const auto f = require<std::vector<double>>(cfg, "f");
    if (f.size() != 2) fail("winkler f must have two values");
    const double p0 = get_or(cfg, "initial_p0", 1.0);

    const WinklerResult result =
        winkler_counterexample(schedule, horizon, f[0], f[1], p0);

    CsvWriter out(ctx.out_dir / "winkler.csv", ctx.config_hash, ctx.base_seed,
                  {"n", "tv_l1", "second_moment"});
    out.write_row({0.0, result.tv_to_pi[0], 0.0});
    for (std::size_t n = 1; n <= horizon; ++n)
        out.write_row({static_cast<double>(n), result.tv_to_pi[n],
                       result.second_moment[n - 1]});

    const std::size_t check_n = get_or<std::size_t>(cfg, "enumeration_check_n", 12);
    if (check_n >= 1) {
        CsvWriter check(ctx.out_dir / "enumeration.csv", ctx.config_hash,
                        ctx.base_seed,
                        {"n", "recursion", "enumeration", "abs_diff"});
        for (std::size_t n = 1; n <= check_n; ++n) {
            const double brute =
                winkler_second_moment_enumeration(schedule, n, f[0], f[1], p0);
            check.write_row({static_cast<double>(n), result.second_moment[n - 1],
                             brute, std::fabs(result.second_moment[n - 1] - brute)});
        }
    }
    return 0;
}

int run_coupling_test(const json& cfg, const RunContext& ctx,
                      const std::vector<std::uint64_t>& seeds) {
    const auto pairs = require<std::vector<json>>(cfg, "pairs");
    if (pairs.empty()) fail("coupling-test needs at least one pair");
    const std::size_t n_draws = get_or<std::size_t>(cfg, "n_draws", 1000000);
    const std::size_t gof_draws = get_or<std::size_t>(cfg, "chi_square_draws", 100000);
    const double significance = get_or(cfg, "significance", 0.001);

    CsvWriter out(ctx.out_dir / "coupling.csv", ctx.config_hash, ctx.base_seed,
                  {"pair", "n_draws", "d_sup", "expected_meet", "meet_freq",
                   "tol_3sigma", "chi_p_x", "chi_p_y", "pass"});

    Rng rng(seeds.front());
    for (std::size_t pair_idx = 0; pair_idx < pairs.size(); ++pair_idx) {
        const ProbVector mu(require<std::vector<double>>(pairs[pair_idx], "mu"));
        const ProbVector nu(require<std::vector<double>>(pairs[pair_idx], "nu"));
        const double d = tv_distance(mu, nu).sup;

        std::size_t met = 0;
        std::vector<std::size_t> cx(mu.size(), 0), cy(nu.size(), 0);
        for (std::size_t i = 0; i < n_draws; ++i) {
            const CouplingDraw draw = maximal_coupling_sample(mu, nu, rng);
            met += draw.met;
            if (i < gof_draws) {
                ++cx[draw.x];
                ++cy[draw.y];
            }
        }
        const double freq = static_cast<double>(met) / static_cast<double>(n_draws);
        const double tol =
            3.0 * std::sqrt(d * (1.0 - d) / static_cast<double>(n_draws));
        const double px = chi_square_gof(cx, mu.weights()).p_value;
        const double py = chi_square_gof(cy, nu.weights()).p_value;
        const bool pass = std::fabs(freq - (1.0 - d)) <= tol &&
                          px >= significance && py >= significance;
        out.write_row({static_cast<double>(pair_idx),
                       static_cast<double>(n_draws), d, 1.0 - d, freq, tol, px,
                       py, pass ? 1.0 : 0.0});
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adaptive MCMC with subgeometric kernels: exact finite-state "
                 "verification and diagnostics"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed_override = 0;
    bool seed_given = false;
    int threads = 1;

    const std::vector<std::string> names{"toy-exact",   "toy-simulate",
                                         "am-run",      "drift-check",
                                         "resolvent-check", "winkler",
                                         "coupling-test"};
    for (const std::string& name : names) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "experiment config (JSON)")
            ->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed_override, "seed override")
            ->each([&](const std::string&) { seed_given = true; });
        sub->add_option("--threads", threads, "replicate parallelism");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string sub = app.get_subcommands().front()->get_name();

    try {
        const json cfg = load_config(config_path);
        if (cfg.contains("subcommand") &&
            cfg.at("subcommand").get<std::string>() != sub)
            fail("config is for subcommand '" +
                 cfg.at("subcommand").get<std::string>() + "', not '" + sub + "'");

        // Optional environment override, recorded in outputs like --seed.
        if (!seed_given) {
            if (const char* env = std::getenv("AMCMC_SEED")) {
                seed_override = std::strtoull(env, nullptr, 10);
                seed_given = true;
            }
        }

        RunContext ctx;
        ctx.config_hash = fnv1a64(cfg.dump());
        ctx.threads = std::max(1, threads);
        std::vector<std::uint64_t> seeds;
        if (seed_given) {
            ctx.base_seed = seed_override;
            seeds = seeds_from_config(cfg, ctx, true);
        } else {
            seeds = seeds_from_config(cfg, ctx, false);
            ctx.base_seed = seeds.front();
        }

        // Validate-then-write: the output directory is only touched after
        // the config parses and domain objects validate.
        ctx.out_dir = out_dir;
        fs::create_directories(ctx.out_dir);

        if (sub == "toy-exact") return run_toy_exact(cfg, ctx);
        if (sub == "toy-simulate") return run_toy_simulate(cfg, ctx, seeds);
        if (sub == "am-run") return run_am(cfg, ctx, seeds);
        if (sub == "drift-check") return run_drift_check(cfg, ctx);
        if (sub == "resolvent-check") return run_resolvent_check(cfg, ctx);
        if (sub == "winkler") return run_winkler(cfg, ctx);
        if (sub == "coupling-test") return run_coupling_test(cfg, ctx, seeds);
        fail("unknown subcommand");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
