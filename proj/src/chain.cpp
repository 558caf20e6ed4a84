#include "amcmc/chain.hpp"

#include <cmath>

#include "amcmc/errors.hpp"

namespace amcmc {

Trajectory run_adaptive(const AmRunConfig& config) {
    if (config.target == nullptr) throw ConfigError("run_adaptive: no target");
    if (config.n_steps < 1) throw ConfigError("run_adaptive: n_steps >= 1 required");
    if (config.thin < 1) throw ConfigError("run_adaptive: thin >= 1 required");
    config.space.validate();
    if (!config.space.contains(config.theta0))
        throw ConfigError("run_adaptive: initial theta outside Theta");
    const int p = config.theta0.dimension();
    if (static_cast<int>(config.x0.size()) != p || config.target->dimension() != p)
        throw ConfigError("run_adaptive: dimension mismatch");

    Trajectory traj;
    traj.algorithm = Algorithm::AmRwm;
    traj.dim = p;
    traj.seed = config.seed;
    traj.n_steps = config.n_steps;
    traj.thin = config.thin;
    traj.snapshot_every = config.snapshot_every;
    traj.states.reserve((config.n_steps / config.thin + 1) * p);
    traj.accepted.reserve(config.n_steps);
    traj.alpha_values.reserve(config.n_steps);
    traj.adapt_metric.reserve(config.n_steps);

    Rng rng(config.seed);
    std::vector<double> x = config.x0;
    RwmParameter theta = config.theta0;
    traj.states.insert(traj.states.end(), x.begin(), x.end());
    if (config.snapshot_every > 0) traj.snapshots.push_back({0, theta});

    for (std::size_t n = 0; n < config.n_steps; ++n) {
        StepRecord rec = rwm_step(*config.target, theta, x, rng);
        x = rec.new_state;
        if (config.adapt) {
            RwmParameter next = am_update(theta, n, x, rec.alpha, config.space);
            traj.adapt_metric.push_back(adaptation_metric(next, theta));
            theta = std::move(next);
        } else {
            traj.adapt_metric.push_back(0.0);
        }
        traj.accepted.push_back(rec.accepted ? 1 : 0);
        traj.alpha_values.push_back(rec.alpha);
        if ((n + 1) % static_cast<std::size_t>(config.thin) == 0)
            traj.states.insert(traj.states.end(), x.begin(), x.end());
        if (config.snapshot_every > 0 &&
            (n + 1) % static_cast<std::size_t>(config.snapshot_every) == 0)
            traj.snapshots.push_back({n + 1, theta});
    }
    return traj;
}

Trajectory run_adaptive(const ToyRunConfig& config) {
    if (config.pmf == nullptr) throw ConfigError("run_adaptive: no pmf");
    if (config.n_steps < 1) throw ConfigError("run_adaptive: n_steps >= 1 required");
    if (config.thin < 1) throw ConfigError("run_adaptive: thin >= 1 required");
    if (!config.p_schedule) throw ConfigError("run_adaptive: missing p schedule");
    const int k = config.pmf->k();
    if (config.x0 < 1 || config.x0 > k)
        throw ConfigError("run_adaptive: x0 outside {1..K}");
    if (config.theta0 < 1 || config.theta0 > config.m_max)
        throw ConfigError("run_adaptive: theta0 outside {1..M}");

    Trajectory traj;
    traj.algorithm = Algorithm::ToyLattice;
    traj.dim = 1;
    traj.seed = config.seed;
    traj.n_steps = config.n_steps;
    traj.thin = config.thin;
    traj.states.reserve(config.n_steps / config.thin + 1);
    traj.toy_thetas.reserve(config.n_steps / config.thin + 1);

    Rng rng(config.seed);
    int x = config.x0;
    int theta = config.theta0;
    traj.states.push_back(static_cast<double>(x));
    traj.toy_thetas.push_back(theta);

    for (std::size_t n = 0; n < config.n_steps; ++n) {
        const ProbVector row = discrete_rwm_row(*config.pmf, theta, x);
        const int x_next = static_cast<int>(row.sample(rng)) + 1;
        const bool moved = x_next != x;
        const double p_next = config.p_schedule(n + 1);
        if (!(p_next >= 0.0 && p_next <= 1.0))
            throw ParameterError("run_adaptive: p schedule left [0,1]");
        const int theta_next = toy_update(theta, moved, p_next, config.m_max, rng);
        traj.adapt_metric.push_back(std::fabs(theta_next - theta));
        traj.accepted.push_back(moved ? 1 : 0);
        x = x_next;
        theta = theta_next;
        if ((n + 1) % static_cast<std::size_t>(config.thin) == 0) {
            traj.states.push_back(static_cast<double>(x));
            traj.toy_thetas.push_back(theta);
        }
    }
    return traj;
}

std::vector<double> running_average(
    const Trajectory& traj,
    const std::function<double(std::span<const double>)>& f) {
    if (traj.thin != 1)
        throw ParameterError("running_average: requires an unthinned trajectory");
    const std::size_t n = traj.recorded_states();
    std::vector<double> avg;
    avg.reserve(n > 0 ? n - 1 : 0);
    double sum = 0.0, comp = 0.0;  // Kahan
    for (std::size_t k = 1; k < n; ++k) {
        const double value = f(traj.state(k));
        if (!std::isfinite(value))
            throw NumericalError("running_average: f not finite on a visited state");
        const double y = value - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        avg.push_back(sum / static_cast<double>(k));
    }
    return avg;
}

}  // namespace amcmc
