#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "amcmc/adaptation.hpp"
#include "amcmc/mh_kernels.hpp"
#include "amcmc/targets.hpp"

namespace amcmc {

enum class Algorithm { AmRwm, ToyLattice };

struct ThetaSnapshot {
    std::size_t step;  // index n of theta_n
    RwmParameter theta;
};

// Recorded path of the bivariate process {(X_n, theta_n)}. States include
// X_0 and are recorded every `thin` steps; the per-step scalars (acceptance,
// alpha, adaptation metric) are always dense. Replaying with the same seed
// and configuration reproduces the trajectory bit-exactly.
struct Trajectory {
    Algorithm algorithm;
    int dim = 1;
    std::uint64_t seed = 0;
    std::size_t n_steps = 0;
    int thin = 1;
    int snapshot_every = 0;

    std::vector<double> states;          // ((n_steps/thin)+1) x dim, row-major
    std::vector<std::uint8_t> accepted;  // per step (toy: 1 iff the state moved)
    std::vector<double> alpha_values;    // AM only, per step
    std::vector<double> adapt_metric;    // per step; toy: |theta_n - theta_{n-1}|
    std::vector<int> toy_thetas;         // toy only: theta_n per recorded state
    std::vector<ThetaSnapshot> snapshots;  // AM only

    std::size_t recorded_states() const { return states.size() / dim; }
    std::span<const double> state(std::size_t i) const {
        return {states.data() + i * dim, static_cast<std::size_t>(dim)};
    }
};

struct AmRunConfig {
    const TargetDensity* target = nullptr;
    std::vector<double> x0;
    RwmParameter theta0;
    ThetaSpace space;
    bool adapt = true;  // false freezes theta (homogeneous Metropolis chain)
    std::size_t n_steps = 0;
    std::uint64_t seed = 0;
    int thin = 1;
    int snapshot_every = 100;
};

struct ToyRunConfig {
    const DiscretePmf* pmf = nullptr;
    int x0 = 1;
    int theta0 = 1;
    int m_max = 1;
    // p_{n+1} is requested as p_schedule(n+1); values must lie in [0,1].
    std::function<double(std::size_t)> p_schedule;
    std::size_t n_steps = 0;
    std::uint64_t seed = 0;
    int thin = 1;
};

Trajectory run_adaptive(const AmRunConfig& config);
Trajectory run_adaptive(const ToyRunConfig& config);

// Entry n-1 is n^{-1} sum_{k=1..n} f(X_k); X_0 is excluded. Kahan-compensated.
// Requires an unthinned trajectory.
std::vector<double> running_average(
    const Trajectory& traj,
    const std::function<double(std::span<const double>)>& f);

}  // namespace amcmc
