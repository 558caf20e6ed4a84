#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "amcmc/linalg.hpp"
#include "amcmc/measures.hpp"
#include "amcmc/mh_kernels.hpp"
#include "amcmc/targets.hpp"

namespace amcmc {

// Exact (K*M) x (K*M) row-stochastic kernel of the adaptive toy chain at one
// step. Pair states are indexed (x-1)*M + (theta-1). Marginalizing each row
// over theta' recovers P_theta(x, x') entrywise.
struct FiniteJointKernel {
    int k = 0;
    int m = 0;
    double p_next = 0.0;
    std::size_t step_index = 0;
    Matrix matrix;
};

struct JointLaw {
    ProbVector law;  // over the K*M pair states
    std::size_t step = 0;
};

struct PropagateResult {
    std::vector<std::vector<double>> x_marginals;  // per step, length K
    std::vector<double> tv_to_pi;                  // l1 distance to pi, per step
    std::vector<std::vector<double>> joint_laws;   // only if requested
};

// Discounted resolvent of the centered test function:
//   g_a^{(l)}(x,theta) = sum_{j>=0} (1-a)^{j+1} E^{(l)}_{x,theta}[ f(X_j) - pi(f) ].
struct ResolventSpec {
    double discount = 0.1;        // a in (0,1)
    std::size_t start_offset = 0; // l
    std::vector<double> f;        // values on {1..K}
    double truncation_tol = 1e-12;
};

struct PowerProfile {
    std::vector<double> sup_vnorm;    // sup_x ||P^n(x,.) - pi||_{V^beta}, n = 0..n_max
    std::vector<double> rate_ratio;   // sup_x (n+1)^{kappa-1} dist(x) / V^{beta+alpha*kappa}(x)
    double sup_rate_ratio = 0.0;      // empirical constant of the rate bound
};

using PSchedule = std::function<double(std::size_t)>;

// Dense linear-algebra engine for one toy-chain family {P_theta}.
// Everything is exact up to floating point; the supported envelope is
// K*M <= ~5000 pair states.
class ToyJointChain {
public:
    ToyJointChain(DiscretePmf pmf, int m_max);

    int k() const { return pmf_.k(); }
    int m() const { return m_max_; }
    int pair_count() const { return k() * m(); }
    int pair_index(int x, int theta) const { return (x - 1) * m_max_ + (theta - 1); }

    const DiscretePmf& pmf() const { return pmf_; }
    const Matrix& theta_kernel(int theta) const;  // K x K row-stochastic

    FiniteJointKernel joint_kernel(double p_next, std::size_t step_index = 0) const;

    // One exact step of the joint law / of a function on pair states.
    // Same arithmetic as the dense kernel, factored to O(M K^2).
    void apply_to_law(double p_next, std::span<const double> law,
                      std::span<double> out) const;
    void apply_to_function(double p_next, std::span<const double> h,
                           std::span<double> out) const;

    PropagateResult propagate(const JointLaw& initial, const PSchedule& p_schedule,
                              std::size_t horizon, bool keep_joint_laws = false) const;

    // D(theta1, theta2) = max_x || P_theta1(x,.) - P_theta2(x,.) ||_TV (l1).
    double exact_d(int theta1, int theta2) const;

    // Resolvent at every pair state; truncation depth from the geometric
    // tail bound (1-a)^{J+1} max|f - pi(f)| / a <= truncation_tol.
    std::vector<double> resolvent(const ResolventSpec& spec,
                                  const PSchedule& p_schedule) const;
    double resolvent_at(const ResolventSpec& spec, const PSchedule& p_schedule,
                        int x, int theta) const;

    // | f_bar(x) - (1-a)^{-1} g_a^{(l)}(x,theta)
    //   + sum_{x1,theta1} P_bar(l;(x,theta),.) g_a^{(l+1)}(x1,theta1) |
    std::vector<double> poisson_residual(const ResolventSpec& spec,
                                         const PSchedule& p_schedule) const;
    double poisson_residual_at(const ResolventSpec& spec,
                               const PSchedule& p_schedule, int x, int theta) const;

    PowerProfile power_profile(int theta, const WeightFunction& v, double beta,
                               double kappa, double alpha, int n_max) const;

private:
    double pi_f(std::span<const double> f) const;
    void validate_spec(const ResolventSpec& spec) const;

    DiscretePmf pmf_;
    int m_max_;
    std::vector<Matrix> kernels_;  // P_theta, theta = 1..M
};

// ---------------------------------------------------------------------------
// Winkler-style counterexample on {0,1}: P_theta(0,0) = P_theta(1,1) = 1-theta
// with a deterministic schedule theta_n for the transition into X_n. pi is
// the fair coin regardless of theta.

struct WinklerResult {
    std::vector<double> tv_to_pi;       // entry n, n = 0..horizon (l1)
    std::vector<double> second_moment;  // entry n-1: E[(n^{-1} sum_1^n f(X_k) - pi(f))^2]
};

// f is given by its two values (f0, f1); initial law by P(X_0 = 0).
// The second moment comes from the exact pair-correlation recursion
//   E[f_bar(X_j) f_bar(X_k)] = sigma^2 prod_{i=j+1..k} (1 - 2 theta_i).
WinklerResult winkler_counterexample(const PSchedule& theta_schedule,
                                     std::size_t horizon, double f0, double f1,
                                     double p0_initial = 1.0);

// Full 2^N path enumeration of the same second moment; small-N oracle.
double winkler_second_moment_enumeration(const PSchedule& theta_schedule,
                                         std::size_t n, double f0, double f1,
                                         double p0_initial = 1.0);

}  // namespace amcmc
