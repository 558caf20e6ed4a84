#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "amcmc/chain.hpp"
#include "amcmc/mh_kernels.hpp"
#include "amcmc/targets.hpp"

namespace amcmc {

// Symbols of the drift condition: V_s = 1 + pi^{-s}, the contraction
// constant c of the polynomial form, and the compact set C = {|x| <= c_bound}.
// alpha and b are the A5 exponent/offset the caller wants to associate with
// the check; the pointwise margin itself uses the |x|^{2(m-1)} form.
struct DriftSpec {
    double s = 0.05;
    double alpha = 0.5;
    double c = 1e-3;
    double b = 1.0;
    double c_bound = 5.0;

    void validate() const;
};

struct DriftPoint {
    double proposal_variance;  // e^c Sigma (1-D)
    double x;
    double v_s;
    double p_theta_v;     // quadrature value of P_theta V_s(x)
    double margin;        // V_s - c V_s |x|^{2(m-1)} - P_theta V_s
    double c_max;         // largest c passing at this point
    bool skipped = false; // x inside C
};

struct DriftReport {
    std::vector<DriftPoint> points;
    double worst_margin;  // over evaluated points
    double c_star;        // min over points of c_max; largest c passing everywhere
    bool pass;            // all margins >= -quad_tol
};

// Evaluates P_theta V_s(x) by adaptive quadrature over z in [-8 sigma, 8 sigma]
// (split at the acceptance kinks) plus an analytic tail bound folded into the
// error budget. x values inside C are reported as skipped.
DriftReport drift_check(const SmoothedWeibullTarget& target, const DriftSpec& spec,
                        std::span<const RwmParameter> theta_grid,
                        std::span<const double> x_grid, double quad_tol);

// V_s(x) = 1 + pi^{-s}(x) for the smoothed Weibull target.
double drift_function(const SmoothedWeibullTarget& target, double s, double x);

struct LlnReport {
    std::vector<double> final_values;  // per-trajectory averages at the probe step
    std::vector<double> final_errors;  // |average - reference|
    double pooled_error;               // |mean of averages - reference|
    double half_width;                 // standard error of the across-seed mean
    std::size_t at_step;
};

LlnReport lln_report(std::span<const Trajectory> trajectories,
                     const std::function<double(std::span<const double>)>& f,
                     double reference,
                     std::optional<std::size_t> at_step = std::nullopt);

struct DiminishingWindow {
    std::size_t n_begin;  // window covers n in [n_begin, n_end)
    std::size_t n_end;
    double median_n_delta;
};

struct DiminishingReport {
    std::vector<double> delta;  // delta_n = metric(theta_n, theta_{n-1}), n >= 1
    std::vector<DiminishingWindow> windows;  // dyadic, starting at n >= 1024
    bool pass;  // no window median exceeds twice the first window's
};

DiminishingReport diminishing_adaptation_report(const Trajectory& traj);

struct ReturnTimeSpec {
    double radius = 5.0;  // C = {|x| <= radius}
    double eta = 0.1;     // r(n) = (n+1)^{1+eta}

    void validate() const;
};

struct ReturnTimeReport {
    double mean_r_tau;
    std::size_t cycles;
};

// Gaps between consecutive visits to C along the recorded path.
ReturnTimeReport return_time_moments(const Trajectory& traj,
                                     const ReturnTimeSpec& spec);

}  // namespace amcmc
