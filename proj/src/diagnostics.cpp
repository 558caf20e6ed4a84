#include "amcmc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "amcmc/errors.hpp"
#include "amcmc/quadrature.hpp"

namespace amcmc {

void DriftSpec::validate() const {
    if (!(s >= 0.0)) throw ParameterError("DriftSpec: s must be nonnegative");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ParameterError("DriftSpec: alpha must lie in (0,1)");
    if (!(c > 0.0)) throw ParameterError("DriftSpec: c must be positive");
    if (!(b > 0.0)) throw ParameterError("DriftSpec: b must be positive");
    if (!(c_bound > 0.0)) throw ParameterError("DriftSpec: C bound must be positive");
}

double drift_function(const SmoothedWeibullTarget& target, double s, double x) {
    return 1.0 + std::exp(-s * target.log_density1(x));
}

namespace {

// P_theta V_s(x) - V_s(x) = int (V_s(x+z) - V_s(x)) alpha(x, x+z) q(z) dz.
double drift_increment(const SmoothedWeibullTarget& target, double s, double x,
                       double sigma2, double quad_tol) {
    const double sigma = std::sqrt(sigma2);
    const double log_pi_x = target.log_density1(x);
    const double v_x = drift_function(target, s, x);

    const auto integrand = [&](double z) {
        const double lp = target.log_density1(x + z);
        const double accept = std::min(1.0, std::exp(lp - log_pi_x));
        const double v_y = 1.0 + std::exp(-s * lp);
        const double q =
            std::exp(-0.5 * z * z / sigma2) / (sigma * std::sqrt(2.0 * M_PI));
        return (v_y - v_x) * accept * q;
    };

    // Acceptance-probability kinks sit where pi(x+z) = pi(x): z = 0 and,
    // by symmetry of the target, z = -2x.
    const double span = 8.0 * sigma;
    std::vector<double> cuts{-span, 0.0, span};
    if (-2.0 * x > -span && -2.0 * x < span && x != 0.0) cuts.push_back(-2.0 * x);
    std::sort(cuts.begin(), cuts.end());

    double value = 0.0, err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const auto piece = integrate_interval(integrand, cuts[i], cuts[i + 1],
                                              quad_tol / cuts.size());
        value += piece.value;
        err += piece.abs_error;
    }

    // Tail beyond 8 sigma: split q = e^{-z^2/4s^2} * e^{-z^2/4s^2}/sqrt(2 pi s^2);
    // the first factor times (V_s(x+z)+V_s(x)) is decreasing past 8 sigma because
    // z^{2-m} >> 2 sigma^2 s beta m there, so its value at 8 sigma dominates.
    const double v_edge = drift_function(target, s, std::fabs(x) + span);
    const double tail = (v_edge + v_x) * std::exp(-16.0) * std::sqrt(2.0) *
                        std::erfc(8.0 / 2.0);
    err += tail;
    if (err > quad_tol)
        throw NumericalError("drift_check: quadrature error " + std::to_string(err) +
                             " above tolerance at x=" + std::to_string(x) +
                             ", e^c Sigma=" + std::to_string(sigma2));
    return value;
}

}  // namespace

DriftReport drift_check(const SmoothedWeibullTarget& target, const DriftSpec& spec,
                        std::span<const RwmParameter> theta_grid,
                        std::span<const double> x_grid, double quad_tol) {
    spec.validate();
    if (!(quad_tol > 0.0)) throw ParameterError("drift_check: quad_tol must be positive");

    DriftReport report;
    report.worst_margin = std::numeric_limits<double>::infinity();
    report.c_star = std::numeric_limits<double>::infinity();
    report.pass = true;
    const double m = target.m();

    for (const RwmParameter& theta : theta_grid) {
        if (theta.dimension() != 1)
            throw ParameterError("drift_check: 1-D parameters required");
        const double sigma2 = theta.proposal_covariance()(0, 0);
        if (!(sigma2 > 0.0))
            throw ParameterError("drift_check: proposal variance must be positive");
        for (double x : x_grid) {
            DriftPoint point;
            point.proposal_variance = sigma2;
            point.x = x;
            point.v_s = drift_function(target, spec.s, x);
            if (std::fabs(x) <= spec.c_bound) {
                point.skipped = true;
                point.p_theta_v = 0.0;
                point.margin = 0.0;
                point.c_max = 0.0;
                report.points.push_back(point);
                continue;
            }
            const double increment =
                drift_increment(target, spec.s, x, sigma2, quad_tol);
            point.p_theta_v = point.v_s + increment;
            const double decay = point.v_s * std::pow(std::fabs(x), 2.0 * (m - 1.0));
            point.margin = -spec.c * decay - increment;
            point.c_max = -increment / decay;
            report.points.push_back(point);

            report.worst_margin = std::min(report.worst_margin, point.margin);
            report.c_star = std::min(report.c_star, point.c_max);
            if (point.margin < -quad_tol) report.pass = false;
        }
    }
    return report;
}

LlnReport lln_report(std::span<const Trajectory> trajectories,
                     const std::function<double(std::span<const double>)>& f,
                     double reference, std::optional<std::size_t> at_step) {
    if (trajectories.size() < 2)
        throw InsufficientDataError("lln_report: at least 2 trajectories required");

    LlnReport rep;
    rep.at_step = 0;
    for (const Trajectory& traj : trajectories) {
        const std::vector<double> avg = running_average(traj, f);
        if (avg.empty()) throw InsufficientDataError("lln_report: empty trajectory");
        std::size_t idx = avg.size() - 1;
        if (at_step) {
            if (*at_step < 1 || *at_step > avg.size())
                throw ParameterError("lln_report: probe step out of range");
            idx = *at_step - 1;
        }
        rep.at_step = idx + 1;
        rep.final_values.push_back(avg[idx]);
        rep.final_errors.push_back(std::fabs(avg[idx] - reference));
    }
    // Pooled error: across-seed mean of the absolute errors, with the
    // standard error of that mean as half-width.
    const double n = static_cast<double>(rep.final_errors.size());
    double mean = 0.0;
    for (double err : rep.final_errors) mean += err;
    mean /= n;
    double var = 0.0;
    for (double err : rep.final_errors) var += (err - mean) * (err - mean);
    var /= (n - 1.0);
    rep.pooled_error = mean;
    rep.half_width = std::sqrt(var / n);
    return rep;
}

DiminishingReport diminishing_adaptation_report(const Trajectory& traj) {
    DiminishingReport rep;
    rep.delta = traj.adapt_metric;
    rep.pass = true;

    const std::size_t n_steps = rep.delta.size();
    std::vector<double> scratch;
    for (std::size_t begin = 1024; begin < n_steps; begin *= 2) {
        const std::size_t end = std::min(begin * 2, n_steps);
        scratch.clear();
        // delta index i holds the metric of step n = i+1.
        for (std::size_t n = begin; n < end; ++n)
            scratch.push_back(static_cast<double>(n) * rep.delta[n - 1]);
        if (scratch.empty()) break;
        std::nth_element(scratch.begin(), scratch.begin() + scratch.size() / 2,
                         scratch.end());
        rep.windows.push_back({begin, end, scratch[scratch.size() / 2]});
    }
    if (rep.windows.size() >= 2) {
        const double base = rep.windows.front().median_n_delta;
        for (const auto& w : rep.windows)
            if (w.median_n_delta > 2.0 * base) rep.pass = false;
    }
    return rep;
}

void ReturnTimeSpec::validate() const {
    if (!(radius > 0.0)) throw ParameterError("ReturnTimeSpec: radius must be positive");
    if (!(eta >= 0.0)) throw ParameterError("ReturnTimeSpec: eta must be >= 0");
}

ReturnTimeReport return_time_moments(const Trajectory& traj,
                                     const ReturnTimeSpec& spec) {
    spec.validate();
    if (traj.thin != 1)
        throw ParameterError("return_time_moments: requires an unthinned trajectory");

    const std::size_t n = traj.recorded_states();
    double sum_r = 0.0;
    std::size_t cycles = 0;
    std::ptrdiff_t last_visit = -1;
    for (std::size_t t = 0; t < n; ++t) {
        const auto state = traj.state(t);
        double norm2 = 0.0;
        for (double v : state) norm2 += v * v;
        if (norm2 <= spec.radius * spec.radius) {
            if (last_visit >= 0) {
                const double tau = static_cast<double>(t) - last_visit;
                sum_r += std::pow(tau + 1.0, 1.0 + spec.eta);
                ++cycles;
            }
            last_visit = static_cast<std::ptrdiff_t>(t);
        }
    }
    if (cycles == 0)
        throw InsufficientDataError(
            "return_time_moments: fewer than two visits to C");
    return {sum_r / static_cast<double>(cycles), cycles};
}

}  // namespace amcmc
