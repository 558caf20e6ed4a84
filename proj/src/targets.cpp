#include "amcmc/targets.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "amcmc/errors.hpp"
#include "amcmc/quadrature.hpp"

namespace amcmc {

void TargetDensity::gradient(std::span<const double>, std::span<double>) const {
    throw ParameterError("TargetDensity: analytic gradient not available");
}

std::vector<double> fd_gradient(const TargetDensity& target,
                                std::span<const double> x) {
    std::vector<double> point(x.begin(), x.end());
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double h = 1e-6 * std::max(1.0, std::fabs(x[i]));
        const double xi = point[i];
        point[i] = xi + h;
        const double up = target.log_density(point);
        point[i] = xi - h;
        const double down = target.log_density(point);
        point[i] = xi;
        g[i] = (up - down) / (2.0 * h);
    }
    return g;
}

GaussianTarget::GaussianTarget(std::vector<double> mean, Matrix covariance)
    : mean_(std::move(mean)), cov_(std::move(covariance)) {
    if (cov_.rows() != mean_.size() || cov_.cols() != mean_.size())
        throw DimensionError("GaussianTarget: covariance shape mismatch");
    if (!is_symmetric(cov_, 1e-12))
        throw ParameterError("GaussianTarget: covariance not symmetric");
    chol_ = cholesky(cov_);
}

double GaussianTarget::log_density(std::span<const double> x) const {
    if (x.size() != mean_.size())
        throw DimensionError("GaussianTarget: point dimension mismatch");
    // Solve L u = x - mean, then log pi = -|u|^2 / 2.
    const std::size_t p = mean_.size();
    std::vector<double> u(p);
    for (std::size_t i = 0; i < p; ++i) {
        double v = x[i] - mean_[i];
        for (std::size_t k = 0; k < i; ++k) v -= chol_(i, k) * u[k];
        u[i] = v / chol_(i, i);
    }
    double q = 0.0;
    for (double ui : u) q += ui * ui;
    return -0.5 * q;
}

void GaussianTarget::gradient(std::span<const double> x, std::span<double> g) const {
    if (x.size() != mean_.size() || g.size() != mean_.size())
        throw DimensionError("GaussianTarget: point dimension mismatch");
    // grad = -Sigma^{-1} (x - mean) via two triangular solves.
    const std::size_t p = mean_.size();
    std::vector<double> u(p);
    for (std::size_t i = 0; i < p; ++i) {
        double v = x[i] - mean_[i];
        for (std::size_t k = 0; k < i; ++k) v -= chol_(i, k) * u[k];
        u[i] = v / chol_(i, i);
    }
    for (std::size_t ii = p; ii-- > 0;) {
        double v = u[ii];
        for (std::size_t k = ii + 1; k < p; ++k) v -= chol_(k, ii) * g[k];
        g[ii] = v / chol_(ii, ii);
    }
    for (std::size_t i = 0; i < p; ++i) g[i] = -g[i];
}

SmoothedWeibullTarget::SmoothedWeibullTarget(double m, double beta)
    : m_(m), beta_(beta) {
    if (!(m > 0.0 && m < 1.0))
        throw ParameterError("SmoothedWeibullTarget: m must lie in (0,1)");
    if (!(beta > 0.0))
        throw ParameterError("SmoothedWeibullTarget: beta must be positive");
}

double SmoothedWeibullTarget::log_density1(double x) const {
    const double s = 1.0 + x * x;
    return -beta_ * (std::pow(s, m_ / 2.0) - 1.0) + 0.5 * (m_ - 1.0) * std::log(s);
}

double SmoothedWeibullTarget::gradient1(double x) const {
    const double s = 1.0 + x * x;
    return -beta_ * m_ * x * std::pow(s, m_ / 2.0 - 1.0) + (m_ - 1.0) * x / s;
}

double SmoothedWeibullTarget::log_density(std::span<const double> x) const {
    if (x.size() != 1)
        throw DimensionError("SmoothedWeibullTarget: 1-D target");
    return log_density1(x[0]);
}

void SmoothedWeibullTarget::gradient(std::span<const double> x,
                                     std::span<double> g) const {
    if (x.size() != 1 || g.size() != 1)
        throw DimensionError("SmoothedWeibullTarget: 1-D target");
    g[0] = gradient1(x[0]);
}

DiscretePmf::DiscretePmf(ProbVector probabilities) : pmf(std::move(probabilities)) {
    if (pmf.size() < 4) throw ParameterError("DiscretePmf: K >= 4 required");
    for (std::size_t i = 0; i < pmf.size(); ++i)
        if (!(pmf[i] > 0.0))
            throw ParameterError("DiscretePmf: pmf must be strictly positive");
}

namespace {

double fd_second_derivative(const SmoothedWeibullTarget& t, double x) {
    const double h = 1e-4 * std::max(1.0, std::fabs(x));
    return (t.log_density1(x + h) - 2.0 * t.log_density1(x) + t.log_density1(x - h)) /
           (h * h);
}

}  // namespace

D2Report check_D2(const SmoothedWeibullTarget& target,
                  std::span<const double> radii, double regularity_radius) {
    for (double r : radii)
        if (!(r >= regularity_radius))
            throw ParameterError("check_D2: radius " + std::to_string(r) +
                                 " below the regularity radius");

    D2Report rep{};
    rep.d0 = rep.d1 = rep.d2 = std::numeric_limits<double>::infinity();
    rep.D0 = rep.D1 = rep.D2 = 0.0;
    double worst_contour = -std::numeric_limits<double>::infinity();
    const double m = target.m();

    for (double r : radii) {
        for (double x : {r, -r}) {
            const double neg_log = -target.log_density1(x);
            const double grad = target.gradient1(x);
            const double hess = fd_second_derivative(target, x);
            const double ax = std::fabs(x);

            if (!(neg_log > 0.0)) {
                rep.violations.push_back({x, "-log pi not positive"});
                continue;
            }
            if (grad == 0.0) {
                rep.violations.push_back({x, "gradient vanishes"});
                continue;
            }
            // 1-D contour condition: grad pi / |grad pi| = sign(grad log pi).
            const double contour = (grad > 0.0 ? 1.0 : -1.0) * (x > 0.0 ? 1.0 : -1.0);
            if (contour >= 0.0)
                rep.violations.push_back({x, "density not decreasing along x"});
            worst_contour = std::max(worst_contour, contour);

            rep.d0 = std::min(rep.d0, neg_log / std::pow(ax, m));
            rep.D0 = std::max(rep.D0, neg_log / std::pow(ax, m));
            rep.d1 = std::min(rep.d1, std::fabs(grad) / std::pow(ax, m - 1.0));
            rep.D1 = std::max(rep.D1, std::fabs(grad) / std::pow(ax, m - 1.0));
            rep.d2 = std::min(rep.d2, std::fabs(hess) / std::pow(ax, m - 2.0));
            rep.D2 = std::max(rep.D2, std::fabs(hess) / std::pow(ax, m - 2.0));
        }
    }
    rep.r_contour = -worst_contour;
    return rep;
}

double quadrature_expectation(TargetDensity& target,
                              const std::function<double(double)>& f,
                              double abs_tol) {
    if (target.dimension() != 1)
        throw ParameterError("quadrature_expectation: 1-D targets only");
    if (!(abs_tol > 0.0))
        throw ParameterError("quadrature_expectation: abs_tol must be positive");

    const auto density = [&target](double x) {
        return std::exp(target.log_density(std::span<const double>(&x, 1)));
    };
    const double rel = 1e-12;
    const auto z = integrate_real_line(density, 0.0, rel);
    if (!(z.value > 0.0))
        throw NumericalError("quadrature_expectation: vanishing normalization");
    const auto num = integrate_real_line(
        [&](double x) { return f(x) * density(x); }, 0.0, rel);

    const double value = num.value / z.value;
    // First-order error propagation through the quotient.
    const double est_err =
        (num.abs_error + std::fabs(value) * z.abs_error) / z.value;
    if (est_err > abs_tol)
        throw NumericalError("quadrature_expectation: error estimate " +
                             std::to_string(est_err) + " above tolerance");
    target.set_normalization(z.value);
    return value;
}

double d3_overlap_ratio(const SmoothedWeibullTarget& target, double sigma2,
                        double x, double s_star, double eta, double quad_tol) {
    const double m = target.m();
    const double upsilon = (1.0 - m) / 2.0;
    const double z0 = eta * std::pow(std::fabs(x), upsilon);
    const double sigma = std::sqrt(sigma2);
    const double log_pi_x = target.log_density1(x);

    const auto integrand = [&](double z) {
        const double ratio = log_pi_x - target.log_density1(x + z);  // log pi(x)/pi(x+z)
        const double amp = ratio > 0.0 ? std::exp(s_star * ratio) : 1.0;
        const double q = std::exp(-0.5 * z * z / sigma2) /
                         (sigma * std::sqrt(2.0 * M_PI));
        return amp * q;
    };
    // The integrand decays super-exponentially; 12 sigma beyond the cutoff
    // covers everything above 1e-30 of the local scale.
    const double hi = z0 + 12.0 * sigma + 1.0;
    const double right = integrate_interval(integrand, z0, hi, quad_tol).value;
    const double left = integrate_interval(integrand, -hi, -z0, quad_tol).value;
    return (left + right) / std::pow(std::fabs(x), 2.0 * (m - 1.0));
}

}  // namespace amcmc
