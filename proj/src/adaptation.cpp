#include "amcmc/adaptation.hpp"

#include <cmath>

#include "amcmc/errors.hpp"

namespace amcmc {

void ThetaSpace::validate() const {
    if (mu_lower.size() != mu_upper.size())
        throw ParameterError("ThetaSpace: mu box bounds differ in dimension");
    for (std::size_t i = 0; i < mu_lower.size(); ++i)
        if (!(mu_lower[i] < mu_upper[i]))
            throw ParameterError("ThetaSpace: empty mu box");
    if (!(eig_floor > 0.0)) throw ParameterError("ThetaSpace: eig_floor must be > 0");
    if (!(schur_cap > 0.0)) throw ParameterError("ThetaSpace: schur_cap must be > 0");
    if (!(kappa_lower < kappa_upper))
        throw ParameterError("ThetaSpace: kappa_lower must be < kappa_upper");
    if (!(target_accept > 0.0 && target_accept < 1.0))
        throw ParameterError("ThetaSpace: target_accept must lie in (0,1)");
}

bool ThetaSpace::contains(const RwmParameter& theta) const {
    const std::size_t p = mu_lower.size();
    if (theta.mu.size() != p || theta.sigma.rows() != p || theta.sigma.cols() != p)
        return false;
    for (std::size_t i = 0; i < p; ++i)
        if (theta.mu[i] < mu_lower[i] || theta.mu[i] > mu_upper[i]) return false;
    if (theta.log_scale < kappa_lower || theta.log_scale > kappa_upper) return false;
    if (!is_symmetric(theta.sigma, 1e-12)) return false;
    if (min_eigenvalue(theta.sigma) < eig_floor - kEigSlack) return false;
    Matrix shifted = theta.sigma;
    for (std::size_t i = 0; i < p; ++i) shifted(i, i) -= eig_floor;
    return schur_norm(shifted) <= schur_cap + kSchurSlack;
}

RwmParameter am_update(const RwmParameter& current, std::size_t n,
                       std::span<const double> x_next, double alpha_val,
                       const ThetaSpace& space) {
    const std::size_t p = current.mu.size();
    if (x_next.size() != p) throw DimensionError("am_update: state dimension mismatch");
    const double gamma = 1.0 / static_cast<double>(n + 1);

    RwmParameter cand;
    cand.mu.resize(p);
    cand.sigma = current.sigma;
    for (std::size_t i = 0; i < p; ++i)
        cand.mu[i] = current.mu[i] + gamma * (x_next[i] - current.mu[i]);
    // Sigma update uses the *previous* mean, per the Haario-style recursion.
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j)
            cand.sigma(i, j) += gamma * ((x_next[i] - current.mu[i]) *
                                             (x_next[j] - current.mu[j]) -
                                         current.sigma(i, j));
    cand.log_scale = current.log_scale + gamma * (alpha_val - space.target_accept);

    return space.contains(cand) ? cand : current;
}

int toy_update(int theta, bool moved, double p_next, int cap_m, Rng& rng) {
    if (theta < 1 || theta > cap_m)
        throw ParameterError("toy_update: theta outside {1..M}");
    if (!(p_next >= 0.0 && p_next <= 1.0))
        throw ParameterError("toy_update: p_next outside [0,1]");
    if (p_next == 0.0) return theta;  // adaptation off: consume no randomness
    if (rng.next_double() >= p_next) return theta;
    return moved ? std::min(cap_m, theta + 1) : std::max(1, theta - 1);
}

double adaptation_metric(const RwmParameter& theta, const RwmParameter& theta_prev) {
    return schur_norm_diff(theta.proposal_covariance(),
                           theta_prev.proposal_covariance());
}

}  // namespace amcmc
