#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "amcmc/mh_kernels.hpp"
#include "amcmc/rng.hpp"

namespace amcmc {

// Theta = Theta_mu x Theta_+ x [kappa_l, kappa_u] with
// Theta_+ = { Sigma : lambda_min(Sigma) >= eig_floor, |Sigma - a Id|_s <= schur_cap }.
struct ThetaSpace {
    std::vector<double> mu_lower;
    std::vector<double> mu_upper;
    double eig_floor = 1e-3;   // a
    double schur_cap = 1e3;    // M
    double kappa_lower = -10.0;
    double kappa_upper = 10.0;
    double target_accept = 0.35;  // alpha-bar

    // Boundary slack keeps candidates from flip-flopping on numerically
    // borderline eigenvalues / norms.
    static constexpr double kEigSlack = 1e-12;
    static constexpr double kSchurSlack = 1e-9;

    void validate() const;
    bool contains(const RwmParameter& theta) const;
};

// One stochastic-approximation update of (mu, Sigma, c) with step 1/(n+1).
// The candidate triple is tested for Theta membership jointly; a candidate
// outside Theta is discarded and the previous triple returned unchanged
// (rejection, not projection).
RwmParameter am_update(const RwmParameter& current, std::size_t n,
                       std::span<const double> x_next, double alpha_val,
                       const ThetaSpace& space);

// Toy rule: on a holding move shrink the width towards 1 with probability
// p_next, on an accepted move grow it towards cap_m.
int toy_update(int theta, bool moved, double p_next, int cap_m, Rng& rng);

// |e^c Sigma - e^{c'} Sigma'|_s: computable surrogate that bounds
// D(theta, theta') up to the compactness constant.
double adaptation_metric(const RwmParameter& theta, const RwmParameter& theta_prev);

}  // namespace amcmc
