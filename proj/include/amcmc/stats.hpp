#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace amcmc {

// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

// Survival function of the chi-square distribution with k degrees of freedom.
double chi_square_sf(double x, double k);

struct ChiSquareGof {
    double statistic;
    double dof;
    double p_value;
};

// Pearson goodness-of-fit of observed counts against expected probabilities.
// Cells with zero expected probability must carry zero counts.
ChiSquareGof chi_square_gof(std::span<const std::size_t> counts,
                            std::span<const double> expected_probs);

// Kolmogorov-Smirnov critical value sqrt(-ln(alpha/2)/2) / sqrt(n).
double ks_threshold(double alpha, std::size_t n);

}  // namespace amcmc
