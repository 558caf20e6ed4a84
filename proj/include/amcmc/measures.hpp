#pragma once

#include <cstddef>
#include <vector>

#include "amcmc/rng.hpp"

namespace amcmc {

// Finite probability distribution on support points {0, ..., n-1}.
// Weights must be nonnegative and sum to 1 within 1e-12; a sum inside that
// tolerance is renormalized, anything further off is rejected.
class ProbVector {
public:
    static constexpr double kSumTolerance = 1e-12;

    explicit ProbVector(std::vector<double> weights);

    static ProbVector uniform(std::size_t n);
    // Normalizes arbitrary nonnegative weights (e.g. pi(x) proportional to x).
    static ProbVector from_unnormalized(std::vector<double> raw);

    std::size_t size() const { return w_.size(); }
    double operator[](std::size_t i) const { return w_[i]; }
    const std::vector<double>& weights() const { return w_; }

    // Inverse-CDF draw of a support index.
    std::size_t sample(Rng& rng) const;

private:
    ProbVector() = default;
    std::vector<double> w_;
};

// V restricted to a finite space: one value >= 1 per support point.
struct WeightFunction {
    explicit WeightFunction(std::vector<double> values);
    std::vector<double> values;
};

// Both total-variation conventions. l1 = sum_i |mu_i - nu_i| is the norm
// ||.||_TV = sup_{|f|_1 <= 1} |mu(f)| with range [0,2] (the one entering
// D(theta,theta') <= 2); sup = l1/2 is sup_A |mu(A) - nu(A)|, the convention
// under which the coupling identity P(X=Y) = 1 - d holds.
struct TvDistance {
    double l1;
    double sup;
};

TvDistance tv_distance(const ProbVector& mu, const ProbVector& nu);

// sum_i v_i |mu_i - nu_i|, the finite-space value of ||mu - nu||_V.
double v_norm_distance(const ProbVector& mu, const ProbVector& nu,
                       const WeightFunction& v);

struct CouplingDraw {
    std::size_t x;
    std::size_t y;
    bool met;
};

// Maximal coupling: x ~ mu, y ~ nu, P(met) = 1 - tv_distance(mu,nu).sup and
// met implies x == y. With probability 1-d the pair is drawn from the
// normalized overlap min(mu,nu)/(1-d); otherwise x and y are drawn
// independently from the normalized residuals.
CouplingDraw maximal_coupling_sample(const ProbVector& mu, const ProbVector& nu,
                                     Rng& rng);

}  // namespace amcmc
