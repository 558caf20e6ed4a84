#pragma once

#include <span>
#include <vector>

#include "amcmc/linalg.hpp"
#include "amcmc/measures.hpp"
#include "amcmc/rng.hpp"
#include "amcmc/targets.hpp"

namespace amcmc {

// theta = (mu, Sigma, c): the adapted proposal mean, covariance and
// log-scale. The proposal covariance actually used is e^c Sigma.
struct RwmParameter {
    std::vector<double> mu;
    Matrix sigma;
    double log_scale = 0.0;

    int dimension() const { return static_cast<int>(mu.size()); }
    Matrix proposal_covariance() const;
};

struct StepRecord {
    std::vector<double> new_state;
    std::vector<double> proposal;
    double alpha = 0.0;  // acceptance probability min(1, pi(y)/pi(x))
    bool accepted = false;
};

// One Random Walk Metropolis transition: Y = x + L xi with L the Cholesky
// factor of e^c Sigma, accepted with probability min(1, pi(Y)/pi(x)).
// A non-finite log-density at the proposal is treated as alpha = 0.
StepRecord rwm_step(const TargetDensity& target, const RwmParameter& theta,
                    std::span<const double> x, Rng& rng);

// Exact Metropolis row of the toy chain: proposals uniform on
// {x-theta,...,x-1, x+1,...,x+theta}; proposals off {1..K} are generated and
// rejected, which keeps the row pi-reversible. 1-based x.
ProbVector discrete_rwm_row(const DiscretePmf& pmf, int theta, int x);

// All K rows stacked into a K x K transition matrix.
Matrix discrete_rwm_matrix(const DiscretePmf& pmf, int theta);

}  // namespace amcmc
