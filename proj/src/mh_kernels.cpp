#include "amcmc/mh_kernels.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "amcmc/errors.hpp"

namespace amcmc {

Matrix RwmParameter::proposal_covariance() const {
    const double scale = std::exp(log_scale);
    Matrix out = sigma;
    for (std::size_t i = 0; i < out.rows() * out.cols(); ++i)
        out.data()[i] *= scale;
    return out;
}

StepRecord rwm_step(const TargetDensity& target, const RwmParameter& theta,
                    std::span<const double> x, Rng& rng) {
    const std::size_t p = theta.mu.size();
    if (x.size() != p || static_cast<int>(p) != target.dimension())
        throw DimensionError("rwm_step: dimension mismatch");
    if (theta.sigma.rows() != p || theta.sigma.cols() != p)
        throw DimensionError("rwm_step: Sigma shape mismatch");

    Matrix chol;
    try {
        chol = cholesky(theta.proposal_covariance());
    } catch (const NumericalError&) {
        throw ParameterError("rwm_step: proposal covariance not SPD");
    }

    StepRecord rec;
    rec.proposal.resize(p);
    std::vector<double> xi(p);
    for (std::size_t i = 0; i < p; ++i) xi[i] = rng.next_gaussian();
    for (std::size_t i = 0; i < p; ++i) {
        double z = 0.0;
        for (std::size_t k = 0; k <= i; ++k) z += chol(i, k) * xi[k];
        rec.proposal[i] = x[i] + z;
    }

    const double log_pi_x = target.log_density(x);
    if (!std::isfinite(log_pi_x))
        throw ParameterError("rwm_step: log-density not finite at current state");
    const double log_pi_y = target.log_density(rec.proposal);

    double log_ratio;
    if (std::isfinite(log_pi_y)) {
        log_ratio = log_pi_y - log_pi_x;
        rec.alpha = std::min(1.0, std::exp(log_ratio));
    } else {
        log_ratio = -std::numeric_limits<double>::infinity();
        rec.alpha = 0.0;
    }

    const double u = rng.next_open_double();
    rec.accepted = std::log(u) < log_ratio;
    rec.new_state = rec.accepted ? rec.proposal
                                 : std::vector<double>(x.begin(), x.end());
    return rec;
}

ProbVector discrete_rwm_row(const DiscretePmf& pmf, int theta, int x) {
    const int k = pmf.k();
    if (x < 1 || x > k)
        throw ParameterError("discrete_rwm_row: x outside {1.." + std::to_string(k) + "}");
    if (theta < 1)
        throw ParameterError("discrete_rwm_row: theta must be >= 1");

    std::vector<double> row(static_cast<std::size_t>(k), 0.0);
    const double q = 1.0 / (2.0 * theta);
    const double pi_x = pmf.at(x);
    double hold = 0.0;
    for (int d = -theta; d <= theta; ++d) {
        if (d == 0) continue;
        const int y = x + d;
        if (y < 1 || y > k) {
            hold += q;  // off-lattice proposal, rejected
            continue;
        }
        const double accept = std::min(1.0, pmf.at(y) / pi_x);
        row[static_cast<std::size_t>(y - 1)] += q * accept;
        hold += q * (1.0 - accept);
    }
    row[static_cast<std::size_t>(x - 1)] += hold;
    return ProbVector(std::move(row));
}

Matrix discrete_rwm_matrix(const DiscretePmf& pmf, int theta) {
    const int k = pmf.k();
    Matrix p(static_cast<std::size_t>(k), static_cast<std::size_t>(k));
    for (int x = 1; x <= k; ++x) {
        const ProbVector row = discrete_rwm_row(pmf, theta, x);
        for (int y = 1; y <= k; ++y)
            p(static_cast<std::size_t>(x - 1), static_cast<std::size_t>(y - 1)) =
                row[static_cast<std::size_t>(y - 1)];
    }
    return p;
}

}  // namespace amcmc
