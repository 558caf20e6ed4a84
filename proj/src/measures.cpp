#include "amcmc/measures.hpp"

#include <cmath>

#include "amcmc/errors.hpp"
#include "amcmc/simd/kernels.hpp"

namespace amcmc {

ProbVector::ProbVector(std::vector<double> weights) : w_(std::move(weights)) {
    if (w_.empty()) throw DimensionError("ProbVector: empty support");
    double sum = 0.0;
    for (double w : w_) {
        if (!(w >= 0.0)) throw ParameterError("ProbVector: negative weight");
        sum += w;
    }
    if (std::fabs(sum - 1.0) > kSumTolerance)
        throw ParameterError("ProbVector: weights sum to " + std::to_string(sum) +
                             ", outside 1 +/- 1e-12");
    if (sum != 1.0)
        for (double& w : w_) w /= sum;
}

ProbVector ProbVector::uniform(std::size_t n) {
    if (n == 0) throw DimensionError("ProbVector::uniform: empty support");
    ProbVector p;
    p.w_.assign(n, 1.0 / static_cast<double>(n));
    return p;
}

ProbVector ProbVector::from_unnormalized(std::vector<double> raw) {
    if (raw.empty()) throw DimensionError("ProbVector: empty support");
    double sum = 0.0;
    for (double w : raw) {
        if (!(w >= 0.0)) throw ParameterError("ProbVector: negative weight");
        sum += w;
    }
    if (!(sum > 0.0)) throw ParameterError("ProbVector: zero total mass");
    for (double& w : raw) w /= sum;
    ProbVector p;
    p.w_ = std::move(raw);
    return p;
}

std::size_t ProbVector::sample(Rng& rng) const {
    const double u = rng.next_double();
    double cdf = 0.0;
    for (std::size_t i = 0; i + 1 < w_.size(); ++i) {
        cdf += w_[i];
        if (u < cdf) return i;
    }
    return w_.size() - 1;
}

WeightFunction::WeightFunction(std::vector<double> vals) : values(std::move(vals)) {
    for (double v : values)
        if (!(v >= 1.0)) throw ParameterError("WeightFunction: value below 1");
}

TvDistance tv_distance(const ProbVector& mu, const ProbVector& nu) {
    if (mu.size() != nu.size())
        throw DimensionError("tv_distance: support sizes differ");
    const double l1 = simd::active().abs_diff_sum(mu.weights().data(),
                                                  nu.weights().data(), mu.size());
    return {l1, l1 / 2.0};
}

double v_norm_distance(const ProbVector& mu, const ProbVector& nu,
                       const WeightFunction& v) {
    if (mu.size() != nu.size() || v.values.size() != mu.size())
        throw DimensionError("v_norm_distance: support sizes differ");
    return simd::active().weighted_abs_diff_sum(
        v.values.data(), mu.weights().data(), nu.weights().data(), mu.size());
}

CouplingDraw maximal_coupling_sample(const ProbVector& mu, const ProbVector& nu,
                                     Rng& rng) {
    if (mu.size() != nu.size())
        throw DimensionError("maximal_coupling_sample: support sizes differ");
    const std::size_t n = mu.size();

    double overlap_mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) overlap_mass += std::min(mu[i], nu[i]);
    const double d = std::min(std::max(1.0 - overlap_mass, 0.0), 1.0);

    const auto draw_from = [&rng, n](const auto& weight_at, double total) {
        const double u = rng.next_double() * total;
        double cdf = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            cdf += weight_at(i);
            if (u < cdf) return i;
        }
        return n - 1;
    };

    if (rng.next_double() < 1.0 - d) {
        const std::size_t i = draw_from(
            [&](std::size_t k) { return std::min(mu[k], nu[k]); }, overlap_mass);
        return {i, i, true};
    }
    const std::size_t x =
        draw_from([&](std::size_t k) { return std::max(mu[k] - nu[k], 0.0); }, d);
    const std::size_t y =
        draw_from([&](std::size_t k) { return std::max(nu[k] - mu[k], 0.0); }, d);
    // Residuals have disjoint supports, so x != y always holds here.
    return {x, y, false};
}

}  // namespace amcmc
