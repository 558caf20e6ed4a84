#include "amcmc/finite_exact.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "amcmc/errors.hpp"
#include "amcmc/simd/kernels.hpp"

namespace amcmc {

ToyJointChain::ToyJointChain(DiscretePmf pmf, int m_max)
    : pmf_(std::move(pmf)), m_max_(m_max) {
    if (m_max_ < 1) throw ParameterError("ToyJointChain: M >= 1 required");
    kernels_.reserve(static_cast<std::size_t>(m_max_));
    for (int theta = 1; theta <= m_max_; ++theta)
        kernels_.push_back(discrete_rwm_matrix(pmf_, theta));
}

const Matrix& ToyJointChain::theta_kernel(int theta) const {
    if (theta < 1 || theta > m_max_)
        throw ParameterError("theta_kernel: theta outside {1..M}");
    return kernels_[static_cast<std::size_t>(theta - 1)];
}

FiniteJointKernel ToyJointChain::joint_kernel(double p_next,
                                              std::size_t step_index) const {
    if (!(p_next >= 0.0 && p_next <= 1.0))
        throw ParameterError("joint_kernel: p_next outside [0,1]");
    const int K = k(), M = m();
    FiniteJointKernel out;
    out.k = K;
    out.m = M;
    out.p_next = p_next;
    out.step_index = step_index;
    out.matrix = Matrix(static_cast<std::size_t>(K * M), static_cast<std::size_t>(K * M));
    for (int x = 1; x <= K; ++x) {
        for (int theta = 1; theta <= M; ++theta) {
            const Matrix& p = theta_kernel(theta);
            const std::size_t row = static_cast<std::size_t>(pair_index(x, theta));
            const int down = std::max(1, theta - 1);
            const int up = std::min(M, theta + 1);
            for (int y = 1; y <= K; ++y) {
                const double mass = p(static_cast<std::size_t>(x - 1),
                                      static_cast<std::size_t>(y - 1));
                if (mass == 0.0) continue;
                const int adapted = (y == x) ? down : up;
                out.matrix(row, static_cast<std::size_t>(pair_index(y, adapted))) +=
                    p_next * mass;
                out.matrix(row, static_cast<std::size_t>(pair_index(y, theta))) +=
                    (1.0 - p_next) * mass;
            }
        }
    }
    return out;
}

void ToyJointChain::apply_to_law(double p_next, std::span<const double> law,
                                 std::span<double> out) const {
    const int K = k(), M = m();
    const std::size_t n = static_cast<std::size_t>(K * M);
    if (law.size() != n || out.size() != n)
        throw DimensionError("apply_to_law: pair-state dimension mismatch");
    std::fill(out.begin(), out.end(), 0.0);

    std::vector<double> v(static_cast<std::size_t>(K));
    std::vector<double> w(static_cast<std::size_t>(K));
    for (int theta = 1; theta <= M; ++theta) {
        const Matrix& p = theta_kernel(theta);
        for (int x = 1; x <= K; ++x)
            v[static_cast<std::size_t>(x - 1)] =
                law[static_cast<std::size_t>(pair_index(x, theta))];
        vecmat(v, p, w);
        const int down = std::max(1, theta - 1);
        const int up = std::min(M, theta + 1);
        for (int y = 1; y <= K; ++y) {
            const double hold = v[static_cast<std::size_t>(y - 1)] *
                                p(static_cast<std::size_t>(y - 1),
                                  static_cast<std::size_t>(y - 1));
            const double move = w[static_cast<std::size_t>(y - 1)] - hold;
            out[static_cast<std::size_t>(pair_index(y, theta))] +=
                (1.0 - p_next) * w[static_cast<std::size_t>(y - 1)];
            out[static_cast<std::size_t>(pair_index(y, down))] += p_next * hold;
            out[static_cast<std::size_t>(pair_index(y, up))] += p_next * move;
        }
    }
}

void ToyJointChain::apply_to_function(double p_next, std::span<const double> h,
                                      std::span<double> out) const {
    const int K = k(), M = m();
    const std::size_t n = static_cast<std::size_t>(K * M);
    if (h.size() != n || out.size() != n)
        throw DimensionError("apply_to_function: pair-state dimension mismatch");

    std::vector<double> g(static_cast<std::size_t>(K));
    std::vector<double> pg(static_cast<std::size_t>(K));
    for (int theta = 1; theta <= M; ++theta) {
        const Matrix& p = theta_kernel(theta);
        const int down = std::max(1, theta - 1);
        const int up = std::min(M, theta + 1);
        // g(y) = p h(y, theta+) + (1-p) h(y, theta): value seen on a move.
        for (int y = 1; y <= K; ++y)
            g[static_cast<std::size_t>(y - 1)] =
                p_next * h[static_cast<std::size_t>(pair_index(y, up))] +
                (1.0 - p_next) * h[static_cast<std::size_t>(pair_index(y, theta))];
        matvec(p, g, pg);
        // Holding moves see theta- instead of theta+.
        for (int x = 1; x <= K; ++x) {
            const double diag = p(static_cast<std::size_t>(x - 1),
                                  static_cast<std::size_t>(x - 1));
            out[static_cast<std::size_t>(pair_index(x, theta))] =
                pg[static_cast<std::size_t>(x - 1)] +
                diag * p_next *
                    (h[static_cast<std::size_t>(pair_index(x, down))] -
                     h[static_cast<std::size_t>(pair_index(x, up))]);
        }
    }
}

PropagateResult ToyJointChain::propagate(const JointLaw& initial,
                                         const PSchedule& p_schedule,
                                         std::size_t horizon,
                                         bool keep_joint_laws) const {
    if (horizon < 1) throw ParameterError("propagate: horizon >= 1 required");
    const std::size_t n = static_cast<std::size_t>(pair_count());
    if (initial.law.size() != n)
        throw DimensionError("propagate: initial law dimension mismatch");
    if (!p_schedule) throw ParameterError("propagate: missing p schedule");

    PropagateResult result;
    result.x_marginals.reserve(horizon + 1);
    result.tv_to_pi.reserve(horizon + 1);

    std::vector<double> law(initial.law.weights());
    std::vector<double> next(n);
    const int K = k(), M = m();

    const auto record = [&](const std::vector<double>& current) {
        std::vector<double> marg(static_cast<std::size_t>(K), 0.0);
        for (int x = 1; x <= K; ++x)
            for (int theta = 1; theta <= M; ++theta)
                marg[static_cast<std::size_t>(x - 1)] +=
                    current[static_cast<std::size_t>(pair_index(x, theta))];
        result.tv_to_pi.push_back(simd::active().abs_diff_sum(
            marg.data(), pmf_.pmf.weights().data(), marg.size()));
        result.x_marginals.push_back(std::move(marg));
        if (keep_joint_laws) result.joint_laws.push_back(current);
    };

    record(law);
    for (std::size_t step = 0; step < horizon; ++step) {
        const double p = p_schedule(step + 1);
        if (!(p >= 0.0 && p <= 1.0))
            throw ParameterError("propagate: p schedule left [0,1]");
        apply_to_law(p, law, next);
        law.swap(next);
        record(law);
    }
    return result;
}

double ToyJointChain::exact_d(int theta1, int theta2) const {
    const Matrix& p1 = theta_kernel(theta1);
    const Matrix& p2 = theta_kernel(theta2);
    double worst = 0.0;
    for (std::size_t x = 0; x < p1.rows(); ++x)
        worst = std::max(worst, simd::active().abs_diff_sum(
                                    p1.data() + x * p1.cols(),
                                    p2.data() + x * p2.cols(), p1.cols()));
    return worst;
}

double ToyJointChain::pi_f(std::span<const double> f) const {
    return simd::active().dot(f.data(), pmf_.pmf.weights().data(), f.size());
}

void ToyJointChain::validate_spec(const ResolventSpec& spec) const {
    if (!(spec.discount > 0.0 && spec.discount < 1.0))
        throw ParameterError("resolvent: discount a must lie in (0,1)");
    if (!(spec.truncation_tol > 0.0))
        throw ParameterError("resolvent: truncation tolerance must be positive");
    if (static_cast<int>(spec.f.size()) != k())
        throw DimensionError("resolvent: f must have K values");
}

std::vector<double> ToyJointChain::resolvent(const ResolventSpec& spec,
                                             const PSchedule& p_schedule) const {
    validate_spec(spec);
    if (!p_schedule) throw ParameterError("resolvent: missing p schedule");
    const double a = spec.discount;
    const std::size_t n = static_cast<std::size_t>(pair_count());

    // f_bar lifted to pair states.
    const double mean = pi_f(spec.f);
    std::vector<double> f_bar(n);
    double f_max = 0.0;
    for (int x = 1; x <= k(); ++x) {
        const double v = spec.f[static_cast<std::size_t>(x - 1)] - mean;
        f_max = std::max(f_max, std::fabs(v));
        for (int theta = 1; theta <= m(); ++theta)
            f_bar[static_cast<std::size_t>(pair_index(x, theta))] = v;
    }

    // Geometric tail: |sum_{j>J}| <= (1-a)^{J+1} max|f_bar| / a.
    std::size_t depth = 0;
    if (f_max > 0.0) {
        const double need = std::log(spec.truncation_tol * a / f_max) / std::log1p(-a);
        depth = need <= 1.0 ? 0 : static_cast<std::size_t>(std::ceil(need)) - 1;
    }

    // Backward accumulation: R_d = (1-a)(f_bar + P_bar(i) R_{d-1}) picks up
    // kernel indices i = l+depth-1 down to l; kernel i uses p_{i+1}.
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = (1.0 - a) * f_bar[i];
    std::vector<double> tmp(n);
    for (std::size_t d = 0; d < depth; ++d) {
        const std::size_t kernel_index = spec.start_offset + depth - 1 - d;
        const double p = p_schedule(kernel_index + 1);
        if (!(p >= 0.0 && p <= 1.0))
            throw ParameterError("resolvent: p schedule left [0,1]");
        apply_to_function(p, r, tmp);
        for (std::size_t i = 0; i < n; ++i) r[i] = (1.0 - a) * (f_bar[i] + tmp[i]);
    }
    return r;
}

double ToyJointChain::resolvent_at(const ResolventSpec& spec,
                                   const PSchedule& p_schedule, int x,
                                   int theta) const {
    if (x < 1 || x > k() || theta < 1 || theta > m())
        throw ParameterError("resolvent_at: start state out of range");
    return resolvent(spec, p_schedule)[static_cast<std::size_t>(pair_index(x, theta))];
}

std::vector<double> ToyJointChain::poisson_residual(
    const ResolventSpec& spec, const PSchedule& p_schedule) const {
    validate_spec(spec);
    const double a = spec.discount;
    const std::size_t n = static_cast<std::size_t>(pair_count());

    const std::vector<double> g_l = resolvent(spec, p_schedule);
    ResolventSpec shifted = spec;
    shifted.start_offset = spec.start_offset + 1;
    const std::vector<double> g_l1 = resolvent(shifted, p_schedule);

    std::vector<double> expected(n);
    apply_to_function(p_schedule(spec.start_offset + 1), g_l1, expected);

    const double mean = pi_f(spec.f);
    std::vector<double> res(n);
    for (int x = 1; x <= k(); ++x) {
        const double f_bar = spec.f[static_cast<std::size_t>(x - 1)] - mean;
        for (int theta = 1; theta <= m(); ++theta) {
            const std::size_t i = static_cast<std::size_t>(pair_index(x, theta));
            res[i] = std::fabs(f_bar - g_l[i] / (1.0 - a) + expected[i]);
        }
    }
    return res;
}

double ToyJointChain::poisson_residual_at(const ResolventSpec& spec,
                                          const PSchedule& p_schedule, int x,
                                          int theta) const {
    if (x < 1 || x > k() || theta < 1 || theta > m())
        throw ParameterError("poisson_residual_at: start state out of range");
    return poisson_residual(spec, p_schedule)[static_cast<std::size_t>(
        pair_index(x, theta))];
}

PowerProfile ToyJointChain::power_profile(int theta, const WeightFunction& v,
                                          double beta, double kappa, double alpha,
                                          int n_max) const {
    if (static_cast<int>(v.values.size()) != k())
        throw DimensionError("power_profile: V must have K values");
    if (!(beta >= 0.0 && beta <= 1.0))
        throw ParameterError("power_profile: beta outside [0,1]");
    if (!(kappa >= 1.0)) throw ParameterError("power_profile: kappa >= 1 required");
    if (n_max < 0) throw ParameterError("power_profile: n_max >= 0 required");

    const Matrix& p = theta_kernel(theta);
    const std::size_t K = static_cast<std::size_t>(k());
    std::vector<double> v_beta(K), v_rate(K);
    for (std::size_t i = 0; i < K; ++i) {
        v_beta[i] = std::pow(v.values[i], beta);
        v_rate[i] = std::pow(v.values[i], beta + alpha * kappa);
    }
    const std::vector<double>& pi = pmf_.pmf.weights();

    PowerProfile prof;
    prof.sup_vnorm.reserve(static_cast<std::size_t>(n_max) + 1);
    prof.rate_ratio.reserve(static_cast<std::size_t>(n_max) + 1);

    Matrix pn = Matrix::identity(K);
    for (int n = 0; n <= n_max; ++n) {
        double sup_dist = 0.0, sup_ratio = 0.0;
        for (std::size_t x = 0; x < K; ++x) {
            const double dist = simd::active().weighted_abs_diff_sum(
                v_beta.data(), pn.data() + x * K, pi.data(), K);
            sup_dist = std::max(sup_dist, dist);
            sup_ratio = std::max(
                sup_ratio, std::pow(n + 1.0, kappa - 1.0) * dist / v_rate[x]);
        }
        prof.sup_vnorm.push_back(sup_dist);
        prof.rate_ratio.push_back(sup_ratio);
        if (n < n_max) pn = matmul(pn, p);
    }
    prof.sup_rate_ratio =
        *std::max_element(prof.rate_ratio.begin(), prof.rate_ratio.end());
    return prof;
}

// ---------------------------------------------------------------------------

namespace {

void validate_winkler_schedule(const PSchedule& schedule, std::size_t horizon) {
    if (!schedule) throw ParameterError("winkler: missing theta schedule");
    double prev = 1.0;
    for (std::size_t i = 1; i <= horizon; ++i) {
        const double t = schedule(i);
        if (!(t > 0.0 && t < 1.0))
            throw ParameterError("winkler: theta_" + std::to_string(i) +
                                 " leaves (0,1)");
        if (t > prev)
            throw ParameterError("winkler: schedule is not non-increasing");
        prev = t;
    }
}

}  // namespace

WinklerResult winkler_counterexample(const PSchedule& theta_schedule,
                                     std::size_t horizon, double f0, double f1,
                                     double p0_initial) {
    if (horizon < 1) throw ParameterError("winkler: horizon >= 1 required");
    if (!(p0_initial >= 0.0 && p0_initial <= 1.0))
        throw ParameterError("winkler: initial law outside [0,1]");
    validate_winkler_schedule(theta_schedule, horizon);

    WinklerResult out;
    out.tv_to_pi.reserve(horizon + 1);
    out.second_moment.reserve(horizon);

    // Marginal: P(X_n = 0) relaxes to 1/2 with factor (1 - 2 theta_n).
    double p0 = p0_initial;
    out.tv_to_pi.push_back(2.0 * std::fabs(p0 - 0.5));

    // Pair correlations: E[f_bar(X_j) f_bar(X_k)] = sigma^2 prod (1-2 theta_i),
    // independent of the initial law since f_bar(X)^2 = sigma^2 a.s.
    const double sigma = 0.5 * (f0 - f1);
    const double sigma2 = sigma * sigma;
    double u = 0.0;         // sum_{j<=n} prod_{i=j+1..n} (1-2 theta_i)
    double pair_sum = 0.0;  // sum over ordered pairs j < k <= n
    for (std::size_t n = 1; n <= horizon; ++n) {
        const double t = theta_schedule(n);
        p0 = p0 * (1.0 - t) + (1.0 - p0) * t;
        out.tv_to_pi.push_back(2.0 * std::fabs(p0 - 0.5));

        u = 1.0 + (1.0 - 2.0 * t) * u;
        pair_sum += u - 1.0;
        const double total = static_cast<double>(n) + 2.0 * pair_sum;
        out.second_moment.push_back(sigma2 * total /
                                    (static_cast<double>(n) * static_cast<double>(n)));
    }
    return out;
}

double winkler_second_moment_enumeration(const PSchedule& theta_schedule,
                                         std::size_t n, double f0, double f1,
                                         double p0_initial) {
    if (n < 1 || n > 24)
        throw ParameterError("winkler enumeration: n must lie in 1..24");
    validate_winkler_schedule(theta_schedule, n);

    const double pi_f = 0.5 * (f0 + f1);
    double acc = 0.0;
    for (int x0 = 0; x0 <= 1; ++x0) {
        const double w0 = x0 == 0 ? p0_initial : 1.0 - p0_initial;
        if (w0 == 0.0) continue;
        const std::uint64_t paths = std::uint64_t{1} << n;
        for (std::uint64_t bits = 0; bits < paths; ++bits) {
            double prob = w0;
            double sum = 0.0;
            int state = x0;
            for (std::size_t i = 1; i <= n; ++i) {
                const double t = theta_schedule(i);
                const int flip = static_cast<int>((bits >> (i - 1)) & 1u);
                prob *= flip ? t : 1.0 - t;
                state ^= flip;
                sum += state == 0 ? f0 : f1;
            }
            const double err = sum / static_cast<double>(n) - pi_f;
            acc += prob * err * err;
        }
    }
    return acc;
}

}  // namespace amcmc
