#include "amcmc/stats.hpp"

#include <cmath>
#include <limits>

#include "amcmc/errors.hpp"

namespace amcmc {
namespace {

// Lower incomplete gamma by series, P(a,x); valid for x < a+1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper incomplete gamma by Lentz's continued fraction; valid for x >= a+1.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw ParameterError("gamma_q: invalid arguments");
    if (x == 0.0) return 1.0;
    return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double chi_square_sf(double x, double k) {
    if (!(k > 0.0)) throw ParameterError("chi_square_sf: dof must be positive");
    if (x <= 0.0) return 1.0;
    return gamma_q(k / 2.0, x / 2.0);
}

ChiSquareGof chi_square_gof(std::span<const std::size_t> counts,
                            std::span<const double> expected_probs) {
    if (counts.size() != expected_probs.size())
        throw DimensionError("chi_square_gof: cell counts mismatch");
    std::size_t total = 0;
    for (std::size_t c : counts) total += c;
    if (total == 0) throw ParameterError("chi_square_gof: no observations");

    double stat = 0.0;
    double dof = -1.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double expected = expected_probs[i] * static_cast<double>(total);
        if (expected == 0.0) {
            if (counts[i] != 0)
                return {std::numeric_limits<double>::infinity(),
                        static_cast<double>(counts.size()) - 1.0, 0.0};
            continue;  // structural zero, not a fitted cell
        }
        const double diff = static_cast<double>(counts[i]) - expected;
        stat += diff * diff / expected;
        dof += 1.0;
    }
    if (dof < 1.0) return {stat, 0.0, 1.0};
    return {stat, dof, chi_square_sf(stat, dof)};
}

double ks_threshold(double alpha, std::size_t n) {
    if (!(alpha > 0.0 && alpha < 1.0) || n == 0)
        throw ParameterError("ks_threshold: invalid arguments");
    return std::sqrt(-0.5 * std::log(alpha / 2.0) / static_cast<double>(n));
}

}  // namespace amcmc
