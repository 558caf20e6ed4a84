#include <doctest.h>

#include <cmath>
#include <vector>

#include "amcmc/errors.hpp"
#include "amcmc/rng.hpp"
#include "amcmc/targets.hpp"

using namespace amcmc;

namespace {

// Oracle value of E|X| for the smoothed Weibull (m=0.5, beta=1), computed
// by an independent high-resolution sweep before the build (see the
// trapezoid cross-check below).
constexpr double kWeibullAbsMean = 3.738564686868413;

// Independent integrator: composite trapezoid over [0, 1e6] with an
// Euler-Maclaurin endpoint correction, exploiting the even symmetry.
double trapezoid_expectation_abs(const SmoothedWeibullTarget& t) {
    const auto pi = [&](double x) { return std::exp(t.log_density1(x)); };
    // Fine panel across the effective support, coarse panel for the far tail.
    const auto sweep = [&](auto f, double fp0) {
        double acc = 0.0;
        const double h1 = 1e-3, lo = 0.0, mid = 2000.0;
        const std::size_t n1 = static_cast<std::size_t>((mid - lo) / h1);
        acc += 0.5 * (f(lo) + f(mid));
        for (std::size_t i = 1; i < n1; ++i) acc += f(lo + h1 * i);
        double fine = acc * h1 + h1 * h1 / 12.0 * fp0;  // f' vanishes at 2000
        double coarse = 0.0;
        const double h2 = 1.0, hi = 1e6;
        const std::size_t n2 = static_cast<std::size_t>((hi - mid) / h2);
        coarse += 0.5 * (f(mid) + f(hi));
        for (std::size_t i = 1; i < n2; ++i) coarse += f(mid + h2 * i);
        return fine + coarse * h2;
    };
    // d/dx [x pi(x)] at 0 is pi(0) = 1; d/dx [pi(x)] at 0 is 0.
    const double num = sweep([&](double x) { return x * pi(x); }, 1.0);
    const double den = sweep(pi, 0.0);
    return num / den;
}

}  // namespace

TEST_CASE("smoothed weibull log density and gradient") {
    const SmoothedWeibullTarget t(0.5, 1.0);
    CHECK(t.log_density1(0.0) == 0.0);
    // -log pi(100) / 100^m with the log pi(0)=0 normalization.
    CHECK(-t.log_density1(100.0) / std::sqrt(100.0) ==
          doctest::Approx(1.13028600824).epsilon(1e-9));

    CHECK_THROWS_AS(SmoothedWeibullTarget(1.5, 1.0), ParameterError);
    CHECK_THROWS_AS(SmoothedWeibullTarget(0.5, -1.0), ParameterError);
}

TEST_CASE("analytic gradients match central finite differences") {
    const SmoothedWeibullTarget w(0.5, 1.0);
    GaussianTarget g2({0.0, 0.0}, [] {
        Matrix s(2, 2);
        s(0, 0) = 1.0; s(0, 1) = 0.5;
        s(1, 0) = 0.5; s(1, 1) = 1.0;
        return s;
    }());

    Rng rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        const double x = 40.0 * (rng.next_double() - 0.5);
        double grad = 0.0;
        w.gradient(std::span<const double>(&x, 1), std::span<double>(&grad, 1));
        const double fd = fd_gradient(w, std::span<const double>(&x, 1))[0];
        CHECK(grad == doctest::Approx(fd).epsilon(1e-5));

        std::vector<double> p{4.0 * (rng.next_double() - 0.5),
                              4.0 * (rng.next_double() - 0.5)};
        std::vector<double> ga(2);
        g2.gradient(p, ga);
        const auto fd2 = fd_gradient(g2, p);
        CHECK(ga[0] == doctest::Approx(fd2[0]).epsilon(1e-5));
        CHECK(ga[1] == doctest::Approx(fd2[1]).epsilon(1e-5));
    }
}

TEST_CASE("gaussian target log density values") {
    GaussianTarget g({0.0, 0.0}, [] {
        Matrix s(2, 2);
        s(0, 0) = 1.0; s(0, 1) = 0.5;
        s(1, 0) = 0.5; s(1, 1) = 1.0;
        return s;
    }());
    const std::vector<double> origin{0.0, 0.0};
    CHECK(g.log_density(origin) == doctest::Approx(0.0));
    const std::vector<double> ones{1.0, 1.0};
    // x^T Sigma^{-1} x = 4/3 at (1,1) for this covariance.
    CHECK(g.log_density(ones) == doctest::Approx(-2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("smoothed weibull is twice differentiable at the origin") {
    const SmoothedWeibullTarget t(0.5, 1.0);
    // Second difference is stable across scales: no |x|^{m-1} cusp.
    const double base =
        (t.log_density1(1e-3) - 2.0 * t.log_density1(0.0) + t.log_density1(-1e-3)) /
        1e-6;
    const double finer =
        (t.log_density1(1e-4) - 2.0 * t.log_density1(0.0) + t.log_density1(-1e-4)) /
        1e-8;
    CHECK(base == doctest::Approx(finer).epsilon(1e-4));
    // Tail ratio -log pi(x) / (beta |x|^m) approaches 1.
    CHECK(-t.log_density1(1e4) / std::pow(1e4, 0.5) == doctest::Approx(1.0).epsilon(2e-2));
    CHECK(-t.log_density1(1e8) / std::pow(1e8, 0.5) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("check_D2 on the reference target") {
    const SmoothedWeibullTarget t(0.5, 1.0);
    const std::vector<double> radii{10.0, 20.0, 50.0, 100.0};
    const D2Report rep = check_D2(t, radii);

    CHECK(rep.violations.empty());
    CHECK(rep.d0 > 0.0);
    CHECK(rep.d0 < rep.D0);
    CHECK(rep.d1 > 0.0);
    CHECK(rep.d1 < rep.D1);
    CHECK(rep.d2 > 0.0);
    // envelope at x=100 lies in the spec band
    CHECK(rep.d0 <= 1.2);
    CHECK(rep.D0 >= 0.9);
    // 1-D decreasing tail: contour inner product is -1 exactly.
    CHECK(rep.r_contour == doctest::Approx(1.0));

    CHECK_THROWS_AS(check_D2(t, std::vector<double>{5.0}), ParameterError);
}

TEST_CASE("quadrature expectation on a standard gaussian") {
    GaussianTarget g({0.0}, Matrix::identity(1));
    CHECK(quadrature_expectation(g, [](double x) { return x * x; }, 1e-8) ==
          doctest::Approx(1.0).epsilon(1e-8));
    CHECK(quadrature_expectation(g, [](double x) { return x; }, 1e-8) ==
          doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
    CHECK(quadrature_expectation(g, [](double) { return 1.0; }, 1e-8) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(g.normalization().has_value());
    CHECK(*g.normalization() == doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-10));
}

TEST_CASE("two integrators agree on E|X| for the weibull target") {
    SmoothedWeibullTarget t(0.5, 1.0);
    const double adaptive =
        quadrature_expectation(t, [](double x) { return std::fabs(x); }, 1e-8);
    const double trapezoid = trapezoid_expectation_abs(t);
    CHECK(adaptive == doctest::Approx(trapezoid).epsilon(1e-6));
    CHECK(adaptive == doctest::Approx(kWeibullAbsMean).epsilon(1e-9));
    CHECK(trapezoid == doctest::Approx(kWeibullAbsMean).epsilon(1e-6));
}

TEST_CASE("D3 tail-overlap ratio decays between the probe radii") {
    const SmoothedWeibullTarget t(0.5, 1.0);
    const double at20 = d3_overlap_ratio(t, 0.25, 20.0);
    const double at50 = d3_overlap_ratio(t, 0.25, 50.0);
    CHECK(at20 > 0.0);
    CHECK(at50 < at20);
}

TEST_CASE("discrete pmf validation") {
    CHECK_THROWS_AS(DiscretePmf(ProbVector({0.5, 0.25, 0.25})), ParameterError);
    const DiscretePmf pmf(ProbVector::uniform(4));
    CHECK(pmf.k() == 4);
    CHECK(pmf.at(1) == doctest::Approx(0.25));
}
