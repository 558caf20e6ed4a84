#include <doctest.h>

#include <cmath>
#include <vector>

#include "amcmc/errors.hpp"
#include "amcmc/measures.hpp"
#include "amcmc/rng.hpp"
#include "amcmc/stats.hpp"

using namespace amcmc;

namespace {

ProbVector random_prob(Rng& rng, std::size_t n) {
    std::vector<double> w(n);
    for (double& x : w) x = rng.next_double() + 1e-3;
    return ProbVector::from_unnormalized(std::move(w));
}

}  // namespace

TEST_CASE("prob vector validation") {
    CHECK_THROWS_AS(ProbVector({0.5, -0.1, 0.6}), ParameterError);
    CHECK_THROWS_AS(ProbVector({0.5, 0.4}), ParameterError);   // sums to 0.9
    CHECK_THROWS_AS(ProbVector(std::vector<double>{}), DimensionError);
    // Within 1e-12 of 1: accepted and renormalized.
    const ProbVector p({0.5, 0.5 + 5e-13});
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) sum += p[i];
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("tv distance on the spec pairs") {
    const ProbVector half({0.5, 0.5});
    const ProbVector d0({1.0, 0.0});
    const ProbVector d1({0.0, 1.0});

    auto same = tv_distance(half, half);
    CHECK(same.l1 == 0.0);
    CHECK(same.sup == 0.0);

    auto disjoint = tv_distance(d0, d1);
    CHECK(disjoint.l1 == doctest::Approx(2.0));
    CHECK(disjoint.sup == doctest::Approx(1.0));

    auto mixed = tv_distance(half, d0);
    CHECK(mixed.l1 == doctest::Approx(1.0));
    CHECK(mixed.sup == doctest::Approx(0.5));

    CHECK_THROWS_AS(tv_distance(half, ProbVector({1.0})), DimensionError);
}

TEST_CASE("tv distance is a metric and l1 = 2 sup exactly") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto mu = random_prob(rng, 6);
        const auto nu = random_prob(rng, 6);
        const auto rho = random_prob(rng, 6);
        const auto d_mn = tv_distance(mu, nu);
        const auto d_nm = tv_distance(nu, mu);
        CHECK(d_mn.l1 == d_nm.l1);
        CHECK(d_mn.l1 == 2.0 * d_mn.sup);  // exact: division by two is lossless
        CHECK(d_mn.l1 <= tv_distance(mu, rho).l1 + tv_distance(rho, nu).l1 + 1e-15);
        CHECK(d_mn.l1 >= 0.0);
        CHECK(d_mn.sup <= 1.0);
    }
}

TEST_CASE("v-norm distance") {
    const ProbVector d0({1.0, 0.0});
    const ProbVector d1({0.0, 1.0});
    CHECK(v_norm_distance(d0, d1, WeightFunction({2.0, 3.0})) == doctest::Approx(5.0));
    CHECK(v_norm_distance(d0, d0, WeightFunction({2.0, 3.0})) == 0.0);

    Rng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const auto mu = random_prob(rng, 5);
        const auto nu = random_prob(rng, 5);
        // v == 1 reduces the V-norm to the l1 TV norm.
        const WeightFunction unit(std::vector<double>(5, 1.0));
        CHECK(v_norm_distance(mu, nu, unit) ==
              doctest::Approx(tv_distance(mu, nu).l1).epsilon(1e-14));
        std::vector<double> v(5);
        for (double& x : v) x = 1.0 + 3.0 * rng.next_double();
        const WeightFunction w(v);
        CHECK(v_norm_distance(mu, nu, w) >= tv_distance(mu, nu).l1 - 1e-15);
    }
    CHECK_THROWS_AS(WeightFunction({0.5}), ParameterError);
}

TEST_CASE("maximal coupling: identical and disjoint marginals") {
    Rng rng(31);
    const ProbVector half({0.5, 0.5});
    for (int i = 0; i < 1000; ++i) {
        const auto draw = maximal_coupling_sample(half, half, rng);
        CHECK(draw.met);
        CHECK(draw.x == draw.y);
    }
    const ProbVector d0({1.0, 0.0});
    const ProbVector d1({0.0, 1.0});
    for (int i = 0; i < 1000; ++i) {
        const auto draw = maximal_coupling_sample(d0, d1, rng);
        CHECK_FALSE(draw.met);
        CHECK(draw.x == 0);
        CHECK(draw.y == 1);
    }
}

TEST_CASE("maximal coupling: meeting frequency matches the overlap") {
    // Analytic oracle: overlap of (0.5,0.5) and (1,0) is 0.5, so d = 0.5.
    Rng rng(101);
    const ProbVector mu({0.5, 0.5});
    const ProbVector nu({1.0, 0.0});
    const int n = 1000000;
    int met = 0;
    for (int i = 0; i < n; ++i)
        met += maximal_coupling_sample(mu, nu, rng).met;
    const double freq = static_cast<double>(met) / n;
    CHECK(std::fabs(freq - 0.5) <= 3.0 * std::sqrt(0.25 / n));
}

TEST_CASE("maximal coupling marginals pass chi-square at 0.001") {
    Rng rng(202);
    const ProbVector mu({0.2, 0.5, 0.25, 0.05});
    const ProbVector nu({0.4, 0.1, 0.3, 0.2});
    const int n = 100000;
    std::vector<std::size_t> cx(4, 0), cy(4, 0);
    for (int i = 0; i < n; ++i) {
        const auto draw = maximal_coupling_sample(mu, nu, rng);
        ++cx[draw.x];
        ++cy[draw.y];
        if (draw.met) CHECK(draw.x == draw.y);
    }
    CHECK(chi_square_gof(cx, mu.weights()).p_value >= 0.001);
    CHECK(chi_square_gof(cy, nu.weights()).p_value >= 0.001);
}
