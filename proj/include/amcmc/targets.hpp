#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "amcmc/linalg.hpp"
#include "amcmc/measures.hpp"

namespace amcmc {

// Unnormalized log-density on R^p. log_density must be finite everywhere.
class TargetDensity {
public:
    virtual ~TargetDensity() = default;

    virtual int dimension() const = 0;
    virtual double log_density(std::span<const double> x) const = 0;

    virtual bool has_gradient() const { return false; }
    virtual void gradient(std::span<const double> x, std::span<double> g) const;

    // Set by quadrature_expectation once the constant has been computed.
    std::optional<double> normalization() const { return normalization_; }
    void set_normalization(double z) { normalization_ = z; }

private:
    std::optional<double> normalization_;
};

// Central finite differences of log_density, step 1e-6 * max(1, |x_i|).
std::vector<double> fd_gradient(const TargetDensity& target,
                                std::span<const double> x);

class GaussianTarget : public TargetDensity {
public:
    GaussianTarget(std::vector<double> mean, Matrix covariance);

    int dimension() const override { return static_cast<int>(mean_.size()); }
    double log_density(std::span<const double> x) const override;
    bool has_gradient() const override { return true; }
    void gradient(std::span<const double> x, std::span<double> g) const override;

    const std::vector<double>& mean() const { return mean_; }
    const Matrix& covariance() const { return cov_; }

private:
    std::vector<double> mean_;
    Matrix cov_;
    Matrix chol_;  // lower factor of cov
};

// Smooth 1-D surrogate of the Weibull-type family: tails match
// |x|^{m-1} exp(-beta |x|^m) but the (1+x^2) forms keep the density positive
// and twice continuously differentiable at 0. Normalized so log pi(0) = 0:
//   log pi(x) = -beta[(1+x^2)^{m/2} - 1] + ((m-1)/2) log(1+x^2).
class SmoothedWeibullTarget : public TargetDensity {
public:
    SmoothedWeibullTarget(double m, double beta);

    int dimension() const override { return 1; }
    double log_density(std::span<const double> x) const override;
    bool has_gradient() const override { return true; }
    void gradient(std::span<const double> x, std::span<double> g) const override;

    double log_density1(double x) const;
    double gradient1(double x) const;

    double m() const { return m_; }
    double beta() const { return beta_; }

private:
    double m_;
    double beta_;
};

// Target of the finite toy chain: a pmf on {1, ..., K}, K >= 4.
struct DiscretePmf {
    explicit DiscretePmf(ProbVector probabilities);
    int k() const { return static_cast<int>(pmf.size()); }
    // pi(x) for a 1-based lattice point.
    double at(int x) const { return pmf[static_cast<std::size_t>(x - 1)]; }
    ProbVector pmf;
};

struct D2Violation {
    double x;
    std::string reason;
};

// Empirical envelope constants of the sub-exponential tail conditions,
// measured on the +/- radius grid. These are min/max ratios over the grid,
// not certified bounds.
struct D2Report {
    double d0, D0;       // -log pi(x) / |x|^m
    double d1, D1;       // |grad log pi(x)| / |x|^{m-1}
    double d2, D2;       // |hess log pi(x)| / |x|^{m-2}
    double r_contour;    // -max <grad pi/|grad pi|, x/|x|> over the grid
    std::vector<D2Violation> violations;
};

D2Report check_D2(const SmoothedWeibullTarget& target,
                  std::span<const double> radii, double regularity_radius = 10.0);

// pi(f) = int f dpi / int dpi by adaptive quadrature over R (1-D targets).
// Also stores the computed normalization constant on the target.
double quadrature_expectation(TargetDensity& target,
                              const std::function<double(double)>& f,
                              double abs_tol);

// Tail-overlap integral int_{|z| >= eta |x|^upsilon} (1 v pi(x)/pi(x+z))^s
// q(z) dz for a centered Gaussian q with variance sigma2, divided by
// |x|^{2(m-1)}. The sub-exponential condition asks this ratio to vanish as
// |x| grows; the property test asserts it decreases between two radii.
double d3_overlap_ratio(const SmoothedWeibullTarget& target, double sigma2,
                        double x, double s_star = 0.05, double eta = 0.5,
                        double quad_tol = 1e-10);

}  // namespace amcmc
