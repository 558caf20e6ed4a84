#pragma once

#include <functional>

namespace amcmc {

struct QuadratureResult {
    double value;
    double abs_error;  // integrator's error estimate
};

// Adaptive Gauss-Kronrod integration (GSL QAG / QAGS / QAGI underneath).
// Throws NumericalError when the error estimate stays above the request
// after maximal refinement.
QuadratureResult integrate_interval(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    double rel_tol = 0.0);

QuadratureResult integrate_real_line(const std::function<double(double)>& f,
                                     double abs_tol, double rel_tol = 0.0);

}  // namespace amcmc
