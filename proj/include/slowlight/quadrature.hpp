#pragma once

#include <functional>
#include <span>

namespace slowlight {

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
};

/// Adaptive Gauss-Kronrod integral (QUADPACK QAGP) of f over [a, b], split at the given
/// interior breakpoints (kinks of the integrand). Throws NumericalError when
/// the error estimate exceeds the requested tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> breakpoints = {}, QuadratureOptions opts = {});

}  // namespace slowlight
