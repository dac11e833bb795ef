#pragma once

namespace slowlight {

/// Bose function g_n(x) = sum_{j>=1} x^j / j^n for n >= 1 and 0 <= x <= 1.
///
/// Small arguments use the defining series. For x > 0.75 the series is
/// replaced by the expansion in mu = -ln x around x = 1,
///   g_n(e^-mu) = Gamma(1-n) mu^(n-1) + sum_k zeta(n-k) (-mu)^k / k!,
/// with the logarithmic term for integer n. Both branches agree with the
/// plain series to better than 1e-13 absolute.
///
/// g_1(1) is +inf. Arguments outside [0, 1] or n < 1 throw ConfigError.
double polylog(double n, double x);

}  // namespace slowlight
