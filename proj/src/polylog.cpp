#include "slowlight/polylog.hpp"

#include "slowlight/errors.hpp"

#include <boost/math/special_functions/zeta.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace slowlight {
namespace {

constexpr double kSeriesLimit = 0.75;
constexpr int kTerms = 32;
constexpr double kIntegerEps = 1e-12;

struct Expansion {
    bool integer_order = false;
    int m = 0;                           // order when integer
    double leading = 0.0;                // Gamma(1-n) or H_{m-1}/(m-1)!
    double log_coeff = 0.0;              // 1/(m-1)! for integer order
    std::array<double, kTerms> coeff{};  // zeta(n-k)/k!, 0 at the skipped pole
};

Expansion make_expansion(double n) {
    Expansion e;
    const double rounded = std::round(n);
    e.integer_order = std::abs(n - rounded) < kIntegerEps;
    double factorial = 1.0;
    if (e.integer_order) {
        e.m = static_cast<int>(rounded);
        double harmonic = 0.0;
        double fact_m1 = 1.0;
        for (int i = 1; i < e.m; ++i) {
            harmonic += 1.0 / i;
            fact_m1 *= i;
        }
        e.log_coeff = 1.0 / fact_m1;
        e.leading = harmonic / fact_m1;
    } else {
        e.leading = std::tgamma(1.0 - n);
    }
    for (int k = 0; k < kTerms; ++k) {
        if (k > 0) factorial *= k;
        if (e.integer_order && k == e.m - 1) {
            e.coeff[k] = 0.0;
            continue;
        }
        e.coeff[k] = boost::math::zeta(n - k) / factorial;
    }
    return e;
}

const Expansion& expansion_for(double n) {
    static const Expansion e32 = make_expansion(1.5);
    static const Expansion e2 = make_expansion(2.0);
    static const Expansion e3 = make_expansion(3.0);
    if (n == 1.5) return e32;
    if (n == 2.0) return e2;
    if (n == 3.0) return e3;
    thread_local std::map<double, Expansion> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_expansion(n)).first;
    return it->second;
}

double direct_series(double n, double x) {
    double sum = 0.0;
    double power = 1.0;
    for (int j = 1; j < 100000; ++j) {
        power *= x;
        const double term = power / std::pow(static_cast<double>(j), n);
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

double near_one(double n, double x) {
    const Expansion& e = expansion_for(n);
    const double mu = -std::log(x);
    double sum = 0.0;
    if (e.integer_order) {
        if (mu > 0.0) {
            const double lead = std::pow(-mu, e.m - 1);
            sum += lead * (e.leading - e.log_coeff * std::log(mu));
        }
    } else {
        sum += e.leading * std::pow(mu, n - 1.0);
    }
    double power = 1.0;  // (-mu)^k
    for (int k = 0; k < kTerms; ++k) {
        const double term = e.coeff[k] * power;
        sum += term;
        power *= -mu;
    }
    return sum;
}

}  // namespace

double polylog(double n, double x) {
    if (!(n >= 1.0) || !std::isfinite(n)) {
        throw ConfigError("polylog order must be >= 1, got " + std::to_string(n));
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw ConfigError("polylog argument outside [0, 1]: " + std::to_string(x));
    }
    if (x == 0.0) return 0.0;
    if (x == 1.0) {
        if (n == 1.0) return std::numeric_limits<double>::infinity();
        return boost::math::zeta(n);
    }
    if (n == 1.0) return -std::log1p(-x);
    if (x <= kSeriesLimit) return direct_series(n, x);
    return near_one(n, x);
}

}  // namespace slowlight
