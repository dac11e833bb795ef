#include "slowlight/quadrature.hpp"

#include "slowlight/errors.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

namespace slowlight {
namespace {

constexpr std::size_t kWorkspaceLimit = 2000;

struct WorkspaceDeleter {
    void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

double trampoline(double x, void* params) {
    return (*static_cast<const std::function<double(double)>*>(params))(x);
}

void silence_gsl() {
    static const bool once = [] {
        gsl_set_error_handler_off();
        return true;
    }();
    (void)once;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> breakpoints, QuadratureOptions opts) {
    if (a == b) return 0.0;
    silence_gsl();
    const double sign = b > a ? 1.0 : -1.0;
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);

    std::vector<double> nodes{lo};
    for (double p : breakpoints) {
        if (p > lo && p < hi) nodes.push_back(p);
    }
    nodes.push_back(hi);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> ws(
        gsl_integration_workspace_alloc(kWorkspaceLimit));
    gsl_function gf;
    gf.function = &trampoline;
    gf.params = const_cast<std::function<double(double)>*>(&f);

    double result = 0.0;
    double abserr = 0.0;
    const int status = gsl_integration_qagp(&gf, nodes.data(), nodes.size(), opts.abs_tol,
                                            opts.rel_tol, kWorkspaceLimit, ws.get(), &result,
                                            &abserr);
    if (!std::isfinite(result)) throw NumericalError("quadrature produced a non-finite value");
    // Roundoff-limited results that already meet the tolerance are accepted.
    const double allowed = std::max(opts.abs_tol, opts.rel_tol * std::abs(result));
    if (status != GSL_SUCCESS && !(status == GSL_EROUND && abserr <= 10.0 * allowed)) {
        throw NumericalError("quadrature did not converge (" + std::string(gsl_strerror(status)) +
                             "), error estimate " + std::to_string(abserr));
    }
    return sign * result;
}

}  // namespace slowlight
