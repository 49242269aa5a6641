#include "giantatom/pv.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>

#include "giantatom/types.hpp"

namespace giantatom {
namespace {

// Composite midpoint rule on [lo, hi], refined by panel doubling until
// two successive refinements agree to tol (relative, floored at 1), or
// the panel budget runs out, in which case the best value is returned
// -- the outer Richardson loop owns the final convergence check.
double midpointAdaptive(const std::function<double(double)>& f, double lo, double hi,
                        double absTol) {
    if (hi <= lo) return 0.0;
    std::size_t n = 64;
    const std::size_t maxPanels = std::size_t(1) << 21;
    auto sum = [&](std::size_t panels) {
        const double h = (hi - lo) / double(panels);
        double acc = 0.0;
        for (std::size_t i = 0; i < panels; ++i) acc += f(lo + (double(i) + 0.5) * h);
        return acc * h;
    };
    double prev = sum(n);
    while (n < maxPanels) {
        n *= 2;
        const double cur = sum(n);
        if (std::abs(cur - prev) <= absTol * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    return prev;
}

}  // namespace

double principalValue(const std::function<double(double)>& f, double a, double b,
                      double pole, double relTol) {
    if (!(a < b)) throw ValidationError("principalValue: need a < b");
    if (!(pole > a && pole < b))
        throw ValidationError("principalValue: pole must lie strictly inside (a, b)");
    if (!(relTol > 0.0)) throw ValidationError("principalValue: tolerance must be positive");

    const auto g = [&](double x) { return f(x) / (x - pole); };

    // Largest symmetric window around the pole that fits in [a, b]; the
    // remainder (one side only) is pole-free and integrated once.
    const double reach = std::min(pole - a, b - pole);
    const double segTol = relTol * 1e-2;
    double outer = 0.0;
    if (pole - a > reach) outer = midpointAdaptive(g, a, pole - reach, segTol);
    if (b - pole > reach) outer = midpointAdaptive(g, pole + reach, b, segTol);

    // Symmetric part: pairs u and -u combine into a bounded integrand,
    //   integral_{eps<=|u|<=reach} f(pole+u)/u du
    //     = integral_eps^reach [f(pole+u) - f(pole-u)]/u du.
    const auto pair = [&](double u) { return (f(pole + u) - f(pole - u)) / u; };

    auto inner = [&](double eps) { return midpointAdaptive(pair, eps, reach, segTol); };

    double eps = reach / 8.0;
    double coarse = inner(eps);
    double fine = inner(eps / 2.0);
    double extrap = 2.0 * fine - coarse;
    for (int iter = 0; iter < 40; ++iter) {
        eps /= 2.0;
        coarse = fine;
        fine = inner(eps / 2.0);
        const double next = 2.0 * fine - coarse;
        const double scale = std::max(1.0, std::abs(next) + std::abs(outer));
        if (std::abs(next - extrap) <= relTol * scale) return outer + next;
        extrap = next;
    }
    std::ostringstream msg;
    msg << "principalValue: Richardson extrapolation did not converge (last eps=" << eps
        << ", last value=" << outer + extrap << ", requested relTol=" << relTol << ")";
    throw ConvergenceError(msg.str());
}

}  // namespace giantatom
