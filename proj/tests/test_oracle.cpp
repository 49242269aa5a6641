#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "giantatom/oracle.hpp"
#include "giantatom/spectral.hpp"

using namespace giantatom;

namespace {

constexpr double kOmegaA = 2.0 * kPi;  // carrier used throughout

double closedRate(const Layout& lay, double gammaScale) {
    return gammaScale * std::norm(couplingFactor(lay, 0, kOmegaA));
}

}  // namespace

TEST_CASE("mode basis: half-offset symmetric window around the carrier") {
    const double gamma = 1.0;
    const ModeBasis basis = ModeBasis::centered(kOmegaA * 100.0, gamma);
    CHECK(basis.modeCount() == 4096);
    // Spacing resolves the linewidth and the revival clears the decay.
    CHECK(basis.spacing <= gamma / 20.0);
    CHECK(basis.ringLength / 1.0 > 100.0 / gamma);
    double minAbsDetuning = 1e300, asym = 0.0;
    for (double w : basis.frequency) {
        CHECK(w > 0.0);
        minAbsDetuning = std::min(minAbsDetuning, std::abs(w - basis.centerFrequency));
    }
    // No mode exactly on resonance; detunings come in +- pairs.
    CHECK(minAbsDetuning == doctest::Approx(0.5 * basis.spacing).epsilon(1e-9));
    std::vector<double> d;
    for (double w : basis.frequency) d.push_back(w - basis.centerFrequency);
    std::sort(d.begin(), d.end());
    for (std::size_t i = 0; i < d.size() / 2; ++i)
        asym = std::max(asym, std::abs(d[i] + d[d.size() - 1 - i]));
    CHECK(asym < 1e-9);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS((void)ModeBasis::centered(-1.0, 1.0), ValidationError);
    CHECK_THROWS_AS((void)ModeBasis::centered(10.0, 0.0), ValidationError);
    OracleOptions odd;
    odd.modeCount = 4097;
    CHECK_THROWS_AS((void)ModeBasis::centered(10.0, 1.0, {}, odd), ValidationError);
    OracleOptions tiny;
    tiny.modeCount = 32;
    CHECK_THROWS_AS((void)ModeBasis::centered(10.0, 1.0, {}, tiny), ValidationError);
    OracleOptions narrow;
    narrow.windowWidthRate = 49.0;
    CHECK_THROWS_AS((void)ModeBasis::centered(10.0, 1.0, {}, narrow), ValidationError);
    // Window would dip below zero frequency.
    CHECK_THROWS_AS((void)ModeBasis::centered(1.0, 0.025), ValidationError);

    const ModeBasis basis = ModeBasis::centered(kOmegaA, 0.02);
    CHECK_THROWS_AS((void)buildHamiltonian({}, basis, 0.02), ValidationError);
    std::vector<Layout> crowd(13, equidistantLayout(1, 0.0));
    CHECK_THROWS_AS((void)buildHamiltonian(crowd, basis, 0.02), ValidationError);
    const DiscreteHamiltonian h =
        buildHamiltonian({equidistantLayout(1, 0.0)}, basis, 0.02);
    CHECK_THROWS_AS((void)evolveOracle(h, -1.0, 100), ValidationError);
    CHECK_THROWS_AS((void)evolveOracle(h, 1.0, 1), ValidationError);
}

TEST_CASE("single point: calibrated exponential decay, conserved norm") {
    const double gamma = 0.02;
    const OracleRateFit fit = oracleDecayFit(equidistantLayout(1, 0.0), kOmegaA, gamma);
    CHECK(fit.gamma == doctest::Approx(gamma).epsilon(0.01));
    CHECK(std::abs(fit.delta) < 0.01 * gamma);

    // Norm conservation and the revival guard on a small direct run.
    OracleOptions small;
    small.modeCount = 256;
    small.windowWidthRate = 50.0;
    const double g2 = 0.1;
    const ModeBasis basis = ModeBasis::centered(kOmegaA, g2, {}, small);
    const DiscreteHamiltonian h =
        buildHamiltonian({equidistantLayout(1, 0.0)}, basis, g2);
    const double revival = basis.ringLength;
    const OracleRun run = evolveOracle(h, 0.5 * revival, 400);
    CHECK(run.normDrift < 1e-9);
    CHECK(run.revivalTime == doctest::Approx(revival));
    CHECK_THROWS_AS((void)extractRates(run, 0, 0.45 * revival, 0.5 * revival),
                    ValidationError);
}

TEST_CASE("two half-wave-spaced points: relaxation fully suppressed") {
    const double gamma = 0.02;
    const Layout lay({{0.0, {1.0}}, {0.5, {1.0}}});  // phase pi at the carrier
    const OracleRateFit fit = oracleDecayFit(lay, kOmegaA, gamma);
    CHECK(std::abs(fit.gamma) < 1e-3 * gamma);
}

TEST_CASE("three third-wave-spaced points: dark to 1e-2") {
    const double gamma = 0.02;
    const Layout lay = equidistantLayout(3, 1.0 / 3.0);
    const OracleRateFit fit = oracleDecayFit(lay, kOmegaA, gamma);
    CHECK(std::abs(fit.gamma) < 1e-2 * gamma);
}

TEST_CASE("bright layouts: fitted rate matches the interference closed form to 1%") {
    const double gamma = 0.005;
    const std::vector<Layout> cases = {
        Layout({{0.0, {1.0}}, {0.25, {1.0}}}),
        Layout({{0.0, {0.7}}, {0.1, {1.0}}, {0.77, {0.5}}}),
        Layout({{0.0, {0.9}}, {0.21, {0.4}}, {0.55, {1.0}}, {0.9, {0.6}}}),
    };
    for (const Layout& lay : cases) {
        const double expected = closedRate(lay, gamma);
        REQUIRE(expected > 0.3 * gamma);
        const OracleRateFit fit = oracleDecayFit(lay, kOmegaA, gamma);
        CHECK(fit.gamma == doctest::Approx(expected).epsilon(0.01));
        CHECK(fit.residual < 0.08);
    }
}

// The coherent (frequency-shift and exchange) couplings are carried by
// modes that resolve the travel time between coupling points: the band
// must satisfy width * delay >> 1. Phases equal mod 2pi describe the
// same interference pattern, so the tests use geometrically stretched
// representatives (slot phase pi/2 + 12 pi) and a window whose
// truncation tail lands on a zero of the oscillating integrand.
namespace wideband {
constexpr double kSlot = 6.25;          // slot phase 12.5 pi at the carrier
constexpr double kGamma = 0.002;
inline OracleOptions options() {
    OracleOptions o;
    o.modeCount = 8192;
    o.windowWidthRate = 2.0 * 10.5 * kPi / kSlot / kGamma;  // tail zero
    return o;
}
}  // namespace wideband

TEST_CASE("stretched pair: fitted frequency shift matches the sine closed form") {
    const double gamma = wideband::kGamma;
    const Layout lay({{0.0, {1.0}}, {wideband::kSlot, {1.0}}});
    const OracleRateFit fit =
        oracleDecayFit(lay, kOmegaA, gamma, {}, wideband::options());
    // Slot phase = pi/2 mod 2pi: rate 2 gamma, shift + gamma.
    CHECK(fit.gamma == doctest::Approx(2.0 * gamma).epsilon(0.015));
    CHECK(fit.delta == doctest::Approx(gamma).epsilon(0.025));
}

TEST_CASE("braided pair at a dark phase: coherent exchange at full strength") {
    const double gamma = wideband::kGamma;
    const double d = wideband::kSlot;
    const Layout a({{0.0, {1.0}}, {2.0 * d, {1.0}}});
    const Layout b({{d, {1.0}}, {3.0 * d, {1.0}}});

    const double g = oracleExchangeFit(a, b, kOmegaA, gamma, gamma, {},
                                       wideband::options());
    CHECK(g == doctest::Approx(gamma).epsilon(0.02));

    // Frequency-domain elimination of the modes agrees.
    const double gSchur =
        effectiveCoupling(a, b, kOmegaA, gamma, {}, wideband::options());
    CHECK(gSchur == doctest::Approx(gamma).epsilon(0.02));
}

TEST_CASE("mode-count doubling: fitted rate converged to 0.5%") {
    const double gamma = 0.02;
    const Layout lay({{0.0, {1.0}}, {0.25, {1.0}}});
    const auto rows = oracleConvergenceTable(lay, kOmegaA, gamma, {2048, 4096, 8192});
    REQUIRE(rows.size() == 3);
    CHECK(std::abs(rows[2].gammaFit - rows[1].gammaFit) < 0.005 * rows[2].gammaFit);
    CHECK(rows[2].gammaFit == doctest::Approx(2.0 * gamma).epsilon(0.01));
}
