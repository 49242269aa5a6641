#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "giantatom/spectral.hpp"
#include "giantatom/types.hpp"

using namespace giantatom;

namespace {

const AtomSpec kTwoLevel = AtomSpec::ladder(2, 2.0 * kPi);

// Equidistant layout whose spacing realizes phase phi at frequency
// omega (v = 1): d = phi / omega.
Layout phasedLayout(std::size_t n, double phi, double omega) {
    return equidistantLayout(n, phi / omega);
}

}  // namespace

TEST_CASE("coupling factor: single point has unit magnitude at any frequency") {
    Layout single({{0.7, {1.0}}});
    for (double w : {0.3, 1.0, 17.0}) {
        CHECK(std::abs(couplingFactor(single, 0, w)) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("coupling factor: half-wavelength pair interferes destructively") {
    const double omega = 2.0 * kPi;
    // Spacing lambda/2 -> phase pi between the two points.
    Layout pair = phasedLayout(2, kPi, omega);
    CHECK(std::abs(couplingFactor(pair, 0, omega)) < 1e-12);
}

TEST_CASE("coupling factor: coincident points add coherently") {
    Layout stacked({{0.5, {1.0}}, {0.5, {1.0}}});
    const double omega = 3.0;
    const auto a = couplingFactor(stacked, 0, omega);
    const auto expected = 2.0 * std::exp(std::complex<double>(0.0, omega * 0.5));
    CHECK(std::abs(a - expected) < 1e-14);
}

TEST_CASE("coupling factor input validation") {
    Layout single({{0.0, {1.0}}});
    CHECK_THROWS_AS(couplingFactor(single, 0, -1.0), ValidationError);
    CHECK_THROWS_AS(couplingFactor(single, 1, 1.0), ValidationError);
}

TEST_CASE("relaxation rate calibration and suppression") {
    const double omega = kTwoLevel.omega10();
    // Single unit-strength point decays at exactly the unit rate.
    CHECK(relaxationRate(equidistantLayout(1, 0.0), kTwoLevel, 0, omega) ==
          doctest::Approx(1.0).epsilon(1e-14));
    // Half-wavelength pair: emission fully suppressed.
    CHECK(relaxationRate(phasedLayout(2, kPi, omega), kTwoLevel, 0, omega) < 1e-28);
    // Full-wavelength pair: constructive, 4x the single-point rate.
    CHECK(relaxationRate(phasedLayout(2, 2.0 * kPi, omega), kTwoLevel, 0, omega) ==
          doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("equidistant closed form: values and limits") {
    CHECK(relaxationRateEquidistant(2, kPi, 1.0) == 0.0);  // exactly, by the zero snap
    CHECK(relaxationRateEquidistant(3, 2.0 * kPi / 3.0, 1.0) == 0.0);
    CHECK(relaxationRateEquidistant(10, 2.0 * kPi, 1.0) == doctest::Approx(100.0));
    CHECK(relaxationRateEquidistant(1, 0.123, 2.5) == doctest::Approx(2.5));
    // Just off the removable singularity the formula is continuous.
    CHECK(relaxationRateEquidistant(10, 2.0 * kPi + 1e-6, 1.0) ==
          doctest::Approx(100.0).epsilon(1e-6));
}

TEST_CASE("equidistant shift: values and limits") {
    CHECK(lambShiftEquidistant(1, 0.77, 1.0) == doctest::Approx(0.0));
    CHECK(lambShiftEquidistant(2, kPi, 1.0) == doctest::Approx(0.0));
    CHECK(lambShiftEquidistant(2, kPi / 2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lambShiftEquidistant(5, 2.0 * kPi, 1.0) == doctest::Approx(0.0));
    // N=2 closed form collapses to gamma*sin(phi).
    for (double phi : {0.3, 1.1, 2.9, 4.0}) {
        CHECK(lambShiftEquidistant(2, phi, 1.0) ==
              doctest::Approx(std::sin(phi)).epsilon(1e-12));
    }
}

TEST_CASE("equidistant shift equals the lag-weighted sine series") {
    // Independent route: Delta(phi) = gamma * sum_{k=1}^{N-1} (N-k) sin(k phi).
    std::mt19937 rng(421);
    std::uniform_real_distribution<double> dist(0.05, 2.0 * kPi - 0.05);
    for (int n : {2, 3, 7, 10}) {
        for (int trial = 0; trial < 50; ++trial) {
            const double phi = dist(rng);
            if (std::abs(std::remainder(phi, 2.0 * kPi)) < 1e-6) continue;
            double series = 0.0;
            for (int k = 1; k < n; ++k) series += double(n - k) * std::sin(k * phi);
            CHECK(lambShiftEquidistant(n, phi, 1.0) ==
                  doctest::Approx(series).epsilon(1e-9).scale(double(n) * double(n)));
        }
    }
}

TEST_CASE("general rate matches the equidistant closed form to 1e-12 relative") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(0.05, 4.0 * kPi);
    const double omega = kTwoLevel.omega10();
    for (int n : {1, 2, 3, 5, 10}) {
        for (int trial = 0; trial < 40; ++trial) {
            const double phi = dist(rng);
            const double general =
                relaxationRate(phasedLayout(n, phi, omega), kTwoLevel, 0, omega);
            const double closed = relaxationRateEquidistant(n, phi, 1.0);
            CHECK(general ==
                  doctest::Approx(closed).epsilon(1e-12).scale(double(n) * double(n)));
        }
    }
}

TEST_CASE("closed-form shift matches the equidistant formula on uniform layouts") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> dist(0.05, 2.0 * kPi - 0.05);
    const double omega = kTwoLevel.omega10();
    for (int n : {2, 3, 6}) {
        for (int trial = 0; trial < 30; ++trial) {
            const double phi = dist(rng);
            const double general = lambShiftClosed(phasedLayout(n, phi, omega), 0, omega);
            const double closed = lambShiftEquidistant(n, phi, 1.0);
            CHECK(general ==
                  doctest::Approx(closed).epsilon(1e-11).scale(double(n) * double(n)));
        }
    }
}

TEST_CASE("rate is nonnegative for arbitrary layouts and frequencies") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> pos(-5.0, 5.0);
    std::uniform_real_distribution<double> amp(-2.0, 2.0);
    std::uniform_real_distribution<double> freq(0.01, 50.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<CouplingPoint> pts;
        const int n = 1 + int(rng() % 6);
        for (int k = 0; k < n; ++k) pts.push_back({pos(rng), {amp(rng)}});
        Layout layout(std::move(pts));
        CHECK(relaxationRate(layout, kTwoLevel, 0, freq(rng)) >= 0.0);
    }
}

TEST_CASE("closed forms are 2pi-periodic and mirror-symmetric in the phase") {
    for (int n : {2, 5, 10}) {
        for (double phi : linspace(0.01, 2.0 * kPi - 0.01, 401)) {
            const double rate = relaxationRateEquidistant(n, phi, 1.0);
            CHECK(relaxationRateEquidistant(n, phi + 2.0 * kPi, 1.0) ==
                  doctest::Approx(rate).epsilon(1e-9).scale(double(n * n)));
            CHECK(relaxationRateEquidistant(n, -phi, 1.0) ==
                  doctest::Approx(rate).epsilon(1e-9).scale(double(n * n)));
            CHECK(relaxationRateEquidistant(n, 2.0 * kPi - phi, 1.0) ==
                  doctest::Approx(rate).epsilon(1e-9).scale(double(n * n)));
            const double shift = lambShiftEquidistant(n, phi, 1.0);
            CHECK(lambShiftEquidistant(n, phi + 2.0 * kPi, 1.0) ==
                  doctest::Approx(shift).epsilon(1e-9).scale(double(n * n)));
            CHECK(lambShiftEquidistant(n, 2.0 * kPi - phi, 1.0) ==
                  doctest::Approx(-shift).epsilon(1e-9).scale(double(n * n)));
        }
    }
}

TEST_CASE("central peak width at half maximum scales as 1/N") {
    // Width of the constructive peak at phi = 2 pi, measured where the
    // rate crosses half its N^2 maximum (bisection on each flank).
    auto width = [](int n) {
        const double half = 0.5 * double(n) * double(n);
        double lo = 2.0 * kPi, hi = 2.0 * kPi + 2.0 * kPi / double(n);
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (relaxationRateEquidistant(n, mid, 1.0) > half)
                lo = mid;
            else
                hi = mid;
        }
        return 2.0 * (0.5 * (lo + hi) - 2.0 * kPi);
    };
    for (int n : {5, 10, 20}) {
        const double ratio = width(n) / width(2 * n);
        CHECK(ratio > 1.8);
        CHECK(ratio < 2.2);
    }
}

TEST_CASE("shift via principal-value integral matches the closed forms") {
    const double omega = kTwoLevel.omega10();
    SUBCASE("single point: zero shift") {
        const double got = lambShiftIntegral(equidistantLayout(1, 0.0), kTwoLevel, 0);
        CHECK(std::abs(got) < 1e-6);
    }
    SUBCASE("two points at quarter wavelength: shift equals the single-point rate") {
        const double got =
            lambShiftIntegral(phasedLayout(2, kPi / 2.0, omega), kTwoLevel, 0);
        CHECK(got == doctest::Approx(1.0).epsilon(0.01));
    }
    SUBCASE("three points: follows the equidistant curve within 1% of gamma N^2") {
        for (double phi : {0.8, 2.0, 3.7, 5.5}) {
            const double got = lambShiftIntegral(phasedLayout(3, phi, omega), kTwoLevel, 0);
            const double want = lambShiftEquidistant(3, phi, 1.0);
            CHECK(std::abs(got - want) < 0.01 * 9.0);
        }
    }
}

TEST_CASE("shift from rate samples via the discrete transform") {
    SUBCASE("constant rate gives identically zero shift") {
        const auto grid = linspace(1.0, 3.0, 101);
        const auto res = lambFromKramersKronig(grid, std::vector<double>(101, 2.5));
        for (double d : res.lambShift) CHECK(d == 0.0);
        CHECK_FALSE(res.edgeWarning);
    }
    SUBCASE("two-point layout: matches the closed form within 2% in the interior") {
        const double omega0 = 2.0 * kPi;
        Layout pair = phasedLayout(2, 1.0, omega0);  // phase 1 rad at omega0
        // Wide grid: +-8 full oscillations of the pair phase.
        const auto grid = linspace(omega0 * 0.2, omega0 * 0.2 + 16.0 * kPi * omega0, 4001);
        SpectralResponse resp = sampleSpectralResponse(pair, kTwoLevel, 0, grid);
        const auto res = lambFromKramersKronig(resp);
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (res.edgeAffected[i]) continue;
            worst = std::max(worst, std::abs(res.lambShift[i] - resp.lambShift[i]));
        }
        CHECK(worst < 0.02);  // scale: gamma = 1
    }
    SUBCASE("narrow symmetric bump maps to an antisymmetric dispersive shape") {
        const auto grid = linspace(-6.0, 6.0, 2001);
        std::vector<double> bump(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            bump[i] = 1.0 / (1.0 + grid[i] * grid[i]);  // centered at 0, width 1
        const auto res = lambFromKramersKronig(grid, bump);
        // Hilbert pair of the Lorentzian: x / (1 + x^2); check sign and
        // antisymmetry at a probe offset.
        const std::size_t centre = grid.size() / 2;
        const std::size_t off = 160;  // ~0.96 frequency units
        CHECK(res.lambShift[centre + off] > 0.0);
        CHECK(res.lambShift[centre - off] < 0.0);
        CHECK(res.lambShift[centre - off] ==
              doctest::Approx(-res.lambShift[centre + off]).epsilon(0.05));
    }
    SUBCASE("short grids carry the edge warning") {
        const auto grid = linspace(1.0, 2.0, 12);
        const auto res = lambFromKramersKronig(grid, std::vector<double>(12, 1.0));
        CHECK(res.edgeWarning);
    }
    SUBCASE("non-uniform grids are rejected") {
        std::vector<double> grid = {1.0, 2.0, 3.5};
        CHECK_THROWS_AS(lambFromKramersKronig(grid, std::vector<double>(3, 1.0)),
                        ValidationError);
    }
}

TEST_CASE("sampled response arrays are consistent") {
    const double omega = kTwoLevel.omega10();
    Layout layout = phasedLayout(3, 1.3, omega);
    const auto grid = linspace(0.5 * omega, 1.5 * omega, 64);
    const auto resp = sampleSpectralResponse(layout, kTwoLevel, 0, grid);
    REQUIRE(resp.omega.size() == 64);
    REQUIRE(resp.couplingFactor.size() == 64);
    REQUIRE(resp.relaxationRate.size() == 64);
    REQUIRE(resp.lambShift.size() == 64);
    for (std::size_t i = 0; i < 64; ++i) {
        CHECK(resp.relaxationRate[i] >= 0.0);
        CHECK(resp.relaxationRate[i] ==
              doctest::Approx(std::norm(resp.couplingFactor[i])).epsilon(1e-12));
    }
}

TEST_CASE("memoryless-validity diagnostic") {
    const AtomSpec atom = AtomSpec::ladder(2, 2.0 * kPi);
    const double lambda = wavelength(atom, WaveguideModel{});

    SUBCASE("ten points at a thousandth of the transition frequency") {
        const auto v = markovianValidity(equidistantLayout(10, lambda), atom,
                                         1e-3 * atom.omega10());
        CHECK(v.ratio == doctest::Approx(0.0628).epsilon(0.01));
        CHECK(v.valid);
    }
    SUBCASE("ratio tracks rate times travel time") {
        const auto v =
            markovianValidity(equidistantLayout(5, lambda), atom, 0.2 * atom.omega10());
        // Travel time across 5 wavelength-spaced points ~ 5 periods.
        CHECK(v.ratio == doctest::Approx(0.2 * 2.0 * kPi * 5.0).epsilon(1e-12));
        CHECK_FALSE(v.valid);
    }
    SUBCASE("single point never accumulates delay") {
        const auto v = markovianValidity(equidistantLayout(1, 0.0), atom, 123.0);
        CHECK(v.ratio == 0.0);
        CHECK(v.valid);
    }
    SUBCASE("non-equidistant layouts are rejected") {
        Layout uneven({{0.0, {1.0}}, {1.0, {1.0}}, {3.0, {1.0}}});
        CHECK_THROWS_AS(markovianValidity(uneven, atom, 0.1), ValidationError);
    }
}
