#include "giantatom/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <sstream>

#include "giantatom/parallel.hpp"
#include "giantatom/pv.hpp"

namespace giantatom {
namespace {

// Distance from x to the nearest multiple of 2 pi.
double phaseDefect(double x) { return std::abs(std::remainder(x, 2.0 * kPi)); }

void checkTransition(const Layout& layout, const AtomSpec& atom, int m) {
    if (m < 0 || m + 1 >= int(atom.levels.size()))
        throw ValidationError("transition index out of range for this atom");
    for (const auto& p : layout.points) p.strength(m);  // throws if missing
}

// Coupling factor without the omega > 0 gate, for use inside integrals
// whose windows may cross zero frequency.
std::complex<double> factorAnyFrequency(const Layout& layout, int m, double omega,
                                        const WaveguideModel& wg) {
    std::complex<double> acc{0.0, 0.0};
    for (const auto& p : layout.points) {
        const double phase = omega * p.x / wg.v;
        acc += p.strength(m) * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return acc;
}

}  // namespace

std::complex<double> couplingFactor(const Layout& layout, int m, double omega,
                                    const WaveguideModel& wg) {
    if (!(omega > 0.0)) throw ValidationError("couplingFactor: omega must be positive");
    for (const auto& p : layout.points) p.strength(m);
    return factorAnyFrequency(layout, m, omega, wg);
}

double relaxationRate(const Layout& layout, const AtomSpec& atom, int m, double omega,
                      const WaveguideModel& wg) {
    checkTransition(layout, atom, m);
    if (!(omega > 0.0)) throw ValidationError("relaxationRate: omega must be positive");
    return wg.ratePrefactor() * std::norm(factorAnyFrequency(layout, m, omega, wg));
}

double relaxationRateEquidistant(int pointCount, double phi, double gamma) {
    if (pointCount < 1) throw ValidationError("relaxationRateEquidistant: need at least one point");
    if (!(gamma >= 0.0)) throw ValidationError("relaxationRateEquidistant: gamma must be >= 0");
    const double n = double(pointCount);
    if (phaseDefect(phi) < 1e-7) return n * n * gamma;  // removable singularity
    // Exact zero when N phi reaches a multiple of 2 pi away from the
    // singular points: the emissions from the N points cancel fully.
    if (phaseDefect(n * phi) < 1e-8) return 0.0;
    const double num = std::sin(0.5 * n * phi);
    const double den = std::sin(0.5 * phi);
    return gamma * (num * num) / (den * den);
}

double lambShiftEquidistant(int pointCount, double phi, double gamma) {
    if (pointCount < 1) throw ValidationError("lambShiftEquidistant: need at least one point");
    if (!(gamma >= 0.0)) throw ValidationError("lambShiftEquidistant: gamma must be >= 0");
    const double n = double(pointCount);
    if (phaseDefect(phi) < 1e-7) return 0.0;  // continuous extension
    const double den = std::sin(0.5 * phi);
    return gamma * (n * std::sin(phi) - std::sin(n * phi)) / (4.0 * den * den);
}

double lambShiftClosed(const Layout& layout, int m, double omega, const WaveguideModel& wg) {
    if (!(omega > 0.0)) throw ValidationError("lambShiftClosed: omega must be positive");
    for (const auto& p : layout.points) p.strength(m);
    const double kappa = wg.ratePrefactor();
    double acc = 0.0;
    const std::size_t n = layout.points.size();
    for (std::size_t k = 0; k + 1 < n; ++k) {
        for (std::size_t j = k + 1; j < n; ++j) {
            const auto& pk = layout.points[k];
            const auto& pj = layout.points[j];
            const double tau = std::abs(pk.x - pj.x) / wg.v;
            acc += pk.strength(m) * pj.strength(m) * std::sin(omega * tau);
        }
    }
    return kappa * acc;
}

double levelShift(const Layout& layout, const AtomSpec& atom, int level,
                  const WaveguideModel& wg) {
    if (level < 0 || level >= int(atom.levels.size()))
        throw ValidationError("levelShift: level index out of range");
    if (level == 0) return 0.0;
    const double omega = atom.transition(level, level - 1);
    return lambShiftClosed(layout, level - 1, omega, wg);
}

double lambShiftIntegral(const Layout& layout, const AtomSpec& atom, int m,
                         const WaveguideModel& wg, const LambIntegralOptions& options) {
    checkTransition(layout, atom, m);
    if (!(options.windowMultiple >= 4.0))
        throw ValidationError(
            "lambShiftIntegral: window must cover several multiples of the transition "
            "frequency (windowMultiple >= 4)");
    if (options.windowCount < 1)
        throw ValidationError("lambShiftIntegral: windowCount must be positive");
    if (!(options.quadratureTol > 0.0))
        throw ValidationError("lambShiftIntegral: quadrature tolerance must be positive");

    const double omegaB = atom.transition(m + 1, m);
    const double kappa = wg.ratePrefactor();

    // Frequency-flat part of the rate spectrum; it carries no shift
    // (its principal-value integral over the full line vanishes) and
    // subtracting it makes the truncated integrand decay-free of DC.
    double flat = 0.0;
    double tauMin = std::numeric_limits<double>::infinity();
    for (const auto& p : layout.points) {
        const double g = p.strength(m);
        flat += g * g;
        for (const auto& q : layout.points) {
            const double tau = std::abs(p.x - q.x) / wg.v;
            if (tau > 0.0) tauMin = std::min(tauMin, tau);
        }
    }
    if (!std::isfinite(tauMin)) return 0.0;  // all points coincident: flat spectrum

    const auto oscillatory = [&](double omega) {
        return std::norm(factorAnyFrequency(layout, m, omega, wg)) - flat;
    };

    // The truncation error of each finite window oscillates with the
    // window size; averaging windows spread across one period of the
    // slowest pair phase cancels the leading tail.
    const double baseHalfWidth = options.windowMultiple * omegaB;
    const double tailPeriod = 2.0 * kPi / tauMin;
    double acc = 0.0;
    for (int j = 0; j < options.windowCount; ++j) {
        const double half = baseHalfWidth + tailPeriod * double(j) / double(options.windowCount);
        const double pv = principalValue(oscillatory, omegaB - half, omegaB + half, omegaB,
                                         options.quadratureTol);
        // principalValue integrates f/(omega - omegaB); the dispersion
        // kernel carries the opposite sign.
        acc += -kappa / (2.0 * kPi) * pv;
    }
    return acc / double(options.windowCount);
}

SpectralResponse sampleSpectralResponse(const Layout& layout, const AtomSpec& atom, int m,
                                        const std::vector<double>& omegaGrid,
                                        const WaveguideModel& wg) {
    checkTransition(layout, atom, m);
    for (double w : omegaGrid)
        if (!(w > 0.0))
            throw ValidationError("sampleSpectralResponse: grid frequencies must be positive");
    SpectralResponse out;
    out.omega = omegaGrid;
    out.couplingFactor.resize(omegaGrid.size());
    out.relaxationRate.resize(omegaGrid.size());
    out.lambShift.resize(omegaGrid.size());
    const double kappa = wg.ratePrefactor();
    parallelFor(omegaGrid.size(), [&](std::size_t i) {
        const auto a = factorAnyFrequency(layout, m, omegaGrid[i], wg);
        out.couplingFactor[i] = a;
        out.relaxationRate[i] = kappa * std::norm(a);
        out.lambShift[i] = lambShiftClosed(layout, m, omegaGrid[i], wg);
    });
    return out;
}

KramersKronigResult lambFromKramersKronig(const std::vector<double>& omega,
                                          const std::vector<double>& gamma) {
    const std::size_t n = omega.size();
    if (n != gamma.size())
        throw ValidationError("lambFromKramersKronig: grid and samples differ in length");
    if (n < 3) throw ValidationError("lambFromKramersKronig: need at least 3 samples");
    const double step = omega[1] - omega[0];
    if (!(step > 0.0)) throw ValidationError("lambFromKramersKronig: grid must be increasing");
    for (std::size_t i = 1; i < n; ++i) {
        const double d = omega[i] - omega[i - 1];
        if (std::abs(d - step) > 1e-9 * std::max(1.0, std::abs(step)))
            throw ValidationError("lambFromKramersKronig: grid must be uniform");
    }

    double mean = 0.0;
    for (double g : gamma) mean += g;
    mean /= double(n);
    std::vector<double> centered(n);
    for (std::size_t i = 0; i < n; ++i) centered[i] = gamma[i] - mean;

    KramersKronigResult out;
    out.omega = omega;
    out.lambShift.assign(n, 0.0);
    out.edgeAffected.assign(n, 0);
    parallelFor(n, [&](std::size_t j) {
        double acc = 0.0;
        // Odd-offset taps only: this kernel reproduces the Hilbert
        // transform exactly for sampled sinusoids below the Nyquist
        // phase advance.
        for (std::size_t k = (j % 2 == 0) ? 1 : 0; k < n; k += 2)
            acc += centered[k] / double(std::ptrdiff_t(j) - std::ptrdiff_t(k));
        out.lambShift[j] = acc / kPi;
    });

    const std::size_t band = n / 4;
    for (std::size_t i = 0; i < band; ++i) {
        out.edgeAffected[i] = 1;
        out.edgeAffected[n - 1 - i] = 1;
    }
    out.edgeWarning = n < 40;
    return out;
}

KramersKronigResult lambFromKramersKronig(const SpectralResponse& response) {
    return lambFromKramersKronig(response.omega, response.relaxationRate);
}

MarkovianValidity markovianValidity(const Layout& layout, const AtomSpec& atom,
                                    double gammaRate) {
    if (!(gammaRate >= 0.0)) throw ValidationError("markovianValidity: rate must be >= 0");
    const std::size_t n = layout.points.size();
    if (n > 1) {
        // The diagnostic is defined for equidistant layouts.
        const double gap = layout.points[1].x - layout.points[0].x;
        for (std::size_t i = 1; i < n; ++i) {
            const double d = layout.points[i].x - layout.points[i - 1].x;
            if (std::abs(d - gap) > 1e-9 * std::max(1.0, std::abs(gap)))
                throw ValidationError("markovianValidity: layout must be equidistant");
        }
    }
    MarkovianValidity out;
    if (n == 1) {
        out.ratio = 0.0;
        out.valid = true;
        out.note = "single coupling point: no internal delay, memoryless at any fixed rate";
        return out;
    }
    const double omega10 = atom.omega10();
    out.ratio = gammaRate * 2.0 * kPi * double(n) / omega10;
    out.valid = out.ratio < 0.1;
    out.note = out.valid
                   ? "rate small against inverse travel time: memoryless treatment justified"
                   : "rate comparable to inverse travel time: expect time-delay effects";
    return out;
}

}  // namespace giantatom
