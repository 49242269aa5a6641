#include "giantatom/delay.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>

#include "giantatom/parallel.hpp"

namespace giantatom {
namespace {

using Complex = std::complex<double>;

// ---- small FFT machinery (any length, for oscillation analysis) ----

// In-place iterative radix-2 transform; n must be a power of two.
void fftPow2(std::vector<Complex>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * kPi / double(len);
        const Complex step(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            Complex w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const Complex u = a[i + j];
                const Complex v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= step;
            }
        }
    }
    if (inverse)
        for (auto& z : a) z /= double(n);
}

// Forward transform of arbitrary length via the chirp identity
// jk = (j^2 + k^2 - (k - j)^2) / 2, reduced mod 2n to keep the chirp
// angles small and exact.
std::vector<Complex> dftAnyLength(const std::vector<Complex>& x) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    if ((n & (n - 1)) == 0) {
        std::vector<Complex> a = x;
        fftPow2(a, false);
        return a;
    }
    const auto chirp = [&](std::size_t j, double sign) {
        const auto jj = static_cast<long long>(j);
        const long long q = (jj * jj) % (2LL * static_cast<long long>(n));
        const double ang = sign * kPi * double(q) / double(n);
        return Complex(std::cos(ang), std::sin(ang));
    };
    std::size_t m = 1;
    while (m < 2 * n - 1) m <<= 1;
    std::vector<Complex> a(m, Complex(0.0, 0.0)), b(m, Complex(0.0, 0.0));
    for (std::size_t j = 0; j < n; ++j) a[j] = x[j] * chirp(j, -1.0);
    b[0] = Complex(1.0, 0.0);
    for (std::size_t j = 1; j < n; ++j) b[j] = b[m - j] = chirp(j, +1.0);
    fftPow2(a, false);
    fftPow2(b, false);
    for (std::size_t j = 0; j < m; ++j) a[j] *= b[j];
    fftPow2(a, true);
    std::vector<Complex> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * chirp(k, -1.0);
    return out;
}

// ---- trajectory history access ----

// Cubic Hermite read of the stored amplitude. `side` selects the limit
// at the single jump t = 0 (c(0-) = 0, c(0+) = 1): +1 right, -1 left,
// 0 for interior stage evaluations.
Complex historyValue(const std::vector<Complex>& c, const std::vector<Complex>& dR,
                     const std::vector<Complex>& dL, double dt, double t, int side) {
    if (t < -1e-12) return Complex(0.0, 0.0);
    if (std::abs(t) <= 1e-12) return side > 0 ? c[0] : Complex(0.0, 0.0);
    const double x = t / dt;
    const auto i = std::size_t(std::floor(x + 1e-12));
    const double th = x - double(i);
    if (th <= 1e-9) return c[i];
    const Complex c0 = c[i], c1 = c[i + 1];
    const Complex d0 = dR[i], d1 = dL[i + 1];
    const double h00 = (1.0 + 2.0 * th) * (1.0 - th) * (1.0 - th);
    const double h10 = th * (1.0 - th) * (1.0 - th);
    const double h01 = th * th * (3.0 - 2.0 * th);
    const double h11 = th * th * (th - 1.0);
    return h00 * c0 + h10 * dt * d0 + h01 * c1 + h11 * dt * d1;
}

Complex historyValue(const AmplitudeTrajectory& traj, double t, int side) {
    return historyValue(traj.c, traj.derivRight, traj.derivLeft, traj.dt, t, side);
}

double referenceStrength(const Layout& layout) {
    const double s = layout.points.front().strength(0);
    if (s == 0.0)
        throw ValidationError("the first coupling point's strength is the reference "
                              "and must be nonzero");
    return s;
}

struct EdgeTerm {
    double offset = 0.0;  // travel time from the point to the edge
    Complex phase;        // s_k / s_ref * e^{i omega_a offset}
};

// Emission bookkeeping toward one edge of the layout.
std::vector<EdgeTerm> edgeTerms(const Layout& layout, double omegaA, double v,
                                double sRef, bool rightEdge) {
    const double edge = rightEdge ? layout.points.back().x : layout.points.front().x;
    std::vector<EdgeTerm> out;
    out.reserve(layout.size());
    for (const auto& p : layout.points) {
        const double offset = std::abs(edge - p.x) / v;
        out.push_back({offset, p.strength(0) / sRef *
                                   Complex(std::cos(omegaA * offset),
                                           std::sin(omegaA * offset))});
    }
    return out;
}

}  // namespace

DelayKernel DelayKernel::build(const Layout& layout, double gamma, double omegaA,
                               const WaveguideModel& wg) {
    if (layout.size() == 0) throw ValidationError("layout has no coupling points");
    if (!(gamma >= 0.0)) throw ValidationError("gamma must be >= 0");
    if (!(omegaA > 0.0)) throw ValidationError("atomic frequency must be positive");
    if (!(wg.v > 0.0)) throw ValidationError("wave speed must be positive");
    const double sRef = referenceStrength(layout);

    std::map<long long, Complex> grouped;
    for (const auto& pk : layout.points) {
        for (const auto& pn : layout.points) {
            const double tau = std::abs(pk.x - pn.x) / wg.v;
            const double s = pk.strength(0) * pn.strength(0) / (sRef * sRef);
            const Complex w = 0.5 * gamma * s *
                              Complex(std::cos(omegaA * tau), std::sin(omegaA * tau));
            grouped[std::llround(tau * 1e12)] += w;
        }
    }
    DelayKernel kernel;
    kernel.terms.reserve(grouped.size());
    for (const auto& [key, weight] : grouped) {
        const double tau = double(key) * 1e-12;
        kernel.terms.push_back({tau, weight});
        kernel.maxDelay = std::max(kernel.maxDelay, tau);
        if (tau > 0.0)
            kernel.minPositiveDelay = kernel.minPositiveDelay == 0.0
                                          ? tau
                                          : std::min(kernel.minPositiveDelay, tau);
    }
    return kernel;
}

Complex DelayKernel::responseDenominator(double detuning) const {
    Complex acc(0.0, -detuning);
    for (const auto& term : terms)
        acc += term.weight * Complex(std::cos(detuning * term.delay),
                                     std::sin(detuning * term.delay));
    return acc;
}

AmplitudeTrajectory ddeEvolve(const Layout& layout, double gamma, double omegaA,
                              double tEnd, double dt, const WaveguideModel& wg) {
    const DelayKernel kernel = DelayKernel::build(layout, gamma, omegaA, wg);
    if (!(tEnd > 0.0) || !(dt > 0.0)) throw ValidationError("need tEnd > 0 and dt > 0");
    if (kernel.minPositiveDelay > 0.0 && dt > kernel.minPositiveDelay / 10.0 + 1e-15) {
        std::ostringstream msg;
        msg << "dt = " << dt << " exceeds a tenth of the smallest delay "
            << kernel.minPositiveDelay << "; refine the step";
        throw ValidationError(msg.str());
    }
    const long long steps = std::llround(tEnd / dt);
    if (steps < 1) throw ValidationError("tEnd is shorter than half a step");
    if (steps > 20'000'000)
        throw ValidationError("trajectory exceeds 2e7 steps; raise dt or shorten tEnd");

    AmplitudeTrajectory traj;
    traj.dt = dt;
    traj.gamma = gamma;
    traj.omegaA = omegaA;
    traj.waveSpeed = wg.v;
    const auto n = std::size_t(steps);
    traj.t.resize(n + 1);
    traj.c.assign(n + 1, Complex(0.0, 0.0));
    traj.derivRight.assign(n + 1, Complex(0.0, 0.0));
    traj.derivLeft.assign(n + 1, Complex(0.0, 0.0));
    for (std::size_t i = 0; i <= n; ++i) traj.t[i] = double(i) * dt;
    traj.c[0] = Complex(1.0, 0.0);

    auto& c = traj.c;
    auto& dR = traj.derivRight;
    auto& dL = traj.derivLeft;
    const auto rhs = [&](double t, Complex y, int side) {
        Complex acc(0.0, 0.0);
        for (const auto& term : kernel.terms) {
            if (term.delay <= 1e-12)
                acc += term.weight * y;
            else
                acc += term.weight * historyValue(c, dR, dL, dt, t - term.delay, side);
        }
        return -acc;
    };

    dR[0] = rhs(0.0, c[0], +1);
    dL[0] = dR[0];
    for (std::size_t j = 0; j < n; ++j) {
        const double t = double(j) * dt;
        const Complex y = c[j];
        const Complex k1 = dR[j];
        const Complex k2 = rhs(t + 0.5 * dt, y + 0.5 * dt * k1, 0);
        const Complex k3 = rhs(t + 0.5 * dt, y + 0.5 * dt * k2, 0);
        const Complex k4 = rhs(t + dt, y + dt * k3, -1);
        c[j + 1] = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!(std::norm(c[j + 1]) <= 1.0 + 1e-6)) {
            std::ostringstream msg;
            msg << "amplitude left the unit disk at t = " << t + dt
                << "; reduce dt";
            throw ConvergenceError(msg.str());
        }
        dL[j + 1] = rhs(t + dt, c[j + 1], -1);
        dR[j + 1] = rhs(t + dt, c[j + 1], +1);
    }
    return traj;
}

Complex amplitudeAt(const AmplitudeTrajectory& traj, double t) {
    if (traj.size() < 2) throw ValidationError("trajectory is empty");
    if (t > traj.tEnd() + 1e-12) throw ValidationError("time beyond the trajectory end");
    return historyValue(traj, std::min(t, traj.tEnd()), +1);
}

std::vector<double> totalEnergy(const AmplitudeTrajectory& traj, const Layout& layout) {
    if (traj.size() < 2) throw ValidationError("trajectory is empty");
    if (layout.size() == 0) throw ValidationError("layout has no coupling points");
    const double v = traj.waveSpeed;
    const double transit = layout.span() / v;
    if (traj.tEnd() < transit)
        throw ValidationError("trajectory too short to cover one end-to-end traversal");
    const double sRef = referenceStrength(layout);
    const auto right = edgeTerms(layout, traj.omegaA, v, sRef, true);
    const auto left = edgeTerms(layout, traj.omegaA, v, sRef, false);

    const auto flux = [&](double t, int side) {
        Complex pr(0.0, 0.0), pl(0.0, 0.0);
        for (const auto& e : right) pr += e.phase * historyValue(traj, t - e.offset, side);
        for (const auto& e : left) pl += e.phase * historyValue(traj, t - e.offset, side);
        return 0.5 * traj.gamma * (std::norm(pr) + std::norm(pl));
    };

    std::vector<double> energy(traj.size());
    energy[0] = 1.0;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
        acc += 0.5 * (flux(traj.t[i], +1) + flux(traj.t[i + 1], -1)) * traj.dt;
        double e = 1.0 - acc;
        if (e < -1e-4 || e > 1.0 + 1e-9)
            throw ConvergenceError("energy accounting drifted outside [0, 1]; reduce dt");
        energy[i + 1] = std::clamp(e, 0.0, 1.0);
    }
    return energy;
}

double totalEnergyAt(const AmplitudeTrajectory& traj, const Layout& layout, double t,
                     std::size_t spatialSamples) {
    if (traj.size() < 2) throw ValidationError("trajectory is empty");
    if (layout.size() == 0) throw ValidationError("layout has no coupling points");
    if (spatialSamples < 2) throw ValidationError("need at least two spatial samples");
    const auto i = std::llround(t / traj.dt);
    if (i < 0 || std::size_t(i) >= traj.size())
        throw ValidationError("time outside the trajectory window");
    const double ts = double(i) * traj.dt;
    const double atom = traj.population(std::size_t(i));

    const double x1 = layout.points.front().x;
    const double xN = layout.points.back().x;
    if (xN - x1 <= 0.0) return atom;  // single effective point: nothing in transit
    const double v = traj.waveSpeed;
    const double sRef = referenceStrength(layout);

    const std::size_t ny = spatialSamples;
    const double dy = (xN - x1) / double(ny - 1);
    double sumR = 0.0, sumL = 0.0;
    double prevR = 0.0, prevL = 0.0;
    for (std::size_t m = 0; m < ny; ++m) {
        const double y = x1 + double(m) * dy;
        Complex fr(0.0, 0.0), fl(0.0, 0.0);
        for (const auto& p : layout.points) {
            const double s = p.strength(0) / sRef;
            if (y >= p.x - 1e-15) {
                const double off = (y - p.x) / v;
                fr += s * Complex(std::cos(traj.omegaA * off), std::sin(traj.omegaA * off)) *
                      historyValue(traj, ts - off, +1);
            }
            if (y <= p.x + 1e-15) {
                const double off = (p.x - y) / v;
                fl += s * Complex(std::cos(traj.omegaA * off), std::sin(traj.omegaA * off)) *
                      historyValue(traj, ts - off, +1);
            }
        }
        const double vr = std::norm(fr), vl = std::norm(fl);
        if (m > 0) {
            sumR += 0.5 * (prevR + vr) * dy;
            sumL += 0.5 * (prevL + vl) * dy;
        }
        prevR = vr;
        prevL = vl;
    }
    return atom + 0.5 * traj.gamma / v * (sumR + sumL);
}

ProbeSpectrum probeResponse(const Layout& layout, double gamma, double omegaA,
                            const std::vector<double>& detuningGrid,
                            const WaveguideModel& wg) {
    if (detuningGrid.empty()) throw ValidationError("empty detuning grid");
    const DelayKernel kernel = DelayKernel::build(layout, gamma, omegaA, wg);
    ProbeSpectrum spec;
    spec.detuning = detuningGrid;
    spec.response.resize(detuningGrid.size());
    for (std::size_t i = 0; i < detuningGrid.size(); ++i)
        spec.response[i] = 1.0 / std::norm(kernel.responseDenominator(detuningGrid[i]));
    spec.peakCount = countSpectralPeaks(spec.response);
    return spec;
}

int countSpectralPeaks(const std::vector<double>& y, double relativeProminence) {
    const std::size_t n = y.size();
    if (n < 3) return 0;
    const double ymax = *std::max_element(y.begin(), y.end());
    std::vector<std::size_t> maxima;
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (y[i] > y[i - 1] && y[i] >= y[i + 1]) maxima.push_back(i);
    if (maxima.empty()) return 0;
    int count = 0;
    for (const std::size_t i : maxima) {
        // Reference level: for every at-least-as-high maximum, the
        // deepest valley on the way there; the peak's prominence is its
        // height above the highest such valley.
        double bestRef = -1.0;
        bool any = false;
        for (const std::size_t other : maxima) {
            if (other == i || y[other] < y[i]) continue;
            const auto [lo, hi] = std::minmax(other, i);
            const double valley = *std::min_element(y.begin() + long(lo),
                                                    y.begin() + long(hi) + 1);
            bestRef = any ? std::max(bestRef, valley) : valley;
            any = true;
        }
        const double prominence = any ? y[i] - bestRef : y[i];
        if (prominence >= relativeProminence * ymax) ++count;
    }
    return std::max(1, count);
}

ThresholdScanResult thresholdScan(int pointCount, const std::vector<double>& gammaTauGrid,
                                  std::size_t gridSize, double spanFactor) {
    if (pointCount < 1) throw ValidationError("need at least one coupling point");
    if (gammaTauGrid.empty()) throw ValidationError("empty scan grid");
    for (std::size_t i = 0; i < gammaTauGrid.size(); ++i) {
        if (!(gammaTauGrid[i] > 0.0))
            throw ValidationError("gamma*tau values must be positive");
        if (i > 0 && !(gammaTauGrid[i] > gammaTauGrid[i - 1]))
            throw ValidationError("gamma*tau grid must be strictly increasing");
    }
    if (gridSize < 16) throw ValidationError("detuning grid too coarse");
    if (!(spanFactor > 0.0)) throw ValidationError("span factor must be positive");

    const Layout layout = equidistantLayout(std::size_t(pointCount), 1.0);
    ThresholdScanResult result;
    result.gammaTau = gammaTauGrid;
    result.peakCount.assign(gammaTauGrid.size(), 0);
    parallelFor(gammaTauGrid.size(), [&](std::size_t i) {
        const double gt = gammaTauGrid[i];
        const double gamma = gt / double(pointCount) / double(pointCount);
        const double span = spanFactor * std::max(gt, 1.0);
        const auto grid = linspace(-span, span, gridSize);
        result.peakCount[i] = probeResponse(layout, gamma, 2.0 * kPi, grid).peakCount;
    });
    for (std::size_t i = 0; i + 1 < result.peakCount.size(); ++i) {
        if (result.peakCount[i] == 1 && result.peakCount[i + 1] == 2) {
            result.border = 0.5 * (gammaTauGrid[i] + gammaTauGrid[i + 1]);
            break;
        }
    }
    return result;
}

OscillationReport oscillationReport(const AmplitudeTrajectory& traj) {
    if (traj.size() < 8) throw ValidationError("trajectory too short to analyze");
    const std::size_t i0 = std::size_t(0.75 * double(traj.size()));
    const std::size_t nw = traj.size() - i0;
    if (nw < 4) throw ValidationError("analysis window too short");
    std::vector<double> window(nw);
    for (std::size_t i = 0; i < nw; ++i) window[i] = traj.population(i0 + i);

    OscillationReport report;
    report.populationFloor = *std::min_element(window.begin(), window.end());
    const double fundamental = 2.0 * kPi / (double(nw - 1) * traj.dt);

    const auto dominant = [&](std::size_t begin, std::size_t len) {
        double mean = 0.0;
        for (std::size_t i = 0; i < len; ++i) mean += window[begin + i];
        mean /= double(len);
        std::vector<double> y(len);
        for (std::size_t i = 0; i < len; ++i) y[i] = window[begin + i] - mean;
        const auto mags = fourierMagnitudes(y);
        double amp = 0.0, freq = 0.0;
        bool any = false;
        for (std::size_t k = 0; k < mags.size(); ++k) {
            const double omega = 2.0 * kPi * double(k) / (double(len) * traj.dt);
            if (omega < 6.0 * fundamental) continue;
            const double a = 2.0 * mags[k] / double(len);
            if (!any || a > amp) {
                amp = a;
                freq = omega;
                any = true;
            }
        }
        return std::pair<double, double>(amp, freq);
    };

    const auto [amp, freq] = dominant(0, nw);
    report.amplitude = amp;
    report.frequency = freq;
    const std::size_t half = nw / 2;
    const double early = dominant(0, half).first;
    const double late = dominant(half, nw - half).first;
    report.halfWindowRatio = early > 0.0 ? late / early : 0.0;
    report.persistent = report.populationFloor > 1e-3 && report.amplitude > 2e-3 &&
                        report.halfWindowRatio >= 0.7;
    return report;
}

OscillationReport oscillatingBoundStateScan(const Layout& layout, double gamma,
                                            double omegaA, double tEnd, double dt,
                                            const WaveguideModel& wg) {
    if (layout.size() < 3)
        throw ValidationError("oscillating-bound-state scan requires at least three "
                              "coupling points");
    if (!(gamma > 0.0)) throw ValidationError("gamma must be positive");
    if (!(tEnd >= 100.0 / gamma))
        throw ValidationError("tEnd must cover at least 100 / gamma");
    return oscillationReport(ddeEvolve(layout, gamma, omegaA, tEnd, dt, wg));
}

std::vector<double> fourierMagnitudes(const std::vector<double>& samples) {
    std::vector<Complex> x(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) x[i] = Complex(samples[i], 0.0);
    const auto spectrum = dftAnyLength(x);
    std::vector<double> out(samples.empty() ? 0 : samples.size() / 2 + 1);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::abs(spectrum[k]);
    return out;
}

}  // namespace giantatom
