#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "giantatom/types.hpp"

namespace giantatom {

// ---------------------------------------------------------------------------
// Non-Markovian single-excitation dynamics of one multi-point atom when
// the travel time between coupling points is not negligible. The atomic
// amplitude obeys a linear delay differential equation,
//   c'(t) = -(gamma/2) sum_{k,n} (s_k s_n / s_ref^2)
//             e^{i omega_a tau_kn} c(t - tau_kn),
// with tau_kn = |x_k - x_n| / v, c(0) = 1 and c(t<0) = 0. gamma is the
// relaxation rate one coupling point of reference strength would have
// on its own; s_ref is the first point's strength.
// ---------------------------------------------------------------------------

// The delay structure of a layout: pairwise travel times with their
// accumulated complex weights, grouped by equal delay.
struct DelayKernel {
    struct Term {
        double delay = 0.0;               // tau >= 0
        std::complex<double> weight;      // (gamma/2) sum of s_k s_n e^{i omega_a tau}
    };
    std::vector<Term> terms;              // sorted by delay; delay 0 first
    double minPositiveDelay = 0.0;        // 0 when every pair coincides
    double maxDelay = 0.0;

    static DelayKernel build(const Layout& layout, double gamma, double omegaA,
                             const WaveguideModel& wg = {});

    // -i delta + sum_tau w_tau e^{i delta tau}: the inverse of the
    // weak-probe transfer function at detuning delta from omega_a.
    std::complex<double> responseDenominator(double detuning) const;
};

// One integrated trajectory: uniform time grid, complex amplitude, and
// the one-sided derivatives that make cubic dense output possible.
// `energy` stays empty until a caller fills it from totalEnergy.
struct AmplitudeTrajectory {
    std::vector<double> t;
    std::vector<std::complex<double>> c;
    std::vector<std::complex<double>> derivRight;  // d+ c at each node
    std::vector<std::complex<double>> derivLeft;   // d- c at each node
    std::vector<double> energy;

    double dt = 0.0;
    double gamma = 0.0;
    double omegaA = 0.0;
    double waveSpeed = 1.0;

    std::size_t size() const { return t.size(); }
    double tEnd() const { return t.empty() ? 0.0 : t.back(); }
    double population(std::size_t i) const { return std::norm(c[i]); }
};

// Fixed-step 4th-order integration of the delay equation with cubic
// Hermite history interpolation (delays landing on the grid within
// 1e-9 of a step are read off directly). The run ends at the multiple
// of dt nearest tEnd. Throws when dt exceeds a tenth of the smallest
// nonzero delay.
AmplitudeTrajectory ddeEvolve(const Layout& layout, double gamma, double omegaA,
                              double tEnd, double dt, const WaveguideModel& wg = {});

// Dense output: cubic Hermite read of the stored trajectory at any
// t <= tEnd (0 for t < 0).
std::complex<double> amplitudeAt(const AmplitudeTrajectory& traj, double t);

// Total energy on the trajectory grid: excitation plus the field still
// in transit between the outermost coupling points, obtained as 1 minus
// the accumulated outward flux at the two edges. E(0) = 1; the series
// is non-increasing and stays within [0, 1]. The segment between the
// outermost points is taken closed; the endpoints carry no measure.
// Requires the trajectory to cover at least one end-to-end traversal.
std::vector<double> totalEnergy(const AmplitudeTrajectory& traj, const Layout& layout);

// Same quantity at one instant, from the spatial integral of the
// retarded emission amplitudes over `spatialSamples` points between
// the outermost coupling points (t is snapped to the trajectory grid).
// Free of the cumulative quadrature drift of the series version, so
// preferred for late-time log-log fits.
double totalEnergyAt(const AmplitudeTrajectory& traj, const Layout& layout, double t,
                     std::size_t spatialSamples = 3001);

// |chi(delta)|^2 for a weak probe detuned by delta from the atomic
// frequency, with the detected peak count.
struct ProbeSpectrum {
    std::vector<double> detuning;
    std::vector<double> response;
    int peakCount = 0;
};

ProbeSpectrum probeResponse(const Layout& layout, double gamma, double omegaA,
                            const std::vector<double>& detuningGrid,
                            const WaveguideModel& wg = {});

// Interior local maxima whose prominence (height above the deepest
// valley separating them from any higher maximum) exceeds
// relativeProminence of the global maximum; at least 1 for nonempty
// data with an interior maximum structure.
int countSpectralPeaks(const std::vector<double>& y, double relativeProminence = 0.01);

// Peak count of the equidistant family versus the delay-bandwidth
// product. The family: `pointCount` points, unit adjacent delay, a
// constructive resonance, total Markovian rate Gamma = N^2 gamma, so
// gammaTau is Gamma times the adjacent travel time. `border` is the
// midpoint of the grid interval where the count first changes from one
// to two (absent when it never does).
struct ThresholdScanResult {
    std::vector<double> gammaTau;
    std::vector<int> peakCount;
    std::optional<double> border;
};

ThresholdScanResult thresholdScan(int pointCount, const std::vector<double>& gammaTauGrid,
                                  std::size_t gridSize = 8001, double spanFactor = 4.0);

// Persistence analysis of the last quarter of a trajectory: population
// floor, dominant oscillation away from the slow drift (frequencies of
// at least six window fundamentals), and the late/early amplitude
// ratio that separates a sustained oscillation from a decaying one.
struct OscillationReport {
    bool persistent = false;
    double populationFloor = 0.0;
    double amplitude = 0.0;        // dominant oscillation amplitude in |c|^2
    double frequency = 0.0;        // its angular frequency
    double halfWindowRatio = 0.0;  // amplitude(second half) / amplitude(first half)
};

OscillationReport oscillationReport(const AmplitudeTrajectory& traj);

// Runs the delay equation and applies the persistence gates. Requires
// at least three coupling points (two can trap no oscillating
// excitation), gamma > 0, and tEnd >= 100 / gamma.
OscillationReport oscillatingBoundStateScan(const Layout& layout, double gamma,
                                            double omegaA, double tEnd, double dt,
                                            const WaveguideModel& wg = {});

// One-sided discrete Fourier magnitudes |sum_j y_j e^{-2 pi i j k / n}|
// for k = 0 .. n/2, any sample count (chirp transform under the hood).
std::vector<double> fourierMagnitudes(const std::vector<double>& samples);

}  // namespace giantatom
