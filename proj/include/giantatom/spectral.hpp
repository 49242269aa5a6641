#pragma once

#include <complex>
#include <string>
#include <vector>

#include "giantatom/types.hpp"

namespace giantatom {

// ---------------------------------------------------------------------------
// Frequency-dependent response of a single multi-point atom.
//
// The waveguide sees the atom through the coupling factor
//   A_m(omega) = sum_k g_km exp(i omega x_k / v),
// where m labels the transition (m+1 -> m) and g_km is the strength of
// point k on that transition. Everything else in this module derives
// from |A|^2 (relaxation) and its Hilbert transform (frequency shift).
// ---------------------------------------------------------------------------

// A_m(omega). Requires omega > 0 and transition m present on every point.
std::complex<double> couplingFactor(const Layout& layout, int m, double omega,
                                    const WaveguideModel& wg = {});

// Relaxation rate of transition m+1 -> m at frequency omega:
//   Gamma = 4 pi J0 |A_m(omega)|^2.
// With the default calibration (4 pi J0 = 1) a single point of unit
// strength yields rate 1.
double relaxationRate(const Layout& layout, const AtomSpec& atom, int m, double omega,
                      const WaveguideModel& wg = {});

// Closed forms for N equidistant points of equal strength, as functions
// of the phase phi = omega * spacing / v, in units of the single-point
// rate gamma:
//   rate(phi)  = gamma (1 - cos N phi) / (1 - cos phi),   -> N^2 gamma at phi in 2 pi Z
//   shift(phi) = gamma [N sin phi - sin N phi] / (2 (1 - cos phi)),  -> 0 at phi in 2 pi Z
// Removable singularities are handled by the explicit limit values, and
// phases within 1e-8/N of an exact rate zero return exactly 0.
double relaxationRateEquidistant(int pointCount, double phi, double gamma);
double lambShiftEquidistant(int pointCount, double phi, double gamma);

// Frequency shift of transition m+1 -> m at frequency omega, evaluated
// in closed form (term-by-term Hilbert transform of the rate):
//   Delta = (kappa / 2) sum_{k != n} g_km g_nm sin(omega |x_k - x_n| / v).
// Reduces to lambShiftEquidistant on uniform equidistant layouts.
double lambShiftClosed(const Layout& layout, int m, double omega,
                       const WaveguideModel& wg = {});

// Shift of energy level `level` (the shift accumulated from the
// transition directly below it); level 0 is the reference and shifts by
// zero.
double levelShift(const Layout& layout, const AtomSpec& atom, int level,
                  const WaveguideModel& wg = {});

struct LambIntegralOptions {
    // Half-width of the integration window in units of the transition
    // frequency; must cover several multiples of it (>= 4).
    double windowMultiple = 40.0;
    // Number of window sizes averaged over one period of the slowest
    // spectral oscillation, damping the truncation tail.
    int windowCount = 8;
    // Settle tolerance handed to the principal-value quadrature.
    double quadratureTol = 1e-4;
};

// Frequency shift of transition m+1 -> m via direct principal-value
// integration of the rate spectrum:
//   Delta(omega_b) = (1 / 2 pi) PV integral [Gamma(omega) - Gamma_flat] / (omega_b - omega) domega
// over a finite window centered on the transition frequency omega_b,
// with the frequency-flat part (which integrates to zero over the full
// line) subtracted. Converges to lambShiftClosed; kept as an
// independent route for cross-validation.
// Throws ConvergenceError when the quadrature fails to settle.
double lambShiftIntegral(const Layout& layout, const AtomSpec& atom, int m,
                         const WaveguideModel& wg = {},
                         const LambIntegralOptions& options = {});

// Sampled response of one transition on a frequency grid.
struct SpectralResponse {
    std::vector<double> omega;
    std::vector<std::complex<double>> couplingFactor;
    std::vector<double> relaxationRate;
    std::vector<double> lambShift;
};

SpectralResponse sampleSpectralResponse(const Layout& layout, const AtomSpec& atom, int m,
                                        const std::vector<double>& omegaGrid,
                                        const WaveguideModel& wg = {});

// Frequency shift reconstructed from rate samples alone via the
// discrete Hilbert transform (odd-tap kernel, exact for sinusoids whose
// phase advance per sample stays below pi):
//   Delta_j = (1 / pi) sum_{(j-k) odd} [Gamma_k - mean(Gamma)] / (j - k).
// The outer quarter of the grid on each side is marked edge-affected;
// edgeWarning is set when the grid is too short to leave a usable
// interior.
struct KramersKronigResult {
    std::vector<double> omega;
    std::vector<double> lambShift;
    std::vector<unsigned char> edgeAffected;  // 1 = within the edge band
    bool edgeWarning = false;
};

KramersKronigResult lambFromKramersKronig(const std::vector<double>& omega,
                                          const std::vector<double>& gamma);
KramersKronigResult lambFromKramersKronig(const SpectralResponse& response);

// Ratio of the relaxation rate to the inverse travel time across the
// multi-point structure; small values justify the memoryless
// (delay-free) treatment used by the master-equation modules.
struct MarkovianValidity {
    double ratio = 0.0;
    bool valid = true;
    std::string note;
};

// For an equidistant wavelength-scale layout of N points with physical
// relaxation rate gammaRate: ratio = gammaRate * 2 pi N / omega_{1,0}.
// A single point has no internal delay and reports ratio 0.
MarkovianValidity markovianValidity(const Layout& layout, const AtomSpec& atom,
                                    double gammaRate);

}  // namespace giantatom
