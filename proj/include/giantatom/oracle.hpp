#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "giantatom/types.hpp"

namespace giantatom {

// ---------------------------------------------------------------------------
// Brute-force reference dynamics: the waveguide is discretized into M
// traveling modes on a ring of length L, the coupled atom-field system
// is restricted to the single-excitation sector, and the exact unitary
// evolution is computed with a Chebyshev expansion of the propagator.
// Decay rates, frequency shifts, and exchange couplings extracted from
// these runs validate every closed-form expression in the library
// without sharing any code with it.
// ---------------------------------------------------------------------------

struct OracleOptions {
    int modeCount = 4096;           // total modes, split between directions; even
    double windowWidthRate = 100.0; // retained bandwidth in units of gammaScale (>= 50)
};

// Retained traveling modes: a symmetric frequency window around the
// atomic frequency, half-offset so no mode is exactly resonant, with
// mode spacing gammaScale / 20 (which fixes the ring length).
struct ModeBasis {
    double ringLength = 0.0;       // L; photon revival occurs at L / v
    double centerFrequency = 0.0;
    double spacing = 0.0;          // frequency distance between neighbors
    std::vector<double> waveNumber;  // signed k_j (sign = direction)
    std::vector<double> frequency;   // v |k_j|

    int modeCount() const { return int(frequency.size()); }

    static ModeBasis centered(double omegaCenter, double gammaScale,
                              const WaveguideModel& wg = {},
                              const OracleOptions& options = {});
};

// Single-excitation Hamiltonian in the frame rotating at the window
// center: a few atomic amplitudes coupled to every mode, modes
// uncoupled among themselves (arrow structure, applied matrix-free).
struct DiscreteHamiltonian {
    ModeBasis basis;
    WaveguideModel waveguide;
    int atomCount = 0;
    std::vector<double> modeDetuning;   // omega_j - omega_c
    Eigen::MatrixXcd coupling;          // atomCount x modeCount

    // y = H x over amplitudes [atoms..., modes...].
    void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;
};

// Builds the rotating-frame Hamiltonian for two-level atoms resonant
// at the basis center; the mode coupling is calibrated so a single
// unit-strength point decays at gammaScale.
DiscreteHamiltonian buildHamiltonian(const std::vector<Layout>& atoms,
                                     const ModeBasis& basis, double gammaScale,
                                     const WaveguideModel& wg = {});

// Exact evolution from "atom 0 excited, field empty".
struct OracleRun {
    std::vector<double> t;
    // amplitude[atom][sample], in the frame rotating at the window center
    std::vector<std::vector<std::complex<double>>> amplitude;
    double revivalTime = 0.0;  // L / v; fits must stay below 0.4 of this
    double normDrift = 0.0;    // max |norm - 1| observed
};

OracleRun evolveOracle(const DiscreteHamiltonian& h, double tEnd, int samples);

// Least-squares fit of one atom's amplitude to exp(-(Gamma/2 + i Delta) t)
// over [tBegin, tEnd]: log-magnitude slope gives Gamma, unwrapped-phase
// slope gives Delta. Throws ConvergenceError when the log fit residual
// exceeds residualMax (window or basis inadequate) or the window
// violates the revival guard.
struct OracleRateFit {
    double gamma = 0.0;
    double delta = 0.0;
    double residual = 0.0;  // RMS of the log-magnitude fit residual
};

OracleRateFit extractRates(const OracleRun& run, int atomIndex, double tBegin, double tEnd,
                           double residualMax = 0.08);

// For two atoms exchanging their excitation coherently: the symmetric
// combination (c_a + c_b)/sqrt(2) accumulates phase -g t, so a linear
// fit of its unwrapped phase measures g with sign. Throws
// ConvergenceError on poor linearity.
double extractCoupling(const OracleRun& run, double tBegin, double tEnd,
                       double residualMax = 0.05);

// --- Conveniences owning basis construction, evolution, and window choice ---

// Decay rate and frequency shift of a single (multi-point) atom.
OracleRateFit oracleDecayFit(const Layout& layout, double omegaA, double gammaScale,
                             const WaveguideModel& wg = {}, const OracleOptions& options = {});

// Exchange coupling between two atoms at a relaxation-free point;
// gExpected sets the evolution horizon (about two swap periods).
double oracleExchangeFit(const Layout& a, const Layout& b, double omegaA, double gammaScale,
                         double gExpected, const WaveguideModel& wg = {},
                         const OracleOptions& options = {});

// Independent frequency-domain route to the same coupling: eliminate
// the modes at the atomic frequency (Schur complement of the arrow
// matrix); the real off-diagonal of the resulting 2x2 atom block is the
// exchange coupling.
double effectiveCoupling(const Layout& a, const Layout& b, double omegaA, double gammaScale,
                         const WaveguideModel& wg = {}, const OracleOptions& options = {});

// Rate/shift fits across mode counts (everything else fixed), for
// convergence reporting.
struct OracleConvergenceRow {
    int modeCount = 0;
    double gammaFit = 0.0;
    double deltaFit = 0.0;
};

std::vector<OracleConvergenceRow> oracleConvergenceTable(const Layout& layout, double omegaA,
                                                         double gammaScale,
                                                         const std::vector<int>& modeCounts,
                                                         const WaveguideModel& wg = {});

}  // namespace giantatom
