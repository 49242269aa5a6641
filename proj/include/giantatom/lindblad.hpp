#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "giantatom/multiatom.hpp"
#include "giantatom/types.hpp"

namespace giantatom {

// ---------------------------------------------------------------------------
// Master-equation dynamics for driven multilevel atoms and small
// collective ensembles:
//   d rho / dt = -i [H, rho]
//                + sum_{ij} G_ij (X_i rho X_j^+ - 1/2 {X_j^+ X_i, rho})
// with a positive-semidefinite rate matrix G (a plain jump list is the
// diagonal-G special case).
// ---------------------------------------------------------------------------

// Coherent drive on one transition, treated in its rotating frame
// under the rotating-wave approximation.
struct DriveTerm {
    double strength = 0.0;   // angular Rabi frequency
    int lower = 0;           // driven transition |lower> <-> |upper>
    int upper = 2;
    double frequency = 0.0;  // drive angular frequency
};

struct LindbladSystem {
    Eigen::MatrixXcd hamiltonian;        // Hermitian, dim x dim
    std::vector<Eigen::MatrixXcd> jumps; // X_i, each dim x dim
    Eigen::MatrixXd rateMatrix;          // G, jumps.size() square, PSD

    int dim() const { return int(hamiltonian.rows()); }

    // Builds an empty-dissipator system, validating Hermiticity (1e-12).
    static LindbladSystem withHamiltonian(Eigen::MatrixXcd h);

    // Appends an independent decay channel (diagonal G entry); rate >= 0.
    void addJump(Eigen::MatrixXcd op, double rate);

    // Replaces the channels with a correlated set; G must be symmetric
    // PSD with matching dimension.
    void setCorrelatedJumps(std::vector<Eigen::MatrixXcd> ops, Eigen::MatrixXd rates);

    // Right-hand side of the master equation for one state.
    Eigen::MatrixXcd derivative(const Eigen::MatrixXcd& rho) const;
};

// D[X] rho = X rho X^+ - 1/2 {X^+ X, rho}; traceless by construction.
Eigen::MatrixXcd dissipator(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& rho);

// Multilevel ladder atom coupled through `layout`: level energies get
// their waveguide shifts, each transition m+1 -> m relaxes at the rate
// evaluated at its own transition frequency, and an optional resonant
// or detuned drive is folded in by moving to its rotating frame
// (level m rotates at (m - lower) / (upper - lower) * frequency).
// Transition coupling strengths follow `scaling`: Bosonic multiplies
// the stored base strengths by sqrt(m+1) on transition m (harmonic
// ladder matrix elements), Flat reuses them unchanged, Explicit reads
// the per-transition strengths stored on the coupling points.
LindbladSystem buildGiantAtomSystem(const Layout& layout, const AtomSpec& atom,
                                    const std::optional<DriveTerm>& drive = std::nullopt,
                                    CouplingScaling scaling = CouplingScaling::Bosonic,
                                    const WaveguideModel& wg = {});

// Two-level atoms sharing the waveguide at a common resonance: in the
// frame rotating at omega, H carries the individual shifts and the
// pairwise exchange, and the correlated decay enters through the
// collective rate matrix. Hilbert space dimension 2^n (n <= 12).
LindbladSystem buildCollectiveSystem(const std::vector<Layout>& atoms, double omega,
                                     double gamma, const WaveguideModel& wg = {});

struct DensityTrajectory {
    std::vector<double> t;
    std::vector<Eigen::MatrixXcd> rho;
    std::vector<Eigen::VectorXd> populations;  // real diagonal per sample
    double maxTraceError = 0.0;                // max |tr rho - 1| seen
};

// Fixed-step classical 4th-order integration; stores every
// `storeEvery`-th step (and always the final one). Throws when the
// trace drifts past 1e-9 or the state stops being finite, advising a
// smaller dt.
DensityTrajectory evolveDensity(const LindbladSystem& system, const Eigen::MatrixXcd& rho0,
                                double tEnd, double dt, int storeEvery = 1);

// Max-norm difference at tEnd between a dt run and a dt/2 run
// (step-halving self-check for integration error).
double stepHalvingError(const LindbladSystem& system, const Eigen::MatrixXcd& rho0,
                        double tEnd, double dt);

// Unique stationary state via a dense linear solve on the vectorized
// generator (one row replaced by the trace constraint), verified to
// residual 1e-10 and checked for uniqueness; dimension <= 64.
Eigen::MatrixXcd steadyState(const LindbladSystem& system);

// Steady-state scan of a three-level equidistant-layout atom versus
// lattice phase, driving |0> <-> |2> at the shifted resonance. For
// each phase the drive grid is scanned and the row keeps the drive
// that maximizes the population margin pop1 - pop0.
struct InversionRow {
    double phi = 0.0;
    double gamma10 = 0.0;
    double gamma21 = 0.0;
    double pop0 = 0.0;
    double pop1 = 0.0;
    double pop2 = 0.0;
    bool inverted = false;
    double driveStrength = 0.0;  // the drive the populations belong to
};

std::vector<InversionRow> inversionScan(int pointCount, double anharmonicity,
                                        const std::vector<double>& driveGrid,
                                        const std::vector<double>& phiGrid,
                                        CouplingScaling scaling = CouplingScaling::Bosonic);

}  // namespace giantatom
