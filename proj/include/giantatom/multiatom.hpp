#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "giantatom/types.hpp"

namespace giantatom {

// ---------------------------------------------------------------------------
// Waveguide-mediated couplings between several two-level multi-point
// atoms, all resonant at a common frequency: each atom keeps its own
// relaxation rate and frequency shift, every pair acquires a coherent
// exchange coupling g and a collective (correlated-decay) rate.
//
// With per-point strengths s and pairwise phases omega |x - x'| / v:
//   Gamma_j   = gamma |sum_k s_k exp(i omega x_k / v)|^2
//   Gamma_jk  = gamma sum_{k,n} s_k s_n cos(omega (x_k - x_n) / v)
//   g_jk      = (gamma / 2) sum_{k,n} s_k s_n sin(omega |x_k - x_n| / v)
// where gamma is the relaxation rate of a single unit-strength point.
// These forms are cross-validated against a discretized-mode
// simulation in the test suite before anything downstream trusts them.
// ---------------------------------------------------------------------------

struct MultiAtomCoefficients {
    std::vector<double> shiftedFrequency;  // bare frequency + intra-atom shift
    std::vector<double> individualRate;    // Gamma_j
    Eigen::MatrixXd collectiveRate;        // symmetric; (j,j) = Gamma_j
    Eigen::MatrixXd exchange;              // g_jk, symmetric, zero diagonal

    int atomCount() const { return int(individualRate.size()); }

    // Two-atom conveniences.
    double exchangeG() const;
    double collectivePair() const;
};

// Coefficients for one pair of atoms evaluated at their common
// resonance frequency. gamma is the single-point unit-strength rate.
MultiAtomCoefficients twoAtomCoefficients(const Layout& a, const Layout& b, double omega,
                                          double gamma, const WaveguideModel& wg = {});

// Pairwise generalization; at most 12 atoms (the downstream density
// matrix grows as 2^n).
MultiAtomCoefficients manyAtomCoefficients(const std::vector<Layout>& atoms, double omega,
                                           double gamma, const WaveguideModel& wg = {});

// Canonical two-atom coupling-point patterns on a unit lattice:
//   Small -> a={0}, b={1};       Separate -> a={0,1}, b={2,3};
//   Braided -> a={0,2}, b={1,3}; Nested -> a={0,3}, b={1,2}.
// Unit strengths. The lattice phase phi enters by evaluating the
// coefficients at omega = phi (v = 1).
std::pair<Layout, Layout> canonicalTopologyPair(Topology t);

// Coefficients of a lattice pattern as a function of the lattice phase:
// the two layouts are reduced to their point ordering (rank order of
// all coordinates, cross-atom ties rejected) on a uniform lattice, and
// neighboring lattice sites are phi radians apart at the evaluation
// frequency.
MultiAtomCoefficients coefficientsAtLatticePhase(const Layout& a, const Layout& b,
                                                 double phi, double gamma);

// Phases where both atoms and their collective channel stop relaxing
// while the coherent exchange g may survive.
struct DecoherenceFreePoint {
    double phi = 0.0;
    double exchangeG = 0.0;
};

// Scans the lattice phase grid for minima of
//   max(Gamma_a, Gamma_b, |Gamma_coll|),
// refines each bracketed minimum to 1e-10 in phi, and keeps those
// below 1e-8 * gamma; points closer than 1e-6 rad are merged. The grid
// must be fine enough to bracket every zero. Grid phases must be
// positive.
std::vector<DecoherenceFreePoint> decoherenceFreePoints(const Layout& a, const Layout& b,
                                                        const std::vector<double>& phiGrid,
                                                        double gamma);

}  // namespace giantatom
