#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace giantatom {

// Thrown for invalid inputs / malformed files (CLI exit code 2).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when an iterative numerical procedure fails to meet its
// tolerance (CLI exit code 3).
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr double kPi = 3.14159265358979323846;

// 1D bidirectional waveguide with linear dispersion and a constant
// density of states. The rate prefactor for a coupling amplitude g is
// 4*pi*J0*g^2; the default J0 makes a unit-strength point decay at
// rate 1.
struct WaveguideModel {
  double v = 1.0;                   // propagation speed
  double J0 = 1.0 / (4.0 * kPi);    // density of states (constant)

  WaveguideModel() = default;
  WaveguideModel(double v_, double J0_);

  // 4*pi*J0: multiplies g_k*g_n in every rate formula.
  double ratePrefactor() const { return 4.0 * kPi * J0; }
};

// One connection between atom and waveguide: a position plus one real
// coupling amplitude per ladder transition m -> m+1.
struct CouplingPoint {
  double x = 0.0;
  std::vector<double> strengths;    // index m = transition m+1 -> m

  double strength(std::size_t m) const;
};

// How per-transition amplitudes are generated from a base amplitude.
enum class CouplingScaling {
  Explicit,   // caller supplies every g_{k,m}
  Bosonic,    // g_{k,m} = sqrt(m+1) * g_{k,0} (transmon-like ladder)
  Flat,       // g_{k,m} = g_{k,0}
};

// A giant atom's set of coupling points, sorted by position.
struct Layout {
  std::vector<CouplingPoint> points;
  std::string label;

  Layout() = default;
  explicit Layout(std::vector<CouplingPoint> pts, std::string label_ = "");
  Layout(std::initializer_list<CouplingPoint> pts, std::string label_ = "");

  std::size_t size() const { return points.size(); }
  double span() const;              // distance between outermost points
  double minSpacing() const;        // smallest nonzero gap (0 if none)
};

// Equidistant points {0, d, ..., (N-1)d} with one uniform strength.
Layout equidistantLayout(std::size_t N, double spacing, double strength = 1.0);

// Multilevel atom given by its level energies (strictly increasing).
struct AtomSpec {
  std::vector<double> levels;       // omega_m, m = 0..M-1

  AtomSpec() = default;
  explicit AtomSpec(std::vector<double> levels_);

  // Uniform ladder with optional anharmonicity:
  // omega_m = m*omega10 + anharm*m*(m-1)/2, so the m+1->m transition
  // frequency is omega10 + m*anharm.
  static AtomSpec ladder(std::size_t M, double omega10, double anharm = 0.0);

  std::size_t numLevels() const { return levels.size(); }
  double transition(std::size_t upper, std::size_t lower) const;
  double omega10() const { return transition(1, 0); }
};

// Interleaving pattern of two giant atoms' coupling points.
enum class Topology { Small, Separate, Braided, Nested, Unclassified };

std::string topologyName(Topology t);

// Classify from the coupling-point ordering: aabb -> Separate,
// abab -> Braided, abba -> Nested; two single-point atoms -> Small.
// Only defined for <=2 points per atom (else Unclassified).
// Coincident coordinates across the two atoms are ambiguous -> error.
Topology classifyTopology(const Layout& a, const Layout& b);

// Wavelength of the emission resonant with the first transition.
double wavelength(const AtomSpec& atom, const WaveguideModel& wg);

// Uniformly spaced grid helpers (used by CLI ranges and scans).
std::vector<double> linspace(double start, double stop, std::size_t count);

}  // namespace giantatom
