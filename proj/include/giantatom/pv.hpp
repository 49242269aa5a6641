#pragma once

#include <functional>

namespace giantatom {

// Cauchy principal value of  integral_a^b f(x)/(x - pole) dx  for f
// smooth on [a, b] and a < pole < b.
//
// Method: exclude a symmetric window of half-width eps around the pole,
// integrate the rest with a composite midpoint rule (refined until
// stable), then extrapolate eps -> 0 with Richardson steps (the
// excluded part is 2 f'(pole) eps + O(eps^3), so one 2:1 combination
// cancels the leading term).
//
// Throws ConvergenceError if the extrapolation does not settle to
// relTol within the refinement budget.
double principalValue(const std::function<double(double)>& f, double a, double b,
                      double pole, double relTol = 1e-8);

}  // namespace giantatom
