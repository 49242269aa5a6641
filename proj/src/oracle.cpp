#include "giantatom/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>

namespace giantatom {
namespace {

using Complex = std::complex<double>;

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residualRms = 0.0;
};

LinearFit fitLine(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        acc += r * r;
    }
    fit.residualRms = std::sqrt(acc / double(n));
    return fit;
}

// Sample indices of run.t inside [tBegin, tEnd].
std::vector<std::size_t> windowIndices(const OracleRun& run, double tBegin, double tEnd) {
    if (!(tEnd > tBegin)) throw ValidationError("fit window must have positive length");
    if (tEnd > 0.4 * run.revivalTime)
        throw ValidationError(
            "fit window reaches past 0.4 of the ring revival time; enlarge the basis");
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < run.t.size(); ++i)
        if (run.t[i] >= tBegin && run.t[i] <= tEnd) idx.push_back(i);
    if (idx.size() < 8)
        throw ValidationError("fit window contains fewer than 8 samples");
    return idx;
}

std::vector<double> unwrappedPhase(const std::vector<Complex>& c,
                                   const std::vector<std::size_t>& idx) {
    std::vector<double> phase(idx.size());
    double prev = std::arg(c[idx[0]]);
    double offset = 0.0;
    phase[0] = prev;
    for (std::size_t i = 1; i < idx.size(); ++i) {
        const double raw = std::arg(c[idx[i]]);
        double d = raw - prev;
        while (d > kPi) d -= 2.0 * kPi;
        while (d < -kPi) d += 2.0 * kPi;
        offset += d;
        phase[i] = phase[0] + offset;
        prev = raw;
    }
    return phase;
}

}  // namespace

ModeBasis ModeBasis::centered(double omegaCenter, double gammaScale,
                              const WaveguideModel& wg, const OracleOptions& options) {
    if (!(omegaCenter > 0.0)) throw ValidationError("mode window center must be positive");
    if (!(gammaScale > 0.0)) throw ValidationError("rate scale must be positive");
    if (options.modeCount < 64 || options.modeCount % 2 != 0)
        throw ValidationError("mode count must be even and at least 64");
    if (!(options.windowWidthRate >= 50.0))
        throw ValidationError("mode window too narrow: need at least 50 linewidths");

    const double width = options.windowWidthRate * gammaScale;
    if (!(omegaCenter - 0.5 * width > 0.0))
        throw ValidationError(
            "mode window reaches non-positive frequencies; raise the carrier or narrow "
            "the window");

    ModeBasis basis;
    const int perDirection = options.modeCount / 2;
    basis.spacing = width / double(perDirection);
    basis.ringLength = 2.0 * kPi * wg.v / basis.spacing;
    basis.centerFrequency = omegaCenter;
    basis.waveNumber.reserve(options.modeCount);
    basis.frequency.reserve(options.modeCount);
    // Half-offset grid: no mode sits exactly on the carrier, and the
    // detunings come in exact +- pairs.
    for (int dir = 0; dir < 2; ++dir) {
        const double sign = dir == 0 ? 1.0 : -1.0;
        for (int m = -perDirection / 2; m < perDirection / 2; ++m) {
            const double omega = omegaCenter + (double(m) + 0.5) * basis.spacing;
            basis.frequency.push_back(omega);
            basis.waveNumber.push_back(sign * omega / wg.v);
        }
    }
    return basis;
}

void DiscreteHamiltonian::apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
    const int m = int(modeDetuning.size());
    y.resize(atomCount + m);
    y.head(atomCount).noalias() = coupling * x.tail(m);
    y.tail(m).noalias() = coupling.adjoint() * x.head(atomCount);
    for (int j = 0; j < m; ++j) y[atomCount + j] += modeDetuning[j] * x[atomCount + j];
}

DiscreteHamiltonian buildHamiltonian(const std::vector<Layout>& atoms,
                                     const ModeBasis& basis, double gammaScale,
                                     const WaveguideModel& wg) {
    if (atoms.empty()) throw ValidationError("need at least one atom");
    if (atoms.size() > 12) throw ValidationError("more than 12 atoms unsupported");
    if (basis.frequency.empty()) throw ValidationError("empty mode basis");
    if (!(gammaScale > 0.0)) throw ValidationError("rate scale must be positive");

    DiscreteHamiltonian h;
    h.basis = basis;
    h.waveguide = wg;
    h.atomCount = int(atoms.size());
    const int m = basis.modeCount();
    h.modeDetuning.resize(m);
    for (int j = 0; j < m; ++j)
        h.modeDetuning[j] = basis.frequency[j] - basis.centerFrequency;

    // Per-direction mode coupling calibrated so one unit-strength point
    // relaxes at gammaScale: g = sqrt(gammaScale v / (2 L)).
    const double g0 = std::sqrt(gammaScale * wg.v / (2.0 * basis.ringLength));
    h.coupling.resize(h.atomCount, m);
    for (int i = 0; i < h.atomCount; ++i) {
        for (int j = 0; j < m; ++j) {
            Complex acc{0.0, 0.0};
            for (const auto& p : atoms[i].points) {
                const double phase = basis.waveNumber[j] * p.x;
                acc += p.strength(0) * Complex(std::cos(phase), std::sin(phase));
            }
            h.coupling(i, j) = g0 * acc;
        }
    }
    return h;
}

OracleRun evolveOracle(const DiscreteHamiltonian& h, double tEnd, int samples) {
    if (!(tEnd > 0.0)) throw ValidationError("evolution horizon must be positive");
    if (samples < 2) throw ValidationError("need at least 2 samples");
    const int m = h.basis.modeCount();
    const int dim = h.atomCount + m;

    // Spectral bounds for the Chebyshev scaling: mode detunings plus
    // the coupling block's Frobenius norm as an operator-norm bound.
    double dMin = 0.0, dMax = 0.0;  // include the atom diagonal (zero)
    for (double d : h.modeDetuning) {
        dMin = std::min(dMin, d);
        dMax = std::max(dMax, d);
    }
    const double cNorm = h.coupling.norm();
    const double lo = dMin - cNorm, hi = dMax + cNorm;
    const double a = 0.5 * (hi - lo) * (1.0 + 1e-12) + 1e-300;
    const double b = 0.5 * (hi + lo);

    const double dt = tEnd / double(samples);
    const double z = a * dt;
    // Chebyshev order: expansion converges superexponentially past z.
    int order = int(z) + 20;
    while (std::abs(std::cyl_bessel_j(double(order), z)) > 1e-17) ++order;

    OracleRun run;
    run.revivalTime = h.basis.ringLength / h.waveguide.v;
    run.t.resize(samples + 1);
    run.amplitude.assign(h.atomCount, std::vector<Complex>(samples + 1));

    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    psi[0] = Complex(1.0, 0.0);

    std::vector<double> bessel(order + 1);
    for (int k = 0; k <= order; ++k) bessel[k] = std::cyl_bessel_j(double(k), z);
    const Complex stepPhase = std::exp(Complex(0.0, -b * dt));

    Eigen::VectorXcd phi0(dim), phi1(dim), phi2(dim), acc(dim), tmp(dim);
    const auto applyScaled = [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
        h.apply(x, tmp);
        y = (tmp - b * x) / a;
    };

    run.t[0] = 0.0;
    for (int i = 0; i < h.atomCount; ++i) run.amplitude[i][0] = psi[i];
    run.normDrift = 0.0;

    for (int s = 1; s <= samples; ++s) {
        // exp(-i H dt) psi = e^{-i b dt} sum_k c_k T_k(Hs) psi,
        // c_k = (2 - delta_k0) (-i)^k J_k(a dt).
        phi0 = psi;
        applyScaled(phi0, phi1);
        acc = bessel[0] * phi0;
        Complex ik(0.0, -1.0);  // (-i)^k
        acc += 2.0 * bessel[1] * ik * phi1;
        for (int k = 2; k <= order; ++k) {
            applyScaled(phi1, phi2);
            phi2 = 2.0 * phi2 - phi0;
            ik *= Complex(0.0, -1.0);
            acc += 2.0 * bessel[k] * ik * phi2;
            phi0.swap(phi1);
            phi1.swap(phi2);
        }
        psi = stepPhase * acc;
        run.t[s] = dt * double(s);
        for (int i = 0; i < h.atomCount; ++i) run.amplitude[i][s] = psi[i];
        run.normDrift = std::max(run.normDrift, std::abs(psi.norm() - 1.0));
    }
    return run;
}

OracleRateFit extractRates(const OracleRun& run, int atomIndex, double tBegin, double tEnd,
                           double residualMax) {
    if (atomIndex < 0 || atomIndex >= int(run.amplitude.size()))
        throw ValidationError("atom index out of range");
    const auto& c = run.amplitude[atomIndex];
    auto idx = windowIndices(run, tBegin, tEnd);
    // Drop samples at the numerical noise floor.
    idx.erase(std::remove_if(idx.begin(), idx.end(),
                             [&](std::size_t i) { return std::abs(c[i]) < 1e-12; }),
              idx.end());
    if (idx.size() < 8)
        throw ConvergenceError("amplitude at noise floor across the fit window");

    std::vector<double> ts(idx.size()), logMag(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        ts[i] = run.t[idx[i]];
        logMag[i] = std::log(std::norm(c[idx[i]]));
    }
    const LinearFit mag = fitLine(ts, logMag);
    if (mag.residualRms > residualMax) {
        std::ostringstream msg;
        msg << "decay fit residual " << mag.residualRms << " exceeds " << residualMax
            << " (window or basis inadequate)";
        throw ConvergenceError(msg.str());
    }
    const LinearFit ph = fitLine(ts, unwrappedPhase(c, idx));
    OracleRateFit fit;
    fit.gamma = -mag.slope;
    fit.delta = -ph.slope;
    fit.residual = mag.residualRms;
    return fit;
}

double extractCoupling(const OracleRun& run, double tBegin, double tEnd,
                       double residualMax) {
    if (run.amplitude.size() != 2)
        throw ValidationError("coupling extraction needs exactly two atoms");
    const auto idx = windowIndices(run, tBegin, tEnd);
    std::vector<Complex> sym(run.t.size());
    for (std::size_t i = 0; i < run.t.size(); ++i)
        sym[i] = (run.amplitude[0][i] + run.amplitude[1][i]) / std::sqrt(2.0);
    for (std::size_t i : idx)
        if (std::abs(sym[i]) < 1e-10)
            throw ConvergenceError("symmetric amplitude vanished inside the fit window");
    std::vector<double> ts(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) ts[i] = run.t[idx[i]];
    const LinearFit ph = fitLine(ts, unwrappedPhase(sym, idx));
    if (ph.residualRms > residualMax) {
        std::ostringstream msg;
        msg << "phase fit residual " << ph.residualRms << " rad exceeds " << residualMax
            << " (coupling not coherent over the window)";
        throw ConvergenceError(msg.str());
    }
    return -ph.slope;
}

OracleRateFit oracleDecayFit(const Layout& layout, double omegaA, double gammaScale,
                             const WaveguideModel& wg, const OracleOptions& options) {
    const ModeBasis basis = ModeBasis::centered(omegaA, gammaScale, wg, options);
    const DiscreteHamiltonian h = buildHamiltonian({layout}, basis, gammaScale, wg);
    const double revival = basis.ringLength / wg.v;
    const double tEnd = std::min(12.0 / gammaScale, 0.38 * revival);
    const OracleRun run = evolveOracle(h, tEnd, 1200);

    // Data-driven fit window: from after the retardation transient to
    // where the population reaches 1e-6 (or the horizon).
    const auto& c = run.amplitude[0];
    double tFloor = tEnd;
    for (std::size_t i = 0; i < run.t.size(); ++i) {
        if (std::norm(c[i]) < 1e-6) {
            tFloor = run.t[i];
            break;
        }
    }
    const double transit = layout.span() / wg.v;
    const double tLo = std::min(0.05 * tFloor + 2.0 * transit, 0.5 * tFloor);
    return extractRates(run, 0, tLo, tFloor);
}

double oracleExchangeFit(const Layout& a, const Layout& b, double omegaA, double gammaScale,
                         double gExpected, const WaveguideModel& wg,
                         const OracleOptions& options) {
    if (!(gExpected != 0.0)) throw ValidationError("need a nonzero expected coupling scale");
    const ModeBasis basis = ModeBasis::centered(omegaA, gammaScale, wg, options);
    const DiscreteHamiltonian h = buildHamiltonian({a, b}, basis, gammaScale, wg);
    const double revival = basis.ringLength / wg.v;
    // Half a swap period carries ~1.5 rad of symmetric-state phase,
    // plenty for a slope fit.
    const double tEnd = std::min(0.55 * kPi / std::abs(gExpected), 0.38 * revival);
    const OracleRun run = evolveOracle(h, tEnd, 900);
    const double transit = std::max(a.span(), b.span()) / wg.v;
    return extractCoupling(run, 0.03 * tEnd + 2.0 * transit, tEnd);
}

double effectiveCoupling(const Layout& a, const Layout& b, double omegaA, double gammaScale,
                         const WaveguideModel& wg, const OracleOptions& options) {
    const ModeBasis basis = ModeBasis::centered(omegaA, gammaScale, wg, options);
    const DiscreteHamiltonian h = buildHamiltonian({a, b}, basis, gammaScale, wg);
    // Schur complement of the mode block at the carrier: the modes are
    // diagonal, so eliminating them folds -C_a C_b^* / detuning into
    // the atom block; its real part is the coherent exchange.
    Complex acc{0.0, 0.0};
    for (int j = 0; j < basis.modeCount(); ++j)
        acc -= h.coupling(0, j) * std::conj(h.coupling(1, j)) / h.modeDetuning[j];
    return acc.real();
}

std::vector<OracleConvergenceRow> oracleConvergenceTable(const Layout& layout, double omegaA,
                                                         double gammaScale,
                                                         const std::vector<int>& modeCounts,
                                                         const WaveguideModel& wg) {
    std::vector<OracleConvergenceRow> rows;
    for (int m : modeCounts) {
        OracleOptions options;
        options.modeCount = m;
        const OracleRateFit fit = oracleDecayFit(layout, omegaA, gammaScale, wg, options);
        rows.push_back({m, fit.gamma, fit.delta});
    }
    return rows;
}

}  // namespace giantatom
