#include "giantatom/lindblad.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include "giantatom/parallel.hpp"
#include "giantatom/spectral.hpp"

namespace giantatom {
namespace {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;

void requireSquare(const MatrixXcd& m, const char* what) {
    if (m.rows() != m.cols()) {
        std::ostringstream msg;
        msg << what << " must be square";
        throw ValidationError(msg.str());
    }
}

// Layout with one strength per point: the base strengths rescaled for
// transition m under the chosen convention.
Layout scaledLayout(const Layout& layout, int m, CouplingScaling scaling) {
    std::vector<CouplingPoint> pts;
    pts.reserve(layout.size());
    for (const auto& p : layout.points) {
        double s = 0.0;
        switch (scaling) {
            case CouplingScaling::Explicit: s = p.strength(m); break;
            case CouplingScaling::Bosonic: s = std::sqrt(double(m + 1)) * p.strength(0); break;
            case CouplingScaling::Flat: s = p.strength(0); break;
        }
        pts.push_back({p.x, {s}});
    }
    return Layout(pts, layout.label);
}

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
    MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Vectorized generator with columns stacked: vec(A rho B) =
// (B^T kron A) vec(rho).
MatrixXcd liouvillianMatrix(const LindbladSystem& sys) {
    const int d = sys.dim();
    const MatrixXcd eye = MatrixXcd::Identity(d, d);
    const Complex iu(0.0, 1.0);
    MatrixXcd l = -iu * (kron(eye, sys.hamiltonian) -
                         kron(sys.hamiltonian.transpose(), eye));
    for (std::size_t i = 0; i < sys.jumps.size(); ++i) {
        for (std::size_t j = 0; j < sys.jumps.size(); ++j) {
            const double g = sys.rateMatrix(Eigen::Index(i), Eigen::Index(j));
            if (g == 0.0) continue;
            const MatrixXcd cross = sys.jumps[j].adjoint() * sys.jumps[i];
            l += g * (kron(sys.jumps[j].conjugate(), sys.jumps[i]) -
                      0.5 * kron(eye, cross) - 0.5 * kron(cross.transpose(), eye));
        }
    }
    return l;
}

}  // namespace

LindbladSystem LindbladSystem::withHamiltonian(MatrixXcd h) {
    requireSquare(h, "Hamiltonian");
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw ValidationError("Hamiltonian must be Hermitian to 1e-12");
    LindbladSystem sys;
    sys.hamiltonian = std::move(h);
    sys.rateMatrix.resize(0, 0);
    return sys;
}

void LindbladSystem::addJump(MatrixXcd op, double rate) {
    requireSquare(op, "jump operator");
    if (op.rows() != hamiltonian.rows())
        throw ValidationError("jump operator dimension mismatch");
    if (!(rate >= 0.0)) throw ValidationError("decay rate must be >= 0");
    jumps.push_back(std::move(op));
    const Eigen::Index n = Eigen::Index(jumps.size());
    MatrixXd grown = MatrixXd::Zero(n, n);
    if (rateMatrix.size() > 0) grown.topLeftCorner(n - 1, n - 1) = rateMatrix;
    grown(n - 1, n - 1) = rate;
    rateMatrix = std::move(grown);
}

void LindbladSystem::setCorrelatedJumps(std::vector<MatrixXcd> ops, MatrixXd rates) {
    if (rates.rows() != rates.cols() || std::size_t(rates.rows()) != ops.size())
        throw ValidationError("rate matrix must be square and match the operator count");
    for (const auto& op : ops) {
        requireSquare(op, "jump operator");
        if (op.rows() != hamiltonian.rows())
            throw ValidationError("jump operator dimension mismatch");
    }
    const double scale = std::max(1.0, rates.size() > 0 ? rates.cwiseAbs().maxCoeff() : 0.0);
    if (rates.size() > 0) {
        if ((rates - rates.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
            throw ValidationError("rate matrix must be symmetric");
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(rates);
        if (es.eigenvalues().minCoeff() < -1e-10 * scale)
            throw ValidationError("rate matrix must be positive semidefinite");
    }
    jumps = std::move(ops);
    rateMatrix = std::move(rates);
}

MatrixXcd LindbladSystem::derivative(const MatrixXcd& rho) const {
    const Complex iu(0.0, 1.0);
    MatrixXcd out = -iu * (hamiltonian * rho - rho * hamiltonian);
    for (std::size_t i = 0; i < jumps.size(); ++i) {
        for (std::size_t j = 0; j < jumps.size(); ++j) {
            const double g = rateMatrix(Eigen::Index(i), Eigen::Index(j));
            if (g == 0.0) continue;
            const MatrixXcd cross = jumps[j].adjoint() * jumps[i];
            out += g * (jumps[i] * rho * jumps[j].adjoint() -
                        0.5 * (cross * rho + rho * cross));
        }
    }
    return out;
}

MatrixXcd dissipator(const MatrixXcd& x, const MatrixXcd& rho) {
    requireSquare(x, "operator");
    requireSquare(rho, "density matrix");
    if (x.rows() != rho.rows()) throw ValidationError("dimension mismatch");
    const MatrixXcd xdx = x.adjoint() * x;
    return x * rho * x.adjoint() - 0.5 * (xdx * rho + rho * xdx);
}

LindbladSystem buildGiantAtomSystem(const Layout& layout, const AtomSpec& atom,
                                    const std::optional<DriveTerm>& drive,
                                    CouplingScaling scaling, const WaveguideModel& wg) {
    const int levels = atom.numLevels();
    if (levels > 12) throw ValidationError("at most 12 levels supported");

    // Shifted level energies: level m carries the shift of the
    // transition directly below it.
    std::vector<double> energy(levels);
    std::vector<double> rate(std::max(0, levels - 1));
    energy[0] = atom.levels[0];
    for (int m = 1; m < levels; ++m) {
        const double w = atom.transition(m, m - 1);
        const Layout scaled = scaledLayout(layout, m - 1, scaling);
        energy[m] = atom.levels[std::size_t(m)] + lambShiftClosed(scaled, 0, w, wg);
        rate[std::size_t(m - 1)] =
            wg.ratePrefactor() * std::norm(couplingFactor(scaled, 0, w, wg));
    }

    MatrixXcd h = MatrixXcd::Zero(levels, levels);
    for (int m = 0; m < levels; ++m) h(m, m) = energy[std::size_t(m)];

    if (drive) {
        if (drive->lower < 0 || drive->upper >= levels || drive->lower >= drive->upper)
            throw ValidationError("drive on undefined transition");
        if (!(drive->strength >= 0.0)) throw ValidationError("drive strength must be >= 0");
        if (!(drive->frequency > 0.0)) throw ValidationError("drive frequency must be positive");
        // Rotating frame of the drive: level m rotates at
        // (m - lower) / (upper - lower) * frequency, making the drive static.
        const double span = double(drive->upper - drive->lower);
        for (int m = 0; m < levels; ++m)
            h(m, m) -= double(m - drive->lower) / span * drive->frequency;
        h(drive->lower, drive->upper) += 0.5 * drive->strength;
        h(drive->upper, drive->lower) += 0.5 * drive->strength;
    }

    LindbladSystem sys = LindbladSystem::withHamiltonian(std::move(h));
    for (int m = 0; m + 1 < levels; ++m) {
        MatrixXcd op = MatrixXcd::Zero(levels, levels);
        op(m, m + 1) = 1.0;
        sys.addJump(std::move(op), rate[std::size_t(m)]);
    }
    return sys;
}

LindbladSystem buildCollectiveSystem(const std::vector<Layout>& atoms, double omega,
                                     double gamma, const WaveguideModel& wg) {
    const MultiAtomCoefficients c = manyAtomCoefficients(atoms, omega, gamma, wg);
    const int n = c.atomCount();
    const int dim = 1 << n;

    // sigma_minus acting on atom j of the register (atom 0 most
    // significant).
    std::vector<MatrixXcd> lower;
    lower.resize(std::size_t(n));
    {
        MatrixXcd sm = MatrixXcd::Zero(2, 2);
        sm(0, 1) = 1.0;
        const MatrixXcd one2 = MatrixXcd::Identity(2, 2);
        for (int j = 0; j < n; ++j) {
            MatrixXcd op = MatrixXcd::Identity(1, 1);
            for (int k = 0; k < n; ++k) op = kron(op, k == j ? sm : one2);
            lower[std::size_t(j)] = std::move(op);
        }
    }

    MatrixXcd h = MatrixXcd::Zero(dim, dim);
    for (int j = 0; j < n; ++j) {
        const double detuning = c.shiftedFrequency[std::size_t(j)] - omega;
        h += detuning * (lower[std::size_t(j)].adjoint() * lower[std::size_t(j)]);
        for (int k = j + 1; k < n; ++k) {
            const MatrixXcd hop = lower[std::size_t(j)].adjoint() * lower[std::size_t(k)];
            h += c.exchange(j, k) * (hop + hop.adjoint());
        }
    }

    LindbladSystem sys = LindbladSystem::withHamiltonian(std::move(h));
    sys.setCorrelatedJumps(std::move(lower), c.collectiveRate);
    return sys;
}

DensityTrajectory evolveDensity(const LindbladSystem& system, const MatrixXcd& rho0,
                                double tEnd, double dt, int storeEvery) {
    requireSquare(rho0, "density matrix");
    if (rho0.rows() != system.hamiltonian.rows())
        throw ValidationError("density matrix dimension mismatch");
    if (!(tEnd > 0.0) || !(dt > 0.0)) throw ValidationError("need tEnd > 0 and dt > 0");
    if (storeEvery < 1) throw ValidationError("storeEvery must be >= 1");
    const double scale = std::max(1.0, rho0.cwiseAbs().maxCoeff());
    if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw ValidationError("density matrix must be Hermitian");
    if (std::abs(rho0.trace().real() - 1.0) > 1e-8 ||
        std::abs(rho0.trace().imag()) > 1e-10)
        throw ValidationError("density matrix must have unit trace");

    const long steps = std::max(1L, std::lround(std::ceil(tEnd / dt - 1e-9)));
    const double h = tEnd / double(steps);

    DensityTrajectory traj;
    auto record = [&](double t, const MatrixXcd& rho) {
        traj.t.push_back(t);
        traj.rho.push_back(rho);
        traj.populations.push_back(rho.diagonal().real());
    };

    MatrixXcd rho = rho0;
    record(0.0, rho);
    for (long s = 1; s <= steps; ++s) {
        const MatrixXcd k1 = system.derivative(rho);
        const MatrixXcd k2 = system.derivative(rho + 0.5 * h * k1);
        const MatrixXcd k3 = system.derivative(rho + 0.5 * h * k2);
        const MatrixXcd k4 = system.derivative(rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const double traceErr = std::abs(rho.trace().real() - 1.0) +
                                std::abs(rho.trace().imag());
        if (!(traceErr < 1e-9)) {
            std::ostringstream msg;
            msg << "trace drift " << traceErr << " at t = " << h * double(s)
                << " exceeds 1e-9; reduce dt (currently " << h << ")";
            throw ConvergenceError(msg.str());
        }
        traj.maxTraceError = std::max(traj.maxTraceError, traceErr);
        if (s % storeEvery == 0 || s == steps) record(h * double(s), rho);
    }
    return traj;
}

double stepHalvingError(const LindbladSystem& system, const MatrixXcd& rho0, double tEnd,
                        double dt) {
    const auto coarse = evolveDensity(system, rho0, tEnd, dt, 1 << 30);
    const auto fine = evolveDensity(system, rho0, tEnd, 0.5 * dt, 1 << 30);
    return (coarse.rho.back() - fine.rho.back()).cwiseAbs().maxCoeff();
}

MatrixXcd steadyState(const LindbladSystem& system) {
    const int d = system.dim();
    if (d > 64)
        throw ValidationError("steady-state solver supports dimension <= 64");
    const MatrixXcd l = liouvillianMatrix(system);
    const int n = d * d;

    const auto degenerate = [&]() -> ConvergenceError {
        int nullDim = -1;
        if (n <= 1024) {
            Eigen::JacobiSVD<MatrixXcd> svd(l);
            const auto& sv = svd.singularValues();
            nullDim = 0;
            for (Eigen::Index i = 0; i < sv.size(); ++i)
                if (sv[i] < 1e-10 * std::max(1.0, sv[0])) ++nullDim;
        }
        std::ostringstream msg;
        msg << "stationary space is degenerate";
        if (nullDim >= 0) msg << " (null dimension " << nullDim << ")";
        msg << "; add dissipation or a drive to make it unique";
        return ConvergenceError(msg.str());
    };

    // Replacing the (redundant) first generator row by a normalization
    // row gives a square system that is nonsingular exactly when the
    // stationary state is unique.
    const auto solveWithRow = [&](const Eigen::RowVectorXcd& row) {
        MatrixXcd lc = l;
        lc.row(0) = row;
        const auto qr = lc.colPivHouseholderQr();
        if (qr.rank() < n) throw degenerate();
        VectorXcd b = VectorXcd::Zero(n);
        b[0] = 1.0;
        return VectorXcd(qr.solve(b));
    };

    Eigen::RowVectorXcd traceRow = Eigen::RowVectorXcd::Zero(n);
    for (int i = 0; i < d; ++i) traceRow[i * d + i] = 1.0;
    const VectorXcd v = solveWithRow(traceRow);

    MatrixXcd rho(d, d);
    for (int c = 0; c < d; ++c) rho.col(c) = v.segment(c * d, d);
    rho = 0.5 * (rho + rho.adjoint().eval());
    const double tr = rho.trace().real();
    if (!(std::abs(tr) > 1e-8))
        throw ConvergenceError("stationary space appears degenerate (traceless solution)");
    rho /= tr;

    VectorXcd vecRho(n);
    for (int c = 0; c < d; ++c) vecRho.segment(c * d, d) = rho.col(c);
    const double lScale = std::max(1.0, l.cwiseAbs().maxCoeff());
    const double residual = (l * vecRho).norm();
    if (!(residual < 1e-10 * lScale)) {
        std::ostringstream msg;
        msg << "stationary-state residual " << residual << " exceeds tolerance "
            << 1e-10 * lScale << " (no unique steady state?)";
        throw ConvergenceError(msg.str());
    }

    // Uniqueness: a second solve with an independent normalization row
    // lands on the same state only when the null space is
    // one-dimensional.
    std::mt19937 rng(987654);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::RowVectorXcd randomRow(n);
    for (int i = 0; i < n; ++i) randomRow[i] = Complex(gauss(rng), gauss(rng));
    const VectorXcd w = solveWithRow(randomRow);
    MatrixXcd rho2(d, d);
    for (int c = 0; c < d; ++c) rho2.col(c) = w.segment(c * d, d);
    const Complex tr2 = rho2.trace();
    if (!(std::abs(tr2) > 1e-8) ||
        ((rho2 / tr2).eval() - rho).cwiseAbs().maxCoeff() > 1e-6)
        throw degenerate();
    return rho;
}

std::vector<InversionRow> inversionScan(int pointCount, double anharmonicity,
                                        const std::vector<double>& driveGrid,
                                        const std::vector<double>& phiGrid,
                                        CouplingScaling scaling) {
    if (pointCount < 1) throw ValidationError("need at least one coupling point");
    if (driveGrid.empty() || phiGrid.empty()) throw ValidationError("empty scan grid");
    if (scaling == CouplingScaling::Explicit)
        throw ValidationError(
            "the scan's unit-lattice layout carries one base strength; use Bosonic or Flat");
    for (double om : driveGrid)
        if (!(om >= 0.0)) throw ValidationError("drive strengths must be >= 0");
    for (double phi : phiGrid) {
        if (!(phi > 0.0)) throw ValidationError("phases must be positive");
        if (!(phi + anharmonicity > 0.0))
            throw ValidationError("anharmonicity pushes the upper transition below zero");
    }

    // Unit lattice (spacing 1, v = 1): phase phi == transition
    // frequency; the second transition sits at phi + anharmonicity.
    const double rateScale = scaling == CouplingScaling::Bosonic ? 2.0 : 1.0;
    std::vector<InversionRow> rows(phiGrid.size());
    parallelFor(phiGrid.size(), [&](std::size_t i) {
        const double phi = phiGrid[i];
        const double phi21 = phi + anharmonicity;
        InversionRow row;
        row.phi = phi;
        row.gamma10 = relaxationRateEquidistant(pointCount, phi, 1.0);
        row.gamma21 = relaxationRateEquidistant(pointCount, phi21, rateScale);
        const double delta1 = lambShiftEquidistant(pointCount, phi, 1.0);
        const double delta2 = lambShiftEquidistant(pointCount, phi21, rateScale);

        const double e1 = phi + delta1;
        const double e2 = (2.0 * phi + anharmonicity) + delta2;
        const double driveFreq = e2;  // resonant with the shifted 0 <-> 2 line

        double bestMargin = -2.0;
        for (double od : driveGrid) {
            double p0, p1, p2;
            if (od == 0.0) {
                // Relaxation only: everything funnels to the ground state.
                p0 = 1.0;
                p1 = 0.0;
                p2 = 0.0;
            } else if (row.gamma21 == 0.0) {
                // The upper transition is exactly protected, so the
                // middle level is never fed and the drive just cycles
                // |0> <-> |2> coherently: no stationary state exists.
                // Report the time average of that lossless cycling
                // from the ground state instead.
                p0 = 0.5;
                p1 = 0.0;
                p2 = 0.5;
            } else {
                MatrixXcd h = MatrixXcd::Zero(3, 3);
                h(1, 1) = e1 - 0.5 * driveFreq;
                h(2, 2) = e2 - driveFreq;
                h(0, 2) = 0.5 * od;
                h(2, 0) = 0.5 * od;
                LindbladSystem sys = LindbladSystem::withHamiltonian(std::move(h));
                MatrixXcd s10 = MatrixXcd::Zero(3, 3), s21 = MatrixXcd::Zero(3, 3);
                s10(0, 1) = 1.0;
                s21(1, 2) = 1.0;
                sys.addJump(std::move(s10), row.gamma10);
                sys.addJump(std::move(s21), row.gamma21);
                const MatrixXcd rho = steadyState(sys);
                p0 = rho(0, 0).real();
                p1 = rho(1, 1).real();
                p2 = rho(2, 2).real();
            }
            const double margin = p1 - p0;
            if (margin > bestMargin) {
                bestMargin = margin;
                row.pop0 = p0;
                row.pop1 = p1;
                row.pop2 = p2;
                row.driveStrength = od;
                row.inverted = margin > 0.0;
            }
        }
        rows[i] = row;
    });
    return rows;
}

}  // namespace giantatom
