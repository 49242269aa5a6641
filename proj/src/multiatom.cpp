#include "giantatom/multiatom.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>

namespace giantatom {
namespace {

constexpr int kMaxAtoms = 12;

void checkTwoLevelStrengths(const Layout& layout) {
    for (const auto& p : layout.points) p.strength(0);
}

MultiAtomCoefficients coefficientsFor(const std::vector<Layout>& atoms, double omega,
                                      double gamma, const WaveguideModel& wg) {
    if (atoms.empty()) throw ValidationError("need at least one atom");
    if (int(atoms.size()) > kMaxAtoms)
        throw ValidationError("more than 12 atoms: density-matrix treatment intractable");
    if (!(omega > 0.0)) throw ValidationError("evaluation frequency must be positive");
    if (!(gamma >= 0.0)) throw ValidationError("single-point rate must be >= 0");
    for (const auto& atom : atoms) checkTwoLevelStrengths(atom);

    const int n = int(atoms.size());
    MultiAtomCoefficients out;
    out.shiftedFrequency.resize(n);
    out.individualRate.resize(n);
    out.collectiveRate = Eigen::MatrixXd::Zero(n, n);
    out.exchange = Eigen::MatrixXd::Zero(n, n);

    // Per-atom factor sum_k s_k exp(i omega x_k / v): rates are gamma
    // times products of these factors, which keeps the rate matrix a
    // Gram matrix (positive semidefinite by construction).
    std::vector<std::complex<double>> factor(n);
    for (int j = 0; j < n; ++j) {
        std::complex<double> acc{0.0, 0.0};
        for (const auto& p : atoms[j].points) {
            const double phase = omega * p.x / wg.v;
            acc += p.strength(0) * std::complex<double>(std::cos(phase), std::sin(phase));
        }
        factor[j] = acc;
    }

    for (int j = 0; j < n; ++j) {
        out.individualRate[j] = gamma * std::norm(factor[j]);
        out.collectiveRate(j, j) = out.individualRate[j];
        // Intra-atom frequency shift (retardation between own points).
        double shift = 0.0;
        const auto& pts = atoms[j].points;
        for (std::size_t k = 0; k + 1 < pts.size(); ++k)
            for (std::size_t m = k + 1; m < pts.size(); ++m)
                shift += pts[k].strength(0) * pts[m].strength(0) *
                         std::sin(omega * std::abs(pts[k].x - pts[m].x) / wg.v);
        out.shiftedFrequency[j] = omega + gamma * shift;
    }

    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
            out.collectiveRate(j, k) = out.collectiveRate(k, j) =
                gamma * (factor[j] * std::conj(factor[k])).real();
            double ex = 0.0;
            for (const auto& pj : atoms[j].points)
                for (const auto& pk : atoms[k].points)
                    ex += pj.strength(0) * pk.strength(0) *
                          std::sin(omega * std::abs(pj.x - pk.x) / wg.v);
            out.exchange(j, k) = out.exchange(k, j) = 0.5 * gamma * ex;
        }
    }
    return out;
}

// Reduce a pair of layouts to their joint point ordering on a unit
// lattice, keeping per-point strengths.
std::pair<Layout, Layout> latticeReduction(const Layout& a, const Layout& b) {
    struct Tagged {
        double x;
        double s;
        char who;
    };
    std::vector<Tagged> all;
    for (const auto& p : a.points) all.push_back({p.x, p.strength(0), 'a'});
    for (const auto& p : b.points) all.push_back({p.x, p.strength(0), 'b'});
    for (const auto& pa : a.points)
        for (const auto& pb : b.points)
            if (pa.x == pb.x)
                throw ValidationError(
                    "coincident coupling points across atoms: lattice ordering ambiguous");
    std::sort(all.begin(), all.end(),
              [](const Tagged& l, const Tagged& r) { return l.x < r.x; });
    std::vector<CouplingPoint> pa, pb;
    for (std::size_t slot = 0; slot < all.size(); ++slot) {
        CouplingPoint p{double(slot), {all[slot].s}};
        (all[slot].who == 'a' ? pa : pb).push_back(p);
    }
    return {Layout(std::move(pa)), Layout(std::move(pb))};
}

}  // namespace

double MultiAtomCoefficients::exchangeG() const {
    if (atomCount() != 2) throw ValidationError("exchangeG: defined for exactly two atoms");
    return exchange(0, 1);
}

double MultiAtomCoefficients::collectivePair() const {
    if (atomCount() != 2)
        throw ValidationError("collectivePair: defined for exactly two atoms");
    return collectiveRate(0, 1);
}

MultiAtomCoefficients twoAtomCoefficients(const Layout& a, const Layout& b, double omega,
                                          double gamma, const WaveguideModel& wg) {
    return coefficientsFor({a, b}, omega, gamma, wg);
}

MultiAtomCoefficients manyAtomCoefficients(const std::vector<Layout>& atoms, double omega,
                                           double gamma, const WaveguideModel& wg) {
    return coefficientsFor(atoms, omega, gamma, wg);
}

std::pair<Layout, Layout> canonicalTopologyPair(Topology t) {
    auto two = [](double x0, double x1) { return Layout({{x0, {1.0}}, {x1, {1.0}}}); };
    switch (t) {
        case Topology::Small:
            return {Layout({{0.0, {1.0}}}), Layout({{1.0, {1.0}}})};
        case Topology::Separate:
            return {two(0, 1), two(2, 3)};
        case Topology::Braided:
            return {two(0, 2), two(1, 3)};
        case Topology::Nested:
            return {two(0, 3), two(1, 2)};
        case Topology::Unclassified:
            break;
    }
    throw ValidationError("no canonical pattern for unclassified topology");
}

MultiAtomCoefficients coefficientsAtLatticePhase(const Layout& a, const Layout& b,
                                                 double phi, double gamma) {
    if (!(phi > 0.0)) throw ValidationError("lattice phase must be positive");
    auto [la, lb] = latticeReduction(a, b);
    // Unit lattice, v = 1: evaluating at omega = phi makes neighboring
    // sites phi radians apart.
    return twoAtomCoefficients(la, lb, phi, gamma, WaveguideModel(1.0, 1.0 / (4.0 * kPi)));
}

std::vector<DecoherenceFreePoint> decoherenceFreePoints(const Layout& a, const Layout& b,
                                                        const std::vector<double>& phiGrid,
                                                        double gamma) {
    if (phiGrid.size() < 3)
        throw ValidationError("decoherenceFreePoints: grid needs at least 3 phases");
    for (std::size_t i = 1; i < phiGrid.size(); ++i)
        if (!(phiGrid[i] > phiGrid[i - 1]))
            throw ValidationError("decoherenceFreePoints: grid must be increasing");
    if (!(phiGrid.front() > 0.0))
        throw ValidationError("decoherenceFreePoints: grid phases must be positive");
    if (!(gamma > 0.0)) throw ValidationError("decoherenceFreePoints: gamma must be positive");

    bool anyStrength = false;
    for (const auto& p : a.points) anyStrength |= p.strength(0) != 0.0;
    for (const auto& p : b.points) anyStrength |= p.strength(0) != 0.0;
    if (!anyStrength) return {};  // degenerate: relaxation-free everywhere, nothing coupled

    const auto [la, lb] = latticeReduction(a, b);
    const WaveguideModel unit(1.0, 1.0 / (4.0 * kPi));
    const auto objective = [&](double phi) {
        const auto c = twoAtomCoefficients(la, lb, phi, gamma, unit);
        return std::max({c.individualRate[0], c.individualRate[1],
                         std::abs(c.collectivePair())});
    };

    std::vector<double> value(phiGrid.size());
    for (std::size_t i = 0; i < phiGrid.size(); ++i) value[i] = objective(phiGrid[i]);

    std::vector<DecoherenceFreePoint> found;
    const double accept = 1e-8 * gamma;
    const double goldenRatio = 0.5 * (std::sqrt(5.0) - 1.0);
    for (std::size_t i = 1; i + 1 < phiGrid.size(); ++i) {
        if (!(value[i] <= value[i - 1] && value[i] <= value[i + 1])) continue;
        // Golden-section refinement of the bracketed minimum.
        double lo = phiGrid[i - 1], hi = phiGrid[i + 1];
        double x1 = hi - goldenRatio * (hi - lo);
        double x2 = lo + goldenRatio * (hi - lo);
        double f1 = objective(x1), f2 = objective(x2);
        while (hi - lo > 1e-10) {
            if (f1 < f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - goldenRatio * (hi - lo);
                f1 = objective(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + goldenRatio * (hi - lo);
                f2 = objective(x2);
            }
        }
        const double phiStar = 0.5 * (lo + hi);
        if (objective(phiStar) >= accept) continue;
        const auto c = twoAtomCoefficients(la, lb, phiStar, gamma, unit);
        if (!found.empty() && std::abs(found.back().phi - phiStar) < 1e-6) continue;
        found.push_back({phiStar, c.exchangeG()});
    }
    return found;
}

}  // namespace giantatom
