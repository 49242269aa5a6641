#include "giantatom/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace giantatom {

WaveguideModel::WaveguideModel(double v_, double J0_) : v(v_), J0(J0_) {
  if (!(v > 0.0)) throw ValidationError("waveguide velocity must be positive");
  if (!(J0 > 0.0)) throw ValidationError("density of states must be positive");
}

double CouplingPoint::strength(std::size_t m) const {
  if (m >= strengths.size())
    throw ValidationError("coupling point has no strength for transition " +
                          std::to_string(m));
  double g = strengths[m];
  if (!std::isfinite(g)) throw ValidationError("coupling strength not finite");
  return g;
}

Layout::Layout(std::initializer_list<CouplingPoint> pts, std::string label_)
    : Layout(std::vector<CouplingPoint>(pts), std::move(label_)) {}

Layout::Layout(std::vector<CouplingPoint> pts, std::string label_)
    : points(std::move(pts)), label(std::move(label_)) {
  for (const auto& p : points) {
    if (!std::isfinite(p.x)) throw ValidationError("coupling position not finite");
    for (double g : p.strengths)
      if (!std::isfinite(g)) throw ValidationError("coupling strength not finite");
  }
  std::stable_sort(points.begin(), points.end(),
                   [](const CouplingPoint& l, const CouplingPoint& r) { return l.x < r.x; });
}

double Layout::span() const {
  if (points.empty()) return 0.0;
  return points.back().x - points.front().x;
}

double Layout::minSpacing() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < points.size(); ++i) {
    double gap = points[i].x - points[i - 1].x;
    if (gap > 0.0) best = std::min(best, gap);
  }
  return std::isfinite(best) ? best : 0.0;
}

Layout equidistantLayout(std::size_t N, double spacing, double strength) {
  if (N == 0) throw ValidationError("layout needs at least one coupling point");
  if (spacing < 0.0) throw ValidationError("spacing must be >= 0");
  std::vector<CouplingPoint> pts(N);
  for (std::size_t k = 0; k < N; ++k) {
    pts[k].x = static_cast<double>(k) * spacing;
    pts[k].strengths = {strength};
  }
  return Layout(std::move(pts));
}

AtomSpec::AtomSpec(std::vector<double> levels_) : levels(std::move(levels_)) {
  if (levels.size() < 2) throw ValidationError("atom needs at least two levels");
  for (std::size_t m = 1; m < levels.size(); ++m)
    if (!(levels[m] > levels[m - 1]))
      throw ValidationError("level energies must be strictly increasing");
}

AtomSpec AtomSpec::ladder(std::size_t M, double omega10, double anharm) {
  std::vector<double> lv(M);
  for (std::size_t m = 0; m < M; ++m) {
    double md = static_cast<double>(m);
    lv[m] = md * omega10 + anharm * md * (md - 1.0) / 2.0;
  }
  return AtomSpec(std::move(lv));
}

double AtomSpec::transition(std::size_t upper, std::size_t lower) const {
  if (upper >= levels.size() || lower >= levels.size())
    throw ValidationError("transition level index out of range");
  return levels[upper] - levels[lower];
}

std::string topologyName(Topology t) {
  switch (t) {
    case Topology::Small: return "small";
    case Topology::Separate: return "separate";
    case Topology::Braided: return "braided";
    case Topology::Nested: return "nested";
    case Topology::Unclassified: return "unclassified";
  }
  return "unclassified";
}

Topology classifyTopology(const Layout& a, const Layout& b) {
  for (const auto& pa : a.points)
    for (const auto& pb : b.points)
      if (pa.x == pb.x)
        throw ValidationError("coincident coupling points across atoms: ordering ambiguous");
  if (a.size() == 1 && b.size() == 1) return Topology::Small;
  if (a.size() != 2 || b.size() != 2) return Topology::Unclassified;

  struct Tagged { double x; char who; };
  std::vector<Tagged> all;
  for (const auto& p : a.points) all.push_back({p.x, 'a'});
  for (const auto& p : b.points) all.push_back({p.x, 'b'});
  std::sort(all.begin(), all.end(), [](const Tagged& l, const Tagged& r) { return l.x < r.x; });

  std::string order;
  for (const auto& t : all) order.push_back(t.who);
  if (order == "aabb" || order == "bbaa") return Topology::Separate;
  if (order == "abab" || order == "baba") return Topology::Braided;
  if (order == "abba" || order == "baab") return Topology::Nested;
  return Topology::Unclassified;
}

double wavelength(const AtomSpec& atom, const WaveguideModel& wg) {
  double w = atom.omega10();
  if (!(w > 0.0)) throw ValidationError("first transition frequency must be positive");
  return 2.0 * kPi * wg.v / w;
}

std::vector<double> linspace(double start, double stop, std::size_t count) {
  if (count == 0) throw ValidationError("grid needs at least one sample");
  std::vector<double> g(count);
  if (count == 1) {
    g[0] = start;
    return g;
  }
  double step = (stop - start) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) g[i] = start + step * static_cast<double>(i);
  g.back() = stop;
  return g;
}

}  // namespace giantatom
