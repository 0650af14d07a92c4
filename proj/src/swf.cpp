#include "billiards/swf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "billiards/error.hpp"
#include "billiards/geometry.hpp"

namespace billiards {

namespace {

using Complex = std::complex<double>;

constexpr double kTwoPi = 2 * std::numbers::pi;

// Union-find carrying the parity of each element relative to its root.
class ParityUnion {
 public:
  explicit ParityUnion(int n) : parent_(n), parity_(n, 0) {
    for (int i = 0; i < n; ++i) parent_[i] = i;
  }

  std::pair<int, int> find(int x) {
    if (parent_[x] == x) return {x, 0};
    auto [root, p] = find(parent_[x]);
    parity_[x] ^= p;
    parent_[x] = root;
    return {root, parity_[x]};
  }

  // Requires parity(a) ^ parity(b) == rel; false on conflict.
  bool unite(int a, int b, int rel) {
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    if (ra == rb) return (pa ^ pb) == rel;
    parent_[rb] = ra;
    parity_[rb] = pa ^ pb ^ rel;
    return true;
  }

 private:
  std::vector<int> parent_;
  std::vector<int> parity_;
};

std::string label_of(const std::vector<BoundaryCondition>& bc) {
  bool all_d = std::all_of(bc.begin(), bc.end(), [](auto b) { return b == BoundaryCondition::Dirichlet; });
  bool all_n = std::all_of(bc.begin(), bc.end(), [](auto b) { return b == BoundaryCondition::Neumann; });
  if (all_d) return "dirichlet";
  if (all_n) return "neumann";
  std::string s = "mixed:";
  for (auto b : bc) s += b == BoundaryCondition::Dirichlet ? 'D' : 'N';
  return s;
}

Vec2 transpose_apply(const Isometry& iso, Vec2 p) {
  return {dot(p, iso.apply_linear(Vec2(1, 0))), dot(p, iso.apply_linear(Vec2(0, 1)))};
}

double term_scale(const std::vector<PlaneWaveTerm>& terms) { return static_cast<double>(terms.size()); }

double momentum_norm(const std::vector<PlaneWaveTerm>& terms) {
  return terms.empty() ? 0.0 : std::abs(terms.front().p);
}

Complex edge_normal(const std::vector<Vec2>& pts, int side) {
  const int n = static_cast<int>(pts.size());
  Vec2 d = pts[(side + 1) % n] - pts[side];
  return Vec2(d.imag(), -d.real()) / std::abs(d);
}

template <class Value, class Gradient>
BoundaryReport boundary_report(const Value& value, const Gradient& grad_normal, const Polygon& polygon,
                               const SignPrescription& prescription, int samples, double tol, double scale,
                               double pnorm) {
  const auto& pts = polygon.points();
  const int n = static_cast<int>(pts.size());
  if (static_cast<int>(prescription.edge_bc.size()) != n)
    throw Error(ErrorCode::BadPrescription, "prescription does not match the polygon");
  BoundaryReport rep;
  rep.samples = samples;
  rep.tol = tol;
  for (int s = 0; s < n; ++s) {
    Vec2 a = pts[s], b = pts[(s + 1) % n];
    Vec2 normal = edge_normal(pts, s);
    for (int j = 0; j < samples; ++j) {
      Vec2 r = a + (b - a) * ((j + 0.5) / samples);
      if (prescription.edge_bc[s] == BoundaryCondition::Dirichlet)
        rep.dirichlet_max = std::max(rep.dirichlet_max, value(r) / scale);
      else
        rep.neumann_max = std::max(rep.neumann_max, grad_normal(r, normal) / (scale * std::max(pnorm, 1.0)));
    }
  }
  rep.pass = rep.dirichlet_max < tol && rep.neumann_max < tol;
  return rep;
}

}  // namespace

std::vector<SignPrescription> enumerate_prescriptions(const Epp& epp) {
  const int sides = epp.polygon().size();
  const int images = static_cast<int>(epp.images().size());
  if (sides > 24) throw Error(ErrorCode::InvalidInput, "too many sides to enumerate prescriptions");
  std::vector<std::pair<std::uint32_t, SignPrescription>> found;
  for (std::uint32_t mask = 0; mask < (1u << sides); ++mask) {
    ParityUnion uf(images);
    bool ok = true;
    for (const Gluing& g : epp.gluings()) {
      if (!uf.unite(g.even, g.odd, (mask >> g.side) & 1u)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    SignPrescription sp;
    auto [root0, p0] = uf.find(0);
    for (int k = 0; k < images; ++k) {
      auto [root, p] = uf.find(k);
      if (root != root0) throw Error(ErrorCode::InvalidInput, "pattern is not connected");
      sp.eta.push_back((p ^ p0) ? -1 : 1);
    }
    for (int s = 0; s < sides; ++s)
      sp.edge_bc.push_back(((mask >> s) & 1u) ? BoundaryCondition::Dirichlet : BoundaryCondition::Neumann);
    sp.label = label_of(sp.edge_bc);
    found.emplace_back(mask, std::move(sp));
  }
  const std::uint32_t all = (1u << sides) - 1;
  auto rank = [&](std::uint32_t m) { return m == all ? 0 : (m == 0 ? 1 : 2); };
  std::stable_sort(found.begin(), found.end(), [&](const auto& a, const auto& b) {
    if (rank(a.first) != rank(b.first)) return rank(a.first) < rank(b.first);
    return a.first < b.first;
  });
  std::vector<SignPrescription> out;
  for (auto& f : found) out.push_back(std::move(f.second));
  return out;
}

SwfPair compile_swf(const Epp& epp, const SignPrescription& prescription, Vec2 momentum, double tol) {
  const auto& images = epp.images();
  if (prescription.eta.size() != images.size())
    throw Error(ErrorCode::BadPrescription, "prescription does not match the pattern");
  for (const Gluing& g : epp.gluings()) {
    if (!g.boundary) continue;
    Vec2 P = g.period.value();
    double turns = dot(momentum, P) / kTwoPi;
    if (std::fabs(turns - std::round(turns)) > tol * std::max(1.0, std::fabs(turns)))
      throw Error(ErrorCode::UnquantizedMomentum, "p . P is not a multiple of 2 pi for a period of the surface");
  }
  SwfPair pair;
  for (std::size_t k = 0; k < images.size(); ++k) {
    const Isometry& iso = images[k].iso;
    PlaneWaveTerm t;
    t.eta = prescription.eta[k];
    t.alpha = dot(momentum, iso.translation.value());
    t.p = transpose_apply(iso, momentum);
    pair.plus.terms.push_back(t);
  }
  pair.plus.energy = std::norm(momentum) / 2;
  pair.plus.branch = 1;
  pair.minus = pair.plus;
  pair.minus.branch = -1;
  return pair;
}

Complex evaluate(const Swf& swf, Vec2 r) {
  Complex sum = 0;
  for (const auto& t : swf.terms)
    sum += static_cast<double>(t.eta) * std::polar(1.0, swf.branch * (t.alpha + dot(t.p, r)));
  return sum;
}

std::vector<Complex> evaluate(const Swf& swf, const std::vector<Vec2>& points) {
  std::vector<Complex> out;
  out.reserve(points.size());
  for (Vec2 r : points) out.push_back(evaluate(swf, r));
  return out;
}

std::array<Complex, 2> gradient(const Swf& swf, Vec2 r) {
  std::array<Complex, 2> g{};
  const Complex i(0, 1);
  for (const auto& t : swf.terms) {
    Complex w = static_cast<double>(t.eta) * std::polar(1.0, swf.branch * (t.alpha + dot(t.p, r))) *
                (static_cast<double>(swf.branch) * i);
    g[0] += w * t.p.real();
    g[1] += w * t.p.imag();
  }
  return g;
}

Complex evaluate_direct(const Epp& epp, const SignPrescription& prescription, Vec2 momentum, int branch, Vec2 r) {
  Complex sum = 0;
  const auto& images = epp.images();
  for (std::size_t k = 0; k < images.size(); ++k) {
    Vec2 rk = images[k].iso.apply(r);
    sum += static_cast<double>(prescription.eta[k]) * std::polar(1.0, branch * dot(momentum, rk));
  }
  return sum;
}

double RealSwf::value(Vec2 r) const {
  double sum = 0;
  for (const auto& t : terms) {
    double phase = t.alpha + dot(t.p, r);
    sum += t.eta * (part == RealPart::Cos ? std::cos(phase) : std::sin(phase));
  }
  return sum;
}

Vec2 RealSwf::gradient(Vec2 r) const {
  Vec2 g = 0;
  for (const auto& t : terms) {
    double phase = t.alpha + dot(t.p, r);
    double d = part == RealPart::Cos ? -std::sin(phase) : std::cos(phase);
    g += static_cast<double>(t.eta) * d * t.p;
  }
  return g;
}

std::array<RealSwf, 2> real_combinations(const SwfPair& pair, const Polygon& polygon) {
  std::array<RealSwf, 2> out;
  for (int i = 0; i < 2; ++i) {
    out[i].terms = pair.plus.terms;
    out[i].part = i == 0 ? RealPart::Cos : RealPart::Sin;
    out[i].energy = pair.plus.energy;
  }
  std::vector<Vec2> probe;
  for (const auto& q : polygon_quadrature(polygon.points())) probe.push_back(q.x);
  for (Vec2 r : interior_points(polygon, 64, 3)) probe.push_back(r);
  for (auto& f : out) {
    double peak = 0;
    for (Vec2 r : probe) peak = std::max(peak, std::fabs(f.value(r)));
    f.degenerate = peak <= 1e-10 * term_scale(f.terms);
  }
  return out;
}

BoundaryReport verify_boundary(const Swf& swf, const Polygon& polygon, const SignPrescription& prescription,
                               int samples_per_edge, double tol) {
  auto value = [&](Vec2 r) { return std::abs(evaluate(swf, r)); };
  auto normal = [&](Vec2 r, Vec2 nrm) {
    auto g = gradient(swf, r);
    return std::abs(g[0] * nrm.real() + g[1] * nrm.imag());
  };
  return boundary_report(value, normal, polygon, prescription, samples_per_edge, tol, term_scale(swf.terms),
                         momentum_norm(swf.terms));
}

BoundaryReport verify_boundary(const RealSwf& swf, const Polygon& polygon, const SignPrescription& prescription,
                               int samples_per_edge, double tol) {
  auto value = [&](Vec2 r) { return std::fabs(swf.value(r)); };
  auto normal = [&](Vec2 r, Vec2 nrm) { return std::fabs(dot(swf.gradient(r), nrm)); };
  return boundary_report(value, normal, polygon, prescription, samples_per_edge, tol, term_scale(swf.terms),
                         momentum_norm(swf.terms));
}

HelmholtzReport verify_helmholtz(const Swf& swf, const Polygon& polygon, int points, std::uint32_t seed) {
  if (swf.terms.empty()) throw Error(ErrorCode::InvalidInput, "empty wave function");
  HelmholtzReport rep;
  double lo = INFINITY, hi = 0;
  for (const auto& t : swf.terms) {
    lo = std::min(lo, std::abs(t.p));
    hi = std::max(hi, std::abs(t.p));
  }
  rep.norm_spread = hi > 0 ? (hi - lo) / hi : 0;
  if (rep.norm_spread > 1e-12) throw Error(ErrorCode::MomentumMismatch, "plane-wave momenta differ in length");
  const double energy = hi * hi / 2;
  const double h = 1e-3 / std::max(hi, 1.0);
  double peak = 0;
  for (const auto& q : polygon_quadrature(polygon.points())) peak = std::max(peak, std::abs(evaluate(swf, q.x)));
  auto pts = interior_points(polygon, points, seed, 2 * h);
  for (Vec2 r : pts) {
    Complex c = evaluate(swf, r);
    peak = std::max(peak, std::abs(c));
    Complex lap = (evaluate(swf, r + Vec2(h, 0)) + evaluate(swf, r - Vec2(h, 0)) + evaluate(swf, r + Vec2(0, h)) +
                   evaluate(swf, r - Vec2(0, h)) - 4.0 * c) /
                  (h * h);
    rep.max_residual = std::max(rep.max_residual, std::abs(lap + 2 * energy * c));
  }
  rep.points = static_cast<int>(pts.size());
  rep.bound = 1e-6 * energy * peak;
  rep.pass = rep.max_residual <= rep.bound;
  return rep;
}

Vec2 Reflection::apply(Vec2 r) const {
  Vec2 u = direction / std::abs(direction);
  return origin + u * u * std::conj(r - origin);
}

std::string to_string(Parity parity) {
  switch (parity) {
    case Parity::Even: return "even";
    case Parity::Odd: return "odd";
    case Parity::None: return "none";
  }
  return "none";
}

Parity symmetry_probe(const std::function<double(Vec2)>& f, const Polygon& polygon, const Reflection& symmetry,
                      int points, double tol, std::uint32_t seed) {
  const auto& pts = polygon.points();
  double size = 0;
  for (Vec2 a : pts) size = std::max(size, std::abs(a - pts.front()));
  for (Vec2 a : pts) {
    Vec2 b = symmetry.apply(a);
    bool hit = std::any_of(pts.begin(), pts.end(), [&](Vec2 c) { return std::abs(b - c) < 1e-9 * (1 + size); });
    if (!hit) throw Error(ErrorCode::SymmetryNotAutomorphism, "the reflection does not map the polygon onto itself");
  }
  auto sample = interior_points(polygon, points, seed);
  double peak = 0;
  for (Vec2 r : sample) peak = std::max(peak, std::fabs(f(r)));
  if (peak == 0) return Parity::Even;
  bool even = true, odd = true;
  for (Vec2 r : sample) {
    double a = f(r), b = f(symmetry.apply(r));
    even = even && std::fabs(b - a) <= tol * peak;
    odd = odd && std::fabs(b + a) <= tol * peak;
  }
  if (even) return Parity::Even;
  if (odd) return Parity::Odd;
  return Parity::None;
}

Parity symmetry_probe(const RealSwf& swf, const Polygon& polygon, const Reflection& symmetry, int points, double tol) {
  return symmetry_probe([&](Vec2 r) { return swf.value(r); }, polygon, symmetry, points, tol);
}

double l2_norm(const Swf& swf, const Polygon& polygon) {
  double sum = 0;
  for (const auto& q : polygon_quadrature(polygon.points())) sum += q.w * std::norm(evaluate(swf, q.x));
  return std::sqrt(sum);
}

double l2_norm(const RealSwf& swf, const Polygon& polygon) {
  double sum = 0;
  for (const auto& q : polygon_quadrature(polygon.points())) {
    double v = swf.value(q.x);
    sum += q.w * v * v;
  }
  return std::sqrt(sum);
}

std::vector<Vec2> interior_points(const Polygon& polygon, int count, std::uint32_t seed, double margin) {
  const auto& pts = polygon.points();
  Box box = bounding_box(pts);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> ux(box.lo.real(), box.hi.real()), uy(box.lo.imag(), box.hi.imag());
  std::vector<Vec2> out;
  int attempts = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++attempts > 1000 * count + 1000) throw Error(ErrorCode::InvalidInput, "could not sample interior points");
    Vec2 r(ux(rng), uy(rng));
    if (!point_in_polygon(pts, r)) continue;
    if (margin > 0 && distance_to_boundary(pts, r) < margin) continue;
    out.push_back(r);
  }
  return out;
}

double proportional_residual(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidInput, "sample lists differ in length");
  Complex num = 0;
  double den = 0, peak = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::conj(b[i]) * a[i];
    den += std::norm(b[i]);
    peak = std::max(peak, std::abs(a[i]));
  }
  if (peak == 0) return den == 0 ? 0 : INFINITY;
  if (den == 0) return INFINITY;
  Complex c = num / den;
  double err = 0;
  for (std::size_t i = 0; i < a.size(); ++i) err = std::max(err, std::abs(a[i] - c * b[i]));
  return err / peak;
}

namespace {

template <class Fn>
void for_grid(const Polygon& polygon, Grid grid, Fn fn) {
  if (grid.width <= 0 || grid.height <= 0) throw Error(ErrorCode::InvalidInput, "grid size must be positive");
  Box box = bounding_box(polygon.points());
  const double dx = (box.hi.real() - box.lo.real()) / grid.width;
  const double dy = (box.hi.imag() - box.lo.imag()) / grid.height;
  for (int j = grid.height - 1; j >= 0; --j)
    for (int i = 0; i < grid.width; ++i) {
      Vec2 r(box.lo.real() + (i + 0.5) * dx, box.lo.imag() + (j + 0.5) * dy);
      fn(i, grid.height - 1 - j, r, point_in_polygon(polygon.points(), r));
    }
}

}  // namespace

namespace {

template <class F>
std::string csv_of(F f, const Polygon& polygon, Grid grid) {
  std::ostringstream os;
  os.precision(12);
  os << "x,y,re,im,abs2\n";
  for_grid(polygon, grid, [&](int, int, Vec2 r, bool inside) {
    if (!inside) return;
    Complex v = f(r);
    os << r.real() << "," << r.imag() << "," << v.real() << "," << v.imag() << "," << std::norm(v) << "\n";
  });
  return os.str();
}

template <class F>
std::string pgm_of(F f, const Polygon& polygon, Grid grid) {
  std::vector<double> vals(static_cast<std::size_t>(grid.width) * grid.height, 0.0);
  double peak = 0;
  for_grid(polygon, grid, [&](int i, int row, Vec2 r, bool inside) {
    if (!inside) return;
    double v = std::norm(f(r));
    vals[static_cast<std::size_t>(row) * grid.width + i] = v;
    peak = std::max(peak, v);
  });
  std::ostringstream os;
  os << "P5\n" << grid.width << " " << grid.height << "\n255\n";
  for (double v : vals) {
    int level = peak > 0 ? static_cast<int>(std::lround(255 * v / peak)) : 0;
    os.put(static_cast<char>(static_cast<unsigned char>(level)));
  }
  return os.str();
}

}  // namespace

std::string grid_csv(const Swf& swf, const Polygon& polygon, Grid grid) {
  return csv_of([&](Vec2 r) { return evaluate(swf, r); }, polygon, grid);
}

std::string grid_csv(const RealSwf& swf, const Polygon& polygon, Grid grid) {
  return csv_of([&](Vec2 r) { return Complex(swf.value(r)); }, polygon, grid);
}

std::string grid_pgm(const Swf& swf, const Polygon& polygon, Grid grid) {
  return pgm_of([&](Vec2 r) { return evaluate(swf, r); }, polygon, grid);
}

std::string grid_pgm(const RealSwf& swf, const Polygon& polygon, Grid grid) {
  return pgm_of([&](Vec2 r) { return Complex(swf.value(r)); }, polygon, grid);
}

}  // namespace billiards
