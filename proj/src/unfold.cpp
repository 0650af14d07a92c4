#include "billiards/unfold.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "billiards/error.hpp"
#include "billiards/rationalize.hpp"

namespace billiards {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

Vec2 to_vec(std::complex<long double> z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

std::string vec_string(Vec2 v) {
  std::ostringstream os;
  os.precision(12);
  os << "(" << v.real() << ", " << v.imag() << ")";
  return os.str();
}

// Integer matrix helpers for the small homology computations.
using IntMatrix = std::vector<std::vector<Integer>>;

Integer bareiss_det(IntMatrix m) {
  const int n = static_cast<int>(m.size());
  Integer prev = 1;
  int sign = 1;
  for (int k = 0; k < n; ++k) {
    if (m[k][k] == 0) {
      int swap = -1;
      for (int i = k + 1; i < n; ++i)
        if (m[i][k] != 0) {
          swap = i;
          break;
        }
      if (swap < 0) return 0;
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

// Rows of the result are the inverse of a unimodular integer matrix.
IntMatrix unimodular_inverse(const IntMatrix& a) {
  const int n = static_cast<int>(a.size());
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(2 * n, Rational(0)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m[i][j] = a[i][j];
    m[i][n + i] = 1;
  }
  for (int c = 0; c < n; ++c) {
    int piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) throw Error(ErrorCode::RankMismatch, "singular homology matrix");
    std::swap(m[c], m[piv]);
    Rational inv = 1 / m[c][c];
    for (auto& v : m[c]) v *= inv;
    for (int i = 0; i < n; ++i) {
      if (i == c || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (int j = 0; j < 2 * n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  IntMatrix out(n, std::vector<Integer>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (m[i][n + j].get_den() != 1) throw Error(ErrorCode::RankMismatch, "homology basis is not unimodular");
      out[i][j] = m[i][n + j].get_num();
    }
  return out;
}

}  // namespace

Isometry Isometry::identity(const ContextPtr& ctx) { return {false, 0, Cyclo(ctx)}; }

Cyclo Isometry::apply_linear(const Cyclo& z) const { return (reflecting ? z.conj() : z).rotated(rotation); }

Vec2 Isometry::apply_linear(Vec2 z) const {
  Vec2 w = reflecting ? std::conj(z) : z;
  return to_vec(translation.context()->root(rotation)) * w;
}

Isometry Isometry::compose(const Isometry& inner) const {
  const auto& ctx = translation.context();
  int rot = ctx->reduce_index(static_cast<long long>(rotation) + (reflecting ? -inner.rotation : inner.rotation));
  return {reflecting != inner.reflecting, rot, apply(inner.translation)};
}

Isometry Isometry::inverse() const {
  const auto& ctx = translation.context();
  // z = L(w) + t  =>  w = L^{-1}(z - t)
  int rot = reflecting ? rotation : ctx->reduce_index(-static_cast<long long>(rotation));
  Isometry inv{reflecting, rot, Cyclo(ctx)};
  inv.translation = -inv.apply_linear(translation);
  return inv;
}

int Isometry::linear_key() const { return (reflecting ? translation.context()->order() : 0) + rotation; }

bool Isometry::operator==(const Isometry& o) const {
  return reflecting == o.reflecting && rotation == o.rotation && translation == o.translation;
}

Isometry side_reflection(const Polygon& poly, int side) {
  const auto& ctx = poly.context();
  int rot = ctx->reduce_index(2LL * poly.directions()[side]);
  const Cyclo& v = poly.vertices()[side];
  Isometry r{true, rot, Cyclo(ctx)};
  r.translation = v - r.apply_linear(v);
  return r;
}

PolygonImage reflect_image(const Polygon& poly, const PolygonImage& image, int side) {
  if (side < 0 || side >= poly.size()) throw Error(ErrorCode::InvalidInput, "side index out of range");
  return {image.index, image.iso.compose(side_reflection(poly, side))};
}

std::vector<PolygonImage> unfold_vertex(const Polygon& poly, int vertex) {
  const int n = poly.size();
  if (vertex < 0 || vertex >= n) throw Error(ErrorCode::InvalidInput, "vertex index out of range");
  const int sides[2] = {vertex, (vertex + n - 1) % n};
  std::vector<PolygonImage> out{{0, Isometry::identity(poly.context())}};
  for (int step = 0;; ++step) {
    PolygonImage next = reflect_image(poly, out.back(), sides[step % 2]);
    if (next.iso == out.front().iso) break;
    next.index = static_cast<int>(out.size());
    out.push_back(std::move(next));
    if (out.size() > 4 * static_cast<std::size_t>(poly.n_lcm()) + 4)
      throw Error(ErrorCode::OrbitExplosion, "vertex unfolding does not close");
  }
  return out;
}

std::string to_string(PeriodKind kind) {
  switch (kind) {
    case PeriodKind::SimpleInternal: return "simple-internal";
    case PeriodKind::Structural: return "structural";
    case PeriodKind::Compound: return "compound";
  }
  return "?";
}

Epp::Epp(Polygon poly, std::vector<PolygonImage> images, std::vector<Gluing> gluings, std::vector<int> tree,
         std::vector<int> by_linear, std::vector<int> gluing_index)
    : poly_(std::move(poly)),
      images_(std::move(images)),
      gluings_(std::move(gluings)),
      tree_(std::move(tree)),
      by_linear_(std::move(by_linear)),
      gluing_index_(std::move(gluing_index)) {
  for (auto& img : images_) {
    std::vector<Vec2> pts;
    for (auto p : poly_.points()) pts.push_back(img.iso.apply(p));
    placed_.push_back(std::move(pts));
  }
}

const Gluing& Epp::gluing_at(int image, int side) const {
  return gluings_[gluing_index_[static_cast<std::size_t>(image) * poly_.size() + side]];
}

int Epp::image_by_linear(bool reflecting, int rotation) const {
  return by_linear_[(reflecting ? 2 * C() : 0) + rotation];
}

std::vector<Period> Epp::simple_periods() const {
  std::vector<Period> out;
  for (auto& g : gluings_)
    if (g.boundary)
      out.push_back(
          {g.period, simple_period_internal(*this, g.id) ? PeriodKind::SimpleInternal : PeriodKind::Structural, g.id});
  return out;
}

Epp build_epp(const Polygon& poly, const std::vector<int>& side_order) {
  const auto& ctx = poly.context();
  const int n = poly.size();
  const int order = ctx->order();
  const std::size_t cap = 16 * static_cast<std::size_t>(poly.n_lcm());

  std::vector<Isometry> reflections;
  for (int s = 0; s < n; ++s) reflections.push_back(side_reflection(poly, s));
  std::vector<int> sides = side_order;
  if (sides.empty()) {
    sides.resize(n);
    std::iota(sides.begin(), sides.end(), 0);
  }
  std::vector<int> sorted = sides;
  std::sort(sorted.begin(), sorted.end());
  for (int k = 0; k < static_cast<int>(sorted.size()); ++k)
    if (sorted[k] != k || static_cast<int>(sorted.size()) != n)
      throw Error(ErrorCode::InvalidInput, "side order must list every side once");

  std::vector<PolygonImage> images{{0, Isometry::identity(ctx)}};
  std::vector<int> by_linear(2 * order, -1);
  by_linear[images[0].iso.linear_key()] = 0;
  std::vector<std::pair<int, int>> tree_links;  // (image, side) that placed a new image
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int g = queue.front();
    queue.pop_front();
    for (int s : sides) {
      Isometry cand = images[g].iso.compose(reflections[s]);
      int key = cand.linear_key();
      if (by_linear[key] >= 0) continue;
      if (images.size() >= cap) throw Error(ErrorCode::OrbitExplosion, "more than 16N images");
      int idx = static_cast<int>(images.size());
      by_linear[key] = idx;
      images.push_back({idx, std::move(cand)});
      tree_links.emplace_back(g, s);
      queue.push_back(idx);
    }
  }
  if (images.size() != 2 * static_cast<std::size_t>(poly.n_lcm()))
    throw Error(ErrorCode::OrbitExplosion, "orbit has " + std::to_string(images.size()) + " images, expected 2N");

  std::vector<Gluing> gluings;
  std::vector<int> gluing_index(images.size() * n, -1);
  for (auto& img : images) {
    if (img.odd()) continue;
    for (int s = 0; s < n; ++s) {
      Isometry moved = img.iso.compose(reflections[s]);
      int partner = by_linear[moved.linear_key()];
      Gluing gl;
      gl.id = static_cast<int>(gluings.size());
      gl.side = s;
      gl.even = img.index;
      gl.odd = partner;
      gl.period = moved.translation - images[partner].iso.translation;
      gl.boundary = !gl.period.is_zero();
      gluing_index[static_cast<std::size_t>(img.index) * n + s] = gl.id;
      gluing_index[static_cast<std::size_t>(partner) * n + s] = gl.id;
      gluings.push_back(std::move(gl));
    }
  }
  std::vector<int> tree;
  for (auto [g, s] : tree_links) tree.push_back(gluing_index[static_cast<std::size_t>(g) * n + s]);
  return Epp(poly, std::move(images), std::move(gluings), std::move(tree), std::move(by_linear),
             std::move(gluing_index));
}

std::string epp_dump(const Epp& epp) {
  std::ostringstream os;
  const Polygon& poly = epp.polygon();
  os << "# pattern polygon=\"" << poly.name() << "\" N=" << poly.n_lcm() << " images=" << epp.images().size()
     << " C=" << epp.C() << "\n";
  os << "# exact values are integer combinations of w^j, w = exp(i*pi/" << poly.n_lcm() << ")";
  if (poly.context()->scale() != 1) os << ", divided by " << poly.context()->scale();
  os << "\n";
  for (auto& img : epp.images())
    os << "image " << img.index + 1 << " rotation=" << img.iso.rotation << " reflecting=" << img.iso.reflecting
       << " translation=" << vec_string(img.iso.translation.value()) << " exact=" << img.iso.translation.to_string()
       << "\n";
  for (auto& g : epp.gluings()) {
    os << "pair " << g.id << " side=" << g.side << " images=" << g.even + 1 << "," << g.odd + 1;
    if (g.boundary)
      os << " period=" << vec_string(g.period.value()) << " exact=" << g.period.to_string();
    else
      os << " interior";
    os << "\n";
  }
  return os.str();
}

int genus(const Polygon& poly) {
  Rational s = 0;
  for (auto& a : poly.angles()) s += Rational(a.p - 1, a.q);
  Rational g = 1 + Rational(poly.n_lcm(), 2) * s;
  g.canonicalize();
  if (g.get_den() != 1) throw Error(ErrorCode::NonIntegerGenus, "genus formula gives " + g.get_str());
  return static_cast<int>(to_int64(g.get_num()));
}

SurfaceTopology surface_topology(const Epp& epp) {
  const Polygon& poly = epp.polygon();
  const int n = poly.size();
  const int faces = static_cast<int>(epp.images().size());
  const auto& gl = epp.gluings();
  const int edges = static_cast<int>(gl.size());

  UnionFind corners(faces * n);
  for (auto& g : gl) {
    int s0 = g.side, s1 = (g.side + 1) % n;
    corners.unite(g.even * n + s0, g.odd * n + s0);
    corners.unite(g.even * n + s1, g.odd * n + s1);
  }
  std::map<int, int> vid;
  for (int c = 0; c < faces * n; ++c) vid.emplace(corners.find(c), static_cast<int>(vid.size()));
  const int verts = static_cast<int>(vid.size());
  std::vector<int> from(edges), to(edges);
  for (auto& g : gl) {
    from[g.id] = vid[corners.find(g.even * n + g.side)];
    to[g.id] = vid[corners.find(g.even * n + (g.side + 1) % n)];
  }

  SurfaceTopology top;
  for (int c = 0; c < faces * n; ++c) top.corner_vertex.push_back(vid[corners.find(c)]);
  top.vertices = verts;
  top.edges = edges;
  top.faces = faces;
  int chi = verts - edges + faces;
  if (chi % 2 != 0) throw Error(ErrorCode::RankMismatch, "odd Euler characteristic");
  top.genus = (2 - chi) / 2;

  std::vector<char> dual(edges, 0);
  for (int e : epp.tree()) dual[e] = 1;
  std::vector<int> order;
  for (auto& g : gl)
    if (!dual[g.id] && !g.boundary) order.push_back(g.id);
  for (auto& g : gl)
    if (!dual[g.id] && g.boundary) order.push_back(g.id);
  UnionFind vuf(verts);
  std::vector<char> primal(edges, 0);
  for (int e : order) {
    if (vuf.unite(from[e], to[e])) {
      primal[e] = 1;
      top.primal_tree.push_back(e);
    } else {
      top.leftover.push_back(e);
    }
  }
  if (static_cast<int>(top.primal_tree.size()) != verts - 1)
    throw Error(ErrorCode::RankMismatch, "vertex graph is disconnected");

  // Root the primal tree and walk each fundamental loop.
  std::vector<std::vector<int>> adj(verts);
  for (int e : top.primal_tree) {
    adj[from[e]].push_back(e);
    adj[to[e]].push_back(e);
  }
  std::vector<int> parent(verts, -1), parent_edge(verts, -1), depth(verts, 0);
  std::vector<char> seen(verts, 0);
  std::deque<int> q{0};
  seen[0] = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int e : adj[v]) {
      int w = from[e] == v ? to[e] : from[e];
      if (seen[w]) continue;
      seen[w] = 1;
      parent[w] = v;
      parent_edge[w] = e;
      depth[w] = depth[v] + 1;
      q.push_back(w);
    }
  }

  top.coords.assign(edges, {});
  for (int k = 0; k < static_cast<int>(top.leftover.size()); ++k) {
    int e = top.leftover[k];
    top.coords[e].emplace_back(k, 1);
    // Return path to[e] -> from[e] through the tree.
    int a = to[e], b = from[e];
    std::vector<std::pair<int, int>> down;
    while (a != b) {
      if (depth[a] >= depth[b]) {
        int pe = parent_edge[a];
        top.coords[pe].emplace_back(k, from[pe] == a ? 1 : -1);
        a = parent[a];
      } else {
        int pe = parent_edge[b];
        down.emplace_back(pe, from[pe] == parent[b] ? 1 : -1);
        b = parent[b];
      }
    }
    for (auto [pe, sgn] : down) top.coords[pe].emplace_back(k, sgn);
  }
  return top;
}

PeriodBasis period_basis(const Epp& epp, bool prefer_short) {
  const int g = genus(epp.polygon());
  SurfaceTopology top = surface_topology(epp);
  if (top.genus != g || static_cast<int>(top.leftover.size()) != 2 * g)
    throw Error(ErrorCode::RankMismatch,
                "surface genus " + std::to_string(top.genus) + " but angle formula gives " + std::to_string(g));
  const int dim = 2 * g;
  const auto& gl = epp.gluings();

  std::vector<int> chosen = top.leftover;
  if (prefer_short && dim <= 24) {
    std::vector<int> cand;
    for (auto& e : gl)
      if (e.boundary && !top.coords[e.id].empty()) cand.push_back(e.id);
    std::stable_sort(cand.begin(), cand.end(), [&](int a, int b) {
      Vec2 va = gl[a].period.value(), vb = gl[b].period.value();
      double na = std::abs(va), nb = std::abs(vb);
      if (std::fabs(na - nb) > 1e-9 * std::max(1.0, na)) return na < nb;
      if (std::fabs(va.real() - vb.real()) > 1e-9) return va.real() > vb.real();
      if (std::fabs(va.imag() - vb.imag()) > 1e-9) return va.imag() > vb.imag();
      return false;
    });
    // Greedy rank over Q with fraction-free row echelon rows.
    std::vector<std::vector<Rational>> echelon;
    std::vector<int> pivots;
    std::vector<int> pick;
    for (int e : cand) {
      std::vector<Rational> row(dim, Rational(0));
      for (auto [k, c] : top.coords[e]) row[k] += c;
      for (std::size_t r = 0; r < echelon.size(); ++r) {
        Rational f = row[pivots[r]];
        if (f == 0) continue;
        for (int j = 0; j < dim; ++j) row[j] -= f * echelon[r][j];
      }
      int piv = -1;
      for (int j = 0; j < dim; ++j)
        if (row[j] != 0) {
          piv = j;
          break;
        }
      if (piv < 0) continue;
      Rational inv = 1 / row[piv];
      for (auto& v : row) v *= inv;
      echelon.push_back(std::move(row));
      pivots.push_back(piv);
      pick.push_back(e);
      if (static_cast<int>(pick.size()) == dim) break;
    }
    if (static_cast<int>(pick.size()) == dim) {
      IntMatrix m(dim, std::vector<Integer>(dim, 0));
      for (int i = 0; i < dim; ++i)
        for (auto [k, c] : top.coords[pick[i]]) m[i][k] += c;
      Integer det = bareiss_det(m);
      if (det == 1 || det == -1) chosen = pick;
    }
  }

  PeriodBasis basis;
  IntMatrix m(dim, std::vector<Integer>(dim, 0));
  for (int i = 0; i < dim; ++i) {
    int e = chosen[i];
    basis.periods.push_back(
        {gl[e].period, simple_period_internal(epp, e) ? PeriodKind::SimpleInternal : PeriodKind::Structural, e});
    for (auto [k, c] : top.coords[e]) m[i][k] += c;
  }
  bool identity = chosen == top.leftover;
  IntMatrix inv;
  if (!identity) inv = unimodular_inverse(m);
  basis.gluing_coords.assign(gl.size(), std::vector<std::int64_t>(dim, 0));
  for (auto& e : gl) {
    auto& out = basis.gluing_coords[e.id];
    if (identity) {
      for (auto [k, c] : top.coords[e.id]) out[k] += c;
      continue;
    }
    // x * M = c  =>  x = c * M^{-1}
    for (auto [k, c] : top.coords[e.id])
      for (int j = 0; j < dim; ++j) out[j] += c * to_int64(inv[k][j]);
  }
  return basis;
}

namespace {

struct RayHit {
  int side = -1;
  double t = INFINITY;
  bool vertex = false;
};

RayHit exit_ray(const std::vector<Vec2>& pts, Vec2 x, Vec2 d, int skip_side) {
  RayHit hit;
  const int n = static_cast<int>(pts.size());
  for (int s = 0; s < n; ++s) {
    if (s == skip_side) continue;
    Vec2 a = pts[s], b = pts[(s + 1) % n];
    Vec2 e = b - a;
    double den = cross(d, e);
    if (std::fabs(den) < 1e-14) continue;
    double t = cross(a - x, e) / den;
    double u = cross(a - x, d) / den;
    if (t <= 1e-12 || u < -1e-12 || u > 1 + 1e-12) continue;
    if (t < hit.t) {
      hit.t = t;
      hit.side = s;
      double len = std::abs(e);
      hit.vertex = u * len < 1e-12 || (1 - u) * len < 1e-12;
    }
  }
  return hit;
}

}  // namespace

bool simple_period_internal(const Epp& epp, int gluing) {
  const Gluing& g = epp.gluings()[gluing];
  if (!g.boundary) return false;
  const Vec2 p = g.period.value();
  const double len = std::abs(p);
  const Vec2 d = p / len;
  const int n = epp.polygon().size();
  const int s = g.side;
  // The copy of the side on the odd image sits at (copy on the even image) - p.
  const auto& odd_pts = epp.placed(g.odd);
  Vec2 a = odd_pts[s], b = odd_pts[(s + 1) % n];
  for (int j = 0; j < 16; ++j) {
    double u = (2 * j + 1) / 32.0;
    Vec2 x = a + u * (b - a);
    int img = g.odd;
    int entry = s;
    double travelled = 0;
    bool ok = false;
    for (int steps = 0; steps < 4 * static_cast<int>(epp.images().size()) + 8; ++steps) {
      if (!epp.polygon().contains(epp.images()[img].iso.inverse().apply(x + 1e-9 * d))) break;
      RayHit h = exit_ray(epp.placed(img), x, d, entry);
      if (h.side < 0 || h.vertex) break;
      if (travelled + h.t >= len - 1e-9) {
        ok = img == g.even && std::fabs(travelled + h.t - len) < 1e-7 && h.side == s;
        break;
      }
      const Gluing& crossing = epp.gluing_at(img, h.side);
      if (crossing.boundary) break;
      x += h.t * d;
      travelled += h.t;
      img = crossing.even == img ? crossing.odd : crossing.even;
      entry = h.side;
    }
    if (ok) return true;
  }
  return false;
}

std::vector<PocDirection> find_pocs(const Epp& epp, const PeriodBasis& basis) {
  std::vector<PocDirection> out;
  std::vector<int> ids;
  for (auto& p : basis.periods) ids.push_back(p.gluing);
  for (auto& g : epp.gluings())
    if (g.boundary) ids.push_back(g.id);
  std::vector<Cyclo> seen;
  for (int id : ids) {
    const Gluing& g = epp.gluings()[id];
    if (!simple_period_internal(epp, id)) continue;
    bool dup = false;
    for (auto& v : seen)
      if (v == g.period || v == -g.period) {
        dup = true;
        break;
      }
    if (dup) continue;
    seen.push_back(g.period);
    Vec2 v = g.period.value();
    out.push_back({std::atan2(v.imag(), v.real()), {g.period, PeriodKind::SimpleInternal, id}});
  }
  return out;
}

namespace {

struct Orbit {
  bool closed = false;
  double length = 0;
  std::vector<int> route;
  struct Piece {
    int face;
    Vec2 from, to;
  };
  std::vector<Piece> pieces;
  std::vector<std::pair<int, double>> crossings;
};

// Straight-line flow of the translation surface in a fixed direction. With
// first_return an orbit closes at its first return to the start point within
// length len; otherwise it must close after exactly len.
class FlowTracer {
 public:
  FlowTracer(const Epp& epp, Vec2 direction, double len, bool first_return)
      : epp_(epp),
        len_(len),
        d_(direction / std::abs(direction)),
        n_(epp.polygon().size()),
        first_return_(first_return) {
    const auto& angles = epp.polygon().angles();
    for (int c = 0; c < n_; ++c) singular_.push_back(angles[(c + n_ - 1) % n_].p > 1);
  }

  bool transverse(int gluing) const {
    const Gluing& g = epp_.gluings()[gluing];
    const auto& pts = epp_.placed(g.even);
    Vec2 e = pts[(g.side + 1) % n_] - pts[g.side];
    return std::fabs(cross(e, d_)) > 1e-9 * std::abs(e);
  }

  double edge_length(int gluing) const {
    const Gluing& g = epp_.gluings()[gluing];
    const auto& pts = epp_.placed(g.even);
    return std::abs(pts[(g.side + 1) % n_] - pts[g.side]);
  }

  Orbit trace(int gluing, double u) const {
    Orbit o;
    const Gluing& g = epp_.gluings()[gluing];
    const auto& pts = epp_.placed(g.even);
    Vec2 a = pts[g.side], b = pts[(g.side + 1) % n_];
    Vec2 inward = Vec2(0, 1) * (b - a);
    int img = g.even;
    Vec2 x = a + u * (b - a);
    if (dot(inward, d_) < 0) {
      img = g.odd;
      x -= g.period.value();
    }
    const int start = img;
    const Vec2 x0 = x;
    int entry = g.side;
    double travelled = 0;
    for (int steps = 0; steps < 100000; ++steps) {
      RayHit h = exit_ray(epp_.placed(img), x, d_, entry);
      if (h.side < 0 || h.vertex || travelled + h.t > len_ + 1e-9) break;
      Vec2 hit = x + h.t * d_;
      o.pieces.push_back({img, x, hit});
      const Gluing& c = epp_.gluing_at(img, h.side);
      const auto& cp = epp_.placed(img);
      Vec2 ca = cp[h.side], cb = cp[(h.side + 1) % n_];
      o.crossings.emplace_back(c.id, dot(hit - ca, cb - ca) / std::norm(cb - ca));
      bool from_even = c.even == img;
      o.route.push_back(from_even ? c.id : -c.id - 1);
      x = hit - (from_even ? c.period.value() : -c.period.value());
      img = from_even ? c.odd : c.even;
      entry = h.side;
      travelled += h.t;
      bool back = img == start && std::abs(x - x0) < 1e-7;
      if (first_return_ && back) {
        o.closed = true;
        o.length = travelled;
        break;
      }
      if (std::fabs(travelled - len_) < 1e-9) {
        o.closed = back;
        o.length = travelled;
        break;
      }
    }
    return o;
  }

  bool near_singular(const Orbit& o) const {
    for (auto& p : o.pieces) {
      const auto& pts = epp_.placed(p.face);
      for (int c = 0; c < n_; ++c)
        if (singular_[c] && distance_to_segment(pts[c], p.from, p.to) < 1e-6) return true;
    }
    return false;
  }

  // Whether the band between two closed orbits starting on the same edge is
  // free of cone points of angle > 2*pi.
  bool same_cylinder(int gluing, double u1, const Orbit& o1, double u2, const Orbit& o2, int depth = 0) const {
    if (o1.route == o2.route) return true;
    if (std::fabs(u2 - u1) * edge_length(gluing) < 1e-8 || depth > 60) return !near_singular(o1) && !near_singular(o2);
    double um = (u1 + u2) / 2;
    Orbit om = trace(gluing, um);
    if (!om.closed) return false;
    return same_cylinder(gluing, u1, o1, um, om, depth + 1) && same_cylinder(gluing, um, om, u2, o2, depth + 1);
  }

 private:
  const Epp& epp_;
  double len_;
  Vec2 d_;
  int n_;
  bool first_return_;
  std::vector<char> singular_;
};

ChannelReport count_channels(const Epp& epp, const FlowTracer& flow, int samples_per_side) {
  ChannelReport rep;
  const int edges = static_cast<int>(epp.gluings().size());
  const int S = samples_per_side;
  auto pos = [S](int j) { return (j + 0.5) / S; };
  std::vector<Orbit> orbits(static_cast<std::size_t>(edges) * S);
  std::vector<char> usable(edges, 0);
  for (int e = 0; e < edges; ++e) {
    if (!flow.transverse(e)) continue;
    usable[e] = 1;
    for (int j = 0; j < S; ++j) {
      ++rep.samples;
      orbits[e * S + j] = flow.trace(e, pos(j));
      if (orbits[e * S + j].closed) ++rep.periodic;
    }
  }
  UnionFind uf(edges * S);
  for (int e = 0; e < edges; ++e) {
    if (!usable[e]) continue;
    for (int j = 0; j + 1 < S; ++j) {
      const Orbit &a = orbits[e * S + j], &b = orbits[e * S + j + 1];
      if (a.closed && b.closed && flow.same_cylinder(e, pos(j), a, pos(j + 1), b)) uf.unite(e * S + j, e * S + j + 1);
    }
  }
  for (int node = 0; node < edges * S; ++node) {
    const Orbit& o = orbits[node];
    if (!o.closed) continue;
    for (auto [e2, u2] : o.crossings) {
      if (!usable[e2]) continue;
      int lo = static_cast<int>(std::floor(u2 * S - 0.5));
      Orbit here;
      bool traced = false;
      for (int j : {lo, lo + 1}) {
        if (j < 0 || j >= S || !orbits[e2 * S + j].closed) continue;
        if (!traced) {
          here = flow.trace(e2, u2);
          traced = true;
        }
        if (here.closed && flow.same_cylinder(e2, u2, here, pos(j), orbits[e2 * S + j])) uf.unite(node, e2 * S + j);
      }
    }
  }
  // Ends of edges meeting at a regular vertex lie on both sides of the closed
  // line through it, so they share a channel unless that line grazes a cone point.
  const SurfaceTopology top = surface_topology(epp);
  const Polygon& poly = epp.polygon();
  const int n = poly.size();
  std::vector<Rational> cone(top.vertices, Rational(0));
  for (int c = 0; c < static_cast<int>(top.corner_vertex.size()); ++c)
    cone[top.corner_vertex[c]] += poly.angles()[(c % n + n - 1) % n].fraction();
  std::map<int, std::vector<int>> at_vertex;
  for (int e = 0; e < edges; ++e) {
    if (!usable[e]) continue;
    const Gluing& g = epp.gluings()[e];
    for (int end = 0; end < 2; ++end) {
      int v = top.corner_vertex[g.even * n + (g.side + end) % n];
      if (cone[v] != 2) continue;
      double u = end ? 1 - 1e-9 : 1e-9;
      Orbit o = flow.trace(e, u);
      if (!o.closed || flow.near_singular(o)) continue;
      int j = end ? S - 1 : 0;
      if (!orbits[e * S + j].closed || !flow.same_cylinder(e, u, o, pos(j), orbits[e * S + j])) continue;
      at_vertex[v].push_back(e * S + j);
    }
  }
  for (auto& [v, nodes] : at_vertex)
    for (int node : nodes) uf.unite(nodes.front(), node);
  std::map<int, double> roots;
  for (int node = 0; node < edges * S; ++node)
    if (orbits[node].closed) roots.emplace(uf.find(node), orbits[node].length);
  rep.channels = static_cast<int>(roots.size());
  for (auto& [root, length] : roots) rep.lengths.push_back(length);
  std::sort(rep.lengths.begin(), rep.lengths.end());
  return rep;
}

}  // namespace

ChannelReport periodic_channels(const Epp& epp, Vec2 period, int samples_per_side) {
  return count_channels(epp, FlowTracer(epp, period, std::abs(period), false), samples_per_side);
}

ChannelReport direction_channels(const Epp& epp, Vec2 direction, double max_length, int samples_per_side) {
  return count_channels(epp, FlowTracer(epp, direction, max_length, true), samples_per_side);
}

}  // namespace billiards
