#include "billiards/oracle.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "billiards/error.hpp"
#include "billiards/geometry.hpp"
#include "billiards/shapes.hpp"

namespace billiards {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

constexpr std::array<std::array<int, 2>, 4> kSteps{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};

int nearest_side(const std::vector<Vec2>& pts, Vec2 p) {
  const int n = static_cast<int>(pts.size());
  int best = 0;
  double dist = INFINITY;
  for (int s = 0; s < n; ++s) {
    double d = distance_to_segment(p, pts[s], pts[(s + 1) % n]);
    if (d < dist - 1e-12) {
      dist = d;
      best = s;
    }
  }
  return best;
}

SpMat assemble(const GridDomain& dom) {
  const int n = dom.size();
  const double w = 1 / (2 * dom.h * dom.h);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(n) * 5);
  for (int u = 0; u < n; ++u) {
    double diag = 4 * w;
    for (int d = 0; d < 4; ++d) {
      int v = dom.links[u][d];
      if (v >= 0)
        trip.emplace_back(u, v, -w);
      else if (v == GridDomain::kNeumann)
        diag -= w;
    }
    trip.emplace_back(u, u, diag);
  }
  SpMat A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

std::vector<double> dense_eigenvalues(const SpMat& A, int count) {
  Eigen::MatrixXd M(A);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "dense eigensolver failed");
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + count);
  return out;
}

// Shift-invert Lanczos on (A - sigma)^-1 restricted to the complement of the
// locked eigenvectors; converged Ritz pairs are locked and the process is
// restarted until a run finds nothing below the count-th locked value.
std::vector<double> lanczos_eigenvalues(const SpMat& A, int count) {
  const int n = static_cast<int>(A.rows());
  const double sigma = -1;
  SpMat shifted = A;
  for (int i = 0; i < n; ++i) shifted.coeffRef(i, i) -= sigma;
  Eigen::SimplicialLDLT<SpMat> solver(shifted);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "factorization failed");

  std::mt19937 rng(12345);
  std::normal_distribution<double> normal;
  std::vector<Eigen::VectorXd> locked;
  std::vector<double> values;

  auto orthogonalize = [&](Eigen::VectorXd& w, const std::vector<Eigen::VectorXd>& basis, int upto) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& y : locked) w -= y.dot(w) * y;
      for (int i = 0; i < upto; ++i) w -= basis[i].dot(w) * basis[i];
    }
  };

  const int steps_default = std::min(n, std::max(2 * count + 40, 80));
  for (int run = 0; run < 40; ++run) {
    const int room = n - static_cast<int>(locked.size());
    if (room <= 0) break;
    const int steps = std::min(room, steps_default);
    std::vector<Eigen::VectorXd> V;
    std::vector<double> alpha, beta;
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = normal(rng);
    orthogonalize(v, V, 0);
    v.normalize();
    V.push_back(v);
    for (int j = 0; j < steps; ++j) {
      Eigen::VectorXd w = solver.solve(V[j]);
      alpha.push_back(V[j].dot(w));
      orthogonalize(w, V, j + 1);
      double b = w.norm();
      if (j + 1 == steps || b < 1e-13 * std::fabs(alpha.back())) {
        beta.push_back(b);
        break;
      }
      beta.push_back(b);
      V.push_back(w / b);
    }
    const int k = static_cast<int>(alpha.size());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < k) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    // Largest theta first, i.e. lowest eigenvalue of A first.
    std::vector<std::pair<double, Eigen::VectorXd>> found;
    for (int i = k - 1; i >= 0; --i) {
      double theta = es.eigenvalues()[i];
      if (theta <= 0) break;
      if (std::fabs(beta[k - 1] * es.eigenvectors()(k - 1, i)) > 1e-10 * theta) continue;
      Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
      for (int j = 0; j < k; ++j) y += es.eigenvectors()(j, i) * V[j];
      orthogonalize(y, V, 0);
      y.normalize();
      Eigen::VectorXd r = solver.solve(y) - theta * y;
      if (r.norm() > 1e-8 * theta) continue;
      found.emplace_back(sigma + 1 / theta, y);
    }
    if (found.empty()) throw Error(ErrorCode::ConvergenceFailure, "Lanczos found no converged Ritz pair");
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const bool enough = static_cast<int>(sorted.size()) >= count;
    const double cutoff = enough ? sorted[count - 1] : INFINITY;
    if (enough && found.front().first > cutoff * (1 + 1e-9) + 1e-12) {
      return {sorted.begin(), sorted.begin() + count};
    }
    for (auto& [lambda, y] : found) {
      if (enough && lambda > cutoff * (1 + 1e-9) + 1e-12) break;
      orthogonalize(y, V, 0);
      double norm = y.norm();
      if (norm < 0.5) continue;
      locked.push_back(y / norm);
      values.push_back(lambda);
    }
  }
  throw Error(ErrorCode::ConvergenceFailure, "Lanczos did not converge");
}

}  // namespace

Vec2 GridDomain::point(int unknown) const { return origin + h * Vec2(nodes[unknown][0], nodes[unknown][1]); }

GridDomain rasterize(const Polygon& polygon, double h, std::vector<BoundaryCondition> bc, int min_cells) {
  const auto& pts = polygon.points();
  const int sides = static_cast<int>(pts.size());
  if (!(h > 0)) throw Error(ErrorCode::InvalidInput, "grid spacing must be positive");
  double shortest = INFINITY;
  for (int s = 0; s < sides; ++s) shortest = std::min(shortest, std::abs(pts[(s + 1) % sides] - pts[s]));
  if (min_cells < 1) throw Error(ErrorCode::InvalidInput, "min_cells must be positive");
  if (h > shortest / min_cells * (1 + 1e-12))
    throw Error(ErrorCode::TooCoarse, "grid too coarse for the shortest side");
  if (bc.empty()) bc.assign(sides, BoundaryCondition::Dirichlet);
  if (static_cast<int>(bc.size()) != sides) throw Error(ErrorCode::InvalidInput, "one condition per side expected");

  GridDomain dom;
  dom.h = h;
  dom.edge_bc = bc;
  Box box = bounding_box(pts);
  dom.origin = box.lo;
  dom.nx = static_cast<int>(std::floor((box.hi.real() - box.lo.real()) / h + 1e-9)) + 1;
  dom.ny = static_cast<int>(std::floor((box.hi.imag() - box.lo.imag()) / h + 1e-9)) + 1;
  dom.index.assign(static_cast<std::size_t>(dom.nx) * dom.ny, -1);
  for (int j = 0; j < dom.ny; ++j)
    for (int i = 0; i < dom.nx; ++i) {
      Vec2 p = dom.origin + h * Vec2(i, j);
      if (distance_to_boundary(pts, p) <= 1e-9 * h || !point_in_polygon(pts, p)) continue;
      dom.index[i + dom.nx * j] = dom.size();
      dom.nodes.push_back({i, j});
    }
  if (dom.nodes.empty()) throw Error(ErrorCode::TooCoarse, "no interior grid points");
  dom.links.resize(dom.nodes.size());
  for (int u = 0; u < dom.size(); ++u) {
    auto [i, j] = dom.nodes[u];
    for (int d = 0; d < 4; ++d) {
      int a = i + kSteps[d][0], b = j + kSteps[d][1];
      int v = (a >= 0 && b >= 0 && a < dom.nx && b < dom.ny) ? dom.index[a + dom.nx * b] : -1;
      if (v >= 0) {
        dom.links[u][d] = v;
        continue;
      }
      Vec2 mid = dom.origin + h * Vec2(i + 0.5 * kSteps[d][0], j + 0.5 * kSteps[d][1]);
      int side = nearest_side(pts, mid);
      dom.links[u][d] = bc[side] == BoundaryCondition::Dirichlet ? GridDomain::kDirichlet : GridDomain::kNeumann;
    }
  }
  // Connectivity of the mask.
  std::vector<char> seen(dom.nodes.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : dom.links[u])
      if (v >= 0 && !seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
  }
  if (reached != dom.size()) throw Error(ErrorCode::TooCoarse, "grid mask is disconnected");
  return dom;
}

std::vector<double> fd_eigenvalues(const GridDomain& domain, int count) {
  const int n = domain.size();
  if (count < 1 || count > n / 4)
    throw Error(ErrorCode::InvalidInput, "count must be between 1 and a quarter of the grid");
  SpMat A = assemble(domain);
  if (n <= 4000) return dense_eigenvalues(A, count);
  return lanczos_eigenvalues(A, count);
}

RichardsonResult richardson(double e_h, double e_h2, double e_h4) {
  RichardsonResult r;
  r.order = std::log2((e_h - e_h2) / (e_h2 - e_h4));
  r.extrapolated = e_h4 + (e_h4 - e_h2) / 3;
  return r;
}

MatchReport compare_spectra(const std::vector<double>& semiclassical, const std::vector<double>& numerical,
                            double rel_tol) {
  MatchReport rep;
  rep.rel_tol = rel_tol;
  struct Pair {
    double cost;
    int i, j;
  };
  std::vector<Pair> pairs;
  for (int i = 0; i < static_cast<int>(semiclassical.size()); ++i)
    for (int j = 0; j < static_cast<int>(numerical.size()); ++j)
      pairs.push_back({std::fabs(std::log(numerical[j] / semiclassical[i])), i, j});
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  std::vector<int> partner_of_sc(semiclassical.size(), -1), partner_of_num(numerical.size(), -1);
  for (const Pair& p : pairs) {
    if (partner_of_sc[p.i] >= 0 || partner_of_num[p.j] >= 0) continue;
    partner_of_sc[p.i] = p.j;
    partner_of_num[p.j] = p.i;
  }
  double sum = 0;
  bool all = true;
  for (int i = 0; i < static_cast<int>(semiclassical.size()); ++i) {
    LevelMatch m;
    m.index = i;
    m.semiclassical = semiclassical[i];
    if (partner_of_sc[i] >= 0) {
      m.numerical_index = partner_of_sc[i];
      m.numerical = numerical[partner_of_sc[i]];
      m.rel_error = std::fabs(m.numerical / m.semiclassical - 1);
    } else {
      m.rel_error = INFINITY;
      all = false;
    }
    rep.max_error = std::max(rep.max_error, m.rel_error);
    sum += m.rel_error;
    rep.levels.push_back(m);
  }
  rep.mean_error = semiclassical.empty() ? 0 : sum / static_cast<double>(semiclassical.size());
  rep.pass = all && rep.max_error < rel_tol;
  if (!semiclassical.empty()) {
    auto [lo, hi] = std::minmax_element(semiclassical.begin(), semiclassical.end());
    for (int j = 0; j < static_cast<int>(numerical.size()); ++j) {
      if (numerical[j] < *lo * (1 - rel_tol) || numerical[j] > *hi * (1 + rel_tol)) continue;
      ++rep.window;
      rep.unmatched += partner_of_num[j] < 0;
    }
    rep.unmatched_fraction = rep.window ? static_cast<double>(rep.unmatched) / rep.window : 0;
  }
  return rep;
}

std::string match_csv(const MatchReport& report) {
  std::ostringstream os;
  os.precision(12);
  os << "level_index,numerical,semiclassical,rel_error\n";
  for (const auto& m : report.levels) {
    os << m.index << ",";
    if (m.numerical_index) os << m.numerical;
    os << "," << m.semiclassical << ",";
    if (m.numerical_index) os << m.rel_error;
    os << "\n";
  }
  return os.str();
}

Polygon BrokenRectangle::polygon() const { return shapes::broken_rectangle(x1, x2, y1, y2); }

Vec2 DeformationMap::apply(Vec2 r) const { return r + g(r); }

double DeformationMap::g(Vec2 r) const {
  const double x = r.real(), y = r.imag();
  if (x < x1 || y > y1) return 0;
  return -(x - x1) * (x2 - x3) / (x2 - x1);
}

Vec2 DeformationMap::dg(Vec2 r) const {
  const double x = r.real(), y = r.imag();
  if (x < x1 || y > y1) return 0;
  return {-(x2 - x3) / (x2 - x1), 0};
}

std::pair<BrokenRectangle, DeformationMap> deform_domain(const BrokenRectangle& base, const Rational& x3) {
  if (!(base.x1 < x3 && x3 <= base.x2)) throw Error(ErrorCode::OutOfRange, "x3 must satisfy x1 < x3 <= x2");
  BrokenRectangle out = base;
  out.x2 = x3;
  DeformationMap map;
  map.x1 = to_double(base.x1);
  map.x2 = to_double(base.x2);
  map.x3 = to_double(x3);
  map.y1 = to_double(base.y1);
  Rational width = base.x2 - base.x1;
  Rational eps = width > 1 ? Rational(base.x2 - x3) : Rational((base.x2 - x3) / width);
  map.epsilon = to_double(eps);
  return {out, map};
}

Rational x3_for_epsilon(const BrokenRectangle& base, const Rational& epsilon) {
  Rational width = base.x2 - base.x1;
  return width > 1 ? Rational(base.x2 - epsilon) : Rational(base.x2 - epsilon * width);
}

DeformationBounds check_deformation_bounds(const DeformationMap& map, const BrokenRectangle& base, int samples) {
  DeformationBounds b;
  b.epsilon = map.epsilon;
  Polygon poly = base.polygon();
  Box box = bounding_box(poly.points());
  for (int j = 0; j <= samples; ++j)
    for (int i = 0; i <= samples; ++i) {
      Vec2 r(box.lo.real() + (box.hi.real() - box.lo.real()) * i / samples,
             box.lo.imag() + (box.hi.imag() - box.lo.imag()) * j / samples);
      if (!point_in_polygon(poly.points(), r) && distance_to_boundary(poly.points(), r) > 1e-12) continue;
      b.sup_g = std::max(b.sup_g, std::fabs(map.g(r)));
      Vec2 d = map.dg(r);
      b.sup_dg = std::max({b.sup_dg, std::fabs(d.real()), std::fabs(d.imag())});
    }
  const double slack = 1e-12 * (1 + map.epsilon);
  b.ok = b.sup_g <= map.epsilon + slack && b.sup_dg <= map.epsilon + slack;
  return b;
}

PerturbationStudy perturbation_study(const BrokenRectangle& base, const std::vector<Rational>& epsilons, int count,
                                     double h) {
  for (std::size_t i = 1; i < epsilons.size(); ++i)
    if (!(epsilons[i] < epsilons[i - 1])) throw Error(ErrorCode::InvalidInput, "epsilons must be strictly decreasing");
  PerturbationStudy study;
  study.base_energies = fd_eigenvalues(rasterize(base.polygon(), h), count);
  for (const Rational& eps : epsilons) {
    PerturbationRow row;
    row.epsilon = to_double(eps);
    row.x3 = x3_for_epsilon(base, eps);
    auto [shape, map] = deform_domain(base, row.x3);
    row.bounds = check_deformation_bounds(map, base);
    row.energies = eps == 0 ? study.base_energies : fd_eigenvalues(rasterize(shape.polygon(), h), count);
    for (int k = 0; k < count; ++k)
      row.eta = std::max(row.eta, std::fabs(row.energies[k] / study.base_energies[k] - 1));
    study.rows.push_back(std::move(row));
  }
  study.strictly_decreasing = true;
  for (std::size_t i = 1; i < study.rows.size(); ++i)
    study.strictly_decreasing = study.strictly_decreasing && study.rows[i].eta < study.rows[i - 1].eta;
  return study;
}

std::string study_csv(const PerturbationStudy& study) {
  std::ostringstream os;
  os.precision(12);
  os << "epsilon,eta\n";
  for (const auto& r : study.rows) os << r.epsilon << "," << r.eta << "\n";
  return os.str();
}

}  // namespace billiards
