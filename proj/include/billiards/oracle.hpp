#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "billiards/polygon.hpp"
#include "billiards/swf.hpp"

namespace billiards {

// Interior nodes of the square grid origin + h (i, j) strictly inside the polygon.
struct GridDomain {
  double h = 0;
  Vec2 origin;
  int nx = 0;
  int ny = 0;
  // Unknown id of node (i, j) at i + nx * j, or -1.
  std::vector<int> index;
  std::vector<std::array<int, 2>> nodes;
  // Per unknown and direction (+x, +y, -x, -y): neighbour id, or kDirichlet /
  // kNeumann when the link leaves the domain.
  std::vector<std::array<int, 4>> links;
  std::vector<BoundaryCondition> edge_bc;

  static constexpr int kDirichlet = -1;
  static constexpr int kNeumann = -2;

  int size() const { return static_cast<int>(nodes.size()); }
  Vec2 point(int unknown) const;
};

// Links leaving the domain take the condition of the nearest polygon side.
// Empty bc means Dirichlet everywhere. Throws TooCoarse if the shortest side
// is less than min_cells * h or the mask is disconnected.
GridDomain rasterize(const Polygon& polygon, double h, std::vector<BoundaryCondition> bc = {}, int min_cells = 8);

// Lowest `count` eigenvalues of -1/2 times the 5-point Laplacian; Neumann
// links use a mirror ghost equal to the centre value. Dense solver up to
// 4000 unknowns, shift-invert Lanczos with full reorthogonalization and
// deflation above.
std::vector<double> fd_eigenvalues(const GridDomain& domain, int count);

struct RichardsonResult {
  double order = 0;
  double extrapolated = 0;
};

// Values at h, h/2, h/4.
RichardsonResult richardson(double e_h, double e_h2, double e_h4);

struct LevelMatch {
  int index = 0;
  double semiclassical = 0;
  std::optional<int> numerical_index;
  double numerical = 0;
  // |E_num / E_sc - 1|
  double rel_error = 0;
};

struct MatchReport {
  std::vector<LevelMatch> levels;
  double max_error = 0;
  double mean_error = 0;
  double rel_tol = 0;
  bool pass = false;
  // Numerical levels inside the semiclassical energy window left unmatched.
  double unmatched_fraction = 0;
  int unmatched = 0;
  int window = 0;
};

// One-to-one matching, greedy in |log(E_num / E_sc)|, so swapping the lists
// yields the transposed pairing.
MatchReport compare_spectra(const std::vector<double>& semiclassical, const std::vector<double>& numerical,
                            double rel_tol);

std::string match_csv(const MatchReport& report);

// Rectangle [0,x2]x[0,y2] minus the corner (x1,x2]x(y1,y2].
struct BrokenRectangle {
  Rational x1, x2, y1, y2;
  Polygon polygon() const;
};

// x' = x + g(x, y), y' = y + h(x, y) with h = 0.
struct DeformationMap {
  double x1 = 0, x2 = 0, x3 = 0, y1 = 0;
  double epsilon = 0;

  Vec2 apply(Vec2 r) const;
  double g(Vec2 r) const;
  // (dg/dx, dg/dy)
  Vec2 dg(Vec2 r) const;
};

// Moves the right side of the lower arm from x2 to x3 by a linear ramp on
// x1 <= x <= x2, y <= y1. Throws OutOfRange unless x1 < x3 <= x2.
std::pair<BrokenRectangle, DeformationMap> deform_domain(const BrokenRectangle& base, const Rational& x3);

// x3 giving the deformation size epsilon.
Rational x3_for_epsilon(const BrokenRectangle& base, const Rational& epsilon);

struct DeformationBounds {
  double sup_g = 0;
  double sup_dg = 0;
  double epsilon = 0;
  bool ok = false;
};

// Sampled sup |g| and sup |grad g| on a grid over the base domain, compared
// with epsilon (the ramp attains it, so the check is <= up to rounding).
DeformationBounds check_deformation_bounds(const DeformationMap& map, const BrokenRectangle& base, int samples = 200);

struct PerturbationRow {
  double epsilon = 0;
  Rational x3;
  double eta = 0;
  std::vector<double> energies;
  DeformationBounds bounds;
};

struct PerturbationStudy {
  std::vector<double> base_energies;
  std::vector<PerturbationRow> rows;
  bool strictly_decreasing = false;
};

// eta = max over the first `count` ordered levels of |E'_n / E_n - 1|.
// epsilons must be strictly decreasing.
PerturbationStudy perturbation_study(const BrokenRectangle& base, const std::vector<Rational>& epsilons, int count,
                                     double h);

std::string study_csv(const PerturbationStudy& study);

}  // namespace billiards
