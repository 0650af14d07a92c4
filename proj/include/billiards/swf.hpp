#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "billiards/unfold.hpp"

namespace billiards {

enum class BoundaryCondition { Dirichlet, Neumann };

struct SignPrescription {
  // One sign per EPP image; eta[0] = +1.
  std::vector<int> eta;
  // Induced condition on each side of the base polygon.
  std::vector<BoundaryCondition> edge_bc;
  // "dirichlet", "neumann" or "mixed:" followed by one letter (D/N) per side.
  std::string label;
};

// All consistent prescriptions: Dirichlet first, Neumann second, then the
// mixed ones ordered by their per-side bit mask.
std::vector<SignPrescription> enumerate_prescriptions(const Epp& epp);

// eta * exp(branch * i * (alpha + p . r))
struct PlaneWaveTerm {
  int eta = 1;
  double alpha = 0;
  Vec2 p;
};

struct Swf {
  std::vector<PlaneWaveTerm> terms;
  double energy = 0;
  int branch = 1;
};

struct SwfPair {
  Swf plus;
  Swf minus;
};

// Throws UnquantizedMomentum unless p . P is a multiple of 2 pi for every
// boundary gluing period P.
SwfPair compile_swf(const Epp& epp, const SignPrescription& prescription, Vec2 momentum, double tol = 1e-9);

std::complex<double> evaluate(const Swf& swf, Vec2 r);
std::vector<std::complex<double>> evaluate(const Swf& swf, const std::vector<Vec2>& points);
std::array<std::complex<double>, 2> gradient(const Swf& swf, Vec2 r);

// Sum over the images of the point, without the compiled phases.
std::complex<double> evaluate_direct(const Epp& epp, const SignPrescription& prescription, Vec2 momentum, int branch,
                                     Vec2 r);

// Re or Im of the + branch: (Psi+ + Psi-)/2 or (Psi+ - Psi-)/(2i).
enum class RealPart { Cos, Sin };

struct RealSwf {
  std::vector<PlaneWaveTerm> terms;
  RealPart part = RealPart::Cos;
  double energy = 0;
  // Identically zero on the polygon.
  bool degenerate = false;

  double value(Vec2 r) const;
  Vec2 gradient(Vec2 r) const;
};

std::array<RealSwf, 2> real_combinations(const SwfPair& pair, const Polygon& polygon);

struct BoundaryReport {
  // Residuals divided by the number of terms (and by |p| for the derivative).
  double dirichlet_max = 0;
  double neumann_max = 0;
  int samples = 0;
  double tol = 0;
  bool pass = false;
};

BoundaryReport verify_boundary(const Swf& swf, const Polygon& polygon, const SignPrescription& prescription,
                               int samples_per_edge = 1000, double tol = 1e-9);
BoundaryReport verify_boundary(const RealSwf& swf, const Polygon& polygon, const SignPrescription& prescription,
                               int samples_per_edge = 1000, double tol = 1e-9);

struct HelmholtzReport {
  double norm_spread = 0;
  // max |Delta_h Psi + 2 E Psi| over the sample points, and the bound
  // 1e-6 E max|Psi| it is compared with.
  double max_residual = 0;
  double bound = 0;
  int points = 0;
  bool pass = false;
};

// Throws MomentumMismatch if the |p_k| differ by more than 1e-12 relative.
HelmholtzReport verify_helmholtz(const Swf& swf, const Polygon& polygon, int points = 100, std::uint32_t seed = 1);

// Reflection across the line through `origin` with direction `direction`.
struct Reflection {
  Vec2 origin;
  Vec2 direction;
  Vec2 apply(Vec2 r) const;
};

enum class Parity { Even, Odd, None };
std::string to_string(Parity parity);

// Throws SymmetryNotAutomorphism unless the reflection permutes the vertices.
Parity symmetry_probe(const std::function<double(Vec2)>& f, const Polygon& polygon, const Reflection& symmetry,
                      int points = 200, double tol = 1e-9, std::uint32_t seed = 1);
Parity symmetry_probe(const RealSwf& swf, const Polygon& polygon, const Reflection& symmetry, int points = 200,
                      double tol = 1e-9);

// L2 norm over the polygon by triangle quadrature.
double l2_norm(const Swf& swf, const Polygon& polygon);
double l2_norm(const RealSwf& swf, const Polygon& polygon);

// Uniformly distributed interior points, deterministic for a given seed.
std::vector<Vec2> interior_points(const Polygon& polygon, int count, std::uint32_t seed, double margin = 0);

// max |a - c b| / max |a| for the least-squares complex scale c.
double proportional_residual(const std::vector<std::complex<double>>& a, const std::vector<std::complex<double>>& b);

struct Grid {
  int width = 0;
  int height = 0;
};

// Rows x,y,re,im,abs2 over the bounding box; points outside are skipped.
std::string grid_csv(const Swf& swf, const Polygon& polygon, Grid grid);
std::string grid_csv(const RealSwf& swf, const Polygon& polygon, Grid grid);
// Binary 8-bit graymap of |Psi|^2 scaled to the maximum; outside pixels are 0.
std::string grid_pgm(const Swf& swf, const Polygon& polygon, Grid grid);
std::string grid_pgm(const RealSwf& swf, const Polygon& polygon, Grid grid);

}  // namespace billiards
