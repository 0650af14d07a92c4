#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "billiards/cyclo.hpp"
#include "billiards/polygon.hpp"

namespace billiards {

// z -> zeta^rotation * (reflecting ? conj(z) : z) + translation, zeta = exp(i*pi/N).
struct Isometry {
  bool reflecting = false;
  int rotation = 0;
  Cyclo translation;

  static Isometry identity(const ContextPtr& ctx);

  Cyclo apply_linear(const Cyclo& z) const;
  Cyclo apply(const Cyclo& z) const { return apply_linear(z) + translation; }
  Vec2 apply_linear(Vec2 z) const;
  Vec2 apply(Vec2 z) const { return apply_linear(z) + translation.value(); }

  // (*this) o inner
  Isometry compose(const Isometry& inner) const;
  Isometry inverse() const;
  int linear_key() const;
  bool operator==(const Isometry& o) const;
};

// Reflection across the line through side k of the base polygon.
Isometry side_reflection(const Polygon& poly, int side);

struct PolygonImage {
  int index = 0;
  Isometry iso;
  bool odd() const { return iso.reflecting; }
};

PolygonImage reflect_image(const Polygon& poly, const PolygonImage& image, int side);

// Images around vertex k (where side k-1 ends and side k starts), obtained by
// alternately reflecting across the two sides through it.
std::vector<PolygonImage> unfold_vertex(const Polygon& poly, int vertex);

// Side `side` of the even image is glued to side `side` of the odd image.
// period = translation(T_even o R_side) - translation(T_odd); zero for sides
// shared inside the pattern, nonzero for the boundary edge pairs.
struct Gluing {
  int id = 0;
  int side = 0;
  int even = 0;
  int odd = 0;
  Cyclo period;
  bool boundary = false;
};

enum class PeriodKind { SimpleInternal, Structural, Compound };
std::string to_string(PeriodKind kind);

struct Period {
  Cyclo vector;
  PeriodKind kind = PeriodKind::Structural;
  int gluing = -1;
  Vec2 value() const { return vector.value(); }
};

class Epp {
 public:
  Epp(Polygon poly, std::vector<PolygonImage> images, std::vector<Gluing> gluings, std::vector<int> tree,
      std::vector<int> by_linear, std::vector<int> gluing_index);

  const Polygon& polygon() const { return poly_; }
  int C() const { return poly_.n_lcm(); }
  const std::vector<PolygonImage>& images() const { return images_; }
  const std::vector<Gluing>& gluings() const { return gluings_; }
  // Gluings used to place the images (breadth-first tree); all are interior.
  const std::vector<int>& tree() const { return tree_; }
  const Gluing& gluing_at(int image, int side) const;
  int image_by_linear(bool reflecting, int rotation) const;
  // Vertices of each placed image (float).
  const std::vector<Vec2>& placed(int image) const { return placed_[image]; }
  std::vector<Period> simple_periods() const;

 private:
  Polygon poly_;
  std::vector<PolygonImage> images_;
  std::vector<Gluing> gluings_;
  std::vector<int> tree_;
  std::vector<int> by_linear_;
  std::vector<int> gluing_index_;
  std::vector<std::vector<Vec2>> placed_;
};

// Breadth-first unfolding; side_order (a permutation of the sides) changes
// which equivalent pattern is produced.
Epp build_epp(const Polygon& poly, const std::vector<int>& side_order = {});

std::string epp_dump(const Epp& epp);

int genus(const Polygon& poly);

// Cellular structure of the translation surface glued from the pattern:
// faces are images, edges are gluings, vertices are classes of image corners.
struct SurfaceTopology {
  int vertices = 0;
  int edges = 0;
  int faces = 0;
  int genus = 0;
  std::vector<int> primal_tree;
  std::vector<int> leftover;
  // Surface vertex of corner c of image i, indexed i * sides + c.
  std::vector<int> corner_vertex;
  // Homology coordinates of the dual cycle through each gluing, in the basis
  // of dual cycles through the leftover gluings: sparse (index, coefficient).
  std::vector<std::vector<std::pair<int, int>>> coords;
};

SurfaceTopology surface_topology(const Epp& epp);

struct PeriodBasis {
  std::vector<Period> periods;
  // Integer coordinates of every gluing period in terms of `periods`.
  std::vector<std::vector<std::int64_t>> gluing_coords;
};

// 2g periods spanning the period group of the surface. When the genus is
// small, a basis of short simple periods is preferred if it is unimodular.
PeriodBasis period_basis(const Epp& epp, bool prefer_short = true);

struct PocDirection {
  double angle = 0;
  Period period;
};

// Simple periods whose translation segment runs inside the pattern from one
// copy of the glued side to the other.
std::vector<PocDirection> find_pocs(const Epp& epp, const PeriodBasis& basis);

bool simple_period_internal(const Epp& epp, int gluing);

struct ChannelReport {
  int samples = 0;
  int periodic = 0;
  // Cylinders of parallel closed orbits met by the periodic samples.
  int channels = 0;
  // Period length of each channel, ascending.
  std::vector<double> lengths;
};

// Traces straight lines of the surface with holonomy `period` from sample
// points on every side copy and counts the closed ones.
ChannelReport periodic_channels(const Epp& epp, Vec2 period, int samples_per_side = 64);

// Channels of closed lines in `direction` with any period up to max_length.
ChannelReport direction_channels(const Epp& epp, Vec2 direction, double max_length, int samples_per_side = 64);

}  // namespace billiards
