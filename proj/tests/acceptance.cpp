// Acceptance run: one PASS/FAIL line per criterion.
// Usage: acceptance [criterion ...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "billiards/error.hpp"
#include "billiards/lattice.hpp"
#include "billiards/oracle.hpp"
#include "billiards/quantize.hpp"
#include "billiards/shapes.hpp"
#include "billiards/swf.hpp"
#include "closed_forms.hpp"

using namespace billiards;
using closed_forms::kPi;
using closed_forms::kS3;

namespace {

using Complex = std::complex<double>;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

bool close(double a, double b, double rel = 1e-9) { return std::fabs(a - b) <= rel * std::max(1.0, std::fabs(b)); }

std::vector<std::int64_t> find_combo(const std::vector<Period>& basis, Vec2 target) {
  const int count = static_cast<int>(basis.size());
  std::vector<std::int64_t> c(count, -3);
  while (true) {
    if (std::abs(combine(basis, c).value() - target) < 1e-9) return c;
    int k = 0;
    while (k < count && c[k] == 3) c[k++] = -3;
    if (k == count) break;
    ++c[k];
  }
  throw Error(ErrorCode::NotInLattice, "no small combination found");
}

std::vector<std::int64_t> add(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b, int s) {
  std::vector<std::int64_t> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + s * b[i];
  return r;
}

PairChoice sixty_degree_pair(const std::vector<Period>& basis) {
  PairChoice p = default_pair(basis);
  if (dot(combine(basis, p.first).value(), combine(basis, p.second).value()) < 0)
    for (auto& c : p.second) c = -c;
  return p;
}

std::vector<double> expand(const std::vector<SpectrumEntry>& s) {
  std::vector<double> e;
  for (const auto& x : s)
    for (int k = 0; k < x.degeneracy; ++k) e.push_back(x.energy);
  return e;
}

bool same_levels(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!close(a[i], b[i])) return false;
  return true;
}

int brute_force_prescriptions(const Epp& epp) {
  const int images = static_cast<int>(epp.images().size());
  int count = 0;
  for (std::uint64_t bits = 0; bits < (1ull << (images - 1)); ++bits) {
    auto eta = [&](int k) { return k == 0 ? 1 : (((bits >> (k - 1)) & 1) ? -1 : 1); };
    std::map<int, int> relation;
    bool ok = true;
    for (const Gluing& g : epp.gluings()) {
      auto [it, fresh] = relation.emplace(g.side, eta(g.even) * eta(g.odd));
      if (!fresh && it->second != eta(g.even) * eta(g.odd)) {
        ok = false;
        break;
      }
    }
    count += ok;
  }
  return count;
}

template <class F>
std::vector<Complex> sample(const std::vector<Vec2>& pts, F f) {
  std::vector<Complex> out;
  for (Vec2 r : pts) out.push_back(f(r));
  return out;
}

// 1. Genus and period counts.
void genus_and_periods(Outcome& out) {
  struct Case {
    const char* name;
    Polygon poly;
    int genus;
    std::size_t periods;
    std::size_t images;
  };
  std::vector<Case> cases{{"parallelogram", shapes::pi3_parallelogram(Rational(2, 3)), 2, 4, 0},
                          {"broken rectangle", shapes::broken_rectangle(2, 3, 1, 2), 2, 4, 0},
                          {"broken parallelogram", shapes::broken_parallelogram(), 5, 10, 0},
                          {"rationalized triangle", shapes::rationalized_right_triangle(), 250, 500, 2000}};
  for (const auto& c : cases) {
    Epp epp = build_epp(c.poly);
    const int g = genus(c.poly);
    const std::size_t p = period_basis(epp).periods.size();
    out.detail << " " << c.name << " g=" << g << " periods=" << p << " images=" << epp.images().size() << ";";
    out.require(g == c.genus && p == c.periods, std::string(c.name) + " expected g=" + std::to_string(c.genus) +
                                                    " periods=" + std::to_string(c.periods));
    if (c.images) out.require(epp.images().size() == c.images, "image count");
  }
}

// 2. Spectrum closed forms.
void spectrum_closed_forms(Outcome& out) {
  int labels = 0;
  for (auto [q, p] : {std::pair{1, 1}, std::pair{2, 3}, std::pair{3, 5}}) {
    Epp epp = build_epp(shapes::pi3_parallelogram(Rational(q, p)));
    auto basis = period_basis(epp).periods;
    PairChoice sixty = sixty_degree_pair(basis);
    PeriodLattice lat = make_lattice(basis, sixty);
    out.require(lat.C1() == q && lat.C2() == q, "parallelogram C = q");
    std::vector<double> want;
    // Every label outside |m|,|n| <= 20 lies above this energy.
    const double e_max = 0.999 * closed_forms::rhombic_level(p, 21, 10.5);
    for (int m = -20; m <= 20; ++m)
      for (int n = -20; n <= 20; ++n) {
        if (!m && !n) continue;
        const double e = closed_forms::rhombic_level(p, m, n);
        out.require(close(momentum_aperiodic(lat, m, n).energy(), e), "parallelogram level by label");
        out.require(close(closed_forms::rhombic_level_rotated(p, m - n, m + n), e), "label map identity");
        if (e <= e_max) want.push_back(e);
        ++labels;
      }
    out.require(same_levels(expand(spectrum(lat, e_max)), want), "parallelogram level multiset");

    // Orthogonal pair D1 - D2, D1 + D2: C = 2q, labels of the rotated form doubled.
    PairChoice rotated{add(sixty.first, sixty.second, -1), add(sixty.first, sixty.second, 1)};
    PeriodLattice rot = make_lattice(basis, rotated);
    out.require(rot.C1() == 2 * q && rot.C2() == 2 * q, "rotated pair C = 2q");
    for (int m = -20; m <= 20; ++m)
      for (int n = -20; n <= 20; ++n) {
        if (!m && !n) continue;
        out.require(close(momentum_aperiodic(rot, m, n).energy(), closed_forms::rhombic_level_rotated(p, 2 * m, 2 * n)),
                    "rotated level by label");
      }
    PeriodLattice skeleton = make_lattice(basis, PairChoice{rotated.second, rotated.first});
    auto data = periodic_skeleton_check(skeleton);
    out.require(data && data->k == 0, "orthogonal skeleton");
    if (data)
      for (int m = 1; m <= 20; ++m)
        for (int n = 1; n <= 20; ++n)
          out.require(close(quantum_momentum(skeleton, *data, m, n).energy(),
                            closed_forms::rhombic_level_rotated(p, 2 * n, 2 * m)),
                      "skeleton level by label");
  }
  // Broken rectangle.
  const int x1 = 2, x2 = 3, y1 = 1, y2 = 2;
  Epp epp = build_epp(shapes::broken_rectangle(x1, x2, y1, y2));
  auto basis = period_basis(epp).periods;
  PeriodLattice lat =
      make_lattice(basis, PairChoice{find_combo(basis, {2.0 * x1, 0}), find_combo(basis, {0, 2.0 * y1})});
  const double cx = lat.C1(), cy = lat.C2();
  const double e_max = 0.999 * std::min(closed_forms::broken_rectangle_level(21, 0, cx, cy, x1, y1),
                                        closed_forms::broken_rectangle_level(0, 21, cx, cy, x1, y1));
  std::vector<double> want;
  for (int m = -20; m <= 20; ++m)
    for (int n = -20; n <= 20; ++n) {
      if (!m && !n) continue;
      const double e = closed_forms::broken_rectangle_level(m, n, cx, cy, x1, y1);
      out.require(close(momentum_aperiodic(lat, m, n).energy(), e), "broken rectangle level by label");
      if (e <= e_max) want.push_back(e);
    }
  out.require(same_levels(expand(spectrum(lat, e_max)), want), "broken rectangle level multiset");
  out.detail << " " << labels << " parallelogram labels, broken rectangle Cx=" << cx << " Cy=" << cy
             << "; orthogonal pair needs C=2q, so its closed form holds at doubled labels";
}

// 3. Prescription counts.
void prescription_counts(Outcome& out) {
  struct Case {
    const char* name;
    Polygon poly;
    std::size_t expected;
  };
  std::vector<Case> cases{{"parallelogram", shapes::pi3_parallelogram(Rational(2, 3)), 2},
                          {"equilateral triangle", shapes::equilateral_triangle(), 2},
                          {"rectangle", shapes::rectangle(2, 1), 4},
                          {"broken rectangle", shapes::broken_rectangle(2, 3, 1, 2), 4}};
  for (const auto& c : cases) {
    Epp epp = build_epp(c.poly);
    const std::size_t got = enumerate_prescriptions(epp).size();
    const int brute = brute_force_prescriptions(epp);
    out.detail << " " << c.name << "=" << got << " (brute " << brute << ");";
    out.require(got == c.expected && static_cast<int>(got) == brute, c.name);
  }
}

// 4. Wave function verification.
void wave_functions(Outcome& out) {
  double worst_shape = 0, worst_boundary = 0, worst_norm = 0, worst_conj = 0;
  auto record_boundary = [&](const BoundaryReport& rep) {
    worst_boundary = std::max({worst_boundary, rep.dirichlet_max, rep.neumann_max});
  };
  bool helmholtz = true;
  auto check_pair = [&](const SwfPair& pair, const Polygon& poly, const std::vector<Vec2>& pts) {
    helmholtz = helmholtz && verify_helmholtz(pair.plus, poly).pass;
    double lo = INFINITY, hi = 0;
    for (const auto& t : pair.plus.terms) {
      lo = std::min(lo, std::abs(t.p));
      hi = std::max(hi, std::abs(t.p));
    }
    worst_norm = std::max(worst_norm, (hi - lo) / hi);
    for (Vec2 r : pts)
      worst_conj = std::max(worst_conj, std::abs(evaluate(pair.minus, r) - std::conj(evaluate(pair.plus, r))));
  };

  for (Rational a : {Rational(1), Rational(2, 3), Rational(3, 5)}) {
    Epp epp = build_epp(shapes::pi3_parallelogram(a));
    const Polygon& poly = epp.polygon();
    PeriodLattice lat = make_lattice(period_basis(epp).periods);
    auto list = enumerate_prescriptions(epp);
    auto pts = interior_points(poly, 1000, 17);
    for (auto [m, n] : {std::pair{1, 2}, std::pair{-3, 1}, std::pair{2, 5}, std::pair{4, -7}}) {
      Vec2 p = momentum_aperiodic(lat, m, n).vector;
      const double A = p.real(), B = p.imag();
      SwfPair dir = compile_swf(epp, list[0], p);
      SwfPair neu = compile_swf(epp, list[1], p);
      check_pair(dir, poly, pts);
      check_pair(neu, poly, pts);
      auto rd = real_combinations(dir, poly);
      auto rn = real_combinations(neu, poly);
      if (!rd[0].degenerate || !rd[1].degenerate)
        for (int s : {1, -1})
          worst_shape = std::max(
              worst_shape, proportional_residual(evaluate(s > 0 ? dir.plus : dir.minus, pts), sample(pts, [&](Vec2 r) {
                                                   return closed_forms::rhombic_dirichlet(A, B, r, s);
                                                 })));
      for (const auto& f : rd) {
        if (f.degenerate) continue;
        auto closed = [&](Vec2 r) {
          return f.part == RealPart::Cos ? closed_forms::rhombic_dirichlet_sin(A, B, r)
                                         : closed_forms::rhombic_dirichlet_cos(A, B, r);
        };
        worst_shape = std::max(
            worst_shape, proportional_residual(sample(pts, [&](Vec2 r) { return f.value(r); }), sample(pts, closed)));
        record_boundary(verify_boundary(f, poly, list[0], 1000));
      }
      for (const auto& f : rn) {
        if (f.degenerate) continue;
        auto closed = [&](Vec2 r) {
          return f.part == RealPart::Cos ? closed_forms::rhombic_neumann_cos(A, B, r)
                                         : closed_forms::rhombic_neumann_sin(A, B, r);
        };
        worst_shape = std::max(
            worst_shape, proportional_residual(sample(pts, [&](Vec2 r) { return f.value(r); }), sample(pts, closed)));
        record_boundary(verify_boundary(f, poly, list[1], 1000));
      }
      record_boundary(verify_boundary(dir.plus, poly, list[0], 1000));
      record_boundary(verify_boundary(neu.plus, poly, list[1], 1000));
    }
  }

  Epp epp = build_epp(shapes::broken_rectangle(2, 3, 1, 2));
  const Polygon& poly = epp.polygon();
  auto list = enumerate_prescriptions(epp);
  auto pts = interior_points(poly, 1000, 19);
  auto find = [&](const std::string& label) -> const SignPrescription& {
    for (const auto& p : list)
      if (p.label == label) return p;
    throw Error(ErrorCode::BadPrescription, label);
  };
  for (auto [m, n] : {std::pair{1, 1}, std::pair{2, 3}, std::pair{5, 1}}) {
    // Cx = 2, x1 = 2, Cy = 1, y1 = 1.
    Vec2 p(kPi * m, kPi * n);
    auto run = [&](const SignPrescription& pres, auto fx, auto fy) {
      SwfPair pair = compile_swf(epp, pres, p);
      check_pair(pair, poly, pts);
      worst_shape =
          std::max(worst_shape, proportional_residual(evaluate(pair.plus, pts), sample(pts, [&](Vec2 r) {
                                                        return fx(p.real() * r.real()) * fy(p.imag() * r.imag());
                                                      })));
      record_boundary(verify_boundary(pair.plus, poly, pres, 1000));
    };
    auto s = [](double t) { return std::sin(t); };
    auto c = [](double t) { return std::cos(t); };
    run(list[0], s, s);
    run(list[1], c, c);
    run(find("mixed:DNDNDN"), c, s);
    run(find("mixed:NDNDND"), s, c);
  }
  out.detail << " shape residual " << worst_shape << ", boundary " << worst_boundary << ", |p_k| spread " << worst_norm
             << ", conjugacy " << worst_conj;
  out.require(worst_shape < 1e-12, "closed-form shape");
  out.require(worst_boundary < 1e-9, "boundary residual");
  out.require(worst_norm < 1e-12, "momentum lengths");
  out.require(worst_conj < 1e-12, "conjugate branches");
  out.require(helmholtz, "Helmholtz residual");
}

// 5. Rhombus parity.
void rhombus_parity(Outcome& out) {
  Polygon rh = shapes::pi3_parallelogram(1);
  Epp epp = build_epp(rh);
  PeriodLattice lat = make_lattice(period_basis(epp).periods);
  auto dirichlet = enumerate_prescriptions(epp)[0];
  // Short diagonal (x -> -x in the diagonal frame) and long diagonal (y -> -y).
  Reflection flip_x{{1, 0}, Vec2(-0.5, kS3 / 2)};
  Reflection flip_y{{0, 0}, Vec2(1.5, kS3 / 2)};
  int probed = 0, bad = 0;
  for (int m = -5; m <= 5; ++m)
    for (int n = -5; n <= 5; ++n) {
      if (!m && !n) continue;
      Vec2 p = momentum_aperiodic(lat, m, n).vector;
      const double A = p.real(), B = p.imag();
      auto real = real_combinations(compile_swf(epp, dirichlet, p), rh);
      if (!real[1].degenerate) {
        auto f = [&](Vec2 r) { return closed_forms::rhombic_dirichlet_cos(A, B, r); };
        bad += symmetry_probe(f, rh, flip_x) != Parity::Odd;
        bad += symmetry_probe(f, rh, flip_y) != Parity::Even;
        bad += symmetry_probe(real[1], rh, flip_x) != Parity::Odd;
        bad += symmetry_probe(real[1], rh, flip_y) != Parity::Even;
        ++probed;
      }
      if (!real[0].degenerate) {
        auto f = [&](Vec2 r) { return closed_forms::rhombic_dirichlet_sin(A, B, r); };
        bad += symmetry_probe(f, rh, flip_x) != Parity::Odd;
        bad += symmetry_probe(f, rh, flip_y) != Parity::Odd;
        bad += symmetry_probe(real[0], rh, flip_x) != Parity::Odd;
        bad += symmetry_probe(real[0], rh, flip_y) != Parity::Odd;
        ++probed;
      }
    }
  out.detail << " " << probed << " nonzero real states probed at 200 points, " << bad << " parity mismatches";
  out.require(probed > 0 && bad == 0, "parity");
}

// 6. Finite-difference agreement.
void oracle_agreement(Outcome& out) {
  const double h = 1.0 / 128;
  auto fd = fd_eigenvalues(rasterize(shapes::broken_rectangle(1, 2, 1, 2), h), 30);
  std::vector<double> sc;
  for (int m = 1; m <= 4; ++m)
    for (int n = 1; n <= 4; ++n) {
      const double e = 0.5 * kPi * kPi * (m * m + n * n);
      if (e <= 60) sc.push_back(e);
    }
  std::sort(sc.begin(), sc.end());
  MatchReport rep = compare_spectra(sc, fd, 0.02);
  double fitted = 0;
  for (const auto& l : rep.levels) fitted = std::max(fitted, std::fabs(l.numerical - l.semiclassical) / (h * h));
  std::vector<double> e;
  for (int N : {16, 32, 64}) e.push_back(fd_eigenvalues(rasterize(shapes::unit_square(), 1.0 / N), 1)[0]);
  RichardsonResult rr = richardson(e[0], e[1], e[2]);
  out.detail << " " << sc.size() << " levels, max rel error " << rep.max_error << ", error/h^2 <= " << fitted
             << ", unmatched fraction " << rep.unmatched_fraction << "; square order " << rr.order;
  out.require(rep.pass, "L-shape levels within 2%");
  out.require(rr.order >= 1.8, "convergence order");
}

// 7. Incompleteness of the finer family, from the labelled levels.
void incompleteness(Outcome& out) {
  const int k = 100;
  BrokenRectangle coarse{1, 2, 1, 2};
  BrokenRectangle fine{1, Rational(2 * k - 1, k), 1, 2};
  auto lattice_of = [](const BrokenRectangle& b) {
    Epp epp = build_epp(b.polygon());
    auto basis = period_basis(epp).periods;
    const double x1 = to_double(b.x1), y1 = to_double(b.y1);
    return make_lattice(basis, PairChoice{find_combo(basis, {2 * x1, 0}), find_combo(basis, {0, 2 * y1})});
  };
  PeriodLattice lc = lattice_of(coarse), lf = lattice_of(fine);
  out.require(lc.C1() == 1 && lf.C1() == k && lf.C2() == 1, "lcm constants");
  // Levels of the smaller billiard coincide with the larger one's at m k.
  std::vector<double> small, large;
  bool labels_ok = true;
  for (int m = 1; m <= 3; ++m)
    for (int n = 1; n <= 5; ++n) {
      const double ef = momentum_aperiodic(lf, m, n).energy();
      labels_ok = labels_ok && close(ef, momentum_aperiodic(lc, m * k, n).energy(), 1e-12);
      small.push_back(ef);
    }
  out.require(labels_ok, "E'(m, n) = E(m k, n)");
  for (int m = 1; m <= 3 * k; ++m)
    for (int n = 1; n <= 5; ++n) large.push_back(momentum_aperiodic(lc, m, n).energy());
  MatchReport rep = compare_spectra(small, large, 1.0 / (k - 1));
  out.require(rep.pass, "matched levels within 1/(k-1)");
  // At fixed n exactly every k-th level of the larger billiard is reproduced.
  bool every_kth = true;
  for (int n = 1; n <= 5; ++n)
    for (int m = 1; m <= 3 * k; ++m) {
      const double e = momentum_aperiodic(lc, m, n).energy();
      bool hit = false;
      for (int j = 1; j <= 3; ++j) hit = hit || close(e, momentum_aperiodic(lf, j, n).energy(), 1e-12);
      every_kth = every_kth && hit == (m % k == 0);
    }
  out.require(every_kth, "every k-th level at fixed n");
  out.detail << " k=" << k << ", max matched error " << rep.max_error << " < " << 1.0 / (k - 1)
             << ", unmatched fraction " << rep.unmatched_fraction;
}

// 8. Deformation trend.
void deformation_trend(Outcome& out) {
  BrokenRectangle base{2, 3, 1, 2};
  PerturbationStudy s = perturbation_study(base, {Rational(1, 10), Rational(1, 20), Rational(1, 40)}, 10, 1.0 / 128);
  bool bounds = true;
  for (const auto& r : s.rows) {
    out.detail << " eps=" << r.epsilon << " eta=" << r.eta << ";";
    bounds = bounds && r.bounds.ok;
  }
  out.require(s.strictly_decreasing, "eta strictly decreasing");
  out.require(bounds, "deformation bounds");
}

// 9. Rationalization.
void rationalization(Outcome& out) {
  RealRelations rel;
  RelationCoeff c, zero;
  c.value = std::sqrt(2.0L);
  zero.exact = Rational(0);
  rel.periods = {2};
  rel.coeffs.push_back({c, zero});
  rel.shifts.push_back({0, 0});
  const std::int64_t Q = 100;
  Rational a = rationalize_relations(rel, Q).a[0][0];
  const double x = std::sqrt(2.0), q = a.get_den().get_d();
  out.detail << " sqrt(2) -> " << to_string(a);
  out.require(a == Rational(99, 70), "99/70");
  out.require(std::fabs(x - a.get_d()) <= 1 / (q * Q), "error bound");
  // Brute force: minimiser of |q x - p| over all q <= Q.
  double best = INFINITY;
  Rational arg;
  for (std::int64_t d = 1; d <= Q; ++d) {
    std::int64_t n = std::llround(x * d);
    double e = std::fabs(d * x - n);
    if (e < best - 1e-15) {
      best = e;
      arg = Rational(n, d);
    }
  }
  arg.canonicalize();
  out.require(arg == a, "brute-force minimiser");
}

struct Criterion {
  int id;
  const char* title;
  double budget;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<Criterion> all{{1, "genus and period counts", 60, genus_and_periods},
                             {2, "spectrum closed forms", 5, spectrum_closed_forms},
                             {3, "sign prescription counts", 5, prescription_counts},
                             {4, "wave function verification", 10, wave_functions},
                             {5, "rhombus parity", 2, rhombus_parity},
                             {6, "finite-difference agreement", 180, oracle_agreement},
                             {7, "incompleteness of the finer family", 1, incompleteness},
                             {8, "deformation trend", 600, deformation_trend},
                             {9, "rationalization", 1, rationalization}};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  bool ok = true;
  for (const auto& c : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    Outcome out;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget) {
      out.pass = false;
      out.detail << " [over time budget " << c.budget << " s]";
    }
    std::printf("%s %d %s (%.2f s):%s\n", out.pass ? "PASS" : "FAIL", c.id, c.title, secs, out.detail.str().c_str());
    std::fflush(stdout);
    ok = ok && out.pass;
  }
  return ok ? 0 : 1;
}
