// Command-line front end.
// Exit codes: 0 ok, 2 input error, 3 not doubly rational, 4 bad prescription,
// 5 verification failure.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "billiards/error.hpp"
#include "billiards/lattice.hpp"
#include "billiards/oracle.hpp"
#include "billiards/polygon_io.hpp"
#include "billiards/quantize.hpp"
#include "billiards/rationalize.hpp"
#include "billiards/swf.hpp"
#include "billiards/unfold.hpp"

using namespace billiards;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 2;
constexpr int kNotDrpb = 3;
constexpr int kBadPrescription = 4;
constexpr int kVerifyFailed = 5;

struct ExitCode {
  int code;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

Rational rational_arg(const std::string& text) { return parse_rational(text); }

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
  out << text;
}

struct LatticeOptions {
  std::string pair;
  std::int64_t rationalize = 0;
};

std::optional<PairChoice> parse_pair(const std::string& text, std::size_t periods) {
  if (text.empty()) return std::nullopt;
  auto parts = split(text, ',');
  if (parts.size() != 2) throw Error(ErrorCode::InvalidInput, "--pair expects i,j");
  const int i = std::stoi(parts[0]), j = std::stoi(parts[1]);
  const int count = static_cast<int>(periods);
  if (i < 0 || j < 0 || i >= count || j >= count || i == j)
    throw Error(ErrorCode::InvalidInput, "--pair indices must be distinct and below " + std::to_string(count));
  return PairChoice::indices(i, j, count);
}

PeriodLattice lattice_for(const Epp& epp, const LatticeOptions& opt) {
  auto basis = period_basis(epp).periods;
  PeriodLattice lat = make_lattice(basis, parse_pair(opt.pair, basis.size()));
  if (!lat.rational) {
    if (opt.rationalize <= 0) {
      std::cerr << "not doubly rational (irrational relations); pass --rationalize Q\n";
      throw ExitCode{kNotDrpb};
    }
    lat = rationalized(std::move(lat), opt.rationalize);
    std::cerr << "note: relations approximated with denominators <= " << opt.rationalize << "\n";
  }
  return lat;
}

const SignPrescription& pick_prescription(const std::vector<SignPrescription>& list, const std::string& id) {
  for (const auto& p : list)
    if (p.label == id) return p;
  char* end = nullptr;
  long k = std::strtol(id.c_str(), &end, 10);
  if (end && *end == '\0' && !id.empty() && k >= 0 && k < static_cast<long>(list.size())) return list[k];
  std::cerr << "no prescription '" << id << "'; " << list.size() << " consistent prescriptions:\n";
  for (std::size_t i = 0; i < list.size(); ++i) std::cerr << "  " << i << " " << list[i].label << "\n";
  throw ExitCode{kBadPrescription};
}

// Distinct energies <= e_max carrying a nonzero real state of the prescription.
std::vector<double> prescription_levels(const Epp& epp, const PeriodLattice& lat, const SignPrescription& pres,
                                        double e_max) {
  const double pmax = std::sqrt(2 * e_max);
  const auto M1 = static_cast<std::int64_t>(std::ceil(pmax * std::abs(lat.D1()) / (2 * std::numbers::pi * lat.C1())));
  const auto M2 = static_cast<std::int64_t>(std::ceil(pmax * std::abs(lat.D2()) / (2 * std::numbers::pi * lat.C2())));
  std::vector<double> levels;
  for (std::int64_t m = -M1; m <= M1; ++m)
    for (std::int64_t n = -M2; n <= M2; ++n) {
      if (!m && !n) continue;
      QuantizedMomentum q = momentum_aperiodic(lat, m, n);
      if (q.energy() > e_max) continue;
      try {
        auto real = real_combinations(compile_swf(epp, pres, q.vector), epp.polygon());
        if (real[0].degenerate && real[1].degenerate) continue;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::UnquantizedMomentum) continue;
        throw;
      }
      levels.push_back(q.energy());
    }
  std::sort(levels.begin(), levels.end());
  std::vector<double> distinct;
  for (double e : levels)
    if (distinct.empty() || e > distinct.back() * (1 + 1e-9)) distinct.push_back(e);
  return distinct;
}

// Lattice whose pair is the axis periods (2 x1, 0), (0, 2 y1) of a broken rectangle.
PeriodLattice axis_lattice(const Epp& epp, double x1, double y1) {
  auto basis = period_basis(epp).periods;
  auto search = [&](Vec2 target) {
    const int count = static_cast<int>(basis.size());
    std::vector<std::int64_t> c(count, -3);
    while (true) {
      if (std::abs(combine(basis, c).value() - target) < 1e-9) return c;
      int k = 0;
      while (k < count && c[k] == 3) c[k++] = -3;
      if (k == count) break;
      ++c[k];
    }
    throw Error(ErrorCode::NotInLattice, "axis period not found");
  };
  return make_lattice(basis, PairChoice{search({2 * x1, 0}), search({0, 2 * y1})});
}

std::optional<BrokenRectangle> as_broken_rectangle(const Polygon& poly) {
  if (poly.size() != 6) return std::nullopt;
  const int pattern[6] = {1, 1, 3, 1, 1, 1};
  std::vector<Rational> len;
  for (int k = 0; k < 6; ++k) {
    if (poly.angles()[k].q != 2 || poly.angles()[k].p != pattern[k]) return std::nullopt;
    auto r = poly.lengths()[k].as_rational();
    if (!r) return std::nullopt;
    len.push_back(*r);
  }
  return BrokenRectangle{len[4], len[0], len[1], len[5]};
}

// analyze

struct AnalyzeOptions {
  std::string polygon;
  LatticeOptions lattice;
  std::string csv;
};

int cmd_analyze(const AnalyzeOptions& opt) {
  Polygon poly = load_polygon(opt.polygon);
  for (const auto& w : poly.warnings()) std::cerr << "warning: " << w << "\n";
  Epp epp = build_epp(poly);
  const int g = genus(poly);
  auto basis = period_basis(epp).periods;
  PeriodLattice lat = make_lattice(basis, parse_pair(opt.lattice.pair, basis.size()));
  std::string drpb = lat.rational ? "yes" : "no (irrational relations)";
  std::cout << "g=" << g << ", images=" << epp.images().size() << ", periods=" << basis.size() << ", DRPB=" << drpb;
  if (lat.rational) std::cout << ", C1=" << lat.C1() << ", C2=" << lat.C2();
  std::cout << "\n" << lattice_report(lat);
  if (!lat.rational && opt.lattice.rationalize > 0) {
    PeriodLattice approx = rationalized(lat, opt.lattice.rationalize);
    std::cout << "rationalized with Q=" << opt.lattice.rationalize << ": C1=" << approx.C1() << ", C2=" << approx.C2()
              << "\n";
  }
  if (!opt.csv.empty()) write_text(opt.csv, lattice_csv(lat));
  return kOk;
}

// unfold

int cmd_unfold(const std::string& polygon, const std::string& out) {
  Epp epp = build_epp(load_polygon(polygon));
  write_text(out, epp_dump(epp));
  return kOk;
}

// quantize

struct QuantizeOptions {
  std::string polygon;
  LatticeOptions lattice;
  double e_max = 100;
  bool periodic = false;
  double max_ratio = 0.2;
  std::string out;
};

int cmd_quantize(const QuantizeOptions& opt) {
  Epp epp = build_epp(load_polygon(opt.polygon));
  PeriodLattice lat = lattice_for(epp, opt.lattice);
  if (lat.rational->approximated)
    std::cerr << "approximate spectrum: relations rationalized with Q=" << opt.lattice.rationalize << "\n";
  SpectrumKinds kinds{true, opt.periodic};
  if (opt.periodic && !periodic_skeleton_check(lat)) {
    std::cerr << "no periodic skeleton along D2; emitting aperiodic levels only\n";
    kinds.periodic = false;
  }
  auto entries = spectrum(lat, opt.e_max, kinds, opt.max_ratio);
  int flagged = 0;
  for (const auto& e : entries) flagged += e.flagged;
  if (flagged) std::cerr << flagged << " levels flagged: transverse/longitudinal ratio above " << opt.max_ratio << "\n";
  write_text(opt.out, spectrum_csv(entries));
  return kOk;
}

// swf

struct SwfOptions {
  std::string polygon;
  LatticeOptions lattice;
  std::string prescription = "0";
  std::int64_t m = 1, n = 1;
  std::string momentum;
  std::string part = "plus";
  std::string grid = "200x200";
  std::string csv, pgm;
  int samples = 1000;
  double tol = 1e-9;
};

int cmd_swf(const SwfOptions& opt) {
  Epp epp = build_epp(load_polygon(opt.polygon));
  const Polygon& poly = epp.polygon();
  auto list = enumerate_prescriptions(epp);
  const SignPrescription& pres = pick_prescription(list, opt.prescription);
  Vec2 p;
  if (!opt.momentum.empty()) {
    auto parts = split(opt.momentum, ',');
    if (parts.size() != 2) throw Error(ErrorCode::InvalidInput, "--momentum expects px,py");
    p = Vec2(std::stod(parts[0]), std::stod(parts[1]));
  } else {
    p = momentum_aperiodic(lattice_for(epp, opt.lattice), opt.m, opt.n).vector;
  }
  SwfPair pair = compile_swf(epp, pres, p);
  auto dims = split(opt.grid, 'x');
  if (dims.size() != 2) throw Error(ErrorCode::InvalidInput, "--grid expects WxH");
  Grid grid{std::stoi(dims[0]), std::stoi(dims[1])};
  if (grid.width < 2 || grid.height < 2) throw Error(ErrorCode::InvalidInput, "grid must be at least 2x2");

  std::cout.precision(6);
  std::cout << "prescription " << pres.label << ", momentum (" << p.real() << ", " << p.imag()
            << "), E=" << pair.plus.energy << ", terms=" << pair.plus.terms.size() << "\n";
  BoundaryReport boundary;
  std::string csv, pgm;
  if (opt.part == "plus" || opt.part == "minus") {
    const Swf& f = opt.part == "plus" ? pair.plus : pair.minus;
    boundary = verify_boundary(f, poly, pres, opt.samples, opt.tol);
    csv = grid_csv(f, poly, grid);
    pgm = grid_pgm(f, poly, grid);
  } else if (opt.part == "cos" || opt.part == "sin") {
    auto real = real_combinations(pair, poly);
    const RealSwf& f = real[opt.part == "cos" ? 0 : 1];
    if (f.degenerate) std::cerr << "warning: the " << opt.part << " combination vanishes identically\n";
    boundary = verify_boundary(f, poly, pres, opt.samples, opt.tol);
    csv = grid_csv(f, poly, grid);
    pgm = grid_pgm(f, poly, grid);
  } else {
    throw Error(ErrorCode::InvalidInput, "--part must be plus, minus, cos or sin");
  }
  HelmholtzReport helm = verify_helmholtz(pair.plus, poly);
  std::cout << "boundary: dirichlet_max=" << boundary.dirichlet_max << " neumann_max=" << boundary.neumann_max
            << " samples/edge=" << boundary.samples << " " << (boundary.pass ? "pass" : "FAIL") << "\n";
  std::cout << "helmholtz: max_residual=" << helm.max_residual << " bound=" << helm.bound
            << " norm_spread=" << helm.norm_spread << " " << (helm.pass ? "pass" : "FAIL") << "\n";
  if (!opt.csv.empty()) write_text(opt.csv, csv);
  if (!opt.pgm.empty()) write_text(opt.pgm, pgm);
  return boundary.pass && helm.pass ? kOk : kVerifyFailed;
}

// verify

struct VerifyOptions {
  std::string polygon;
  LatticeOptions lattice;
  std::string prescription = "0";
  std::string h = "1/64";
  int levels = 10;
  int count = 0;
  double rel_tol = 0.02;
  std::string out;
  std::string study;
  int study_count = 10;
  int incompleteness = 0;
};

int verify_compare(const VerifyOptions& opt) {
  Epp epp = build_epp(load_polygon(opt.polygon));
  const Polygon& poly = epp.polygon();
  auto list = enumerate_prescriptions(epp);
  const SignPrescription& pres = pick_prescription(list, opt.prescription);
  PeriodLattice lat = lattice_for(epp, opt.lattice);
  if (opt.levels < 1) throw Error(ErrorCode::InvalidInput, "--levels must be positive");
  // Grow the window until it holds the requested number of levels.
  double e_max = 10;
  std::vector<double> sc;
  while ((sc = prescription_levels(epp, lat, pres, e_max)).size() < static_cast<std::size_t>(opt.levels)) e_max *= 1.5;
  sc.resize(opt.levels);
  const double h = to_double(rational_arg(opt.h));
  GridDomain dom = rasterize(poly, h, pres.edge_bc);
  int count = opt.count;
  if (count <= 0) {
    // Weyl estimate of the number of levels below the window, with margin.
    const double weyl = poly.area() * sc.back() * (1 + opt.rel_tol) / (2 * std::numbers::pi);
    count = std::min(dom.size() / 4, static_cast<int>(1.3 * weyl) + opt.levels + 10);
  }
  auto fd = fd_eigenvalues(dom, count);
  MatchReport rep = compare_spectra(sc, fd, opt.rel_tol);
  std::cout << "prescription " << pres.label << ", h=" << h << ", unknowns=" << dom.size() << ", levels=" << sc.size()
            << ", numerical=" << fd.size() << "\n";
  std::cout << "max_error=" << rep.max_error << " mean_error=" << rep.mean_error << " rel_tol=" << rep.rel_tol
            << " unmatched_fraction=" << rep.unmatched_fraction << " " << (rep.pass ? "pass" : "FAIL") << "\n";
  if (!opt.out.empty()) write_text(opt.out, match_csv(rep));
  return rep.pass ? kOk : kVerifyFailed;
}

int verify_study(const VerifyOptions& opt) {
  auto base = as_broken_rectangle(load_polygon(opt.polygon));
  if (!base) throw Error(ErrorCode::InvalidInput, "--study needs a broken rectangle with rational sides");
  std::vector<Rational> eps;
  for (const auto& e : split(opt.study, ',')) eps.push_back(rational_arg(e));
  PerturbationStudy s = perturbation_study(*base, eps, opt.study_count, to_double(rational_arg(opt.h)));
  bool bounds = true;
  for (const auto& r : s.rows) {
    std::cout << "epsilon=" << r.epsilon << " x3=" << to_string(r.x3) << " eta=" << r.eta << " sup_g=" << r.bounds.sup_g
              << " sup_dg=" << r.bounds.sup_dg << (r.bounds.ok ? "" : " bounds FAIL") << "\n";
    bounds = bounds && r.bounds.ok;
  }
  std::cout << "eta strictly decreasing: " << (s.strictly_decreasing ? "yes" : "no") << "\n";
  if (!opt.out.empty()) write_text(opt.out, study_csv(s));
  return s.strictly_decreasing && bounds ? kOk : kVerifyFailed;
}

// Levels of the base broken rectangle against the one with x2 - 1/k.
int verify_incompleteness(const VerifyOptions& opt) {
  auto base = as_broken_rectangle(load_polygon(opt.polygon));
  if (!base) throw Error(ErrorCode::InvalidInput, "--incompleteness needs a broken rectangle with rational sides");
  const int k = opt.incompleteness;
  BrokenRectangle fine = *base;
  fine.x2 -= Rational(1, k);
  if (fine.x2 <= fine.x1) throw Error(ErrorCode::OutOfRange, "x2 - 1/k must exceed x1");
  const double x1 = to_double(base->x1), y1 = to_double(base->y1);
  PeriodLattice lc = axis_lattice(build_epp(base->polygon()), x1, y1);
  PeriodLattice lf = axis_lattice(build_epp(fine.polygon()), x1, y1);
  const int ratio = static_cast<int>(lf.C1() / std::max<std::int64_t>(lc.C1(), 1));
  std::vector<double> small, large;
  for (int m = 1; m <= 3; ++m)
    for (int n = 1; n <= 5; ++n) small.push_back(momentum_aperiodic(lf, m, n).energy());
  for (int m = 1; m <= 3 * ratio; ++m)
    for (int n = 1; n <= 5; ++n) large.push_back(momentum_aperiodic(lc, m, n).energy());
  const double bound = 1.0 / (k - 1);
  MatchReport rep = compare_spectra(small, large, bound);
  std::cout << "C1=" << lc.C1() << " vs " << lf.C1() << ", matched levels=" << rep.levels.size()
            << ", max_error=" << rep.max_error << " bound=" << bound
            << ", unmatched_fraction=" << rep.unmatched_fraction << " " << (rep.pass ? "pass" : "FAIL") << "\n";
  if (!opt.out.empty()) write_text(opt.out, match_csv(rep));
  return rep.pass ? kOk : kVerifyFailed;
}

// rationalize

struct RationalizeOptions {
  std::vector<double> values;
  std::vector<double> angles;
  std::int64_t max_den = 100;
  std::string kind = "convergent";
  bool truncate = false;
};

int cmd_rationalize(const RationalizeOptions& opt) {
  if (opt.max_den < 1) throw Error(ErrorCode::InvalidInput, "--max-den must be positive");
  ApproximationKind kind = opt.kind == "closest" ? ApproximationKind::Closest : ApproximationKind::Convergent;
  if (opt.kind != "closest" && opt.kind != "convergent")
    throw Error(ErrorCode::InvalidInput, "--kind must be closest or convergent");
  for (double x : opt.values) {
    Rational r = best_rational(x, opt.max_den, kind);
    std::cout << x << " -> " << to_string(r) << " error=" << std::fabs(x - r.get_d()) << "\n";
  }
  if (!opt.angles.empty()) {
    std::vector<double> radians;
    for (double a : opt.angles) radians.push_back(a * std::numbers::pi);
    auto out = rationalize_angles(
        radians, opt.max_den, opt.truncate ? RationalizeMode::DecimalTruncation : RationalizeMode::BestApproximation);
    for (std::size_t i = 0; i < out.size(); ++i)
      std::cout << opt.angles[i] << " pi -> " << out[i].to_string() << " pi\n";
  }
  return kOk;
}

void add_lattice_options(CLI::App* cmd, LatticeOptions& opt) {
  cmd->add_option("--pair", opt.pair, "basis period indices i,j used as the planar pair");
  cmd->add_option("--rationalize", opt.rationalize, "denominator cap Q for irrational relations");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semiclassical quantization of rational polygon billiards"};
  app.require_subcommand(1);

  AnalyzeOptions analyze;
  auto* a = app.add_subcommand("analyze", "genus, pattern size, periods and rationality");
  a->add_option("polygon", analyze.polygon, "polygon JSON file")->required();
  add_lattice_options(a, analyze.lattice);
  a->add_option("--csv", analyze.csv, "write the period table as CSV");

  std::string unfold_polygon, unfold_out;
  auto* u = app.add_subcommand("unfold", "dump the unfolded polygon pattern");
  u->add_option("polygon", unfold_polygon, "polygon JSON file")->required();
  u->add_option("-o,--out", unfold_out, "output file (default stdout)");

  QuantizeOptions quantize;
  auto* q = app.add_subcommand("quantize", "labelled spectrum as CSV");
  q->add_option("polygon", quantize.polygon, "polygon JSON file")->required();
  add_lattice_options(q, quantize.lattice);
  q->add_option("--emax", quantize.e_max, "energy cutoff")->check(CLI::PositiveNumber);
  q->add_flag("--periodic", quantize.periodic, "include periodic-skeleton levels");
  q->add_option("--max-ratio", quantize.max_ratio, "flag threshold for the momentum ratio")->check(CLI::PositiveNumber);
  q->add_option("-o,--out", quantize.out, "output file (default stdout)");

  SwfOptions swf;
  auto* s = app.add_subcommand("swf", "wave function on a grid with boundary and Helmholtz checks");
  s->add_option("polygon", swf.polygon, "polygon JSON file")->required();
  add_lattice_options(s, swf.lattice);
  s->add_option("--prescription", swf.prescription, "index or label of the sign prescription");
  s->add_option("-m", swf.m, "first lattice label");
  s->add_option("-n", swf.n, "second lattice label");
  s->add_option("--momentum", swf.momentum, "explicit momentum px,py instead of labels");
  s->add_option("--part", swf.part, "plus, minus, cos or sin");
  s->add_option("--grid", swf.grid, "grid size WxH");
  s->add_option("--csv", swf.csv, "grid CSV output");
  s->add_option("--pgm", swf.pgm, "graymap output of |psi|^2");
  s->add_option("--samples", swf.samples, "boundary samples per edge")->check(CLI::PositiveNumber);
  s->add_option("--tol", swf.tol, "boundary tolerance")->check(CLI::PositiveNumber);

  VerifyOptions verify;
  auto* v = app.add_subcommand("verify", "compare with finite differences");
  v->add_option("polygon", verify.polygon, "polygon JSON file")->required();
  add_lattice_options(v, verify.lattice);
  v->add_option("--prescription", verify.prescription, "index or label of the sign prescription");
  v->add_option("--spacing", verify.h, "grid spacing, e.g. 1/128");
  v->add_option("--levels", verify.levels, "number of semiclassical levels to match");
  v->add_option("--count", verify.count, "number of numerical levels (default from the Weyl estimate)");
  v->add_option("--rel-tol", verify.rel_tol, "relative tolerance")->check(CLI::PositiveNumber);
  v->add_option("--study", verify.study, "deformation sizes eps1,eps2,... for the perturbation study");
  v->add_option("--study-count", verify.study_count, "levels compared in the perturbation study");
  v->add_option("--incompleteness", verify.incompleteness, "compare with the rectangle whose x2 is reduced by 1/k");
  v->add_option("-o,--out", verify.out, "CSV output");

  RationalizeOptions rat;
  auto* r = app.add_subcommand("rationalize", "rational approximations of numbers and angles");
  r->add_option("--value", rat.values, "real numbers to approximate");
  r->add_option("--angles", rat.angles, "polygon angles in units of pi")->delimiter(',');
  r->add_option("--max-den", rat.max_den, "denominator cap Q");
  r->add_option("--kind", rat.kind, "convergent or closest");
  r->add_flag("--truncate", rat.truncate, "decimal truncation for angles");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*a) return cmd_analyze(analyze);
    if (*u) return cmd_unfold(unfold_polygon, unfold_out);
    if (*q) return cmd_quantize(quantize);
    if (*s) return cmd_swf(swf);
    if (*v) {
      if (verify.incompleteness > 1) return verify_incompleteness(verify);
      if (!verify.study.empty()) return verify_study(verify);
      return verify_compare(verify);
    }
    if (*r) return cmd_rationalize(rat);
  } catch (const ExitCode& e) {
    return e.code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::NotDoublyRational: return kNotDrpb;
      case ErrorCode::BadPrescription: return kBadPrescription;
      case ErrorCode::ConvergenceFailure: return kVerifyFailed;
      default: return kInputError;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kOk;
}
