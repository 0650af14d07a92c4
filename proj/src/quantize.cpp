#include "billiards/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <tuple>

#include "billiards/error.hpp"

namespace billiards {

namespace {

using LVec = std::complex<long double>;
constexpr long double kTwoPi = 2 * std::numbers::pi_v<long double>;

LVec lvalue(const Cyclo& c) { return c.eval() / static_cast<long double>(c.context()->scale()); }
long double ldot(LVec a, LVec b) { return a.real() * b.real() + a.imag() * b.imag(); }
long double lcross(LVec a, LVec b) { return a.real() * b.imag() - a.imag() * b.real(); }
Vec2 to_vec(LVec v) { return {static_cast<double>(v.real()), static_cast<double>(v.imag())}; }

double safe_wavelength(double length, double projection) {
  return projection == 0 ? INFINITY : kTwoPi * length / std::fabs(projection);
}

}  // namespace

std::string to_string(MomentumKind kind) {
  switch (kind) {
    case MomentumKind::ClassicalAperiodic: return "classical-aperiodic";
    case MomentumKind::ClassicalPeriodic: return "classical-periodic";
    case MomentumKind::Quantum: return "quantum";
  }
  return "?";
}

QuantizedMomentum momentum_aperiodic(const PeriodLattice& lattice, std::int64_t m, std::int64_t n) {
  if (m == 0 && n == 0) throw Error(ErrorCode::InvalidInput, "labels (0, 0) give no momentum");
  const long double c1 = static_cast<long double>(lattice.C1()), c2 = static_cast<long double>(lattice.C2());
  const LVec d1 = lvalue(lattice.relations.d1), d2 = lvalue(lattice.relations.d2);
  const long double x = lcross(d1, d2), x2 = x * x, d12 = ldot(d1, d2);
  const long double a = kTwoPi * (m * c1 * std::norm(d2) - n * c2 * d12) / x2;
  const long double b = kTwoPi * (n * c2 * std::norm(d1) - m * c1 * d12) / x2;
  QuantizedMomentum q;
  q.m = m;
  q.n = n;
  q.vector = to_vec(a * d1 + b * d2);
  q.kind = MomentumKind::ClassicalAperiodic;
  return q;
}

std::optional<PeriodicSkeletonData> periodic_skeleton_check(const PeriodLattice& lattice) {
  if (!lattice.rational) return std::nullopt;
  const auto& rel = lattice.relations;
  auto ratio = rational_ratio(dot_2(rel.d2, rel.d1), dot_2(rel.d2, rel.d2));
  if (!ratio) return std::nullopt;
  Rational k = *ratio * lattice.C2() / lattice.C1();
  if (k.get_den() != 1) return std::nullopt;
  PeriodicSkeletonData data;
  data.k = to_int64(k.get_num());
  const LVec d1 = lvalue(rel.d1), d2 = lvalue(rel.d2);
  data.alpha = static_cast<double>(std::atan2(std::fabs(lcross(d1, d2)), ldot(d1, d2)));
  return data;
}

std::optional<PeriodicSkeletonData> periodic_skeleton_check(const PeriodLattice& lattice, const Epp& epp) {
  auto data = periodic_skeleton_check(lattice);
  if (!data) return data;
  Vec2 d2 = lattice.D2();
  ChannelReport rep = direction_channels(epp, d2, 64 * std::abs(d2), 32);
  data->fully_periodic = rep.samples > 0 && rep.periodic == rep.samples;
  return data;
}

QuantizedMomentum momentum_periodic(const PeriodLattice& lattice, const PeriodicSkeletonData& data, std::int64_t n) {
  auto check = periodic_skeleton_check(lattice);
  if (!check || check->k != data.k)
    throw Error(ErrorCode::NotPeriodicSkeleton, "D1, D2 do not satisfy the periodic skeleton condition");
  if (n == 0) throw Error(ErrorCode::InvalidInput, "periodic skeleton label n must be nonzero");
  const LVec d2 = lvalue(lattice.relations.d2);
  QuantizedMomentum q;
  q.m = data.k * n;
  q.n = n;
  q.vector = to_vec(kTwoPi * n * static_cast<long double>(lattice.C2()) / std::norm(d2) * d2);
  q.kind = MomentumKind::ClassicalPeriodic;
  return q;
}

std::int64_t poc_constant(const PeriodLattice& lattice, const Cyclo& period) {
  auto ratio = rational_ratio(period, lattice.relations.d2);
  if (!ratio || *ratio == 0) throw Error(ErrorCode::NotPeriodicSkeleton, "period is not a rational multiple of D2");
  Rational r = abs(*ratio);
  const std::int64_t q = to_int64(r.get_den()), p = to_int64(r.get_num());
  if (lattice.C2() % q != 0) throw Error(ErrorCode::NotInLattice, "denominator of D_l / D2 does not divide C2");
  return lattice.C2() / q * p;
}

QuantizedMomentum momentum_poc(const PeriodLattice& lattice, const Cyclo& period, std::int64_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidInput, "channel label n must be nonzero");
  const std::int64_t cl = poc_constant(lattice, period);
  LVec d = lvalue(period);
  if (ldot(d, lvalue(lattice.relations.d2)) < 0) d = -d;
  QuantizedMomentum q;
  q.n = n;
  q.vector = to_vec(kTwoPi * n * static_cast<long double>(cl) / std::norm(d) * d);
  q.kind = MomentumKind::ClassicalPeriodic;
  return q;
}

QuantizedMomentum quantum_momentum(const PeriodLattice& lattice, const PeriodicSkeletonData& data, std::int64_t m,
                                   std::int64_t n, int transverse_sign, double max_ratio) {
  if (m < 0) throw Error(ErrorCode::InvalidInput, "transverse label m must be non-negative");
  if (m == 0 && data.fully_periodic)
    throw Error(ErrorCode::InvalidInput, "m = 0 needs an aperiodic bundle in the skeleton");
  QuantizedMomentum along = momentum_periodic(lattice, data, n);
  const LVec d1 = lvalue(lattice.relations.d1), d2 = lvalue(lattice.relations.d2);
  const long double height = std::fabs(lcross(d1, d2)) / std::abs(d2);  // |D1| sin(alpha)
  const long double t = kTwoPi * m * static_cast<long double>(lattice.C1()) / height;
  const LVec ey = d2 / std::abs(d2);
  const LVec ex(ey.imag(), -ey.real());
  const long double s = transverse_sign < 0 ? -1 : 1;
  QuantizedMomentum q;
  q.m = m;
  q.n = n;
  q.vector = to_vec(s * t * ex) + along.vector;
  q.kind = MomentumKind::Quantum;
  q.ratio = static_cast<double>(t) / std::abs(along.vector);
  q.flagged = q.ratio > max_ratio;
  return q;
}

std::vector<SpectrumEntry> spectrum(const PeriodLattice& lattice, double e_max, SpectrumKinds kinds, double max_ratio) {
  if (!(e_max > 0)) throw Error(ErrorCode::InvalidInput, "E_max must be positive");
  if (!lattice.rational) throw Error(ErrorCode::NotDoublyRational, "the period relations are not rational");
  const Vec2 d1 = lattice.D1(), d2 = lattice.D2();
  auto entry = [&](const QuantizedMomentum& q) {
    SpectrumEntry e;
    e.m = q.m;
    e.n = q.n;
    e.energy = q.energy();
    e.kind = q.kind;
    e.flagged = q.flagged;
    e.lambda = safe_wavelength(1, std::abs(q.vector));
    e.lambda1 = safe_wavelength(std::abs(d1), dot(q.vector, d1));
    e.lambda2 = safe_wavelength(std::abs(d2), dot(q.vector, d2));
    return e;
  };
  std::vector<SpectrumEntry> raw;
  if (kinds.aperiodic) {
    Vec2 u = momentum_aperiodic(lattice, 1, 0).vector, v = momentum_aperiodic(lattice, 0, 1).vector;
    double a = std::norm(u), c = std::norm(v), b = dot(u, v);
    double lmin = (a + c) / 2 - std::sqrt((a - c) * (a - c) / 4 + b * b);
    const auto M = static_cast<std::int64_t>(std::sqrt(2 * e_max / lmin)) + 1;
    for (std::int64_t m = -M; m <= M; ++m)
      for (std::int64_t n = -M; n <= M; ++n) {
        if (m == 0 && n == 0) continue;
        QuantizedMomentum q = momentum_aperiodic(lattice, m, n);
        if (q.energy() <= e_max * (1 + 1e-12)) raw.push_back(entry(q));
      }
  }
  if (kinds.periodic) {
    if (auto data = periodic_skeleton_check(lattice)) {
      const double p1 = std::abs(momentum_periodic(lattice, *data, 1).vector);
      const double t1 = std::abs(quantum_momentum(lattice, *data, 1, 1, 1, max_ratio).vector -
                                 momentum_periodic(lattice, *data, 1).vector);
      const auto N = static_cast<std::int64_t>(std::sqrt(2 * e_max) / p1) + 1;
      const auto M = static_cast<std::int64_t>(std::sqrt(2 * e_max) / t1) + 1;
      for (std::int64_t m = 1; m <= M; ++m)
        for (std::int64_t n = 1; n <= N; ++n) {
          QuantizedMomentum q = quantum_momentum(lattice, *data, m, n, 1, max_ratio);
          if (q.energy() <= e_max * (1 + 1e-12)) raw.push_back(entry(q));
        }
    }
  }
  std::sort(raw.begin(), raw.end(), [](const SpectrumEntry& a, const SpectrumEntry& b) {
    return std::tie(a.energy, a.kind) < std::tie(b.energy, b.kind);
  });
  auto rank = [](const SpectrumEntry& e) { return std::make_tuple(e.m < 0, e.n < 0, std::abs(e.m), std::abs(e.n)); };
  std::vector<SpectrumEntry> out;
  std::vector<char> used(raw.size(), 0);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (used[i]) continue;
    SpectrumEntry best = raw[i];
    int count = 0;
    bool flagged = false;
    for (std::size_t j = i; j < raw.size() && raw[j].energy <= raw[i].energy * (1 + 1e-9); ++j) {
      if (used[j] || raw[j].kind != raw[i].kind) continue;
      used[j] = 1;
      ++count;
      flagged = flagged || raw[j].flagged;
      if (rank(raw[j]) < rank(best)) best = raw[j];
    }
    best.degeneracy = count;
    best.flagged = flagged;
    out.push_back(best);
  }
  return out;
}

std::string spectrum_csv(const std::vector<SpectrumEntry>& entries) {
  std::ostringstream os;
  os.precision(15);
  os << "level_index,m,n,kind,energy,degeneracy,flag\n";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    os << i << "," << e.m << "," << e.n << "," << to_string(e.kind) << "," << e.energy << "," << e.degeneracy << ","
       << (e.flagged ? "ratio" : "") << "\n";
  }
  return os.str();
}

std::vector<WavelengthRow> wavelength_report(const PeriodLattice& lattice, Vec2 momentum) {
  std::vector<WavelengthRow> rows;
  for (int k = 0; k < static_cast<int>(lattice.basis.size()); ++k) {
    WavelengthRow r;
    r.period = k;
    r.vector = lattice.basis[k].value();
    const double proj = dot(momentum, r.vector);
    r.count = proj / static_cast<double>(kTwoPi);
    r.wavelength = safe_wavelength(std::abs(r.vector), proj);
    r.integral = std::fabs(r.count - std::round(r.count)) <= 1e-9 * std::max(1.0, std::fabs(r.count));
    rows.push_back(r);
  }
  return rows;
}

std::vector<WavelengthRow> wavelength_report(const PeriodLattice& lattice, const QuantizedMomentum& momentum) {
  auto rows = wavelength_report(lattice, momentum.vector);
  if (momentum.kind == MomentumKind::Quantum || !lattice.rational) return rows;
  for (auto& r : rows) {
    auto [r1, r2] = reduce_period(lattice.basis[r.period].vector, lattice.relations, *lattice.rational);
    r.expected = r1 * momentum.m + r2 * momentum.n;
  }
  return rows;
}

}  // namespace billiards
