#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "billiards/lattice.hpp"

namespace billiards {

// Units: hbar = 1, mass = 1, E = |p|^2 / 2.

enum class MomentumKind { ClassicalAperiodic, ClassicalPeriodic, Quantum };
std::string to_string(MomentumKind kind);

struct QuantizedMomentum {
  std::int64_t m = 0;
  std::int64_t n = 0;
  Vec2 vector;
  MomentumKind kind = MomentumKind::ClassicalAperiodic;
  // Quantum kind: transverse / longitudinal momentum ratio and whether it
  // exceeds the small-ratio threshold.
  double ratio = 0;
  bool flagged = false;

  double energy() const { return std::norm(vector) / 2; }
};

// p.D1 = 2 pi m C1, p.D2 = 2 pi n C2.
QuantizedMomentum momentum_aperiodic(const PeriodLattice& lattice, std::int64_t m, std::int64_t n);

// Global periodic skeleton along D2: C2 (D2.D1) = k C1 |D2|^2 with integer k.
struct PeriodicSkeletonData {
  std::int64_t k = 0;
  // Angle between D1 and D2.
  double alpha = 0;
  // Every line parallel to D2 is closed, so there is no aperiodic bundle.
  bool fully_periodic = false;
};

std::optional<PeriodicSkeletonData> periodic_skeleton_check(const PeriodLattice& lattice);
// Same, and samples the flow along D2 on the surface to fill fully_periodic.
std::optional<PeriodicSkeletonData> periodic_skeleton_check(const PeriodLattice& lattice, const Epp& epp);

// p = (2 pi n C2 / |D2|^2) D2; labelled (k n, n).
QuantizedMomentum momentum_periodic(const PeriodLattice& lattice, const PeriodicSkeletonData& data, std::int64_t n);

// C_l = n_l p_l for a period D_l = (p_l/q_l) D2 with C2 = q_l n_l.
std::int64_t poc_constant(const PeriodLattice& lattice, const Cyclo& period);
// (2 pi n C_l / |D_l|^2) D_l.
QuantizedMomentum momentum_poc(const PeriodLattice& lattice, const Cyclo& period, std::int64_t n);

// Components (s * sqrt(2 E_0m), p_n) in the frame with y along D2, where
// sqrt(2 E_0m) |D1| sin(alpha) = 2 pi m C1 and s = transverse_sign.
QuantizedMomentum quantum_momentum(const PeriodLattice& lattice, const PeriodicSkeletonData& data, std::int64_t m,
                                   std::int64_t n, int transverse_sign = 1, double max_ratio = 0.2);

struct SpectrumEntry {
  std::int64_t m = 0;
  std::int64_t n = 0;
  double energy = 0;
  MomentumKind kind = MomentumKind::ClassicalAperiodic;
  int degeneracy = 1;
  bool flagged = false;
  // 2 pi / |p| and 2 pi / |p . D_i / |D_i||.
  double lambda = 0;
  double lambda1 = 0;
  double lambda2 = 0;
};

struct SpectrumKinds {
  bool aperiodic = true;
  bool periodic = false;
};

// All labelled levels with E <= e_max, merged by energy (1e-9 relative) with
// degeneracy counts, ascending. Aperiodic labels run over all (m, n) != 0;
// periodic-skeleton labels over m, n >= 1.
std::vector<SpectrumEntry> spectrum(const PeriodLattice& lattice, double e_max, SpectrumKinds kinds = {},
                                    double max_ratio = 0.2);

std::string spectrum_csv(const std::vector<SpectrumEntry>& entries);

struct WavelengthRow {
  int period = 0;
  Vec2 vector;
  double wavelength = 0;
  // |D| / wavelength = |p . D| / (2 pi).
  double count = 0;
  bool integral = false;
  // r1 m + r2 n when the momentum carries lattice labels.
  std::optional<std::int64_t> expected;
};

std::vector<WavelengthRow> wavelength_report(const PeriodLattice& lattice, Vec2 momentum);
std::vector<WavelengthRow> wavelength_report(const PeriodLattice& lattice, const QuantizedMomentum& momentum);

}  // namespace billiards
