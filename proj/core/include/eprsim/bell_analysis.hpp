// Copyright (c) 2026 The eprsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// bell_analysis.hpp: Bell-inequality bookkeeping on top of the closed-form
// correlations: |E(a,b) - E(a,c)| <= 1 + E(b,c), its decay under dephasing,
// and the crossover where the violation disappears.

#pragma once

#include <optional>
#include <vector>

#include "eprsim/analytic_dynamics.hpp"
#include "eprsim/spatial_decoherence.hpp"

namespace eprsim {

struct BellAngles {
  Direction a;
  Direction b;
  Direction c;

  // Coplanar geometry (x-z plane) with b on the z axis, a rotated by
  // theta_ab to one side and c by theta_bc to the other, so that
  // angle(a,c) = theta_ab + theta_bc.
  static BellAngles coplanar(double theta_ab, double theta_bc);

  // theta_ab = theta_bc = pi/3: the maximal-violation configuration,
  // lhs = 1 vs rhs = 1/2 at t = 0.
  static BellAngles canonical();
};

struct BellEvaluation {
  double t{0.0};
  double lhs{0.0};      // |E(a,b) - E(a,c)|
  double rhs{0.0};      // 1 + E(b,c)
  bool violated{false}; // lhs > rhs + 1e-12; the boundary counts as satisfied
};

BellEvaluation evaluate_bell(const BellAngles& angles, const SpinDecayParams& p,
                             double t);

// Earliest time at which the inequality stops being violated. Returns nullopt
// when there is no violation at t = 0, or when none of 50 bracket doublings
// finds a sign change (no noise). Otherwise brackets the root and bisects to
// a relative width of 1e-9. With all correlation times equal to tau_s and
// canonical angles this is tau_s * ln(3/2).
std::optional<double> crossover_time(const BellAngles& angles,
                                     const SpinDecayParams& p);

struct CrossoverSeparation {
  double t_star{0.0};
  double exact{0.0};      // separation(space, t_star)
  double asymptotic{0.0}; // 2 eps t_star / (m gamma)
};

// Detector separation at which the violation dies: the packet-center distance
// evaluated at the crossover time, with the large-gamma-t asymptote alongside.
std::optional<CrossoverSeparation> crossover_separation(
    const BellAngles& angles, const SpinDecayParams& p,
    const SpatialParams& space);

// evaluate_bell over a sorted, non-negative time grid.
std::vector<BellEvaluation> sweep(const BellAngles& angles,
                                  const SpinDecayParams& p,
                                  const std::vector<double>& t_grid);

} // namespace eprsim
