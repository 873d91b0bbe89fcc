#pragma once

#include <vector>

#include "warpmin/cantor_set.hpp"
#include "warpmin/certificate.hpp"
#include "warpmin/profile.hpp"
#include "warpmin/structure.hpp"

namespace warpmin {

struct CantorSpec {
  int depth = 2;
  Schedule schedule = Schedule::pow6();
};

/// Ternary midpoints m_{n,k} of the level-n removed middle thirds.
std::vector<Rational> midpoints(int n);

/// Upper bound on sup h over the circle for the given schedule and depth.
double cantor_sup_bound(const CantorSpec& spec);

/// f = 1 - sum of scaled bumps on the removed intervals up to spec.depth.
Profile build_cantor_profile(const CantorSpec& spec);

Certificate verify_critical_structure(const Profile& profile, int depth);
Certificate verify_non_monotone_witnesses(const Profile& profile, int depth);

/// Finite-depth hallmarks of a Cantor set over levels j < depth.
Certificate cantor_likeness(const std::vector<std::vector<Arc>>& levels, int depth);
Certificate cantor_likeness(const NonMonotonicSet& set, int depth);

}  // namespace warpmin
