#pragma once

#include "hapnet/link_model.hpp"

#include <cmath>
#include <vector>

namespace fixture {

using namespace hapnet;

// Two UTs with two users each at hand-picked positions.
inline Network two_ut()
{
  SystemConfig c = baseline_config().with_uts(2);
  c.users_per_ut = {2, 2};
  Topology t({{1000, 0}, {-500, 800}},
             {{{1100, 0}, {1000, -200}}, {{-450, 800}, {-500, 1000}}},
             {0, 0, c.alt_hap}, {0, 0, c.alt_sat}, c.eps);
  return Network(c, std::move(t));
}

// Uneven powers and bandwidths so every interference term is distinct.
inline Allocation two_ut_alloc(const Network& net)
{
  Allocation a = Allocation::zeros(net);
  a.b_h = 8e6;
  a.b_t = {5e6, 7e6};
  a.p_t_users = {12, 8, 5, 15};
  a.p_h_users = {10, 20, 5, 15};
  a.p_h_ka = 2.5;
  return a;
}

inline double sq_dist_gain(double dx, double dy, double dz, double eps)
{
  return std::pow(std::sqrt(dx * dx + dy * dy + dz * dz), -eps);
}

} // namespace fixture
