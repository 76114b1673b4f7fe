#include "fixtures.hpp"

#include "hapnet/backhaul_select.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace hapnet;

namespace {

Network random_net(int m, std::uint64_t seed)
{
  auto c = baseline_config().with_uts(m);
  c.users_per_ut.assign(static_cast<std::size_t>(m), 1);
  c.seed = seed;
  return Network(c);
}

} // namespace

TEST(DeltaC, ZeroHapPowerIsNegative)
{
  const auto net = fixture::two_ut();
  for (std::size_t m = 0; m < 2; ++m)
    EXPECT_LT(delta_c(net, m, 1, 0.0), 0);
  EXPECT_THROW(delta_c(net, 0, 0, 1.0), std::invalid_argument);
}

TEST(DeltaC, EqualSnrsGiveZero)
{
  const auto net = fixture::two_ut();
  const auto& c = net.config;
  const double sat_snr = c.p_sat * c.g_s_lin * net.topo.g2_ut_sat(0) / (c.noise_sat() * 2);
  const double p = sat_snr * c.noise_ka() / (c.g_h_lin * net.topo.g2_ut_hap(0));
  EXPECT_NEAR(delta_c(net, 0, 2, p), 0, 1e-6);
}

TEST(DeltaC, FixtureMatchesOracle)
{
  const auto net = fixture::two_ut();
  const double n0 = std::pow(10.0, -23.3);
  const double noise = n0 * 800e6 / 2;
  const double d2_hap = 1000.0 * 1000 + 2e4 * 2e4;
  const double d2_sat = 1000.0 * 1000 + 2e5 * 2e5;
  const double hap = 1 + 3.0 * 100 / d2_hap / noise;
  const double sat = 1 + 60 * std::pow(10.0, 2.7) / d2_sat / (noise * 2);
  EXPECT_NEAR(delta_c(net, 0, 2, 3.0) / (400e6 * std::log2(hap / sat)), 1, 1e-10);
}

TEST(Select, ZeroHapPowerGoesAllSatellite)
{
  const auto net = random_net(5, 1);
  const auto s = select(net, 0.0);
  EXPECT_EQ(s.assign.m_s(), 5u);
  EXPECT_EQ(s.assign.m_h(), 0u);
}

TEST(Select, NoSatellitePowerGoesAllHap)
{
  auto c = baseline_config().with_uts(4);
  c.p_sat = 1e-30;
  const Network net(c);
  const auto s = select(net, 5.0);
  EXPECT_EQ(s.assign.m_h(), 4u);
}

TEST(Select, CapTotalIsConsistent)
{
  const auto net = random_net(6, 2);
  for (double p : {0.0, 0.5, 3.0, 10.0}) {
    const auto s = select(net, p);
    EXPECT_TRUE(s.assign.is_partition_of(6));
    EXPECT_NEAR(s.cap_total / backhaul_capacity(net, s.assign, p), 1, 1e-9);
    EXPECT_GE(s.cap_total, backhaul_capacity(net, BackhaulAssignment::all_hap(6), p));
    EXPECT_GE(s.cap_total, backhaul_capacity(net, BackhaulAssignment::all_satellite(6), p));
  }
}

TEST(Select, MatchesBruteForce)
{
  for (int m = 2; m <= 10; ++m)
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      const auto net = random_net(m, seed);
      for (double p : {0.05, 0.4, 2.0, 12.0}) {
        const auto s = select(net, p);
        const auto b = brute_force(net, p);
        EXPECT_NEAR(s.cap_total / b.cap_total, 1, 1e-9) << m << " " << seed << " " << p;
      }
    }
}

TEST(Select, NondecreasingInHapPower)
{
  const auto net = random_net(7, 5);
  double prev = 0;
  for (double p = 0; p <= 20; p += 0.25) {
    const double cap = select(net, p).cap_total;
    EXPECT_GE(cap, prev * (1 - 1e-12));
    prev = cap;
  }
}

TEST(BruteForce, SingleUtPicksBetterOption)
{
  const auto net = random_net(1, 4);
  for (double p : {0.0, 1.0, 50.0}) {
    const double hap = backhaul_capacity(net, BackhaulAssignment::all_hap(1), p);
    const double sat = backhaul_capacity(net, BackhaulAssignment::all_satellite(1), p);
    EXPECT_EQ(brute_force(net, p).cap_total, std::max(hap, sat));
  }
}

TEST(BruteForce, SymmetricUnderLabelSwap)
{
  SystemConfig c = baseline_config().with_uts(2);
  c.users_per_ut = {1, 1};
  Network net(c, Topology({{700, 0}, {-700, 0}}, {{{710, 0}}, {{-710, 0}}}, {0, 0, 2e4},
                          {0, 0, 2e5}, 2));
  for (double p : {0.3, 3.0})
    EXPECT_NEAR(backhaul_capacity(net, BackhaulAssignment::from_mask(2, 0b01), p) /
                    backhaul_capacity(net, BackhaulAssignment::from_mask(2, 0b10), p),
                1, 1e-14);
  const auto b = brute_force(net, 0.3);
  if (b.assign.m_h() == 1) {
    EXPECT_EQ(b.assign.to_hap, std::vector<std::size_t>{0});
  }
}

TEST(BruteForce, RejectsLargeM)
{
  auto c = baseline_config().with_uts(21);
  c.users_per_ut.assign(21, 1);
  EXPECT_THROW(brute_force(Network(c), 1.0), std::invalid_argument);
}
