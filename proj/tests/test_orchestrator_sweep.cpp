#include "hapnet/orchestrator.hpp"
#include "hapnet/sweep.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

using namespace hapnet;

namespace {

SystemConfig small_config(std::uint64_t seed = 0)
{
  auto c = baseline_config();
  c.grid_pka = 9;
  c.seed = seed;
  return c;
}

std::vector<std::string> split_lines(const std::string& s)
{
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);)
    out.push_back(line);
  return out;
}

} // namespace

TEST(Grid, SpacingAndSinglePoint)
{
  auto c = small_config();
  const auto g = pka_grid(c);
  ASSERT_EQ(g.size(), 9u);
  EXPECT_EQ(g.front(), 0);
  EXPECT_DOUBLE_EQ(g.back(), c.p_h / c.m_uts);
  c.grid_pka = 1;
  EXPECT_EQ(pka_grid(c), std::vector<double>{0.0});
}

TEST(Solve, SinglePointGridIsZeroPowerSolve)
{
  auto c = small_config();
  c.grid_pka = 1;
  const Network net(c);
  const auto rep = solve(net);
  EXPECT_EQ(rep.best_p_h_ka, 0);
  EXPECT_EQ(rep.assign.m_h(), 0u);
  const auto sel = select(net, 0.0);
  const auto fp = run(net, sel.assign, 0.0, sel.cap_total);
  EXPECT_EQ(rep.delivered_sum_rate, fp.delivered_rate);
}

TEST(Solve, WinnerDominatesGrid)
{
  const Network net(small_config(3));
  const auto rep = solve(net);
  ASSERT_EQ(rep.grid_trace.size(), 9u);
  for (const auto& g : rep.grid_trace) {
    EXPECT_LE(g.delivered_rate, rep.delivered_sum_rate);
    EXPECT_EQ(g.m_h <= 3, true);
  }
  EXPECT_TRUE(rep.assign.is_partition_of(3));
  EXPECT_EQ(rep.delivered_sum_rate, std::min(rep.rates.r_h_sum, net.config.c_h) +
                                        std::min(rep.rates.r_t_sum, rep.cap_ka));
  const auto first = std::find_if(rep.grid_trace.begin(), rep.grid_trace.end(), [&](auto& g) {
    return g.delivered_rate == rep.delivered_sum_rate;
  });
  EXPECT_EQ(first->p_h_ka, rep.best_p_h_ka);
}

TEST(Solve, LargeHapPowerPutsEveryUtOnHap)
{
  auto c = small_config(1);
  c.p_h = 1e6;
  const auto rep = solve(Network(c));
  EXPECT_EQ(rep.assign.m_h(), 3u);
}

TEST(Solve, WorkersDoNotChangeResult)
{
  const Network net(small_config(4));
  EXPECT_EQ(serialize(solve(net, {}, 1)), serialize(solve(net, {}, 4)));
}

TEST(Solve, SerializationIsDeterministic)
{
  const auto a = serialize(solve(Network(small_config(5))));
  const auto b = serialize(solve(Network(small_config(5))));
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("delivered_sum_rate = "), std::string::npos);
}

TEST(TwoLayer, BaselineShape)
{
  const Network net(small_config(2));
  const auto rep = solve_two_layer(net);
  EXPECT_TRUE(rep.two_layer);
  EXPECT_EQ(rep.alloc.b_h, 0);
  EXPECT_EQ(rep.alloc.p_h_ka, 0);
  EXPECT_EQ(rep.assign.m_s(), 3u);
  EXPECT_EQ(rep.rates.r_h_sum, 0);
  EXPECT_EQ(rep.delivered_sum_rate, std::min(rep.rates.r_t_sum, rep.cap_ka));
  EXPECT_LE(rep.delivered_sum_rate, solve(net).delivered_sum_rate);
}

TEST(TwoLayer, SmallSatellitePowerCapsAccess)
{
  auto c = small_config();
  c.m_uts = 1;
  c.users_per_ut = {10};
  c.p_sat = 1e-12;
  const Network net(c);
  const auto rep = solve_two_layer(net);
  EXPECT_LT(rep.cap_ka, rep.rates.r_t_sum);
  EXPECT_EQ(rep.delivered_sum_rate, rep.cap_ka);
  const double n0 = std::pow(10.0, -23.3);
  const double g = net.topo.g2_ut_sat(0);
  EXPECT_NEAR(rep.cap_ka / (800e6 * std::log2(1 + 1e-12 * std::pow(10.0, 2.7) * g / (n0 * 800e6))),
              1, 1e-12);
}

TEST(Sweep, SpecValidation)
{
  SweepSpec s;
  s.base = small_config();
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.range = {3, 2};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.range = {2, 3};
  s.repeats = 0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.repeats = 1;
  s.range = {2.5};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.range = {2, 3};
  EXPECT_NO_THROW(s.validate());
}

TEST(Sweep, DefaultRanges)
{
  EXPECT_EQ(default_range(SweepKind::uts), (std::vector<double>{2, 3, 4, 5, 6}));
  const auto p = default_range(SweepKind::hap_power);
  ASSERT_EQ(p.size(), 20u);
  EXPECT_DOUBLE_EQ(p.front(), 6);
  EXPECT_NEAR(p.back(), 600, 1e-9);
  EXPECT_TRUE(std::is_sorted(p.begin(), p.end()));
}

TEST(Sweep, RowsMeansAndDeterminism)
{
  SweepSpec s;
  s.kind = SweepKind::uts;
  s.range = {2, 3};
  s.repeats = 3;
  s.base = small_config(10);
  const auto rows = run_sweep(s);
  ASSERT_EQ(rows.size(), 6u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].sweep_value, s.range[i / 3]);
    EXPECT_EQ(rows[i].seed, 10 + i % 3);
    EXPECT_EQ(rows[i].m_h + rows[i].m_s, static_cast<std::size_t>(rows[i].sweep_value));
  }
  const auto means = sweep_means(rows);
  ASSERT_EQ(means.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    double sum = 0;
    for (std::size_t r = 0; r < 3; ++r)
      sum += rows[k * 3 + r].delivered_rate;
    EXPECT_NEAR(means[k].delivered_rate / (sum / 3), 1, 1e-12);
  }

  const auto csv = sweep_csv(rows);
  const auto lines = split_lines(csv);
  ASSERT_EQ(lines.size(), 7u);
  EXPECT_EQ(lines[0], sweep_csv_header);
  for (const auto& l : lines)
    EXPECT_EQ(std::count(l.begin(), l.end(), ','), 10);

  s.workers = 4;
  EXPECT_EQ(sweep_csv(run_sweep(s)), csv);
}

TEST(Sweep, HapPowerKindSetsBudget)
{
  SweepSpec s;
  s.kind = SweepKind::backhaul_dist;
  s.range = {6, 600};
  s.repeats = 1;
  s.base = small_config();
  EXPECT_EQ(s.config_for(600, 0).p_h, 600);
  for (const auto& r : run_sweep(s))
    EXPECT_EQ(r.m_h + r.m_s, 3u);
}

TEST(Output, UnwritablePathThrows)
{
  EXPECT_THROW(write_text_file("/proc/hapnet_no_such_dir/x.csv", "a"), OutputError);
  const auto p = std::filesystem::temp_directory_path() / "hapnet_out_test" / "x.csv";
  write_text_file(p, "abc");
  EXPECT_TRUE(std::filesystem::exists(p));
  std::filesystem::remove_all(p.parent_path());
}
