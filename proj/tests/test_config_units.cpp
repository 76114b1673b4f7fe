#include "hapnet/config.hpp"
#include "hapnet/units.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

using namespace hapnet;

namespace {

const char* kBaseline = R"(# baseline
b_c = 20e6
b_ka = 800e6
n0_c_dbm_hz = -174
n0_ka_dbm_hz = -203
p_t = 20
p_h = 60
p_sat = 60
j_channels = 1000
g_h_db = 20
g_s_db = 27
c_h = 17.5e6
alt_hap = 20e3
alt_sat = 200e3
)";

std::string replace_line(std::string text, const std::string& key, const std::string& line)
{
  const auto pos = text.find(key + " =");
  const auto end = text.find('\n', pos);
  return text.replace(pos, end - pos, line);
}

std::string without_line(std::string text, const std::string& key)
{
  const auto pos = text.find(key + " =");
  const auto end = text.find('\n', pos);
  return text.erase(pos, end - pos + 1);
}

std::string error_key(const std::string& text)
{
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

} // namespace

TEST(Units, DbToLinearExamples)
{
  EXPECT_DOUBLE_EQ(db_to_linear(0), 1.0);
  EXPECT_DOUBLE_EQ(db_to_linear(20), 100.0);
  // 10^2.7 from an external calculator
  EXPECT_NEAR(db_to_linear(27), 501.18723362727224, 1e-10);
}

TEST(Units, DensityExamples)
{
  EXPECT_NEAR(dbm_per_hz_to_w_per_hz(-30), 1e-6, 1e-20);
  EXPECT_NEAR(dbm_per_hz_to_w_per_hz(-174) / std::pow(10.0, -20.4), 1.0, 1e-12);
  EXPECT_NEAR(dbm_per_hz_to_w_per_hz(-203) / std::pow(10.0, -23.3), 1.0, 1e-12);
}

TEST(Units, RejectsNonFinite)
{
  const double inf = std::numeric_limits<double>::infinity();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(db_to_linear(inf), std::invalid_argument);
  EXPECT_THROW(db_to_linear(nan), std::invalid_argument);
  EXPECT_THROW(dbm_per_hz_to_w_per_hz(-inf), std::invalid_argument);
}

TEST(Units, RoundTripOverRange)
{
  for (double x = -300; x <= 300; x += 0.37)
    EXPECT_NEAR(linear_to_db(db_to_linear(x)), x, 1e-12) << x;
}

TEST(Config, BaselineEchoed)
{
  const auto c = parse_config(kBaseline);
  EXPECT_EQ(c.b_c, 20e6);
  EXPECT_EQ(c.b_ka, 800e6);
  EXPECT_EQ(c.p_t, 20);
  EXPECT_EQ(c.p_h, 60);
  EXPECT_EQ(c.p_sat, 60);
  EXPECT_EQ(c.j_channels, 1000);
  EXPECT_NEAR(c.g_h_lin, 100, 1e-12);
  EXPECT_NEAR(c.g_s_lin, 501.18723362727224, 1e-10);
  EXPECT_EQ(c.c_h, 17.5e6);
  EXPECT_EQ(c.alt_hap, 20e3);
  EXPECT_EQ(c.alt_sat, 200e3);
  EXPECT_NEAR(c.n0_c / std::pow(10.0, -20.4), 1, 1e-12);
  EXPECT_NEAR(c.n0_ka / std::pow(10.0, -23.3), 1, 1e-12);
  EXPECT_EQ(c.n0_sat, c.n0_ka);
}

TEST(Config, Defaults)
{
  const auto c = parse_config(kBaseline);
  EXPECT_EQ(c.eps, 2.0);
  EXPECT_EQ(c.grid_pka, 64);
  EXPECT_EQ(c.seed, 0u);
  EXPECT_EQ(c.m_uts, 3);
  EXPECT_EQ(c.users_per_ut, std::vector<int>(3, 10));
}

TEST(Config, LinearFormsAndLists)
{
  std::string text = replace_line(kBaseline, "g_h_db", "g_h_lin = 42");
  text += "users_per_ut = 3, 4\nseed = 9\neps = 3.5\n";
  const auto c = parse_config(text);
  EXPECT_EQ(c.g_h_lin, 42);
  EXPECT_EQ(c.m_uts, 2);
  EXPECT_EQ(c.users_per_ut, (std::vector<int>{3, 4}));
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.eps, 3.5);
}

TEST(Config, ErrorsNameTheKey)
{
  EXPECT_EQ(error_key(replace_line(kBaseline, "p_h", "p_h = -1")), "p_h");
  EXPECT_EQ(error_key(replace_line(kBaseline, "j_channels", "j_channels = 0")), "j_channels");
  EXPECT_EQ(error_key(without_line(kBaseline, "b_ka")), "b_ka");
  EXPECT_EQ(error_key(std::string(kBaseline) + "bogus = 1\n"), "bogus");
  EXPECT_EQ(error_key(std::string(kBaseline) + "p_t = 3\n"), "p_t");
  EXPECT_EQ(error_key(std::string(kBaseline) + "eps = 0.5\n"), "eps");
  EXPECT_EQ(error_key(replace_line(kBaseline, "c_h", "c_h = fast")), "c_h");
  EXPECT_EQ(error_key(std::string(kBaseline) + "m_uts = 2\nusers_per_ut = 1,2,3\n"),
            "users_per_ut");
}

TEST(Config, LoadIsDeterministic)
{
  const auto path = std::filesystem::temp_directory_path() / "hapnet_cfg_test.cfg";
  std::ofstream(path) << kBaseline;
  const auto a = load_config(path.string());
  const auto b = load_config(path.string());
  EXPECT_EQ(a.n0_c, b.n0_c);
  EXPECT_EQ(a.g_s_lin, b.g_s_lin);
  EXPECT_EQ(a.users_per_ut, b.users_per_ut);
  std::filesystem::remove(path);
  EXPECT_THROW(load_config(path.string()), ConfigError);
}

TEST(Config, ShippedBaselineMatchesBuiltIn)
{
  const auto c = load_config(HAPNET_SOURCE_DIR "/configs/baseline.cfg");
  const auto t = baseline_config();
  EXPECT_EQ(c.b_c, t.b_c);
  EXPECT_EQ(c.n0_c, t.n0_c);
  EXPECT_EQ(c.n0_ka, t.n0_ka);
  EXPECT_EQ(c.g_s_lin, t.g_s_lin);
  EXPECT_EQ(c.users_per_ut, t.users_per_ut);
}

TEST(Config, NoiseScaling)
{
  const auto c = baseline_config();
  EXPECT_NEAR(c.noise_c() / (std::pow(10.0, -20.4) * 20e6 / 1000), 1, 1e-12);
  EXPECT_NEAR(c.noise_ka() / (std::pow(10.0, -23.3) * 800e6 / 3), 1, 1e-12);
}
