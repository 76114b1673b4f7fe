#pragma once

#include "hapnet/units.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hapnet {

/// Raised for malformed or invalid configuration; key() names the offending entry.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key))
  {
  }
  const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

/// Scalar system parameters in SI units and linear scale.
struct SystemConfig {
  double b_c = 20e6;   // C-band pool, Hz
  double b_ka = 800e6; // Ka-band pool, Hz
  double n0_c = 0;     // W/Hz
  double n0_ka = 0;    // W/Hz
  double n0_sat = 0;   // W/Hz
  double p_t = 20;     // per-UT budget, W
  double p_h = 60;     // HAP budget, W
  double p_sat = 60;   // satellite budget, W
  int j_channels = 1000;
  double g_h_lin = 100;
  double g_s_lin = 501.18723362727224;
  double c_h = 17.5e6; // HAP C-band backhaul cap, bit/s
  double alt_hap = 20e3;
  double alt_sat = 200e3;
  double eps = 2.0;
  int m_uts = 3;
  std::vector<int> users_per_ut = std::vector<int>(3, 10);
  int grid_pka = 64;
  std::uint64_t seed = 0;
  double r_area = 5000; // UT placement radius around the HAP ground point, m
  double r_cell = 250;  // user placement radius around each UT, m

  int total_users() const
  {
    return std::accumulate(users_per_ut.begin(), users_per_ut.end(), 0);
  }

  /// Noise power of one orthogonal C-band channel.
  double noise_c() const { return n0_c * b_c / j_channels; }
  /// Noise power of one Ka-band backhaul link at the HAP side.
  double noise_ka() const { return n0_ka * b_ka / m_uts; }
  /// Noise power of one Ka-band backhaul link at the satellite side.
  double noise_sat() const { return n0_sat * b_ka / m_uts; }

  /// Copy with a different UT count; users_per_ut is broadcast from its first entry.
  SystemConfig with_uts(int m) const
  {
    SystemConfig out = *this;
    out.m_uts = m;
    const int n = users_per_ut.empty() ? 10 : users_per_ut.front();
    out.users_per_ut.assign(static_cast<std::size_t>(std::max(m, 0)), n);
    return out;
  }

  void validate() const
  {
    const auto positive = [](const char* key, double v) {
      if (!std::isfinite(v) || !(v > 0.0))
        throw ConfigError(key, "must be finite and strictly positive");
    };
    positive("b_c", b_c);
    positive("b_ka", b_ka);
    positive("n0_c", n0_c);
    positive("n0_ka", n0_ka);
    positive("n0_sat", n0_sat);
    positive("p_t", p_t);
    positive("p_h", p_h);
    positive("p_sat", p_sat);
    positive("g_h_lin", g_h_lin);
    positive("g_s_lin", g_s_lin);
    positive("c_h", c_h);
    positive("alt_hap", alt_hap);
    positive("alt_sat", alt_sat);
    positive("r_area", r_area);
    positive("r_cell", r_cell);
    if (j_channels < 1)
      throw ConfigError("j_channels", "must be at least 1");
    if (!std::isfinite(eps) || eps < 1.0)
      throw ConfigError("eps", "must be finite and >= 1");
    if (m_uts < 1)
      throw ConfigError("m_uts", "must be at least 1");
    if (static_cast<int>(users_per_ut.size()) != m_uts)
      throw ConfigError("users_per_ut", "length must equal m_uts");
    for (int n : users_per_ut)
      if (n < 1)
        throw ConfigError("users_per_ut", "every entry must be at least 1");
    if (grid_pka < 1)
      throw ConfigError("grid_pka", "must be at least 1");
  }
};

/// Baseline parameter set; geometry and search settings keep their defaults.
inline SystemConfig baseline_config()
{
  SystemConfig c;
  c.n0_c = dbm_per_hz_to_w_per_hz(-174);
  c.n0_ka = dbm_per_hz_to_w_per_hz(-203);
  c.n0_sat = c.n0_ka;
  c.g_h_lin = db_to_linear(20);
  c.g_s_lin = db_to_linear(27);
  return c;
}

namespace detail {

inline std::string_view trim(std::string_view s)
{
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, std::string_view text)
{
  double v = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ConfigError(key, "not a number: '" + std::string(text) + "'");
  return v;
}

inline long long parse_integer(const std::string& key, std::string_view text)
{
  long long v = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ConfigError(key, "not an integer: '" + std::string(text) + "'");
  return v;
}

class ConfigReader {
public:
  explicit ConfigReader(std::string_view text)
  {
    std::size_t lineno = 0;
    while (!text.empty()) {
      ++lineno;
      const auto nl = text.find('\n');
      auto line = text.substr(0, nl);
      text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
      if (const auto hash = line.find('#'); hash != std::string_view::npos)
        line = line.substr(0, hash);
      line = detail::trim(line);
      if (line.empty())
        continue;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos)
        throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
      std::string key(detail::trim(line.substr(0, eq)));
      std::string value(detail::trim(line.substr(eq + 1)));
      if (key.empty())
        throw ConfigError("line " + std::to_string(lineno), "empty key");
      if (!values_.emplace(key, value).second)
        throw ConfigError(key, "duplicate key");
    }
  }

  std::optional<std::string> take(const std::string& key)
  {
    auto it = values_.find(key);
    if (it == values_.end())
      return std::nullopt;
    std::string v = std::move(it->second);
    values_.erase(it);
    return v;
  }

  double number(const std::string& key)
  {
    auto v = take(key);
    if (!v)
      throw ConfigError(key, "missing mandatory key");
    return detail::parse_double(key, *v);
  }

  std::optional<double> optional_number(const std::string& key)
  {
    auto v = take(key);
    if (!v)
      return std::nullopt;
    return detail::parse_double(key, *v);
  }

  long long integer(const std::string& key)
  {
    auto v = take(key);
    if (!v)
      throw ConfigError(key, "missing mandatory key");
    return detail::parse_integer(key, *v);
  }

  std::optional<long long> optional_integer(const std::string& key)
  {
    auto v = take(key);
    if (!v)
      return std::nullopt;
    return detail::parse_integer(key, *v);
  }

  /// A linear quantity given as `linear_key` or in log units as `log_key`.
  std::optional<double> linear_or_log(const std::string& linear_key, const std::string& log_key,
                                      double (*from_log)(double))
  {
    auto lin = optional_number(linear_key);
    auto log = optional_number(log_key);
    if (lin && log)
      throw ConfigError(linear_key, "given both as " + linear_key + " and " + log_key);
    if (log) {
      if (!std::isfinite(*log))
        throw ConfigError(log_key, "must be finite");
      return from_log(*log);
    }
    return lin;
  }

  /// Keys that were never consumed.
  std::vector<std::string> leftover() const
  {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_)
      out.push_back(k);
    return out;
  }

private:
  std::map<std::string, std::string, std::less<>> values_;
};

} // namespace detail

/// Parses flat `key = value` text (see README for the key list). '#' starts a comment.
inline SystemConfig parse_config(std::string_view text)
{
  detail::ConfigReader in(text);
  const auto required = [](std::optional<double> v, const std::string& key) {
    if (!v)
      throw ConfigError(key, "missing mandatory key");
    return *v;
  };

  SystemConfig c;
  c.b_c = in.number("b_c");
  c.b_ka = in.number("b_ka");
  c.n0_c = required(in.linear_or_log("n0_c", "n0_c_dbm_hz", dbm_per_hz_to_w_per_hz), "n0_c_dbm_hz");
  c.n0_ka =
      required(in.linear_or_log("n0_ka", "n0_ka_dbm_hz", dbm_per_hz_to_w_per_hz), "n0_ka_dbm_hz");
  c.n0_sat =
      in.linear_or_log("n0_sat", "n0_sat_dbm_hz", dbm_per_hz_to_w_per_hz).value_or(c.n0_ka);
  c.p_t = in.number("p_t");
  c.p_h = in.number("p_h");
  c.p_sat = in.number("p_sat");
  c.j_channels = static_cast<int>(in.integer("j_channels"));
  c.g_h_lin = required(in.linear_or_log("g_h_lin", "g_h_db", db_to_linear), "g_h_db");
  c.g_s_lin = required(in.linear_or_log("g_s_lin", "g_s_db", db_to_linear), "g_s_db");
  c.c_h = in.number("c_h");
  c.alt_hap = in.number("alt_hap");
  c.alt_sat = in.number("alt_sat");

  c.eps = in.optional_number("eps").value_or(2.0);
  c.r_area = in.optional_number("r_area").value_or(5000.0);
  c.r_cell = in.optional_number("r_cell").value_or(250.0);
  c.grid_pka = static_cast<int>(in.optional_integer("grid_pka").value_or(64));
  const auto seed = in.optional_integer("seed").value_or(0);
  if (seed < 0)
    throw ConfigError("seed", "must be nonnegative");
  c.seed = static_cast<std::uint64_t>(seed);

  const auto m = in.optional_integer("m_uts");
  std::vector<int> users;
  if (auto list = in.take("users_per_ut")) {
    std::string_view rest = *list;
    while (true) {
      const auto comma = rest.find(',');
      const auto item = detail::trim(rest.substr(0, comma));
      users.push_back(static_cast<int>(detail::parse_integer("users_per_ut", item)));
      if (comma == std::string_view::npos)
        break;
      rest = rest.substr(comma + 1);
    }
  }
  if (m) {
    c.m_uts = static_cast<int>(*m);
    if (users.empty())
      users.assign(static_cast<std::size_t>(std::max(c.m_uts, 0)), 10);
    else if (users.size() == 1)
      users.assign(static_cast<std::size_t>(std::max(c.m_uts, 0)), users.front());
  } else if (users.size() > 1) {
    c.m_uts = static_cast<int>(users.size());
  } else {
    const int n = users.empty() ? 10 : users.front();
    users.assign(static_cast<std::size_t>(c.m_uts), n);
  }
  c.users_per_ut = std::move(users);

  if (const auto rest = in.leftover(); !rest.empty())
    throw ConfigError(rest.front(), "unknown key");

  c.validate();
  return c;
}

inline SystemConfig load_config(const std::string& path)
{
  std::ifstream f(path, std::ios::binary);
  if (!f)
    throw ConfigError("path", "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

} // namespace hapnet
