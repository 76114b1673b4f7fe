#pragma once

#include "hapnet/orchestrator.hpp"
#include "hapnet/parallel.hpp"
#include "hapnet/text_format.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hapnet {

enum class SweepKind { uts, hap_power, backhaul_dist };

inline std::optional<SweepKind> parse_sweep_kind(const std::string& s)
{
  if (s == "uts")
    return SweepKind::uts;
  if (s == "hap_power")
    return SweepKind::hap_power;
  if (s == "backhaul_dist")
    return SweepKind::backhaul_dist;
  return std::nullopt;
}

inline std::string to_string(SweepKind k)
{
  switch (k) {
  case SweepKind::uts:
    return "uts";
  case SweepKind::hap_power:
    return "hap_power";
  case SweepKind::backhaul_dist:
    return "backhaul_dist";
  }
  return "?";
}

/// 20 points from 6 W to 600 W, evenly spaced in log P_H.
inline std::vector<double> default_hap_power_range()
{
  std::vector<double> v;
  for (int k = 0; k < 20; ++k)
    v.push_back(6.0 * std::pow(100.0, k / 19.0));
  return v;
}

inline std::vector<double> default_range(SweepKind k)
{
  if (k == SweepKind::uts)
    return {2, 3, 4, 5, 6};
  return default_hap_power_range();
}

struct SweepSpec {
  SweepKind kind = SweepKind::uts;
  std::vector<double> range;
  int repeats = 10;
  SystemConfig base;
  bool two_layer = false;
  int workers = 1;
  FpOptions fp;

  void validate() const
  {
    if (range.empty())
      throw std::invalid_argument("sweep range is empty");
    for (std::size_t i = 1; i < range.size(); ++i)
      if (!(range[i] > range[i - 1]))
        throw std::invalid_argument("sweep range must be strictly increasing");
    if (repeats < 1)
      throw std::invalid_argument("repeats must be at least 1");
    if (kind == SweepKind::uts)
      for (double v : range)
        if (v < 1 || v != std::floor(v))
          throw std::invalid_argument("uts sweep values must be positive integers");
  }

  /// Configuration for one (sweep value, repeat) cell. Seeds count up from base.seed.
  SystemConfig config_for(double value, int repeat) const
  {
    SystemConfig c = kind == SweepKind::uts ? base.with_uts(static_cast<int>(value)) : base;
    if (kind != SweepKind::uts)
      c.p_h = value;
    c.seed = base.seed + static_cast<std::uint64_t>(repeat);
    c.validate();
    return c;
  }
};

struct SweepRow {
  double sweep_value = 0;
  std::uint64_t seed = 0;
  double delivered_rate = 0;
  double r_h_sum = 0;
  double r_t_sum = 0;
  double c_th = 0;
  double c_ts = 0;
  std::size_t m_h = 0;
  std::size_t m_s = 0;
  double best_p_h_ka = 0;
  int iterations = 0;
};

inline SweepRow summarize(double value, std::uint64_t seed, const SolveReport& r)
{
  return {value,        seed,           r.delivered_sum_rate, r.rates.r_h_sum, r.rates.r_t_sum,
          r.rates.c_th, r.rates.c_ts,   r.assign.m_h(),       r.assign.m_s(),  r.best_p_h_ka,
          r.iterations()};
}

/// One row per (value, repeat), ordered by value then repeat regardless of workers.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec)
{
  spec.validate();
  const std::size_t per = static_cast<std::size_t>(spec.repeats);
  std::vector<SweepRow> rows(spec.range.size() * per);
  parallel_for(rows.size(), spec.workers, [&](std::size_t i) {
    const double value = spec.range[i / per];
    const auto cfg = spec.config_for(value, static_cast<int>(i % per));
    const Network net(cfg);
    const auto rep = spec.two_layer ? solve_two_layer(net, spec.fp) : solve(net, spec.fp);
    rows[i] = summarize(value, cfg.seed, rep);
  });
  return rows;
}

inline constexpr const char* sweep_csv_header =
    "sweep_value,seed,delivered_rate,r_h_sum,r_t_sum,c_th,c_ts,m_h,m_s,best_p_h_ka,iterations";

inline constexpr const char* sweep_mean_csv_header =
    "sweep_value,count,delivered_rate,r_h_sum,r_t_sum,c_th,c_ts,m_h,m_s,best_p_h_ka,iterations";

inline std::string sweep_csv(const std::vector<SweepRow>& rows)
{
  using text::num;
  std::string s = std::string(sweep_csv_header) + "\n";
  for (const auto& r : rows)
    s += num(r.sweep_value) + "," + std::to_string(r.seed) + "," + num(r.delivered_rate) + "," +
         num(r.r_h_sum) + "," + num(r.r_t_sum) + "," + num(r.c_th) + "," + num(r.c_ts) + "," +
         std::to_string(r.m_h) + "," + std::to_string(r.m_s) + "," + num(r.best_p_h_ka) + "," +
         std::to_string(r.iterations) + "\n";
  return s;
}

struct SweepMean {
  double sweep_value = 0;
  std::size_t count = 0;
  double delivered_rate = 0, r_h_sum = 0, r_t_sum = 0, c_th = 0, c_ts = 0;
  double m_h = 0, m_s = 0, best_p_h_ka = 0, iterations = 0;
};

/// Arithmetic mean of every numeric column, grouped by sweep value in first-seen order.
inline std::vector<SweepMean> sweep_means(const std::vector<SweepRow>& rows)
{
  std::vector<SweepMean> out;
  for (const auto& r : rows) {
    if (out.empty() || out.back().sweep_value != r.sweep_value)
      out.push_back({r.sweep_value});
    auto& m = out.back();
    ++m.count;
    m.delivered_rate += r.delivered_rate;
    m.r_h_sum += r.r_h_sum;
    m.r_t_sum += r.r_t_sum;
    m.c_th += r.c_th;
    m.c_ts += r.c_ts;
    m.m_h += static_cast<double>(r.m_h);
    m.m_s += static_cast<double>(r.m_s);
    m.best_p_h_ka += r.best_p_h_ka;
    m.iterations += r.iterations;
  }
  for (auto& m : out) {
    const double n = static_cast<double>(m.count);
    for (double* f : {&m.delivered_rate, &m.r_h_sum, &m.r_t_sum, &m.c_th, &m.c_ts, &m.m_h, &m.m_s,
                      &m.best_p_h_ka, &m.iterations})
      *f /= n;
  }
  return out;
}

inline std::string sweep_mean_csv(const std::vector<SweepMean>& means)
{
  using text::num;
  std::string s = std::string(sweep_mean_csv_header) + "\n";
  for (const auto& m : means)
    s += num(m.sweep_value) + "," + std::to_string(m.count) + "," + num(m.delivered_rate) + "," +
         num(m.r_h_sum) + "," + num(m.r_t_sum) + "," + num(m.c_th) + "," + num(m.c_ts) + "," +
         num(m.m_h) + "," + num(m.m_s) + "," + num(m.best_p_h_ka) + "," + num(m.iterations) + "\n";
  return s;
}

/// Raised when an output artifact cannot be written.
class OutputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline void write_text_file(const std::filesystem::path& path, const std::string& body)
{
  std::error_code ec;
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f)
    throw OutputError("cannot open '" + path.string() + "' for writing");
  f << body;
  f.flush();
  if (!f)
    throw OutputError("failed writing '" + path.string() + "'");
}

} // namespace hapnet
