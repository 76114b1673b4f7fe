#pragma once

#include "hapnet/config.hpp"
#include "hapnet/topology.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace hapnet {

/// Immutable pairing of parameters and geometry shared by every solver stage.
struct Network {
  SystemConfig config;
  Topology topo;

  Network(SystemConfig cfg, Topology t) : config(std::move(cfg)), topo(std::move(t))
  {
    config.validate();
    if (topo.num_uts() != static_cast<std::size_t>(config.m_uts))
      throw std::invalid_argument("Network: topology UT count differs from m_uts");
    for (std::size_t m = 0; m < topo.num_uts(); ++m)
      if (topo.users_of(m) != static_cast<std::size_t>(config.users_per_ut[m]))
        throw std::invalid_argument("Network: topology user counts differ from users_per_ut");
  }

  explicit Network(const SystemConfig& cfg) : Network(cfg, generate(cfg)) {}

  std::size_t num_uts() const { return topo.num_uts(); }
  std::size_t num_users() const { return topo.num_users(); }
  double inv_j() const { return 1.0 / config.j_channels; }
};

/// C-band bandwidths and powers plus the per-backhaul HAP Ka-band power.
/// Per-user vectors use the flat user index of Topology.
struct Allocation {
  double b_h = 0;
  std::vector<double> b_t;
  std::vector<double> p_h_users;
  std::vector<double> p_t_users;
  double p_h_ka = 0;

  static Allocation zeros(const Network& net)
  {
    Allocation a;
    a.b_t.assign(net.num_uts(), 0.0);
    a.p_h_users.assign(net.num_users(), 0.0);
    a.p_t_users.assign(net.num_users(), 0.0);
    return a;
  }
};

/// Which UTs take their Ka-band backhaul from the HAP and which from the satellite.
struct BackhaulAssignment {
  std::vector<std::size_t> to_hap;
  std::vector<std::size_t> to_sat;

  std::size_t m_h() const { return to_hap.size(); }
  std::size_t m_s() const { return to_sat.size(); }

  static BackhaulAssignment all_satellite(std::size_t num_uts)
  {
    BackhaulAssignment a;
    a.to_sat.resize(num_uts);
    std::iota(a.to_sat.begin(), a.to_sat.end(), std::size_t{0});
    return a;
  }

  static BackhaulAssignment all_hap(std::size_t num_uts)
  {
    BackhaulAssignment a;
    a.to_hap.resize(num_uts);
    std::iota(a.to_hap.begin(), a.to_hap.end(), std::size_t{0});
    return a;
  }

  /// Bit m set means UT m uses the HAP.
  static BackhaulAssignment from_mask(std::size_t num_uts, unsigned long long hap_mask)
  {
    BackhaulAssignment a;
    for (std::size_t m = 0; m < num_uts; ++m)
      ((hap_mask >> m) & 1ULL ? a.to_hap : a.to_sat).push_back(m);
    return a;
  }

  bool is_partition_of(std::size_t num_uts) const
  {
    std::vector<int> seen(num_uts, 0);
    for (auto m : to_hap)
      if (m >= num_uts || seen[m]++)
        return false;
    for (auto m : to_sat)
      if (m >= num_uts || seen[m]++)
        return false;
    return std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
  }
};

struct RateBreakdown {
  std::vector<double> r_h; // per flat user, bit/s
  std::vector<double> r_t;
  double r_h_sum = 0;
  double r_t_sum = 0;
  double c_th = 0;
  double c_ts = 0;

  double access_sum() const { return r_h_sum + r_t_sum; }
};

// ---------------------------------------------------------------------------
// Interference and SINR

namespace detail {

inline std::vector<double> ut_power_sums(const Network& net, const Allocation& a)
{
  std::vector<double> s(net.num_uts(), 0.0);
  for (std::size_t u = 0; u < net.num_users(); ++u)
    s[net.topo.ut_of(u)] += a.p_t_users[u];
  return s;
}

// Interference to flat user u from UTs other than its own, given per-UT power sums.
inline double other_ut_interference(const Network& net, const std::vector<double>& ut_sum,
                                    std::size_t u)
{
  const auto own = net.topo.ut_of(u);
  double acc = 0;
  for (std::size_t m = 0; m < net.num_uts(); ++m)
    if (m != own)
      acc += ut_sum[m] * net.topo.g2_user_ut(u, m);
  return acc * net.inv_j();
}

inline double i_hap_user(const Network& net, const Allocation& a,
                         const std::vector<double>& ut_sum, std::size_t u)
{
  const auto own = net.topo.ut_of(u);
  const double same_ut = (ut_sum[own] - a.p_t_users[u]) * net.topo.g2_user_own(u) * net.inv_j();
  return same_ut + other_ut_interference(net, ut_sum, u);
}

inline double i_ut_user(const Network& net, const Allocation& a, double hap_sum,
                        const std::vector<double>& ut_sum, std::size_t u)
{
  (void)a;
  return hap_sum * net.topo.g2_user_hap(u) * net.inv_j() + other_ut_interference(net, ut_sum, u);
}

} // namespace detail

/// I^H_{m,n}: co-channel power from UT transmissions seen on the HAP-user link.
inline double interf_hap_user(const Network& net, const Allocation& a, std::size_t m,
                              std::size_t n)
{
  return detail::i_hap_user(net, a, detail::ut_power_sums(net, a), net.topo.index(m, n));
}

/// I^T_{m,n}: co-channel power from the HAP and from other UTs on the UT-user link.
inline double interf_ut_user(const Network& net, const Allocation& a, std::size_t m,
                             std::size_t n)
{
  const double hap_sum = std::accumulate(a.p_h_users.begin(), a.p_h_users.end(), 0.0);
  return detail::i_ut_user(net, a, hap_sum, detail::ut_power_sums(net, a), net.topo.index(m, n));
}

/// Interference on both access links of every user, computed in O(users x UTs).
struct InterferenceField {
  std::vector<double> i_h;
  std::vector<double> i_t;
};

inline InterferenceField interference_field(const Network& net, const Allocation& a)
{
  const auto ut_sum = detail::ut_power_sums(net, a);
  const double hap_sum = std::accumulate(a.p_h_users.begin(), a.p_h_users.end(), 0.0);
  InterferenceField f;
  f.i_h.resize(net.num_users());
  f.i_t.resize(net.num_users());
  for (std::size_t u = 0; u < net.num_users(); ++u) {
    f.i_h[u] = detail::i_hap_user(net, a, ut_sum, u);
    f.i_t[u] = detail::i_ut_user(net, a, hap_sum, ut_sum, u);
  }
  return f;
}

struct SinrField {
  std::vector<double> hap; // P^H |h_H|^2 / (sigma_c^2 + I^H)
  std::vector<double> ut;  // P^T |h_T|^2 / (sigma_c^2 + I^T)
  InterferenceField interference;
};

inline SinrField sinr_field(const Network& net, const Allocation& a)
{
  SinrField s;
  s.interference = interference_field(net, a);
  const double noise = net.config.noise_c();
  s.hap.resize(net.num_users());
  s.ut.resize(net.num_users());
  for (std::size_t u = 0; u < net.num_users(); ++u) {
    s.hap[u] = a.p_h_users[u] * net.topo.g2_user_hap(u) / (noise + s.interference.i_h[u]);
    s.ut[u] = a.p_t_users[u] * net.topo.g2_user_own(u) / (noise + s.interference.i_t[u]);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Access rates

/// R^H_{m,n}; the HAP share B_H is split evenly across all users.
inline double rate_hap_user(const Network& net, const Allocation& a, std::size_t m, std::size_t n)
{
  const auto u = net.topo.index(m, n);
  const double s = a.p_h_users[u] * net.topo.g2_user_hap(u);
  if (a.b_h <= 0.0 || s <= 0.0)
    return 0.0;
  const double sinr = s / (net.config.noise_c() + interf_hap_user(net, a, m, n));
  return a.b_h / net.config.total_users() * std::log2(1.0 + sinr);
}

/// R^T_{m,n}; UT m's share B^T_m is split evenly across its users.
inline double rate_ut_user(const Network& net, const Allocation& a, std::size_t m, std::size_t n)
{
  const auto u = net.topo.index(m, n);
  const double s = a.p_t_users[u] * net.topo.g2_user_own(u);
  if (a.b_t[m] <= 0.0 || s <= 0.0)
    return 0.0;
  const double sinr = s / (net.config.noise_c() + interf_ut_user(net, a, m, n));
  return a.b_t[m] / static_cast<double>(net.topo.users_of(m)) * std::log2(1.0 + sinr);
}

// ---------------------------------------------------------------------------
// Ka-band backhaul

/// Capacity of one HAP-fed backhaul at power p_h_ka.
inline double hap_backhaul_link(const Network& net, std::size_t m, double p_h_ka)
{
  const auto& c = net.config;
  const double snr = p_h_ka * c.g_h_lin * net.topo.g2_ut_hap(m) / c.noise_ka();
  return c.b_ka / c.m_uts * std::log2(1.0 + snr);
}

/// Capacity of one satellite-fed backhaul when m_s UTs share the satellite power.
inline double sat_backhaul_link(const Network& net, std::size_t m, std::size_t m_s)
{
  if (m_s == 0)
    throw std::invalid_argument("sat_backhaul_link: m_s must be positive");
  const auto& c = net.config;
  const double snr =
      c.p_sat * c.g_s_lin * net.topo.g2_ut_sat(m) / (c.noise_sat() * static_cast<double>(m_s));
  return c.b_ka / c.m_uts * std::log2(1.0 + snr);
}

/// C_TH.
inline double cap_hap_backhaul(const Network& net, const BackhaulAssignment& assign,
                               double p_h_ka)
{
  if (p_h_ka < 0.0)
    throw std::invalid_argument("cap_hap_backhaul: negative power");
  double acc = 0;
  for (auto m : assign.to_hap)
    acc += hap_backhaul_link(net, m, p_h_ka);
  return acc;
}

/// C_TS; the satellite power is shared by the M_S connected UTs.
inline double cap_leo_backhaul(const Network& net, const BackhaulAssignment& assign)
{
  double acc = 0;
  for (auto m : assign.to_sat)
    acc += sat_backhaul_link(net, m, assign.m_s());
  return acc;
}

inline RateBreakdown evaluate(const Network& net, const Allocation& a,
                              const BackhaulAssignment& assign)
{
  const auto sinr = sinr_field(net, a);
  RateBreakdown r;
  r.r_h.assign(net.num_users(), 0.0);
  r.r_t.assign(net.num_users(), 0.0);
  const double total = net.config.total_users();
  for (std::size_t u = 0; u < net.num_users(); ++u) {
    const auto m = net.topo.ut_of(u);
    if (a.b_h > 0.0 && sinr.hap[u] > 0.0)
      r.r_h[u] = a.b_h / total * std::log2(1.0 + sinr.hap[u]);
    if (a.b_t[m] > 0.0 && sinr.ut[u] > 0.0)
      r.r_t[u] = a.b_t[m] / static_cast<double>(net.topo.users_of(m)) * std::log2(1.0 + sinr.ut[u]);
  }
  r.r_h_sum = std::accumulate(r.r_h.begin(), r.r_h.end(), 0.0);
  r.r_t_sum = std::accumulate(r.r_t.begin(), r.r_t.end(), 0.0);
  r.c_th = cap_hap_backhaul(net, assign, a.p_h_ka);
  r.c_ts = cap_leo_backhaul(net, assign);
  return r;
}

/// Relative violations of the three budgets. The HAP figure is one-sided
/// (only overspending counts) unless `hap_exact` is set.
struct BudgetResiduals {
  double bandwidth = 0;
  double ut_power = 0;
  double hap_power = 0;

  double max() const { return std::max({bandwidth, ut_power, hap_power}); }
};

inline BudgetResiduals budget_residuals(const Network& net, const Allocation& a,
                                        std::size_t m_h, bool hap_exact)
{
  const auto& c = net.config;
  BudgetResiduals r;
  const double bw = a.b_h + std::accumulate(a.b_t.begin(), a.b_t.end(), 0.0);
  r.bandwidth = std::abs(bw - c.b_c) / c.b_c;
  const auto ut_sum = detail::ut_power_sums(net, a);
  for (double s : ut_sum)
    r.ut_power = std::max(r.ut_power, std::abs(s - c.p_t) / c.p_t);
  const double hap_c = std::accumulate(a.p_h_users.begin(), a.p_h_users.end(), 0.0);
  const double spent = hap_c + a.p_h_ka * static_cast<double>(m_h);
  const double excess = hap_exact ? std::abs(spent - c.p_h) : std::max(0.0, spent - c.p_h);
  r.hap_power = excess / c.p_h;
  return r;
}

} // namespace hapnet
